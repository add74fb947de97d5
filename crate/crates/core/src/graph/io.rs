//! JSON persistence. Edge order in the file defines neighbor enumeration order.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{PropertyGraph, PropertyValue, VertexId};
use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    vertices: Vec<u32>,
    edges: Vec<EdgeRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    properties: Vec<PropertyRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeRecord {
    out: u32,
    label: String,
    #[serde(rename = "in")]
    target: u32,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PropertyRecord {
    element: u32,
    key: String,
    value: PropertyValue,
}

pub fn graph_to_json(g: &PropertyGraph) -> String {
    let file = GraphFile {
        vertices: g.vertices().iter().map(|v| v.0).collect(),
        edges: g
            .edges()
            .map(|e| EdgeRecord {
                out: e.out.0,
                label: e.label,
                target: e.target.0,
            })
            .collect(),
        properties: g
            .properties()
            .map(|(v, k, val)| PropertyRecord {
                element: v.0,
                key: k.to_string(),
                value: val.clone(),
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("graph serialization is infallible");
    s.push('\n');
    s
}

/// Parses a graph document; the result is frozen.
pub fn graph_from_json(text: &str) -> Result<PropertyGraph> {
    let file: GraphFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        context: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    if file.vertices.is_empty() {
        return Err(Error::Parse {
            context: "vertices".into(),
            message: "at least one vertex is required".into(),
        });
    }
    let mut g = PropertyGraph::new();
    for (i, &v) in file.vertices.iter().enumerate() {
        if g.contains(VertexId(v)) {
            return Err(Error::Parse {
                context: format!("vertices[{i}]"),
                message: format!("duplicate vertex {v}"),
            });
        }
        g.add_vertex(v)?;
    }
    for (i, e) in file.edges.iter().enumerate() {
        for (field, v) in [("out", e.out), ("in", e.target)] {
            if !g.contains(VertexId(v)) {
                return Err(Error::Parse {
                    context: format!("edges[{i}].{field}"),
                    message: format!("unknown vertex {v}"),
                });
            }
        }
        g.add_edge(e.out, &e.label, e.target)?;
    }
    for (i, p) in file.properties.into_iter().enumerate() {
        if !g.contains(VertexId(p.element)) {
            return Err(Error::Parse {
                context: format!("properties[{i}].element"),
                message: format!("unknown vertex {}", p.element),
            });
        }
        g.set_property(p.element, &p.key, p.value)?;
    }
    Ok(g.frozen())
}

pub fn load_graph(path: impl AsRef<Path>) -> Result<PropertyGraph> {
    let text = fs::read_to_string(path)?;
    graph_from_json(&text)
}

pub fn save_graph(g: &PropertyGraph, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, graph_to_json(g))?;
    Ok(())
}
