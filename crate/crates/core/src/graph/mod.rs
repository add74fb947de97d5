//! Labeled directed multigraph with a vertex property map.
//!
//! Graphs are built by a single writer and then frozen; every walk operation
//! takes a frozen graph by shared reference.

mod builders;
mod io;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use builders::{
    build_double_slit, build_fixture_graph, build_lattice, build_line, DoubleSlit, DOWN, LEFT, RIGHT,
    UP,
};
pub use io::{graph_from_json, graph_to_json, load_graph, save_graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl From<u32> for VertexId {
    fn from(v: u32) -> Self {
        VertexId(v)
    }
}

/// Interned edge label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LabelId(u32);

/// Direction of edge traversal relative to the current vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Out,
    In,
}

impl Direction {
    pub fn reversed(self) -> Direction {
        match self {
            Direction::Out => Direction::In,
            Direction::In => Direction::Out,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub out: VertexId,
    pub label: String,
    pub target: VertexId,
}

/// Scalar property value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PropertyValue {
    Bool(bool),
    Int(i64),
    Float(f64),
    Text(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct AdjEntry {
    label: LabelId,
    other: usize,
}

#[derive(Debug, Clone, Default)]
pub struct PropertyGraph {
    vertices: Vec<VertexId>,
    index: HashMap<VertexId, usize>,
    labels: Vec<String>,
    label_index: HashMap<String, LabelId>,
    edges: Vec<(usize, LabelId, usize)>,
    out_adj: Vec<Vec<AdjEntry>>,
    in_adj: Vec<Vec<AdjEntry>>,
    properties: BTreeMap<(VertexId, String), PropertyValue>,
    frozen: bool,
}

impl PartialEq for PropertyGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
            && self.edges().eq(other.edges())
            && self.properties == other.properties
    }
}

impl PropertyGraph {
    pub fn new() -> Self {
        PropertyGraph::default()
    }

    fn check_mutable(&self) -> Result<()> {
        if self.frozen {
            Err(Error::Frozen)
        } else {
            Ok(())
        }
    }

    /// Adds a vertex; re-adding an existing id is a no-op.
    pub fn add_vertex(&mut self, id: impl Into<VertexId>) -> Result<()> {
        self.check_mutable()?;
        let id = id.into();
        if self.index.contains_key(&id) {
            return Ok(());
        }
        // Keep `vertices` sorted so the vertex order is canonical.
        let pos = self.vertices.partition_point(|&v| v < id);
        if pos == self.vertices.len() {
            self.index.insert(id, pos);
            self.vertices.push(id);
            self.out_adj.push(Vec::new());
            self.in_adj.push(Vec::new());
        } else {
            self.vertices.insert(pos, id);
            self.out_adj.insert(pos, Vec::new());
            self.in_adj.insert(pos, Vec::new());
            self.reindex();
        }
        Ok(())
    }

    fn reindex(&mut self) {
        let mut remap = vec![0usize; self.vertices.len()];
        let old = std::mem::take(&mut self.index);
        for (i, &v) in self.vertices.iter().enumerate() {
            self.index.insert(v, i);
            if let Some(&o) = old.get(&v) {
                remap[o] = i;
            }
        }
        // The freshly inserted vertex has no edges yet; only old indices move.
        for edge in &mut self.edges {
            edge.0 = remap[edge.0];
            edge.2 = remap[edge.2];
        }
        for adj in self.out_adj.iter_mut().chain(self.in_adj.iter_mut()) {
            for entry in adj.iter_mut() {
                entry.other = remap[entry.other];
            }
        }
    }

    fn intern(&mut self, label: &str) -> LabelId {
        if let Some(&id) = self.label_index.get(label) {
            return id;
        }
        let id = LabelId(self.labels.len() as u32);
        self.labels.push(label.to_string());
        self.label_index.insert(label.to_string(), id);
        id
    }

    /// Appends a directed edge `out --label--> target`.
    pub fn add_edge(
        &mut self,
        out: impl Into<VertexId>,
        label: &str,
        target: impl Into<VertexId>,
    ) -> Result<()> {
        self.check_mutable()?;
        let (out, target) = (out.into(), target.into());
        let o = self.vertex_index(out)?;
        let t = self.vertex_index(target)?;
        let label = self.intern(label);
        self.edges.push((o, label, t));
        self.out_adj[o].push(AdjEntry { label, other: t });
        self.in_adj[t].push(AdjEntry { label, other: o });
        Ok(())
    }

    pub fn set_property(
        &mut self,
        vertex: impl Into<VertexId>,
        key: &str,
        value: PropertyValue,
    ) -> Result<()> {
        self.check_mutable()?;
        let vertex = vertex.into();
        self.vertex_index(vertex)?;
        self.properties.insert((vertex, key.to_string()), value);
        Ok(())
    }

    pub fn property(&self, vertex: VertexId, key: &str) -> Option<&PropertyValue> {
        self.properties.get(&(vertex, key.to_string()))
    }

    pub fn properties(&self) -> impl Iterator<Item = (VertexId, &str, &PropertyValue)> {
        self.properties.iter().map(|((v, k), val)| (*v, k.as_str(), val))
    }

    pub fn freeze(&mut self) {
        self.frozen = true;
    }

    pub fn frozen(mut self) -> Self {
        self.frozen = true;
        self
    }

    pub fn is_frozen(&self) -> bool {
        self.frozen
    }

    /// Vertex ids in ascending order.
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.index.contains_key(&v)
    }

    /// Position of `v` in [`PropertyGraph::vertices`].
    pub fn vertex_index(&self, v: VertexId) -> Result<usize> {
        self.index.get(&v).copied().ok_or(Error::UnknownVertex(v))
    }

    /// Edges in insertion order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().map(|&(o, l, t)| Edge {
            out: self.vertices[o],
            label: self.labels[l.0 as usize].clone(),
            target: self.vertices[t],
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_id(&self, label: &str) -> Option<LabelId> {
        self.label_index.get(label).copied()
    }

    pub fn label_name(&self, id: LabelId) -> &str {
        &self.labels[id.0 as usize]
    }

    /// Neighbor indices of the vertex at `index` along `label` in `dir`, in
    /// edge insertion order.
    pub fn neighbor_indices(
        &self,
        index: usize,
        label: LabelId,
        dir: Direction,
    ) -> impl Iterator<Item = usize> + '_ {
        let adj = match dir {
            Direction::Out => &self.out_adj[index],
            Direction::In => &self.in_adj[index],
        };
        adj.iter().filter(move |e| e.label == label).map(|e| e.other)
    }

    pub fn vertex_at(&self, index: usize) -> VertexId {
        self.vertices[index]
    }

    pub fn neighbors(&self, v: VertexId, label: &str, dir: Direction) -> Result<Vec<VertexId>> {
        let idx = self.vertex_index(v)?;
        Ok(match self.label_id(label) {
            Some(l) => self
                .neighbor_indices(idx, l, dir)
                .map(|i| self.vertices[i])
                .collect(),
            None => Vec::new(),
        })
    }

    pub fn out_neighbors(&self, v: VertexId, label: &str) -> Result<Vec<VertexId>> {
        self.neighbors(v, label, Direction::Out)
    }

    pub fn in_neighbors(&self, v: VertexId, label: &str) -> Result<Vec<VertexId>> {
        self.neighbors(v, label, Direction::In)
    }

    /// Out-degree plus in-degree.
    pub fn degree(&self, v: VertexId) -> Result<usize> {
        let i = self.vertex_index(v)?;
        Ok(self.out_adj[i].len() + self.in_adj[i].len())
    }

    pub fn out_degree(&self, v: VertexId) -> Result<usize> {
        Ok(self.out_adj[self.vertex_index(v)?].len())
    }
}
