//! Topologies used by the experiments.

use super::{PropertyGraph, VertexId};
use crate::error::{Error, Result};

pub const LEFT: &str = "left";
pub const RIGHT: &str = "right";
pub const UP: &str = "up";
pub const DOWN: &str = "down";

/// Line graph with vertices `1..=n`. Each adjacent pair `(i, i+1)` gets a
/// `right` edge `i → i+1` and a `left` edge `i+1 → i`.
pub fn build_line(n: usize) -> Result<PropertyGraph> {
    if n < 2 {
        return Err(Error::Config(format!("line graph needs at least 2 vertices, got {n}")));
    }
    let n = u32::try_from(n).map_err(|_| Error::Config("line graph too large".into()))?;
    let mut g = PropertyGraph::new();
    for v in 1..=n {
        g.add_vertex(v)?;
    }
    for v in 1..n {
        g.add_edge(v, RIGHT, v + 1)?;
        g.add_edge(v + 1, LEFT, v)?;
    }
    Ok(g.frozen())
}

/// `w × h` lattice with `id = row·w + col`, row 0 at the bottom.
pub fn build_lattice(w: usize, h: usize) -> Result<PropertyGraph> {
    if w < 2 || h < 2 {
        return Err(Error::Config(format!("lattice needs w, h >= 2, got {w}x{h}")));
    }
    lattice_with(w, h, |_, _| true)
}

/// Double-slit screen geometry on a lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleSlit {
    pub width: usize,
    pub height: usize,
    /// The two screen rows (0-indexed from the bottom).
    pub slit_rows: (usize, usize),
    /// Column pairs of the two slits.
    pub slit_cols: [(usize, usize); 2],
}

impl Default for DoubleSlit {
    fn default() -> Self {
        DoubleSlit {
            width: 20,
            height: 20,
            slit_rows: (9, 10),
            slit_cols: [(6, 7), (12, 13)],
        }
    }
}

impl DoubleSlit {
    /// Same layout as the default, placed relative to the middle of a `w×h`
    /// lattice: screen rows `h/2−1, h/2`, slits at `w/2−4..w/2−3` and
    /// `w/2+2..w/2+3`.
    pub fn sized(width: usize, height: usize) -> Result<Self> {
        let (c, r) = (width / 2, height / 2);
        if c < 4 || r < 2 || c + 3 >= width {
            return Err(Error::Config(format!("double slit needs at least 8x4, got {width}x{height}")));
        }
        let layout = DoubleSlit {
            width,
            height,
            slit_rows: (r - 1, r),
            slit_cols: [(c - 4, c - 3), (c + 2, c + 3)],
        };
        layout.validate()?;
        Ok(layout)
    }

    pub fn validate(&self) -> Result<()> {
        let (w, h) = (self.width, self.height);
        if w < 2 || h < 2 {
            return Err(Error::Config(format!("lattice needs w, h >= 2, got {w}x{h}")));
        }
        for r in [self.slit_rows.0, self.slit_rows.1] {
            if r == 0 || r + 1 >= h {
                return Err(Error::Config(format!("slit row {r} is not strictly interior")));
            }
        }
        let cols = self.columns();
        if cols.iter().any(|&c| c >= w) {
            return Err(Error::Config(format!("slit columns {cols:?} outside lattice width {w}")));
        }
        let [a, b] = self.slit_cols;
        let first = [a.0, a.1];
        if [b.0, b.1].iter().any(|c| first.contains(c)) {
            return Err(Error::Config("slit column pairs overlap".into()));
        }
        Ok(())
    }

    fn columns(&self) -> [usize; 4] {
        let [a, b] = self.slit_cols;
        [a.0, a.1, b.0, b.1]
    }

    pub fn is_screen_row(&self, row: usize) -> bool {
        row == self.slit_rows.0 || row == self.slit_rows.1
    }

    /// True for the isolated screen vertices.
    pub fn is_wall(&self, row: usize, col: usize) -> bool {
        self.is_screen_row(row) && !self.columns().contains(&col)
    }

    pub fn vertex(&self, row: usize, col: usize) -> VertexId {
        VertexId((row * self.width + col) as u32)
    }
}

/// Lattice whose screen rows keep edges only at the slit columns. Wall vertices
/// are isolated: they have no incident edges at all.
pub fn build_double_slit(layout: &DoubleSlit) -> Result<PropertyGraph> {
    layout.validate()?;
    lattice_with(layout.width, layout.height, |r, c| !layout.is_wall(r, c))
}

fn lattice_with(w: usize, h: usize, open: impl Fn(usize, usize) -> bool) -> Result<PropertyGraph> {
    if w.checked_mul(h).is_none_or(|n| n > u32::MAX as usize) {
        return Err(Error::Config("lattice too large".into()));
    }
    let id = |r: usize, c: usize| (r * w + c) as u32;
    let mut g = PropertyGraph::new();
    for v in 0..(w * h) as u32 {
        g.add_vertex(v)?;
    }
    for r in 0..h {
        for c in 0..w {
            if !open(r, c) {
                continue;
            }
            let mut link = |label: &str, r2: usize, c2: usize| -> Result<()> {
                if open(r2, c2) {
                    g.add_edge(id(r, c), label, id(r2, c2))?;
                }
                Ok(())
            };
            if c > 0 {
                link(LEFT, r, c - 1)?;
            }
            if c + 1 < w {
                link(RIGHT, r, c + 1)?;
            }
            if r + 1 < h {
                link(UP, r + 1, c)?;
            }
            if r > 0 {
                link(DOWN, r - 1, c)?;
            }
        }
    }
    Ok(g.frozen())
}

/// Four-vertex/eight-edge toy graph: from `v0`, three `read` edges (two of
/// them parallel to `v3`), one `wrote` edge and three `liked` edges.
pub fn build_fixture_graph() -> PropertyGraph {
    let mut g = PropertyGraph::new();
    for v in 0..4u32 {
        g.add_vertex(v).expect("fresh graph");
    }
    let edges = [
        ("read", 1),
        ("read", 2),
        ("read", 3),
        ("read", 3),
        ("wrote", 1),
        ("liked", 1),
        ("liked", 2),
        ("liked", 3),
    ];
    for (label, target) in edges {
        g.add_edge(0u32, label, target as u32).expect("fixture vertices exist");
    }
    g.frozen()
}
