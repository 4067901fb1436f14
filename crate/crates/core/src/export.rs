//! JSON and DOT output for balls and complex windows.
//!
//! JSON documents are pretty-printed with fields in a fixed order, so
//! reading a document and writing it back gives identical bytes.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::ball::FlipBall;
use crate::complex::{ComplexWindow, Vertex};
use crate::error::{Error, Result};
use crate::normal::{NormalArc, NormalCoordinates};
use crate::surface::{ArcId, Triangulation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeExport {
    pub depth: usize,
    pub closed: bool,
    /// Indices into the document's arc table.
    pub arcs: Vec<usize>,
    pub triangulation: Triangulation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeExport {
    pub from: usize,
    pub to: usize,
    pub arc: ArcId,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallExport {
    pub root: Triangulation,
    pub radius: usize,
    pub complete: bool,
    pub truncation: Option<String>,
    /// Arc table, in root coordinates.
    pub arcs: Vec<NormalCoordinates>,
    pub nodes: Vec<NodeExport>,
    pub edges: Vec<EdgeExport>,
}

impl BallExport {
    pub fn new(ball: &FlipBall) -> Self {
        let arcs = ball.arcs();
        let root = ball.root();
        BallExport {
            root: root.clone(),
            radius: ball.radius(),
            complete: ball.is_complete(),
            truncation: ball.truncation().map(str::to_string),
            arcs: arcs.iter().map(|a| a.coordinates(root)).collect(),
            nodes: ball
                .nodes()
                .iter()
                .map(|n| NodeExport {
                    depth: n.depth,
                    closed: n.closed,
                    arcs: n
                        .arcs
                        .iter()
                        .map(|a| arcs.binary_search(a).expect("arc in table"))
                        .collect(),
                    triangulation: n.triangulation.clone(),
                })
                .collect(),
            edges: ball
                .edges()
                .iter()
                .map(|e| EdgeExport {
                    from: e.from,
                    to: e.to,
                    arc: e.arc,
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph ball {\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let _ = writeln!(s, "  n{i} [label=\"{i}\\ndepth {}\"];", n.depth);
        }
        for e in &self.edges {
            let _ = writeln!(s, "  n{} -- n{} [label=\"e{}\"];", e.from, e.to, e.arc);
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexExport {
    pub label: String,
    pub coordinates: Option<NormalCoordinates>,
    pub trusted: bool,
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexExport {
    pub base: Option<Triangulation>,
    pub complete: bool,
    pub vertices: Vec<VertexExport>,
    pub facets: Vec<Vec<usize>>,
}

impl ComplexExport {
    pub fn new(w: &ComplexWindow) -> Self {
        ComplexExport {
            base: w.base().cloned(),
            complete: w.is_complete(),
            vertices: w
                .vertices()
                .iter()
                .enumerate()
                .map(|(i, v)| VertexExport {
                    label: v.label.clone(),
                    coordinates: match (&v.arc, w.base()) {
                        (Some(a), Some(t)) => Some(a.coordinates(t)),
                        _ => None,
                    },
                    trusted: v.trusted,
                    degree: w.degree(i),
                })
                .collect(),
            facets: w.facets().to_vec(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Rebuild the window; coordinates are re-validated against the base.
    pub fn to_window(&self) -> Result<ComplexWindow> {
        let vertices = self
            .vertices
            .iter()
            .map(|v| {
                let arc = match (&v.coordinates, &self.base) {
                    (Some(c), Some(t)) => Some(NormalArc::from_coordinates(t, c)?),
                    (Some(_), None) => {
                        return Err(Error::Rejected(format!(
                            "vertex {} has coordinates but the window has no base",
                            v.label
                        )))
                    }
                    _ => None,
                };
                Ok(Vertex {
                    label: v.label.clone(),
                    arc,
                    trusted: v.trusted,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        ComplexWindow::new(
            vertices,
            self.facets.clone(),
            self.complete,
            self.base.clone(),
        )
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph complex {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let style = if v.trusted { "" } else { ", style=dashed" };
            let _ = writeln!(
                s,
                "  v{i} [label=\"{}\\ndeg {}\"{style}];",
                v.label.replace('"', "'"),
                v.degree
            );
        }
        let mut edges = std::collections::BTreeSet::new();
        for f in &self.facets {
            for (i, &a) in f.iter().enumerate() {
                for &b in &f[i + 1..] {
                    edges.insert((a.min(b), a.max(b)));
                }
            }
        }
        for (a, b) in edges {
            let _ = writeln!(s, "  v{a} -- v{b};");
        }
        s.push_str("}\n");
        s
    }
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
