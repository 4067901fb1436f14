//! Bounded breadth-first exploration of the flip graph.
//!
//! Every node records its arcs in the coordinates of the root triangulation,
//! so two nodes reached along different flip sequences are recognised as the
//! same vertex of the flip graph exactly when their arc sets agree.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::flip::{flip, is_flippable, FlipMove};
use crate::normal::{ArcPath, NormalArc};
use crate::surface::{require_valid, ArcId, Triangulation};

#[derive(Clone, Debug)]
pub struct BallNode {
    pub triangulation: Triangulation,
    /// `arcs[id]` is arc `id` of `triangulation`, in root coordinates.
    pub arcs: Vec<NormalArc>,
    pub depth: usize,
    /// Every flip-graph neighbour of this node is in the ball.
    pub closed: bool,
    via: Option<(usize, FlipMove)>,
}

impl BallNode {
    pub fn parent(&self) -> Option<usize> {
        self.via.as_ref().map(|(p, _)| *p)
    }

    pub fn contains(&self, a: &NormalArc) -> bool {
        self.arcs.contains(a)
    }
}

/// An edge of the flip graph: flipping `arc` of node `from` gives node `to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BallEdge {
    pub from: usize,
    pub to: usize,
    pub arc: ArcId,
}

#[derive(Clone, Debug)]
pub struct FlipBall {
    root: Triangulation,
    radius: usize,
    nodes: Vec<BallNode>,
    edges: Vec<BallEdge>,
    index: HashMap<Vec<ArcPath>, usize>,
    truncation: Option<String>,
}

fn key_of(arcs: &[NormalArc]) -> Vec<ArcPath> {
    let mut k: Vec<ArcPath> = arcs.iter().map(|a| a.path().clone()).collect();
    k.sort();
    k
}

/// All triangulations within `radius` flips of `t`, capped at `max_nodes`.
pub fn flip_graph_ball(
    t: &Triangulation,
    radius: usize,
    max_nodes: Option<usize>,
) -> Result<FlipBall> {
    require_valid(t)?;
    let arcs = (0..t.num_arcs())
        .map(|e| NormalArc::edge(t, e))
        .collect::<Result<Vec<_>>>()?;
    let mut ball = FlipBall {
        root: t.clone(),
        radius,
        nodes: Vec::new(),
        edges: Vec::new(),
        index: HashMap::new(),
        truncation: None,
    };
    ball.index.insert(key_of(&arcs), 0);
    ball.nodes.push(BallNode {
        triangulation: t.clone(),
        arcs,
        depth: 0,
        closed: false,
        via: None,
    });
    let cap = max_nodes.unwrap_or(usize::MAX);
    let mut queue = VecDeque::from([0usize]);
    while let Some(n) = queue.pop_front() {
        let depth = ball.nodes[n].depth;
        let mut closed = true;
        for e in 0..ball.nodes[n].triangulation.num_arcs() {
            if !is_flippable(&ball.nodes[n].triangulation, e)? {
                continue;
            }
            let m = flip(&ball.nodes[n].triangulation, e)?;
            let fresh = ball.to_root(n, m.replacement.path().clone())?;
            let mut arcs = ball.nodes[n].arcs.clone();
            arcs[e] = NormalArc::from_path(&ball.root, fresh);
            let key = key_of(&arcs);
            let to = match ball.index.get(&key) {
                Some(&to) => to,
                None if depth < radius && ball.nodes.len() < cap => {
                    let to = ball.nodes.len();
                    ball.index.insert(key, to);
                    ball.nodes.push(BallNode {
                        triangulation: m.target.clone(),
                        arcs,
                        depth: depth + 1,
                        closed: false,
                        via: Some((n, m)),
                    });
                    queue.push_back(to);
                    to
                }
                None => {
                    if depth < radius && ball.truncation.is_none() {
                        ball.truncation = Some(format!(
                            "stopped at {cap} nodes before exhausting radius {radius}"
                        ));
                    }
                    closed = false;
                    continue;
                }
            };
            let seen = ball
                .edges
                .iter()
                .any(|x| (x.from, x.to) == (n, to) || (x.from, x.to) == (to, n));
            if !seen {
                ball.edges.push(BallEdge {
                    from: n,
                    to,
                    arc: e,
                });
            }
        }
        ball.nodes[n].closed = closed;
    }
    Ok(ball)
}

impl FlipBall {
    /// Carry a path in node `n`'s coordinates back to the root.
    fn to_root(&self, mut n: usize, mut path: ArcPath) -> Result<ArcPath> {
        while let Some((parent, m)) = &self.nodes[n].via {
            path = match path {
                ArcPath::Edge(e) if e == m.arc => m.replacement.path().clone(),
                p => m
                    .quad()
                    .reversed()
                    .transport_path(&m.target, &m.source, &p)?,
            };
            n = *parent;
        }
        Ok(path)
    }

    /// Carry an arc in root coordinates forward into node `n`'s coordinates.
    pub fn to_node(&self, n: usize, a: &NormalArc) -> Result<NormalArc> {
        if n >= self.nodes.len() {
            return Err(Error::Rejected(format!("no node {n} in ball")));
        }
        if !a.is_based_on(&self.root) {
            return Err(Error::DifferentBases);
        }
        let mut path = Vec::new();
        let mut x = n;
        while let Some((parent, m)) = &self.nodes[x].via {
            path.push(m);
            x = *parent;
        }
        Ok(path.iter().rev().fold(a.clone(), |acc, m| m.carry(&acc)))
    }

    pub fn root(&self) -> &Triangulation {
        &self.root
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn nodes(&self) -> &[BallNode] {
        &self.nodes
    }

    pub fn edges(&self) -> &[BallEdge] {
        &self.edges
    }

    /// The whole flip graph fits inside the ball.
    pub fn is_complete(&self) -> bool {
        self.truncation.is_none() && self.nodes.iter().all(|n| n.closed)
    }

    pub fn truncation(&self) -> Option<&str> {
        self.truncation.as_deref()
    }

    pub fn find(&self, arcs: &[NormalArc]) -> Option<usize> {
        self.index.get(&key_of(arcs)).copied()
    }

    /// Distinct arcs over all nodes, sorted.
    pub fn arcs(&self) -> Vec<NormalArc> {
        let mut v: Vec<NormalArc> = self
            .nodes
            .iter()
            .flat_map(|n| n.arcs.iter().cloned())
            .collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn neighbours(&self, n: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|e| match (e.from == n, e.to == n) {
                (true, _) => Some(e.to),
                (_, true) => Some(e.from),
                _ => None,
            })
            .collect();
        v.sort();
        v
    }

    /// A shortest flip sequence inside the ball from node `from` to node `to`.
    /// The moves start at `from`'s triangulation; the last target carries the
    /// same arcs as node `to`.
    pub fn connect_chain(&self, from: usize, to: usize) -> Result<Vec<FlipMove>> {
        for &x in &[from, to] {
            if x >= self.nodes.len() {
                return Err(Error::Rejected(format!("no node {x} in ball")));
            }
        }
        let mut prev = vec![usize::MAX; self.nodes.len()];
        prev[from] = from;
        let mut queue = VecDeque::from([from]);
        while let Some(n) = queue.pop_front() {
            for m in self.neighbours(n) {
                if prev[m] == usize::MAX {
                    prev[m] = n;
                    queue.push_back(m);
                }
            }
        }
        if prev[to] == usize::MAX {
            return Err(Error::NotConnected(from, to));
        }
        let mut route = vec![to];
        while *route.last().unwrap() != from {
            route.push(prev[*route.last().unwrap()]);
        }
        route.reverse();

        let mut t = self.nodes[from].triangulation.clone();
        let mut arcs = self.nodes[from].arcs.clone();
        let mut moves = Vec::new();
        for w in route.windows(2) {
            let gone = self.nodes[w[0]]
                .arcs
                .iter()
                .find(|a| !self.nodes[w[1]].contains(a))
                .expect("adjacent nodes differ in one arc");
            let e = arcs
                .iter()
                .position(|a| a == gone)
                .expect("chain tracks arcs");
            let m = flip(&t, e)?;
            arcs[e] = self.nodes[w[1]]
                .arcs
                .iter()
                .find(|a| !self.nodes[w[0]].contains(a))
                .expect("adjacent nodes differ in one arc")
                .clone();
            t = m.target.clone();
            moves.push(m);
        }
        Ok(moves)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::build_surface;

    #[test]
    fn one_holed_klein_bottle_flip_graph_is_finite() {
        let t = build_surface(1, 2, false).unwrap();
        let b = flip_graph_ball(&t, 10, None).unwrap();
        assert!(b.is_complete());
        assert_eq!(b.arcs().len(), 8);
        assert!(b.nodes().iter().all(|n| n.closed));
    }

    #[test]
    fn genus_two_one_boundary_grows_linearly() {
        let t = build_surface(2, 1, false).unwrap();
        let counts: Vec<usize> = (0..6)
            .map(|r| flip_graph_ball(&t, r, None).unwrap().arcs().len())
            .collect();
        assert_eq!(counts, [3, 4, 6, 10, 14, 18]);
    }

    #[test]
    fn node_cap_truncates() {
        let t = build_surface(2, 2, false).unwrap();
        let b = flip_graph_ball(&t, 6, Some(5)).unwrap();
        assert!(b.nodes().len() <= 5);
        assert!(b.truncation().is_some());
        assert!(!b.is_complete());
    }
}
