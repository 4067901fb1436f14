//! Finite windows of the arc complex and simplicial maps between them.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ball::{flip_graph_ball, FlipBall};
use crate::error::{Error, Result};
use crate::normal::NormalArc;
use crate::surface::{build_surface, Triangulation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub label: String,
    /// The arc, for windows built from a flip-graph ball.
    pub arc: Option<NormalArc>,
    /// Degree and link in the window equal those in the whole complex.
    pub trusted: bool,
}

/// A subcomplex given by its maximal simplices.
#[derive(Clone, Debug)]
pub struct ComplexWindow {
    vertices: Vec<Vertex>,
    facets: Vec<Vec<usize>>,
    complete: bool,
    base: Option<Triangulation>,
    model: Option<i64>,
    adjacency: Vec<BTreeSet<usize>>,
    incidence: Vec<Vec<usize>>,
}

impl ComplexWindow {
    /// `facets` are vertex index lists; they are sorted and deduplicated.
    pub fn new(
        vertices: Vec<Vertex>,
        facets: Vec<Vec<usize>>,
        complete: bool,
        base: Option<Triangulation>,
    ) -> Result<ComplexWindow> {
        let n = vertices.len();
        let mut fs: Vec<Vec<usize>> = facets
            .into_iter()
            .map(|mut f| {
                f.sort();
                f.dedup();
                f
            })
            .collect();
        fs.sort();
        fs.dedup();
        let mut adjacency = vec![BTreeSet::new(); n];
        let mut incidence = vec![Vec::new(); n];
        for (i, f) in fs.iter().enumerate() {
            for &v in f {
                if v >= n {
                    return Err(Error::Rejected(format!("facet names vertex {v} of {n}")));
                }
                incidence[v].push(i);
                adjacency[v].extend(f.iter().copied().filter(|&u| u != v));
            }
        }
        if let Some(v) = incidence.iter().position(|x| x.is_empty()) {
            return Err(Error::Rejected(format!(
                "vertex {} lies in no maximal simplex",
                vertices[v].label
            )));
        }
        Ok(ComplexWindow {
            vertices,
            facets: fs,
            complete,
            base,
            model: None,
            adjacency,
            incidence,
        })
    }

    pub fn from_ball(ball: &FlipBall) -> Result<ComplexWindow> {
        let arcs = ball.arcs();
        let index: HashMap<&NormalArc, usize> =
            arcs.iter().enumerate().map(|(i, a)| (a, i)).collect();
        let mut trusted = vec![true; arcs.len()];
        let facets: Vec<Vec<usize>> = ball
            .nodes()
            .iter()
            .map(|n| {
                n.arcs
                    .iter()
                    .map(|a| {
                        let i = index[a];
                        trusted[i] &= n.closed;
                        i
                    })
                    .collect()
            })
            .collect();
        let complete = ball.is_complete();
        let vertices = arcs
            .iter()
            .zip(trusted)
            .map(|(a, t)| Vertex {
                label: a.path().to_string(),
                arc: Some(a.clone()),
                trusted: t && ball.truncation().is_none(),
            })
            .collect();
        ComplexWindow::new(vertices, facets, complete, Some(ball.root().clone()))
    }

    pub(crate) fn with_model(mut self, k: i64) -> Self {
        self.model = Some(k);
        self
    }

    /// Half-width of an explicit (2,1) window, if this is one.
    pub fn model_window(&self) -> Option<i64> {
        self.model
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    /// The window is the whole complex.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn base(&self) -> Option<&Triangulation> {
        self.base.as_ref()
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.label == label)
    }

    pub fn arc_index(&self, a: &NormalArc) -> Option<usize> {
        self.vertices.iter().position(|v| v.arc.as_ref() == Some(a))
    }

    pub fn neighbours(&self, v: usize) -> &BTreeSet<usize> {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].contains(&v)
    }

    /// Maximal simplices containing `v`.
    pub fn star(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    pub fn is_simplex(&self, s: &[usize]) -> bool {
        let Some(&v) = s
            .iter()
            .min_by_key(|&&v| self.incidence.get(v).map_or(0, Vec::len))
        else {
            return true;
        };
        if v >= self.vertices.len() {
            return false;
        }
        self.incidence[v]
            .iter()
            .any(|&f| s.iter().all(|x| self.facets[f].binary_search(x).is_ok()))
    }

    pub fn dimension(&self) -> usize {
        self.facets
            .iter()
            .map(Vec::len)
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkReport {
    pub degree: usize,
    pub link_vertices: Vec<usize>,
    /// Maximal simplices of the link.
    pub link_facets: Vec<Vec<usize>>,
    pub trusted: bool,
}

pub fn vertex_degree_and_link(w: &ComplexWindow, v: usize) -> Result<LinkReport> {
    if v >= w.num_vertices() {
        return Err(Error::Rejected(format!("no vertex {v} in window")));
    }
    let link_facets = w
        .star(v)
        .iter()
        .map(|&f| w.facets[f].iter().copied().filter(|&u| u != v).collect())
        .collect();
    Ok(LinkReport {
        degree: w.degree(v),
        link_vertices: w.neighbours(v).iter().copied().collect(),
        link_facets,
        trusted: w.vertices[v].trusted,
    })
}

/// Build the window spanned by a flip-graph ball around the standard
/// triangulation of the given surface.
pub fn build_complex(
    genus: u32,
    boundary: u32,
    orientable: bool,
    radius: usize,
    max_nodes: Option<usize>,
) -> Result<ComplexWindow> {
    let t = build_surface(genus, boundary, orientable)?;
    ComplexWindow::from_ball(&flip_graph_ball(&t, radius, max_nodes)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicialMap {
    pub assignment: Vec<usize>,
    pub simplicial: bool,
    pub injective: bool,
}

impl SimplicialMap {
    pub fn new(
        source: &ComplexWindow,
        target: &ComplexWindow,
        assignment: Vec<usize>,
    ) -> Result<Self> {
        let (simplicial, injective) = validate_map(source, target, &assignment)?;
        Ok(SimplicialMap {
            assignment,
            simplicial,
            injective,
        })
    }

    pub fn identity(w: &ComplexWindow) -> Self {
        SimplicialMap {
            assignment: (0..w.num_vertices()).collect(),
            simplicial: true,
            injective: true,
        }
    }

    pub fn apply(&self, v: usize) -> usize {
        self.assignment[v]
    }

    /// `self` after `first`.
    pub fn after(&self, first: &SimplicialMap) -> Vec<usize> {
        first
            .assignment
            .iter()
            .map(|&v| self.assignment[v])
            .collect()
    }

    pub fn inverse(&self) -> Option<Vec<usize>> {
        let mut inv = vec![usize::MAX; self.assignment.len()];
        for (i, &v) in self.assignment.iter().enumerate() {
            if v >= inv.len() || inv[v] != usize::MAX {
                return None;
            }
            inv[v] = i;
        }
        Some(inv)
    }
}

/// (simplicial, injective) flags for a vertex assignment.
pub fn validate_map(
    source: &ComplexWindow,
    target: &ComplexWindow,
    assignment: &[usize],
) -> Result<(bool, bool)> {
    if assignment.len() != source.num_vertices() {
        return Err(Error::Rejected(format!(
            "assignment covers {} of {} vertices",
            assignment.len(),
            source.num_vertices()
        )));
    }
    if let Some(&v) = assignment.iter().find(|&&v| v >= target.num_vertices()) {
        return Err(Error::Rejected(format!("image vertex {v} not in target")));
    }
    let simplicial = source.facets.iter().all(|f| {
        let mut img: Vec<usize> = f.iter().map(|&v| assignment[v]).collect();
        img.sort();
        img.dedup();
        target.is_simplex(&img)
    });
    let distinct: BTreeSet<usize> = assignment.iter().copied().collect();
    Ok((simplicial, distinct.len() == assignment.len()))
}

fn search_order(w: &ComplexWindow) -> Vec<usize> {
    // decreasing degree, then grow along edges so each new vertex has an
    // assigned neighbour whenever possible
    let mut order = Vec::with_capacity(w.num_vertices());
    let mut placed = vec![false; w.num_vertices()];
    let mut by_degree: Vec<usize> = (0..w.num_vertices()).collect();
    by_degree.sort_by_key(|&v| (std::cmp::Reverse(w.degree(v)), v));
    while order.len() < w.num_vertices() {
        let next = by_degree
            .iter()
            .copied()
            .filter(|&v| !placed[v])
            .find(|&v| order.is_empty() || w.neighbours(v).iter().any(|&u| placed[u]))
            .or_else(|| by_degree.iter().copied().find(|&v| !placed[v]))
            .expect("vertex left");
        placed[next] = true;
        order.push(next);
    }
    order
}

/// Every injective simplicial self-map of a finite window.
pub fn enumerate_injective_endomorphisms(w: &ComplexWindow) -> Result<Vec<SimplicialMap>> {
    if !w.is_complete() {
        return Err(Error::TruncatedWindow);
    }
    let order = search_order(w);
    let n = w.num_vertices();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut out = Vec::new();
    extend(w, &order, 0, &mut image, &mut used, &mut out);
    out.sort_by(|a: &SimplicialMap, b| a.assignment.cmp(&b.assignment));
    Ok(out)
}

fn extend(
    w: &ComplexWindow,
    order: &[usize],
    depth: usize,
    image: &mut [usize],
    used: &mut [bool],
    out: &mut Vec<SimplicialMap>,
) {
    if depth == order.len() {
        if let Ok((true, true)) = validate_map(w, w, image) {
            out.push(SimplicialMap {
                assignment: image.to_vec(),
                simplicial: true,
                injective: true,
            });
        }
        return;
    }
    let v = order[depth];
    for c in 0..w.num_vertices() {
        if used[c] || w.degree(c) < w.degree(v) {
            continue;
        }
        let ok = w
            .neighbours(v)
            .iter()
            .all(|&u| image[u] == usize::MAX || w.adjacent(image[u], c));
        if !ok {
            continue;
        }
        image[v] = c;
        used[c] = true;
        extend(w, order, depth + 1, image, used, out);
        used[c] = false;
        image[v] = usize::MAX;
    }
}

/// Simplicial bijections of a finite window whose inverse is simplicial.
pub fn automorphisms(w: &ComplexWindow) -> Result<Vec<SimplicialMap>> {
    let mut out = Vec::new();
    for m in enumerate_injective_endomorphisms(w)? {
        let inv = m.inverse().expect("injective self-map of a finite set");
        if validate_map(w, w, &inv)?.0 {
            out.push(m);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupOrder {
    Finite(u64),
    InfiniteWindow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupInvariants {
    pub order: GroupOrder,
    pub abelian: bool,
    pub exponent: Option<u64>,
    /// Some element generates the whole group.
    pub cyclic: bool,
    /// Generators `r`, `s` with `s^2 = 1` and `s r s = r^-1` (with `r` of
    /// order half the group when finite, infinite otherwise).
    pub dihedral_relation: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupName {
    #[serde(rename = "trivial")]
    Trivial,
    #[serde(rename = "Z2")]
    Z2,
    #[serde(rename = "Z2xZ2")]
    Z2xZ2,
    #[serde(rename = "Z4")]
    Z4,
    #[serde(rename = "D4")]
    D4,
    #[serde(rename = "Z⋊Z2")]
    InfiniteDihedral,
    #[serde(rename = "unknown")]
    Unknown,
}

impl fmt::Display for GroupName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupName::Trivial => "trivial",
            GroupName::Z2 => "Z2",
            GroupName::Z2xZ2 => "Z2×Z2",
            GroupName::Z4 => "Z4",
            GroupName::D4 => "D4",
            GroupName::InfiniteDihedral => "Z⋊Z2",
            GroupName::Unknown => "unknown",
        })
    }
}

pub fn identify_group(inv: &GroupInvariants) -> Result<GroupName> {
    let bad = |m: &str| Err(Error::InconsistentInvariants(m.to_string()));
    match inv.order {
        GroupOrder::Finite(0) => bad("order 0"),
        GroupOrder::Finite(n) => {
            let Some(e) = inv.exponent else {
                return bad("finite group without exponent");
            };
            if e == 0 || n % e != 0 {
                return bad("exponent does not divide order");
            }
            if inv.cyclic && !(inv.abelian && e == n) {
                return bad("cyclic group must be abelian with exponent equal to order");
            }
            if inv.abelian && e == n && !inv.cyclic {
                return bad("abelian group with exponent equal to order is cyclic");
            }
            if (n <= 5 || e <= 2) && !inv.abelian {
                return bad("groups of order at most 5 or exponent 2 are abelian");
            }
            if inv.dihedral_relation && inv.abelian && n > 4 {
                return bad("dihedral relation with an element of order above 2 is nonabelian");
            }
            Ok(match (n, inv.abelian, e) {
                (1, _, _) => GroupName::Trivial,
                (2, _, _) => GroupName::Z2,
                (4, true, 2) => GroupName::Z2xZ2,
                (4, true, 4) => GroupName::Z4,
                (8, false, _) if inv.dihedral_relation => GroupName::D4,
                _ => GroupName::Unknown,
            })
        }
        GroupOrder::InfiniteWindow => {
            if inv.exponent.is_some() {
                return bad("infinite-window group with finite exponent");
            }
            if inv.dihedral_relation && inv.abelian {
                return bad("infinite dihedral group is nonabelian");
            }
            Ok(if inv.dihedral_relation {
                GroupName::InfiniteDihedral
            } else {
                GroupName::Unknown
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupReport {
    pub invariants: GroupInvariants,
    pub generators: Vec<String>,
    pub name: GroupName,
}

type Perm = Vec<usize>;

fn compose(a: &Perm, b: &Perm) -> Perm {
    // a after b
    b.iter().map(|&x| a[x]).collect()
}

fn element_order(p: &Perm) -> u64 {
    let id: Perm = (0..p.len()).collect();
    let mut q = p.clone();
    let mut k = 1;
    while q != id {
        q = compose(p, &q);
        k += 1;
    }
    k
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Invariants of a finite permutation group given as its full element list.
pub fn finite_group_invariants(elements: &[Perm]) -> Result<GroupInvariants> {
    let set: BTreeSet<&Perm> = elements.iter().collect();
    if set.len() != elements.len() {
        return Err(Error::InconsistentInvariants(
            "repeated group element".into(),
        ));
    }
    for a in elements {
        for b in elements {
            if !set.contains(&compose(a, b)) {
                return Err(Error::InconsistentInvariants(
                    "not closed under composition".into(),
                ));
            }
        }
    }
    let n = elements.len() as u64;
    let abelian = elements
        .iter()
        .all(|a| elements.iter().all(|b| compose(a, b) == compose(b, a)));
    let orders: Vec<u64> = elements.iter().map(element_order).collect();
    let exponent = orders.iter().fold(1, |acc, &o| acc / gcd(acc, o) * o);
    let cyclic = orders.contains(&n);
    let dihedral_relation = n.is_multiple_of(2)
        && elements.iter().zip(&orders).any(|(r, &o)| {
            o == n / 2
                && elements.iter().zip(&orders).any(|(s, &so)| {
                    so == 2 && {
                        let srs = compose(s, &compose(r, s));
                        compose(&srs, r).iter().enumerate().all(|(i, &x)| i == x)
                            && (1..=o).all(|k| {
                                let mut p = r.clone();
                                for _ in 1..k {
                                    p = compose(r, &p);
                                }
                                p != *s
                            })
                    }
                })
        });
    Ok(GroupInvariants {
        order: GroupOrder::Finite(n),
        abelian,
        exponent: Some(exponent),
        cyclic,
        dihedral_relation,
    })
}

fn describe(w: &ComplexWindow, p: &Perm) -> String {
    let mut seen = vec![false; p.len()];
    let mut cycles = Vec::new();
    for s in 0..p.len() {
        if seen[s] || p[s] == s {
            continue;
        }
        let mut c = Vec::new();
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            c.push(w.vertices[x].label.clone());
            x = p[x];
        }
        cycles.push(format!("({})", c.join(" ")));
    }
    if cycles.is_empty() {
        "id".into()
    } else {
        cycles.join("")
    }
}

/// Automorphism group of a finite window, or of an explicit (2,1) window
/// via its symbolic shift and reflection.
pub fn automorphism_group(w: &ComplexWindow) -> Result<GroupReport> {
    if w.model_window().is_some() {
        return crate::model::symbolic_group();
    }
    let elements: Vec<Perm> = automorphisms(w)?
        .into_iter()
        .map(|m| m.assignment)
        .collect();
    let invariants = finite_group_invariants(&elements)?;
    let name = identify_group(&invariants)?;
    // greedy generating set
    let mut generators: Vec<&Perm> = Vec::new();
    let id: Perm = (0..w.num_vertices()).collect();
    let mut span: BTreeSet<Perm> = BTreeSet::from([id]);
    for e in &elements {
        if span.contains(e) {
            continue;
        }
        generators.push(e);
        loop {
            let grown: BTreeSet<Perm> = span
                .iter()
                .flat_map(|a| generators.iter().map(move |g| compose(g, a)))
                .chain(span.iter().cloned())
                .collect();
            if grown.len() == span.len() {
                break;
            }
            span = grown;
        }
    }
    Ok(GroupReport {
        invariants,
        generators: generators.iter().map(|g| describe(w, g)).collect(),
        name,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> ComplexWindow {
        // a 4-cycle: Aut is D4
        let vs = (0..4)
            .map(|i| Vertex {
                label: format!("v{i}"),
                arc: None,
                trusted: true,
            })
            .collect();
        ComplexWindow::new(
            vs,
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
            true,
            None,
        )
        .unwrap()
    }

    #[test]
    fn four_cycle_has_dihedral_symmetry() {
        let g = automorphism_group(&square()).unwrap();
        assert_eq!(g.invariants.order, GroupOrder::Finite(8));
        assert_eq!(g.name, GroupName::D4);
    }

    #[test]
    fn identity_and_constant_maps() {
        let w = square();
        let id = SimplicialMap::identity(&w);
        assert_eq!(validate_map(&w, &w, &id.assignment).unwrap(), (true, true));
        assert_eq!(validate_map(&w, &w, &[0, 0, 0, 0]).unwrap(), (true, false));
        // the diagonal pair is not an edge
        assert!(!validate_map(&w, &w, &[0, 2, 1, 3]).unwrap().0);
    }

    #[test]
    fn identification_table() {
        let f = |n, abelian, e, cyclic, dihedral_relation| GroupInvariants {
            order: GroupOrder::Finite(n),
            abelian,
            exponent: Some(e),
            cyclic,
            dihedral_relation,
        };
        assert_eq!(
            identify_group(&f(1, true, 1, true, false)).unwrap(),
            GroupName::Trivial
        );
        assert_eq!(
            identify_group(&f(2, true, 2, true, false)).unwrap(),
            GroupName::Z2
        );
        assert_eq!(
            identify_group(&f(4, true, 2, false, true)).unwrap(),
            GroupName::Z2xZ2
        );
        assert_eq!(
            identify_group(&f(4, true, 4, true, false)).unwrap(),
            GroupName::Z4
        );
        assert_eq!(
            identify_group(&f(8, false, 4, false, true)).unwrap(),
            GroupName::D4
        );
        assert_eq!(
            identify_group(&f(6, true, 6, true, false)).unwrap(),
            GroupName::Unknown
        );
        assert!(identify_group(&f(4, false, 2, false, false)).is_err());
        assert!(identify_group(&f(4, true, 3, false, false)).is_err());
        let inf = GroupInvariants {
            order: GroupOrder::InfiniteWindow,
            abelian: false,
            exponent: None,
            cyclic: false,
            dihedral_relation: true,
        };
        assert_eq!(identify_group(&inf).unwrap(), GroupName::InfiniteDihedral);
    }

    #[test]
    fn truncated_window_refuses_enumeration() {
        let w = build_complex(2, 1, false, 2, None).unwrap();
        assert!(matches!(
            enumerate_injective_endomorphisms(&w),
            Err(Error::TruncatedWindow)
        ));
    }
}
