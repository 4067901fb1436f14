//! Explicit complexes for the three smallest nonorientable cases.
//!
//! The genus-two, one-boundary complex has vertices `a`, `b_n`, `c_n`
//! (`n` an integer) and maximal simplices `{a, b_n, b_n+1}` and
//! `{b_n, b_n+1, c_n}`. Its windows are finite slices of that infinite
//! complex; its symmetries are checked on the rule itself.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::complex::{
    build_complex, identify_group, ComplexWindow, GroupInvariants, GroupName, GroupOrder,
    GroupReport, Vertex,
};
use crate::error::{Error, Result};

/// Radius at which the one-holed Klein bottle's flip graph is exhausted.
pub const KLEIN_RADIUS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SmallCase {
    /// Möbius band: genus 1, one boundary component.
    MobiusBand,
    /// Genus 1, two boundary components.
    KleinHole,
    /// Genus 2, one boundary component, sliced to `|n| <= k`.
    GenusTwoWindow(u32),
}

impl SmallCase {
    pub fn from_signature(genus: u32, boundary: u32, window: u32) -> Result<SmallCase> {
        match (genus, boundary) {
            (1, 1) => Ok(SmallCase::MobiusBand),
            (1, 2) => Ok(SmallCase::KleinHole),
            (2, 1) => Ok(SmallCase::GenusTwoWindow(window)),
            _ => Err(Error::Rejected(format!(
                "no explicit model for genus {genus} with {boundary} boundary components"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sym {
    A,
    B(i64),
    C(i64),
}

impl Sym {
    pub fn label(self) -> String {
        match self {
            Sym::A => "a".into(),
            Sym::B(n) => format!("b_{n}"),
            Sym::C(n) => format!("c_{n}"),
        }
    }

    pub fn shift(self) -> Sym {
        match self {
            Sym::A => Sym::A,
            Sym::B(n) => Sym::B(n + 1),
            Sym::C(n) => Sym::C(n + 1),
        }
    }

    pub fn unshift(self) -> Sym {
        match self {
            Sym::A => Sym::A,
            Sym::B(n) => Sym::B(n - 1),
            Sym::C(n) => Sym::C(n - 1),
        }
    }

    pub fn reflect(self) -> Sym {
        match self {
            Sym::A => Sym::A,
            Sym::B(n) => Sym::B(1 - n),
            Sym::C(n) => Sym::C(-n),
        }
    }
}

/// Membership rule for maximal simplices of the infinite (2,1) complex.
pub fn is_model_facet(s: &BTreeSet<Sym>) -> bool {
    let v: Vec<Sym> = s.iter().copied().collect();
    match v.as_slice() {
        [Sym::A, Sym::B(m), Sym::B(n)] => n - m == 1,
        [Sym::B(m), Sym::B(n), Sym::C(c)] => n - m == 1 && c == m,
        _ => false,
    }
}

fn model_facets(n: i64) -> [BTreeSet<Sym>; 2] {
    [
        BTreeSet::from([Sym::A, Sym::B(n), Sym::B(n + 1)]),
        BTreeSet::from([Sym::B(n), Sym::B(n + 1), Sym::C(n)]),
    ]
}

/// Symbols of `window(k)`, in vertex order.
pub fn window_symbols(k: u32) -> Vec<Sym> {
    let k = k as i64;
    std::iter::once(Sym::A)
        .chain((-k..=k).map(Sym::B))
        .chain((-k..k).map(Sym::C))
        .collect()
}

pub fn genus_two_window(k: u32) -> Result<ComplexWindow> {
    if k == 0 {
        return Err(Error::Rejected("window half-width must be positive".into()));
    }
    let syms = window_symbols(k);
    let index: HashMap<Sym, usize> = syms.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let ki = k as i64;
    let facets = (-ki..ki)
        .flat_map(model_facets)
        .map(|f| f.iter().map(|s| index[s]).collect())
        .collect();
    let vertices = syms
        .iter()
        .map(|&s| Vertex {
            label: s.label(),
            arc: None,
            trusted: match s {
                Sym::A => false,
                Sym::B(n) => n.abs() < ki,
                Sym::C(_) => true,
            },
        })
        .collect();
    Ok(ComplexWindow::new(vertices, facets, false, None)?.with_model(ki))
}

pub fn explicit_small_model(case: SmallCase) -> Result<ComplexWindow> {
    match case {
        SmallCase::MobiusBand => ComplexWindow::new(
            vec![Vertex {
                label: "a".into(),
                arc: None,
                trusted: true,
            }],
            vec![vec![0]],
            true,
            None,
        ),
        SmallCase::KleinHole => {
            let w = build_complex(1, 2, false, KLEIN_RADIUS, None)?;
            if !w.is_complete() {
                return Err(Error::Rejected(format!(
                    "flip graph of the one-holed Klein bottle did not close within radius {KLEIN_RADIUS}"
                )));
            }
            Ok(w)
        }
        SmallCase::GenusTwoWindow(k) => genus_two_window(k),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintCheck {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

fn check(name: &str, holds: bool, detail: String) -> ConstraintCheck {
    ConstraintCheck {
        name: name.into(),
        holds,
        detail,
    }
}

/// The five incidence facts of the genus-two, one-boundary complex,
/// evaluated on `window(k)` (and `window(2k)` for unboundedness).
pub fn genus_two_constraints(k: u32) -> Result<Vec<ConstraintCheck>> {
    let w = genus_two_window(k)?;
    let wide = genus_two_window(2 * k)?;
    let syms = window_symbols(k);
    let at = |s: Sym| syms.iter().position(|&x| x == s).expect("symbol in window");
    let a = at(Sym::A);
    let mut out = Vec::new();

    let (d1, d2) = (w.degree(a), wide.degree(0));
    out.push(check(
        "a has unbounded degree",
        d2 > d1 && !w.vertices()[a].trusted,
        format!("degree {d1} in window {k}, {d2} in window {}", 2 * k),
    ));

    let ki = k as i64;
    let mut bad = Vec::new();
    for n in -ki + 1..ki {
        let want: BTreeSet<usize> = [
            Sym::A,
            Sym::B(n - 1),
            Sym::B(n + 1),
            Sym::C(n - 1),
            Sym::C(n),
        ]
        .into_iter()
        .map(at)
        .collect();
        let v = at(Sym::B(n));
        if w.neighbours(v) != &want || !w.vertices()[v].trusted {
            bad.push(n);
        }
    }
    out.push(check(
        "interior b_n has degree 5",
        bad.is_empty(),
        format!("{} interior b vertices, failures at {bad:?}", 2 * ki - 1),
    ));

    let mut bad = Vec::new();
    for n in -ki..ki {
        let want: BTreeSet<usize> = [Sym::B(n), Sym::B(n + 1)].into_iter().map(at).collect();
        if w.neighbours(at(Sym::C(n))) != &want {
            bad.push(n);
        }
    }
    out.push(check(
        "c_n has degree 2",
        bad.is_empty(),
        format!("failures at {bad:?}"),
    ));

    let mut bad = Vec::new();
    for n in -ki + 1..ki {
        let b = at(Sym::B(n));
        let count = w
            .star(a)
            .iter()
            .filter(|f| w.facets()[**f].contains(&b))
            .count();
        if count != 2 {
            bad.push((n, count));
        }
    }
    out.push(check(
        "edge {a, b_n} lies in two maximal simplices",
        bad.is_empty(),
        format!("failures (n, count) {bad:?}"),
    ));

    let mut bad = Vec::new();
    for n in -ki..ki {
        let (b0, b1) = (at(Sym::B(n)), at(Sym::B(n + 1)));
        let free: Vec<&Vec<usize>> = w
            .star(b0)
            .iter()
            .map(|&f| &w.facets()[f])
            .filter(|f| f.contains(&b1) && !f.contains(&a))
            .collect();
        if free.len() != 1 || !free[0].contains(&at(Sym::C(n))) {
            bad.push(n);
        }
    }
    out.push(check(
        "{b_n, b_n+1, c_n} is the unique a-free maximal simplex on b_n, b_n+1",
        bad.is_empty(),
        format!("failures at {bad:?}"),
    ));
    Ok(out)
}

/// Checks of shift and reflection on the infinite rule, over `|n| <= span`.
pub fn symbolic_symmetry_checks(span: i64) -> Vec<ConstraintCheck> {
    let facets: Vec<BTreeSet<Sym>> = (-span..=span).flat_map(model_facets).collect();
    let vertices: Vec<Sym> = std::iter::once(Sym::A)
        .chain((-span..=span).flat_map(|n| [Sym::B(n), Sym::C(n)]))
        .collect();
    type Named = (&'static str, fn(Sym) -> Sym);
    let maps: [Named; 3] = [
        ("shift", Sym::shift),
        ("inverse shift", Sym::unshift),
        ("reflection", Sym::reflect),
    ];
    let mut out = Vec::new();
    for (name, f) in maps {
        let ok = facets
            .iter()
            .all(|s| is_model_facet(&s.iter().map(|&v| f(v)).collect()));
        out.push(check(
            &format!("{name} maps maximal simplices to maximal simplices"),
            ok,
            format!("{} simplices", facets.len()),
        ));
    }
    out.push(check(
        "shift and inverse shift are mutually inverse",
        vertices
            .iter()
            .all(|&v| v.shift().unshift() == v && v.unshift().shift() == v),
        String::new(),
    ));
    out.push(check(
        "reflection is an involution",
        vertices.iter().all(|&v| v.reflect().reflect() == v),
        String::new(),
    ));
    out.push(check(
        "reflection conjugates shift to its inverse",
        vertices
            .iter()
            .all(|&v| v.reflect().shift().reflect() == v.unshift()),
        String::new(),
    ));
    let mut p = Sym::B(0);
    let mut returns = false;
    for _ in 0..span {
        p = p.shift();
        returns |= p == Sym::B(0);
    }
    out.push(check(
        "shift has infinite order",
        !returns,
        format!("no return to b_0 within {span} steps"),
    ));
    out.push(check(
        "shift and reflection do not commute",
        Sym::B(0).shift().reflect() != Sym::B(0).reflect().shift(),
        String::new(),
    ));
    out
}

pub(crate) fn symbolic_group() -> Result<GroupReport> {
    let checks = symbolic_symmetry_checks(64);
    let holds = checks.iter().all(|c| c.holds);
    let invariants = GroupInvariants {
        order: GroupOrder::InfiniteWindow,
        abelian: !holds,
        exponent: None,
        cyclic: false,
        dihedral_relation: holds,
    };
    let name = identify_group(&invariants)?;
    debug_assert!(!holds || name == GroupName::InfiniteDihedral);
    Ok(GroupReport {
        invariants,
        generators: vec![
            "shift: b_n -> b_n+1, c_n -> c_n+1".into(),
            "reflection: b_n -> b_1-n, c_n -> c_-n".into(),
        ],
        name,
    })
}

/// An embedding of the trusted part of `engine` into `model` that preserves
/// degrees, adjacency and non-adjacency, if one exists.
pub fn interior_isomorphism(
    engine: &ComplexWindow,
    model: &ComplexWindow,
) -> Option<Vec<(usize, usize)>> {
    let trusted: Vec<usize> = (0..engine.num_vertices())
        .filter(|&v| engine.vertices()[v].trusted)
        .collect();
    if trusted.is_empty() {
        return Some(Vec::new());
    }
    let is_trusted: BTreeSet<usize> = trusted.iter().copied().collect();
    // breadth-first along trusted edges, largest degree first
    let mut order = Vec::new();
    let mut seen = BTreeSet::new();
    let mut starts = trusted.clone();
    starts.sort_by_key(|&v| (std::cmp::Reverse(engine.degree(v)), v));
    for s in starts {
        if !seen.insert(s) {
            continue;
        }
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            order.push(v);
            for &u in engine.neighbours(v) {
                if is_trusted.contains(&u) && seen.insert(u) {
                    q.push_back(u);
                }
            }
        }
    }
    let mut image = vec![usize::MAX; engine.num_vertices()];
    let mut used = vec![false; model.num_vertices()];
    if embed(engine, model, &order, 0, &mut image, &mut used) {
        Some(order.iter().map(|&v| (v, image[v])).collect())
    } else {
        None
    }
}

fn embed(
    e: &ComplexWindow,
    m: &ComplexWindow,
    order: &[usize],
    depth: usize,
    image: &mut [usize],
    used: &mut [bool],
) -> bool {
    let Some(&v) = order.get(depth) else {
        return true;
    };
    let anchor = e
        .neighbours(v)
        .iter()
        .find(|&&u| image[u] != usize::MAX)
        .copied();
    let candidates: Vec<usize> = match anchor {
        Some(u) => m.neighbours(image[u]).iter().copied().collect(),
        None => (0..m.num_vertices()).collect(),
    };
    for c in candidates {
        if used[c] || !m.vertices()[c].trusted || m.degree(c) != e.degree(v) {
            continue;
        }
        let consistent = order[..depth]
            .iter()
            .all(|&u| e.adjacent(u, v) == m.adjacent(image[u], c));
        if !consistent {
            continue;
        }
        image[v] = c;
        used[c] = true;
        if embed(e, m, order, depth + 1, image, used) {
            return true;
        }
        used[c] = false;
        image[v] = usize::MAX;
    }
    false
}
