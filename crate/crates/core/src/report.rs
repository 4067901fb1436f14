//! Pass/fail reports for the small cases and for invariant sweeps.

use std::fmt::{self, Display};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ball::{flip_graph_ball, FlipBall};
use crate::complex::{
    automorphism_group, automorphisms, build_complex, enumerate_injective_endomorphisms,
    validate_map, GroupName, GroupOrder,
};
use crate::error::{Error, Result};
use crate::flip::{completions, flip, is_flippable, FlipMove};
use crate::model::{
    explicit_small_model, genus_two_constraints, genus_two_window, interior_isomorphism,
    symbolic_symmetry_checks, SmallCase,
};
use crate::normal::{intersection_number, NormalArc};
use crate::surface::{
    boundary_cycles, build_surface, classify_surface, piece_class, validate_triangulation, ArcId,
    PieceClass, SurfaceSignature, Triangulation,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub case: String,
    pub checks: Vec<Check>,
    pub runtime_ms: u64,
    pub truncation: Vec<String>,
}

impl Report {
    fn new(case: impl Into<String>) -> Self {
        Report {
            case: case.into(),
            checks: Vec::new(),
            runtime_ms: 0,
            truncation: Vec::new(),
        }
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(
        &mut self,
        name: &str,
        expected: impl Display,
        observed: impl Display,
        pass: bool,
    ) {
        self.checks.push(Check {
            name: name.into(),
            expected: expected.to_string(),
            observed: observed.to_string(),
            pass,
        });
    }

    pub fn expect_eq<T: PartialEq + Display>(&mut self, name: &str, expected: T, observed: T) {
        let pass = expected == observed;
        self.check(name, expected, observed, pass);
    }

    /// Turn an error from a step into a failed check.
    fn attempt<T>(&mut self, name: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(name, "no error", e, false);
                None
            }
        }
    }
}

impl Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "case {}", self.case)?;
        for c in &self.checks {
            writeln!(
                f,
                "  {} {}: expected {}, observed {}",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.expected,
                c.observed
            )?;
        }
        for t in &self.truncation {
            writeln!(f, "  note: {t}")?;
        }
        write!(
            f,
            "{} ({} checks, {} ms)",
            if self.pass() { "PASS" } else { "FAIL" },
            self.checks.len(),
            self.runtime_ms
        )
    }
}

/// Default flip radius for the genus-two, one-boundary comparison.
pub const GENUS_TWO_RADIUS: usize = 6;

pub fn run_small_case_report(genus: u32, boundary: u32, radius: Option<usize>) -> Result<Report> {
    let start = Instant::now();
    let case = SmallCase::from_signature(genus, boundary, 1)?;
    let mut r = Report::new(format!("({genus},{boundary})"));
    match case {
        SmallCase::MobiusBand => mobius(&mut r),
        SmallCase::KleinHole => klein(&mut r),
        SmallCase::GenusTwoWindow(_) => genus_two(&mut r, radius.unwrap_or(GENUS_TWO_RADIUS)),
    }
    r.runtime_ms = start.elapsed().as_millis() as u64;
    Ok(r)
}

fn mobius(r: &mut Report) {
    let unsupported = matches!(
        build_surface(1, 1, false),
        Err(Error::UnsupportedSignature(_))
    );
    r.check("no hexagon decomposition", true, unsupported, unsupported);
    let Some(w) = r.attempt("model", explicit_small_model(SmallCase::MobiusBand)) else {
        return;
    };
    r.expect_eq("vertex count", 1, w.num_vertices());
    if let Some(g) = r.attempt("automorphism group", automorphism_group(&w)) {
        r.expect_eq("automorphism group", GroupName::Trivial, g.name);
    }
    if let Some(e) = r.attempt(
        "injective endomorphisms",
        enumerate_injective_endomorphisms(&w),
    ) {
        r.expect_eq("injective endomorphisms", 1, e.len());
    }
}

fn klein(r: &mut Report) {
    let Some(w) = r.attempt(
        "stabilized window",
        explicit_small_model(SmallCase::KleinHole),
    ) else {
        return;
    };
    r.expect_eq("flip graph closes", true, w.is_complete());
    r.expect_eq("vertex count", 8, w.num_vertices());
    let full = w.facets().iter().all(|f| f.len() == 3);
    r.check("maximal simplices have 3 vertices", true, full, full);
    let Some(g) = r.attempt("automorphism group", automorphism_group(&w)) else {
        return;
    };
    r.expect_eq(
        "automorphism group order",
        GroupOrder::Finite(4).to_string(),
        g.invariants.order.to_string(),
    );
    r.expect_eq("abelian", true, g.invariants.abelian);
    r.expect_eq(
        "exponent",
        "2".to_string(),
        g.invariants
            .exponent
            .map_or("none".into(), |x| x.to_string()),
    );
    r.expect_eq("identified group", GroupName::Z2xZ2, g.name);
    let (Some(endo), Some(auts)) = (
        r.attempt(
            "injective endomorphisms",
            enumerate_injective_endomorphisms(&w),
        ),
        r.attempt("automorphisms", automorphisms(&w)),
    ) else {
        return;
    };
    r.expect_eq("injective endomorphisms", 4, endo.len());
    let bijective = endo.iter().all(|m| {
        m.inverse()
            .map(|inv| validate_map(&w, &w, &inv).map(|f| f.0).unwrap_or(false))
            .unwrap_or(false)
    });
    r.check(
        "every injective endomorphism is an automorphism",
        true,
        bijective,
        bijective,
    );
    r.expect_eq("endomorphisms equal automorphisms", true, endo == auts);
}

impl Display for GroupOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupOrder::Finite(n) => write!(f, "{n}"),
            GroupOrder::InfiniteWindow => f.write_str("infinite"),
        }
    }
}

fn genus_two(r: &mut Report, radius: usize) {
    if let Some(cs) = r.attempt("model constraints", genus_two_constraints(8)) {
        for c in cs {
            r.check(&c.name, "holds", &c.detail, c.holds);
        }
    }
    for c in symbolic_symmetry_checks(64) {
        r.check(&c.name, "holds", "checked on the rule", c.holds);
    }
    let Some(engine) = r.attempt("engine window", build_complex(2, 1, false, radius, None)) else {
        return;
    };
    r.truncation.push(format!(
        "engine window is a radius-{radius} slice of an infinite complex; {} of {} vertices trusted",
        engine.vertices().iter().filter(|v| v.trusted).count(),
        engine.num_vertices()
    ));
    let Some(model) = r.attempt(
        "model window",
        genus_two_window(engine.num_vertices() as u32),
    ) else {
        return;
    };
    let trusted = engine.vertices().iter().filter(|v| v.trusted).count();
    let iso = interior_isomorphism(&engine, &model);
    r.check(
        "engine interior embeds in the model",
        format!("{trusted} trusted vertices matched"),
        iso.as_ref()
            .map_or("no embedding".into(), |m| format!("{} matched", m.len())),
        iso.is_some() && trusted > 0,
    );
    let Some(prev) = r.attempt(
        "smaller engine window",
        build_complex(2, 1, false, radius.saturating_sub(1), None),
    ) else {
        return;
    };
    r.expect_eq(
        "vertices gained per unit radius",
        4,
        engine.num_vertices() as i64 - prev.num_vertices() as i64,
    );
    if let Some(g) = r.attempt("automorphism group", automorphism_group(&model)) {
        r.expect_eq("identified group", GroupName::InfiniteDihedral, g.name);
    }
}

/// Seeded sweep of structural and flip invariants over a ball.
#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub genus: u32,
    pub boundary: u32,
    pub orientable: bool,
    pub radius: usize,
    pub samples: usize,
    pub seed: u64,
    pub max_nodes: Option<usize>,
    pub pairs: usize,
}

impl SuiteOptions {
    pub fn new(genus: u32, boundary: u32, orientable: bool, radius: usize) -> Self {
        SuiteOptions {
            genus,
            boundary,
            orientable,
            radius,
            samples: 1000,
            seed: 0,
            max_nodes: None,
            pairs: 100,
        }
    }
}

pub fn run_invariant_suite(o: &SuiteOptions) -> Result<Report> {
    let start = Instant::now();
    let sig = SurfaceSignature::new(o.genus, o.boundary, o.orientable);
    let mut r = Report::new(format!("suite {sig} radius {} seed {}", o.radius, o.seed));
    let t = build_surface(o.genus, o.boundary, o.orientable)?;
    let ball = flip_graph_ball(&t, o.radius, o.max_nodes)?;
    if let Some(note) = ball.truncation() {
        r.truncation.push(note.to_string());
    }
    structure(&mut r, &ball, sig);
    let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
    flips(&mut r, &ball, o.samples, &mut rng);
    connectivity(&mut r, &ball, o.pairs, &mut rng);
    r.runtime_ms = start.elapsed().as_millis() as u64;
    Ok(r)
}

fn structure(r: &mut Report, ball: &FlipBall, sig: SurfaceSignature) {
    let nodes = ball.nodes();
    let (arcs, pieces) = (sig.arc_count() as usize, sig.piece_count() as usize);
    let mut bad = [0usize; 5];
    let mut classes = [0usize; 3];
    for n in nodes {
        let t = &n.triangulation;
        bad[0] += (t.num_arcs() != arcs || n.arcs.len() != arcs) as usize;
        bad[1] += (t.num_pieces() != pieces) as usize;
        bad[2] += !validate_triangulation(t).is_empty() as usize;
        bad[3] += (classify_surface(t).ok() != Some(sig)) as usize;
        bad[4] += (boundary_cycles(t).len() != sig.boundary as usize) as usize;
        for p in 0..t.num_pieces() {
            classes[match piece_class(t, p) {
                PieceClass::Embedded => 0,
                PieceClass::RegularNonEmbedded => 1,
                PieceClass::TwistedNonEmbedded => 2,
            }] += 1;
        }
    }
    let total = nodes.len();
    r.check("nodes explored", "at least 1", total, total > 0);
    let names = [
        format!("every node has {arcs} arcs"),
        format!("every node has {pieces} pieces"),
        "every node is a valid decomposition".to_string(),
        format!("every node classifies as {sig} with euler {}", sig.euler()),
        format!("every node has {} boundary cycles", sig.boundary),
    ];
    for (name, b) in names.iter().zip(bad) {
        r.check(
            name,
            "0 failures",
            format!("{b} failures of {total}"),
            b == 0,
        );
    }
    let sum: usize = classes.iter().sum();
    r.check(
        "piece-class totals",
        format!("{} pieces", total * pieces),
        format!(
            "{} embedded, {} regular non-embedded, {} twisted non-embedded",
            classes[0], classes[1], classes[2]
        ),
        sum == total * pieces,
    );
    let mut edge_bad = 0;
    for e in ball.edges() {
        let (a, b) = (&nodes[e.from].arcs, &nodes[e.to].arcs);
        let shared = a.iter().filter(|x| b.contains(x)).count();
        edge_bad += (shared + 1 != arcs) as usize;
    }
    r.check(
        "flip edges change exactly one arc",
        "0 failures",
        format!("{edge_bad} failures of {}", ball.edges().len()),
        edge_bad == 0,
    );
}

fn flips(r: &mut Report, ball: &FlipBall, samples: usize, rng: &mut ChaCha8Rng) {
    let nodes = ball.nodes();
    let mut counts = [0usize; 3];
    let (mut involution, mut meets, mut commute, mut commute_tried, mut flippable) =
        (0, 0, 0, 0, 0);
    let mut errors = Vec::new();
    for _ in 0..samples {
        let n = rng.gen_range(0..nodes.len());
        let t = &nodes[n].triangulation;
        let e: ArcId = rng.gen_range(0..t.num_arcs());
        let face: Vec<ArcId> = (0..t.num_arcs()).filter(|&a| a != e).collect();
        match completions(t, &face) {
            Ok(c) => counts[c.len().min(2)] += (c.len() <= 2) as usize,
            Err(err) => errors.push(err.to_string()),
        }
        if !is_flippable(t, e).unwrap_or(false) {
            continue;
        }
        flippable += 1;
        let m = match flip(t, e) {
            Ok(m) => m,
            Err(err) => {
                errors.push(err.to_string());
                continue;
            }
        };
        let old = NormalArc::edge(t, e).expect("arc exists");
        if flip(&m.target, e)
            .map(|back| returns_home(t, &m, &back, &old))
            .unwrap_or(false)
        {
            involution += 1;
        }
        if intersection_number(t, &old, &m.replacement).ok() == Some(1) {
            meets += 1;
        }
        let pr = t.pairings()[e];
        let quad = [pr.slot_a.piece, pr.slot_b.piece];
        let far: Vec<ArcId> = (0..t.num_arcs())
            .filter(|&f| {
                let q = t.pairings()[f];
                q.slot_a.piece != q.slot_b.piece
                    && !quad.contains(&q.slot_a.piece)
                    && !quad.contains(&q.slot_b.piece)
            })
            .collect();
        if let Some(&f) = far.choose(rng) {
            commute_tried += 1;
            let ef = flip(&m.target, f).map(|x| x.target);
            let fe = flip(t, f)
                .and_then(|x| flip(&x.target, e))
                .map(|x| x.target);
            if matches!((ef, fe), (Ok(a), Ok(b)) if a == b) {
                commute += 1;
            }
        }
    }
    r.check(
        "completions per face",
        "1 or 2",
        format!(
            "{} with one, {} with two, {} errors",
            counts[1],
            counts[2],
            errors.len()
        ),
        counts[1] + counts[2] == samples && errors.is_empty(),
    );
    r.check(
        "flip involution",
        format!("{flippable} of {flippable}"),
        format!("{involution} of {flippable}"),
        involution == flippable,
    );
    r.check(
        "old and new arc meet once",
        format!("{flippable} of {flippable}"),
        format!("{meets} of {flippable}"),
        meets == flippable,
    );
    r.check(
        "flips on disjoint quadrilaterals commute",
        format!("{commute_tried} of {commute_tried}"),
        format!("{commute} of {commute_tried}"),
        commute == commute_tried,
    );
}

fn connectivity(r: &mut Report, ball: &FlipBall, pairs: usize, rng: &mut ChaCha8Rng) {
    let nodes = ball.nodes();
    let (mut ok, mut lengths) = (0, 0);
    let mut failure = None;
    for _ in 0..pairs {
        let (a, b) = (rng.gen_range(0..nodes.len()), rng.gen_range(0..nodes.len()));
        match ball
            .connect_chain(a, b)
            .and_then(|c| chain_reaches(ball, a, b, &c).map(|ok| (c, ok)))
        {
            Ok((chain, reached)) => {
                lengths += chain.len();
                if reached {
                    ok += 1;
                } else if failure.is_none() {
                    failure = Some(format!("chain {a} -> {b} does not end at node {b}"));
                }
            }
            Err(e) => failure = failure.or(Some(e.to_string())),
        }
    }
    r.check(
        "random node pairs joined by flip chains",
        format!("{pairs} of {pairs}"),
        format!(
            "{ok} of {pairs}, mean length {:.2}",
            lengths as f64 / pairs.max(1) as f64
        ),
        ok == pairs && failure.is_none(),
    );
}

/// Flipping the replacement brings back the old arc, and every arc of the
/// source reappears as an arc of the final triangulation.
fn returns_home(t: &Triangulation, m: &FlipMove, back: &FlipMove, old: &NormalArc) -> bool {
    if back.replacement != m.carry(old) {
        return false;
    }
    let mut edges: Vec<Option<ArcId>> = (0..t.num_arcs())
        .map(|i| {
            let a = NormalArc::edge(t, i).expect("arc exists");
            back.carry(&m.carry(&a)).as_edge()
        })
        .collect();
    edges.sort();
    edges.dedup();
    edges.len() == t.num_arcs() && edges.iter().all(Option::is_some)
}

/// Whether the chain is continuous, starts at node `a`, and ends at a
/// triangulation whose arcs are exactly node `b`'s, found by carrying `b`'s
/// arcs forward.
fn chain_reaches(ball: &FlipBall, a: usize, b: usize, chain: &[FlipMove]) -> Result<bool> {
    let nodes = ball.nodes();
    let linked = chain.windows(2).all(|w| w[0].target == w[1].source)
        && chain
            .first()
            .is_none_or(|m| m.source == nodes[a].triangulation);
    let end = chain.last().map_or(&nodes[a].triangulation, |m| &m.target);
    let mut edges = Vec::new();
    for x in &nodes[b].arcs {
        let mut y = ball.to_node(a, x)?;
        for m in chain {
            y = m.carry(&y);
        }
        edges.push(y.as_edge());
    }
    edges.sort();
    edges.dedup();
    Ok(linked && edges.len() == end.num_arcs() && edges.iter().all(Option::is_some))
}
