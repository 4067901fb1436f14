//! Acceptance suite: one line per criterion, non-zero exit on any failure.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use arcplex::model::{genus_two_constraints, genus_two_window, symbolic_symmetry_checks};
use arcplex::report::SuiteOptions;
use arcplex::{
    automorphism_group, automorphisms, build_complex, build_surface, class_profile,
    enumerate_injective_endomorphisms, explicit_small_model, find_configuration, flip,
    flip_graph_ball, gluing_symmetries, induced_map, interior_isomorphism, intersection_number,
    is_flippable, run_invariant_suite, straighten, transport, validate_map, ComplexWindow,
    ConfigurationPattern, FlipBall, GroupName, GroupOrder, NormalArc, SmallCase, Triangulation,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn mobius_band() -> Outcome {
    let w = explicit_small_model(SmallCase::MobiusBand).map_err(e2s)?;
    ensure(w.num_vertices() == 1, || {
        format!("{} vertices", w.num_vertices())
    })?;
    let g = automorphism_group(&w).map_err(e2s)?;
    ensure(g.name == GroupName::Trivial, || format!("group {}", g.name))?;
    Ok("1 vertex, trivial automorphism group".into())
}

fn klein_hole() -> Outcome {
    let w = explicit_small_model(SmallCase::KleinHole).map_err(e2s)?;
    ensure(w.is_complete(), || "flip graph did not close".into())?;
    ensure(w.num_vertices() == 8, || {
        format!("{} vertices", w.num_vertices())
    })?;
    let g = automorphism_group(&w).map_err(e2s)?;
    let inv = g.invariants;
    ensure(
        inv.order == GroupOrder::Finite(4) && inv.abelian && inv.exponent == Some(2),
        || format!("invariants {inv:?}"),
    )?;
    ensure(g.name == GroupName::Z2xZ2, || format!("group {}", g.name))?;
    let endo = enumerate_injective_endomorphisms(&w).map_err(e2s)?;
    let auts = automorphisms(&w).map_err(e2s)?;
    ensure(endo.len() == 4 && endo == auts, || {
        format!("{} endomorphisms, {} automorphisms", endo.len(), auts.len())
    })?;
    Ok(format!(
        "8 vertices, |Aut| = 4 ({}), 4 injective endomorphisms all automorphisms",
        g.name
    ))
}

fn genus_two() -> Outcome {
    for c in genus_two_constraints(8).map_err(e2s)? {
        ensure(c.holds, || format!("{}: {}", c.name, c.detail))?;
    }
    for c in symbolic_symmetry_checks(64) {
        ensure(c.holds, || c.name.clone())?;
    }
    let mut matched = Vec::new();
    for radius in [6, 7, 8] {
        let engine = build_complex(2, 1, false, radius, None).map_err(e2s)?;
        let model = genus_two_window(engine.num_vertices() as u32).map_err(e2s)?;
        let trusted = engine.vertices().iter().filter(|v| v.trusted).count();
        let iso = interior_isomorphism(&engine, &model)
            .ok_or_else(|| format!("radius {radius}: trusted part does not embed in the model"))?;
        ensure(trusted > 0 && iso.len() == trusted, || {
            format!("radius {radius}: {trusted} trusted")
        })?;
        matched.push(trusted);
    }
    let g = automorphism_group(&genus_two_window(4).map_err(e2s)?).map_err(e2s)?;
    ensure(g.name == GroupName::InfiniteDihedral, || {
        format!("group {}", g.name)
    })?;
    Ok(format!(
        "five constraints hold, interiors of {matched:?} trusted vertices match at radii 6-8, group {}",
        g.name
    ))
}

const SIGNATURES: [(u32, u32); 5] = [(1, 2), (2, 1), (1, 3), (2, 2), (3, 1)];

fn suite(g: u32, r: u32, radius: usize, samples: usize, pairs: usize) -> Result<(), String> {
    let mut o = SuiteOptions::new(g, r, false, radius);
    o.samples = samples;
    o.pairs = pairs;
    o.seed = 0x5eed + (g * 10 + r) as u64;
    let rep = run_invariant_suite(&o).map_err(e2s)?;
    ensure(rep.pass(), || {
        let failed: Vec<_> = rep
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.clone())
            .collect();
        format!("({g},{r}) failed {failed:?}")
    })
}

fn counts() -> Outcome {
    let mut nodes = 0;
    for (g, r) in SIGNATURES {
        let t = build_surface(g, r, false).map_err(e2s)?;
        nodes += flip_graph_ball(&t, 3, None).map_err(e2s)?.nodes().len();
        suite(g, r, 3, 0, 0)?;
    }
    Ok(format!(
        "{nodes} nodes over five radius-3 balls have the predicted counts and topology"
    ))
}

fn flip_properties() -> Outcome {
    for (g, r) in SIGNATURES {
        suite(g, r, 3, 1000, 0)?;
    }
    Ok("1000 sampled (node, arc) pairs per signature: involution, i = 1, commuting, 1-2 completions".into())
}

fn connectivity() -> Outcome {
    for (g, r) in [(2, 2), (3, 1), (1, 3)] {
        suite(g, r, 4, 0, 100)?;
    }
    Ok(
        "100 random pairs in each radius-4 ball of (2,2), (3,1), (1,3) joined by flip chains"
            .into(),
    )
}

fn check_symmetries(base: &Triangulation, radius: usize) -> Result<usize, String> {
    let ball = flip_graph_ball(base, radius, None).map_err(e2s)?;
    let w = ComplexWindow::from_ball(&ball).map_err(e2s)?;
    let syms = gluing_symmetries(base);
    let auts: Option<BTreeSet<Vec<usize>>> = w
        .is_complete()
        .then(|| automorphisms(&w).map(|a| a.into_iter().map(|m| m.assignment).collect()))
        .transpose()
        .map_err(e2s)?;
    for s in &syms {
        let m = induced_map(s, &w).map_err(e2s)?;
        let inv = m.inverse().ok_or("induced map is not a bijection")?;
        ensure(
            m.simplicial && validate_map(&w, &w, &inv).map_err(e2s)?.0,
            || "induced map is not a simplicial automorphism".into(),
        )?;
        for (v, &img) in m.assignment.iter().enumerate() {
            let (a, b) = (&w.vertices()[v], &w.vertices()[img]);
            if a.trusted {
                ensure(b.trusted && w.degree(v) == w.degree(img), || {
                    format!("trusted degree of {} not preserved", a.label)
                })?;
            }
        }
        for node in ball.nodes() {
            let image: Vec<NormalArc> = node
                .arcs
                .iter()
                .map(|a| s.map_arc(base, a))
                .collect::<Result<_, _>>()
                .map_err(e2s)?;
            let j = ball.find(&image).ok_or("image of a node left the ball")?;
            ensure(
                class_profile(&node.triangulation) == class_profile(&ball.nodes()[j].triangulation),
                || "piece classes not preserved".into(),
            )?;
        }
        if let Some(auts) = &auts {
            ensure(auts.contains(&m.assignment), || {
                "induced map outside Aut".into()
            })?;
        }
        for t in &syms {
            let composed = induced_map(&s.after(t), &w).map_err(e2s)?;
            let tm = induced_map(t, &w).map_err(e2s)?;
            ensure(composed.assignment == m.after(&tm), || {
                "composition not respected".into()
            })?;
        }
    }
    Ok(syms.len())
}

fn induced_maps() -> Outcome {
    let klein = build_surface(1, 2, false).map_err(e2s)?;
    let n12 = check_symmetries(&klein, 8)?;
    let base = build_surface(2, 2, false).map_err(e2s)?;
    let n22 = check_symmetries(&base, 2)?;
    // other triangulations of (2,2) with larger symmetry groups
    let ball = flip_graph_ball(&base, 2, None).map_err(e2s)?;
    let mut extra = 0;
    for node in ball.nodes() {
        if gluing_symmetries(&node.triangulation).len() > 1 && extra < 4 {
            extra += 1;
            check_symmetries(&node.triangulation, 2)?;
        }
    }
    Ok(format!(
        "{n12} symmetries of (1,2), {n22} of the (2,2) base, plus {extra} symmetric (2,2) bases: all automorphisms"
    ))
}

fn configurations() -> Outcome {
    let patterns = [
        (
            "embedded triple",
            r#"{"labels":["p","q","s"],"triangles":[{"labels":["p","q","s"],"class":"embedded"}]}"#,
        ),
        (
            "regular non-embedded pair",
            r#"{"labels":["a","b"],"triangles":[{"labels":["a","b"],"class":"regular_non_embedded"}]}"#,
        ),
        (
            "twisted non-embedded pair",
            r#"{"labels":["a","b"],"triangles":[{"labels":["a","b"],"class":"twisted_non_embedded"}]}"#,
        ),
    ];
    let mut found = Vec::new();
    for (name, json) in patterns {
        let p = ConfigurationPattern::from_json(json).map_err(e2s)?;
        let w = find_configuration(&p, 2, 2, 3, None).map_err(e2s)?;
        ensure(w.is_some(), || format!("{name} not found"))?;
        found.push(name);
    }
    Ok(format!("found {}", found.join(", ")))
}

/// i(a, b) read off in every node of the ball where `a` is an arc.
fn oracle(ball: &FlipBall, arcs: &[NormalArc], i: usize, j: usize) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    for (n, node) in ball.nodes().iter().enumerate() {
        if let Some(e) = node.arcs.iter().position(|x| *x == arcs[i]) {
            let b = ball.to_node(n, &arcs[j]).expect("same base");
            out.insert(b.crossings_with(&node.triangulation, e));
        }
    }
    out
}

fn arc_oracles() -> Outcome {
    let t = build_surface(2, 2, false).map_err(e2s)?;
    let ball = flip_graph_ball(&t, 2, None).map_err(e2s)?;
    let arcs = ball.arcs();
    let mut round_trips = 0;
    for (n, node) in ball.nodes().iter().enumerate() {
        let nt = &node.triangulation;
        for e in 0..nt.num_arcs() {
            if !is_flippable(nt, e).map_err(e2s)? {
                continue;
            }
            let m = flip(nt, e).map_err(e2s)?;
            let back = m.inverse();
            for a in &arcs {
                let here = ball.to_node(n, a).map_err(e2s)?;
                // the old arc and the new one have no image on the far side
                if here.as_edge() == Some(e) || here == m.replacement {
                    continue;
                }
                let again = transport(&transport(&here, &m).map_err(e2s)?, &back).map_err(e2s)?;
                ensure(again == here, || {
                    format!("round trip moved {}", here.path())
                })?;
                round_trips += 1;
            }
        }
    }
    let mut straightened = 0;
    for a in &arcs {
        let (moves, end) = straighten(&t, a).map_err(e2s)?;
        let mut cur = a.clone();
        let mut weight = cur.weight();
        for m in &moves {
            cur = transport(&cur, m).map_err(e2s)?;
            ensure(cur.weight() < weight, || "weight did not decrease".into())?;
            weight = cur.weight();
        }
        ensure(cur.as_edge().is_some() && cur.is_based_on(&end), || {
            "not straightened".into()
        })?;
        straightened += 1;
    }
    let mut pairs = 0;
    for i in 0..arcs.len() {
        for j in 0..arcs.len() {
            let v = intersection_number(&t, &arcs[i], &arcs[j]).map_err(e2s)?;
            let o = oracle(&ball, &arcs, i, j);
            ensure(o.len() == 1 && o.contains(&v), || {
                format!(
                    "i({}, {}) = {v}, oracle {o:?}",
                    arcs[i].path(),
                    arcs[j].path()
                )
            })?;
            pairs += 1;
        }
    }
    Ok(format!(
        "{round_trips} transport round trips, {straightened} arcs straightened, {pairs} intersection numbers match the oracle"
    ))
}

type Criterion = (&'static str, u64, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 small case (1,1)", 1, mobius_band),
        ("2 small case (1,2)", 10, klein_hole),
        ("3 small case (2,1)", 60, genus_two),
        ("4 counts and invariance", 300, counts),
        ("5 flip properties", 300, flip_properties),
        ("6 connectivity", 120, connectivity),
        ("7 induced maps", 120, induced_maps),
        ("8 configuration existence", 300, configurations),
        ("9 arc machinery oracles", 300, arc_oracles),
    ];
    let mut failed = 0;
    for (name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let within = took <= Duration::from_secs(limit);
        let line = match (&outcome, within) {
            (Ok(detail), true) => format!("PASS criterion {name}: {detail}"),
            (Ok(detail), false) => {
                format!("FAIL criterion {name}: over the {limit} s limit; {detail}")
            }
            (Err(why), _) => format!("FAIL criterion {name}: {why}"),
        };
        println!("{line} [{:.2} s]", took.as_secs_f64());
        failed += (outcome.is_err() || !within) as usize;
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
