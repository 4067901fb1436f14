//! Flips: replace one arc of a triangulation by the other diagonal of the
//! quadrilateral formed by its two adjacent pieces.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::normal::{exits_of, segments_of, ArcPath, NormalArc, Segment};
use crate::surface::{cut_along, require_valid, ArcId, Pairing, Reversal, Slot, Triangulation};

/// What a hexagon slot corresponds to in the quadrilateral around a flip.
/// Quadrilateral corners are `A, B, C, D` = 0..3 and sides run A-B, B-C,
/// C-D, D-A = 0..3.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Feature {
    Diag,
    Side(u8),
    Vertex(u8),
}

use Feature::{Diag, Side, Vertex};

#[derive(Clone, Copy, Debug)]
struct Frame {
    piece: usize,
    feats: [Feature; 6],
    reflected: bool,
}

impl Frame {
    fn rotated(piece: usize, at: u8, pattern: [Feature; 6], reflected: bool) -> Frame {
        let mut feats = [Diag; 6];
        for (k, f) in pattern.iter().enumerate() {
            let i = (at as usize + if reflected { 6 - k } else { k }) % 6;
            feats[i] = *f;
        }
        Frame {
            piece,
            feats,
            reflected,
        }
    }

    fn index_of(&self, f: Feature) -> Option<u8> {
        self.feats.iter().position(|&x| x == f).map(|i| i as u8)
    }
}

/// The local data of one flip, usable in both directions.
#[derive(Clone, Debug)]
pub struct QuadFlip {
    arc: ArcId,
    before: [Frame; 2],
    after: [Frame; 2],
}

impl QuadFlip {
    pub fn new(t: &Triangulation, arc: ArcId) -> Result<QuadFlip> {
        let pr = *t.arc(arc)?;
        let (p, q) = (pr.slot_a, pr.slot_b);
        if p.piece == q.piece {
            return Err(Error::NotFlippable(arc));
        }
        let first = Frame::rotated(
            p.piece,
            p.index,
            [Diag, Vertex(0), Side(0), Vertex(1), Side(1), Vertex(2)],
            false,
        );
        let second = if pr.reversal.is_parallel() {
            // the shared arc runs C -> A in both pieces
            Frame::rotated(
                q.piece,
                q.index,
                [Diag, Vertex(2), Side(2), Vertex(3), Side(3), Vertex(0)],
                true,
            )
        } else {
            Frame::rotated(
                q.piece,
                q.index,
                [Diag, Vertex(2), Side(2), Vertex(3), Side(3), Vertex(0)],
                false,
            )
        };
        let after = [
            Frame {
                piece: p.piece,
                feats: [Side(1), Vertex(2), Side(2), Vertex(3), Diag, Vertex(1)],
                reflected: false,
            },
            Frame {
                piece: q.piece,
                feats: [Side(3), Vertex(0), Side(0), Vertex(1), Diag, Vertex(3)],
                reflected: false,
            },
        ];
        Ok(QuadFlip {
            arc,
            before: [first, second],
            after,
        })
    }

    pub fn arc(&self) -> ArcId {
        self.arc
    }

    pub fn reversed(&self) -> QuadFlip {
        QuadFlip {
            arc: self.arc,
            before: self.after,
            after: self.before,
        }
    }

    fn frame_of(frames: &[Frame; 2], piece: usize) -> Option<&Frame> {
        frames.iter().find(|f| f.piece == piece)
    }

    /// The triangulation after the flip. Arc ids are kept; the flipped arc's
    /// id names the new diagonal.
    pub fn apply(&self, t: &Triangulation) -> Triangulation {
        let mut moved: HashMap<Slot, (Slot, bool)> = HashMap::new();
        for f in &self.before {
            for k in 0..6u8 {
                if let Side(x) = f.feats[k as usize] {
                    let (g, i) = self
                        .after
                        .iter()
                        .find_map(|g| g.index_of(Side(x)).map(|i| (g, i)))
                        .expect("every side appears after the flip");
                    moved.insert(
                        Slot::new(f.piece, k),
                        (Slot::new(g.piece, i), f.reflected ^ g.reflected),
                    );
                }
            }
        }
        let remap = |s: Slot| moved.get(&s).copied().unwrap_or((s, false));
        let pairings = t
            .pairings()
            .iter()
            .enumerate()
            .map(|(id, pr)| {
                if id == self.arc {
                    let a = &self.after[0];
                    let b = &self.after[1];
                    let (ra, rb) = (
                        a.index_of(Diag).expect("diag"),
                        b.index_of(Diag).expect("diag"),
                    );
                    let rev = if a.reflected ^ b.reflected {
                        Reversal::Parallel
                    } else {
                        Reversal::Antiparallel
                    };
                    Pairing {
                        slot_a: Slot::new(a.piece, ra),
                        slot_b: Slot::new(b.piece, rb),
                        reversal: rev,
                    }
                } else {
                    let (a, fa) = remap(pr.slot_a);
                    let (b, fb) = remap(pr.slot_b);
                    Pairing {
                        slot_a: a,
                        slot_b: b,
                        reversal: pr.reversal.flipped_if(fa ^ fb),
                    }
                }
            })
            .collect();
        Triangulation::with_signature(t.pieces().to_vec(), pairings, t.signature())
    }

    /// Route from one quadrilateral feature to another through the
    /// destination pieces.
    fn route(frames: &[Frame; 2], from: Feature, to: Feature) -> Result<Vec<Segment>> {
        let valid = |a: u8, b: u8| {
            a != b && !(a % 2 == 1 && b % 2 == 1) && {
                let opp = |x: u8, y: u8| x.is_multiple_of(2) || (x + 3) % 6 == y;
                opp(a, b) && opp(b, a)
            }
        };
        let mut found = Vec::new();
        for f in frames {
            if let (Some(a), Some(b)) = (f.index_of(from), f.index_of(to)) {
                if valid(a, b) {
                    found.push(vec![Segment {
                        piece: f.piece,
                        from: a,
                        to: b,
                    }]);
                }
            }
        }
        for (x, y) in [(0, 1), (1, 0)] {
            let (f, g) = (&frames[x], &frames[y]);
            let (Some(a), Some(b)) = (f.index_of(from), g.index_of(to)) else {
                continue;
            };
            let (da, db) = (f.index_of(Diag).unwrap(), g.index_of(Diag).unwrap());
            if valid(a, da) && valid(db, b) {
                found.push(vec![
                    Segment {
                        piece: f.piece,
                        from: a,
                        to: da,
                    },
                    Segment {
                        piece: g.piece,
                        from: db,
                        to: b,
                    },
                ]);
            }
        }
        match found.len() {
            1 => Ok(found.pop().unwrap()),
            n => Err(Error::Rejected(format!(
                "flip rerouting {from:?} -> {to:?} found {n} routes"
            ))),
        }
    }

    /// Re-express a canonical path of `src` (the side of `before`) in `dst`.
    pub(crate) fn transport_path(
        &self,
        src: &Triangulation,
        dst: &Triangulation,
        path: &ArcPath,
    ) -> Result<ArcPath> {
        let exits = match path {
            ArcPath::Edge(e) if *e == self.arc => return Err(Error::UndefinedTransport(*e)),
            ArcPath::Edge(e) => return Ok(ArcPath::Edge(*e)),
            ArcPath::Crossing(x) => x,
        };
        let segs = segments_of(src, exits);
        let mut out: Vec<Segment> = Vec::with_capacity(segs.len() + 2);
        let mut i = 0;
        while i < segs.len() {
            let s = segs[i];
            let Some(f) = Self::frame_of(&self.before, s.piece) else {
                out.push(s);
                i += 1;
                continue;
            };
            let from = f.feats[s.from as usize];
            let mut last = s;
            let mut lf = *f;
            while lf.feats[last.to as usize] == Diag {
                i += 1;
                last = segs[i];
                lf = *Self::frame_of(&self.before, last.piece).expect("diag leads into quad");
            }
            let to = lf.feats[last.to as usize];
            i += 1;
            if matches!((from, to), (Vertex(_), Vertex(_))) {
                debug_assert!(out.is_empty() && i == segs.len());
                return Ok(ArcPath::Edge(self.arc));
            }
            out.extend(Self::route(&self.after, from, to)?);
        }
        Ok(canonical_exits(dst, exits_of(&out)))
    }

    /// The flipped arc of `src`, expressed in `dst`.
    pub(crate) fn old_diagonal(&self, dst: &Triangulation) -> Result<ArcPath> {
        let ends: Vec<Feature> = self
            .before
            .iter()
            .take(1)
            .map(|f| f.feats[(f.index_of(Diag).unwrap() as usize + 1) % 6])
            .collect();
        let other = self.before[0].feats[(self.before[0].index_of(Diag).unwrap() as usize + 5) % 6];
        let segs = Self::route(&self.after, ends[0], other)?;
        Ok(canonical_exits(dst, exits_of(&segs)))
    }
}

fn canonical_exits(t: &Triangulation, exits: Vec<Slot>) -> ArcPath {
    let rev = crate::normal::reverse_exits(t, &exits);
    ArcPath::Crossing(if rev < exits { rev } else { exits })
}

/// One flip with both triangulations and the replacement arc.
#[derive(Clone, Debug)]
pub struct FlipMove {
    pub source: Triangulation,
    pub arc: ArcId,
    /// The new arc, in the coordinates of `source`.
    pub replacement: NormalArc,
    pub target: Triangulation,
    quad: QuadFlip,
}

impl FlipMove {
    pub fn inverse(&self) -> FlipMove {
        let quad = self.quad.reversed();
        let replacement = NormalArc::from_path(
            &self.target,
            self.quad.old_diagonal(&self.target).expect("flip is local"),
        );
        FlipMove {
            source: self.target.clone(),
            arc: self.arc,
            replacement,
            target: self.source.clone(),
            quad,
        }
    }

    pub fn quad(&self) -> &QuadFlip {
        &self.quad
    }

    /// Image of an arc of `source` in `target`.
    pub fn transport(&self, a: &NormalArc) -> Result<NormalArc> {
        if !a.is_based_on(&self.source) {
            return Err(Error::DifferentBases);
        }
        let p = self
            .quad
            .transport_path(&self.source, &self.target, a.path())?;
        Ok(NormalArc::from_path(&self.target, p))
    }

    /// Like [`FlipMove::transport`], but the flipped arc maps to its
    /// expression as a crossing path in `target`.
    pub fn carry(&self, a: &NormalArc) -> NormalArc {
        match a.path() {
            ArcPath::Edge(e) if *e == self.arc => NormalArc::from_path(
                &self.target,
                self.quad.old_diagonal(&self.target).expect("flip is local"),
            ),
            _ => self.transport(a).expect("transport within one flip"),
        }
    }
}

fn missing_arc(t: &Triangulation, face: &[ArcId]) -> Result<ArcId> {
    let mut seen = vec![false; t.num_arcs()];
    for &a in face {
        t.arc(a)?;
        if std::mem::replace(&mut seen[a], true) {
            return Err(Error::Rejected(format!("arc {a} repeated in face")));
        }
    }
    let missing: Vec<ArcId> = (0..t.num_arcs()).filter(|&a| !seen[a]).collect();
    match missing.as_slice() {
        [e] => Ok(*e),
        _ => Err(Error::Rejected(format!(
            "a codimension-one face omits exactly one arc; this one omits {}",
            missing.len()
        ))),
    }
}

/// Every way to complete a face (all arcs but one) to a triangulation.
/// There are always one or two.
pub fn completions(t: &Triangulation, face: &[ArcId]) -> Result<Vec<NormalArc>> {
    require_valid(t)?;
    let e = missing_arc(t, face)?;
    let report = cut_along(t, face)?;
    let pr = t.pairings()[e];
    let region = report
        .regions
        .iter()
        .find(|r| r.pieces.contains(&pr.slot_a.piece))
        .expect("every piece lies in a region");
    let mut out = vec![NormalArc::edge(t, e)?];
    if region.euler == 1 {
        // a quadrilateral: the other diagonal completes it too
        let other = NormalArc::from_exits(t, vec![pr.slot_a])?;
        out.push(other);
    } else if region.euler != 0 {
        return Err(Error::Rejected(format!(
            "region around arc {e} has Euler characteristic {}",
            region.euler
        )));
    }
    Ok(out)
}

pub fn is_flippable(t: &Triangulation, arc: ArcId) -> Result<bool> {
    let pr = t.arc(arc)?;
    Ok(pr.slot_a.piece != pr.slot_b.piece)
}

pub fn flip(t: &Triangulation, arc: ArcId) -> Result<FlipMove> {
    require_valid(t)?;
    let quad = QuadFlip::new(t, arc)?;
    let target = quad.apply(t);
    let pr = t.pairings()[arc];
    let replacement = NormalArc::from_path(t, canonical_exits(t, vec![pr.slot_a]));
    Ok(FlipMove {
        source: t.clone(),
        arc,
        replacement,
        target,
        quad,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{build_surface, classify_surface, validate_triangulation};

    fn signatures() -> Vec<(u32, u32, bool)> {
        vec![
            (1, 2, false),
            (2, 1, false),
            (2, 2, false),
            (3, 1, false),
            (1, 1, true),
            (0, 4, true),
            (1, 2, true),
        ]
    }

    #[test]
    fn flips_preserve_validity_and_topology() {
        for (g, r, o) in signatures() {
            let t = build_surface(g, r, o).unwrap();
            let sig = classify_surface(&t).unwrap();
            for e in 0..t.num_arcs() {
                let Ok(m) = flip(&t, e) else { continue };
                assert!(
                    validate_triangulation(&m.target).is_empty(),
                    "{g},{r},{o} arc {e}"
                );
                assert_eq!(classify_surface(&m.target).unwrap(), sig);
            }
        }
    }

    #[test]
    fn flip_twice_restores() {
        for (g, r, o) in signatures() {
            let t = build_surface(g, r, o).unwrap();
            for e in 0..t.num_arcs() {
                let Ok(m) = flip(&t, e) else { continue };
                let back = m.inverse();
                assert_eq!(back.target, t);
                for a in 0..t.num_arcs() {
                    if a == e {
                        continue;
                    }
                    let x = NormalArc::edge(&t, a).unwrap();
                    let y = back.transport(&m.transport(&x).unwrap()).unwrap();
                    assert_eq!(x, y);
                }
                // the old diagonal returns as an edge after the inverse flip
                let old = back.replacement.clone();
                assert_eq!(back.transport(&old).unwrap().as_edge(), Some(e));
            }
        }
    }

    #[test]
    fn completions_count_matches_flippability() {
        for (g, r, o) in signatures() {
            let t = build_surface(g, r, o).unwrap();
            for e in 0..t.num_arcs() {
                let face: Vec<ArcId> = (0..t.num_arcs()).filter(|&a| a != e).collect();
                let c = completions(&t, &face).unwrap();
                let expected = if is_flippable(&t, e).unwrap() { 2 } else { 1 };
                assert_eq!(c.len(), expected, "{g},{r},{o} arc {e}");
            }
        }
    }

    #[test]
    fn self_glued_arc_is_not_flippable() {
        let t = build_surface(1, 2, false).unwrap();
        let e = (0..t.num_arcs())
            .find(|&e| !is_flippable(&t, e).unwrap())
            .unwrap();
        assert!(matches!(flip(&t, e), Err(Error::NotFlippable(_))));
    }

    #[test]
    fn replacement_crosses_old_arc_once() {
        let t = build_surface(2, 2, false).unwrap();
        for e in 0..t.num_arcs() {
            let Ok(m) = flip(&t, e) else { continue };
            assert_eq!(m.replacement.crossings_with(&t, e), 1);
            assert_eq!(m.replacement.weight(), 1);
            assert_eq!(m.transport(&m.replacement).unwrap().as_edge(), Some(e));
            let old = NormalArc::edge(&t, e).unwrap();
            assert!(matches!(m.transport(&old), Err(Error::UndefinedTransport(x)) if x == e));
        }
    }
}
