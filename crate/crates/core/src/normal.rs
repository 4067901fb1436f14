//! Essential arcs in normal position relative to a base triangulation.
//!
//! An arc that is not itself an arc of the base is stored as the sequence of
//! arc-slots through which it leaves successive pieces. It starts at the
//! boundary-slot opposite its first exit and ends at the boundary-slot
//! opposite the slot through which it last enters. Inside each piece it never
//! leaves through the slot it came in by. Among the two reading directions the
//! lexicographically smaller one is stored, so equal isotopy classes have equal
//! paths.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flip::{flip, FlipMove, QuadFlip};
use crate::surface::{require_valid, ArcId, Slot, Triangulation};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ArcPath {
    /// An arc of the base triangulation.
    Edge(ArcId),
    /// Exit slots, in canonical reading direction.
    Crossing(Vec<Slot>),
}

impl fmt::Display for ArcPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArcPath::Edge(e) => write!(f, "e{e}"),
            ArcPath::Crossing(x) => {
                write!(f, "[")?;
                for (i, s) in x.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{}.{}", s.piece, s.index)?;
                }
                write!(f, "]")
            }
        }
    }
}

/// Isotopy class of an essential arc, in canonical normal form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NormalArc {
    base: u64,
    path: ArcPath,
}

/// A piece of a normal arc inside one hexagon, between two of its sides.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Segment {
    pub piece: usize,
    pub from: u8,
    pub to: u8,
}

impl NormalArc {
    pub fn edge(t: &Triangulation, arc: ArcId) -> Result<NormalArc> {
        t.arc(arc)?;
        Ok(NormalArc {
            base: t.fingerprint(),
            path: ArcPath::Edge(arc),
        })
    }

    /// Build from an exit sequence that is already normal.
    pub fn from_exits(t: &Triangulation, exits: Vec<Slot>) -> Result<NormalArc> {
        let walk = Walk::from_exits(t, exits)?;
        let n = walk.exits.len();
        let path = walk.canonical(t)?;
        if !matches!(&path, ArcPath::Crossing(x) if x.len() == n) {
            return Err(Error::Rejected(
                "exit sequence is not in normal position".into(),
            ));
        }
        Ok(NormalArc {
            base: t.fingerprint(),
            path,
        })
    }

    pub(crate) fn from_path(t: &Triangulation, path: ArcPath) -> NormalArc {
        NormalArc {
            base: t.fingerprint(),
            path,
        }
    }

    pub fn path(&self) -> &ArcPath {
        &self.path
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn is_based_on(&self, t: &Triangulation) -> bool {
        self.base == t.fingerprint()
    }

    pub fn as_edge(&self) -> Option<ArcId> {
        match self.path {
            ArcPath::Edge(e) => Some(e),
            _ => None,
        }
    }

    /// Total number of crossings with base arcs.
    pub fn weight(&self) -> usize {
        match &self.path {
            ArcPath::Edge(_) => 0,
            ArcPath::Crossing(x) => x.len(),
        }
    }

    /// Number of crossings with one base arc.
    pub fn crossings_with(&self, t: &Triangulation, arc: ArcId) -> usize {
        match &self.path {
            ArcPath::Edge(_) => 0,
            ArcPath::Crossing(x) => x.iter().filter(|&&s| t.arc_at(s) == Some(arc)).count(),
        }
    }

    /// Distinct base arcs crossed, in first-crossing order.
    pub fn crossed_arcs(&self, t: &Triangulation) -> Vec<ArcId> {
        let mut out = Vec::new();
        if let ArcPath::Crossing(x) = &self.path {
            for s in x {
                let a = t.arc_at(*s).expect("valid");
                if !out.contains(&a) {
                    out.push(a);
                }
            }
        }
        out
    }

    pub fn segments(&self, t: &Triangulation) -> Vec<Segment> {
        match &self.path {
            ArcPath::Edge(e) => {
                let s = t.pairings()[*e].slot_a;
                vec![Segment {
                    piece: s.piece,
                    from: s.offset(-1).index,
                    to: s.offset(1).index,
                }]
            }
            ArcPath::Crossing(x) => segments_of(t, x),
        }
    }

    pub fn coordinates(&self, t: &Triangulation) -> NormalCoordinates {
        let mut counts = vec![[0u32; 15]; t.num_pieces()];
        let segs = self.segments(t);
        for s in &segs {
            counts[s.piece][segment_type(s.from, s.to)] += 1;
        }
        let first = segs[0];
        let last = segs[segs.len() - 1];
        NormalCoordinates {
            counts,
            endpoints: [
                Slot::new(first.piece, first.from),
                Slot::new(last.piece, last.to),
            ],
        }
    }

    pub fn from_coordinates(t: &Triangulation, c: &NormalCoordinates) -> Result<NormalArc> {
        require_valid(t)?;
        let (path, violations) = trace(t, c);
        match path {
            Some(path) if violations.is_empty() => Ok(NormalArc::from_path(t, path)),
            _ => Err(Error::Rejected(
                violations
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join("; "),
            )),
        }
    }
}

pub(crate) fn segments_of(t: &Triangulation, exits: &[Slot]) -> Vec<Segment> {
    let mut out = Vec::with_capacity(exits.len() + 1);
    out.push(Segment {
        piece: exits[0].piece,
        from: exits[0].opposite().index,
        to: exits[0].index,
    });
    for w in exits.windows(2) {
        let entry = t.partner(w[0]).expect("valid");
        out.push(Segment {
            piece: entry.piece,
            from: entry.index,
            to: w[1].index,
        });
    }
    let entry = t.partner(*exits.last().expect("nonempty")).expect("valid");
    out.push(Segment {
        piece: entry.piece,
        from: entry.index,
        to: entry.opposite().index,
    });
    out
}

pub(crate) fn exits_of(segs: &[Segment]) -> Vec<Slot> {
    segs[..segs.len() - 1]
        .iter()
        .map(|s| Slot::new(s.piece, s.to))
        .collect()
}

/// Index of the segment type joining two distinct sides of a hexagon.
pub fn segment_type(a: u8, b: u8) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    assert!(a != b && b < 6, "segment between sides {a} and {b}");
    let a = a as usize;
    let b = b as usize;
    a * 6 - a * (a + 1) / 2 + (b - a - 1)
}

pub fn segment_sides(ty: usize) -> (u8, u8) {
    let mut i = 0;
    for a in 0..6u8 {
        for b in a + 1..6 {
            if i == ty {
                return (a, b);
            }
            i += 1;
        }
    }
    panic!("segment type {ty} out of range")
}

/// A possibly non-normal arc: boundary start, exit slots, boundary end.
#[derive(Clone, Debug)]
pub(crate) struct Walk {
    pub start: Slot,
    pub exits: Vec<Slot>,
    pub end: Slot,
}

impl Walk {
    pub fn from_exits(t: &Triangulation, exits: Vec<Slot>) -> Result<Walk> {
        if exits.is_empty() {
            return Err(Error::Rejected("empty exit sequence".into()));
        }
        for w in exits.windows(2) {
            let entry = t
                .partner(w[0])
                .ok_or_else(|| Error::Rejected(format!("{} is not an arc-slot", w[0])))?;
            if entry.piece != w[1].piece {
                return Err(Error::Rejected(format!(
                    "exit {} is not in the piece entered through {}",
                    w[1], w[0]
                )));
            }
        }
        let last = t
            .partner(*exits.last().expect("nonempty"))
            .ok_or_else(|| Error::Rejected("last exit is not an arc-slot".into()))?;
        Ok(Walk {
            start: exits[0].opposite(),
            end: last.opposite(),
            exits,
        })
    }

    fn reversed(&self, t: &Triangulation) -> Walk {
        Walk {
            start: self.end,
            exits: reverse_exits(t, &self.exits),
            end: self.start,
        }
    }

    /// Remove corner wiggles at the ends and immediate backtracks, then pick
    /// the canonical direction.
    pub fn canonical(mut self, t: &Triangulation) -> Result<ArcPath> {
        loop {
            if self.exits.is_empty() {
                if self.start == self.end {
                    return Err(Error::Rejected("arc is inessential".into()));
                }
                debug_assert_eq!(self.start.piece, self.end.piece);
                let d = (self.end.index as i32 - self.start.index as i32).rem_euclid(6);
                let between = if d == 2 {
                    self.start.offset(1)
                } else {
                    self.start.offset(-1)
                };
                return Ok(ArcPath::Edge(t.arc_at(between).expect("valid")));
            }
            if let Some(i) = (0..self.exits.len().saturating_sub(1))
                .find(|&i| t.partner(self.exits[i]) == Some(self.exits[i + 1]))
            {
                self.exits.drain(i..i + 2);
                continue;
            }
            if let Some(w) = unwiggle_start(t, &self) {
                self = w;
                continue;
            }
            let rev = self.reversed(t);
            if let Some(w) = unwiggle_start(t, &rev) {
                self = w.reversed(t);
                continue;
            }
            break;
        }
        let rev = reverse_exits(t, &self.exits);
        Ok(ArcPath::Crossing(if rev < self.exits {
            rev
        } else {
            self.exits
        }))
    }
}

fn unwiggle_start(t: &Triangulation, w: &Walk) -> Option<Walk> {
    let k = w.exits[0];
    if k == w.start.opposite() {
        return None;
    }
    // start and k share a corner: the start of k if k follows the start slot
    let at_start = k.index == w.start.offset(1).index;
    let (_, o, rev) = t.glue(k);
    let o_start = if rev.is_parallel() {
        at_start
    } else {
        !at_start
    };
    let start = if o_start { o.offset(-1) } else { o.offset(1) };
    let exits = w.exits[1..].to_vec();
    let end = w.end;
    Some(Walk { start, exits, end })
}

pub(crate) fn reverse_exits(t: &Triangulation, exits: &[Slot]) -> Vec<Slot> {
    exits
        .iter()
        .rev()
        .map(|&s| t.partner(s).expect("valid"))
        .collect()
}

/// Per-piece segment counts plus endpoint markers.
///
/// `counts[p][ty]` is the number of segments in piece `p` of the type
/// [`segment_type`] assigns to a pair of sides. The two endpoints are the
/// boundary-slots on which the arc starts and ends.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalCoordinates {
    pub counts: Vec<[u32; 15]>,
    pub endpoints: [Slot; 2],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArcViolation {
    PieceCount {
        expected: usize,
        found: usize,
    },
    Matching {
        slot: Slot,
        here: u32,
        partner: u32,
    },
    Interleaving {
        piece: usize,
        first: (u8, u8),
        second: (u8, u8),
    },
    EndpointCount(u32),
    EndpointMismatch,
    Disconnected {
        traced: u32,
        total: u32,
    },
    Inessential,
    Empty,
}

impl fmt::Display for ArcViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArcViolation::PieceCount { expected, found } => {
                write!(f, "{found} count vectors for {expected} pieces")
            }
            ArcViolation::Matching {
                slot,
                here,
                partner,
            } => write!(f, "{slot}: {here} segment ends, its partner has {partner}"),
            ArcViolation::Interleaving {
                piece,
                first,
                second,
            } => write!(f, "piece {piece}: segments {first:?} and {second:?} cross"),
            ArcViolation::EndpointCount(n) => write!(f, "{n} endpoints on the boundary, need 2"),
            ArcViolation::EndpointMismatch => write!(f, "endpoint markers disagree with counts"),
            ArcViolation::Disconnected { traced, total } => {
                write!(
                    f,
                    "traced {traced} of {total} segments; arc is not connected"
                )
            }
            ArcViolation::Inessential => write!(f, "arc is boundary-parallel"),
            ArcViolation::Empty => write!(f, "no segments"),
        }
    }
}

/// All violations of the normal-arc invariants; empty iff valid.
pub fn validate_normal_arc(t: &Triangulation, c: &NormalCoordinates) -> Vec<ArcViolation> {
    if require_valid(t).is_err() {
        return vec![ArcViolation::PieceCount {
            expected: t.num_pieces(),
            found: c.counts.len(),
        }];
    }
    trace(t, c).1
}

fn crosses(a: (u8, u8), b: (u8, u8)) -> bool {
    let inside = |x: u8, lo: u8, hi: u8| lo < x && x < hi;
    let (lo, hi) = a;
    let (c, d) = b;
    if c == lo || c == hi || d == lo || d == hi {
        return false;
    }
    inside(c, lo, hi) != inside(d, lo, hi)
}

struct SideOrder<'a> {
    counts: &'a [[u32; 15]],
}

impl SideOrder<'_> {
    fn count(&self, p: usize, s: u8, d: u8) -> u32 {
        let t = (s as i32 - d as i32).rem_euclid(6) as u8;
        self.counts[p][segment_type(s, t)]
    }

    fn len(&self, p: usize, s: u8) -> u32 {
        (1..6).map(|d| self.count(p, s, d)).sum()
    }

    fn offset(&self, p: usize, s: u8, d: u8) -> u32 {
        (1..d).map(|x| self.count(p, s, x)).sum()
    }

    /// Follow the segment whose end sits at `pos` on side `s`; returns the
    /// side and position of its other end.
    fn across(&self, p: usize, s: u8, pos: u32) -> (u8, u32) {
        let mut acc = 0;
        for d in 1..6u8 {
            let c = self.count(p, s, d);
            if pos < acc + c {
                let k = pos - acc;
                let t = (s as i32 - d as i32).rem_euclid(6) as u8;
                return (t, self.offset(p, t, 6 - d) + (c - 1 - k));
            }
            acc += c;
        }
        unreachable!("position {pos} beyond side {s} of piece {p}")
    }
}

fn trace(t: &Triangulation, c: &NormalCoordinates) -> (Option<ArcPath>, Vec<ArcViolation>) {
    let mut v = Vec::new();
    if c.counts.len() != t.num_pieces() {
        v.push(ArcViolation::PieceCount {
            expected: t.num_pieces(),
            found: c.counts.len(),
        });
        return (None, v);
    }
    let order = SideOrder { counts: &c.counts };
    for pr in t.pairings() {
        let a = order.len(pr.slot_a.piece, pr.slot_a.index);
        let b = order.len(pr.slot_b.piece, pr.slot_b.index);
        if a != b {
            v.push(ArcViolation::Matching {
                slot: pr.slot_a,
                here: a,
                partner: b,
            });
        }
    }
    for (p, row) in c.counts.iter().enumerate() {
        for i in 0..15 {
            for j in i + 1..15 {
                if row[i] > 0 && row[j] > 0 && crosses(segment_sides(i), segment_sides(j)) {
                    v.push(ArcViolation::Interleaving {
                        piece: p,
                        first: segment_sides(i),
                        second: segment_sides(j),
                    });
                }
            }
        }
    }
    let total: u32 = c.counts.iter().flatten().sum();
    if total == 0 {
        v.push(ArcViolation::Empty);
    }
    let mut ends = Vec::new();
    for p in 0..t.num_pieces() {
        for s in [1u8, 3, 5] {
            for pos in 0..order.len(p, s) {
                ends.push((Slot::new(p, s), pos));
            }
        }
    }
    if ends.len() != 2 {
        v.push(ArcViolation::EndpointCount(ends.len() as u32));
    } else {
        let mut a = [ends[0].0, ends[1].0];
        let mut b = c.endpoints;
        a.sort();
        b.sort();
        if a != b {
            v.push(ArcViolation::EndpointMismatch);
        }
    }
    if !v.is_empty() {
        return (None, v);
    }
    let (start, mut pos) = ends[0];
    let (mut piece, mut side) = (start.piece, start.index);
    let mut exits = Vec::new();
    let mut traced = 0u32;
    let end = loop {
        let (other, opos) = order.across(piece, side, pos);
        traced += 1;
        let here = Slot::new(piece, other);
        if !here.is_arc_slot() {
            break here;
        }
        if traced > total {
            break here;
        }
        exits.push(here);
        let (_, o, rev) = t.glue(here);
        let len = order.len(piece, other);
        pos = if rev.is_parallel() {
            opos
        } else {
            len - 1 - opos
        };
        piece = o.piece;
        side = o.index;
    };
    if traced != total {
        v.push(ArcViolation::Disconnected { traced, total });
        return (None, v);
    }
    let walk = Walk { start, exits, end };
    match walk.canonical(t) {
        Ok(p) => (Some(p), v),
        Err(_) => {
            v.push(ArcViolation::Inessential);
            (None, v)
        }
    }
}

fn same_base(a: &NormalArc, b: &NormalArc) -> Result<()> {
    if a.base != b.base {
        Err(Error::DifferentBases)
    } else {
        Ok(())
    }
}

/// Isotopy equality of two arcs on the same base.
pub fn arcs_equal(a: &NormalArc, b: &NormalArc) -> Result<bool> {
    same_base(a, b)?;
    Ok(a.path == b.path)
}

/// Move an arc across a flip. The flipped arc itself has no image.
pub fn transport(a: &NormalArc, m: &FlipMove) -> Result<NormalArc> {
    m.transport(a)
}

/// Flips that turn `a` into an arc of the triangulation, each strictly
/// lowering its crossing weight.
pub fn straighten(t: &Triangulation, a: &NormalArc) -> Result<(Vec<FlipMove>, Triangulation)> {
    let (moves, t, _) = straighten_inner(t, a)?;
    Ok((moves, t))
}

fn straighten_inner(
    t: &Triangulation,
    a: &NormalArc,
) -> Result<(Vec<FlipMove>, Triangulation, ArcId)> {
    require_valid(t)?;
    if !a.is_based_on(t) {
        return Err(Error::DifferentBases);
    }
    let mut t = t.clone();
    let mut path = a.path.clone();
    let mut moves = Vec::new();
    loop {
        let cur = NormalArc::from_path(&t, path.clone());
        if let ArcPath::Edge(e) = path {
            return Ok((moves, t, e));
        }
        let w = cur.weight();
        let mut best: Option<(usize, ArcId, QuadFlip, Triangulation, ArcPath)> = None;
        for e in cur.crossed_arcs(&t) {
            let Ok(q) = QuadFlip::new(&t, e) else {
                continue;
            };
            let nt = q.apply(&t);
            let np = q.transport_path(&t, &nt, &path)?;
            let nw = NormalArc::from_path(&nt, np.clone()).weight();
            if best.as_ref().is_none_or(|b| (nw, e) < (b.0, b.1)) {
                best = Some((nw, e, q, nt, np));
            }
        }
        match best {
            Some((nw, e, _, nt, np)) if nw < w => {
                moves.push(flip(&t, e)?);
                t = nt;
                path = np;
            }
            _ => return Err(Error::NoDecreasingFlip(w)),
        }
    }
}

/// Geometric intersection number of two arcs on the same base.
pub fn intersection_number(t: &Triangulation, a: &NormalArc, b: &NormalArc) -> Result<usize> {
    same_base(a, b)?;
    if !a.is_based_on(t) {
        return Err(Error::DifferentBases);
    }
    if a.path == b.path {
        return Ok(0);
    }
    let (moves, end, e) = straighten_inner(t, a)?;
    let mut b = b.clone();
    for m in &moves {
        b = m.carry(&b);
    }
    Ok(b.crossings_with(&end, e))
}
