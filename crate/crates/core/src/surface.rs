//! Hexagon decompositions of compact surfaces with boundary.
//!
//! A [`Triangulation`] is a set of hexagonal pieces whose sides alternate
//! between arc-slots (even indices 0, 2, 4) and boundary-slots (odd indices).
//! Arc-slots are glued in pairs; each pair is one arc of the triangulation.
//! Collapsing every boundary component to a point turns a piece into an ideal
//! triangle: arc-slots become its sides and boundary-slots its corners.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a pairing in [`Triangulation::pairings`].
pub type ArcId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Slot {
    pub piece: usize,
    #[serde(rename = "slot")]
    pub index: u8,
}

impl Slot {
    pub fn new(piece: usize, index: u8) -> Self {
        Slot { piece, index }
    }

    pub fn is_arc_slot(self) -> bool {
        self.index.is_multiple_of(2)
    }

    /// Slot of the same piece `delta` steps around the hexagon.
    pub fn offset(self, delta: i32) -> Slot {
        Slot::new(self.piece, (self.index as i32 + delta).rem_euclid(6) as u8)
    }

    /// The side across the hexagon.
    pub fn opposite(self) -> Slot {
        self.offset(3)
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "piece {} slot {}", self.piece, self.index)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SlotKind {
    Arc,
    Boundary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reversal {
    Parallel,
    Antiparallel,
}

impl Reversal {
    pub fn is_parallel(self) -> bool {
        self == Reversal::Parallel
    }

    pub fn flipped_if(self, cond: bool) -> Reversal {
        match (self, cond) {
            (r, false) => r,
            (Reversal::Parallel, true) => Reversal::Antiparallel,
            (Reversal::Antiparallel, true) => Reversal::Parallel,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Piece {
    pub slots: [SlotKind; 6],
}

impl Piece {
    pub fn hexagon() -> Self {
        use SlotKind::*;
        Piece {
            slots: [Arc, Boundary, Arc, Boundary, Arc, Boundary],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pairing {
    pub slot_a: Slot,
    pub slot_b: Slot,
    pub reversal: Reversal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceSignature {
    pub genus: u32,
    pub boundary: u32,
    pub orientable: bool,
}

impl SurfaceSignature {
    pub fn new(genus: u32, boundary: u32, orientable: bool) -> Self {
        SurfaceSignature {
            genus,
            boundary,
            orientable,
        }
    }

    pub fn euler(&self) -> i64 {
        let g = self.genus as i64;
        let r = self.boundary as i64;
        if self.orientable {
            2 - 2 * g - r
        } else {
            2 - g - r
        }
    }

    /// Number of arcs in any triangulation, `-3χ`.
    pub fn arc_count(&self) -> i64 {
        -3 * self.euler()
    }

    /// Number of pieces in any triangulation, `-2χ`.
    pub fn piece_count(&self) -> i64 {
        -2 * self.euler()
    }

    pub fn check(&self) -> Result<()> {
        if self.boundary == 0 {
            return Err(Error::Rejected("boundary count must be at least 1".into()));
        }
        if !self.orientable && self.genus == 0 {
            return Err(Error::Rejected(
                "nonorientable genus must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

impl fmt::Display for SurfaceSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o = if self.orientable {
            "orientable"
        } else {
            "nonorientable"
        };
        write!(f, "({},{},{})", self.genus, self.boundary, o)
    }
}

#[derive(Serialize, Deserialize)]
struct TriangulationRepr {
    pieces: Vec<Piece>,
    pairings: Vec<Pairing>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    signature: Option<SurfaceSignature>,
}

/// Gluing structure of hexagon pieces. May be invalid; see
/// [`validate_triangulation`].
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(from = "TriangulationRepr", into = "TriangulationRepr")]
pub struct Triangulation {
    pieces: Vec<Piece>,
    pairings: Vec<Pairing>,
    signature: Option<SurfaceSignature>,
    // slot (piece * 6 + index) -> (arc, partner); first pairing wins on conflicts
    table: Vec<Option<(ArcId, Slot)>>,
}

impl From<TriangulationRepr> for Triangulation {
    fn from(r: TriangulationRepr) -> Self {
        Triangulation::with_signature(r.pieces, r.pairings, r.signature)
    }
}

impl From<Triangulation> for TriangulationRepr {
    fn from(t: Triangulation) -> Self {
        TriangulationRepr {
            pieces: t.pieces,
            pairings: t.pairings,
            signature: t.signature,
        }
    }
}

impl PartialEq for Triangulation {
    fn eq(&self, other: &Self) -> bool {
        self.pieces == other.pieces && self.pairings == other.pairings
    }
}

impl Eq for Triangulation {}

impl Triangulation {
    pub fn new(pieces: Vec<Piece>, pairings: Vec<Pairing>) -> Self {
        Self::with_signature(pieces, pairings, None)
    }

    pub fn with_signature(
        pieces: Vec<Piece>,
        pairings: Vec<Pairing>,
        signature: Option<SurfaceSignature>,
    ) -> Self {
        let mut table = vec![None; pieces.len() * 6];
        for (id, p) in pairings.iter().enumerate() {
            for (s, o) in [(p.slot_a, p.slot_b), (p.slot_b, p.slot_a)] {
                if s.piece < pieces.len() && s.index < 6 {
                    let cell = &mut table[s.piece * 6 + s.index as usize];
                    if cell.is_none() {
                        *cell = Some((id, o));
                    }
                }
            }
        }
        Triangulation {
            pieces,
            pairings,
            signature,
            table,
        }
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn pairings(&self) -> &[Pairing] {
        &self.pairings
    }

    pub fn signature(&self) -> Option<SurfaceSignature> {
        self.signature
    }

    pub fn set_signature(&mut self, s: Option<SurfaceSignature>) {
        self.signature = s;
    }

    pub fn num_pieces(&self) -> usize {
        self.pieces.len()
    }

    pub fn num_arcs(&self) -> usize {
        self.pairings.len()
    }

    pub fn arc(&self, id: ArcId) -> Result<&Pairing> {
        self.pairings.get(id).ok_or(Error::UnknownArc(id))
    }

    /// Arc glued at `slot`, if any.
    pub fn arc_at(&self, slot: Slot) -> Option<ArcId> {
        self.cell(slot).map(|c| c.0)
    }

    pub fn partner(&self, slot: Slot) -> Option<Slot> {
        self.cell(slot).map(|c| c.1)
    }

    fn cell(&self, slot: Slot) -> Option<(ArcId, Slot)> {
        if slot.piece >= self.pieces.len() || slot.index >= 6 {
            return None;
        }
        self.table[slot.piece * 6 + slot.index as usize]
    }

    /// Partner slot and reversal; panics on an unpaired slot, which a
    /// validated triangulation never has.
    pub(crate) fn glue(&self, slot: Slot) -> (ArcId, Slot, Reversal) {
        let (id, o) = self
            .cell(slot)
            .unwrap_or_else(|| panic!("unpaired {slot} in validated triangulation"));
        (id, o, self.pairings[id].reversal)
    }

    pub fn arc_slots(&self, piece: usize) -> [Slot; 3] {
        [
            Slot::new(piece, 0),
            Slot::new(piece, 2),
            Slot::new(piece, 4),
        ]
    }

    /// Arc ids on the three arc-slots of a piece.
    pub fn piece_arcs(&self, piece: usize) -> [ArcId; 3] {
        self.arc_slots(piece)
            .map(|s| self.arc_at(s).expect("validated triangulation"))
    }

    /// Deterministic 64-bit fingerprint of the gluing structure.
    pub fn fingerprint(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.pieces.hash(&mut h);
        self.pairings.hash(&mut h);
        h.finish()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    WrongSlotKind(Slot),
    SlotOutOfRange(Slot),
    PairsBoundarySlot(Slot),
    SelfPairedSlot(Slot),
    MultiplyPairedSlot(Slot),
    UnpairedSlot(Slot),
    OddPieceCount(usize),
    Disconnected {
        components: usize,
    },
    SignatureMismatch {
        declared: SurfaceSignature,
        computed: SurfaceSignature,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::WrongSlotKind(s) => write!(f, "{s} breaks arc/boundary alternation"),
            Violation::SlotOutOfRange(s) => write!(f, "{s} does not exist"),
            Violation::PairsBoundarySlot(s) => write!(f, "{s} is a boundary-slot but is paired"),
            Violation::SelfPairedSlot(s) => write!(f, "{s} is paired with itself"),
            Violation::MultiplyPairedSlot(s) => write!(f, "{s} appears in several pairings"),
            Violation::UnpairedSlot(s) => write!(f, "{s} is unpaired"),
            Violation::OddPieceCount(n) => write!(f, "{n} pieces; arc count 3n/2 needs n even"),
            Violation::Disconnected { components } => {
                write!(f, "glued surface has {components} components")
            }
            Violation::SignatureMismatch { declared, computed } => {
                write!(
                    f,
                    "declared signature {declared} but structure is {computed}"
                )
            }
        }
    }
}

/// All violations of the triangulation invariants; empty iff valid.
pub fn validate_triangulation(t: &Triangulation) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = t.pieces.len();
    for (p, piece) in t.pieces.iter().enumerate() {
        for (k, kind) in piece.slots.iter().enumerate() {
            let want = if k % 2 == 0 {
                SlotKind::Arc
            } else {
                SlotKind::Boundary
            };
            if *kind != want {
                out.push(Violation::WrongSlotKind(Slot::new(p, k as u8)));
            }
        }
    }
    let mut uses = vec![0usize; n * 6];
    for pr in &t.pairings {
        if pr.slot_a == pr.slot_b {
            out.push(Violation::SelfPairedSlot(pr.slot_a));
        }
        for s in [pr.slot_a, pr.slot_b] {
            if s.piece >= n || s.index >= 6 {
                out.push(Violation::SlotOutOfRange(s));
                continue;
            }
            if !s.is_arc_slot() {
                out.push(Violation::PairsBoundarySlot(s));
            }
            uses[s.piece * 6 + s.index as usize] += 1;
        }
    }
    for p in 0..n {
        for k in [0u8, 2, 4] {
            let s = Slot::new(p, k);
            match uses[p * 6 + k as usize] {
                0 => out.push(Violation::UnpairedSlot(s)),
                1 => {}
                _ => out.push(Violation::MultiplyPairedSlot(s)),
            }
        }
    }
    let unpaired = out.iter().any(|v| matches!(v, Violation::UnpairedSlot(_)));
    if n % 2 == 1 && !unpaired {
        out.push(Violation::OddPieceCount(n));
    }
    let comps = components(t);
    if n > 0 && comps > 1 {
        out.push(Violation::Disconnected { components: comps });
    }
    if out.is_empty() {
        if let Some(declared) = t.signature {
            let computed = compute_signature(t);
            if computed != declared {
                out.push(Violation::SignatureMismatch { declared, computed });
            }
        }
    }
    out
}

fn components(t: &Triangulation) -> usize {
    let n = t.pieces.len();
    let mut seen = vec![false; n];
    let mut count = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        let mut q = VecDeque::from([s]);
        while let Some(p) = q.pop_front() {
            for k in [0u8, 2, 4] {
                if let Some(o) = t.partner(Slot::new(p, k)) {
                    if o.piece < n && !seen[o.piece] {
                        seen[o.piece] = true;
                        q.push_back(o.piece);
                    }
                }
            }
        }
    }
    count
}

pub(crate) fn require_valid(t: &Triangulation) -> Result<()> {
    let v = validate_triangulation(t);
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidTriangulation(v))
    }
}

/// One step of a walk around region boundaries: the side just traversed and
/// the direction of travel in its piece's cyclic order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Step {
    pub slot: Slot,
    pub dir: i32,
}

/// Advance past the corner at the far end of `step`. Arc-slots for which
/// `is_side` is false are crossed through their pairing.
pub(crate) fn next_side(t: &Triangulation, step: Step, is_side: &dyn Fn(Slot) -> bool) -> Step {
    let mut cur = step;
    loop {
        let n = cur.slot.offset(cur.dir);
        if !n.is_arc_slot() || is_side(n) {
            return Step {
                slot: n,
                dir: cur.dir,
            };
        }
        // arriving at the start of `n` when moving forward, its end when moving back
        let at_start = cur.dir == 1;
        let (_, o, rev) = t.glue(n);
        let o_start = if rev.is_parallel() {
            at_start
        } else {
            !at_start
        };
        cur = if o_start {
            Step { slot: o, dir: -1 }
        } else {
            Step { slot: o, dir: 1 }
        };
        // `cur.slot` is the partner arc-slot; the next offset leaves it
    }
}

/// Walk all region boundaries. Returns the circles as step sequences.
pub(crate) fn trace_circles(
    t: &Triangulation,
    pieces: &[usize],
    is_side: &dyn Fn(Slot) -> bool,
) -> Vec<Vec<Step>> {
    let mut visited = vec![false; t.num_pieces() * 6];
    let mut circles = Vec::new();
    for &p in pieces {
        for k in 0..6u8 {
            let s = Slot::new(p, k);
            if visited[p * 6 + k as usize] || (s.is_arc_slot() && !is_side(s)) {
                continue;
            }
            let start = Step { slot: s, dir: 1 };
            let mut cur = start;
            let mut circle = Vec::new();
            loop {
                visited[cur.slot.piece * 6 + cur.slot.index as usize] = true;
                circle.push(cur);
                cur = next_side(t, cur, is_side);
                if cur.slot == start.slot {
                    break;
                }
            }
            circles.push(circle);
        }
    }
    circles
}

/// Boundary components of the glued surface, as cycles of boundary-slots.
pub fn boundary_cycles(t: &Triangulation) -> Vec<Vec<Slot>> {
    let all: Vec<usize> = (0..t.num_pieces()).collect();
    trace_circles(t, &all, &|_| false)
        .into_iter()
        .map(|c| c.into_iter().map(|s| s.slot).collect())
        .collect()
}

/// Solve the sign system over the given arcs. `None` when unsatisfiable.
pub(crate) fn piece_signs(
    t: &Triangulation,
    pieces: &[usize],
    use_arc: &dyn Fn(ArcId) -> bool,
) -> Option<Vec<i8>> {
    let mut sign = vec![0i8; t.num_pieces()];
    for &s in pieces {
        if sign[s] != 0 {
            continue;
        }
        sign[s] = 1;
        let mut q = VecDeque::from([s]);
        while let Some(p) = q.pop_front() {
            for slot in t.arc_slots(p) {
                let (id, o, rev) = t.glue(slot);
                if !use_arc(id) {
                    continue;
                }
                let want = if rev.is_parallel() { -sign[p] } else { sign[p] };
                if o.piece == p {
                    if rev.is_parallel() {
                        return None;
                    }
                    continue;
                }
                if sign[o.piece] == 0 {
                    sign[o.piece] = want;
                    q.push_back(o.piece);
                } else if sign[o.piece] != want {
                    return None;
                }
            }
        }
    }
    Some(sign)
}

fn compute_signature(t: &Triangulation) -> SurfaceSignature {
    let chi = t.num_pieces() as i64 - t.num_arcs() as i64;
    let r = boundary_cycles(t).len() as i64;
    let all: Vec<usize> = (0..t.num_pieces()).collect();
    let orientable = piece_signs(t, &all, &|_| true).is_some();
    let genus = if orientable {
        (2 - chi - r) / 2
    } else {
        2 - chi - r
    };
    SurfaceSignature::new(genus as u32, r as u32, orientable)
}

/// Topological type of the glued surface.
pub fn classify_surface(t: &Triangulation) -> Result<SurfaceSignature> {
    require_valid(t)?;
    Ok(compute_signature(t))
}

/// Deterministic triangulation of the given surface.
///
/// The surface is presented as a polygon with side word
/// `a1 a1 .. ag ag c1 c1⁻¹ .. c(r-1) c(r-1)⁻¹` (nonorientable) or
/// `a1 b1 a1⁻¹ b1⁻¹ .. c1 c1⁻¹ ..` (orientable); all polygon vertices are
/// boundary components, and the polygon is fanned from vertex 0.
pub fn build_surface(genus: u32, boundary: u32, orientable: bool) -> Result<Triangulation> {
    let sig = SurfaceSignature::new(genus, boundary, orientable);
    sig.check()?;
    if sig.arc_count() < 3 {
        return Err(Error::UnsupportedSignature(sig.to_string()));
    }
    let mut word: Vec<(usize, bool)> = Vec::new();
    if orientable {
        for i in 0..genus as usize {
            word.extend([
                (2 * i, true),
                (2 * i + 1, true),
                (2 * i, false),
                (2 * i + 1, false),
            ]);
        }
    } else {
        for i in 0..genus as usize {
            word.extend([(i, true), (i, true)]);
        }
    }
    let base = 2 * genus as usize;
    for j in 0..boundary as usize - 1 {
        word.extend([(base + j, true), (base + j, false)]);
    }
    let m = word.len();
    debug_assert!(m >= 4);
    let pieces = vec![Piece::hexagon(); m - 2];
    // polygon side s -> slot of its fan triangle
    let side_slot = |s: usize| -> Slot {
        if s == 0 {
            Slot::new(0, 0)
        } else if s == m - 1 {
            Slot::new(m - 3, 4)
        } else {
            Slot::new(s - 1, 2)
        }
    };
    let mut pairings = Vec::new();
    let mut done = vec![false; m];
    for s in 0..m {
        if done[s] {
            continue;
        }
        let (letter, exp) = word[s];
        let o = (s + 1..m)
            .find(|&o| word[o].0 == letter)
            .expect("letters come in pairs");
        done[s] = true;
        done[o] = true;
        let reversal = if exp == word[o].1 {
            Reversal::Parallel
        } else {
            Reversal::Antiparallel
        };
        pairings.push(Pairing {
            slot_a: side_slot(s),
            slot_b: side_slot(o),
            reversal,
        });
    }
    for d in 2..=m - 2 {
        pairings.push(Pairing {
            slot_a: Slot::new(d - 2, 4),
            slot_b: Slot::new(d - 1, 0),
            reversal: Reversal::Antiparallel,
        });
    }
    let t = Triangulation::with_signature(pieces, pairings, Some(sig));
    require_valid(&t)?;
    Ok(t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PieceClass {
    Embedded,
    /// Two sides glued to one arc with opposite directions: an annulus.
    RegularNonEmbedded,
    /// Two sides glued to one arc with the same direction: a Möbius band.
    TwistedNonEmbedded,
}

pub fn classify_piece(t: &Triangulation, piece: usize) -> Result<PieceClass> {
    if piece >= t.num_pieces() {
        return Err(Error::UnknownPiece(piece));
    }
    require_valid(t)?;
    Ok(piece_class(t, piece))
}

pub(crate) fn piece_class(t: &Triangulation, piece: usize) -> PieceClass {
    for s in t.arc_slots(piece) {
        let (_, o, rev) = t.glue(s);
        if o.piece == piece {
            return if rev.is_parallel() {
                PieceClass::TwistedNonEmbedded
            } else {
                PieceClass::RegularNonEmbedded
            };
        }
    }
    PieceClass::Embedded
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SideLabel {
    Arc {
        arc: ArcId,
        slot: Slot,
    },
    /// A maximal run of boundary-slots joined across uncut arcs.
    Boundary {
        slots: Vec<Slot>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub pieces: Vec<usize>,
    /// One cyclic word per boundary circle of the region.
    pub boundary_words: Vec<Vec<SideLabel>>,
    pub orientable: bool,
    pub euler: i64,
}

impl Region {
    pub fn is_hexagon(&self) -> bool {
        self.euler == 1 && self.boundary_words.len() == 1 && self.boundary_words[0].len() == 6
    }

    pub fn arc_sides(&self) -> impl Iterator<Item = ArcId> + '_ {
        self.boundary_words
            .iter()
            .flatten()
            .filter_map(|l| match l {
                SideLabel::Arc { arc, .. } => Some(*arc),
                _ => None,
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionReport {
    pub regions: Vec<Region>,
}

/// Cut the surface along a subset of arcs and describe the pieces left over.
pub fn cut_along(t: &Triangulation, arcs: &[ArcId]) -> Result<RegionReport> {
    require_valid(t)?;
    let mut cut = vec![false; t.num_arcs()];
    for &a in arcs {
        *cut.get_mut(a).ok_or(Error::UnknownArc(a))? = true;
    }
    let n = t.num_pieces();
    let mut region_of = vec![usize::MAX; n];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for s in 0..n {
        if region_of[s] != usize::MAX {
            continue;
        }
        let id = groups.len();
        region_of[s] = id;
        let mut members = vec![s];
        let mut q = VecDeque::from([s]);
        while let Some(p) = q.pop_front() {
            for slot in t.arc_slots(p) {
                let (a, o, _) = t.glue(slot);
                if !cut[a] && region_of[o.piece] == usize::MAX {
                    region_of[o.piece] = id;
                    members.push(o.piece);
                    q.push_back(o.piece);
                }
            }
        }
        members.sort_unstable();
        groups.push(members);
    }
    let is_side = |s: Slot| cut[t.arc_at(s).expect("valid")];
    let regions = groups
        .into_iter()
        .map(|pieces| {
            let internal = t
                .pairings
                .iter()
                .enumerate()
                .filter(|(a, pr)| !cut[*a] && pieces.binary_search(&pr.slot_a.piece).is_ok())
                .count() as i64;
            let orientable = piece_signs(t, &pieces, &|a| !cut[a]).is_some();
            let boundary_words = trace_circles(t, &pieces, &is_side)
                .into_iter()
                .map(|c| circle_word(t, &c))
                .collect();
            Region {
                euler: pieces.len() as i64 - internal,
                pieces,
                boundary_words,
                orientable,
            }
        })
        .collect();
    Ok(RegionReport { regions })
}

fn circle_word(t: &Triangulation, circle: &[Step]) -> Vec<SideLabel> {
    // rotate so the word starts on an arc side when there is one
    let start = circle
        .iter()
        .position(|s| s.slot.is_arc_slot())
        .unwrap_or(0);
    let mut word: Vec<SideLabel> = Vec::new();
    for i in 0..circle.len() {
        let s = circle[(start + i) % circle.len()].slot;
        if s.is_arc_slot() {
            word.push(SideLabel::Arc {
                arc: t.arc_at(s).expect("valid"),
                slot: s,
            });
        } else if let Some(SideLabel::Boundary { slots }) = word.last_mut() {
            slots.push(s);
        } else {
            word.push(SideLabel::Boundary { slots: vec![s] });
        }
    }
    word
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_piece(rev: [Reversal; 3]) -> Triangulation {
        let pairings = (0..3)
            .map(|i| Pairing {
                slot_a: Slot::new(0, 2 * i as u8),
                slot_b: Slot::new(1, 2 * i as u8),
                reversal: rev[i],
            })
            .collect();
        Triangulation::new(vec![Piece::hexagon(); 2], pairings)
    }

    #[test]
    fn single_unpaired_slot_is_named() {
        let t = Triangulation::new(
            vec![Piece::hexagon()],
            vec![Pairing {
                slot_a: Slot::new(0, 0),
                slot_b: Slot::new(0, 2),
                reversal: Reversal::Parallel,
            }],
        );
        assert_eq!(
            validate_triangulation(&t),
            vec![Violation::UnpairedSlot(Slot::new(0, 4))]
        );
    }

    #[test]
    fn dropped_pairing_names_both_slots() {
        let t = build_surface(1, 2, false).unwrap();
        let mut pairings = t.pairings().to_vec();
        // the self-glued pairing; dropping it keeps the pieces connected
        let dropped = pairings.remove(0);
        let t = Triangulation::new(t.pieces().to_vec(), pairings);
        let mut want = vec![
            Violation::UnpairedSlot(dropped.slot_a),
            Violation::UnpairedSlot(dropped.slot_b),
        ];
        let mut got = validate_triangulation(&t);
        want.sort_by_key(|v| v.to_string());
        got.sort_by_key(|v| v.to_string());
        assert_eq!(got, want);
    }

    #[test]
    fn disconnected_is_reported() {
        let a = two_piece([Reversal::Antiparallel; 3]);
        let mut pairings = a.pairings().to_vec();
        for p in a.pairings() {
            pairings.push(Pairing {
                slot_a: Slot::new(p.slot_a.piece + 2, p.slot_a.index),
                slot_b: Slot::new(p.slot_b.piece + 2, p.slot_b.index),
                reversal: p.reversal,
            });
        }
        let t = Triangulation::new(vec![Piece::hexagon(); 4], pairings);
        assert_eq!(
            validate_triangulation(&t),
            vec![Violation::Disconnected { components: 2 }]
        );
    }

    #[test]
    fn two_pieces_all_antiparallel_is_pair_of_pants() {
        let t = two_piece([Reversal::Antiparallel; 3]);
        // two oppositely oriented copies glued antiparallel in the same frame:
        // the sign system wants equal signs, so the result is orientable
        let sig = classify_surface(&t).unwrap();
        assert!(sig.orientable);
        assert_eq!(sig.euler(), -1);
    }

    #[test]
    fn small_signatures_classify() {
        let s = classify_surface(&build_surface(2, 2, false).unwrap()).unwrap();
        assert_eq!(s, SurfaceSignature::new(2, 2, false));
        assert_eq!(s.euler(), -2);
        let t = build_surface(2, 1, false).unwrap();
        assert_eq!((t.num_arcs(), t.num_pieces()), (3, 2));
        assert_eq!(classify_surface(&t).unwrap().euler(), -1);
        let t = build_surface(0, 3, true).unwrap();
        assert_eq!((t.num_arcs(), t.num_pieces()), (3, 2));
        assert_eq!(
            classify_surface(&t).unwrap(),
            SurfaceSignature::new(0, 3, true)
        );
    }

    #[test]
    fn build_counts() {
        let t = build_surface(1, 2, false).unwrap();
        assert_eq!((t.num_arcs(), t.num_pieces()), (3, 2));
        let t = build_surface(3, 1, false).unwrap();
        assert_eq!((t.num_arcs(), t.num_pieces()), (6, 4));
        assert_eq!(
            classify_surface(&t).unwrap(),
            SurfaceSignature::new(3, 1, false)
        );
        assert!(matches!(
            build_surface(1, 1, false),
            Err(Error::UnsupportedSignature(_))
        ));
        assert!(build_surface(0, 1, false).is_err());
        assert!(build_surface(1, 0, true).is_err());
    }

    #[test]
    fn build_many_signatures_round_trip() {
        for g in 0..4 {
            for r in 1..5 {
                for o in [true, false] {
                    let sig = SurfaceSignature::new(g, r, o);
                    match build_surface(g, r, o) {
                        Ok(t) => {
                            assert_eq!(classify_surface(&t).unwrap(), sig);
                            assert_eq!(t.num_arcs() as i64, sig.arc_count());
                            assert_eq!(t.num_pieces() as i64, sig.piece_count());
                        }
                        Err(_) => assert!(sig.check().is_err() || sig.arc_count() < 3),
                    }
                }
            }
        }
    }

    #[test]
    fn piece_classes() {
        let t = two_piece([Reversal::Antiparallel; 3]);
        assert_eq!(classify_piece(&t, 0).unwrap(), PieceClass::Embedded);
        assert!(matches!(classify_piece(&t, 7), Err(Error::UnknownPiece(7))));
        // (1,2): word a a c c⁻¹ gives one twisted and one regular piece
        let t = build_surface(1, 2, false).unwrap();
        let mut classes: Vec<_> = (0..2).map(|p| classify_piece(&t, p).unwrap()).collect();
        classes.sort();
        assert_eq!(
            classes,
            vec![
                PieceClass::RegularNonEmbedded,
                PieceClass::TwistedNonEmbedded
            ]
        );
    }

    #[test]
    fn cut_all_and_none() {
        let t = build_surface(2, 2, false).unwrap();
        let all: Vec<_> = (0..t.num_arcs()).collect();
        let rep = cut_along(&t, &all).unwrap();
        assert_eq!(rep.regions.len(), 4);
        assert!(rep.regions.iter().all(|r| r.is_hexagon() && r.orientable));
        let rep = cut_along(&t, &[]).unwrap();
        assert_eq!(rep.regions.len(), 1);
        assert_eq!(rep.regions[0].euler, -2);
        assert!(!rep.regions[0].orientable);
        assert_eq!(rep.regions[0].boundary_words.len(), 2);
        assert!(matches!(cut_along(&t, &[99]), Err(Error::UnknownArc(99))));
    }

    #[test]
    fn twisted_piece_closes_to_mobius_band() {
        let t = build_surface(1, 2, false).unwrap();
        let p = (0..2)
            .find(|&p| piece_class(&t, p) == PieceClass::TwistedNonEmbedded)
            .unwrap();
        let self_arc = t
            .arc_slots(p)
            .into_iter()
            .find(|&s| t.partner(s).unwrap().piece == p)
            .map(|s| t.arc_at(s).unwrap())
            .unwrap();
        let others: Vec<_> = (0..t.num_arcs()).filter(|&a| a != self_arc).collect();
        let rep = cut_along(&t, &others).unwrap();
        let reg = rep.regions.iter().find(|r| r.pieces == vec![p]).unwrap();
        assert!(!reg.orientable);
        assert_eq!(reg.euler, 0);
        assert_eq!(reg.boundary_words.len(), 1);
        // the twisted piece carries the only crosscap of (1,2)
        let rep = cut_along(&t, &[self_arc]).unwrap();
        assert_eq!(rep.regions.len(), 1);
        assert!(rep.regions[0].orientable);
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let t = build_surface(2, 2, false).unwrap();
        let s = t.to_json().unwrap();
        let back = Triangulation::from_json(&s).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_json().unwrap(), s);
    }
}
