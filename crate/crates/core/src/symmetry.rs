//! Symmetries of a triangulation's gluing data and the maps they induce on
//! arc-complex windows.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::complex::{ComplexWindow, SimplicialMap};
use crate::error::{Error, Result};
use crate::normal::{ArcPath, NormalArc};
use crate::surface::{piece_class, PieceClass, Slot, Triangulation};

/// A relabelling of pieces, each composed with a rotation (by an even
/// amount) and possibly a reflection of its slots.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GluingSymmetry {
    pub pieces: Vec<usize>,
    pub shift: Vec<u8>,
    pub reflect: Vec<bool>,
}

impl GluingSymmetry {
    pub fn identity(n: usize) -> Self {
        GluingSymmetry {
            pieces: (0..n).collect(),
            shift: vec![0; n],
            reflect: vec![false; n],
        }
    }

    pub fn apply(&self, s: Slot) -> Slot {
        let (sh, k) = (self.shift[s.piece] as i32, s.index as i32);
        let i = if self.reflect[s.piece] {
            sh - k
        } else {
            sh + k
        };
        Slot::new(self.pieces[s.piece], i.rem_euclid(6) as u8)
    }

    /// `self` after `first`.
    pub fn after(&self, first: &GluingSymmetry) -> GluingSymmetry {
        let n = first.pieces.len();
        let mut out = GluingSymmetry::identity(n);
        for p in 0..n {
            let q = first.pieces[p];
            out.pieces[p] = self.pieces[q];
            out.reflect[p] = first.reflect[p] ^ self.reflect[q];
            // image of slot 0 fixes the shift
            out.shift[p] = self.apply(first.apply(Slot::new(p, 0))).index;
        }
        out
    }

    /// Whether this preserves the pairings and their reversal flags.
    pub fn check(&self, t: &Triangulation) -> Result<()> {
        let n = t.num_pieces();
        let ok_shape = self.pieces.len() == n
            && self.shift.len() == n
            && self.reflect.len() == n
            && self.shift.iter().all(|s| s % 2 == 0 && *s < 6)
            && self.pieces.iter().collect::<BTreeSet<_>>().len() == n
            && self.pieces.iter().all(|&p| p < n);
        if !ok_shape {
            return Err(Error::Rejected(
                "not a bijection of pieces with even rotations".into(),
            ));
        }
        for pr in t.pairings() {
            let (a, b) = (self.apply(pr.slot_a), self.apply(pr.slot_b));
            let flip = self.reflect[pr.slot_a.piece] ^ self.reflect[pr.slot_b.piece];
            let (_, o, rev) = t.glue(a);
            if o != b || rev != pr.reversal.flipped_if(flip) {
                return Err(Error::Rejected(format!(
                    "pairing {}-{} is not carried to a pairing",
                    pr.slot_a, pr.slot_b
                )));
            }
        }
        Ok(())
    }

    pub fn map_arc(&self, t: &Triangulation, a: &NormalArc) -> Result<NormalArc> {
        if !a.is_based_on(t) {
            return Err(Error::DifferentBases);
        }
        match a.path() {
            ArcPath::Edge(e) => {
                let s = self.apply(t.pairings()[*e].slot_a);
                NormalArc::edge(t, t.arc_at(s).expect("arc-slot"))
            }
            ArcPath::Crossing(x) => {
                NormalArc::from_exits(t, x.iter().map(|&s| self.apply(s)).collect())
            }
        }
    }
}

/// Every gluing symmetry of `t`, identity first.
pub fn gluing_symmetries(t: &Triangulation) -> Vec<GluingSymmetry> {
    let n = t.num_pieces();
    let mut out = BTreeSet::new();
    for q in 0..n {
        for shift in [0u8, 2, 4] {
            for reflect in [false, true] {
                if let Some(s) = propagate(t, q, shift, reflect) {
                    out.insert(s);
                }
            }
        }
    }
    let id = GluingSymmetry::identity(n);
    let mut v: Vec<GluingSymmetry> = out.into_iter().filter(|s| *s != id).collect();
    v.insert(0, id);
    v
}

fn propagate(t: &Triangulation, q: usize, shift: u8, reflect: bool) -> Option<GluingSymmetry> {
    let n = t.num_pieces();
    let mut sym = GluingSymmetry::identity(n);
    let mut set = vec![false; n];
    sym.pieces[0] = q;
    sym.shift[0] = shift;
    sym.reflect[0] = reflect;
    set[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(p) = queue.pop_front() {
        for s in t.arc_slots(p) {
            let (_, other, rev) = t.glue(s);
            let img = sym.apply(s);
            let (_, img_other, img_rev) = t.glue(img);
            let refl = sym.reflect[p] ^ (rev != img_rev);
            let k = other.index as i32;
            let j = img_other.index as i32;
            let sh = (if refl { j + k } else { j - k }).rem_euclid(6) as u8;
            let o = other.piece;
            if set[o] {
                if sym.pieces[o] != img_other.piece || sym.reflect[o] != refl || sym.shift[o] != sh
                {
                    return None;
                }
            } else {
                sym.pieces[o] = img_other.piece;
                sym.reflect[o] = refl;
                sym.shift[o] = sh;
                set[o] = true;
                queue.push_back(o);
            }
        }
    }
    sym.check(t).ok().map(|_| sym)
}

/// The map a gluing symmetry of the window's base induces on its vertices.
pub fn induced_map(sym: &GluingSymmetry, w: &ComplexWindow) -> Result<SimplicialMap> {
    let t = w
        .base()
        .ok_or_else(|| Error::Rejected("window has no base triangulation".into()))?;
    sym.check(t)?;
    let mut assignment = Vec::with_capacity(w.num_vertices());
    for v in w.vertices() {
        let a = v
            .arc
            .as_ref()
            .ok_or_else(|| Error::Rejected(format!("vertex {} carries no arc", v.label)))?;
        let img = sym.map_arc(t, a)?;
        let i = w.arc_index(&img).ok_or_else(|| {
            Error::Rejected(format!("image of {} lies outside the window", v.label))
        })?;
        assignment.push(i);
    }
    SimplicialMap::new(w, w, assignment)
}

/// Sorted piece classes of a triangulation.
pub fn class_profile(t: &Triangulation) -> Vec<PieceClass> {
    let mut v: Vec<PieceClass> = (0..t.num_pieces()).map(|p| piece_class(t, p)).collect();
    v.sort();
    v
}
