//! Combinatorial engine for arc complexes of compact surfaces with boundary.
//!
//! Triangulations are hexagon decompositions ([`surface`]); arcs are stored as
//! canonical normal paths relative to a base triangulation ([`normal`]); flips
//! and bounded flip-graph balls live in [`flip`] and [`ball`]; finite windows
//! of the arc complex and their simplicial maps in [`complex`].

pub mod ball;
pub mod complex;
pub mod config;
pub mod error;
pub mod export;
pub mod flip;
pub mod model;
pub mod normal;
pub mod report;
pub mod surface;
pub mod symmetry;

pub use ball::{flip_graph_ball, BallEdge, BallNode, FlipBall};
pub use complex::{
    automorphism_group, automorphisms, build_complex, enumerate_injective_endomorphisms,
    identify_group, validate_map, vertex_degree_and_link, ComplexWindow, GroupInvariants,
    GroupName, GroupOrder, GroupReport, LinkReport, SimplicialMap, Vertex,
};
pub use config::{find_configuration, ConfigurationPattern, Witness};
pub use error::{Error, Result};
pub use export::{BallExport, ComplexExport};
pub use flip::{completions, flip, is_flippable, FlipMove, QuadFlip};
pub use model::{explicit_small_model, interior_isomorphism, SmallCase};
pub use normal::{
    arcs_equal, intersection_number, straighten, transport, validate_normal_arc, ArcPath,
    ArcViolation, NormalArc, NormalCoordinates,
};
pub use report::{run_invariant_suite, run_small_case_report, Check, Report, SuiteOptions};
pub use surface::{
    boundary_cycles, build_surface, classify_piece, classify_surface, cut_along,
    validate_triangulation, ArcId, Pairing, Piece, PieceClass, Region, RegionReport, Reversal,
    SideLabel, Slot, SlotKind, SurfaceSignature, Triangulation, Violation,
};
pub use symmetry::{class_profile, gluing_symmetries, induced_map, GluingSymmetry};
