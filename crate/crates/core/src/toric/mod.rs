//! Toric codes with primal and dual defects, string evolutions, continuous
//! interpolation codes, and braid monodromies.

pub mod braid;
pub mod code;
pub mod config;
pub mod evolution;
pub mod interp;
pub mod io;
pub mod lattice;
pub mod monodromy;
pub mod transport;

pub use braid::{compile_braid, BraidGenerator, Routing};
pub use code::{build_code, loop_operator, ToricCode};
pub use config::{
    hardcore_check, hardcore_check_continuous, ContinuousDefectConfig, DefectConfig, DefectId, HardcoreReport,
    Placement,
};
pub use evolution::{apply_string, validate_evolution, StepClass, StringEvolution, StringStep};
pub use interp::{det_winding_check, edge_code, face_code, Triangle};
pub use io::{ToricDocument, ToricSetup, DEFAULT_SEPARATION};
pub use lattice::{Axis, Dir, Layer, LayerEdge, Site, Square, TorusLattice};
pub use monodromy::{face_checks, flatness_probe_toric, monodromy, FaceCheckReport, MonodromyReport};
pub use transport::{transport_along, ConfigPath, PathSegment, SegmentMove};
