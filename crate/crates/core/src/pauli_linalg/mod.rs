//! Pauli algebra, frames, interpolating unitaries and site-local operators.

pub mod frame;
pub mod interp;
pub mod local;
pub mod pauli;

pub use frame::{
    orthonormalize, orthonormalize_columns, principal_cosines, principal_overlap,
    subspace_distance, subspace_equal, CMatrix, Frame, FRAME_TOL, SUBSPACE_TOL,
};
pub use interp::{alpha, beta, interp_unitary_apply, Direction, InterpCoeffs};
pub use local::{expm, DenseOperator, FrameOperator, LocalOperator};
pub use pauli::{Pauli1, PauliString, Phase};
