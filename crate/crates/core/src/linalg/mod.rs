//! Dense complex matrices and the Hermitian eigensolver everything else builds on.

mod eigen;
mod matrix;

pub use eigen::{hermitian_eigen, is_psd, HermitianEigen, PsdCheck, MAX_SWEEPS, OFF_DIAGONAL_TOL};
pub use matrix::{hs_distance, ComplexMatrix, HERMITIAN_TOL};
