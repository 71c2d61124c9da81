//! Geometry of the PPT region around the maximally mixed state.
//!
//! Dense complex linear algebra, density-matrix sampling, partial transposes
//! and Schmidt decompositions, closed-form ball radii, a Schmidt-rank-2
//! witness search, and seeded experiment drivers that produce CSV/JSON reports.

pub mod bipartite;
pub mod bounds;
pub mod distill;
pub mod error;
pub mod harness;
pub mod io;
pub mod linalg;
pub mod rng;
pub mod states;

pub use bipartite::{is_ppt, partial_transpose, schmidt, BipartiteSplit, SchmidtDecomposition};
pub use error::{Error, Result};
pub use linalg::{hermitian_eigen, hs_distance, ComplexMatrix, HermitianEigen};
pub use states::{DensityMatrix, PureState};
