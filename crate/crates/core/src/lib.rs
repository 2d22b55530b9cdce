//! Dense multipartite quantum-state simulation built around directed
//! entanglement `E(X → Y) = S(Y) − S(XY)`.
//!
//! The crate is organized bottom-up:
//!
//! * [`registry`], [`state`], [`random`]: labeled subsystems, pure states and
//!   density matrices, local unitaries, partial traces, Haar sampling.
//! * [`entropy`]: von Neumann and Shannon entropies, classicization, directed
//!   entanglement, diagonal random variables, thermodynamic entropy.
//! * [`channels`]: Kraus channels, composition, Stinespring dilation, presets,
//!   Holevo quantity and coherent information.
//! * [`protocols`]: measurement with observer chains, ensemble preparation,
//!   classical communication, the two-channel processing chain, and the
//!   zeroth/second-law thermodynamic simulations.
//! * [`suite`]: randomized verification of the directed-entanglement
//!   inequalities with signed-margin reports.

pub mod channels;
pub mod entropy;
pub mod error;
pub mod io;
pub mod linalg;
pub mod prob;
pub mod protocols;
pub mod random;
pub mod registry;
pub mod report;
pub mod state;
pub mod suite;
pub mod tol;

pub use channels::{Channel, Ensemble};
pub use error::{QilError, Result};
pub use linalg::{CMatrix, CVector, C64};
pub use prob::ProbabilityVector;
pub use registry::{Kind, Subsystem, SystemRegistry};
pub use report::ExperimentReport;
pub use state::{DensityMatrix, PureState, Unitary};
pub use tol::{Tolerances, DEFAULT_MAX_TOTAL_DIM, TOL};
