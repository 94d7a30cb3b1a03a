//! Algebra of the permutation-symmetric subspaces of three-qudit systems,
//! the entanglement witnesses built on them, and the solvers (see-saw,
//! interior-point SDP, sampling) used to map out what they detect.

pub mod error;
pub mod io;
pub mod linalg;
pub mod povm;
pub mod rng;
pub mod sdp;
pub mod statespace;
pub mod seesaw;
pub mod subspaces;
pub mod suite;
pub mod witness;

pub use error::{Error, Result};
pub use linalg::{CMatrix, EigenDecomposition, Operator, Shape, StateVector};
