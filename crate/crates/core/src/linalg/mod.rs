//! Dense complex linear algebra sized for few-qudit problems: row-major
//! matrices, a cyclic Jacobi Hermitian eigensolver, Cholesky, Haar sampling,
//! and tensor-product bookkeeping (partial trace / transpose, Schmidt data).

mod cmatrix;
mod eig;
mod haar;
mod operator;

pub use cmatrix::CMatrix;
pub use eig::{
    cholesky, cholesky_inverse, cholesky_solve, hermitian_eig, log_det_from_cholesky,
    min_eigenvalue, EigenDecomposition,
};
pub use haar::{haar_random_unitary, random_state_amplitudes};
pub use operator::{Operator, Shape, StateVector, MAX_DIM};

#[allow(unused_imports)]
pub(crate) use operator::{decode_index, encode_index};
