//! Dense complex linear algebra for small Hermitian problems.

mod eigen;
mod functions;
mod matrix;

pub use eigen::{eig_hermitian, EigenDecomposition};
pub(crate) use functions::floored;
pub use functions::{
    apply_spectral_function, apply_to_decomposition, inv_sqrt_psd, ln_psd, lowering_apply,
    polar_unitary, sqrt_psd, Domain, Lowering, EIGENVALUE_FLOOR, NEGATIVE_CLAMP,
};
pub use matrix::{ComplexMatrix, HermitianOperator};
