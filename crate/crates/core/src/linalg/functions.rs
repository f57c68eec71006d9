//! Matrix functions built on the Hermitian eigendecomposition.

use num_complex::Complex64;

use super::eigen::{eig_hermitian, EigenDecomposition};
use super::matrix::{ComplexMatrix, HermitianOperator};
use crate::error::{Error, Result};

/// Eigenvalues with modulus at or below this are treated as exact zeros.
pub const EIGENVALUE_FLOOR: f64 = 1e-12;
/// Default tolerance for slightly negative eigenvalues of PSD operators.
pub const NEGATIVE_CLAMP: f64 = 1e-10;

/// Domain of a scalar function applied to a spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// Any real eigenvalue.
    Real,
    /// Eigenvalues must be >= -clamp; they are clamped to 0 before evaluation.
    NonNegative,
}

/// Returns V diag(f(λ)) V†, re-symmetrized.
///
/// With [`Domain::NonNegative`], eigenvalues in `[-negative_clamp, 0)` are
/// clamped to zero and anything below is rejected.
pub fn apply_spectral_function(
    h: &HermitianOperator,
    f: impl Fn(f64) -> f64,
    domain: Domain,
    negative_clamp: f64,
) -> Result<HermitianOperator> {
    let eig = eig_hermitian(h);
    apply_to_decomposition(&eig, f, domain, negative_clamp)
}

pub fn apply_to_decomposition(
    eig: &EigenDecomposition,
    f: impl Fn(f64) -> f64,
    domain: Domain,
    negative_clamp: f64,
) -> Result<HermitianOperator> {
    let values = match domain {
        Domain::Real => eig.eigenvalues.iter().map(|&x| f(x)).collect::<Vec<_>>(),
        Domain::NonNegative => {
            if let Some(&bad) = eig.eigenvalues.iter().find(|&&x| x < -negative_clamp) {
                return Err(Error::Domain { eigenvalue: bad });
            }
            eig.eigenvalues.iter().map(|&x| f(x.max(0.0))).collect()
        }
    };
    Ok(HermitianOperator::hermitize(&eig.compose(&values)))
}

/// Principal square root of a PSD operator.
pub fn sqrt_psd(h: &HermitianOperator) -> Result<HermitianOperator> {
    apply_spectral_function(h, f64::sqrt, Domain::NonNegative, NEGATIVE_CLAMP)
}

/// Principal logarithm; zero eigenvalues map to -inf, so callers should
/// only use it on operators bounded away from zero.
pub fn ln_psd(h: &HermitianOperator) -> Result<HermitianOperator> {
    apply_spectral_function(h, f64::ln, Domain::NonNegative, NEGATIVE_CLAMP)
}

/// `h^{-1/2}` for a positive definite operator.
pub fn inv_sqrt_psd(h: &HermitianOperator) -> Result<HermitianOperator> {
    apply_spectral_function(h, |x| 1.0 / x.sqrt(), Domain::NonNegative, NEGATIVE_CLAMP)
}

/// Unitary `U` with `U a = sqrt(a† a)`, i.e. the adjoint of the polar
/// factor `W` in `a = W sqrt(a† a)`.
///
/// The singular vectors come from the Hermitian dilation
/// `[[0, a], [a†, 0]]`, whose eigenpairs are `±σ, (u; ±v)/√2`. This avoids
/// forming an inverse and keeps the rank test accurate to `ε σ_max`.
pub fn polar_unitary(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.dim();
    let mut dilation = ComplexMatrix::zeros(2 * n);
    for i in 0..n {
        for j in 0..n {
            dilation[(i, n + j)] = a[(i, j)];
            dilation[(n + j, i)] = a[(i, j)].conj();
        }
    }
    let eig = eig_hermitian(&HermitianOperator::hermitize(&dilation));
    // ascending: the last n eigenvalues are the singular values
    let sigma_max = eig.eigenvalues[2 * n - 1];
    let sigma_min = eig.eigenvalues[n];
    if sigma_max <= 0.0 || sigma_min <= 1e-12 * sigma_max {
        let ratio = if sigma_max > 0.0 {
            sigma_min.max(0.0) / sigma_max
        } else {
            0.0
        };
        return Err(Error::Rank { ratio });
    }
    // W = 2 Σ u_k v_k† over the positive half of the spectrum
    let mut w = ComplexMatrix::zeros(n);
    for k in n..2 * n {
        let x = eig.vector(k);
        let (u, v) = x.split_at(n);
        for i in 0..n {
            for j in 0..n {
                w[(i, j)] += u[i] * v[j].conj() * 2.0;
            }
        }
    }
    Ok(w.adjoint())
}

/// Solves `½(ρ L + L ρ) = a` on the support of `ρ`, given ρ's eigenbasis.
///
/// Caches the decomposition so several operators can be lowered with the
/// same `ρ`.
#[derive(Debug, Clone)]
pub struct Lowering {
    eig: EigenDecomposition,
}

impl Lowering {
    pub fn new(rho: &HermitianOperator) -> Self {
        Lowering {
            eig: eig_hermitian(rho),
        }
    }

    pub fn decomposition(&self) -> &EigenDecomposition {
        &self.eig
    }

    /// Entries `2 a_jk / (λ_j + λ_k)` in ρ's eigenbasis; pairs whose
    /// eigenvalue sum is at or below [`EIGENVALUE_FLOOR`] are zero.
    pub fn apply(&self, a: &HermitianOperator) -> Result<HermitianOperator> {
        a.matrix().check_same_dim(&self.eig.eigenvectors)?;
        let lambda = floored(&self.eig.eigenvalues);
        let mut local = self.eig.to_eigenbasis(a.matrix());
        let n = lambda.len();
        for j in 0..n {
            for k in 0..n {
                let sum = lambda[j] + lambda[k];
                local[(j, k)] = if sum > EIGENVALUE_FLOOR {
                    local[(j, k)] * (2.0 / sum)
                } else {
                    Complex64::new(0.0, 0.0)
                };
            }
        }
        Ok(HermitianOperator::hermitize(
            &self.eig.from_eigenbasis(&local),
        ))
    }
}

pub fn lowering_apply(rho: &HermitianOperator, a: &HermitianOperator) -> Result<HermitianOperator> {
    rho.matrix().check_same_dim(a.matrix())?;
    Lowering::new(rho).apply(a)
}

pub(crate) fn floored(values: &[f64]) -> Vec<f64> {
    values
        .iter()
        .map(|&x| if x.abs() <= EIGENVALUE_FLOOR { 0.0 } else { x })
        .collect()
}
