//! Classical divergences and the Bures-Uhlmann fidelity with its optimal
//! measurement.
//!
//! The optimal Bhattacharyya measurement for a pair of invertible states is
//! the eigenbasis of the likelihood operator
//! `M = ρ1^{-1/2} sqrt(ρ1^{1/2} ρ0 ρ1^{1/2}) ρ1^{-1/2}`; its eigenvalues are
//! the square-rooted likelihood ratios `sqrt(p0_b / p1_b)` of that
//! measurement.

use crate::channel::{outcome_distribution, DensityMatrix, OutcomeDistribution, Povm};
use crate::error::{Error, Result};
use crate::linalg::{
    eig_hermitian, inv_sqrt_psd, ln_psd, sqrt_psd, ComplexMatrix, HermitianOperator,
};

/// Probabilities above this on an outcome with `q <= Q_ZERO` make KL infinite.
const P_SIGNIFICANT: f64 = 1e-12;
const Q_ZERO: f64 = 1e-15;

fn check_lengths(p: &OutcomeDistribution, q: &OutcomeDistribution) -> Result<()> {
    if p.len() != q.len() {
        return Err(Error::shape(
            format!("{} outcomes", p.len()),
            format!("{} outcomes", q.len()),
        ));
    }
    Ok(())
}

/// K(p/q) = Σ p ln(p/q) in nats, with 0 ln 0 = 0.
pub fn kl_divergence(p: &OutcomeDistribution, q: &OutcomeDistribution) -> Result<f64> {
    check_lengths(p, q)?;
    let mut acc = 0.0;
    for (index, (&pb, &qb)) in p.probabilities().iter().zip(q.probabilities()).enumerate() {
        if qb <= Q_ZERO {
            if pb > P_SIGNIFICANT {
                return Err(Error::DivergenceInfinite {
                    index,
                    p: pb,
                    q: qb,
                });
            }
            continue;
        }
        if pb > 0.0 {
            acc += pb * (pb / qb).ln();
        }
    }
    Ok(acc.max(0.0))
}

/// Σ sqrt(p_b q_b).
pub fn bhattacharyya_coefficient(p: &OutcomeDistribution, q: &OutcomeDistribution) -> Result<f64> {
    check_lengths(p, q)?;
    Ok(p.probabilities()
        .iter()
        .zip(q.probabilities())
        .map(|(a, b)| (a * b).sqrt())
        .sum())
}

/// arccos of the Bhattacharyya coefficient, in `[0, π/2]`.
pub fn bhattacharyya_angle(p: &OutcomeDistribution, q: &OutcomeDistribution) -> Result<f64> {
    Ok(clamped_arccos(bhattacharyya_coefficient(p, q)?))
}

pub(crate) fn clamped_arccos(x: f64) -> f64 {
    x.clamp(0.0, 1.0).acos()
}

/// Fisher quadratic form Σ dp_b² / p_b for a tangent vector `dp`.
pub fn fisher_quadratic(p: &OutcomeDistribution, dp: &[f64]) -> Result<f64> {
    if p.len() != dp.len() {
        return Err(Error::shape(
            format!("{} outcomes", p.len()),
            format!("{} entries", dp.len()),
        ));
    }
    let total: f64 = dp.iter().sum();
    if total.abs() > 1e-12 {
        return Err(Error::Distribution {
            reason: format!("tangent vector sums to {total:e}, expected 0"),
        });
    }
    let mut acc = 0.0;
    for (index, (&pb, &d)) in p.probabilities().iter().zip(dp).enumerate() {
        if d == 0.0 {
            continue;
        }
        if pb <= 0.0 {
            return Err(Error::Support { index, weight: d });
        }
        acc += d * d / pb;
    }
    Ok(acc)
}

/// ρ1^{1/2} ρ0 ρ1^{1/2}, Hermitized.
fn sandwich(rho0: &DensityMatrix, sqrt_rho1: &HermitianOperator) -> HermitianOperator {
    let s = sqrt_rho1.matrix();
    HermitianOperator::hermitize(&(&(s * rho0.matrix()) * s))
}

/// tr sqrt(ρ1^{1/2} ρ0 ρ1^{1/2}), clamped to `[0, 1]`. Singular states are fine.
pub fn fidelity_root(rho0: &DensityMatrix, rho1: &DensityMatrix) -> Result<f64> {
    rho0.matrix().check_same_dim(rho1.matrix())?;
    let s1 = sqrt_psd(rho1.operator())?;
    let spectrum = eig_hermitian(&sandwich(rho0, &s1)).eigenvalues;
    let root: f64 = spectrum.iter().map(|&x| x.max(0.0).sqrt()).sum();
    Ok(root.clamp(0.0, 1.0))
}

/// Bures angle arccos(fidelity_root).
pub fn bures_angle(rho0: &DensityMatrix, rho1: &DensityMatrix) -> Result<f64> {
    Ok(clamped_arccos(fidelity_root(rho0, rho1)?))
}

/// Re tr(ρ0^{1/2} ρ1^{1/2}); never exceeds the fidelity root.
pub fn naive_lower_bound(rho0: &DensityMatrix, rho1: &DensityMatrix) -> Result<f64> {
    rho0.matrix().check_same_dim(rho1.matrix())?;
    let s0 = sqrt_psd(rho0.operator())?;
    let s1 = sqrt_psd(rho1.operator())?;
    Ok(s0.matrix().trace_product(s1.matrix()).re)
}

/// U_c = sqrt(ρ1^{1/2} ρ0 ρ1^{1/2}) ρ1^{-1/2} ρ0^{-1/2}, the unitary that
/// maximizes |tr(U ρ0^{1/2} ρ1^{1/2})|.
pub fn optimal_unitary(rho0: &DensityMatrix, rho1: &DensityMatrix) -> Result<ComplexMatrix> {
    rho0.matrix().check_same_dim(rho1.matrix())?;
    rho0.require_invertible("rho0")?;
    rho1.require_invertible("rho1")?;
    let s1 = sqrt_psd(rho1.operator())?;
    let root = sqrt_psd(&sandwich(rho0, &s1))?;
    let inv_s1 = inv_sqrt_psd(rho1.operator())?;
    let inv_s0 = inv_sqrt_psd(rho0.operator())?;
    Ok(&(root.matrix() * inv_s1.matrix()) * inv_s0.matrix())
}

/// M = ρ1^{-1/2} sqrt(ρ1^{1/2} ρ0 ρ1^{1/2}) ρ1^{-1/2}. Swapping the
/// arguments gives N = M^{-1}.
pub fn likelihood_operator(
    rho0: &DensityMatrix,
    rho1: &DensityMatrix,
) -> Result<HermitianOperator> {
    rho0.matrix().check_same_dim(rho1.matrix())?;
    rho1.require_invertible("rho1")?;
    let s1 = sqrt_psd(rho1.operator())?;
    let root = sqrt_psd(&sandwich(rho0, &s1))?;
    let inv_s1 = inv_sqrt_psd(rho1.operator())?;
    let m = &(inv_s1.matrix() * root.matrix()) * inv_s1.matrix();
    Ok(HermitianOperator::hermitize(&m))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BuresResult {
    pub fidelity_root: f64,
    pub bures_angle: f64,
    /// Rank-one projectors onto the eigenbasis of the likelihood operator.
    pub optimal_povm: Povm,
    /// Eigenvalues `m_b` of the likelihood operator, in POVM order.
    pub likelihood_eigenvalues: Vec<f64>,
}

impl BuresResult {
    /// Uhlmann transition probability cos² B.
    pub fn transition_probability(&self) -> f64 {
        self.fidelity_root * self.fidelity_root
    }
}

pub fn bures_optimal_measurement(
    rho0: &DensityMatrix,
    rho1: &DensityMatrix,
) -> Result<BuresResult> {
    rho0.require_invertible("rho0")?;
    let m = likelihood_operator(rho0, rho1)?;
    let eig = eig_hermitian(&m);
    let optimal_povm = Povm::from_orthonormal_basis(&eig.eigenvectors)?;
    let fidelity_root = fidelity_root(rho0, rho1)?;
    Ok(BuresResult {
        fidelity_root,
        bures_angle: clamped_arccos(fidelity_root),
        optimal_povm,
        likelihood_eigenvalues: eig.eigenvalues.iter().map(|&x| x.max(0.0)).collect(),
    })
}

/// K_B = 2 tr(ρ0 ln M): the classical KL divergence achieved by the
/// optimal Bhattacharyya measurement. A lower bound on the quantum KL
/// maximum, not the maximum itself.
pub fn kl_lower_bound_bures(rho0: &DensityMatrix, rho1: &DensityMatrix) -> Result<f64> {
    rho0.require_invertible("rho0")?;
    let m = likelihood_operator(rho0, rho1)?;
    let ln_m = ln_psd(&m)?;
    Ok(2.0 * rho0.operator().trace_product_re(&ln_m))
}

/// Bhattacharyya coefficient attained by a given measurement.
pub fn achieved_coefficient(
    rho0: &DensityMatrix,
    rho1: &DensityMatrix,
    povm: &Povm,
) -> Result<f64> {
    let p0 = outcome_distribution(rho0, povm)?;
    let p1 = outcome_distribution(rho1, povm)?;
    bhattacharyya_coefficient(&p0, &p1)
}

/// Classical KL divergence under a given measurement.
pub fn achieved_kl(rho0: &DensityMatrix, rho1: &DensityMatrix, povm: &Povm) -> Result<f64> {
    let p0 = outcome_distribution(rho0, povm)?;
    let p1 = outcome_distribution(rho1, povm)?;
    kl_divergence(&p0, &p1)
}
