//! Entropies, mutual information and the Holevo bound for binary channels,
//! together with the curvature functions used to compare them and the
//! measurement that minimizes the curvature of the mutual information.
//!
//! All information quantities are in nats.

use crate::channel::{
    outcome_distribution, BinaryChannel, DensityMatrix, OutcomeDistribution, Povm,
};
use crate::distinguish::achieved_kl;
use crate::error::{Error, Result};
use crate::linalg::{
    eig_hermitian, floored, lowering_apply, HermitianOperator, Lowering, EIGENVALUE_FLOOR,
};

/// Derivative evaluations clamp the prior to `[T_MIN, 1 - T_MIN]`.
pub const T_MIN: f64 = 1e-6;

/// Zero-probability screen for curvature terms.
const PROBABILITY_FLOOR: f64 = 1e-12;
/// Weights at or below this may pair with a vanishing log argument.
const WEIGHT_FLOOR: f64 = 1e-10;
const LOG_ARGUMENT_CLAMP: f64 = 1e-15;

/// H(p) = -Σ p ln p.
pub fn shannon_entropy(p: &OutcomeDistribution) -> f64 {
    entropy_of(p.probabilities())
}

fn entropy_of(values: &[f64]) -> f64 {
    -values
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| x * x.ln())
        .sum::<f64>()
}

/// S(ρ) = -Σ λ ln λ over the spectrum.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    entropy_of(&floored(&rho.eigenvalues()))
}

fn is_endpoint(t: f64) -> bool {
    t == 0.0 || t == 1.0
}

fn check_povm_dim(channel: &BinaryChannel, povm: &Povm) -> Result<()> {
    if povm.dim() != channel.dim() {
        return Err(Error::shape(
            format!("POVM of dimension {}", channel.dim()),
            format!("dimension {}", povm.dim()),
        ));
    }
    Ok(())
}

/// I = H(p) - (1 - t) H(p0) - t H(p1) for measurement `povm`.
pub fn mutual_information(channel: &BinaryChannel, povm: &Povm) -> Result<f64> {
    check_povm_dim(channel, povm)?;
    let t = channel.t();
    if is_endpoint(t) {
        return Ok(0.0);
    }
    let p0 = outcome_distribution(channel.rho0(), povm)?;
    let p1 = outcome_distribution(channel.rho1(), povm)?;
    let p = outcome_distribution(&channel.mixture(), povm)?;
    Ok(shannon_entropy(&p) - (1.0 - t) * shannon_entropy(&p0) - t * shannon_entropy(&p1))
}

/// The same quantity written as (1 - t) K(p0/p) + t K(p1/p).
pub fn mutual_information_divergence_form(channel: &BinaryChannel, povm: &Povm) -> Result<f64> {
    check_povm_dim(channel, povm)?;
    let t = channel.t();
    if is_endpoint(t) {
        return Ok(0.0);
    }
    let mix = channel.mixture();
    Ok((1.0 - t) * achieved_kl(channel.rho0(), &mix, povm)?
        + t * achieved_kl(channel.rho1(), &mix, povm)?)
}

/// χ = S(ρ) - (1 - t) S(ρ0) - t S(ρ1).
pub fn holevo_chi(channel: &BinaryChannel) -> f64 {
    let t = channel.t();
    if is_endpoint(t) {
        return 0.0;
    }
    von_neumann_entropy(&channel.mixture())
        - (1.0 - t) * von_neumann_entropy(channel.rho0())
        - t * von_neumann_entropy(channel.rho1())
}

/// (ln x - ln y)/(x - y), with Φ(x, x) = 1/x.
pub fn phi(x: f64, y: f64) -> f64 {
    if x == y {
        1.0 / x
    } else {
        // ln(x/y) via ln_1p stays accurate when x ≈ y
        ((x - y) / y).ln_1p() / (x - y)
    }
}

fn derivative_channel(channel: &BinaryChannel) -> BinaryChannel {
    let t = channel.t().clamp(T_MIN, 1.0 - T_MIN);
    channel.with_prior(t).expect("clamped prior is in range")
}

/// I''(t) = -Σ (tr Δ E_b)² / tr(ρ E_b).
pub fn i_second_derivative(channel: &BinaryChannel, povm: &Povm) -> Result<f64> {
    check_povm_dim(channel, povm)?;
    let channel = derivative_channel(channel);
    let delta = channel.delta();
    let mix = channel.mixture();
    let mut acc = 0.0;
    for (index, e) in povm.elements().iter().enumerate() {
        let d = delta.trace_product_re(e);
        if d.abs() <= PROBABILITY_FLOOR {
            continue;
        }
        let p = mix.operator().trace_product_re(e);
        if p <= PROBABILITY_FLOOR {
            return Err(Error::Singularity {
                index,
                reason: format!("tr(rho E) = {p:e} but tr(Delta E) = {d:e}"),
            });
        }
        acc += d * d / p;
    }
    Ok(-acc)
}

/// S''(t) = -Σ Φ(λ_j, λ_k) |Δ_jk|² in the eigenbasis of the mixture.
///
/// Pairs touching a zero eigenvalue are dropped: a mixture kernel vector is
/// annihilated by both states, so Δ vanishes there.
pub fn s_second_derivative(channel: &BinaryChannel) -> f64 {
    let channel = derivative_channel(channel);
    let eig = eig_hermitian(channel.mixture().operator());
    let lambda = floored(&eig.eigenvalues);
    let local = eig.to_eigenbasis(channel.delta().matrix());
    let n = lambda.len();
    let mut acc = 0.0;
    for j in 0..n {
        for k in 0..n {
            let (x, y) = (lambda[j], lambda[k]);
            if x + y <= EIGENVALUE_FLOOR || x <= 0.0 || y <= 0.0 {
                continue;
            }
            acc += phi(x, y) * local[(j, k)].norm_sqr();
        }
    }
    -acc
}

/// L''(t) = -tr(Δ L_ρ(Δ)).
pub fn l_second_derivative(channel: &BinaryChannel) -> Result<f64> {
    let channel = derivative_channel(channel);
    let delta = channel.delta();
    let lowered = lowering_apply(channel.mixture().operator(), &delta)?;
    Ok(-delta.trace_product_re(&lowered))
}

/// Projectors onto the eigenbasis of L_ρ(Δ), plus L_ρ(Δ) itself.
fn fuchs_basis(channel: &BinaryChannel, lowering: &Lowering) -> Result<(Povm, HermitianOperator)> {
    let lowered = lowering.apply(&channel.delta())?;
    let eig = eig_hermitian(&lowered);
    Ok((Povm::from_orthonormal_basis(&eig.eigenvectors)?, lowered))
}

/// Measurement minimizing I''(t): eigenprojectors of L_ρ(Δ).
pub fn fuchs_measurement(channel: &BinaryChannel) -> Result<Povm> {
    let channel = derivative_channel(channel);
    let lowering = Lowering::new(channel.mixture().operator());
    Ok(fuchs_basis(&channel, &lowering)?.0)
}

/// M(t) = tr((1 - t) ρ0 ln L_ρ(ρ0) + t ρ1 ln L_ρ(ρ1)), the mutual
/// information of the Fuchs measurement. L_ρ(ρ0), L_ρ(ρ1) and L_ρ(Δ)
/// commute, so the logarithms are taken in the Fuchs basis.
pub fn lower_bound_m(channel: &BinaryChannel) -> Result<f64> {
    let t = channel.t();
    if is_endpoint(t) {
        return Ok(0.0);
    }
    let lowering = Lowering::new(channel.mixture().operator());
    let (povm, _) = fuchs_basis(channel, &lowering)?;
    let lowered0 = lowering.apply(channel.rho0().operator())?;
    let lowered1 = lowering.apply(channel.rho1().operator())?;

    let mut total = 0.0;
    for (index, e) in povm.elements().iter().enumerate() {
        let alpha = lowered0.trace_product_re(e);
        let beta = lowered1.trace_product_re(e);
        let w0 = channel.rho0().operator().trace_product_re(e);
        let w1 = channel.rho1().operator().trace_product_re(e);
        total += (1.0 - t) * weighted_log(index, w0, alpha)?;
        total += t * weighted_log(index, w1, beta)?;
    }
    Ok(total)
}

/// `w ln x` with the 0 ln 0 = 0 convention.
fn weighted_log(index: usize, weight: f64, x: f64) -> Result<f64> {
    if weight <= WEIGHT_FLOOR {
        if weight <= 0.0 {
            return Ok(0.0);
        }
        return Ok(weight * x.max(LOG_ARGUMENT_CLAMP).ln());
    }
    if x <= PROBABILITY_FLOOR {
        return Err(Error::Singularity {
            index,
            reason: format!("log argument {x:e} paired with probability {weight:e}"),
        });
    }
    Ok(weight * x.ln())
}

/// Eigenbasis of L_{ρ1}(ρ0), used as a measurement for the classical KL
/// divergence K(p0/p1).
pub fn fuchs_kl_measurement(rho0: &DensityMatrix, rho1: &DensityMatrix) -> Result<Povm> {
    rho0.matrix().check_same_dim(rho1.matrix())?;
    rho1.require_invertible("rho1")?;
    let lowered = lowering_apply(rho1.operator(), rho0.operator())?;
    Povm::from_orthonormal_basis(&eig_hermitian(&lowered).eigenvectors)
}

/// KL divergence attained by [`fuchs_kl_measurement`]; a lower bound on
/// the quantum KL maximum distinct from the Bures one.
pub fn kl_lower_bound_fuchs(rho0: &DensityMatrix, rho1: &DensityMatrix) -> Result<f64> {
    let povm = fuchs_kl_measurement(rho0, rho1)?;
    achieved_kl(rho0, rho1, &povm)
}
