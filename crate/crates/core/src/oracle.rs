//! Random measurement search and finite differences.
//!
//! The search only ever evaluates classical functionals of outcome
//! distributions for explicit measurements, so it stays independent of the
//! closed forms it is used to check. Sample `i` uses the measurement
//! `random_basis_povm(dim, seed + i)`; samples are evaluated in parallel
//! and reduced in index order, so results do not depend on scheduling.

use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{BinaryChannel, DensityMatrix, Povm};
use crate::distinguish::{achieved_coefficient, achieved_kl, bures_optimal_measurement};
use crate::error::{Error, Result};
use crate::holevo::{fuchs_kl_measurement, fuchs_measurement, mutual_information};
use crate::sampling::random_basis_povm;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchConfig {
    pub samples: usize,
    pub seed: u64,
    /// Add the Bures and Fuchs measurements to the candidate set.
    pub include_special: bool,
    /// Priors at which information quantities are evaluated.
    pub t_grid: Vec<f64>,
}

impl SearchConfig {
    pub const DEFAULT_T_GRID: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];

    pub fn new(samples: usize, seed: u64, include_special: bool, t_grid: Vec<f64>) -> Result<Self> {
        if samples == 0 {
            return Err(Error::Range {
                field: "samples".into(),
                value: 0.0,
                min: 1.0,
                max: f64::INFINITY,
            });
        }
        for (i, &t) in t_grid.iter().enumerate() {
            if !(t > 0.0 && t < 1.0) {
                return Err(Error::Range {
                    field: format!("t_grid[{i}]"),
                    value: t,
                    min: 0.0,
                    max: 1.0,
                });
            }
            if i > 0 && t <= t_grid[i - 1] {
                return Err(Error::Parse(format!(
                    "t_grid must be strictly increasing (entry {i} = {t})"
                )));
            }
        }
        Ok(SearchConfig {
            samples,
            seed,
            include_special,
            t_grid,
        })
    }

    /// `samples` random measurements with specials and the default grid.
    pub fn with_samples(samples: usize, seed: u64) -> Result<Self> {
        Self::new(samples, seed, true, Self::DEFAULT_T_GRID.to_vec())
    }
}

/// Which candidate measurement produced an extremum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PovmTag {
    Sampled {
        index: usize,
        seed: u64,
    },
    /// Eigenbasis of the likelihood operator.
    Bures,
    /// Eigenbasis of L_ρ(Δ) at the evaluated prior.
    Fuchs,
    /// Eigenbasis of L_{ρ1}(ρ0).
    FuchsKl,
}

impl std::fmt::Display for PovmTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PovmTag::Sampled { index, seed } => write!(f, "sample#{index}(seed={seed})"),
            PovmTag::Bures => f.write_str("bures"),
            PovmTag::Fuchs => f.write_str("fuchs"),
            PovmTag::FuchsKl => f.write_str("fuchs_kl"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleEstimate {
    pub value: f64,
    pub best: PovmTag,
    /// Candidates that could not be evaluated (conditioning, infinite KL).
    pub skipped: usize,
}

/// The sampled measurements of `config`, in index order.
pub fn sampled_povms(dim: usize, config: &SearchConfig) -> Vec<(PovmTag, Povm)> {
    (0..config.samples)
        .into_par_iter()
        .map(|index| {
            let seed = config.seed.wrapping_add(index as u64);
            (
                PovmTag::Sampled { index, seed },
                random_basis_povm(dim, seed),
            )
        })
        .collect()
}

/// Evaluates `f` on every candidate and keeps the extremum; ties go to the
/// earlier candidate. Failed evaluations are counted, not propagated.
fn search(
    candidates: &[(PovmTag, Povm)],
    extra_skipped: usize,
    maximize: bool,
    f: impl Fn(&Povm) -> Result<f64> + Sync,
) -> Option<OracleEstimate> {
    let values: Vec<Option<f64>> = candidates
        .par_iter()
        .map(|(_, povm)| f(povm).ok().filter(|v| v.is_finite()))
        .collect();
    let mut best: Option<OracleEstimate> = None;
    let mut skipped = extra_skipped;
    for ((tag, _), value) in candidates.iter().zip(values) {
        let Some(value) = value else {
            skipped += 1;
            continue;
        };
        let better = match best {
            None => true,
            Some(b) if maximize => value > b.value,
            Some(b) => value < b.value,
        };
        if better {
            best = Some(OracleEstimate {
                value,
                best: *tag,
                skipped: 0,
            });
        }
    }
    best.map(|b| OracleEstimate { skipped, ..b })
}

/// Special candidates that could be constructed, plus how many could not.
fn specials(
    config: &SearchConfig,
    builders: Vec<(PovmTag, Result<Povm>)>,
) -> (Vec<(PovmTag, Povm)>, usize) {
    if !config.include_special {
        return (Vec::new(), 0);
    }
    let mut ok = Vec::new();
    let mut failed = 0;
    for (tag, povm) in builders {
        match povm {
            Ok(p) => ok.push((tag, p)),
            Err(_) => failed += 1,
        }
    }
    (ok, failed)
}

fn bures_povm(rho0: &DensityMatrix, rho1: &DensityMatrix) -> Result<Povm> {
    Ok(bures_optimal_measurement(rho0, rho1)?.optimal_povm)
}

fn no_candidates() -> Error {
    Error::Parse("no candidate measurement could be evaluated".into())
}

/// Minimum of Σ sqrt(p0_b p1_b) over the candidate measurements.
pub fn oracle_min_bhattacharyya(
    channel: &BinaryChannel,
    config: &SearchConfig,
) -> Result<OracleEstimate> {
    let (rho0, rho1) = (channel.rho0(), channel.rho1());
    let mut candidates = sampled_povms(channel.dim(), config);
    let (extra, failed) = specials(config, vec![(PovmTag::Bures, bures_povm(rho0, rho1))]);
    candidates.extend(extra);
    search(&candidates, failed, false, |p| {
        achieved_coefficient(rho0, rho1, p)
    })
    .ok_or_else(no_candidates)
}

/// Maximum mutual information at prior `t`; a lower estimate of the
/// accessible information, since only projective candidates are searched.
pub fn oracle_max_mutual_information(
    channel: &BinaryChannel,
    t: f64,
    config: &SearchConfig,
) -> Result<OracleEstimate> {
    let channel = channel.with_prior(t)?;
    let mut candidates = sampled_povms(channel.dim(), config);
    let (extra, failed) = specials(
        config,
        vec![
            (PovmTag::Bures, bures_povm(channel.rho0(), channel.rho1())),
            (PovmTag::Fuchs, fuchs_measurement(&channel)),
        ],
    );
    candidates.extend(extra);
    search(&candidates, failed, true, |p| {
        mutual_information(&channel, p)
    })
    .ok_or_else(no_candidates)
}

/// Maximum classical KL divergence K(p0/p1) over the candidates. Samples
/// with infinite divergence are counted in `skipped`.
pub fn oracle_max_kl(
    rho0: &DensityMatrix,
    rho1: &DensityMatrix,
    config: &SearchConfig,
) -> Result<OracleEstimate> {
    rho0.matrix().check_same_dim(rho1.matrix())?;
    let mut candidates = sampled_povms(rho0.dim(), config);
    let (extra, failed) = specials(
        config,
        vec![
            (PovmTag::Bures, bures_povm(rho0, rho1)),
            (PovmTag::FuchsKl, fuchs_kl_measurement(rho0, rho1)),
        ],
    );
    candidates.extend(extra);
    search(&candidates, failed, true, |p| achieved_kl(rho0, rho1, p)).ok_or_else(no_candidates)
}

/// Central second difference (f(t+h) - 2 f(t) + f(t-h)) / h².
pub fn finite_difference_second(f: impl Fn(f64) -> f64, t: f64, h: f64) -> Result<f64> {
    if h.is_nan() || h <= 0.0 || t - h <= 0.0 || t + h >= 1.0 {
        return Err(Error::Range {
            field: "t ± h".into(),
            value: t,
            min: h,
            max: 1.0 - h,
        });
    }
    Ok((f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h))
}
