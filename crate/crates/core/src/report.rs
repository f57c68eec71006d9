//! Verification report: every closed form next to its oracle estimate, and
//! every inequality between them as a named check with a margin.
//!
//! A check's margin is how far it is from failing, in the units of the
//! compared quantity (nats for information quantities). Passing checks have
//! a non-negative margin.

use std::fmt::Write as _;

use serde::Serialize;

use crate::channel::{BinaryChannel, DensityMatrix, OutcomeDistribution, Povm};
use crate::distinguish::{
    achieved_coefficient, achieved_kl, bhattacharyya_coefficient, bures_optimal_measurement,
    fidelity_root, kl_lower_bound_bures, likelihood_operator, naive_lower_bound, BuresResult,
};
use crate::error::{Error, ErrorCategory, Result};
use crate::holevo::{
    fuchs_measurement, holevo_chi, i_second_derivative, kl_lower_bound_fuchs, l_second_derivative,
    lower_bound_m, mutual_information, s_second_derivative,
};
use crate::linalg::{eig_hermitian, ComplexMatrix, HermitianOperator, Lowering};
use crate::oracle::{
    finite_difference_second, oracle_max_kl, oracle_max_mutual_information,
    oracle_min_bhattacharyya, sampled_povms, OracleEstimate, PovmTag, SearchConfig,
};

/// Slack on every inequality between information quantities or fidelities.
pub const INEQUALITY_SLACK: f64 = 1e-9;
/// Tolerance for closed forms that must be attained exactly.
pub const ATTAINMENT_TOLERANCE: f64 = 1e-8;
/// Tolerance for the likelihood-ratio eigenvalue identity and projector sets.
pub const RATIO_TOLERANCE: f64 = 1e-7;
pub const FD_STEP: f64 = 1e-3;
pub const FD_TOLERANCE: f64 = 1e-4;
/// Finite-difference checks run only when both states have spectra at least this large.
pub const FD_MIN_EIGENVALUE: f64 = 0.05;
pub const COMMUTING_TOLERANCE: f64 = 1e-10;
pub const BOUNDARY_TOLERANCE: f64 = 1e-10;
/// Curvatures are non-positive up to this.
pub const CURVATURE_ZERO: f64 = 1e-12;
/// Relative eigenvalue gap below which the Bures measurement is not unique.
const DEGENERACY_GAP: f64 = 1e-4;
/// Minimum ratio probability for the likelihood-ratio check.
const RATIO_PROBABILITY_FLOOR: f64 = 1e-12;
const MIXTURE_SUPPORT_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "reason")]
pub enum Outcome {
    Pass,
    Fail,
    Skipped(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub outcome: Outcome,
    pub margin: Option<f64>,
}

impl Check {
    fn from_margin(name: impl Into<String>, margin: f64) -> Self {
        let outcome = if margin >= 0.0 {
            Outcome::Pass
        } else {
            Outcome::Fail
        };
        Check {
            name: name.into(),
            outcome,
            margin: Some(margin),
        }
    }

    /// `lhs <= rhs + slack`.
    fn at_most(name: impl Into<String>, lhs: f64, rhs: f64, slack: f64) -> Self {
        Self::from_margin(name, rhs + slack - lhs)
    }

    /// `|a - b| <= tolerance`.
    fn close(name: impl Into<String>, a: f64, b: f64, tolerance: f64) -> Self {
        Self::from_margin(name, tolerance - (a - b).abs())
    }

    fn skipped(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            outcome: Outcome::Skipped(reason.into()),
            margin: None,
        }
    }

    fn failed(name: impl Into<String>, reason: &Error) -> Self {
        let name = name.into();
        match reason.category() {
            ErrorCategory::Conditioning => Self::skipped(name, format!("conditioning: {reason}")),
            _ => Check {
                name: format!("{name} ({reason})"),
                outcome: Outcome::Fail,
                margin: None,
            },
        }
    }

    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    pub fn failed_outright(&self) -> bool {
        self.outcome == Outcome::Fail
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChannelSummary {
    pub dim: usize,
    pub t: f64,
    pub spectrum0: Vec<f64>,
    pub spectrum1: Vec<f64>,
    pub commutator_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FidelityBlock {
    pub fidelity_root: f64,
    pub bures_angle: f64,
    pub naive_lower_bound: f64,
    /// Bhattacharyya coefficient achieved by the constructed measurement.
    pub bures_achieved: Option<f64>,
    pub oracle_min: Option<OracleEstimate>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KlBlock {
    pub bures_bound: Option<f64>,
    pub fuchs_bound: Option<f64>,
    pub oracle_max: Option<OracleEstimate>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InfoRow {
    pub t: f64,
    pub i_bures: Option<f64>,
    pub i_fuchs: Option<f64>,
    pub oracle_best: Option<OracleEstimate>,
    pub m_lower: Option<f64>,
    pub chi: f64,
    pub s_curvature: f64,
    pub l_curvature: Option<f64>,
    pub i_curvature_fuchs: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub config: SearchConfig,
    pub channel: ChannelSummary,
    pub fidelity: FidelityBlock,
    pub kl: KlBlock,
    pub info: Vec<InfoRow>,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    /// True when no check failed; skipped checks do not count as failures.
    pub fn passed(&self) -> bool {
        !self.checks.iter().any(Check::failed_outright)
    }

    pub fn failing(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| c.failed_outright()).collect()
    }

    pub fn skipped(&self) -> Vec<&Check> {
        self.checks
            .iter()
            .filter(|c| matches!(c.outcome, Outcome::Skipped(_)))
            .collect()
    }
}

/// Units for printed information quantities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Units {
    #[default]
    Nats,
    Bits,
}

impl Units {
    pub fn convert(self, nats: f64) -> f64 {
        match self {
            Units::Nats => nats,
            Units::Bits => nats / std::f64::consts::LN_2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Units::Nats => "nats",
            Units::Bits => "bits",
        }
    }
}

/// Formats with 9 significant digits.
pub fn sig9(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    if (-4..9).contains(&magnitude) {
        let decimals = (8 - magnitude).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.8e}")
    }
}

pub fn build_report(channel: &BinaryChannel, config: &SearchConfig) -> Result<VerificationReport> {
    let (rho0, rho1) = (channel.rho0(), channel.rho1());
    let commutator_norm = channel.commutator_norm();
    let mut checks = Vec::new();

    let summary = ChannelSummary {
        dim: channel.dim(),
        t: channel.t(),
        spectrum0: rho0.eigenvalues(),
        spectrum1: rho1.eigenvalues(),
        commutator_norm,
    };

    let fidelity = fidelity_checks(rho0, rho1, commutator_norm, channel, config, &mut checks)?;
    let kl = kl_checks(rho0, rho1, config, &mut checks);

    let well_conditioned =
        summary.spectrum0[0] >= FD_MIN_EIGENVALUE && summary.spectrum1[0] >= FD_MIN_EIGENVALUE;
    let bures_povm = bures_optimal_measurement(rho0, rho1)
        .ok()
        .map(|r| r.optimal_povm);
    let samples = sampled_povms(channel.dim(), config);
    let mut info = Vec::with_capacity(config.t_grid.len());
    for &t in &config.t_grid {
        let at_t = channel.with_prior(t)?;
        info.push(info_checks(
            &at_t,
            config,
            &samples,
            bures_povm.as_ref(),
            well_conditioned,
            commutator_norm,
            &mut checks,
        )?);
    }
    boundary_checks(channel, &mut checks)?;

    Ok(VerificationReport {
        config: config.clone(),
        channel: summary,
        fidelity,
        kl,
        info,
        checks,
    })
}

fn fidelity_checks(
    rho0: &DensityMatrix,
    rho1: &DensityMatrix,
    commutator_norm: f64,
    channel: &BinaryChannel,
    config: &SearchConfig,
    checks: &mut Vec<Check>,
) -> Result<FidelityBlock> {
    let root = fidelity_root(rho0, rho1)?;
    let swapped = fidelity_root(rho1, rho0)?;
    let naive = naive_lower_bound(rho0, rho1)?;
    checks.push(Check::close(
        "fidelity.symmetric",
        root,
        swapped,
        INEQUALITY_SLACK,
    ));
    checks.push(Check::at_most(
        "fidelity.naive <= root",
        naive,
        root,
        INEQUALITY_SLACK,
    ));
    checks.push(Check::at_most(
        "fidelity.root <= 1",
        root,
        1.0,
        INEQUALITY_SLACK,
    ));

    if commutator_norm <= COMMUTING_TOLERANCE {
        let (p0, p1) = common_eigenbasis_distributions(rho0, rho1)?;
        let classical = bhattacharyya_coefficient(&p0, &p1)?;
        checks.push(Check::close(
            "fidelity.commuting_reduction",
            root,
            classical,
            INEQUALITY_SLACK,
        ));
    } else {
        checks.push(Check::skipped(
            "fidelity.commuting_reduction",
            "states do not commute",
        ));
    }

    let oracle_min = match oracle_min_bhattacharyya(channel, config) {
        Ok(est) => {
            checks.push(Check::at_most(
                "fidelity.root <= oracle_min",
                root,
                est.value,
                INEQUALITY_SLACK,
            ));
            Some(est)
        }
        Err(e) => {
            checks.push(Check::failed("fidelity.root <= oracle_min", &e));
            None
        }
    };

    let bures_achieved = match bures_optimal_measurement(rho0, rho1) {
        Ok(bures) => Some(bures_checks(
            rho0, rho1, &bures, oracle_min, config, checks,
        )?),
        Err(e) => {
            for name in [
                "bures.attains_root",
                "bures.oracle_attains_root",
                "bures.likelihood_ratio",
                "bures.inverse_pair",
                "bures.swap_invariant",
            ] {
                checks.push(Check::failed(name, &e));
            }
            None
        }
    };

    Ok(FidelityBlock {
        fidelity_root: root,
        bures_angle: root.clamp(0.0, 1.0).acos(),
        naive_lower_bound: naive,
        bures_achieved,
        oracle_min,
    })
}

fn bures_checks(
    rho0: &DensityMatrix,
    rho1: &DensityMatrix,
    bures: &BuresResult,
    oracle_min: Option<OracleEstimate>,
    config: &SearchConfig,
    checks: &mut Vec<Check>,
) -> Result<f64> {
    let povm = &bures.optimal_povm;
    let achieved = achieved_coefficient(rho0, rho1, povm)?;
    checks.push(Check::close(
        "bures.attains_root",
        achieved,
        bures.fidelity_root,
        ATTAINMENT_TOLERANCE,
    ));
    match oracle_min {
        Some(est) if config.include_special => checks.push(Check::close(
            "bures.oracle_attains_root",
            est.value,
            bures.fidelity_root,
            ATTAINMENT_TOLERANCE,
        )),
        _ => checks.push(Check::skipped(
            "bures.oracle_attains_root",
            "specials not injected",
        )),
    }

    let mut worst = 0.0f64;
    for (e, &m) in povm.elements().iter().zip(&bures.likelihood_eigenvalues) {
        let p0 = rho0.operator().trace_product_re(e);
        let p1 = rho1.operator().trace_product_re(e);
        if p1 > RATIO_PROBABILITY_FLOOR {
            worst = worst.max((m - (p0.max(0.0) / p1).sqrt()).abs());
        }
    }
    checks.push(Check::from_margin(
        "bures.likelihood_ratio",
        RATIO_TOLERANCE - worst,
    ));

    let m = likelihood_operator(rho0, rho1)?;
    let n = likelihood_operator(rho1, rho0)?;
    let product = m.matrix() * n.matrix();
    let residual = product.max_abs_diff(&ComplexMatrix::identity(product.dim()));
    checks.push(Check::from_margin(
        "bures.inverse_pair",
        ATTAINMENT_TOLERANCE - residual,
    ));

    let values = &bures.likelihood_eigenvalues;
    let scale = values.iter().fold(0.0f64, |a, &b| a.max(b.abs())).max(1.0);
    let min_gap = values
        .windows(2)
        .map(|w| (w[1] - w[0]) / scale)
        .fold(f64::INFINITY, f64::min);
    if min_gap < DEGENERACY_GAP {
        checks.push(Check::skipped(
            "bures.swap_invariant",
            "degenerate likelihood spectrum: the optimal basis is not unique",
        ));
    } else {
        let swapped = bures_optimal_measurement(rho1, rho0)?;
        let distance = projector_set_distance(povm, &swapped.optimal_povm);
        checks.push(Check::from_margin(
            "bures.swap_invariant",
            RATIO_TOLERANCE - distance,
        ));
    }
    Ok(achieved)
}

/// Largest distance from a projector in `a` to its nearest partner in `b`.
fn projector_set_distance(a: &Povm, b: &Povm) -> f64 {
    a.elements()
        .iter()
        .map(|ea| {
            b.elements()
                .iter()
                .map(|eb| ea.matrix().max_abs_diff(eb.matrix()))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Diagonals of two commuting states in a shared eigenbasis.
fn common_eigenbasis_distributions(
    rho0: &DensityMatrix,
    rho1: &DensityMatrix,
) -> Result<(OutcomeDistribution, OutcomeDistribution)> {
    // a generic combination separates eigenspaces of commuting operators
    let combo = rho0
        .operator()
        .add(&rho1.operator().scale(std::f64::consts::SQRT_2));
    let basis = eig_hermitian(&combo).eigenvectors;
    let povm = Povm::from_orthonormal_basis(&basis)?;
    Ok((
        crate::channel::outcome_distribution(rho0, &povm)?,
        crate::channel::outcome_distribution(rho1, &povm)?,
    ))
}

fn kl_checks(
    rho0: &DensityMatrix,
    rho1: &DensityMatrix,
    config: &SearchConfig,
    checks: &mut Vec<Check>,
) -> KlBlock {
    let oracle_max = oracle_max_kl(rho0, rho1, config);

    let bures_bound = match kl_lower_bound_bures(rho0, rho1) {
        Ok(k) => {
            let classical = bures_optimal_measurement(rho0, rho1)
                .and_then(|b| achieved_kl(rho0, rho1, &b.optimal_povm));
            match classical {
                Ok(c) => checks.push(Check::close(
                    "kl.bures_trace_form",
                    k,
                    c,
                    ATTAINMENT_TOLERANCE,
                )),
                Err(e) => checks.push(Check::failed("kl.bures_trace_form", &e)),
            }
            Some(k)
        }
        Err(e) => {
            checks.push(Check::failed("kl.bures_trace_form", &e));
            None
        }
    };

    let fuchs_bound = match kl_lower_bound_fuchs(rho0, rho1) {
        Ok(k) => {
            checks.push(Check::at_most("kl.fuchs >= 0", 0.0, k, CURVATURE_ZERO));
            Some(k)
        }
        Err(e) => {
            checks.push(Check::failed("kl.fuchs >= 0", &e));
            None
        }
    };

    match &oracle_max {
        Ok(est) => {
            for (name, bound) in [
                ("kl.bures <= oracle_max", bures_bound),
                ("kl.fuchs <= oracle_max", fuchs_bound),
            ] {
                match bound {
                    Some(b) if config.include_special => {
                        checks.push(Check::at_most(name, b, est.value, INEQUALITY_SLACK))
                    }
                    Some(_) => checks.push(Check::skipped(name, "specials not injected")),
                    None => checks.push(Check::skipped(name, "bound unavailable")),
                }
            }
        }
        Err(e) => {
            checks.push(Check::failed("kl.bures <= oracle_max", e));
            checks.push(Check::failed("kl.fuchs <= oracle_max", e));
        }
    }

    KlBlock {
        bures_bound,
        fuchs_bound,
        oracle_max: oracle_max.ok(),
    }
}

#[allow(clippy::too_many_arguments)]
fn info_checks(
    channel: &BinaryChannel,
    config: &SearchConfig,
    samples: &[(PovmTag, Povm)],
    bures_povm: Option<&Povm>,
    well_conditioned: bool,
    commutator_norm: f64,
    checks: &mut Vec<Check>,
) -> Result<InfoRow> {
    let t = channel.t();
    let label = |what: &str| format!("info[t={}].{what}", sig9(t));
    let chi = holevo_chi(channel);
    let s2 = s_second_derivative(channel);
    let l2 = l_second_derivative(channel)?;
    let fuchs = fuchs_measurement(channel)?;

    let i_fuchs = mutual_information(channel, &fuchs)?;
    let i2_fuchs = i_second_derivative(channel, &fuchs);
    let i_bures = bures_povm
        .map(|p| mutual_information(channel, p))
        .transpose()?;
    let m_lower = lower_bound_m(channel);
    let oracle = oracle_max_mutual_information(channel, t, config);

    checks.push(Check::at_most(
        label("i_fuchs <= chi"),
        i_fuchs,
        chi,
        INEQUALITY_SLACK,
    ));
    match i_bures {
        Some(i) => checks.push(Check::at_most(
            label("i_bures <= chi"),
            i,
            chi,
            INEQUALITY_SLACK,
        )),
        None => checks.push(Check::skipped(
            label("i_bures <= chi"),
            "conditioning: Bures measurement unavailable",
        )),
    }

    match &oracle {
        Ok(est) => checks.push(Check::at_most(
            label("oracle_best <= chi"),
            est.value,
            chi,
            INEQUALITY_SLACK,
        )),
        Err(e) => checks.push(Check::failed(label("oracle_best <= chi"), e)),
    }

    match &m_lower {
        Ok(m) => {
            checks.push(Check::at_most(label("m >= 0"), 0.0, *m, INEQUALITY_SLACK));
            checks.push(Check::at_most(label("m <= chi"), *m, chi, INEQUALITY_SLACK));
            checks.push(Check::close(
                label("m = i_fuchs"),
                *m,
                i_fuchs,
                ATTAINMENT_TOLERANCE,
            ));
            match &oracle {
                Ok(est) if config.include_special => checks.push(Check::at_most(
                    label("m <= oracle_best"),
                    *m,
                    est.value,
                    INEQUALITY_SLACK,
                )),
                Ok(_) => checks.push(Check::skipped(
                    label("m <= oracle_best"),
                    "specials not injected",
                )),
                Err(e) => checks.push(Check::failed(label("m <= oracle_best"), e)),
            }
            if commutator_norm <= COMMUTING_TOLERANCE {
                checks.push(Check::close(
                    label("commuting_saturation"),
                    *m,
                    chi,
                    ATTAINMENT_TOLERANCE,
                ));
            } else {
                checks.push(Check::skipped(
                    label("commuting_saturation"),
                    "states do not commute",
                ));
            }
        }
        Err(e) => {
            for what in [
                "m >= 0",
                "m <= chi",
                "m = i_fuchs",
                "m <= oracle_best",
                "commuting_saturation",
            ] {
                checks.push(Check::failed(label(what), e));
            }
        }
    }

    lowering_identity_check(channel, &label("lowering_identities"), checks)?;

    // curvature chain S'' <= L'' <= I'' <= 0 over every sampled measurement
    checks.push(Check::at_most(
        label("s'' <= l''"),
        s2,
        l2,
        INEQUALITY_SLACK,
    ));
    let mut min_gap = f64::INFINITY;
    let mut max_i2 = f64::NEG_INFINITY;
    let mut unevaluated = 0usize;
    for (_, povm) in samples {
        match i_second_derivative(channel, povm) {
            Ok(i2) => {
                min_gap = min_gap.min(i2 - l2);
                max_i2 = max_i2.max(i2);
            }
            Err(_) => unevaluated += 1,
        }
    }
    match &i2_fuchs {
        Ok(i2) => {
            min_gap = min_gap.min(i2 - l2);
            max_i2 = max_i2.max(*i2);
            checks.push(Check::close(
                label("i''(fuchs) = l''"),
                *i2,
                l2,
                ATTAINMENT_TOLERANCE,
            ));
        }
        Err(e) => checks.push(Check::failed(label("i''(fuchs) = l''"), e)),
    }
    if max_i2.is_finite() {
        checks.push(Check::from_margin(
            label("l'' <= i''(all)"),
            min_gap + INEQUALITY_SLACK,
        ));
        checks.push(Check::at_most(
            label("i''(all) <= 0"),
            max_i2,
            CURVATURE_ZERO,
            INEQUALITY_SLACK,
        ));
    } else {
        checks.push(Check::skipped(
            label("l'' <= i''(all)"),
            "no measurement evaluated",
        ));
    }
    if unevaluated > 0 {
        checks.push(Check::skipped(
            label("i''(samples)"),
            format!(
                "conditioning: {unevaluated} sampled measurements hit a zero-probability outcome"
            ),
        ));
    }

    // finite-difference oracles
    let fd_names = [
        label("fd i''(fuchs)"),
        label("fd i''(sample0)"),
        label("fd s''"),
    ];
    if !well_conditioned {
        for name in fd_names {
            checks.push(Check::skipped(
                name,
                format!("spectrum below {FD_MIN_EIGENVALUE}"),
            ));
        }
    } else {
        fn info_curve<'a>(channel: &'a BinaryChannel, povm: &'a Povm) -> impl Fn(f64) -> f64 + 'a {
            move |s| {
                channel
                    .with_prior(s)
                    .and_then(|c| mutual_information(&c, povm))
                    .unwrap_or(f64::NAN)
            }
        }
        let chi_curve = |s: f64| {
            channel
                .with_prior(s)
                .map(|c| holevo_chi(&c))
                .unwrap_or(f64::NAN)
        };
        let mut pairs: Vec<(String, Result<f64>, Result<f64>)> = Vec::new();
        pairs.push((
            fd_names[0].clone(),
            finite_difference_second(info_curve(channel, &fuchs), t, FD_STEP),
            i2_fuchs
                .as_ref()
                .copied()
                .map_err(|e| Error::Parse(e.to_string())),
        ));
        if let Some((_, first)) = samples.first() {
            pairs.push((
                fd_names[1].clone(),
                finite_difference_second(info_curve(channel, first), t, FD_STEP),
                i_second_derivative(channel, first),
            ));
        }
        pairs.push((
            fd_names[2].clone(),
            finite_difference_second(chi_curve, t, FD_STEP),
            Ok(s2),
        ));
        for (name, fd, analytic) in pairs {
            match (fd, analytic) {
                (Ok(fd), Ok(a)) => checks.push(Check::close(name, fd, a, FD_TOLERANCE)),
                (Err(e), _) | (_, Err(e)) => checks.push(Check::skipped(name, e.to_string())),
            }
        }
    }

    Ok(InfoRow {
        t,
        i_bures,
        i_fuchs: Some(i_fuchs),
        oracle_best: oracle.ok(),
        m_lower: m_lower.ok(),
        chi,
        s_curvature: s2,
        l_curvature: Some(l2),
        i_curvature_fuchs: i2_fuchs.ok(),
    })
}

/// L_ρ(ρ0) = 1 - t L_ρ(Δ) and L_ρ(ρ1) = 1 + (1 - t) L_ρ(Δ) on a full-rank mixture.
fn lowering_identity_check(
    channel: &BinaryChannel,
    name: &str,
    checks: &mut Vec<Check>,
) -> Result<()> {
    let mix = channel.mixture();
    let lowering = Lowering::new(mix.operator());
    if lowering.decomposition().eigenvalues[0] <= MIXTURE_SUPPORT_FLOOR {
        checks.push(Check::skipped(name, "mixture is singular"));
        return Ok(());
    }
    let t = channel.t();
    let id = HermitianOperator::identity(channel.dim());
    let ld = lowering.apply(&channel.delta())?;
    let l0 = lowering.apply(channel.rho0().operator())?;
    let l1 = lowering.apply(channel.rho1().operator())?;
    let r0 = l0.matrix().max_abs_diff(id.sub(&ld.scale(t)).matrix());
    let r1 = l1
        .matrix()
        .max_abs_diff(id.add(&ld.scale(1.0 - t)).matrix());
    checks.push(Check::from_margin(name, INEQUALITY_SLACK - r0.max(r1)));
    Ok(())
}

fn boundary_checks(channel: &BinaryChannel, checks: &mut Vec<Check>) -> Result<()> {
    let fuchs = fuchs_measurement(channel)?;
    let mut worst = 0.0f64;
    for t in [0.0, 1.0] {
        let at = channel.with_prior(t)?;
        worst = worst.max(mutual_information(&at, &fuchs)?.abs());
        worst = worst.max(holevo_chi(&at).abs());
    }
    checks.push(Check::from_margin(
        "boundary.i_and_chi_vanish",
        BOUNDARY_TOLERANCE - worst,
    ));
    Ok(())
}

fn opt(x: Option<f64>, units: Option<Units>) -> String {
    match (x, units) {
        (Some(v), Some(u)) => sig9(u.convert(v)),
        (Some(v), None) => sig9(v),
        (None, _) => "n/a".to_string(),
    }
}

impl VerificationReport {
    /// Plain-text rendering; deterministic for a given report.
    pub fn render(&self, units: Units) -> String {
        let u = Some(units);
        let mut out = String::new();
        let c = &self.channel;
        writeln!(out, "verification report").unwrap();
        writeln!(
            out,
            "config: samples={} seed={} specials={} t_grid=[{}]",
            self.config.samples,
            self.config.seed,
            self.config.include_special,
            self.config
                .t_grid
                .iter()
                .map(|&t| sig9(t))
                .collect::<Vec<_>>()
                .join(", ")
        )
        .unwrap();
        writeln!(
            out,
            "units: {} (check margins in native units)",
            units.label()
        )
        .unwrap();
        writeln!(out).unwrap();
        writeln!(out, "[channel]").unwrap();
        writeln!(out, "dim = {}", c.dim).unwrap();
        writeln!(out, "t = {}", sig9(c.t)).unwrap();
        writeln!(out, "spectrum(rho0) = [{}]", join(&c.spectrum0)).unwrap();
        writeln!(out, "spectrum(rho1) = [{}]", join(&c.spectrum1)).unwrap();
        writeln!(out, "commutator_norm = {}", sig9(c.commutator_norm)).unwrap();
        writeln!(out).unwrap();

        let f = &self.fidelity;
        writeln!(out, "[fidelity]").unwrap();
        writeln!(out, "fidelity_root = {}", sig9(f.fidelity_root)).unwrap();
        writeln!(out, "bures_angle = {}", sig9(f.bures_angle)).unwrap();
        writeln!(out, "naive_lower_bound = {}", sig9(f.naive_lower_bound)).unwrap();
        writeln!(out, "bures_achieved = {}", opt(f.bures_achieved, None)).unwrap();
        match &f.oracle_min {
            Some(e) => writeln!(out, "oracle_min = {} (by {})", sig9(e.value), e.best).unwrap(),
            None => writeln!(out, "oracle_min = n/a").unwrap(),
        }
        writeln!(out).unwrap();

        let k = &self.kl;
        writeln!(out, "[kl]").unwrap();
        writeln!(out, "bures_bound = {}", opt(k.bures_bound, u)).unwrap();
        writeln!(out, "fuchs_bound = {}", opt(k.fuchs_bound, u)).unwrap();
        match &k.oracle_max {
            Some(e) => writeln!(
                out,
                "oracle_max = {} (by {}, {} skipped)",
                sig9(units.convert(e.value)),
                e.best,
                e.skipped
            )
            .unwrap(),
            None => writeln!(out, "oracle_max = n/a").unwrap(),
        }
        writeln!(out).unwrap();

        writeln!(
            out,
            "[information] oracle_best is a lower estimate of the accessible information"
        )
        .unwrap();
        writeln!(
            out,
            "t, i_bures, i_fuchs, oracle_best, m_lower, chi, s'', l'', i''(fuchs)"
        )
        .unwrap();
        for row in &self.info {
            writeln!(
                out,
                "{}, {}, {}, {}, {}, {}, {}, {}, {}",
                sig9(row.t),
                opt(row.i_bures, u),
                opt(row.i_fuchs, u),
                opt(row.oracle_best.map(|e| e.value), u),
                opt(row.m_lower, u),
                sig9(units.convert(row.chi)),
                sig9(units.convert(row.s_curvature)),
                opt(row.l_curvature, u),
                opt(row.i_curvature_fuchs, u),
            )
            .unwrap();
        }
        writeln!(out).unwrap();

        writeln!(out, "[checks]").unwrap();
        for check in &self.checks {
            let status = match &check.outcome {
                Outcome::Pass => "PASS".to_string(),
                Outcome::Fail => "FAIL".to_string(),
                Outcome::Skipped(reason) => format!("SKIP ({reason})"),
            };
            match check.margin {
                Some(m) => writeln!(out, "{status} {} margin={}", check.name, sig9(m)).unwrap(),
                None => writeln!(out, "{status} {}", check.name).unwrap(),
            }
        }
        let failing = self.failing();
        writeln!(out).unwrap();
        if failing.is_empty() {
            writeln!(
                out,
                "result: all {} evaluated checks passed ({} skipped)",
                self.checks.len() - self.skipped().len(),
                self.skipped().len()
            )
            .unwrap();
        } else {
            writeln!(out, "result: {} checks failed:", failing.len()).unwrap();
            for c in failing {
                writeln!(out, "  {}", c.name).unwrap();
            }
        }
        out
    }
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(|&v| sig9(v))
        .collect::<Vec<_>>()
        .join(", ")
}
