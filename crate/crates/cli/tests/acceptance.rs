//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qdistinguish::channel::outcome_distribution;
use qdistinguish::distinguish::{
    achieved_coefficient, bures_optimal_measurement, fidelity_root, kl_divergence,
    kl_lower_bound_bures, likelihood_operator,
};
use qdistinguish::holevo::{
    fuchs_measurement, holevo_chi, i_second_derivative, l_second_derivative, lower_bound_m,
    mutual_information, phi, s_second_derivative,
};
use qdistinguish::io::{load_channel, save_channel};
use qdistinguish::oracle::{
    finite_difference_second, oracle_min_bhattacharyya, sampled_povms, SearchConfig,
};
use qdistinguish::report::build_report;
use qdistinguish::sampling::{random_channel, random_density};
use qdistinguish::{BinaryChannel, ComplexMatrix, DensityMatrix, Povm};

const DIMS: [usize; 3] = [2, 3, 4];
const SEEDS: std::ops::Range<u64> = 0..50;
const T_GRID: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];
const SLACK: f64 = 1e-9;
const ATTAIN: f64 = 1e-8;
const FD_STEP: f64 = 1e-3;
const FD_TOL: f64 = 1e-4;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn ensure(ok: bool, failure: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(failure())
    }
}

fn channels() -> impl Iterator<Item = (usize, u64, BinaryChannel)> {
    DIMS.into_iter().flat_map(|d| {
        SEEDS.map(move |s| (d, s, random_channel(d, s, 0.5).expect("random channel")))
    })
}

fn povms(dim: usize, seed: u64, samples: usize) -> Vec<Povm> {
    let config = SearchConfig::new(samples, seed, false, T_GRID.to_vec()).unwrap();
    sampled_povms(dim, &config)
        .into_iter()
        .map(|(_, p)| p)
        .collect()
}

fn diag(p: &[f64]) -> DensityMatrix {
    DensityMatrix::diagonal(p).unwrap()
}

fn real(rows: &[&[f64]]) -> DensityMatrix {
    DensityMatrix::new(ComplexMatrix::from_real_rows(rows).unwrap()).unwrap()
}

/// 0.7 ρ + 0.3 1/d, spectrum at least 0.3/d.
fn blended(dim: usize, seed: u64) -> DensityMatrix {
    let mixed = DensityMatrix::maximally_mixed(dim);
    let rho = random_density(dim, seed);
    DensityMatrix::new(&rho.matrix().scale(0.7) + &mixed.matrix().scale(0.3)).unwrap()
}

fn fidelity_optimality() -> Verdict {
    let mut worst_gap = f64::INFINITY;
    let mut worst_attain = 0.0f64;
    for (d, s, ch) in channels() {
        let root = fidelity_root(ch.rho0(), ch.rho1()).map_err(|e| e.to_string())?;
        let config = SearchConfig::new(200, s, false, T_GRID.to_vec()).unwrap();
        let min = oracle_min_bhattacharyya(&ch, &config)
            .map_err(|e| e.to_string())?
            .value;
        let bures = bures_optimal_measurement(ch.rho0(), ch.rho1()).map_err(|e| e.to_string())?;
        let attained = achieved_coefficient(ch.rho0(), ch.rho1(), &bures.optimal_povm).unwrap();
        worst_gap = worst_gap.min(min - root);
        worst_attain = worst_attain.max((attained - root).abs());
        ensure(min >= root - SLACK, || {
            format!("dim {d} seed {s}: oracle {min} < root {root}")
        })?;
        ensure((attained - root).abs() <= ATTAIN, || {
            format!("dim {d} seed {s}: attained {attained} vs root {root}")
        })?;
    }
    Ok(format!(
        "150 channels x 200 POVMs; min(oracle - root) = {worst_gap:.3e}, max attainment error = {worst_attain:.3e}"
    ))
}

#[allow(clippy::approx_constant)]
fn fixture_scalars() -> Verdict {
    let (p0, p1) = (diag(&[0.6, 0.4]), diag(&[0.3, 0.7]));
    let root = fidelity_root(&p0, &p1).unwrap();
    ensure((root - 0.9534143).abs() <= 1e-7, || {
        format!("commuting root {root}")
    })?;
    let computational = Povm::computational(2);
    let k = kl_divergence(
        &outcome_distribution(&p0, &computational).unwrap(),
        &outcome_distribution(&p1, &computational).unwrap(),
    )
    .unwrap();
    let kb = kl_lower_bound_bures(&p0, &p1).unwrap();
    ensure((k - 0.1920420).abs() <= 1e-7, || format!("K {k}"))?;
    ensure((kb - 0.1920420).abs() <= 1e-7, || format!("K_B {kb}"))?;
    let m = likelihood_operator(&p0, &p1).unwrap();
    let m_err = (m.matrix()[(0, 0)].re - 1.4142136)
        .abs()
        .max((m.matrix()[(1, 1)].re - 0.7559289).abs())
        .max(m.matrix()[(0, 1)].norm());
    ensure(m_err <= 1e-7, || format!("M off by {m_err}"))?;

    let (q0, q1) = (diag(&[0.7, 0.3]), real(&[&[0.5, 0.2], &[0.2, 0.5]]));
    let nc_root = fidelity_root(&q0, &q1).unwrap();
    // 2x2 closed form: sqrt(tr(ρ0 ρ1) + 2 sqrt(det ρ0 det ρ1))
    let closed = ((0.7 * 0.5 + 0.3 * 0.5) + 2.0 * (0.21f64 * 0.21).sqrt()).sqrt();
    ensure((nc_root - 0.9591663).abs() <= 1e-7, || {
        format!("non-commuting root {nc_root}")
    })?;
    ensure((nc_root - closed).abs() <= 1e-12, || {
        format!("2x2 closed form {closed} vs {nc_root}")
    })?;
    Ok(format!(
        "commuting root {root:.9}, K = K_B = {kb:.9}, non-commuting root {nc_root:.9}"
    ))
}

fn inverse_pair() -> Verdict {
    let mut worst = 0.0f64;
    for (d, s, ch) in channels() {
        let m = likelihood_operator(ch.rho0(), ch.rho1()).map_err(|e| e.to_string())?;
        let n = likelihood_operator(ch.rho1(), ch.rho0()).map_err(|e| e.to_string())?;
        let err = (m.matrix() * n.matrix()).max_abs_diff(&ComplexMatrix::identity(d));
        worst = worst.max(err);
        ensure(err <= ATTAIN, || {
            format!("dim {d} seed {s}: |MN - 1| = {err}")
        })?;
    }
    Ok(format!("150 channels; max |MN - 1| = {worst:.3e}"))
}

fn holevo_inequality() -> Verdict {
    let mut worst = f64::INFINITY;
    let mut count = 0usize;
    for (d, s, ch) in channels() {
        let bases = povms(d, s, 100);
        for t in T_GRID {
            let at = ch.with_prior(t).unwrap();
            let chi = holevo_chi(&at);
            for povm in &bases {
                let i = mutual_information(&at, povm).map_err(|e| e.to_string())?;
                worst = worst.min(chi + SLACK - i);
                count += 1;
                ensure(i <= chi + SLACK, || {
                    format!("dim {d} seed {s} t {t}: I {i} > chi {chi}")
                })?;
            }
        }
    }
    Ok(format!("{count} evaluations; min margin = {worst:.3e}"))
}

fn curvature_chain() -> Verdict {
    let mut count = 0usize;
    let mut worst_fuchs = 0.0f64;
    for (d, s, ch) in channels() {
        let bases = povms(d, s, 100);
        for t in T_GRID {
            let at = ch.with_prior(t).unwrap();
            let s2 = s_second_derivative(&at);
            let l2 = l_second_derivative(&at).map_err(|e| e.to_string())?;
            ensure(s2 <= l2 + SLACK, || {
                format!("dim {d} seed {s} t {t}: S'' {s2} > L'' {l2}")
            })?;
            for povm in &bases {
                let i2 = i_second_derivative(&at, povm).map_err(|e| e.to_string())?;
                count += 1;
                ensure(l2 <= i2 + SLACK && i2 <= 1e-12 + SLACK, || {
                    format!("dim {d} seed {s} t {t}: L'' {l2}, I'' {i2}")
                })?;
            }
            let fuchs = fuchs_measurement(&at).map_err(|e| e.to_string())?;
            let i2 = i_second_derivative(&at, &fuchs).map_err(|e| e.to_string())?;
            worst_fuchs = worst_fuchs.max((i2 - l2).abs());
            ensure((i2 - l2).abs() <= ATTAIN, || {
                format!("dim {d} seed {s} t {t}: I''(E^F) {i2} vs L'' {l2}")
            })?;
        }
    }
    Ok(format!(
        "{count} sampled curvatures; max |I''(fuchs) - L''| = {worst_fuchs:.3e}"
    ))
}

fn derivative_oracles() -> Verdict {
    let mut worst = 0.0f64;
    for d in DIMS {
        for s in SEEDS {
            let ch = BinaryChannel::new(blended(d, 2 * s), blended(d, 2 * s + 1), 0.5).unwrap();
            let fuchs = fuchs_measurement(&ch).map_err(|e| e.to_string())?;
            let mut bases = povms(d, s, 3);
            bases.push(fuchs);
            for t in T_GRID {
                let at = ch.with_prior(t).unwrap();
                for povm in &bases {
                    let info =
                        |x: f64| mutual_information(&ch.with_prior(x).unwrap(), povm).unwrap();
                    let fd = finite_difference_second(info, t, FD_STEP).unwrap();
                    let analytic = i_second_derivative(&at, povm).map_err(|e| e.to_string())?;
                    worst = worst.max((fd - analytic).abs());
                    ensure((fd - analytic).abs() <= FD_TOL, || {
                        format!("dim {d} seed {s} t {t}: fd I'' {fd} vs {analytic}")
                    })?;
                }
                let chi = |x: f64| holevo_chi(&ch.with_prior(x).unwrap());
                let fd = finite_difference_second(chi, t, FD_STEP).unwrap();
                let s2 = s_second_derivative(&at);
                worst = worst.max((fd - s2).abs());
                ensure((fd - s2).abs() <= FD_TOL, || {
                    format!("dim {d} seed {s} t {t}: fd S'' {fd} vs {s2}")
                })?;
            }
        }
    }
    let ch = BinaryChannel::new(diag(&[0.9, 0.1]), diag(&[0.1, 0.9]), 0.5).unwrap();
    let fuchs = fuchs_measurement(&ch).unwrap();
    let values = [
        i_second_derivative(&ch, &fuchs).unwrap(),
        s_second_derivative(&ch),
        l_second_derivative(&ch).unwrap(),
    ];
    ensure(values.iter().all(|v| (v + 2.56).abs() <= 1e-6), || {
        format!("fixture curvatures {values:?}")
    })?;
    Ok(format!("150 well-conditioned channels; max |fd - analytic| = {worst:.3e}; fixture I'' = S'' = L'' = -2.56"))
}

fn commuting_saturation() -> Verdict {
    let mut worst = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for d in DIMS {
        for _ in SEEDS {
            let mut draw = || {
                let v: Vec<f64> = (0..d).map(|_| rng.random_range(0.01..1.0)).collect();
                let total: f64 = v.iter().sum();
                diag(&v.iter().map(|x| x / total).collect::<Vec<_>>())
            };
            let (a, b) = (draw(), draw());
            let ch = BinaryChannel::new(a, b, 0.5).unwrap();
            ensure(ch.commutator_norm() <= 1e-10, || {
                "diagonal pair does not commute".into()
            })?;
            for t in T_GRID {
                let at = ch.with_prior(t).unwrap();
                let gap = (lower_bound_m(&at).map_err(|e| e.to_string())? - holevo_chi(&at)).abs();
                worst = worst.max(gap);
                ensure(gap <= ATTAIN, || {
                    format!("dim {d} t {t}: |M - chi| = {gap}")
                })?;
            }
        }
    }
    let ch = BinaryChannel::new(diag(&[0.9, 0.1]), diag(&[0.1, 0.9]), 0.5).unwrap();
    let m = lower_bound_m(&ch).unwrap();
    ensure((m - 0.3680642).abs() <= 1e-6, || format!("fixture M {m}"))?;
    Ok(format!(
        "150 commuting channels; max |M - chi| = {worst:.3e}; fixture M = {m:.9}"
    ))
}

fn sandwich_integrity() -> Verdict {
    let mut checked = 0usize;
    for (d, s, ch) in channels() {
        let config = SearchConfig::with_samples(200, s).unwrap();
        let report = build_report(&ch, &config).map_err(|e| e.to_string())?;
        for row in &report.info {
            let best = row
                .oracle_best
                .ok_or_else(|| format!("dim {d} seed {s}: no oracle value"))?
                .value;
            let m = row
                .m_lower
                .ok_or_else(|| format!("dim {d} seed {s}: no M"))?;
            checked += 1;
            ensure(m <= best + SLACK && best <= row.chi + SLACK, || {
                format!(
                    "dim {d} seed {s} t {}: M {m}, oracle {best}, chi {}",
                    row.t, row.chi
                )
            })?;
        }
        ensure(report.passed(), || {
            let names: Vec<_> = report.failing().iter().map(|c| c.name.clone()).collect();
            format!("dim {d} seed {s}: failing checks {names:?}")
        })?;
    }
    Ok(format!("{checked} (channel, t) rows from full verify runs"))
}

fn phi_inequality() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = f64::INFINITY;
    for _ in 0..100_000 {
        // 1 - U[0, 1) lies in (0, 1]
        let x = 1.0 - rng.random::<f64>();
        let y = 1.0 - rng.random::<f64>();
        let (lhs, rhs) = (phi(x, y), 2.0 / (x + y));
        worst = worst.min((lhs - rhs) / rhs);
        ensure(lhs >= rhs * (1.0 - 1e-12), || {
            format!("phi({x}, {y}) = {lhs} < {rhs}")
        })?;
    }
    Ok(format!("100000 pairs; min relative margin = {worst:.3e}"))
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("channel.json");
    let ch = random_channel(3, 11, 0.4).unwrap();
    save_channel(&ch, &path).map_err(|e| e.to_string())?;
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_qdist"))
            .args(["verify", "--channel"])
            .arg(&path)
            .args(["--samples", "300", "--seed", "5"])
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    ensure(a.status.success(), || {
        format!("verify exited with {}", a.status)
    })?;
    ensure(a.stdout == b.stdout, || {
        "verify reports differ between runs".into()
    })?;

    let mut worst = 0.0f64;
    for (d, s, ch) in channels() {
        let file = dir.path().join(format!("c{d}_{s}.json"));
        save_channel(&ch, &file).map_err(|e| e.to_string())?;
        let back = load_channel(&file).map_err(|e| e.to_string())?;
        let err = back
            .rho0()
            .matrix()
            .max_abs_diff(ch.rho0().matrix())
            .max(back.rho1().matrix().max_abs_diff(ch.rho1().matrix()));
        worst = worst.max(err);
        ensure(err <= 1e-15 && back.t() == ch.t(), || {
            format!("dim {d} seed {s}: round trip error {err}")
        })?;
    }
    Ok(format!(
        "two verify runs byte-identical ({} bytes); 150 round trips, max error {worst:.1e}",
        a.stdout.len()
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("fidelity optimality", fidelity_optimality),
        ("fixture scalars", fixture_scalars),
        ("inverse-pair identity", inverse_pair),
        ("holevo inequality", holevo_inequality),
        ("curvature chain", curvature_chain),
        ("derivative oracles", derivative_oracles),
        ("commuting saturation", commuting_saturation),
        ("sandwich integrity", sandwich_integrity),
        ("phi inequality", phi_inequality),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, criterion)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = criterion();
        let elapsed = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!(
                "criterion {:>2} PASS {name}: {detail} [{elapsed:.2}s]",
                i + 1
            ),
            Err(detail) => {
                failures += 1;
                println!(
                    "criterion {:>2} FAIL {name}: {detail} [{elapsed:.2}s]",
                    i + 1
                );
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
