use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qdistinguish::distinguish::{
    achieved_coefficient, bures_angle, bures_optimal_measurement, fidelity_root, naive_lower_bound,
};
use qdistinguish::holevo::{
    fuchs_measurement, holevo_chi, i_second_derivative, l_second_derivative, lower_bound_m,
    mutual_information,
};
use qdistinguish::io::{load_channel, save_channel};
use qdistinguish::oracle::{oracle_max_mutual_information, SearchConfig};
use qdistinguish::report::{build_report, sig9, Units};
use qdistinguish::sampling::random_channel;
use qdistinguish::{BinaryChannel, ComplexMatrix, Error, ErrorCategory, Povm};

const EXIT_CHECKS_FAILED: u8 = 1;
const SWEEP_HEADER: &str = "t,i_bures,i_fuchs,m_lower,chi";

#[derive(Parser)]
#[command(
    name = "qdist",
    version,
    about = "Distinguishability measures and information bounds for binary quantum channels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the fidelity, Bures angle and related scalars.
    Fidelity {
        #[arg(long)]
        channel: PathBuf,
    },
    /// Write an optimal measurement with the metrics it achieves.
    OptimalPovm {
        #[arg(long)]
        channel: PathBuf,
        #[arg(long, value_enum)]
        which: Which,
        /// Prior for the fuchs measurement; defaults to the file's value.
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        bits: bool,
    },
    /// Tabulate information quantities at t = k/(steps+1), k = 1..steps.
    Sweep {
        #[arg(long)]
        channel: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        steps: u32,
        /// Adds an oracle_best column from this many random measurements.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        bits: bool,
    },
    /// Run every consistency check and print the report.
    Verify {
        #[arg(long)]
        channel: PathBuf,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        bits: bool,
    },
    /// Write a channel of two independent random states.
    Random {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        dim: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.5)]
        t: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Bures,
    Fuchs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e.category() {
        ErrorCategory::Validation => 2,
        ErrorCategory::Conditioning => 3,
        ErrorCategory::Io => 4,
    }
}

fn units(bits: bool) -> Units {
    if bits {
        Units::Bits
    } else {
        Units::Nats
    }
}

fn run(command: Command) -> Result<u8, Error> {
    match command {
        Command::Fidelity { channel } => {
            print!("{}", fidelity(&load_channel(channel)?)?);
            Ok(0)
        }
        Command::OptimalPovm {
            channel,
            which,
            t,
            out,
            bits,
        } => {
            let mut channel = load_channel(channel)?;
            if let Some(t) = t {
                channel = channel.with_prior(t)?;
            }
            let text = optimal_povm(&channel, which, units(bits))?;
            emit(out.as_deref(), &text)?;
            Ok(0)
        }
        Command::Sweep {
            channel,
            steps,
            samples,
            seed,
            out,
            bits,
        } => {
            let channel = load_channel(channel)?;
            let config = samples
                .map(|s| SearchConfig::with_samples(s, seed))
                .transpose()?;
            let text = sweep(&channel, steps, config.as_ref(), units(bits))?;
            emit(out.as_deref(), &text)?;
            eprintln!("boundary: i_bures = i_fuchs = m_lower = chi = 0 exactly at t = 0 and t = 1");
            Ok(0)
        }
        Command::Verify {
            channel,
            samples,
            seed,
            bits,
        } => {
            let channel = load_channel(channel)?;
            let config = SearchConfig::with_samples(samples, seed)?;
            let report = build_report(&channel, &config)?;
            print!("{}", report.render(units(bits)));
            Ok(if report.passed() {
                0
            } else {
                EXIT_CHECKS_FAILED
            })
        }
        Command::Random { dim, seed, t, out } => {
            let channel = random_channel(dim as usize, seed, t)?;
            match out {
                Some(path) => save_channel(&channel, path)?,
                None => print!("{}", qdistinguish::io::render_channel(&channel)),
            }
            Ok(0)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn fidelity(channel: &BinaryChannel) -> Result<String, Error> {
    let (rho0, rho1) = (channel.rho0(), channel.rho1());
    let root = fidelity_root(rho0, rho1)?;
    let mut out = String::new();
    writeln!(out, "fidelity_root = {}", sig9(root)).unwrap();
    writeln!(out, "bures_angle = {}", sig9(bures_angle(rho0, rho1)?)).unwrap();
    writeln!(
        out,
        "naive_lower_bound = {}",
        sig9(naive_lower_bound(rho0, rho1)?)
    )
    .unwrap();
    writeln!(out, "transition_probability = {}", sig9(root * root)).unwrap();
    writeln!(out, "commutator_norm = {}", sig9(channel.commutator_norm())).unwrap();
    Ok(out)
}

fn matrix_json(m: &ComplexMatrix) -> Value {
    let rows: Vec<Value> = (0..m.dim())
        .map(|i| m.row(i).iter().map(|z| json!([z.re, z.im])).collect())
        .collect();
    Value::Array(rows)
}

fn povm_json(povm: &Povm) -> Value {
    Value::Array(
        povm.elements()
            .iter()
            .map(|e| matrix_json(e.matrix()))
            .collect(),
    )
}

fn optimal_povm(channel: &BinaryChannel, which: Which, units: Units) -> Result<String, Error> {
    let (rho0, rho1) = (channel.rho0(), channel.rho1());
    let doc = match which {
        Which::Bures => {
            let bures = bures_optimal_measurement(rho0, rho1)?;
            let povm = &bures.optimal_povm;
            json!({
                "which": "bures",
                "dim": channel.dim(),
                "elements": povm_json(povm),
                "metrics": {
                    "achieved_coefficient": achieved_coefficient(rho0, rho1, povm)?,
                    "fidelity_root": bures.fidelity_root,
                    "likelihood_eigenvalues": bures.likelihood_eigenvalues,
                },
            })
        }
        Which::Fuchs => {
            let povm = fuchs_measurement(channel)?;
            json!({
                "which": "fuchs",
                "dim": channel.dim(),
                "t": channel.t(),
                "units": units.label(),
                "elements": povm_json(&povm),
                "metrics": {
                    "mutual_information": units.convert(mutual_information(channel, &povm)?),
                    "i_second_derivative": units.convert(i_second_derivative(channel, &povm)?),
                    "l_second_derivative": units.convert(l_second_derivative(channel)?),
                },
            })
        }
    };
    let mut text = serde_json::to_string_pretty(&doc).map_err(|e| Error::Parse(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

fn sweep(
    channel: &BinaryChannel,
    steps: u32,
    config: Option<&SearchConfig>,
    units: Units,
) -> Result<String, Error> {
    let bures = bures_optimal_measurement(channel.rho0(), channel.rho1())?.optimal_povm;
    let mut out = String::from(SWEEP_HEADER);
    if config.is_some() {
        out.push_str(",oracle_best");
    }
    out.push('\n');
    let cell = |x: f64| format!("{:.16e}", units.convert(x));
    for k in 1..=steps {
        let t = f64::from(k) / f64::from(steps + 1);
        let at = channel.with_prior(t)?;
        let fuchs = fuchs_measurement(&at)?;
        let mut row = vec![
            format!("{t:.16e}"),
            cell(mutual_information(&at, &bures)?),
            cell(mutual_information(&at, &fuchs)?),
            cell(lower_bound_m(&at)?),
            cell(holevo_chi(&at)),
        ];
        if let Some(config) = config {
            row.push(cell(oracle_max_mutual_information(&at, t, config)?.value));
        }
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(out)
}
