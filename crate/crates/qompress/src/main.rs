use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qompress::claims::{self, ClaimOptions};
use qompress::docs::{self, DocError};
use qompress::report::{self, ShotCounts};
use qompress::sampling::rng;
use qompress::verify::{self, VerifyConfig};
use qompress_core::compress::{cost_report, simulate_compressed, Backend, Circuit, QuditLayout};
use qompress_core::mcz::{BellOutcome, HeraldSet};
use qompress_core::{BsmModel, Execution, SchemeKind, TriggerSet};
use rand::Rng;

const CHECK_FAILED: u8 = 1;
const USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "qompress",
    version,
    about = "Multi-level CZ gates for compressed qudit circuits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scheme {
    StateDependent,
    StateIndependent,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Ideal,
    LinearOptics,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Logical,
    Optical,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    All,
    Uncompressed,
    Standard,
    StateDependent,
    StateIndependent,
}

#[derive(Subcommand)]
enum Command {
    /// Check a scheme against the ideal gate on random inputs.
    Verify {
        /// Dimension of the first qudit; defaults to the smallest power of two above C1.
        #[arg(long)]
        d1: Option<usize>,
        #[arg(long)]
        d2: Option<usize>,
        /// Trigger levels of the first qudit, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        c1: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        c2: Vec<usize>,
        #[arg(long, value_enum, default_value = "state-dependent")]
        scheme: Scheme,
        #[arg(long, value_enum, default_value = "linear-optics")]
        model: Model,
        /// Heralded Bell outcomes, overriding the model (phi+,phi-,psi+,psi-).
        #[arg(long, value_delimiter = ',')]
        heralds: Option<Vec<String>>,
        #[arg(long, value_enum, default_value = "logical")]
        execution: Mode,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, env = "QOMPRESS_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Cost report of a circuit under a qudit layout; defaults to the bundled adder.
    Compress {
        #[arg(long, requires = "layout")]
        circuit: Option<PathBuf>,
        #[arg(long, requires = "circuit")]
        layout: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Truth table of a compressed circuit; defaults to the bundled adder.
    Simulate {
        #[arg(long, requires = "layout")]
        circuit: Option<PathBuf>,
        #[arg(long, requires = "circuit")]
        layout: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "all")]
        backend: BackendArg,
        #[arg(long, value_enum, default_value = "linear-optics")]
        model: Model,
        /// Sample this many heralding attempts per input.
        #[arg(long)]
        shots: Option<u64>,
        #[arg(long, env = "QOMPRESS_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Run every reproducible claim.
    Reproduce {
        /// Heralded Bell outcomes replacing linear optics (phi+,phi-,psi+,psi-).
        #[arg(long, value_delimiter = ',')]
        heralds: Option<Vec<String>>,
        #[arg(long, env = "QOMPRESS_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
}

fn usage(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(USAGE)
}

fn status(passed: bool) -> ExitCode {
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(CHECK_FAILED)
    }
}

fn heralds(names: &[String]) -> Result<HeraldSet, String> {
    names
        .iter()
        .map(|n| BellOutcome::from_name(n).ok_or_else(|| format!("unknown Bell outcome {n:?}")))
        .collect::<Result<Vec<_>, _>>()
        .map(HeraldSet::new)
}

fn model(m: Model, heralds_arg: &Option<Vec<String>>) -> Result<BsmModel, String> {
    if let Some(names) = heralds_arg {
        return heralds(names).map(BsmModel::Custom);
    }
    Ok(match m {
        Model::Ideal => BsmModel::Ideal,
        Model::LinearOptics => BsmModel::LinearOptics,
    })
}

fn trigger(d: Option<usize>, levels: &[usize]) -> Result<TriggerSet, String> {
    let d = d.unwrap_or_else(|| {
        (levels.iter().max().copied().unwrap_or(0) + 1)
            .next_power_of_two()
            .max(2)
    });
    TriggerSet::new(d, levels.iter().copied()).map_err(|e| e.to_string())
}

fn documents(
    circuit: Option<PathBuf>,
    layout: Option<PathBuf>,
) -> Result<(Circuit, QuditLayout), DocError> {
    match (circuit, layout) {
        (Some(c), Some(l)) => Ok((docs::read_circuit(&c)?, docs::read_layout(&l)?)),
        _ => Ok(docs::qfa()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match cli.command {
        Command::Verify {
            d1,
            d2,
            c1,
            c2,
            scheme,
            model: m,
            heralds: h,
            execution,
            samples,
            seed,
            format,
        } => {
            let cfg = (|| -> Result<VerifyConfig, String> {
                Ok(VerifyConfig {
                    c1: trigger(d1, &c1).map_err(|e| format!("--c1: {e}"))?,
                    c2: trigger(d2, &c2).map_err(|e| format!("--c2: {e}"))?,
                    scheme: match scheme {
                        Scheme::StateDependent => SchemeKind::StateDependent,
                        Scheme::StateIndependent => SchemeKind::StateIndependent,
                    },
                    model: model(m, &h)?,
                    execution: match execution {
                        Mode::Logical => Execution::Logical,
                        Mode::Optical => Execution::Optical,
                    },
                    samples,
                    seed,
                })
            })();
            let cfg = match cfg {
                Ok(cfg) => cfg,
                Err(e) => return usage(e),
            };
            if cfg.samples == 0 {
                return usage("--samples must be positive");
            }
            let r = verify::run(&cfg);
            match format {
                Format::Table => print!("{}", report::verify_table(&r)),
                Format::Json => println!("{}", report::to_json(&r)),
            }
            status(r.passed)
        }
        Command::Compress {
            circuit,
            layout,
            format,
        } => {
            let (c, l) = match documents(circuit, layout) {
                Ok(docs) => docs,
                Err(e) => return usage(e),
            };
            let r = match cost_report(&c, &l) {
                Ok(r) => r,
                Err(e) => return usage(e),
            };
            match format {
                Format::Table => print!("{}", report::cost_table(&c, &l, &r)),
                Format::Json => println!("{}", report::to_json(&report::cost_json(&c, &l, &r))),
            }
            status(r.diagnostics.is_empty())
        }
        Command::Simulate {
            circuit,
            layout,
            backend,
            model: m,
            shots,
            seed,
            format,
        } => {
            let (c, l) = match documents(circuit, layout) {
                Ok(docs) => docs,
                Err(e) => return usage(e),
            };
            let model = model(m, &None).expect("no herald override");
            let backends: Vec<Backend> = match backend {
                BackendArg::All => Backend::ALL.to_vec(),
                BackendArg::Uncompressed => vec![Backend::Uncompressed],
                BackendArg::Standard => vec![Backend::Standard],
                BackendArg::StateDependent => vec![Backend::StateDependent],
                BackendArg::StateIndependent => vec![Backend::StateIndependent],
            };
            let mut maps = Vec::new();
            for b in backends {
                match simulate_compressed(&c, &l, b, model) {
                    Ok(map) => maps.push(map),
                    Err(e) => {
                        eprintln!("error: {b}: {e}");
                        return ExitCode::from(CHECK_FAILED);
                    }
                }
            }
            let sampled: Option<Vec<Vec<ShotCounts>>> = shots.map(|n| {
                let mut r = rng(seed);
                maps.iter()
                    .map(|m| {
                        m.entries
                            .iter()
                            .map(|e| ShotCounts {
                                input: format!("{:0w$b}", e.input, w = m.qubits),
                                output: e.output.map(|o| format!("{o:0w$b}", w = m.qubits)),
                                shots: n,
                                successes: (0..n).filter(|_| r.random_bool(e.probability)).count()
                                    as u64,
                            })
                            .collect()
                    })
                    .collect()
            });
            match format {
                Format::Table => print!("{}", report::simulation_table(&maps, sampled.as_deref())),
                Format::Json => println!(
                    "{}",
                    report::to_json(&report::simulation_json(&maps, sampled.as_deref()))
                ),
            }
            ExitCode::SUCCESS
        }
        Command::Reproduce {
            heralds: h,
            seed,
            format,
        } => {
            let heralds = match h.as_deref().map(heralds).transpose() {
                Ok(set) => set,
                Err(e) => return usage(e),
            };
            let claims = claims::run_all(&ClaimOptions { seed, heralds });
            match format {
                Format::Table => print!("{}", report::claims_table(&claims)),
                Format::Json => println!("{}", report::to_json(&claims)),
            }
            status(claims.iter().all(|c| c.passed))
        }
    }
}
