mod render;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use symgen::construct::{self, Certificate, ConstructConfig, Outcome, Strategy};
use symgen::families::{self, CoverMode};
use symgen::lll;
use symgen::oracles::clique::{self, CliqueMode};
use symgen::oracles::{generation, lattice, setcover};
use symgen::{Error, Family};

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_VERIFY: u8 = 2;
const EXIT_LIMIT: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "symgen",
    version,
    about = "Pairwise generating sets and coverings of symmetric groups"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write the result here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum ModeArg {
    CycleType,
    Exhaustive,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum StrategyArg {
    MoserTardos,
    MinConflicts,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum ExactWhat {
    Sigma,
    Omega,
    Generation,
    Lattice,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum OmegaMode {
    Full,
    AtLeastAlt,
}

fn family_arg(s: &str) -> Result<u8, String> {
    match s {
        "1" => Ok(1),
        "2" => Ok(2),
        _ => Err(format!("family must be 1 or 2, got {s:?}")),
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check whether the family M(i) covers S_n.
    Cover {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = family_arg)]
        i: u8,
        #[arg(long, value_enum, default_value_t = ModeArg::CycleType)]
        mode: ModeArg,
    },
    /// Local-lemma report at one degree, or a sweep up to --n-max.
    Lll {
        #[arg(long, value_parser = family_arg)]
        i: u8,
        /// Single degree; emits a report (or a certificate with --certificate).
        #[arg(long, conflicts_with = "n_max", required_unless_present = "n_max")]
        n: Option<usize>,
        #[arg(long, default_value_t = 6)]
        n_min: usize,
        #[arg(long)]
        n_max: Option<usize>,
        /// Wrap the single-degree report in a checksummed certificate.
        #[arg(long, requires = "n")]
        certificate: bool,
    },
    /// Build a pairwise generating set, one element per pool.
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = family_arg)]
        i: u8,
        #[arg(long, env = "SYMGEN_SEED", default_value_t = 0)]
        seed: u64,
        /// Default 1000 times the family size.
        #[arg(long)]
        max_rounds: Option<u64>,
        #[arg(long, default_value_t = construct::DEFAULT_MAX_PAIRS)]
        max_pairs: u64,
        #[arg(long, value_enum, default_value_t = StrategyArg::MoserTardos)]
        strategy: StrategyArg,
        /// Record the current time (excluded from the checksum).
        #[arg(long)]
        timestamp: bool,
    },
    /// Re-check a certificate file (raw or as written by this tool).
    Verify { path: PathBuf },
    /// Exact small-degree oracles.
    Exact {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        what: ExactWhat,
        #[arg(long, value_enum, default_value_t = OmegaMode::Full)]
        mode: OmegaMode,
        /// Allow n = 6 for the generation counts.
        #[arg(long)]
        long: bool,
    },
    /// Monte Carlo generation probabilities with 99% intervals.
    Probgen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, env = "SYMGEN_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Size of M(1) plus all set stabilizers of size at most n/3.
    SigmaUpper {
        #[arg(long)]
        n: usize,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::LimitExceeded(_) => EXIT_LIMIT,
            Error::MalformedCertificate(_) => EXIT_VERIFY,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

/// A finished command: the payload, its text view and the exit code.
struct Report {
    config: Value,
    result: Value,
    text: String,
    code: u8,
}

fn family(i: u8) -> Result<Family, Failure> {
    Family::try_from(i).map_err(Failure::from)
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("results serialize")
}

fn run(command: &Command) -> Result<Report, Failure> {
    match command {
        Command::Cover { n, i, mode } => {
            let fam = family(*i)?;
            let core_mode = match mode {
                ModeArg::CycleType => CoverMode::CycleType,
                ModeArg::Exhaustive => CoverMode::Exhaustive,
            };
            let report = families::covers(*n, fam, core_mode)?;
            let code = if fam == Family::Two && !report.covered {
                EXIT_VERIFY
            } else {
                EXIT_OK
            };
            Ok(Report {
                config: json!({"command": "cover", "n": n, "i": i, "mode": mode}),
                text: render::cover(&report),
                result: to_value(&report),
                code,
            })
        }
        Command::Lll {
            i,
            n,
            n_min,
            n_max,
            certificate,
        } => {
            let fam = family(*i)?;
            match (n, n_max) {
                (Some(n), _) if *certificate => {
                    let cert = construct::lll_certificate(*n, fam)?;
                    Ok(Report {
                        config: json!({"command": "lll", "n": n, "i": i, "certificate": true}),
                        text: render::certificate(&cert),
                        result: to_value(&cert),
                        code: EXIT_OK,
                    })
                }
                (Some(n), _) => {
                    let report = lll::lll_report(*n, fam)?;
                    Ok(Report {
                        config: json!({"command": "lll", "n": n, "i": i}),
                        text: render::lll_report(&report),
                        result: to_value(&report),
                        code: EXIT_OK,
                    })
                }
                (None, Some(n_max)) => {
                    if *n_max < 6 || n_min > n_max {
                        return Err(usage(format!(
                            "empty sweep range [{n_min}, {n_max}]; degrees start at 6"
                        )));
                    }
                    let sweep = lll::sweep(fam, *n_min, *n_max)?;
                    Ok(Report {
                        config: json!({"command": "lll", "i": i, "n_min": n_min, "n_max": n_max}),
                        text: render::sweep(&sweep),
                        result: to_value(&sweep),
                        code: EXIT_OK,
                    })
                }
                (None, None) => Err(usage("pass --n or --n-max")),
            }
        }
        Command::Construct {
            n,
            i,
            seed,
            max_rounds,
            max_pairs,
            strategy,
            timestamp,
        } => {
            let fam = family(*i)?;
            families::require_even(*n)?;
            let mut config = ConstructConfig::new(*n, fam, *seed)?;
            if let Some(r) = max_rounds {
                config.max_rounds = *r;
            }
            config.max_pairs = *max_pairs;
            config.strategy = match strategy {
                StrategyArg::MoserTardos => Strategy::MoserTardos,
                StrategyArg::MinConflicts => Strategy::MinConflicts,
            };
            let echoed = json!({"command": "construct", "construct": to_value(&config)});
            match construct::construct(&config)? {
                Outcome::Success { mut certificate } => {
                    if *timestamp {
                        let now = std::time::SystemTime::now()
                            .duration_since(std::time::UNIX_EPOCH)
                            .map(|d| d.as_secs())
                            .unwrap_or(0);
                        certificate = certificate.with_timestamp(now);
                    }
                    Ok(Report {
                        config: echoed,
                        text: render::certificate(&certificate),
                        result: to_value(&certificate),
                        code: EXIT_OK,
                    })
                }
                Outcome::Failure { report } => Ok(Report {
                    config: echoed,
                    text: render::failure(&report),
                    result: json!({"status": "FAILURE", "report": to_value(&report)}),
                    code: EXIT_LIMIT,
                }),
            }
        }
        Command::Verify { path } => {
            let text = fs::read_to_string(path).map_err(|e| Failure {
                code: EXIT_VERIFY,
                message: format!("cannot read {}: {e}", path.display()),
            })?;
            let cert = parse_certificate(&text)?;
            let report = construct::verify(&cert);
            Ok(Report {
                config: json!({"command": "verify", "path": path.display().to_string()}),
                text: render::verify(&report),
                code: if report.valid { EXIT_OK } else { EXIT_VERIFY },
                result: to_value(&report),
            })
        }
        Command::Exact {
            n,
            what,
            mode,
            long,
        } => {
            let config =
                json!({"command": "exact", "n": n, "what": what, "mode": mode, "long": long});
            let (result, text) = match what {
                ExactWhat::Sigma => {
                    let r = setcover::sigma_exact(*n)?;
                    (to_value(&r), render::sigma(&r))
                }
                ExactWhat::Omega => {
                    let m = match mode {
                        OmegaMode::Full => CliqueMode::Full,
                        OmegaMode::AtLeastAlt => CliqueMode::AtLeastAlt,
                    };
                    let r = clique::omega_exact(*n, m)?;
                    (to_value(&r), render::omega(&r))
                }
                ExactWhat::Generation => {
                    let r = generation::generation_counts_exact(*n, *long)?;
                    let value = json!({
                        "counts": to_value(&r),
                        "mixture_identity": r.mixture_identity_holds(),
                        "coset_identity": r.coset_identity_holds(),
                    });
                    (value, render::generation_exact(&r))
                }
                ExactWhat::Lattice => {
                    let l = lattice::SubgroupLattice::build(*n)?;
                    let mut orders: Vec<usize> = l.subgroups().iter().map(|s| s.order()).collect();
                    orders.dedup();
                    let maximal: Vec<usize> = l
                        .maximal_indices()
                        .iter()
                        .map(|&k| l.subgroups()[k].order())
                        .collect();
                    let value = json!({
                        "n": n,
                        "subgroups": l.len(),
                        "maximal_subgroups": maximal.len(),
                        "maximal_orders": maximal,
                    });
                    let text = format!("n={n}  subgroups={}  maximal={}\n", l.len(), maximal.len());
                    (value, text)
                }
            };
            Ok(Report {
                config,
                result,
                text,
                code: EXIT_OK,
            })
        }
        Command::Probgen { n, trials, seed } => {
            let r = generation::generation_prob_mc(*n, *trials, *seed)?;
            Ok(Report {
                config: json!({"command": "probgen", "n": n, "trials": trials, "seed": seed}),
                text: render::probgen(&r),
                result: to_value(&r),
                code: EXIT_OK,
            })
        }
        Command::SigmaUpper { n } => {
            let value = families::sigma_upper_bound(*n)?;
            Ok(Report {
                config: json!({"command": "sigma-upper", "n": n}),
                text: format!("{value}\n"),
                result: json!({"n": n, "sigma_upper": value.to_string()}),
                code: EXIT_OK,
            })
        }
    }
}

/// Accepts a bare certificate or this tool's `{tool, config, result}` wrapper.
fn parse_certificate(text: &str) -> Result<Certificate, Failure> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| Failure::from(Error::MalformedCertificate(format!("not JSON: {e}"))))?;
    let inner = match value.get("result") {
        Some(r) if value.get("tool").is_some() => r.clone(),
        _ => value,
    };
    serde_json::from_value(inner)
        .map_err(|e| Failure::from(Error::MalformedCertificate(e.to_string())))
}

fn emit(global: &Global, report: &Report) -> std::io::Result<()> {
    let body = match global.format {
        Format::Json => {
            let wrapped = json!({
                "tool": {"name": "symgen", "version": symgen::VERSION},
                "config": report.config,
                "result": report.result,
            });
            let mut s = serde_json::to_string_pretty(&wrapped).expect("json");
            s.push('\n');
            s
        }
        Format::Text => report.text.clone(),
    };
    match &global.output {
        Some(path) => fs::write(path, body),
        None => std::io::stdout().write_all(body.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(t) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
        {
            eprintln!("symgen: cannot set thread count: {e}");
        }
    }
    match run(&cli.command) {
        Ok(report) => {
            if let Err(e) = emit(&cli.global, &report) {
                eprintln!("symgen: cannot write output: {e}");
                return ExitCode::from(EXIT_USAGE);
            }
            ExitCode::from(report.code)
        }
        Err(f) => {
            let err = json!({"error": {"code": f.code, "message": f.message}});
            eprintln!("{}", serde_json::to_string(&err).expect("json"));
            ExitCode::from(f.code)
        }
    }
}
