//! Argument parsing and dispatch.
//!
//! Exit codes: 0 on success, 1 for usage problems (bad flags, malformed
//! specs, unwritable paths), 2 when a request is structurally impossible
//! (capacity limits, integrity violations).  `--help` and `--version`
//! exit 0.  Progress and errors go to stderr; results go to the requested
//! output, stdout by default.

use std::fs;
use std::io::Write;

use clap::error::ErrorKind as ClapErrorKind;
use clap::{Args, Parser, Subcommand};

use choicewalk::ErrorKind;

use crate::commands::{self, CommandResult};
use crate::config::{RunConfig, DEFAULT_SEED};
use crate::output::{emit_csv, emit_json};
use crate::svg::render_chart;

#[derive(Parser, Debug)]
#[command(
    name = "choicewalk",
    version,
    about = "Power-of-choice processes on monotone Boolean functions",
    disable_help_subcommand = true
)]
struct Cli {
    /// Worker threads for Monte Carlo runs (0 = all cores).  The
    /// CHOICEWALK_WORKERS environment variable sets the default.  Results
    /// never depend on this.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Output destination (`-` for stdout).
    #[arg(long, default_value = "-")]
    out: String,
    /// Output format.
    #[arg(long, default_value = "csv", value_parser = ["csv", "json"])]
    format: String,
}

#[derive(Args, Debug)]
struct SeedArg {
    /// Base seed (a u64, or `random` to draw one; the drawn value is
    /// recorded in the output metadata).
    #[arg(long, default_value = "choice")]
    seed: String,
}

#[derive(Args, Debug)]
struct ProcessArgs {
    /// Walk to run.
    #[arg(long, default_value = "solo", value_parser = ["solo", "rchoice", "rcomplete"])]
    process: String,
    /// Proposals per step for rchoice/rcomplete.
    #[arg(long, default_value_t = 2)]
    r: usize,
    /// Agent policy for rchoice (see `choicewalk families`).
    #[arg(long, default_value = "uniform")]
    policy: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run independent walks and record one hitting time per trial.
    Simulate {
        /// Function instance, e.g. `tribes:n=60,s=4`.
        #[arg(long)]
        family: String,
        #[command(flatten)]
        process: ProcessArgs,
        /// Number of independent walks.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[command(flatten)]
        seed: SeedArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Estimate the activation curve over a time grid.
    Curve {
        #[arg(long)]
        family: String,
        #[command(flatten)]
        process: ProcessArgs,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        /// Grid: `auto`, `a:b`, `a:b:step`, or a comma list.
        #[arg(long, default_value = "auto")]
        grid: String,
        #[command(flatten)]
        seed: SeedArg,
        #[command(flatten)]
        output: OutputArgs,
        /// Also draw the curve to this SVG file.
        #[arg(long)]
        svg: Option<String>,
    },
    /// Estimate the threshold (lower-median hitting time).
    Threshold {
        #[arg(long)]
        family: String,
        #[command(flatten)]
        process: ProcessArgs,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[command(flatten)]
        seed: SeedArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Compare r-choice against solo: rho = r*T_r/T_1 across scales.
    Ratio {
        /// Family instance or template with `{}` for the scale; repeatable.
        #[arg(long, required = true)]
        family: Vec<String>,
        /// Scales substituted into `{}` templates, e.g. `200,400,800`.
        #[arg(long, value_delimiter = ',')]
        ns: Vec<usize>,
        /// Proposals per step.
        #[arg(long, default_value_t = 2)]
        r: usize,
        /// Agent policy.
        #[arg(long, default_value = "uniform")]
        policy: String,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[command(flatten)]
        seed: SeedArg,
        #[command(flatten)]
        output: OutputArgs,
        /// Also draw rho against scale to this SVG file.
        #[arg(long)]
        svg: Option<String>,
    },
    /// Exact activation curves by dynamic programming (small arities).
    Exact {
        #[arg(long)]
        family: String,
        /// Which curve: the solo walk, a concrete policy, or the optimal
        /// prescient agent.
        #[arg(long, default_value = "solo", value_parser = ["solo", "policy", "optimal"])]
        mode: String,
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long, default_value = "uniform")]
        policy: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Count how often bits are proposed on an inactive ground set.
    Census {
        /// Ground-set size.
        #[arg(long)]
        n: usize,
        /// Proposals per step.
        #[arg(long, default_value_t = 2)]
        r: usize,
        /// Steps as a fraction of n (conflicts with --steps).
        #[arg(long, conflicts_with = "steps")]
        eps: Option<f64>,
        /// Absolute step count.
        #[arg(long)]
        steps: Option<usize>,
        /// Independent repetitions.
        #[arg(long, default_value_t = 1)]
        reps: usize,
        #[command(flatten)]
        seed: SeedArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Audit a function: monotonicity, restriction trace, predictions.
    Diagnose {
        #[arg(long)]
        family: String,
        /// Activation prefix sizes to trace, e.g. `0,8,32`.
        #[arg(long, value_delimiter = ',', default_value = "0")]
        prefixes: Vec<usize>,
        /// Trials for each contraction threshold estimate.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Proposals per step assumed by the threshold prediction.
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[command(flatten)]
        seed: SeedArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// List available function families and agent policies.
    Families {
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// Errors carried out of dispatch: domain errors keep their kind, I/O
/// failures are reported verbatim and treated as usage problems.
#[derive(Debug)]
pub enum CliError {
    Domain(choicewalk::Error),
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Domain(e) => write!(f, "{e}"),
            CliError::Io { path, source } => write!(f, "{path}: {source}"),
        }
    }
}

impl From<choicewalk::Error> for CliError {
    fn from(e: choicewalk::Error) -> Self {
        CliError::Domain(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(e) => match e.kind() {
                ErrorKind::Usage => 1,
                ErrorKind::Capacity | ErrorKind::Integrity => 2,
            },
            CliError::Io { .. } => 1,
        }
    }
}

fn resolve_seed(raw: &str) -> Result<u64, CliError> {
    match raw {
        "choice" => Ok(DEFAULT_SEED),
        "random" => Ok(rand::random()),
        other => other.parse().map_err(|_| {
            CliError::Domain(choicewalk::Error::InvalidParameter(format!(
                "seed must be a u64 or `random`, got `{other}`"
            )))
        }),
    }
}

/// Install the rayon pool size once.  A later conflicting request is
/// harmless because results are worker-independent by construction.
fn configure_workers(flag: Option<usize>) {
    let from_env = std::env::var("CHOICEWALK_WORKERS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok());
    let Some(workers) = flag.or(from_env).filter(|&w| w > 0) else {
        return;
    };
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build_global();
}

fn write_result(
    result: &CommandResult,
    config: &RunConfig,
    svg: Option<&str>,
) -> Result<(), CliError> {
    let mut buffer = Vec::new();
    let emit = match config.format.as_str() {
        "json" => emit_json,
        _ => emit_csv,
    };
    emit(&result.table, config, &mut buffer).map_err(|source| CliError::Io {
        path: config.output.clone(),
        source,
    })?;
    if config.output == "-" {
        std::io::stdout()
            .write_all(&buffer)
            .map_err(|source| CliError::Io {
                path: "<stdout>".to_string(),
                source,
            })?;
    } else {
        fs::write(&config.output, &buffer).map_err(|source| CliError::Io {
            path: config.output.clone(),
            source,
        })?;
    }
    if let Some(path) = svg {
        let chart = result.chart.as_ref().ok_or_else(|| {
            CliError::Domain(choicewalk::Error::InvalidParameter(
                "this command has nothing to draw".to_string(),
            ))
        })?;
        let text = render_chart(&chart.title, chart.x_label, chart.y_label, &chart.series)?;
        fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_string(),
            source,
        })?;
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<(), CliError> {
    configure_workers(cli.workers);
    match cli.command {
        Command::Simulate {
            family,
            process,
            trials,
            seed,
            output,
        } => {
            let seed = resolve_seed(&seed.seed)?;
            let proc = commands::build_process(&process.process, process.r, &process.policy)?;
            let mut config = RunConfig::new("simulate", seed, &output.out, &output.format);
            config.families = vec![family.clone()];
            config.process = Some(proc.to_string());
            config.trials = Some(trials);
            let result = commands::simulate(&family, &proc, trials, seed)?;
            write_result(&result, &config, None)
        }
        Command::Curve {
            family,
            process,
            trials,
            grid,
            seed,
            output,
            svg,
        } => {
            let seed = resolve_seed(&seed.seed)?;
            let proc = commands::build_process(&process.process, process.r, &process.policy)?;
            let mut config = RunConfig::new("curve", seed, &output.out, &output.format);
            config.families = vec![family.clone()];
            config.process = Some(proc.to_string());
            config.trials = Some(trials);
            config.grid = Some(grid.clone());
            config.svg = svg.clone();
            let result = commands::curve(&family, &proc, trials, &grid, seed)?;
            write_result(&result, &config, svg.as_deref())
        }
        Command::Threshold {
            family,
            process,
            trials,
            seed,
            output,
        } => {
            let seed = resolve_seed(&seed.seed)?;
            let proc = commands::build_process(&process.process, process.r, &process.policy)?;
            let mut config = RunConfig::new("threshold", seed, &output.out, &output.format);
            config.families = vec![family.clone()];
            config.process = Some(proc.to_string());
            config.trials = Some(trials);
            let result = commands::threshold(&family, &proc, trials, seed)?;
            write_result(&result, &config, None)
        }
        Command::Ratio {
            family,
            ns,
            r,
            policy,
            trials,
            seed,
            output,
            svg,
        } => {
            let seed = resolve_seed(&seed.seed)?;
            let mut config = RunConfig::new("ratio", seed, &output.out, &output.format);
            config.families = family.clone();
            config.ns = ns.clone();
            config.r = Some(r);
            config.policy = Some(policy.clone());
            config.trials = Some(trials);
            config.svg = svg.clone();
            let result = commands::ratio(&family, &ns, r, &policy, trials, seed, true)?;
            write_result(&result, &config, svg.as_deref())
        }
        Command::Exact {
            family,
            mode,
            r,
            policy,
            output,
        } => {
            let mut config = RunConfig::new("exact", DEFAULT_SEED, &output.out, &output.format);
            config.families = vec![family.clone()];
            config.mode = Some(mode.clone());
            if mode != "solo" {
                config.r = Some(r);
            }
            if mode == "policy" {
                config.policy = Some(policy.clone());
            }
            let result = commands::exact(&family, &mode, r, &policy)?;
            write_result(&result, &config, None)
        }
        Command::Census {
            n,
            r,
            eps,
            steps,
            reps,
            seed,
            output,
        } => {
            let seed = resolve_seed(&seed.seed)?;
            let steps = match (steps, eps) {
                (Some(s), _) => s,
                (None, eps) => {
                    let eps = eps.unwrap_or(0.3);
                    if !(eps > 0.0 && eps <= 1.0) {
                        return Err(CliError::Domain(choicewalk::Error::InvalidParameter(
                            format!("eps must lie in (0, 1], got {eps}"),
                        )));
                    }
                    (eps * n as f64).round() as usize
                }
            };
            let mut config = RunConfig::new("census", seed, &output.out, &output.format);
            config.n = Some(n);
            config.r = Some(r);
            config.steps = Some(steps);
            config.reps = Some(reps);
            let result = commands::census(n, r, steps, reps, seed)?;
            write_result(&result, &config, None)
        }
        Command::Diagnose {
            family,
            prefixes,
            trials,
            r,
            seed,
            output,
        } => {
            let seed = resolve_seed(&seed.seed)?;
            let mut config = RunConfig::new("diagnose", seed, &output.out, &output.format);
            config.families = vec![family.clone()];
            config.prefixes = prefixes.clone();
            config.trials = Some(trials);
            config.r = Some(r);
            let result = commands::diagnose(&family, &prefixes, trials, r, seed)?;
            write_result(&result, &config, None)
        }
        Command::Families { output } => {
            let config = RunConfig::new("families", DEFAULT_SEED, &output.out, &output.format);
            let result = commands::families()?;
            write_result(&result, &config, None)
        }
    }
}

/// Parse `argv` and run.  Returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ClapErrorKind::DisplayHelp | ClapErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            // clap renders help to stdout and errors to stderr.
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
