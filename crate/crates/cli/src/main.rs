//! `rasp`: design and evaluate reliability acceptance sampling plans.

mod commands;
mod error;
mod fixtures;
mod reproduce;
mod scenario_file;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rasp_core::{Design, Engine, McConfig, SearchSpace};
use serde::Serialize;

use commands::{
    default_engine, parse_samples, run_decide, run_evaluate, run_optimize, run_rdsp, run_simulate,
};
use error::CliError;
use reproduce::{reproduce, ReproduceOptions};
use scenario_file::load_scenario;

#[derive(Parser)]
#[command(
    name = "rasp",
    version,
    about = "Bayesian acceptance sampling plans under hybrid censoring with a rebate warranty"
)]
struct Cli {
    /// Seed for every random stream.
    #[arg(long, global = true, default_value_t = 20_240_601)]
    seed: u64,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Evaluation engine (default: exact for exponential, mc for Weibull).
    #[arg(long, global = true, value_enum)]
    engine: Option<EngineArg>,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Exact,
    Mc,
    Rdsp,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Self {
        match e {
            EngineArg::Exact => Engine::Exact,
            EngineArg::Mc => Engine::Mc,
            EngineArg::Rdsp => Engine::Rdsp,
        }
    }
}

#[derive(Args, Clone, Copy)]
struct DesignArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    r: u32,
    #[arg(long)]
    t0: f64,
}

#[derive(Args, Clone, Copy)]
struct OptionalDesign {
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    r: Option<u32>,
    #[arg(long)]
    t0: Option<f64>,
}

#[derive(Args, Clone, Copy)]
struct BudgetArgs {
    /// Outer Monte Carlo replicates.
    #[arg(long)]
    s1: Option<u64>,
    /// Posterior draws per replicate.
    #[arg(long)]
    s2: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Search (n, r, T0) for the best plan.
    Optimize {
        scenario: PathBuf,
        #[arg(long, default_value_t = 12)]
        n_max: u32,
        #[arg(long, default_value_t = 0.05)]
        t_min: f64,
        #[arg(long, default_value_t = 40.0)]
        t_max: f64,
        #[arg(long, default_value_t = 48)]
        steps: usize,
        #[arg(long, default_value_t = 4)]
        refine: usize,
        /// Search trace CSV (default: next to --out, if given).
        #[arg(long)]
        trace: Option<PathBuf>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Expected utility of one plan.
    Evaluate {
        scenario: PathBuf,
        #[command(flatten)]
        design: DesignArgs,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Consumer decisions on observed data.
    Decide {
        scenario: PathBuf,
        /// A sample, an array of samples, or a `simulate` output file.
        data: PathBuf,
        /// Posterior draws for the Weibull model.
        #[arg(long, default_value_t = 10_000)]
        s2: usize,
    },
    /// Simulate life tests and the consumer's decisions.
    Simulate {
        scenario: PathBuf,
        #[command(flatten)]
        design: DesignArgs,
        #[arg(long, default_value_t = 1_000)]
        count: u64,
        #[arg(long, default_value_t = 1_000)]
        s2: usize,
    },
    /// Random-consumer plan evaluation or action probabilities for data.
    Rdsp {
        scenario: PathBuf,
        #[command(flatten)]
        design: OptionalDesign,
        /// Estimate action probabilities for these samples instead.
        #[arg(long)]
        data: Option<PathBuf>,
        /// Consumer draws per sample (overrides the scenario's K).
        #[arg(long)]
        k: Option<u32>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Regenerate a published table (1..8 or app) against its published values.
    Reproduce {
        table: String,
        /// Re-optimize random-consumer rows instead of evaluating the published design.
        #[arg(long)]
        search: bool,
        #[arg(long, default_value_t = 15)]
        n_max: u32,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

fn mc_config(cli: &Cli, budget: &BudgetArgs, s1: u64, s2: usize) -> McConfig {
    McConfig {
        s1: budget.s1.unwrap_or(s1),
        s2: budget.s2.unwrap_or(s2),
        seed: cli.seed,
        parallel_width: cli.threads.max(1),
    }
}

fn to_json<V: Serialize>(v: &V) -> Result<String, CliError> {
    serde_json::to_string_pretty(v)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| CliError::Input(format!("serializing output: {e}")))
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Optimize {
            scenario,
            n_max,
            t_min,
            t_max,
            steps,
            refine,
            trace,
            budget,
        } => {
            let s = load_scenario(scenario)?;
            let engine = cli
                .engine
                .map(Engine::from)
                .unwrap_or_else(|| default_engine(&s));
            let mut space = SearchSpace::new(*n_max, *t_min, *t_max, engine);
            space.coarse_steps = *steps;
            space.refine_iters = *refine;
            let cfg = mc_config(cli, budget, 100_000, 1_000);
            let (report, opt) = run_optimize(&s, &space, &cfg)?;
            let json = to_json(&report)?;
            let trace_path = trace
                .clone()
                .or_else(|| out.map(|p| p.with_extension("trace.csv")));
            if let Some(p) = &trace_path {
                emit(Some(p), &opt.trace_csv())?;
            }
            emit(out, &json)
        }
        Command::Evaluate {
            scenario,
            design,
            budget,
        } => {
            let s = load_scenario(scenario)?;
            let engine = cli
                .engine
                .map(Engine::from)
                .unwrap_or_else(|| default_engine(&s));
            let d = Design::new(design.n, design.r, design.t0)?;
            let e = run_evaluate(&s, &d, engine, &mc_config(cli, budget, 100_000, 1_000))?;
            emit(out, &to_json(&e)?)
        }
        Command::Decide { scenario, data, s2 } => {
            let s = load_scenario(scenario)?;
            let samples = parse_samples(&read(data)?, &data.display().to_string())?;
            emit(out, &to_json(&run_decide(&s, &samples, *s2, cli.seed)?)?)
        }
        Command::Simulate {
            scenario,
            design,
            count,
            s2,
        } => {
            let s = load_scenario(scenario)?;
            let d = Design::new(design.n, design.r, design.t0)?;
            emit(
                out,
                &to_json(&run_simulate(&s, &d, *count, *s2, cli.seed)?)?,
            )
        }
        Command::Rdsp {
            scenario,
            design,
            data,
            k,
            budget,
        } => {
            let s = load_scenario(scenario)?;
            let cfg = mc_config(cli, budget, 100_000, 1);
            let d = match (design.n, design.r, design.t0) {
                (Some(n), Some(r), Some(t0)) => Some(Design::new(n, r, t0)?),
                (None, None, None) => None,
                _ => return Err(CliError::Input("give all of --n, --r and --t0".into())),
            };
            let samples = match data {
                Some(p) => Some(parse_samples(&read(p)?, &p.display().to_string())?),
                None => None,
            };
            let report = run_rdsp(&s, d.as_ref(), samples.as_deref(), *k, &cfg)?;
            if let commands::RdspReport::Plan(e) = &report {
                if e.undefined_replicates > 0 {
                    eprintln!(
                        "warning: in {} replicates no random consumer reached the test; their post-test weights were set to (0, 0, 1)",
                        e.undefined_replicates
                    );
                }
            }
            emit(out, &to_json(&report)?)
        }
        Command::Reproduce {
            table,
            search,
            n_max,
            budget,
        } => {
            let (s1, s2) = if table == "app" {
                (20_000, 1_000)
            } else {
                (20_000, 1)
            };
            let opts = ReproduceOptions {
                cfg: mc_config(cli, budget, s1, s2),
                search: *search,
                n_max: *n_max,
            };
            emit(out, &reproduce(table, &opts)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rasp: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
