use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use contract_forge::{parse_expr, ContractError, Direction, PolyhedralContract};
use contract_forge_labs::aircraft::{
    explore_grid, optimize as optimize_tolerances, two_level_policy, write_explore_outputs,
    write_optimize_output, AircraftError, ExploreConfig, HxKind, OptimizeConfig,
};
use contract_forge_labs::mission::{run_sweep, write_outputs, MissionError, SweepConfig};
use contract_forge_service::{serve, ServerConfig};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "contract-forge",
    version,
    about = "Polyhedral assume-guarantee contracts"
)]
struct Cli {
    /// Numeric tolerance for implication and feasibility checks.
    #[arg(long, global = true, env = "CONTRACT_FORGE_TOL")]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Series composition of two contracts.
    Compose {
        a: PathBuf,
        b: PathBuf,
        /// Connected variables to keep as outputs.
        #[arg(long, value_delimiter = ',')]
        keep: Vec<String>,
        #[command(flatten)]
        out: OutArg,
    },
    /// The missing component that, composed after PART, refines TOP.
    Quotient {
        top: PathBuf,
        part: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Conjunction of two viewpoints.
    Merge {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Whether A refines B.
    Refines {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Range of variables over the contract's behaviour.
    Bounds {
        contract: PathBuf,
        #[arg(long = "var", required = true)]
        vars: Vec<String>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Extremum of a linear expression over the contract's behaviour.
    Optimize {
        contract: PathBuf,
        #[arg(long)]
        expr: String,
        #[arg(long, conflicts_with = "min", required_unless_present = "min")]
        max: bool,
        #[arg(long)]
        min: bool,
        #[command(flatten)]
        out: OutArg,
    },
    /// Spacecraft task scheduling studies.
    #[command(subcommand)]
    Mission(MissionCommand),
    /// Aircraft thermal management studies.
    #[command(subcommand)]
    Aircraft(AircraftCommand),
    /// Runs the JSON-over-HTTP service.
    Serve {
        #[arg(long, env = "PORT", default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        #[arg(long, default_value = "*")]
        allow_origin: String,
    },
}

#[derive(Subcommand)]
enum MissionCommand {
    /// Checks sampled scenarios against sampled requirement sets.
    Sweep {
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Subcommand)]
enum AircraftCommand {
    /// Evaluates every design instance of a grid.
    Explore {
        config: Option<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Searches for the loosest component tolerances.
    Optimize {
        config: Option<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args)]
struct OutArg {
    /// Also write the result as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value = "out")]
    output_dir: PathBuf,
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    jobs: Option<usize>,
}

enum Failure {
    Usage(String),
    Incompatible(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Incompatible(_) => 2,
        }
    }
}

impl From<ContractError> for Failure {
    fn from(e: ContractError) -> Self {
        match e {
            ContractError::Incompatible(d) => Failure::Incompatible(d.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<MissionError> for Failure {
    fn from(e: MissionError) -> Self {
        match e {
            MissionError::Contract(c) => c.into(),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<AircraftError> for Failure {
    fn from(e: AircraftError) -> Self {
        match e {
            AircraftError::Contract(c) => c.into(),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<PolyhedralContract, Failure> {
    PolyhedralContract::from_json_str(&read(path)?)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_config<T: serde::de::DeserializeOwned + Default>(
    path: Option<&Path>,
) -> Result<T, Failure> {
    match path {
        None => Ok(T::default()),
        Some(p) => serde_json::from_str(&read(p)?)
            .map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
    }
}

fn write_json(out: &OutArg, value: &serde_json::Value) -> Result<(), Failure> {
    if let Some(path) = &out.out {
        let text =
            serde_json::to_string_pretty(value).map_err(|e| Failure::Usage(e.to_string()))?;
        fs::write(path, text + "\n")
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn emit_contract(c: &PolyhedralContract, out: &OutArg) -> Result<(), Failure> {
    println!("{c}");
    write_json(out, &json!(c.to_json()))
}

fn bound_text(x: f64) -> String {
    contract_forge::parser::format_number(x, contract_forge::parser::Precision::Display)
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(tol) = cli.tol {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Failure::Usage(format!(
                "tolerance must be positive, got {tol}"
            )));
        }
        contract_forge::tolerance::set_tolerance(tol);
    }
    match cli.command {
        Command::Compose { a, b, keep, out } => {
            let keep: BTreeSet<String> = keep.into_iter().collect();
            emit_contract(&load(&a)?.compose_keeping(&load(&b)?, &keep)?, &out)
        }
        Command::Quotient { top, part, out } => {
            emit_contract(&load(&top)?.quotient(&load(&part)?)?, &out)
        }
        Command::Merge { a, b, out } => {
            let m = load(&a)?.merge(&load(&b)?)?;
            emit_contract(&m, &out)?;
            if !m.is_compatible() {
                println!("assumptions are unsatisfiable: the viewpoints are incompatible");
            }
            Ok(())
        }
        Command::Refines { a, b, out } => {
            let report = load(&a)?.refines(&load(&b)?)?;
            println!("refines: {}", report.refines);
            for line in report.violated_lines() {
                println!("    violated: {line}");
            }
            write_json(&out, &json!(report.to_json()))
        }
        Command::Bounds {
            contract,
            vars,
            out,
        } => {
            let c = load(&contract)?;
            let mut result = serde_json::Map::new();
            for v in vars {
                if !c.has_var(&v) {
                    return Err(Failure::Usage(format!("unknown variable {v}")));
                }
                let (lo, hi) = c.get_variable_bounds(&v)?;
                println!("{v}: [{}, {}]", bound_text(lo), bound_text(hi));
                let finite = |x: f64| if x.is_finite() { json!(x) } else { json!(null) };
                result.insert(v, json!({ "lower": finite(lo), "upper": finite(hi) }));
            }
            write_json(&out, &serde_json::Value::Object(result))
        }
        Command::Optimize {
            contract,
            expr,
            max,
            min: _,
            out,
        } => {
            let c = load(&contract)?;
            let e = parse_expr(&expr).map_err(|e| Failure::Usage(e.to_string()))?;
            let direction = if max { Direction::Max } else { Direction::Min };
            let value = c.optimize(&e, direction)?.value();
            match value {
                Some(v) => println!("{}", bound_text(v)),
                None => println!("unbounded"),
            }
            write_json(
                &out,
                &json!({ "value": value, "unbounded": value.is_none() }),
            )
        }
        Command::Mission(MissionCommand::Sweep { config, seed, run }) => {
            let mut cfg: SweepConfig = load_config(config.as_deref())?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            let report = run_sweep(&cfg, run.jobs)?;
            write_outputs(&report, &run.output_dir, cfg.svg)?;
            println!(
                "{} of {} combinations admissible ({:.1}%); results in {}",
                report.admissible_count(),
                report.rows.len(),
                100.0 * report.admissible_rate(),
                run.output_dir.display()
            );
            Ok(())
        }
        Command::Aircraft(AircraftCommand::Explore { config, run }) => {
            let cfg: ExploreConfig = load_config(config.as_deref())?;
            let results = explore_grid(&cfg, run.jobs)?;
            write_explore_outputs(&cfg, &results, &run.output_dir)?;
            for hx in &cfg.hx_kinds {
                let valid = results.iter().filter(|r| r.hx == *hx && r.valid()).count();
                let total = results.iter().filter(|r| r.hx == *hx).count();
                let policy = match two_level_policy(&results, *hx) {
                    Some((lo, hi)) => format!("mdot_in policy ({lo}, {hi}) covers every regime"),
                    None => "no two-level mdot_in policy covers every regime".into(),
                };
                println!("{hx}: {valid} of {total} instances valid; {policy}");
            }
            println!("results in {}", run.output_dir.display());
            Ok(())
        }
        Command::Aircraft(AircraftCommand::Optimize { config, run }) => {
            let cfg: OptimizeConfig = load_config(config.as_deref())?;
            let report = optimize_tolerances(&cfg)?;
            write_optimize_output(&report, &run.output_dir)?;
            let eps: Vec<String> = report
                .best
                .eps
                .to_array()
                .iter()
                .map(|e| format!("{e:.4}"))
                .collect();
            println!(
                "cost {:.4} -> {:.4} after {} iterations; eps [{}]; valid {}",
                report.start_cost,
                report.best_cost,
                report.iterations,
                eps.join(", "),
                report.best.valid()
            );
            if cfg.hx == HxKind::Fixed && !report.best.valid() {
                println!("no valid tolerance vector found for the fixed exchanger");
            }
            println!("results in {}", run.output_dir.display());
            Ok(())
        }
        Command::Serve {
            port,
            host,
            allow_origin,
        } => {
            let cfg = ServerConfig {
                host,
                port,
                allow_origin,
                ..ServerConfig::default()
            };
            serve(&cfg).map_err(|e| Failure::Usage(e.to_string()))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(m) => eprintln!("error: {m}"),
                Failure::Incompatible(m) => eprintln!("{m}"),
            }
            ExitCode::from(f.code())
        }
    }
}
