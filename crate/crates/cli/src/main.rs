//! `mmc` — concentration quantities and inequality checks for finite metric
//! measure spaces.
//!
//! Exit codes: 0 ok, 1 check/validation failure, 2 IO/usage.

mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mmc_core::space::{generate, SpaceKind, DEFAULT_MAX_POINTS};
use mmc_core::verify::{all_pass, verify_all, VerifyParams};
use mmc_core::{io, Error};

use config::{CommonFlags, RunConfig};

#[derive(Parser)]
#[command(name = "mmc", version, about = "Concentration of measure on finite metric measure spaces", long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a space document; exit 0 iff it is a metric measure space
    Validate {
        /// Path to a JSON space document
        path: PathBuf,
    },
    /// Generate a canonical space and write its JSON document
    Generate {
        /// One of: cycle:N | hypercube:D | path:N | sphere:DIM,RADIUS,COUNT | random:N
        #[arg(long)]
        kind: String,
        /// Output path (stdout when omitted)
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Maximum generated point count
        #[arg(long, default_value_t = DEFAULT_MAX_POINTS)]
        max_points: usize,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Compute the quantity report for one space
    Report {
        path: PathBuf,
        /// Graph rule for the spectral gap: unit | threshold:T | knn:K
        #[arg(long)]
        graph: Option<String>,
        /// Also write the observable-diameter witness as a companion
        /// document {"f": [...], "lip": ...}
        #[arg(long)]
        witness_out: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Run the full inequality check suite; exit 0 iff nothing failed
    Check {
        path: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Test hook: corrupt the concentration values to force a failure
        #[arg(long, hide = true)]
        inject_fault: bool,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Run the check suite over a batch of seeded random spaces
    Sweep {
        /// Number of spaces
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 4)]
        n_min: usize,
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        flags: CommonFlags,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            let payload = serde_json::json!({
                "kind": err.kind(),
                "message": err.to_string(),
            });
            eprintln!("{payload}");
            match err {
                Error::Io(_) | Error::Parse(_) | Error::InvalidParameter(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn run(cli: Cli) -> mmc_core::Result<ExitCode> {
    match cli.command {
        Command::Validate { path } => {
            io::load_space(&path)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Generate { kind, output, max_points, flags } => {
            let config = RunConfig::resolve(&flags)?;
            init_threads(config.threads);
            let kind = parse_kind(&kind, config.seed)?;
            let space = generate::<f64>(&kind, max_points)?;
            emit(output.as_deref(), io::write_space(&space, None))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Report { path, graph, witness_out, output, flags } => {
            let config = RunConfig::resolve(&flags)?;
            init_threads(config.threads);
            let (space, _) = io::load_space(&path)?;
            let graph = graph.as_deref().map(report::parse_graph_rule).transpose()?;
            let text = report::build(&space, &config, graph)?;
            if let Some(witness_path) = witness_out {
                let (_, witness) = mmc_core::lipschitz::obsdiam_lower(
                    &space,
                    config.kappa,
                    config.budget,
                    config.seed,
                )?;
                std::fs::write(witness_path, io::write_witness(&witness))?;
            }
            emit(output.as_deref(), text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Check { path, output, inject_fault, flags } => {
            let config = RunConfig::resolve(&flags)?;
            init_threads(config.threads);
            let (space, _) = io::load_space(&path)?;
            let params = verify_params(&config, inject_fault);
            let reports = verify_all(&space, &params)?;
            let ok = all_pass(&reports);
            for r in &reports {
                let status = match r.pass {
                    Some(true) => "PASS",
                    Some(false) => "FAIL",
                    None => "SKIP",
                };
                eprintln!("{status} {}", r.name);
            }
            emit(
                output.as_deref(),
                serde_json::to_string_pretty(&reports)
                    .map_err(|e| Error::Parse(e.to_string()))?,
            )?;
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Sweep { count, n_min, n_max, output, flags } => {
            let config = RunConfig::resolve(&flags)?;
            init_threads(config.threads);
            if n_min < 1 || n_max < n_min {
                return Err(Error::InvalidParameter("need 1 <= n_min <= n_max".into()));
            }
            let params = verify_params(&config, false);
            let mut failures = Vec::new();
            let mut checked = 0usize;
            let mut skipped = 0usize;
            for index in 0..count {
                let n = n_min + index % (n_max - n_min + 1);
                let seed = config.seed.wrapping_add(index as u64);
                let space = mmc_core::space::random_space(n, seed)?;
                let reports = verify_all(&space, &params)?;
                for r in &reports {
                    match r.pass {
                        Some(true) => checked += 1,
                        None => skipped += 1,
                        Some(false) => failures.push(serde_json::json!({
                            "index": index,
                            "n": n,
                            "seed": seed,
                            "name": r.name,
                            "lhs": r.lhs,
                            "rhs": r.rhs,
                        })),
                    }
                }
            }
            let ok = failures.is_empty();
            let summary = serde_json::json!({
                "count": count,
                "checks_passed": checked,
                "checks_skipped": skipped,
                "failures": failures,
            });
            emit(
                output.as_deref(),
                serde_json::to_string_pretty(&summary).map_err(|e| Error::Parse(e.to_string()))?,
            )?;
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn verify_params(config: &RunConfig, inject_fault: bool) -> VerifyParams {
    VerifyParams {
        epsilon: config.epsilon,
        kappa: config.kappa,
        rho_grid: config.rho_grid.clone(),
        lambda_grid: config.lambda_grid.clone(),
        exact_limit: config.exact_limit,
        budget: config.budget,
        seed: config.seed,
        tau: config.tau,
        inject_alpha_corruption: inject_fault,
    }
}

fn init_threads(threads: usize) {
    if threads > 0 {
        // Ignore failure: the global pool can only be initialized once.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
}

fn parse_kind(spec: &str, seed: u64) -> mmc_core::Result<SpaceKind> {
    let (name, args) = spec.split_once(':').unwrap_or((spec, ""));
    let parse_n = |raw: &str| -> mmc_core::Result<usize> {
        raw.parse().map_err(|_| Error::InvalidParameter(format!("bad size in kind: {spec}")))
    };
    match name {
        "cycle" => Ok(SpaceKind::Cycle { n: parse_n(args)? }),
        "hypercube" => Ok(SpaceKind::Hypercube { dim: parse_n(args)? }),
        "path" => Ok(SpaceKind::Path { n: parse_n(args)? }),
        "random" => Ok(SpaceKind::RandomMetric { n: parse_n(args)?, seed }),
        "sphere" => {
            let parts: Vec<&str> = args.split(',').collect();
            if parts.len() != 3 {
                return Err(Error::InvalidParameter(
                    "sphere kind takes DIM,RADIUS,COUNT".into(),
                ));
            }
            let radius: f64 = parts[1].trim().parse().map_err(|_| {
                Error::InvalidParameter(format!("bad radius in kind: {spec}"))
            })?;
            Ok(SpaceKind::SampledSphere {
                dim: parse_n(parts[0].trim())?,
                radius,
                count: parse_n(parts[2].trim())?,
                seed,
            })
        }
        other => Err(Error::InvalidParameter(format!("unknown space kind: {other}"))),
    }
}

fn emit(path: Option<&std::path::Path>, text: String) -> mmc_core::Result<()> {
    match path {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}
