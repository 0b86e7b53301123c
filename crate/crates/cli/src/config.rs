//! Flag resolution: command-line flags win over the optional `key=value`
//! config file, which wins over the built-in defaults.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use clap::Args;
use mmc_core::{bounds, lipschitz, Error, Result};

/// Shared tuning flags. Every field is optional here; [`RunConfig`] holds
/// the resolved values.
#[derive(Args, Debug, Clone, Default)]
pub struct CommonFlags {
    /// Mass threshold ε in (0,1)
    #[arg(long)]
    pub epsilon: Option<f64>,

    /// Visibility threshold κ in (0,1)
    #[arg(long)]
    pub kappa: Option<f64>,

    /// Enlargement steps ρ (comma separated; default: pairwise distances up
    /// to diam/2)
    #[arg(long, value_delimiter = ',')]
    pub rho: Option<Vec<f64>>,

    /// Laplace parameters λ (comma separated)
    #[arg(long, value_delimiter = ',')]
    pub lambda: Option<Vec<f64>>,

    /// Seed for every randomized procedure
    #[arg(long)]
    pub seed: Option<u64>,

    /// Point limit for exact subset searches (max 26)
    #[arg(long)]
    pub exact_limit: Option<usize>,

    /// Lattice step h for the small-space oracles
    #[arg(long)]
    pub oracle_step: Option<f64>,

    /// Coordinate-ascent restarts in the estimators
    #[arg(long)]
    pub budget: Option<usize>,

    /// Worker threads (0 = logical cores)
    #[arg(long)]
    pub threads: Option<usize>,

    /// Output format for reports
    #[arg(long, value_parser = ["json", "csv"])]
    pub format: Option<String>,

    /// Advanced: τ parameter of the diameter upper bound (only 1/3 is
    /// asserted)
    #[arg(long)]
    pub tau: Option<f64>,

    /// Optional key=value config file; flags win over the file
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Resolved run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub epsilon: f64,
    pub kappa: f64,
    pub rho_grid: Option<Vec<f64>>,
    pub lambda_grid: Vec<f64>,
    pub seed: u64,
    pub exact_limit: usize,
    pub oracle_step: f64,
    pub budget: usize,
    pub threads: usize,
    pub format: String,
    pub tau: f64,
}

impl RunConfig {
    pub fn resolve(flags: &CommonFlags) -> Result<Self> {
        let file = match &flags.config {
            Some(path) => parse_config_file(path)?,
            None => HashMap::new(),
        };
        let lookup = |key: &str| file.get(key).cloned();
        let scalar = |key: &str| -> Result<Option<f64>> {
            lookup(key)
                .map(|raw| {
                    raw.parse::<f64>()
                        .map_err(|_| Error::Parse(format!("config key {key}: bad number {raw}")))
                })
                .transpose()
        };

        let config = RunConfig {
            epsilon: flags.epsilon.or(scalar("epsilon")?).unwrap_or(0.5),
            kappa: flags.kappa.or(scalar("kappa")?).unwrap_or(0.1),
            rho_grid: flags.rho.clone().or_else(|| {
                lookup("rho").map(|raw| {
                    raw.split(',').filter_map(|v| v.trim().parse::<f64>().ok()).collect()
                })
            }),
            lambda_grid: flags
                .lambda
                .clone()
                .or_else(|| {
                    lookup("lambda").map(|raw| {
                        raw.split(',').filter_map(|v| v.trim().parse::<f64>().ok()).collect()
                    })
                })
                .unwrap_or_else(|| vec![0.5, 1.0, 2.0]),
            seed: flags
                .seed
                .or(lookup("seed").and_then(|raw| raw.parse().ok()))
                .unwrap_or(0),
            exact_limit: flags
                .exact_limit
                .or(lookup("exact_limit").and_then(|raw| raw.parse().ok()))
                .unwrap_or(mmc_core::DEFAULT_EXACT_LIMIT),
            oracle_step: flags.oracle_step.or(scalar("oracle_step")?).unwrap_or(0.05),
            budget: flags
                .budget
                .or(lookup("budget").and_then(|raw| raw.parse().ok()))
                .unwrap_or(lipschitz::DEFAULT_ASCENT_BUDGET),
            threads: flags
                .threads
                .or(lookup("threads").and_then(|raw| raw.parse().ok()))
                .unwrap_or(0),
            format: flags
                .format
                .clone()
                .or(lookup("format"))
                .unwrap_or_else(|| "json".into()),
            tau: flags.tau.or(scalar("tau")?).unwrap_or(bounds::DEFAULT_TAU),
        };

        if config.epsilon <= 0.0 || config.epsilon >= 1.0 {
            return Err(Error::InvalidParameter("epsilon must lie in (0,1)".into()));
        }
        if config.kappa <= 0.0 || config.kappa >= 1.0 {
            return Err(Error::InvalidParameter("kappa must lie in (0,1)".into()));
        }
        if config.exact_limit > mmc_core::MAX_EXACT_LIMIT {
            return Err(Error::InvalidParameter(format!(
                "exact limit {} exceeds the hard cap {}",
                config.exact_limit,
                mmc_core::MAX_EXACT_LIMIT
            )));
        }
        if config.oracle_step <= 0.0 {
            return Err(Error::InvalidParameter("oracle step must be positive".into()));
        }
        if config.format != "json" && config.format != "csv" {
            return Err(Error::InvalidParameter(format!("unknown format {}", config.format)));
        }
        Ok(config)
    }
}

fn parse_config_file(path: &Path) -> Result<HashMap<String, String>> {
    let text = std::fs::read_to_string(path)?;
    let mut map = HashMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Parse(format!(
                "{}:{}: expected key=value",
                path.display(),
                lineno + 1
            )));
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}
