//! The `report` command: one JSON (or CSV) document with every quantity the
//! library computes for a space.
//!
//! Exact fields degrade gracefully: past the exact limit they are replaced
//! by `{"skipped": "TooLargeForExact"}` instead of failing the whole report.

use mmc_core::concentration::{alpha_profile, fit_profile, FitKind};
use mmc_core::enlargement::doubling_constant;
use mmc_core::expansion::{
    discrete_poincare_diagnostic, exp_gromov, exp_ledoux, ExpansionValue,
};
use mmc_core::lipschitz::{
    laplace_lower, laplace_oracle, obsdiam_oracle, obsdiam_sandwich, ORACLE_LIMIT,
};
use mmc_core::spectral::{lambda1_graph, AdjacencyRule};
use mmc_core::verify::default_rho_grid;
use mmc_core::{io, Error, Result, Space};
use serde_json::{json, Value};

use crate::config::RunConfig;

pub fn parse_graph_rule(spec: &str) -> Result<AdjacencyRule<f64>> {
    let (name, args) = spec.split_once(':').unwrap_or((spec, ""));
    match name {
        "unit" => Ok(AdjacencyRule::UnitDistance),
        "threshold" => args
            .parse()
            .map(AdjacencyRule::Threshold)
            .map_err(|_| Error::InvalidParameter(format!("bad threshold: {spec}"))),
        "knn" => args
            .parse()
            .map(AdjacencyRule::Knn)
            .map_err(|_| Error::InvalidParameter(format!("bad k: {spec}"))),
        other => Err(Error::InvalidParameter(format!("unknown graph rule: {other}"))),
    }
}

fn skipped(err: &Error) -> Value {
    json!({ "skipped": err.kind(), "detail": err.to_string() })
}

pub fn build(space: &Space, config: &RunConfig, graph: Option<AdjacencyRule<f64>>) -> Result<String> {
    let eps = config.epsilon;
    let kappa = config.kappa;
    let limit = config.exact_limit;
    let diam = space.diameter();
    let rho_grid = config.rho_grid.clone().unwrap_or_else(|| default_rho_grid(space));

    // α profile over the breakpoint grid.
    let mut radii = vec![0.0];
    radii.extend(space.distance_values());
    let profile = alpha_profile(space, eps, &radii, limit);

    if config.format == "csv" {
        return match &profile {
            Ok(profile) => Ok(io::profile_csv(profile)),
            Err(err) => Err(Error::TooLargeForExact {
                n: space.n(),
                limit: match err {
                    Error::TooLargeForExact { limit, .. } => *limit,
                    _ => limit,
                },
            }),
        };
    }

    let alpha_json = match &profile {
        Ok(profile) => {
            let mut fits = serde_json::Map::new();
            for (kind, name) in
                [(FitKind::Exponential, "exponential"), (FitKind::Gaussian, "gaussian")]
            {
                match fit_profile(profile, kind) {
                    Ok(fit) => {
                        fits.insert(
                            name.into(),
                            json!({"c1": fit.c1, "c2": fit.c2, "residual": fit.residual}),
                        );
                    }
                    Err(err) => {
                        fits.insert(name.into(), skipped(&err));
                    }
                }
            }
            json!({
                "epsilon": eps,
                "radii": profile.radii,
                "values": profile.values,
                "witness_hex": profile.witnesses.iter().map(|w| w.to_hex()).collect::<Vec<_>>(),
                "fits": fits,
            })
        }
        Err(err) => skipped(err),
    };

    let expansion_json: Value = {
        let mut rows = Vec::new();
        for &rho in &rho_grid {
            let gromov = match exp_gromov(space, eps, rho, limit) {
                Ok(result) => json!(result.value.finite()),
                Err(err) => skipped(&err),
            };
            let ledoux = match exp_ledoux(space, 1.0 - eps, rho, limit) {
                Ok(result) => match result.value {
                    ExpansionValue::Finite(v) => json!(v),
                    ExpansionValue::Unbounded => json!("unbounded"),
                },
                Err(err) => skipped(&err),
            };
            rows.push(json!({"rho": rho, "exp_gromov": gromov, "exp_ledoux_complement": ledoux}));
        }
        json!(rows)
    };

    let doubling = doubling_constant(space);
    let doubling_json = json!({
        "constant": doubling.constant,
        "witness": doubling.witness.map(|(x, r)| json!({"point": x, "radius": r})),
        "characterization_ok": doubling.characterization_ok,
    });

    let obsdiam_json = match obsdiam_sandwich(
        space,
        kappa,
        eps.min(1.0 - eps).clamp(f64::MIN_POSITIVE, 0.5),
        config.budget,
        config.seed,
        limit,
    ) {
        Ok(est) => {
            let oracle = if space.n() <= ORACLE_LIMIT {
                match obsdiam_oracle(space, kappa, config.oracle_step) {
                    Ok(value) => json!(value),
                    Err(err) => skipped(&err),
                }
            } else {
                Value::Null
            };
            json!({
                "kappa": kappa,
                "lower": est.lower,
                "upper": est.upper,
                "method": est.method,
                "witness": est.witness.values(),
                "witness_lip": est.witness.lip(),
                "oracle": oracle,
            })
        }
        Err(err) => {
            // The duality upper bound needs the exact α; keep the witness
            // lower bound available regardless.
            match mmc_core::lipschitz::obsdiam_lower(space, kappa, config.budget, config.seed) {
                Ok((lower, witness)) => json!({
                    "kappa": kappa,
                    "lower": lower,
                    "upper": skipped(&err),
                    "witness": witness.values(),
                    "witness_lip": witness.lip(),
                }),
                Err(err) => skipped(&err),
            }
        }
    };

    let laplace_json: Value = {
        let mut rows = Vec::new();
        for &lambda in &config.lambda_grid {
            match laplace_lower(space, lambda, config.budget, config.seed) {
                Ok(est) => {
                    let oracle = if space.n() <= ORACLE_LIMIT {
                        match laplace_oracle(space, lambda, config.oracle_step) {
                            Ok(value) => json!(value),
                            Err(err) => skipped(&err),
                        }
                    } else {
                        Value::Null
                    };
                    rows.push(json!({
                        "lambda": lambda,
                        "lower": est.lower,
                        "witness_mean": est.witness.mean(space),
                        "oracle": oracle,
                    }));
                }
                Err(err) => rows.push(skipped(&err)),
            }
        }
        json!(rows)
    };

    // Spectral section plus two diagnostics that are reported, never
    // asserted: the nearest-neighbour Poincaré battery at C = 1/λ₁, and the
    // ratio Exp_Ledoux(1−ε, ρ) / (1 + λ₁ερ²), whose continuum counterpart
    // is a theorem but whose discrete analog is only indicative.
    let lambda1_json = match graph {
        None => Value::Null,
        Some(rule) => match lambda1_graph(space, rule) {
            Ok(result) => {
                let poincare = discrete_poincare_diagnostic(
                    space,
                    1.0 / result.lambda1,
                    config.seed,
                )
                .map(|report| {
                    json!({
                        "constant": report.constant,
                        "all_hold": report.all_hold,
                        "battery": report.rows.len(),
                    })
                })
                .unwrap_or(Value::Null);
                let mut spectral_ratios = Vec::new();
                for &rho in &rho_grid {
                    if let Ok(result_l) = exp_ledoux(space, 1.0 - eps, rho, limit) {
                        if let ExpansionValue::Finite(value) = result_l.value {
                            let reference = 1.0 + result.lambda1 * eps * rho * rho;
                            spectral_ratios.push(json!({
                                "rho": rho,
                                "exp_ledoux_over_spectral": value / reference,
                            }));
                        }
                    }
                }
                json!({
                    "lambda1": result.lambda1,
                    "method": result.method,
                    "eigenvector": result.eigenvector,
                    "poincare_diagnostic": poincare,
                    "spectral_ratio_diagnostic": spectral_ratios,
                })
            }
            Err(err) => skipped(&err),
        },
    };

    let document = json!({
        "space": { "n": space.n(), "diameter": diam },
        "doubling": doubling_json,
        "alpha_profile": alpha_json,
        "expansion": expansion_json,
        "obsdiam": obsdiam_json,
        "laplace": laplace_json,
        "lambda1": lambda1_json,
    });
    serde_json::to_string_pretty(&document)
        .map(|mut text| {
            text.push('\n');
            text
        })
        .map_err(|e| Error::Parse(e.to_string()))
}
