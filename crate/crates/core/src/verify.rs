//! The machine-check suite: every proved inequality evaluated on one space.
//!
//! Checks run in `f64`. Each produces a [`BoundReport`]; hypothesis-failing
//! configurations are reported as skipped (`pass = None`), never as passes.
//!
//! Estimate-direction discipline: wherever an exact quantity is replaced by
//! an estimate, the substitution is monotone in the valid direction — the
//! observable-diameter *lower* estimate enters the answer-to-Gromov bound
//! (whose right side is nondecreasing in the diameter) and the Gromov upper
//! bound (nonincreasing), and the Laplace *lower* estimate enters the
//! diameter lower bound through the increasing `ln`. A check that would
//! need the other direction is not run against estimates at all.

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds;
use crate::concentration::{alpha_profile, check_concentration_inequality};
use crate::enlargement::{ball_mass, doubling_constant};
use crate::error::{Error, Result};
use crate::expansion::{
    exp_gromov, exp_ledoux, gromov_monotonicity_check, iterated_ledoux_check,
    ledoux_doubling_bound_check, ExpansionValue,
};
use crate::lipschitz::{obsdiam_lower, obsdiam_upper, shrink_to_lipschitz, LipschitzFunction};
use crate::tol::CHECK_SLACK;
use crate::Space;

/// Direction of the asserted comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// `lhs ≤ rhs` (up to [`CHECK_SLACK`]).
    Le,
    /// `lhs ≥ rhs`.
    Ge,
}

/// One checked inequality.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub relation: Relation,
    pub hypotheses_met: bool,
    pub reasons: Vec<String>,
    /// `Some(lhs relation rhs)` when the hypotheses hold, `None` (skipped)
    /// otherwise.
    pub pass: Option<bool>,
    pub inputs: serde_json::Map<String, serde_json::Value>,
}

impl BoundReport {
    fn checked(name: &str, lhs: f64, rhs: f64, relation: Relation) -> Self {
        let pass = match relation {
            Relation::Le => lhs <= rhs + CHECK_SLACK,
            Relation::Ge => lhs >= rhs - CHECK_SLACK,
        };
        BoundReport {
            name: name.into(),
            lhs,
            rhs,
            relation,
            hypotheses_met: true,
            reasons: Vec::new(),
            pass: Some(pass),
            inputs: serde_json::Map::new(),
        }
    }

    fn skipped(name: &str, relation: Relation, reason: String) -> Self {
        BoundReport {
            name: name.into(),
            lhs: f64::NAN,
            rhs: f64::NAN,
            relation,
            hypotheses_met: false,
            reasons: vec![reason],
            pass: None,
            inputs: serde_json::Map::new(),
        }
    }

    fn with_inputs(mut self, pairs: &[(&str, f64)]) -> Self {
        for (key, value) in pairs {
            self.inputs.insert((*key).into(), serde_json::json!(value));
        }
        self
    }

    /// A report counts as failed only when its hypotheses held and the
    /// comparison came out false.
    pub fn failed(&self) -> bool {
        self.pass == Some(false)
    }
}

/// Parameters of the check suite.
#[derive(Clone, Debug)]
pub struct VerifyParams {
    pub epsilon: f64,
    pub kappa: f64,
    /// `None` selects the distinct pairwise distances up to `diam/2`.
    pub rho_grid: Option<Vec<f64>>,
    pub lambda_grid: Vec<f64>,
    pub exact_limit: usize,
    pub budget: usize,
    pub seed: u64,
    /// The diameter upper bound is only asserted at `τ = 1/3`.
    pub tau: f64,
    /// Test hook: corrupt the exact concentration values so the checker's
    /// failure path is exercised end to end.
    pub inject_alpha_corruption: bool,
}

impl Default for VerifyParams {
    fn default() -> Self {
        VerifyParams {
            epsilon: 0.5,
            kappa: 0.1,
            rho_grid: None,
            lambda_grid: vec![0.5, 1.0, 2.0],
            exact_limit: crate::DEFAULT_EXACT_LIMIT,
            budget: crate::lipschitz::DEFAULT_ASCENT_BUDGET,
            seed: 0,
            tau: bounds::DEFAULT_TAU,
            inject_alpha_corruption: false,
        }
    }
}

/// Default ρ grid: the distinct pairwise distances up to half the diameter
/// (the breakpoints of every coefficient), with `diam/2` as a fallback.
pub fn default_rho_grid(space: &Space) -> Vec<f64> {
    let diam = space.diameter();
    let mut grid: Vec<f64> =
        space.distance_values().into_iter().filter(|d| *d <= diam / 2.0).collect();
    if grid.is_empty() && diam > 0.0 {
        grid.push(diam / 2.0);
    }
    grid
}

/// Runs every checker on one space. Reports come back in a fixed order;
/// hypothesis failures are skips.
pub fn verify_all(space: &Space, params: &VerifyParams) -> Result<Vec<BoundReport>> {
    if params.epsilon <= 0.0 || params.epsilon >= 1.0 {
        return Err(Error::InvalidParameter("epsilon must lie in (0,1)".into()));
    }
    if params.kappa <= 0.0 || params.kappa >= 1.0 {
        return Err(Error::InvalidParameter("kappa must lie in (0,1)".into()));
    }
    let eps = params.epsilon;
    let kappa = params.kappa;
    let limit = params.exact_limit;
    let diam = space.diameter();
    let rho_grid = params.rho_grid.clone().unwrap_or_else(|| default_rho_grid(space));

    let mut reports = Vec::new();

    // Concentration inequalities (quantile form, both variants).
    reports.push(concentration_check(space, params));

    // α-swap property.
    reports.push(alpha_swap_report(space, eps, diam, limit));

    // Observable-diameter duality.
    let eps_upper = eps.min(1.0 - eps).clamp(f64::MIN_POSITIVE, 0.5);
    let lower = obsdiam_lower(space, kappa, params.budget, params.seed)?;
    let duality = match obsdiam_upper(space, kappa, eps_upper, limit) {
        Ok(upper) => BoundReport::checked("obsdiam-duality", lower.0, upper, Relation::Le)
            .with_inputs(&[("kappa", kappa), ("epsilon", eps_upper)]),
        Err(err) => BoundReport::skipped("obsdiam-duality", Relation::Le, err.to_string()),
    };
    reports.push(duality);

    // Per-ρ block: the two exponential-concentration theorems, the
    // answer-to-Gromov pair, and the observable-diameter corollary.
    let per_rho: Vec<Vec<BoundReport>> = rho_grid
        .par_iter()
        .map(|&rho| rho_block(space, params, rho, diam, lower.0))
        .collect();
    for block in per_rho {
        reports.extend(block);
    }

    // Diameter bounds.
    reports.extend(diameter_reports(space, params, &rho_grid, diam));

    // Doubling checks.
    reports.extend(doubling_reports(space, eps, &rho_grid, limit));

    // Remaining expansion-module checks: iterated growth at the first
    // active ρ, and Lipschitz monotonicity of Gromov's coefficient under a
    // canonical observable.
    reports.push(iterated_report(space, params, &rho_grid, diam));
    reports.push(monotonicity_report(space, params, &rho_grid));

    Ok(reports)
}

fn iterated_report(
    space: &Space,
    params: &VerifyParams,
    rho_grid: &[f64],
    diam: f64,
) -> BoundReport {
    let name = "iterated-ledoux-growth";
    for &rho in rho_grid {
        let kmax = ((diam / rho).floor() as u32).clamp(1, 3);
        match iterated_ledoux_check(space, params.epsilon, rho, kmax, params.exact_limit) {
            Ok(result) => {
                let mut report = BoundReport::checked(
                    name,
                    -result.worst_slack,
                    0.0,
                    Relation::Le,
                )
                .with_inputs(&[
                    ("epsilon", params.epsilon),
                    ("rho", rho),
                    ("kmax", kmax as f64),
                    ("exp_ledoux", result.value),
                ]);
                report.pass = Some(result.pass);
                return report;
            }
            Err(Error::HypothesisViolated(_)) => continue,
            Err(err) => return BoundReport::skipped(name, Relation::Le, err.to_string()),
        }
    }
    BoundReport::skipped(
        name,
        Relation::Le,
        "no rho in the grid has a finite Ledoux coefficient".into(),
    )
}

fn monotonicity_report(space: &Space, params: &VerifyParams, rho_grid: &[f64]) -> BoundReport {
    let name = "gromov-lipschitz-monotonicity";
    if space.n() < 2 {
        return BoundReport::skipped(name, Relation::Le, "single point".into());
    }
    let Some(&rho) = rho_grid.first() else {
        return BoundReport::skipped(name, Relation::Le, "empty rho grid".into());
    };
    let observable = LipschitzFunction::new(space, space.dist_row(0).to_vec())
        .expect("distance rows are finite");
    match gromov_monotonicity_check(space, &observable, params.epsilon, rho, params.exact_limit)
    {
        Ok(holds) => {
            let mut report = BoundReport::checked(name, 0.0, 0.0, Relation::Le)
                .with_inputs(&[("epsilon", params.epsilon), ("rho", rho)]);
            report.pass = Some(holds);
            report
        }
        Err(err) => BoundReport::skipped(name, Relation::Le, err.to_string()),
    }
}

/// `true` iff no non-skipped check failed.
pub fn all_pass(reports: &[BoundReport]) -> bool {
    reports.iter().all(|r| !r.failed())
}

fn concentration_check(space: &Space, params: &VerifyParams) -> BoundReport {
    use rand::{Rng, SeedableRng};
    let n = space.n();
    let eps = params.epsilon;
    let mut battery: Vec<LipschitzFunction<f64>> = (0..n.min(6))
        .map(|x| LipschitzFunction::new(space, space.dist_row(x).to_vec()).expect("finite rows"))
        .collect();
    let diam = space.diameter().max(f64::MIN_POSITIVE);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(params.seed ^ 0xc0ffee);
    for _ in 0..2 {
        let values: Vec<f64> = (0..n).map(|_| rng.random_range(-diam..diam)).collect();
        let raw = LipschitzFunction::new(space, values).expect("finite draws");
        battery.push(shrink_to_lipschitz(space, &raw, 1.0));
    }

    let mut worst_slack = f64::INFINITY;
    let mut worst = (0.0f64, 0.0f64);
    for f in &battery {
        // Breakpoints of both sides: the deviations |f − m_f| (left) and
        // the scaled pairwise distances (right).
        let mut radii: Vec<f64> = space.distance_values().iter().map(|d| d * f.lip()).collect();
        if let Ok(m) = crate::concentration::quantile(space, f, eps) {
            radii.extend(f.values().iter().map(|v| (v - m).abs()));
        }
        radii.push(0.0);
        match check_concentration_inequality(space, f, eps, &radii, params.exact_limit) {
            Ok(check) => {
                if check.worst_slack < worst_slack {
                    worst_slack = check.worst_slack;
                    let row = check
                        .rows
                        .iter()
                        .min_by(|a, b| {
                            let sa = a.rhs_sum - a.lhs;
                            let sb = b.rhs_sum - b.lhs;
                            sa.partial_cmp(&sb).expect("finite slack")
                        })
                        .expect("at least one radius");
                    worst = (row.lhs, row.rhs_sum);
                }
            }
            Err(err) => {
                return BoundReport::skipped(
                    "concentration-inequality",
                    Relation::Le,
                    err.to_string(),
                )
            }
        }
    }
    let mut report = BoundReport::checked("concentration-inequality", worst.0, worst.1, Relation::Le)
        .with_inputs(&[("epsilon", eps), ("battery", battery.len() as f64)]);
    report.pass = Some(worst_slack >= -CHECK_SLACK);
    report
}

fn alpha_swap_report(space: &Space, eps: f64, diam: f64, limit: usize) -> BoundReport {
    let radii: Vec<f64> = if diam > 0.0 { space.distance_values() } else { vec![0.0] };
    let profiles = alpha_profile(space, eps, &radii, limit)
        .and_then(|p| alpha_profile(space, 1.0 - eps, &radii, limit).map(|q| (p, q)));
    match profiles {
        Ok((p_eps, p_comp)) => {
            // For ε ≥ 1/2 assert α^ε ≤ α^{1−ε} pointwise, mirrored below.
            let (small, large) =
                if eps >= 0.5 { (&p_eps, &p_comp) } else { (&p_comp, &p_eps) };
            let mut worst = (0.0f64, f64::INFINITY);
            for (s, l) in small.values.iter().zip(&large.values) {
                if l - s < worst.1 - worst.0 {
                    worst = (*s, *l);
                }
            }
            BoundReport::checked("alpha-swap", worst.0, worst.1, Relation::Le)
                .with_inputs(&[("epsilon", eps)])
        }
        Err(err) => BoundReport::skipped("alpha-swap", Relation::Le, err.to_string()),
    }
}

fn rho_block(
    space: &Space,
    params: &VerifyParams,
    rho: f64,
    diam: f64,
    obsdiam_low: f64,
) -> Vec<BoundReport> {
    let eps = params.epsilon;
    let kappa = params.kappa;
    let limit = params.exact_limit;
    let mut reports = Vec::new();
    let tag = |name: &str| format!("{name}[rho={rho:.6}]");

    let ledoux_comp = match exp_ledoux(space, 1.0 - eps, rho, limit) {
        Ok(result) => result,
        Err(err) => {
            for name in [
                "exponential-concentration-ledoux",
                "exponential-concentration-gromov-ledoux",
                "gromov-answer-lower",
                "gromov-upper",
                "obsdiam-upper-by-ledoux",
            ] {
                reports.push(BoundReport::skipped(&tag(name), Relation::Le, err.to_string()));
            }
            return reports;
        }
    };
    let exp_l = match ledoux_comp.value {
        ExpansionValue::Finite(v) if v > 1.0 => Some(v),
        ExpansionValue::Finite(v) => {
            let reason = format!("Exp_Ledoux({:.3}, {rho:.4}) = {v} is not > 1", 1.0 - eps);
            for name in [
                "exponential-concentration-ledoux",
                "exponential-concentration-gromov-ledoux",
                "gromov-answer-lower",
                "gromov-upper",
                "obsdiam-upper-by-ledoux",
            ] {
                reports.push(BoundReport::skipped(&tag(name), Relation::Le, reason.clone()));
            }
            None
        }
        ExpansionValue::Unbounded => {
            let reason =
                format!("Exp_Ledoux({:.3}, {rho:.4}) is unbounded; skipped explicitly", 1.0 - eps);
            for name in [
                "exponential-concentration-ledoux",
                "exponential-concentration-gromov-ledoux",
                "gromov-answer-lower",
                "gromov-upper",
                "obsdiam-upper-by-ledoux",
            ] {
                reports.push(BoundReport::skipped(&tag(name), Relation::Le, reason.clone()));
            }
            None
        }
    };
    let Some(exp_l) = exp_l else {
        return reports;
    };

    let exp_g = exp_gromov(space, eps, rho, limit)
        .expect("exp_ledoux already enforced the exact limit")
        .value
        .finite()
        .expect("Gromov coefficient is always finite");

    // Theorem block: α^ε(r) against both exponential envelopes for
    // r = ρ, 2ρ, 3ρ within the diameter.
    let radii: Vec<f64> =
        [1.0, 2.0, 3.0].iter().map(|k| k * rho).filter(|r| *r <= diam).collect();
    if radii.is_empty() {
        reports.push(BoundReport::skipped(
            &tag("exponential-concentration-ledoux"),
            Relation::Le,
            "no multiple of rho lies within the diameter".into(),
        ));
    } else {
        let profile = alpha_profile(space, eps, &radii, limit)
            .expect("limit already checked");
        let corruption = if params.inject_alpha_corruption { 0.5 } else { 0.0 };
        let mut worst_ledoux = (f64::NEG_INFINITY, 0.0f64);
        let mut worst_both = (f64::NEG_INFINITY, 0.0f64);
        let mut worst_ordering = (f64::NEG_INFINITY, 0.0f64);
        for (r, alpha) in profile.radii.iter().zip(&profile.values) {
            let alpha = alpha + corruption;
            let rhs_l = bounds::rhs_concentration_ledoux(eps, exp_l, rho, *r)
                .expect("hypotheses established above");
            let rhs_gl = bounds::rhs_concentration_gromov_ledoux(eps, exp_g, exp_l, rho, *r)
                .expect("hypotheses established above");
            if alpha - rhs_l > worst_ledoux.0 - worst_ledoux.1 {
                worst_ledoux = (alpha, rhs_l);
            }
            if alpha - rhs_gl > worst_both.0 - worst_both.1 {
                worst_both = (alpha, rhs_gl);
            }
            if rhs_l - rhs_gl > worst_ordering.0 - worst_ordering.1 {
                worst_ordering = (rhs_l, rhs_gl);
            }
        }
        reports.push(
            BoundReport::checked(
                &tag("exponential-concentration-ledoux"),
                worst_ledoux.0,
                worst_ledoux.1,
                Relation::Le,
            )
            .with_inputs(&[("epsilon", eps), ("rho", rho), ("exp_ledoux", exp_l)]),
        );
        reports.push(
            BoundReport::checked(
                &tag("exponential-concentration-gromov-ledoux"),
                worst_both.0,
                worst_both.1,
                Relation::Le,
            )
            .with_inputs(&[
                ("epsilon", eps),
                ("rho", rho),
                ("exp_gromov", exp_g),
                ("exp_ledoux", exp_l),
            ]),
        );
        // The Ledoux-only envelope is the sharper of the two.
        reports.push(
            BoundReport::checked(
                &tag("ledoux-envelope-is-sharper"),
                worst_ordering.0,
                worst_ordering.1,
                Relation::Le,
            )
            .with_inputs(&[("rho", rho)]),
        );
    }

    // Answer to Gromov: needs ε ≤ 1/2; the lower estimate of the
    // observable diameter only weakens the right side.
    if eps <= 0.5 {
        match bounds::gromov_answer_lower(kappa, eps, rho, exp_l, obsdiam_low) {
            Ok(rhs) => reports.push(
                BoundReport::checked(&tag("gromov-answer-lower"), exp_g, rhs, Relation::Ge)
                    .with_inputs(&[
                        ("kappa", kappa),
                        ("epsilon", eps),
                        ("rho", rho),
                        ("exp_ledoux", exp_l),
                        ("obsdiam_lower", obsdiam_low),
                    ]),
            ),
            Err(err) => reports.push(BoundReport::skipped(
                &tag("gromov-answer-lower"),
                Relation::Ge,
                err.to_string(),
            )),
        }

        if bounds::gromov_upper_hypothesis(exp_g, eps, exp_l, kappa) {
            match bounds::gromov_upper(kappa, eps, rho, exp_l, obsdiam_low) {
                Ok(rhs) => reports.push(
                    BoundReport::checked(&tag("gromov-upper"), exp_g, rhs, Relation::Le)
                        .with_inputs(&[
                            ("kappa", kappa),
                            ("epsilon", eps),
                            ("rho", rho),
                            ("exp_ledoux", exp_l),
                            ("obsdiam_lower", obsdiam_low),
                        ]),
                ),
                Err(err) => reports.push(BoundReport::skipped(
                    &tag("gromov-upper"),
                    Relation::Le,
                    err.to_string(),
                )),
            }
        } else {
            reports.push(BoundReport::skipped(
                &tag("gromov-upper"),
                Relation::Le,
                "predicate 2(1 - Exp_G eps) Exp_L >= kappa fails".into(),
            ));
        }

        match bounds::obsdiam_upper_by_ledoux(kappa, eps, rho, exp_l) {
            Ok(rhs) => reports.push(
                BoundReport::checked(
                    &tag("obsdiam-upper-by-ledoux"),
                    obsdiam_low,
                    rhs,
                    Relation::Le,
                )
                .with_inputs(&[("kappa", kappa), ("epsilon", eps), ("rho", rho)]),
            ),
            Err(err) => reports.push(BoundReport::skipped(
                &tag("obsdiam-upper-by-ledoux"),
                Relation::Le,
                err.to_string(),
            )),
        }
    } else {
        for name in ["gromov-answer-lower", "gromov-upper", "obsdiam-upper-by-ledoux"] {
            reports.push(BoundReport::skipped(
                &tag(name),
                Relation::Le,
                format!("epsilon = {eps} > 1/2"),
            ));
        }
    }

    reports
}

fn diameter_reports(
    space: &Space,
    params: &VerifyParams,
    rho_grid: &[f64],
    diam: f64,
) -> Vec<BoundReport> {
    let eps = params.epsilon;
    let limit = params.exact_limit;
    let mut reports = Vec::new();

    // Upper bound: τ is pinned to 1/3 by the derivation; other values are
    // evaluated on request elsewhere but never asserted.
    if (params.tau - bounds::DEFAULT_TAU).abs() > 1e-12 {
        reports.push(BoundReport::skipped(
            "diameter-upper",
            Relation::Le,
            format!("tau = {} is not asserted, only tau = 1/3 is proved", params.tau),
        ));
    } else if eps > 0.5 {
        reports.push(BoundReport::skipped(
            "diameter-upper",
            Relation::Le,
            format!("epsilon = {eps} > 1/2"),
        ));
    } else {
        let doubling = doubling_constant(space).constant;
        let mut best: Option<(f64, f64)> = None;
        let mut reason = "no rho in the grid has both Ledoux coefficients finite and > 1".to_string();
        for &rho in rho_grid {
            let side_eps = exp_ledoux(space, eps, rho, limit);
            let side_comp = exp_ledoux(space, 1.0 - eps, rho, limit);
            match (side_eps, side_comp) {
                (Ok(a), Ok(b)) => {
                    if let (Some(ea), Some(eb)) = (a.value.finite(), b.value.finite()) {
                        if ea > 1.0 && eb > 1.0 {
                            let result =
                                bounds::diameter_upper(doubling, eps, rho, ea, eb, params.tau)
                                    .expect("hypotheses established above");
                            if best.is_none_or(|(_, bound)| result.bound < bound) {
                                best = Some((rho, result.bound));
                            }
                        }
                    }
                }
                (Err(err), _) | (_, Err(err)) => {
                    reason = err.to_string();
                }
            }
        }
        match best {
            Some((rho, bound)) => reports.push(
                BoundReport::checked("diameter-upper", diam, bound, Relation::Le)
                    .with_inputs(&[("rho", rho), ("doubling", doubling), ("epsilon", eps)]),
            ),
            None => reports.push(BoundReport::skipped("diameter-upper", Relation::Le, reason)),
        }
    }

    // Lower bound through the Laplace functional, one report per λ.
    for &lambda in &params.lambda_grid {
        match bounds::diameter_lower(space, lambda, params.budget, params.seed) {
            Ok((bound, estimate)) => reports.push(
                BoundReport::checked(
                    &format!("diameter-lower[lambda={lambda:.4}]"),
                    bound,
                    diam,
                    Relation::Le,
                )
                .with_inputs(&[("lambda", lambda), ("laplace_lower", estimate.lower)]),
            ),
            Err(err) => reports.push(BoundReport::skipped(
                &format!("diameter-lower[lambda={lambda:.4}]"),
                Relation::Le,
                err.to_string(),
            )),
        }
    }

    reports
}

fn doubling_reports(space: &Space, eps: f64, rho_grid: &[f64], limit: usize) -> Vec<BoundReport> {
    let mut reports = Vec::new();
    let report = doubling_constant(space);

    // Pointwise doubling inequality at the breakpoints.
    let mut worst = (0.0f64, f64::INFINITY);
    for x in 0..space.n() {
        for d in space.distance_values() {
            for r in [d / 2.0, d] {
                let lhs = ball_mass(space, x, 2.0 * r);
                let rhs = report.constant * ball_mass(space, x, r);
                if rhs - lhs < worst.1 - worst.0 {
                    worst = (lhs, rhs);
                }
            }
        }
    }
    if worst.1.is_finite() {
        reports.push(
            BoundReport::checked("doubling-pointwise", worst.0, worst.1, Relation::Le)
                .with_inputs(&[("constant", report.constant)]),
        );
    } else {
        reports.push(BoundReport::skipped(
            "doubling-pointwise",
            Relation::Le,
            "single point: no positive radii".into(),
        ));
    }

    let mut characterization = BoundReport::checked(
        "doubling-characterization",
        if report.characterization_ok { 0.0 } else { 1.0 },
        0.0,
        Relation::Le,
    )
    .with_inputs(&[("constant", report.constant)]);
    characterization.pass = Some(report.characterization_ok);
    reports.push(characterization);

    // Ledoux ≤ doubling constant wherever the small-double-ball hypothesis
    // holds at every point.
    for &rho in rho_grid {
        let name = format!("ledoux-doubling-bound[rho={rho:.6}]");
        match ledoux_doubling_bound_check(space, eps, rho, limit) {
            Ok(result) => {
                if !result.hypothesis_met {
                    reports.push(BoundReport::skipped(
                        &name,
                        Relation::Le,
                        "mu(B(x, 2 rho)) <= eps fails at some point; vacuous".into(),
                    ));
                } else {
                    let lhs = result
                        .exp_ledoux
                        .and_then(|v| v.finite())
                        .unwrap_or(f64::INFINITY);
                    reports.push(
                        BoundReport::checked(&name, lhs, result.doubling_constant, Relation::Le)
                            .with_inputs(&[("epsilon", eps), ("rho", rho)]),
                    );
                }
            }
            Err(err) => {
                reports.push(BoundReport::skipped(&name, Relation::Le, err.to_string()))
            }
        }
    }

    reports
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{generate, random_space, SpaceKind, DEFAULT_MAX_POINTS};

    #[test]
    fn cycle_six_passes_everything() {
        let space: Space = generate(&SpaceKind::Cycle { n: 6 }, DEFAULT_MAX_POINTS).unwrap();
        let params = VerifyParams { kappa: 0.5, ..VerifyParams::default() };
        let reports = verify_all(&space, &params).unwrap();
        assert!(all_pass(&reports), "failures: {:?}", failures(&reports));
        // The Ledoux theorem block must actually run at ρ = 1.
        assert!(reports.iter().any(|r| {
            r.name.starts_with("exponential-concentration-ledoux") && r.pass == Some(true)
        }));
    }

    #[test]
    fn single_point_is_all_vacuous() {
        let space = Space::new(vec![vec![0.0]], vec![1.0]).unwrap();
        let reports = verify_all(&space, &VerifyParams::default()).unwrap();
        assert!(all_pass(&reports));
    }

    #[test]
    fn random_spaces_pass() {
        for seed in 0..8 {
            let space = random_space(4 + (seed as usize % 5), seed).unwrap();
            let reports = verify_all(&space, &VerifyParams::default()).unwrap();
            assert!(all_pass(&reports), "seed {seed}: {:?}", failures(&reports));
        }
    }

    #[test]
    fn fault_injection_fails_the_suite() {
        let space: Space = generate(&SpaceKind::Cycle { n: 6 }, DEFAULT_MAX_POINTS).unwrap();
        let params = VerifyParams {
            kappa: 0.5,
            inject_alpha_corruption: true,
            ..VerifyParams::default()
        };
        let reports = verify_all(&space, &params).unwrap();
        assert!(!all_pass(&reports));
    }

    #[test]
    fn oversized_spaces_skip_exact_checks() {
        let space = random_space(9, 1).unwrap();
        let params = VerifyParams { exact_limit: 8, ..VerifyParams::default() };
        let reports = verify_all(&space, &params).unwrap();
        assert!(all_pass(&reports));
        assert!(reports.iter().any(|r| !r.hypotheses_met));
    }

    fn failures(reports: &[BoundReport]) -> Vec<String> {
        reports
            .iter()
            .filter(|r| r.failed())
            .map(|r| format!("{}: lhs {} rhs {}", r.name, r.lhs, r.rhs))
            .collect()
    }
}
