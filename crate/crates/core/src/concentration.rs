//! The concentration function `α^ε`, envelope fits, quantiles, and the two
//! concentration inequalities.
//!
//! `α^ε(r) = sup { 1 − μ(A_r) : A Borel, μ(A) ≥ ε }` is computed exactly:
//! the objective only shrinks on supersets, so the search runs over
//! inclusion-minimal qualifying sets (depth-first with mass pruning), and
//! `μ(A_r)` for one set is a step function of `r` evaluated for all query
//! radii in a single pass.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lipschitz::LipschitzFunction;
use crate::mask::SubsetMask;
use crate::scalar::{c, Real};
use crate::search::{for_each_minimal_qualifying, mass_slack};
use crate::space::MetricMeasureSpace;

/// Exact values of `α^ε` on a radius grid, with an optimal subset per
/// radius.
#[derive(Clone, Debug)]
pub struct ConcentrationProfile<T> {
    pub epsilon: T,
    /// Sorted ascending.
    pub radii: Vec<T>,
    /// `α^ε(radii[i])`; nonincreasing, within `[0, 1−ε]`, zero from the
    /// diameter on.
    pub values: Vec<T>,
    /// Subset attaining each value.
    pub witnesses: Vec<SubsetMask>,
}

fn check_eps<T: Real>(eps: T) -> Result<()> {
    if eps <= T::zero() || eps >= T::one() {
        return Err(Error::InvalidParameter("epsilon must lie in (0,1)".into()));
    }
    Ok(())
}

/// `α^ε(r)` with the attaining subset.
pub fn alpha_exact<T: Real>(
    space: &MetricMeasureSpace<T>,
    eps: T,
    r: T,
    limit: usize,
) -> Result<(T, SubsetMask)> {
    let profile = alpha_profile(space, eps, &[r], limit)?;
    Ok((profile.values[0], profile.witnesses[0].clone()))
}

/// `α^ε` on a whole grid in one subset enumeration.
pub fn alpha_profile<T: Real>(
    space: &MetricMeasureSpace<T>,
    eps: T,
    radii: &[T],
    limit: usize,
) -> Result<ConcentrationProfile<T>> {
    check_eps(eps)?;
    if radii.is_empty() {
        return Err(Error::InvalidParameter("radius grid is empty".into()));
    }
    if radii.iter().any(|r| !r.is_finite() || *r < T::zero()) {
        return Err(Error::InvalidParameter("radii must be finite and >= 0".into()));
    }
    let mut sorted: Vec<T> = radii.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite radii"));

    let n = space.n();
    let mut values = vec![T::neg_infinity(); sorted.len()];
    let mut witnesses = vec![0u32; sorted.len()];
    let mut thresholds: Vec<(T, T)> = Vec::with_capacity(n);
    for_each_minimal_qualifying(space, eps, limit, &mut |mask, _, dmin| {
        thresholds.clear();
        thresholds.extend((0..n).map(|x| (dmin[x], space.weight(x))));
        thresholds.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite distances"));
        // Walk the sorted radii once; `thresholds` is consumed in step.
        let mut idx = 0usize;
        let mut enlarged = T::zero();
        for (pos, r) in sorted.iter().enumerate() {
            while idx < n && thresholds[idx].0 <= *r {
                enlarged += thresholds[idx].1;
                idx += 1;
            }
            // The exact value 1 − μ(A_r) is either 0 or at least the
            // smallest point weight; anything below the mass slack is
            // rounding residue of a full enlargement.
            let mut objective = T::one() - enlarged;
            if objective < mass_slack::<T>() {
                objective = T::zero();
            }
            if objective > values[pos] {
                values[pos] = objective;
                witnesses[pos] = mask;
            }
        }
    })?;

    // X always qualifies, so every radius saw at least one candidate.
    debug_assert!(values.iter().all(|v| v.is_finite()));
    // Monotonicity postcondition: a larger radius can only lose mass.
    for w in values.windows(2) {
        assert!(
            w[1] <= w[0] + mass_slack::<T>(),
            "concentration profile must be nonincreasing"
        );
    }

    Ok(ConcentrationProfile {
        epsilon: eps,
        radii: sorted,
        values,
        witnesses: witnesses.into_iter().map(|m| SubsetMask::from_u32(n, m)).collect(),
    })
}

/// `α^ε(r) ≤ α^{1−ε}(r)` for `ε ≥ 1/2`, and mirrored below `1/2`.
pub fn alpha_swap_check<T: Real>(
    space: &MetricMeasureSpace<T>,
    eps: T,
    r: T,
    limit: usize,
) -> Result<bool> {
    check_eps(eps)?;
    let (a_eps, _) = alpha_exact(space, eps, r, limit)?;
    let (a_comp, _) = alpha_exact(space, T::one() - eps, r, limit)?;
    let slack = mass_slack::<T>();
    Ok(if eps >= c::<T>(0.5) { a_eps <= a_comp + slack } else { a_comp <= a_eps + slack })
}

/// Envelope family for [`fit_profile`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FitKind {
    /// `α(r) ≤ C1·exp(−C2·r)`
    Exponential,
    /// `α(r) ≤ C1·exp(−C2·r²)`
    Gaussian,
}

/// A certified envelope: the profile never exceeds `C1·exp(−C2·g(r))`.
#[derive(Clone, Debug, Serialize)]
pub struct ProfileFit<T> {
    pub kind: FitKind,
    pub c1: T,
    pub c2: T,
    /// Max log-domain fit error over the strictly positive entries.
    pub residual: T,
}

/// Least-squares fit of `ln α` against `r` (exponential) or `r²`
/// (Gaussian) over the strictly positive profile entries, then `C1`
/// inflated until the envelope dominates the whole profile.
///
/// A flat or increasing positive profile has no positive least-squares
/// rate; the rate is then clamped to a tiny positive value and domination
/// is restored through `C1`, which keeps the envelope certified.
pub fn fit_profile<T: Real>(
    profile: &ConcentrationProfile<T>,
    kind: FitKind,
) -> Result<ProfileFit<T>> {
    let points: Vec<(T, T)> = profile
        .radii
        .iter()
        .zip(&profile.values)
        .filter(|(_, v)| **v > T::zero())
        .map(|(r, v)| {
            let x = match kind {
                FitKind::Exponential => *r,
                FitKind::Gaussian => *r * *r,
            };
            (x, v.ln())
        })
        .collect();
    if points.len() < 2 {
        return Err(Error::DegenerateProfile);
    }

    let len = c::<T>(points.len() as f64);
    let mean_x = points.iter().map(|(x, _)| *x).sum::<T>() / len;
    let mean_y = points.iter().map(|(_, y)| *y).sum::<T>() / len;
    let mut cov = T::zero();
    let mut var = T::zero();
    for (x, y) in &points {
        cov += (*x - mean_x) * (*y - mean_y);
        var += (*x - mean_x) * (*x - mean_x);
    }
    let slope = if var > T::zero() { cov / var } else { T::zero() };
    let mut c2 = -slope;
    if c2 <= T::zero() {
        c2 = c::<T>(1e-9);
    }
    let intercept = mean_y + c2 * mean_x;

    let mut residual = T::zero();
    let mut log_excess = T::neg_infinity();
    for (x, y) in &points {
        let err = (*y - (intercept - c2 * *x)).abs();
        residual = residual.max(err);
        log_excess = log_excess.max(*y - (intercept - c2 * *x));
    }
    let mut c1 = intercept.exp();
    if log_excess > T::zero() {
        c1 = c1 * log_excess.exp();
    }
    Ok(ProfileFit { kind, c1, c2, residual })
}

/// Smallest attained value `m` with `μ(f ≤ m) ≥ ε` and `μ(f ≥ m) ≥ 1−ε`:
/// the quantile of order `ε` (the Lévy mean, or median, at `ε = 1/2`).
/// Existence is guaranteed on finite spaces; ties break to the smallest
/// value.
pub fn quantile<T: Real>(
    space: &MetricMeasureSpace<T>,
    f: &LipschitzFunction<T>,
    eps: T,
) -> Result<T> {
    check_eps(eps)?;
    let mut attained: Vec<T> = f.values().to_vec();
    attained.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    attained.dedup_by(|a, b| *a == *b);
    let slack = mass_slack::<T>();
    for m in attained {
        let mut le = T::zero();
        let mut ge = T::zero();
        for (i, v) in f.values().iter().enumerate() {
            if *v <= m {
                le += space.weight(i);
            }
            if *v >= m {
                ge += space.weight(i);
            }
        }
        if le >= eps - slack && ge >= T::one() - eps - slack {
            return Ok(m);
        }
    }
    unreachable!("a quantile of every order exists on a finite space")
}

/// One radius row of the concentration-inequality check.
#[derive(Clone, Debug, Serialize)]
pub struct ConcentrationRow<T> {
    pub r: T,
    /// `μ(|f − m_f| > r)`.
    pub lhs: T,
    /// `α^ε(r/‖f‖) + α^{1−ε}(r/‖f‖)`.
    pub rhs_sum: T,
    /// `2·α^{1−ε}(r/‖f‖)`, only when `ε ≥ 1/2`.
    pub rhs_doubled: Option<T>,
    pub pass: bool,
}

/// Full report of the concentration inequality over a radius grid.
#[derive(Clone, Debug, Serialize)]
pub struct ConcentrationCheck<T> {
    pub quantile: T,
    pub lip: T,
    pub rows: Vec<ConcentrationRow<T>>,
    pub pass: bool,
    /// `min (rhs − lhs)` over all rows and both right-hand sides.
    pub worst_slack: T,
}

/// Verifies `μ(|f − m_f| > r) ≤ α^ε(r/‖f‖) + α^{1−ε}(r/‖f‖)` on every
/// radius, and additionally against `2α^{1−ε}(r/‖f‖)` when `ε ≥ 1/2`.
///
/// A constant `f` short-circuits: the left side is identically 0.
pub fn check_concentration_inequality<T: Real>(
    space: &MetricMeasureSpace<T>,
    f: &LipschitzFunction<T>,
    eps: T,
    radii: &[T],
    limit: usize,
) -> Result<ConcentrationCheck<T>> {
    check_eps(eps)?;
    let m = quantile(space, f, eps)?;
    let lip = f.lip();
    let slack = c::<T>(crate::tol::CHECK_SLACK);
    let doubled_applies = eps >= c::<T>(0.5);

    let mut sorted = radii.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite radii"));

    // Constant observables never deviate from their quantile.
    if lip == T::zero() {
        let rows: Vec<ConcentrationRow<T>> = sorted
            .iter()
            .map(|r| ConcentrationRow {
                r: *r,
                lhs: T::zero(),
                rhs_sum: T::zero(),
                rhs_doubled: doubled_applies.then_some(T::zero()),
                pass: true,
            })
            .collect();
        return Ok(ConcentrationCheck {
            quantile: m,
            lip,
            rows,
            pass: true,
            worst_slack: T::zero(),
        });
    }

    let scaled: Vec<T> = sorted.iter().map(|r| *r / lip).collect();
    let profile_eps = alpha_profile(space, eps, &scaled, limit)?;
    let profile_comp = alpha_profile(space, T::one() - eps, &scaled, limit)?;

    let mut rows = Vec::with_capacity(sorted.len());
    let mut pass = true;
    let mut worst = T::infinity();
    for (pos, r) in sorted.iter().enumerate() {
        // Deviations exactly at r are excluded by the strict inequality;
        // the slack keeps rounding from flipping such ties (shortest-path
        // metrics produce exact triangle equalities, where the deviation
        // of a point is r up to one ulp).
        let threshold = *r + mass_slack::<T>();
        let mut lhs = T::zero();
        for (i, v) in f.values().iter().enumerate() {
            if (*v - m).abs() > threshold {
                lhs += space.weight(i);
            }
        }
        let rhs_sum = profile_eps.values[pos] + profile_comp.values[pos];
        let rhs_doubled = doubled_applies.then_some(c::<T>(2.0) * profile_comp.values[pos]);
        let mut row_pass = lhs <= rhs_sum + slack;
        worst = worst.min(rhs_sum - lhs);
        if let Some(d) = rhs_doubled {
            row_pass &= lhs <= d + slack;
            worst = worst.min(d - lhs);
        }
        pass &= row_pass;
        rows.push(ConcentrationRow { r: *r, lhs, rhs_sum, rhs_doubled, pass: row_pass });
    }
    Ok(ConcentrationCheck { quantile: m, lip, rows, pass, worst_slack: worst })
}
