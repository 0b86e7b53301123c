//! Lipschitz observables and everything computed through them: pushforward
//! measures on the line, partial diameter, the observable diameter sandwich,
//! and the Laplace functional.
//!
//! The observable diameter `ObsDiam(X; −κ)` is the supremum over 1-Lipschitz
//! `f: X → ℝ` of the partial diameter of the pushforward `f_*μ`. The
//! supremum ranges over a polytope with a combinatorial inner minimization,
//! so it is reported as a certified sandwich: a witness lower bound from a
//! concrete family of observables plus derivative-free local search, and a
//! duality upper bound through the concentration function. An exhaustive
//! lattice oracle exists for calibration on spaces of at most
//! [`ORACLE_LIMIT`] points. The Laplace functional gets the same treatment.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::concentration::alpha_profile;
use crate::error::{Error, Result};
use crate::scalar::{c, Real};
use crate::search::{for_each_minimal_qualifying, mass_slack};
use crate::space::MetricMeasureSpace;

/// Point count limit for the exhaustive lattice oracles.
pub const ORACLE_LIMIT: usize = 5;

/// Default number of coordinate-ascent restarts in the estimators.
pub const DEFAULT_ASCENT_BUDGET: usize = 20;

/// Pair observables `d(A, ·)`, `|A| = 2`, are enumerated only up to this
/// point count; beyond it the quadratic family would dominate runtime for
/// no benefit over the ascent.
const PAIR_FAMILY_LIMIT: usize = 128;

/// Coordinate ascent is enabled up to this point count (each candidate
/// evaluation recomputes a Lipschitz constant, which is quadratic).
const ASCENT_LIMIT: usize = 256;

/// A real observable: one value per point with its cached Lipschitz
/// constant `max |f(i)−f(j)| / d(i,j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LipschitzFunction<T> {
    values: Vec<T>,
    lip: T,
}

impl<T: Real> LipschitzFunction<T> {
    /// Builds the observable and computes its Lipschitz constant. A constant
    /// function (and any function on a single point) has `lip = 0`.
    pub fn new(space: &MetricMeasureSpace<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != space.n() {
            return Err(Error::ShapeMismatch(format!(
                "function has {} values on a {}-point space",
                values.len(),
                space.n()
            )));
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteEntry { what: "function values", index });
        }
        let lip = lipschitz_constant(space, &values);
        Ok(Self { values, lip })
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn value(&self, i: usize) -> T {
        self.values[i]
    }

    pub fn lip(&self) -> T {
        self.lip
    }

    /// μ-mean `∫ f dμ`.
    pub fn mean(&self, space: &MetricMeasureSpace<T>) -> T {
        self.values.iter().enumerate().map(|(i, v)| space.weight(i) * *v).sum()
    }
}

fn lipschitz_constant<T: Real>(space: &MetricMeasureSpace<T>, values: &[T]) -> T {
    let n = space.n();
    let mut lip = T::zero();
    for i in 0..n {
        for j in (i + 1)..n {
            let ratio = (values[i] - values[j]).abs() / space.dist(i, j);
            lip = lip.max(ratio);
        }
    }
    lip
}

/// McShane extension: `f(x) = min_a g(a) + L·d(x, a)` over the anchors.
///
/// Agrees with the anchors and is `L`-Lipschitz whenever the anchors are.
pub fn mcshane_extend<T: Real>(
    space: &MetricMeasureSpace<T>,
    anchors: &[(usize, T)],
    l: T,
) -> Result<LipschitzFunction<T>> {
    if anchors.is_empty() {
        return Err(Error::InvalidParameter("at least one anchor is required".into()));
    }
    if l <= T::zero() {
        return Err(Error::InvalidParameter("Lipschitz budget L must be positive".into()));
    }
    for (pos, &(a, ga)) in anchors.iter().enumerate() {
        if a >= space.n() {
            return Err(Error::InvalidParameter(format!("anchor index {a} out of range")));
        }
        for &(b, gb) in &anchors[pos + 1..] {
            let bound = l * space.dist(a, b);
            if (ga - gb).abs() > bound {
                return Err(Error::AnchorsNotLipschitz {
                    a,
                    b,
                    value_a: crate::scalar::as_f64(ga),
                    value_b: crate::scalar::as_f64(gb),
                    lip: crate::scalar::as_f64(l),
                    distance: crate::scalar::as_f64(space.dist(a, b)),
                });
            }
        }
    }
    let values = (0..space.n())
        .map(|x| {
            anchors
                .iter()
                .map(|&(a, ga)| ga + l * space.dist(x, a))
                .fold(T::infinity(), |acc, v| acc.min(v))
        })
        .collect();
    LipschitzFunction::new(space, values)
}

/// Scales `f` by `L / max(L, lip f)`: the result is `L`-Lipschitz, and an
/// already `L`-Lipschitz function passes through unchanged.
pub fn shrink_to_lipschitz<T: Real>(
    space: &MetricMeasureSpace<T>,
    f: &LipschitzFunction<T>,
    l: T,
) -> LipschitzFunction<T> {
    assert!(l > T::zero(), "Lipschitz budget L must be positive");
    if f.lip <= l {
        return f.clone();
    }
    let scale = l / f.lip;
    let values = f.values.iter().map(|v| *v * scale).collect();
    LipschitzFunction::new(space, values).expect("scaled values stay finite")
}

/// The pushforward `f_*μ` on the line: sorted distinct atom positions with
/// positive masses summing to 1.
#[derive(Clone, Debug, PartialEq)]
pub struct PushforwardAtoms<T> {
    pub positions: Vec<T>,
    pub masses: Vec<T>,
}

pub fn pushforward<T: Real>(
    space: &MetricMeasureSpace<T>,
    f: &LipschitzFunction<T>,
) -> PushforwardAtoms<T> {
    let mut pairs: Vec<(T, T)> =
        f.values.iter().enumerate().map(|(i, v)| (*v, space.weight(i))).collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite values"));
    let mut positions = Vec::new();
    let mut masses: Vec<T> = Vec::new();
    for (v, w) in pairs {
        if positions.last() == Some(&v) {
            let last = masses.last_mut().expect("positions and masses align");
            *last += w;
        } else {
            positions.push(v);
            masses.push(w);
        }
    }
    PushforwardAtoms { positions, masses }
}

/// Minimal width of an index window of atoms carrying mass at least
/// `1 − κ`: the partial diameter of the pushforward on the screen ℝ.
pub fn partial_diameter_line<T: Real>(atoms: &PushforwardAtoms<T>, kappa: T) -> T {
    assert!(
        kappa > T::zero() && kappa < T::one(),
        "kappa must lie in (0,1)"
    );
    let target = T::one() - kappa - mass_slack::<T>();
    let k = atoms.positions.len();
    let mut best = T::infinity();
    let mut mass = T::zero();
    let mut j = 0usize;
    for i in 0..k {
        while j < k && mass < target {
            mass += atoms.masses[j];
            j += 1;
        }
        if mass < target {
            break;
        }
        let width = atoms.positions[j - 1] - atoms.positions[i];
        best = best.min(width);
        mass = mass - atoms.masses[i];
    }
    if best.is_finite() {
        best
    } else {
        // Unreachable for κ ∈ (0,1): the full window always carries mass 1.
        atoms.positions.last().map_or(T::zero(), |hi| *hi - atoms.positions[0])
    }
}

/// `min { diam(A) : μ(A) ≥ 1 − κ }`, exact by enumeration of
/// inclusion-minimal qualifying subsets (diameter is monotone under
/// inclusion).
pub fn partial_diameter_space<T: Real>(
    space: &MetricMeasureSpace<T>,
    kappa: T,
    limit: usize,
) -> Result<T> {
    if kappa <= T::zero() || kappa >= T::one() {
        return Err(Error::InvalidParameter("kappa must lie in (0,1)".into()));
    }
    let eps = T::one() - kappa;
    let mut best = T::infinity();
    for_each_minimal_qualifying(space, eps, limit, &mut |mask, _, _| {
        let mut diam = T::zero();
        let mut rest = mask;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let mut rest2 = rest;
            while rest2 != 0 {
                let j = rest2.trailing_zeros() as usize;
                rest2 &= rest2 - 1;
                diam = diam.max(space.dist(i, j));
            }
        }
        best = best.min(diam);
    })?;
    // X itself always qualifies, so some minimal subset was visited.
    debug_assert!(best.is_finite());
    Ok(best)
}

/// The observable-diameter sandwich for one `(κ, ε)` configuration.
#[derive(Clone, Debug)]
pub struct ObsDiamEstimate<T> {
    pub lower: T,
    pub upper: T,
    pub witness: LipschitzFunction<T>,
    pub method: String,
}

/// Witness lower bound for `ObsDiam(X; −κ)`.
///
/// Maximizes the window objective over `d(x,·)` for every point, `d(A,·)`
/// for every pair, and `budget` coordinate-ascent refinements of random
/// shrunk observables (perturb one value, re-shrink, keep on improvement).
/// Every candidate is genuinely 1-Lipschitz, so the result is a true lower
/// bound at any space size.
pub fn obsdiam_lower<T: Real>(
    space: &MetricMeasureSpace<T>,
    kappa: T,
    budget: usize,
    seed: u64,
) -> Result<(T, LipschitzFunction<T>)> {
    if kappa <= T::zero() || kappa >= T::one() {
        return Err(Error::InvalidParameter("kappa must lie in (0,1)".into()));
    }
    let objective =
        |f: &LipschitzFunction<T>| partial_diameter_line(&pushforward(space, f), kappa);
    let normalize = |values: Vec<T>| -> LipschitzFunction<T> {
        let raw = LipschitzFunction::new(space, values).expect("finite candidate values");
        shrink_to_lipschitz(space, &raw, T::one())
    };
    estimate_supremum(space, budget, seed, &normalize, &objective)
}

/// Duality upper bound: `2·min { r ∈ breakpoints : α^ε(r) ≤ κ/2 }` with
/// `ε ≤ 1/2`. The concentration function is a right-continuous step
/// function with jumps at the pairwise distances, so the breakpoint scan
/// evaluates the infimum exactly.
pub fn obsdiam_upper<T: Real>(
    space: &MetricMeasureSpace<T>,
    kappa: T,
    eps: T,
    limit: usize,
) -> Result<T> {
    if kappa <= T::zero() || kappa >= T::one() {
        return Err(Error::InvalidParameter("kappa must lie in (0,1)".into()));
    }
    if eps <= T::zero() || eps > c::<T>(0.5) {
        return Err(Error::InvalidParameter("epsilon must lie in (0, 1/2]".into()));
    }
    let half = c::<T>(0.5);
    let mut radii = vec![T::zero()];
    radii.extend(space.distance_values());
    let profile = alpha_profile(space, eps, &radii, limit)?;
    let threshold = kappa * half + mass_slack::<T>();
    for (r, alpha) in profile.radii.iter().zip(&profile.values) {
        if *alpha <= threshold {
            return Ok(c::<T>(2.0) * *r);
        }
    }
    // α(diam) = 0 ≤ κ/2, so the scan always terminates above.
    unreachable!("concentration function vanishes at the diameter")
}

/// Lower and upper estimate in one report.
pub fn obsdiam_sandwich<T: Real>(
    space: &MetricMeasureSpace<T>,
    kappa: T,
    eps: T,
    budget: usize,
    seed: u64,
    limit: usize,
) -> Result<ObsDiamEstimate<T>> {
    let (lower, witness) = obsdiam_lower(space, kappa, budget, seed)?;
    let upper = obsdiam_upper(space, kappa, eps, limit)?;
    Ok(ObsDiamEstimate {
        lower,
        upper,
        witness,
        method: "witness family + ascent / alpha duality".into(),
    })
}

/// Exhaustive lattice reference for `ObsDiam(X; −κ)` on spaces of at most
/// [`ORACLE_LIMIT`] points.
///
/// Enumerates every function with `f(p₀) = 0` and values on `hℤ ∩ [−diam,
/// diam]`, filtered to `lip ≤ 1`, and maximizes the window objective.
/// Translation invariance of the objective justifies pinning `f(p₀) = 0`,
/// so the result is exact up to `O(h)`.
pub fn obsdiam_oracle<T: Real>(space: &MetricMeasureSpace<T>, kappa: T, h: T) -> Result<T> {
    if kappa <= T::zero() || kappa >= T::one() {
        return Err(Error::InvalidParameter("kappa must lie in (0,1)".into()));
    }
    let mut best = T::zero();
    for_each_lattice_lipschitz(space, h, &mut |values: &[T]| {
        let f = LipschitzFunction { values: values.to_vec(), lip: T::one() };
        let width = partial_diameter_line(&pushforward(space, &f), kappa);
        best = best.max(width);
    })?;
    Ok(best)
}

/// A certified lower estimate of the Laplace functional at one `λ`.
#[derive(Clone, Debug)]
pub struct LaplaceEstimate<T> {
    pub lambda: T,
    /// `∫ exp(λ·witness) dμ ≥ 1`.
    pub lower: T,
    pub witness: LipschitzFunction<T>,
}

/// Witness lower bound for the Laplace functional
/// `Lap(λ) = sup ∫ exp(λf) dμ` over mean-zero 1-Lipschitz `f`.
///
/// Candidates are the zero function, the centered distance functions
/// `d(x,·) − ∫d(x,·)dμ`, and ascent refinements re-shrunk and re-centered
/// after every move (center last, so the mean constraint is exact).
pub fn laplace_lower<T: Real>(
    space: &MetricMeasureSpace<T>,
    lambda: T,
    budget: usize,
    seed: u64,
) -> Result<LaplaceEstimate<T>> {
    if lambda <= T::zero() {
        return Err(Error::InvalidParameter("lambda must be positive".into()));
    }
    let objective = |f: &LipschitzFunction<T>| exp_integral(space, f, lambda);
    let normalize = |values: Vec<T>| -> LipschitzFunction<T> {
        let raw = LipschitzFunction::new(space, values).expect("finite candidate values");
        let shrunk = shrink_to_lipschitz(space, &raw, T::one());
        center(space, &shrunk)
    };
    let (lower, witness) = estimate_supremum(space, budget, seed, &normalize, &objective)?;
    Ok(LaplaceEstimate { lambda, lower, witness })
}

/// Exhaustive lattice reference for the Laplace functional on spaces of at
/// most [`ORACLE_LIMIT`] points. Lattice candidates are 1-Lipschitz by the
/// same filter as [`obsdiam_oracle`] and are re-centered to mean zero
/// before evaluation.
pub fn laplace_oracle<T: Real>(space: &MetricMeasureSpace<T>, lambda: T, h: T) -> Result<T> {
    if lambda <= T::zero() {
        return Err(Error::InvalidParameter("lambda must be positive".into()));
    }
    let mut best = T::one();
    for_each_lattice_lipschitz(space, h, &mut |values: &[T]| {
        let mean: T = values.iter().enumerate().map(|(i, v)| space.weight(i) * *v).sum();
        let value: T = values
            .iter()
            .enumerate()
            .map(|(i, v)| space.weight(i) * ((*v - mean) * lambda).exp())
            .sum();
        best = best.max(value);
    })?;
    Ok(best)
}

/// `∫ exp(λf) dμ`.
pub fn exp_integral<T: Real>(
    space: &MetricMeasureSpace<T>,
    f: &LipschitzFunction<T>,
    lambda: T,
) -> T {
    f.values.iter().enumerate().map(|(i, v)| space.weight(i) * (*v * lambda).exp()).sum()
}

/// `f − ∫f dμ`, exactly mean-zero up to one rounding of the mean.
pub fn center<T: Real>(
    space: &MetricMeasureSpace<T>,
    f: &LipschitzFunction<T>,
) -> LipschitzFunction<T> {
    let mean = f.mean(space);
    LipschitzFunction { values: f.values.iter().map(|v| *v - mean).collect(), lip: f.lip }
}

/// The image space of a pushforward: distinct values of `f` as points on
/// the line with the induced metric `|v_i − v_j|` and the pushed masses.
pub fn pushforward_space<T: Real>(
    space: &MetricMeasureSpace<T>,
    f: &LipschitzFunction<T>,
) -> Result<MetricMeasureSpace<T>> {
    let atoms = pushforward(space, f);
    let k = atoms.positions.len();
    let mut dist = vec![T::zero(); k * k];
    for i in 0..k {
        for j in 0..k {
            dist[i * k + j] = (atoms.positions[i] - atoms.positions[j]).abs();
        }
    }
    MetricMeasureSpace::from_flat(k, dist, atoms.masses)
}

// ---------------------------------------------------------------------------
// Shared estimator machinery.
// ---------------------------------------------------------------------------

/// Deterministic family + parallel coordinate ascent. Returns the best
/// objective value with its witness.
fn estimate_supremum<T: Real>(
    space: &MetricMeasureSpace<T>,
    budget: usize,
    seed: u64,
    normalize: &(dyn Fn(Vec<T>) -> LipschitzFunction<T> + Sync),
    objective: &(dyn Fn(&LipschitzFunction<T>) -> T + Sync),
) -> Result<(T, LipschitzFunction<T>)> {
    let n = space.n();
    let zero = normalize(vec![T::zero(); n]);
    let mut best_value = objective(&zero);
    let mut best = zero;

    for x in 0..n {
        let candidate = normalize(space.dist_row(x).to_vec());
        let value = objective(&candidate);
        if value > best_value {
            best_value = value;
            best = candidate;
        }
    }
    if n <= PAIR_FAMILY_LIMIT {
        for x in 0..n {
            for y in (x + 1)..n {
                let values: Vec<T> = (0..n)
                    .map(|i| space.dist(i, x).min(space.dist(i, y)))
                    .collect();
                let candidate = normalize(values);
                let value = objective(&candidate);
                if value > best_value {
                    best_value = value;
                    best = candidate;
                }
            }
        }
    }

    if n <= ASCENT_LIMIT && n > 1 && budget > 0 {
        let diam = space.diameter();
        let restarts: Vec<(T, LipschitzFunction<T>)> = (0..budget)
            .into_par_iter()
            .map(|restart| {
                ascend(space, seed, restart as u64, diam, normalize, objective)
            })
            .collect();
        for (value, witness) in restarts {
            if value > best_value {
                best_value = value;
                best = witness;
            }
        }
    }
    Ok((best_value, best))
}

fn ascend<T: Real>(
    space: &MetricMeasureSpace<T>,
    seed: u64,
    restart: u64,
    diam: T,
    normalize: &(dyn Fn(Vec<T>) -> LipschitzFunction<T> + Sync),
    objective: &(dyn Fn(&LipschitzFunction<T>) -> T + Sync),
) -> (T, LipschitzFunction<T>) {
    let n = space.n();
    let mut rng =
        ChaCha8Rng::seed_from_u64(seed ^ restart.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(0xa5c3));
    let diam_f = crate::scalar::as_f64(diam).max(f64::MIN_POSITIVE);
    let start: Vec<T> =
        (0..n).map(|_| c::<T>(rng.random_range(-diam_f..diam_f))).collect();
    let mut current = normalize(start);
    let mut current_value = objective(&current);

    let mut step = 0.5f64;
    let mut stagnation = 0u32;
    for _ in 0..300 {
        let i = rng.random_range(0..n);
        let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let mut values = current.values.clone();
        values[i] += c::<T>(sign * step * diam_f);
        let candidate = normalize(values);
        let value = objective(&candidate);
        if value > current_value {
            current = candidate;
            current_value = value;
            stagnation = 0;
        } else {
            stagnation += 1;
            if stagnation >= 12 {
                stagnation = 0;
                step *= 0.5;
                if step < 1e-3 {
                    break;
                }
            }
        }
    }
    (current_value, current)
}

/// Enumerates `f` with `f(p₀) = 0`, values on `hℤ ∩ [−diam, diam]` and
/// `lip ≤ 1`, for spaces of at most [`ORACLE_LIMIT`] points.
fn for_each_lattice_lipschitz<T: Real>(
    space: &MetricMeasureSpace<T>,
    h: T,
    visit: &mut dyn FnMut(&[T]),
) -> Result<()> {
    let n = space.n();
    if n > ORACLE_LIMIT {
        return Err(Error::TooLargeForOracle { n, limit: ORACLE_LIMIT });
    }
    if h <= T::zero() {
        return Err(Error::InvalidParameter("lattice step h must be positive".into()));
    }
    let diam = crate::scalar::as_f64(space.diameter());
    let h_f = crate::scalar::as_f64(h);
    let mut values = vec![T::zero(); n];
    lattice_recurse(space, h_f, diam, 1, &mut values, visit);
    Ok(())
}

fn lattice_recurse<T: Real>(
    space: &MetricMeasureSpace<T>,
    h: f64,
    diam: f64,
    i: usize,
    values: &mut Vec<T>,
    visit: &mut dyn FnMut(&[T]),
) {
    let n = space.n();
    if i == n {
        visit(values);
        return;
    }
    let mut lo = -diam;
    let mut hi = diam;
    for (j, value) in values.iter().enumerate().take(i) {
        let vj = crate::scalar::as_f64(*value);
        let d = crate::scalar::as_f64(space.dist(i, j));
        lo = lo.max(vj - d);
        hi = hi.min(vj + d);
    }
    if lo > hi {
        return;
    }
    let k_lo = (lo / h - 1e-9).ceil() as i64;
    let k_hi = (hi / h + 1e-9).floor() as i64;
    for k in k_lo..=k_hi {
        values[i] = c::<T>(k as f64 * h);
        lattice_recurse(space, h, diam, i + 1, values, visit);
    }
    values[i] = T::zero();
}
