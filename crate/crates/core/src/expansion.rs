//! Gromov's and Ledoux's expansion coefficients, exact, with their
//! structural checks.
//!
//! Both definitions are read in the "for all qualifying sets" direction,
//! which is the one every downstream argument actually uses:
//!
//! * `Exp_Gromov(X; ε, ρ) = min { μ(A_ρ)/ε : μ(A) ≥ ε }` — the largest `e`
//!   with `μ(A_ρ) ≥ e·ε` for *every* qualifying `A`;
//! * `Exp_Ledoux(X; ε, ρ) = min { μ(B_ρ)/μ(B) : B ≠ ∅, μ(B_ρ) ≤ ε }` — the
//!   largest `e` with `μ(B_ρ) ≥ e·μ(B)` for every qualifying `B`, and
//!   [`ExpansionValue::Unbounded`] when no `B` qualifies.
//!
//! The unbounded case is an explicit sentinel, never a saturated float:
//! theorem checkers must skip it, not compare against it.

use crate::enlargement::{ball_mass, doubling_constant};
use crate::error::{Error, Result};
use crate::lipschitz::LipschitzFunction;
use crate::mask::SubsetMask;
use crate::scalar::{c, Real};
use crate::search::{for_each_minimal_qualifying, for_each_small_enlargement, mass_slack};
use crate::space::MetricMeasureSpace;

/// A coefficient value, finite or unbounded.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExpansionValue<T> {
    Finite(T),
    Unbounded,
}

impl<T: Copy> ExpansionValue<T> {
    pub fn finite(&self) -> Option<T> {
        match self {
            ExpansionValue::Finite(v) => Some(*v),
            ExpansionValue::Unbounded => None,
        }
    }

    pub fn is_unbounded(&self) -> bool {
        matches!(self, ExpansionValue::Unbounded)
    }
}

/// An expansion coefficient with the subset attaining the binding ratio.
#[derive(Clone, Debug)]
pub struct ExpansionResult<T> {
    pub value: ExpansionValue<T>,
    /// Attains the minimal ratio; `None` iff the value is unbounded.
    pub witness: Option<SubsetMask>,
    pub epsilon: T,
    pub rho: T,
}

fn check_eps_rho<T: Real>(eps: T, rho: T) -> Result<()> {
    if eps <= T::zero() || eps >= T::one() {
        return Err(Error::InvalidParameter("epsilon must lie in (0,1)".into()));
    }
    if rho <= T::zero() {
        return Err(Error::InvalidParameter("rho must be positive".into()));
    }
    Ok(())
}

/// Gromov's expansion coefficient. Always finite and ≥ 1 (`X` itself
/// qualifies, and `A ⊆ A_ρ`); the minimum runs over inclusion-minimal
/// qualifying sets because enlargement mass is monotone under inclusion.
pub fn exp_gromov<T: Real>(
    space: &MetricMeasureSpace<T>,
    eps: T,
    rho: T,
    limit: usize,
) -> Result<ExpansionResult<T>> {
    check_eps_rho(eps, rho)?;
    let n = space.n();
    let mut min_enlarged = T::infinity();
    let mut witness = 0u32;
    for_each_minimal_qualifying(space, eps, limit, &mut |mask, _, dmin| {
        let mut enlarged = T::zero();
        for (x, d) in dmin.iter().enumerate() {
            if *d <= rho {
                enlarged += space.weight(x);
            }
        }
        if enlarged < min_enlarged {
            min_enlarged = enlarged;
            witness = mask;
        }
    })?;
    debug_assert!(min_enlarged.is_finite());
    Ok(ExpansionResult {
        value: ExpansionValue::Finite(min_enlarged / eps),
        witness: Some(SubsetMask::from_u32(n, witness)),
        epsilon: eps,
        rho,
    })
}

/// Ledoux's expansion coefficient; [`ExpansionValue::Unbounded`] when no
/// nonempty `B` keeps `μ(B_ρ) ≤ ε`.
pub fn exp_ledoux<T: Real>(
    space: &MetricMeasureSpace<T>,
    eps: T,
    rho: T,
    limit: usize,
) -> Result<ExpansionResult<T>> {
    check_eps_rho(eps, rho)?;
    let n = space.n();
    let mut best = T::infinity();
    let mut witness: Option<u32> = None;
    for_each_small_enlargement(space, eps, rho, limit, &mut |mask, mass, enlarged| {
        let ratio = enlarged / mass;
        if ratio < best {
            best = ratio;
            witness = Some(mask);
        }
    })?;
    Ok(match witness {
        Some(mask) => ExpansionResult {
            value: ExpansionValue::Finite(best),
            witness: Some(SubsetMask::from_u32(n, mask)),
            epsilon: eps,
            rho,
        },
        None => ExpansionResult { value: ExpansionValue::Unbounded, witness: None, epsilon: eps, rho },
    })
}

/// Outcome of [`iterated_ledoux_check`].
#[derive(Clone, Debug)]
pub struct IteratedLedouxReport<T> {
    /// Coefficient used as the base of the power.
    pub value: T,
    /// `min over (k, B) of μ(B_{kρ}) − value^k·μ(B)`.
    pub worst_slack: T,
    /// `(k, B)` attaining the worst slack.
    pub worst_case: Option<(u32, SubsetMask)>,
    pub pass: bool,
}

/// Checks the iterated growth `value^k·μ(B) ≤ μ(B_{kρ})` for `k = 1..=kmax`
/// and every nonempty `B` with `μ(B_{kρ}) ≤ ε`.
pub fn iterated_ledoux_check<T: Real>(
    space: &MetricMeasureSpace<T>,
    eps: T,
    rho: T,
    kmax: u32,
    limit: usize,
) -> Result<IteratedLedouxReport<T>> {
    let coefficient = exp_ledoux(space, eps, rho, limit)?;
    let value = match coefficient.value {
        ExpansionValue::Finite(v) => v,
        ExpansionValue::Unbounded => {
            return Err(Error::HypothesisViolated(
                "iterated check needs a finite Ledoux coefficient".into(),
            ))
        }
    };
    let n = space.n();
    let mut worst_slack = T::infinity();
    let mut worst_case: Option<(u32, SubsetMask)> = None;
    for k in 1..=kmax {
        let radius = rho * c::<T>(k as f64);
        let mut power = T::one();
        for _ in 0..k {
            power = power * value;
        }
        for_each_small_enlargement(space, eps, radius, limit, &mut |mask, mass, enlarged| {
            let slack = enlarged - power * mass;
            if slack < worst_slack {
                worst_slack = slack;
                worst_case = Some((k, SubsetMask::from_u32(n, mask)));
            }
        })?;
    }
    let pass = worst_slack.is_infinite() || worst_slack >= -c::<T>(crate::tol::CHECK_SLACK);
    Ok(IteratedLedouxReport { value, worst_slack, worst_case, pass })
}

/// Monotonicity of Gromov's coefficient under Lipschitz maps:
/// `Exp_G(X; ε, ρ/‖f‖) ≤ Exp_G(Y; ε, ρ)` where `Y` is the pushforward image
/// of `X` under `f`.
pub fn gromov_monotonicity_check<T: Real>(
    space: &MetricMeasureSpace<T>,
    f: &LipschitzFunction<T>,
    eps: T,
    rho: T,
    limit: usize,
) -> Result<bool> {
    if f.lip() <= T::zero() {
        return Err(Error::InvalidParameter(
            "monotonicity check needs a nonconstant observable".into(),
        ));
    }
    let image = crate::lipschitz::pushforward_space(space, f)?;
    let lhs = exp_gromov(space, eps, rho / f.lip(), limit)?;
    let rhs = exp_gromov(&image, eps, rho, limit)?;
    let (lhs, rhs) = (
        lhs.value.finite().expect("Gromov coefficient is always finite"),
        rhs.value.finite().expect("Gromov coefficient is always finite"),
    );
    Ok(lhs <= rhs + mass_slack::<T>())
}

/// Outcome of [`ledoux_doubling_bound_check`].
#[derive(Clone, Debug)]
pub struct LedouxDoublingReport<T> {
    /// `μ(B(x, 2ρ)) ≤ ε` held at every point.
    pub hypothesis_met: bool,
    pub exp_ledoux: Option<ExpansionValue<T>>,
    pub doubling_constant: T,
    /// Vacuously true when the hypothesis fails (flagged by
    /// `hypothesis_met = false`).
    pub pass: bool,
}

/// When every double ball stays small (`μ(B(x, 2ρ)) ≤ ε` for all `x`), the
/// balls `B(x, ρ)` qualify for Ledoux's coefficient and force
/// `Exp_Ledoux(X; ε, ρ) ≤ C`, the doubling constant.
pub fn ledoux_doubling_bound_check<T: Real>(
    space: &MetricMeasureSpace<T>,
    eps: T,
    rho: T,
    limit: usize,
) -> Result<LedouxDoublingReport<T>> {
    check_eps_rho(eps, rho)?;
    let two = c::<T>(2.0);
    let slack = mass_slack::<T>();
    let hypothesis_met =
        (0..space.n()).all(|x| ball_mass(space, x, two * rho) <= eps + slack);
    let doubling = doubling_constant(space).constant;
    if !hypothesis_met {
        return Ok(LedouxDoublingReport {
            hypothesis_met,
            exp_ledoux: None,
            doubling_constant: doubling,
            pass: true,
        });
    }
    let coefficient = exp_ledoux(space, eps, rho, limit)?;
    let pass = match coefficient.value {
        ExpansionValue::Finite(v) => v <= doubling + slack,
        // Cannot happen under the hypothesis: B(x, ρ) qualifies.
        ExpansionValue::Unbounded => false,
    };
    Ok(LedouxDoublingReport {
        hypothesis_met,
        exp_ledoux: Some(coefficient.value),
        doubling_constant: doubling,
        pass,
    })
}

/// One observable's row in the Poincaré diagnostic.
#[derive(Clone, Debug)]
pub struct PoincareRow<T> {
    pub variance: T,
    pub gradient_energy: T,
    pub holds: bool,
}

/// Outcome of [`discrete_poincare_diagnostic`].
#[derive(Clone, Debug)]
pub struct PoincareReport<T> {
    pub constant: T,
    pub rows: Vec<PoincareRow<T>>,
    pub all_hold: bool,
}

/// Diagnostic only, never an acceptance gate: tests
/// `Var_μ(f) ≤ C·∫|∇f|² dμ` for a battery of observables, with the
/// gradient length surrogate `|∇f|(x) = max over nearest neighbours y of
/// |f(x)−f(y)| / d(x,y)` (the limsup in the continuum definition has no
/// canonical finite analog).
pub fn discrete_poincare_diagnostic<T: Real>(
    space: &MetricMeasureSpace<T>,
    constant: T,
    seed: u64,
) -> Result<PoincareReport<T>> {
    if constant <= T::zero() {
        return Err(Error::InvalidParameter("Poincare constant must be positive".into()));
    }
    let battery = diagnostic_battery(space, seed);
    let rows: Vec<PoincareRow<T>> = battery
        .iter()
        .map(|f| {
            let variance = variance(space, f);
            let gradient_energy = gradient_energy(space, f);
            let holds = variance <= constant * gradient_energy + mass_slack::<T>();
            PoincareRow { variance, gradient_energy, holds }
        })
        .collect();
    let all_hold = rows.iter().all(|row| row.holds);
    Ok(PoincareReport { constant, rows, all_hold })
}

/// `Var_μ(f) = ∫f² dμ − (∫f dμ)²`.
pub fn variance<T: Real>(space: &MetricMeasureSpace<T>, f: &LipschitzFunction<T>) -> T {
    let mean = f.mean(space);
    let second: T =
        f.values().iter().enumerate().map(|(i, v)| space.weight(i) * *v * *v).sum();
    second - mean * mean
}

/// `∫ |∇f|² dμ` with the nearest-neighbour gradient surrogate.
pub fn gradient_energy<T: Real>(space: &MetricMeasureSpace<T>, f: &LipschitzFunction<T>) -> T {
    let n = space.n();
    if n == 1 {
        return T::zero();
    }
    let mut total = T::zero();
    for x in 0..n {
        let row = space.dist_row(x);
        let nearest = (0..n)
            .filter(|&y| y != x)
            .map(|y| row[y])
            .fold(T::infinity(), |acc, d| acc.min(d));
        let mut grad = T::zero();
        for (y, d) in row.iter().enumerate() {
            if y != x && *d <= nearest + mass_slack::<T>() {
                grad = grad.max((f.value(x) - f.value(y)).abs() / *d);
            }
        }
        total += space.weight(x) * grad * grad;
    }
    total
}

fn diagnostic_battery<T: Real>(
    space: &MetricMeasureSpace<T>,
    seed: u64,
) -> Vec<LipschitzFunction<T>> {
    use rand::{Rng, SeedableRng};
    let n = space.n();
    let mut battery: Vec<LipschitzFunction<T>> = (0..n)
        .map(|x| {
            LipschitzFunction::new(space, space.dist_row(x).to_vec())
                .expect("distance rows are finite")
        })
        .collect();
    let diam = crate::scalar::as_f64(space.diameter()).max(1.0);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..4 {
        let values: Vec<T> = (0..n).map(|_| c::<T>(rng.random_range(-diam..diam))).collect();
        let raw = LipschitzFunction::new(space, values).expect("finite draws");
        battery.push(crate::lipschitz::shrink_to_lipschitz(space, &raw, T::one()));
    }
    battery
}
