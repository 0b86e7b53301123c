//! Closed-form right-hand sides for the inequalities the check suite
//! verifies, plus the Riemannian demo formulas.
//!
//! Every evaluator validates its hypotheses and fails with
//! [`Error::HypothesisViolated`] rather than returning a number the theorem
//! does not cover. The checkers in [`crate::verify`] document in which
//! direction a lower/upper *estimate* may be substituted for an exact
//! quantity without invalidating the comparison.

use crate::error::{Error, Result};
use crate::lipschitz::{laplace_lower, LaplaceEstimate};
use crate::scalar::{c, Real};
use crate::space::MetricMeasureSpace;

fn require(ok: bool, message: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::HypothesisViolated(message.into()))
    }
}

/// Exponential-concentration bound from Ledoux's coefficient alone:
/// `α^ε(r) ≤ (1−ε)·E^{1−r/ρ}` with `E = Exp_Ledoux(X; 1−ε, ρ)`.
pub fn rhs_concentration_ledoux<T: Real>(eps: T, exp_l: T, rho: T, r: T) -> Result<T> {
    require(eps > T::zero() && eps < T::one(), "epsilon must lie in (0,1)")?;
    require(exp_l > T::one(), "Ledoux coefficient must exceed 1")?;
    require(rho > T::zero() && rho <= r, "need 0 < rho <= r")?;
    Ok((T::one() - eps) * exp_l.powf(T::one() - r / rho))
}

/// Exponential-concentration bound using both coefficients:
/// `α^ε(r) ≤ (1−ε)·G·E^{2−r/ρ}` with `G = Exp_Gromov(X; ε, ρ)` and
/// `E = Exp_Ledoux(X; 1−ε, ρ)`.
pub fn rhs_concentration_gromov_ledoux<T: Real>(
    eps: T,
    exp_g: T,
    exp_l: T,
    rho: T,
    r: T,
) -> Result<T> {
    require(eps > T::zero() && eps < T::one(), "epsilon must lie in (0,1)")?;
    require(exp_g >= T::one(), "Gromov coefficient is always >= 1")?;
    require(exp_l > T::one(), "Ledoux coefficient must exceed 1")?;
    require(rho > T::zero() && rho <= r, "need 0 < rho <= r")?;
    Ok((T::one() - eps) * exp_g * exp_l.powf(c::<T>(2.0) - r / rho))
}

/// Lower bound on Gromov's coefficient from the observable diameter:
/// `Exp_G(X; ε, ρ) ≥ κ·exp(D·ln E / 2ρ) / (2(1−ε)E²)`.
///
/// Nondecreasing in `D`, so substituting a lower estimate of the observable
/// diameter keeps the comparison valid.
pub fn gromov_answer_lower<T: Real>(kappa: T, eps: T, rho: T, exp_l: T, obsdiam: T) -> Result<T> {
    require(kappa > T::zero() && kappa < T::one(), "kappa must lie in (0,1)")?;
    require(eps > T::zero() && eps <= c::<T>(0.5), "epsilon must lie in (0, 1/2]")?;
    require(exp_l > T::one(), "Ledoux coefficient must exceed 1")?;
    require(rho > T::zero(), "rho must be positive")?;
    require(obsdiam >= T::zero(), "observable diameter is nonnegative")?;
    let two = c::<T>(2.0);
    let numerator = kappa * (obsdiam * exp_l.ln() / (two * rho)).exp();
    Ok(numerator / (two * (T::one() - eps) * exp_l * exp_l))
}

/// Hypothesis of the upper bound on Gromov's coefficient:
/// `2(1 − G·ε)·E ≥ κ`, evaluated with the exact `G`.
pub fn gromov_upper_hypothesis<T: Real>(exp_g: T, eps: T, exp_l: T, kappa: T) -> bool {
    c::<T>(2.0) * (T::one() - exp_g * eps) * exp_l >= kappa
}

/// Upper bound on Gromov's coefficient:
/// `Exp_G(X; ε, ρ) ≤ (2 − κ·exp((D − 4ρ)·ln E / 2ρ)) / 2ε`.
///
/// Nonincreasing in `D`, so substituting a lower estimate of the observable
/// diameter keeps the comparison valid.
pub fn gromov_upper<T: Real>(kappa: T, eps: T, rho: T, exp_l: T, obsdiam: T) -> Result<T> {
    require(kappa > T::zero() && kappa < T::one(), "kappa must lie in (0,1)")?;
    require(eps > T::zero() && eps <= c::<T>(0.5), "epsilon must lie in (0, 1/2]")?;
    require(exp_l > T::one(), "Ledoux coefficient must exceed 1")?;
    require(rho > T::zero(), "rho must be positive")?;
    require(obsdiam >= T::zero(), "observable diameter is nonnegative")?;
    let two = c::<T>(2.0);
    let shifted = (obsdiam - c::<T>(4.0) * rho) * exp_l.ln() / (two * rho);
    Ok((two - kappa * shifted.exp()) / (two * eps))
}

/// Upper bound on the observable diameter from Ledoux's coefficient:
/// `ObsDiam(X; −κ) ≤ (2ρ/ln E)·ln( 2E²(1−ε) / ((1+E²)·ε·κ) )`.
pub fn obsdiam_upper_by_ledoux<T: Real>(kappa: T, eps: T, rho: T, exp_l: T) -> Result<T> {
    require(kappa > T::zero() && kappa < T::one(), "kappa must lie in (0,1)")?;
    require(eps > T::zero() && eps < T::one(), "epsilon must lie in (0,1)")?;
    require(exp_l > T::one(), "Ledoux coefficient must exceed 1")?;
    require(rho > T::zero(), "rho must be positive")?;
    let two = c::<T>(2.0);
    let argument = two * exp_l * exp_l * (T::one() - eps)
        / ((T::one() + exp_l * exp_l) * eps * kappa);
    if argument <= T::zero() {
        return Err(Error::NotInformative("log argument is nonpositive".into()));
    }
    Ok(two * rho / exp_l.ln() * argument.ln())
}

/// The two branches and the final diameter upper bound.
#[derive(Clone, Copy, Debug)]
pub struct DiameterUpper<T> {
    /// From sets of mass ≥ ε around a diameter-attaining point.
    pub branch_enlargement: T,
    /// From the complement case, carrying the `τ^{−ln C/ln 2}` factor.
    pub branch_complement: T,
    pub bound: T,
}

/// Diameter upper bound from the doubling constant and Ledoux's
/// coefficients on both sides of `ε`:
///
/// ```text
/// diam(X) ≤ max{ ρ·ln(C⁴(1−ε)ε⁻¹·E₁₋ε) / (τ·ln E₁₋ε),
///                2ρ·ln(C³·τ^{−ln C/ln 2}·ε·E_ε) / (τ·ln E_ε) }
/// ```
///
/// `τ` defaults to 1/3 ([`DEFAULT_TAU`]), the value the derivation pins;
/// other values evaluate the formula but carry no guarantee.
pub fn diameter_upper<T: Real>(
    doubling: T,
    eps: T,
    rho: T,
    exp_l_eps: T,
    exp_l_comp: T,
    tau: T,
) -> Result<DiameterUpper<T>> {
    require(doubling >= T::one(), "doubling constant is >= 1")?;
    require(eps > T::zero() && eps <= c::<T>(0.5), "epsilon must lie in (0, 1/2]")?;
    require(rho > T::zero(), "rho must be positive")?;
    require(
        exp_l_eps > T::one() && exp_l_comp > T::one(),
        "both Ledoux coefficients must exceed 1",
    )?;
    require(tau > T::zero() && tau <= c::<T>(1.0 / 3.0), "tau must lie in (0, 1/3]")?;
    let ln2 = c::<T>(std::f64::consts::LN_2);
    let c4 = doubling.powi(4);
    let c3 = doubling.powi(3);
    let tau_power = tau.powf(-(doubling.ln() / ln2));
    let branch_enlargement =
        rho * (c4 * (T::one() - eps) / eps * exp_l_comp).ln() / (tau * exp_l_comp.ln());
    let branch_complement =
        c::<T>(2.0) * rho * (c3 * tau_power * eps * exp_l_eps).ln() / (tau * exp_l_eps.ln());
    Ok(DiameterUpper {
        branch_enlargement,
        branch_complement,
        bound: branch_enlargement.max(branch_complement),
    })
}

/// The τ value for which [`diameter_upper`] is a theorem.
pub const DEFAULT_TAU: f64 = 1.0 / 3.0;

/// Diameter lower bound through the Laplace functional:
/// `diam(X) ≥ (1/λ)·min{ ln L, √(2 ln L) }` with `L` a certified lower
/// estimate of `Lap(λ)` — valid because `ln` is increasing.
pub fn diameter_lower<T: Real>(
    space: &MetricMeasureSpace<T>,
    lambda: T,
    budget: usize,
    seed: u64,
) -> Result<(T, LaplaceEstimate<T>)> {
    let estimate = laplace_lower(space, lambda, budget, seed)?;
    let log = estimate.lower.ln().max(T::zero());
    let bound = (log.min((c::<T>(2.0) * log).sqrt())) / lambda;
    Ok((bound, estimate))
}

/// Riemannian and envelope demo formulas. Pure arithmetic for reports and
/// documentation; nothing here is asserted against sampled spaces (the
/// `2^n` doubling input is a continuum fact).
pub mod riemannian {
    /// Gaussian envelope amplitude for spheres: `C₁ = √(π/8)`.
    pub fn sphere_gaussian_c1() -> f64 {
        (std::f64::consts::PI / 8.0).sqrt()
    }

    /// Gaussian envelope rate for `S^n(δ)`: `C₂ = (n−1)/2δ²`.
    pub fn sphere_gaussian_c2(dim: usize, radius: f64) -> f64 {
        (dim as f64 - 1.0) / (2.0 * radius * radius)
    }

    /// `ObsDiam ≤ (2/C₂)·ln(2C₁/κ)` under exponential concentration
    /// (clamped at 0).
    pub fn obsdiam_from_exponential(c1: f64, c2: f64, kappa: f64) -> f64 {
        (2.0 / c2 * (2.0 * c1 / kappa).ln()).max(0.0)
    }

    /// `ObsDiam ≤ 2·√((1/C₂)·ln(2C₁/κ))` under Gaussian concentration
    /// (clamped at 0).
    pub fn obsdiam_from_gaussian(c1: f64, c2: f64, kappa: f64) -> f64 {
        2.0 * ((1.0 / c2 * (2.0 * c1 / kappa).ln()).max(0.0)).sqrt()
    }

    /// Lévy: `ObsDiam(S^n(δ); −κ) ≤ 2δ·√((2/(n−1))·ln(√(π/2)/κ))`.
    pub fn obsdiam_sphere(dim: usize, radius: f64, kappa: f64) -> f64 {
        2.0 * radius
            * ((2.0 / (dim as f64 - 1.0)) * ((std::f64::consts::PI / 2.0).sqrt() / kappa).ln())
                .sqrt()
    }

    /// Gromov–Milman: `ObsDiam(M; −κ) ≤ 2·ln(3/2κ) / (ln(3/2)·√λ₁)`.
    pub fn obsdiam_spectral(lambda1: f64, kappa: f64) -> f64 {
        2.0 * (3.0 / (2.0 * kappa)).ln() / ((1.5f64).ln() * lambda1.sqrt())
    }

    /// Lower bound on Gromov's coefficient of an `n`-manifold with
    /// nonnegative Ricci curvature:
    /// `Exp_G ≥ κ·exp(D·ln(1+λ₁ερ²)/2ρ) / (2^{2n+1}(1−ε))`.
    pub fn gromov_lower(
        dim: usize,
        lambda1: f64,
        eps: f64,
        rho: f64,
        kappa: f64,
        obsdiam: f64,
    ) -> f64 {
        let base = 1.0 + lambda1 * eps * rho * rho;
        kappa * (obsdiam * base.ln() / (2.0 * rho)).exp()
            / (2f64.powi(2 * dim as i32 + 1) * (1.0 - eps))
    }

    /// Diameter estimate for the same class:
    /// `diam ≤ 3ρ·max{ ln(2^{5n}(1−ε)ε⁻¹)/ln(1+λ₁ερ²),
    ///                 2·ln(2^{4n}·3^n·ε)/ln(1+λ₁(1−ε)ρ²) }`.
    pub fn diameter_upper(dim: usize, lambda1: f64, eps: f64, rho: f64) -> f64 {
        let n = dim as i32;
        let first =
            (2f64.powi(5 * n) * (1.0 - eps) / eps).ln() / (1.0 + lambda1 * eps * rho * rho).ln();
        let second = 2.0 * (2f64.powi(4 * n) * 3f64.powi(n) * eps).ln()
            / (1.0 + lambda1 * (1.0 - eps) * rho * rho).ln();
        3.0 * rho * first.max(second)
    }

    /// Observable-diameter estimate for the same class.
    pub fn obsdiam_upper(dim: usize, lambda1: f64, eps: f64, rho: f64, kappa: f64) -> f64 {
        let e = 1.0 + lambda1 * eps * rho * rho;
        let first =
            (2f64.powi(2 * dim as i32 + 1) * (1.0 - eps) / ((1.0 + e * e) * eps * kappa)).ln();
        let second = (2.0 * (1.0 - eps) / (eps * kappa)).ln();
        2.0 * rho / e.ln() * first.min(second)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ledoux_rhs_worked_values() {
        let v: f64 = rhs_concentration_ledoux(0.5, 3.0, 1.0, 2.0).unwrap();
        assert!((v - 1.0 / 6.0).abs() < 1e-15);
        let v: f64 = rhs_concentration_ledoux(0.3, 2.0, 1.0, 1.0).unwrap();
        assert!((v - 0.7).abs() < 1e-15);
        let v: f64 = rhs_concentration_ledoux(0.5, 3.0, 1.0, 3.0).unwrap();
        assert!((v - 1.0 / 18.0).abs() < 1e-15);
        assert_eq!(
            rhs_concentration_ledoux(0.5, 1.0f64, 1.0, 2.0).unwrap_err().kind(),
            "HypothesisViolated"
        );
        assert_eq!(
            rhs_concentration_ledoux(0.5, 3.0f64, 2.0, 1.0).unwrap_err().kind(),
            "HypothesisViolated"
        );
    }

    #[test]
    fn gromov_ledoux_rhs_worked_values() {
        let v: f64 = rhs_concentration_gromov_ledoux(0.5, 5.0 / 3.0, 3.0, 1.0, 2.0).unwrap();
        assert!((v - 5.0 / 6.0).abs() < 1e-15);
        let v: f64 = rhs_concentration_gromov_ledoux(0.3, 1.0, 4.0, 1.0, 2.0).unwrap();
        assert!((v - 0.7).abs() < 1e-15);
        let v: f64 = rhs_concentration_gromov_ledoux(0.5, 5.0 / 3.0, 3.0, 1.0, 4.0).unwrap();
        assert!((v - 5.0 / 54.0).abs() < 1e-15);
    }

    #[test]
    fn answer_lower_worked_values() {
        // D = 0 collapses the exponential.
        let v: f64 = gromov_answer_lower(0.5, 0.5, 1.0, 3.0, 0.0).unwrap();
        assert!((v - 0.5 / 9.0).abs() < 1e-15);
        let v: f64 = gromov_answer_lower(0.5, 0.5, 1.0, 3.0, 2.0).unwrap();
        assert!((v - 1.0 / 6.0).abs() < 1e-12);
        let v: f64 = gromov_answer_lower(0.1, 0.25, 1.0, 2.0, 4.0).unwrap();
        assert!((v - 0.4 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn gromov_upper_worked_values() {
        let v: f64 = gromov_upper(0.5, 0.5, 1.0, 3.0, 4.0).unwrap();
        assert!((v - 1.5).abs() < 1e-12); // D = 4ρ → (2 − κ)/(2ε)
        let v: f64 = gromov_upper(0.5, 0.5, 1.0, 3.0, 2.0).unwrap();
        assert!((v - 11.0 / 6.0).abs() < 1e-12);
        let v: f64 = gromov_upper(0.2, 0.25, 1.0, 2.0, 6.0).unwrap();
        assert!((v - 3.2).abs() < 1e-12);

        assert!(gromov_upper_hypothesis(5.0f64 / 3.0, 0.5, 3.0, 0.5));
        assert!(!gromov_upper_hypothesis(2.0f64, 0.5, 3.0, 0.5));
    }

    #[test]
    fn obsdiam_by_ledoux_worked_values() {
        let v: f64 = obsdiam_upper_by_ledoux(0.5, 0.5, 1.0, 3.0).unwrap();
        assert!((v - 2.0 / 3f64.ln() * 3.6f64.ln()).abs() < 1e-12);
        let v: f64 = obsdiam_upper_by_ledoux(0.1, 0.25, 0.5, 2.0).unwrap();
        assert!((v - 48f64.ln() / 2f64.ln()).abs() < 1e-12);
        // Log argument exactly 1 gives 0 (needs ε > 1/2 to be reachable).
        let v: f64 = obsdiam_upper_by_ledoux(0.2, 0.9, 1.0, 3.0).unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn diameter_upper_worked_values() {
        let result: DiameterUpper<f64> = diameter_upper(2.0, 0.5, 1.0, 3.0, 3.0, DEFAULT_TAU).unwrap();
        assert!((result.branch_enlargement - 3.0 * 48f64.ln() / 3f64.ln()).abs() < 1e-12);
        assert!((result.branch_complement - 6.0 * 36f64.ln() / 3f64.ln()).abs() < 1e-12);
        assert!((result.bound - result.branch_complement).abs() < 1e-15);

        // C = 1 collapses the doubling powers.
        let result: DiameterUpper<f64> = diameter_upper(1.0, 0.25, 2.0, 2.0, 4.0, DEFAULT_TAU).unwrap();
        let expected = 3.0 * 2.0 * (0.75 / 0.25 * 4.0f64).ln() / 4.0f64.ln();
        assert!((result.branch_enlargement - expected).abs() < 1e-12);

        // ε = 1/2 simplifies the first branch to ln(C⁴E)/ln E.
        let result: DiameterUpper<f64> = diameter_upper(2.0, 0.5, 1.0, 2.0, 2.0, DEFAULT_TAU).unwrap();
        let expected = 3.0 * (16.0 * 2.0f64).ln() / 2.0f64.ln();
        assert!((result.branch_enlargement - expected).abs() < 1e-12);
    }

    #[test]
    fn diameter_lower_examples() {
        let single = MetricMeasureSpace::<f64>::new(vec![vec![0.0]], vec![1.0]).unwrap();
        let (bound, _) = diameter_lower(&single, 1.0, 4, 0).unwrap();
        assert_eq!(bound, 0.0);

        let two = MetricMeasureSpace::new(vec![vec![0.0, 1.0], vec![1.0, 0.0]], vec![0.5, 0.5])
            .unwrap();
        let (bound, est) = diameter_lower(&two, 1.0, 8, 0).unwrap();
        let ln_l = 0.5f64.cosh().ln();
        assert!((bound - ln_l.min((2.0 * ln_l).sqrt())).abs() < 1e-12);
        assert!(bound <= 1.0);
        assert!(est.lower >= 1.0);

        let cycle: MetricMeasureSpace<f64> = crate::space::generate(
            &crate::space::SpaceKind::Cycle { n: 6 },
            crate::space::DEFAULT_MAX_POINTS,
        )
        .unwrap();
        let (bound, _) = diameter_lower(&cycle, 2.0, 8, 0).unwrap();
        assert!(bound <= 3.0 + 1e-12);
    }

    #[test]
    fn riemannian_demo_arithmetic() {
        assert!((riemannian::sphere_gaussian_c1() - 0.6266570686577501).abs() < 1e-15);
        assert!((riemannian::sphere_gaussian_c2(2, 1.0) - 0.5).abs() < 1e-15);
        // Exponential-envelope corollary at C₁ = 3/4, C₂ = ln(3/2)·√λ₁ is
        // the Gromov–Milman observable-diameter estimate.
        let lambda1 = 2.3;
        let kappa = 0.2;
        let direct = riemannian::obsdiam_spectral(lambda1, kappa);
        let via_corollary =
            riemannian::obsdiam_from_exponential(0.75, 1.5f64.ln() * lambda1.sqrt(), kappa);
        assert!((direct - via_corollary).abs() < 1e-12);

        let levy = riemannian::obsdiam_sphere(9, 1.0, 0.1);
        assert!(levy > 0.0 && levy < 3.0);
        assert!(riemannian::gromov_lower(2, 1.0, 0.5, 1.0, 0.3, 2.0) > 0.0);
        assert!(riemannian::diameter_upper(2, 1.0, 0.5, 1.0) > 0.0);
        assert!(riemannian::obsdiam_upper(2, 1.0, 0.5, 1.0, 0.1) > 0.0);
    }
}
