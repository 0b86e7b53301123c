//! Isoperimetric enlargements, metric balls, and the doubling constant.
//!
//! The enlargement of order `r` of a set `A` is
//! `A_r = { x : d(x, A) ≤ r }` — the closed condition, so `A_0 = A` and
//! `x ∈ B(x, 0)`. Ball masses are step functions of the radius that change
//! exactly at the pairwise distances, which is why every supremum over radii
//! below is an exact finite scan over breakpoints.

use crate::error::{Error, Result};
use crate::mask::SubsetMask;
use crate::scalar::{as_f64, Real};
use crate::space::MetricMeasureSpace;

/// `A_r = { x : min_{a∈A} d(x,a) ≤ r }`. Contains `A`; monotone in both `r`
/// and `A`.
pub fn enlarge<T: Real>(
    space: &MetricMeasureSpace<T>,
    set: &SubsetMask,
    r: T,
) -> Result<SubsetMask> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    if r < T::zero() {
        return Err(Error::InvalidParameter("enlargement radius must be >= 0".into()));
    }
    let n = space.n();
    debug_assert_eq!(set.len(), n);
    let mut out = SubsetMask::empty(n);
    for x in 0..n {
        let row = space.dist_row(x);
        if set.iter_ones().any(|a| row[a] <= r) {
            out.insert(x);
        }
    }
    Ok(out)
}

/// Closed metric ball `B(x, r)`, an enlargement of the singleton `{x}`.
pub fn ball<T: Real>(space: &MetricMeasureSpace<T>, x: usize, r: T) -> Result<SubsetMask> {
    enlarge(space, &SubsetMask::singleton(space.n(), x), r)
}

/// μ(B(x, r)) without materializing the mask.
pub fn ball_mass<T: Real>(space: &MetricMeasureSpace<T>, x: usize, r: T) -> T {
    let row = space.dist_row(x);
    let mut total = T::zero();
    for (y, d) in row.iter().enumerate() {
        if *d <= r {
            total += space.weight(y);
        }
    }
    total
}

/// `(x, y, r1, r2)` pinpointing where the two-radius characterization is
/// tightest (or violated).
pub type CharacterizationWitness<T> = (usize, usize, T, T);

/// Result of the doubling-constant scan.
#[derive(Clone, Debug)]
pub struct DoublingReport<T> {
    /// `C = sup_{x, r>0} μ(B(x,2r)) / μ(B(x,r))`, always ≥ 1.
    pub constant: T,
    /// `(x, r)` attaining the supremum; `None` only for a single point,
    /// where every ratio is 1.
    pub witness: Option<(usize, T)>,
    /// Whether the two-radius characterization holds with `C` itself.
    pub characterization_ok: bool,
    /// Minimizes the characterization slack.
    pub worst_quadruple: Option<CharacterizationWitness<T>>,
}

/// Radii at which ball masses (at `r` and `2r`) can change: the pairwise
/// distances and their halves.
fn doubling_breakpoints<T: Real>(space: &MetricMeasureSpace<T>) -> Vec<T> {
    let half = T::from_f64(0.5).unwrap();
    let mut radii: Vec<T> = Vec::new();
    for d in space.distance_values() {
        radii.push(d);
        radii.push(d * half);
    }
    radii.sort_by(|a, b| a.partial_cmp(b).expect("finite radii"));
    radii.dedup_by(|a, b| *a == *b);
    radii
}

/// Exact doubling constant of the space.
///
/// Both ball masses are piecewise constant in `r` with breakpoints in
/// `D ∪ D/2` (`D` the pairwise distances), so scanning those radii evaluates
/// the supremum over all `r > 0` exactly.
pub fn doubling_constant<T: Real>(space: &MetricMeasureSpace<T>) -> DoublingReport<T> {
    let radii = doubling_breakpoints(space);
    let mut constant = T::one();
    let mut witness: Option<(usize, T)> = None;
    let two = T::from_f64(2.0).unwrap();
    for x in 0..space.n() {
        for &r in &radii {
            let small = ball_mass(space, x, r);
            let big = ball_mass(space, x, two * r);
            let ratio = big / small;
            if ratio > constant {
                constant = ratio;
                witness = Some((x, r));
            }
        }
    }
    let (characterization_ok, worst_quadruple) = characterization_scan(space, constant);
    DoublingReport { constant, witness, characterization_ok, worst_quadruple }
}

/// Checks `μ(B(y,r₂)) / μ(B(x,r₁)) ≤ C²·(r₂/r₁)^{ln C / ln 2}` over all
/// breakpoint pairs `0 < r₁ ≤ r₂` and all `x ∈ B(y, r₂)`.
///
/// Returns the verdict and the quadruple minimizing `rhs − lhs`.
pub fn check_doubling_characterization<T: Real>(
    space: &MetricMeasureSpace<T>,
    constant: T,
) -> Result<(bool, Option<CharacterizationWitness<T>>)> {
    if constant < T::one() {
        return Err(Error::InvalidParameter(format!(
            "doubling constant must be >= 1, got {}",
            as_f64(constant)
        )));
    }
    Ok(characterization_scan(space, constant))
}

fn characterization_scan<T: Real>(
    space: &MetricMeasureSpace<T>,
    constant: T,
) -> (bool, Option<CharacterizationWitness<T>>) {
    let radii = doubling_breakpoints(space);
    let exponent = constant.ln() / T::from_f64(2.0f64.ln()).unwrap();
    let c_squared = constant * constant;
    let slack_tol = T::triangle_tol();

    let mut ok = true;
    let mut worst_slack = T::infinity();
    let mut worst: Option<CharacterizationWitness<T>> = None;
    for (i1, &r1) in radii.iter().enumerate() {
        for &r2 in &radii[i1..] {
            let rhs = c_squared * (r2 / r1).powf(exponent);
            for y in 0..space.n() {
                let big = ball_mass(space, y, r2);
                for x in 0..space.n() {
                    if space.dist(y, x) > r2 {
                        continue;
                    }
                    let lhs = big / ball_mass(space, x, r1);
                    let slack = rhs - lhs;
                    if slack < worst_slack {
                        worst_slack = slack;
                        worst = Some((x, y, r1, r2));
                    }
                    if slack < -slack_tol {
                        ok = false;
                    }
                }
            }
        }
    }
    (ok, worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{generate, SpaceKind, DEFAULT_MAX_POINTS};

    fn two_point() -> MetricMeasureSpace<f64> {
        MetricMeasureSpace::new(vec![vec![0.0, 1.0], vec![1.0, 0.0]], vec![0.5, 0.5]).unwrap()
    }

    fn cycle(n: usize) -> MetricMeasureSpace<f64> {
        generate(&SpaceKind::Cycle { n }, DEFAULT_MAX_POINTS).unwrap()
    }

    #[test]
    fn enlarge_two_point() {
        let space = two_point();
        let a = SubsetMask::singleton(2, 0);
        assert_eq!(enlarge(&space, &a, 0.5).unwrap(), a);
        assert_eq!(enlarge(&space, &a, 1.0).unwrap(), SubsetMask::full(2));
    }

    #[test]
    fn enlarge_path_by_one() {
        let space: MetricMeasureSpace<f64> =
            generate(&SpaceKind::Path { n: 3 }, DEFAULT_MAX_POINTS).unwrap();
        let a = SubsetMask::singleton(3, 0);
        assert_eq!(enlarge(&space, &a, 1.0).unwrap(), SubsetMask::from_indices(3, &[0, 1]));
    }

    #[test]
    fn enlarge_rejects_empty_set() {
        let space = two_point();
        assert_eq!(enlarge(&space, &SubsetMask::empty(2), 1.0).unwrap_err().kind(), "EmptySet");
    }

    #[test]
    fn ball_on_cycle_six() {
        let space = cycle(6);
        assert_eq!(ball(&space, 0, 1.0).unwrap(), SubsetMask::from_indices(6, &[5, 0, 1]));
        assert_eq!(ball(&space, 2, 0.0).unwrap(), SubsetMask::singleton(6, 2));
        assert_eq!(ball(&space, 0, 3.0).unwrap(), SubsetMask::full(6));
    }

    #[test]
    fn doubling_two_point_is_two() {
        let report = doubling_constant(&two_point());
        assert_eq!(report.constant, 2.0);
        let (_, r) = report.witness.unwrap();
        assert_eq!(r, 0.5);
        assert!(report.characterization_ok);
    }

    #[test]
    fn doubling_single_point_is_one() {
        let space = MetricMeasureSpace::<f64>::new(vec![vec![0.0]], vec![1.0]).unwrap();
        let report = doubling_constant(&space);
        assert_eq!(report.constant, 1.0);
        assert!(report.witness.is_none());
        assert!(report.characterization_ok);
    }

    /// Independent oracle: dense radius grid instead of the breakpoint scan.
    fn doubling_oracle(space: &MetricMeasureSpace<f64>) -> f64 {
        let diam = space.diameter();
        let mut best = 1.0f64;
        let steps = 4000;
        for x in 0..space.n() {
            for s in 1..=steps {
                let r = diam * (s as f64) / (steps as f64);
                let ratio = ball_mass(space, x, 2.0 * r) / ball_mass(space, x, r);
                best = best.max(ratio);
            }
        }
        best
    }

    #[test]
    fn doubling_cycle_six_matches_dense_oracle() {
        let space = cycle(6);
        let report = doubling_constant(&space);
        assert_eq!(report.constant, 3.0);
        assert_eq!(report.constant, doubling_oracle(&space));
        // Witness reproduces the constant.
        let (x, r) = report.witness.unwrap();
        assert_eq!(ball_mass(&space, x, 2.0 * r) / ball_mass(&space, x, r), report.constant);
    }

    #[test]
    fn doubling_random_spaces_match_dense_oracle() {
        for seed in 0..5 {
            let space = crate::space::random_space(6, seed).unwrap();
            let report = doubling_constant(&space);
            let oracle = doubling_oracle(&space);
            assert!(
                (report.constant - oracle).abs() < 1e-12,
                "seed {seed}: scan {} vs oracle {oracle}",
                report.constant
            );
        }
    }

    #[test]
    fn characterization_true_with_own_constant() {
        for space in [two_point(), cycle(6), cycle(5)] {
            let report = doubling_constant(&space);
            let (ok, _) = check_doubling_characterization(&space, report.constant).unwrap();
            assert!(ok);
        }
    }

    #[test]
    fn characterization_false_with_understated_constant() {
        let space = two_point();
        let (ok, worst) = check_doubling_characterization(&space, 1.0).unwrap();
        assert!(!ok);
        // The reported quadruple is a genuine violation.
        let (x, y, r1, r2) = worst.unwrap();
        let lhs = ball_mass(&space, y, r2) / ball_mass(&space, x, r1);
        let rhs = 1.0f64 * (r2 / r1).powf(0.0);
        assert!(lhs > rhs, "lhs {lhs} must exceed rhs {rhs}");
    }

    #[test]
    fn enlargement_properties_on_cycle() {
        let space = cycle(6);
        let diam = space.diameter();
        for mask_bits in 1u32..64 {
            let a = SubsetMask::from_u32(6, mask_bits);
            // r = 0 is the identity (closed balls, zero self-distance).
            assert_eq!(enlarge(&space, &a, 0.0).unwrap(), a);
            // Enlarging to the diameter covers the space.
            assert_eq!(enlarge(&space, &a, diam).unwrap(), SubsetMask::full(6));
            // Monotone in r and in the set.
            let by_one = enlarge(&space, &a, 1.0).unwrap();
            assert!(a.is_subset_of(&by_one));
            for superset_bits in (mask_bits + 1)..64 {
                if mask_bits & superset_bits == mask_bits {
                    let b = SubsetMask::from_u32(6, superset_bits);
                    assert!(by_one.is_subset_of(&enlarge(&space, &b, 1.0).unwrap()));
                }
            }
            // Composition is dominated by the single enlargement.
            let step = enlarge(&space, &by_one, 1.0).unwrap();
            let direct = enlarge(&space, &a, 2.0).unwrap();
            assert!(step.is_subset_of(&direct));
        }
    }

    #[test]
    fn pointwise_doubling_inequality_holds() {
        for seed in [1, 9] {
            let space = crate::space::random_space(7, seed).unwrap();
            let c = doubling_constant(&space).constant;
            for x in 0..space.n() {
                for d in space.distance_values() {
                    for r in [d / 2.0, d] {
                        let lhs = ball_mass(&space, x, 2.0 * r);
                        let rhs = c * ball_mass(&space, x, r);
                        assert!(lhs <= rhs + 1e-12);
                    }
                }
            }
        }
    }
}
