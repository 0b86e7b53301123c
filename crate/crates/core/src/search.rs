//! Pruned depth-first subset enumeration backing the exact quantities.
//!
//! Two searches cover everything:
//!
//! * inclusion-minimal sets `A` with `μ(A) ≥ ε` — the objectives built on
//!   `μ(A_r)` only get worse on supersets, so minimal sets suffice for the
//!   concentration function, Gromov's coefficient and the partial diameter;
//! * nonempty sets `B` with `μ(B_ρ) ≤ ε` — the enlargement mass is monotone
//!   in `B`, so a branch is abandoned the moment it overshoots `ε`.
//!
//! Both searches add points in ascending index order and maintain
//! `d(x, current set)` incrementally with an undo stack, so a visited node
//! costs `O(n)`.
//!
//! Mass comparisons against thresholds carry an absolute slack of
//! [`Real::mass_tol`]: `ε` values like `1/3` and atom masses like `4/6`
//! must hit each other despite rounding, and exact masses are separated by
//! at least the smallest point weight, far above the slack.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::space::MetricMeasureSpace;

/// Slack for `mass ≥ threshold` / `mass ≤ threshold` tests.
#[inline]
pub(crate) fn mass_slack<T: Real>() -> T {
    T::mass_tol()
}

pub(crate) fn ensure_exact<T: Real>(space: &MetricMeasureSpace<T>, limit: usize) -> Result<()> {
    let n = space.n();
    let limit = limit.min(crate::MAX_EXACT_LIMIT);
    if n > limit {
        return Err(Error::TooLargeForExact { n, limit });
    }
    Ok(())
}

/// Visits every inclusion-minimal `A` with `μ(A) ≥ ε`.
///
/// The visitor receives the mask, `μ(A)` and `d(x, A)` for every point `x`.
pub(crate) fn for_each_minimal_qualifying<T: Real>(
    space: &MetricMeasureSpace<T>,
    eps: T,
    limit: usize,
    visit: &mut dyn FnMut(u32, T, &[T]),
) -> Result<()> {
    ensure_exact(space, limit)?;
    let n = space.n();
    let slack = mass_slack::<T>();
    let mut dmin = vec![T::infinity(); n];
    let mut undo = vec![T::zero(); n * n];
    recurse_minimal(space, eps, slack, 0, 0u32, T::zero(), 0, &mut dmin, &mut undo, visit);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn recurse_minimal<T: Real>(
    space: &MetricMeasureSpace<T>,
    eps: T,
    slack: T,
    start: usize,
    mask: u32,
    mass: T,
    depth: usize,
    dmin: &mut [T],
    undo: &mut [T],
    visit: &mut dyn FnMut(u32, T, &[T]),
) {
    let n = space.n();
    if mass >= eps - slack {
        // Qualifying; minimal iff removing any single member drops below ε.
        let mut rest = mask;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            if mass - space.weight(i) >= eps - slack {
                return;
            }
            rest &= rest - 1;
        }
        visit(mask, mass, dmin);
        return;
    }
    for j in start..n {
        let row = space.dist_row(j);
        let frame = &mut undo[depth * n..(depth + 1) * n];
        frame.copy_from_slice(dmin);
        for x in 0..n {
            if row[x] < dmin[x] {
                dmin[x] = row[x];
            }
        }
        recurse_minimal(
            space,
            eps,
            slack,
            j + 1,
            mask | 1 << j,
            mass + space.weight(j),
            depth + 1,
            dmin,
            undo,
            visit,
        );
        let frame = &undo[depth * n..(depth + 1) * n];
        dmin.copy_from_slice(frame);
    }
}

/// Visits every nonempty `B` with `μ(B_ρ) ≤ ε`.
///
/// The visitor receives the mask, `μ(B)` and `μ(B_ρ)`.
pub(crate) fn for_each_small_enlargement<T: Real>(
    space: &MetricMeasureSpace<T>,
    eps: T,
    rho: T,
    limit: usize,
    visit: &mut dyn FnMut(u32, T, T),
) -> Result<()> {
    ensure_exact(space, limit)?;
    let n = space.n();
    let slack = mass_slack::<T>();
    let mut dmin = vec![T::infinity(); n];
    let mut undo = vec![T::zero(); n * n];
    recurse_small(
        space,
        eps,
        rho,
        slack,
        0,
        0u32,
        T::zero(),
        T::zero(),
        0,
        &mut dmin,
        &mut undo,
        visit,
    );
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn recurse_small<T: Real>(
    space: &MetricMeasureSpace<T>,
    eps: T,
    rho: T,
    slack: T,
    start: usize,
    mask: u32,
    mass: T,
    enlarged_mass: T,
    depth: usize,
    dmin: &mut [T],
    undo: &mut [T],
    visit: &mut dyn FnMut(u32, T, T),
) {
    let n = space.n();
    if mask != 0 {
        if enlarged_mass > eps + slack {
            // Supersets only enlarge further; prune the whole branch.
            return;
        }
        visit(mask, mass, enlarged_mass);
    }
    for j in start..n {
        let row = space.dist_row(j);
        let frame = &mut undo[depth * n..(depth + 1) * n];
        frame.copy_from_slice(dmin);
        let mut enlarged = enlarged_mass;
        for x in 0..n {
            if row[x] < dmin[x] {
                if dmin[x] > rho && row[x] <= rho {
                    enlarged += space.weight(x);
                }
                dmin[x] = row[x];
            }
        }
        recurse_small(
            space,
            eps,
            rho,
            slack,
            j + 1,
            mask | 1 << j,
            mass + space.weight(j),
            enlarged,
            depth + 1,
            dmin,
            undo,
            visit,
        );
        let frame = &undo[depth * n..(depth + 1) * n];
        dmin.copy_from_slice(frame);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{generate, SpaceKind, DEFAULT_MAX_POINTS};

    #[test]
    fn minimal_sets_on_uniform_cycle_have_minimal_size() {
        let space: MetricMeasureSpace<f64> =
            generate(&SpaceKind::Cycle { n: 6 }, DEFAULT_MAX_POINTS).unwrap();
        let mut count = 0usize;
        for_each_minimal_qualifying(&space, 0.5, 22, &mut |mask, mass, _| {
            assert_eq!(mask.count_ones(), 3);
            assert!((mass - 0.5).abs() < 1e-12);
            count += 1;
        })
        .unwrap();
        assert_eq!(count, 20); // C(6,3)
    }

    #[test]
    fn small_enlargement_sets_match_direct_scan() {
        let space = crate::space::random_space(6, 11).unwrap();
        let rho = space.distance_values()[2];
        let eps = 0.55;
        let mut visited: Vec<(u32, f64)> = Vec::new();
        for_each_small_enlargement(&space, eps, rho, 22, &mut |mask, _, enl| {
            visited.push((mask, enl));
        })
        .unwrap();

        // Unpruned direct scan over all nonempty subsets.
        let mut expected = 0usize;
        for mask in 1u32..(1 << 6) {
            let set = crate::mask::SubsetMask::from_u32(6, mask);
            let enlarged = crate::enlargement::enlarge(&space, &set, rho).unwrap();
            let enl_mass = space.mass(&enlarged);
            if enl_mass <= eps + 1e-12 {
                expected += 1;
                let found = visited.iter().find(|(m, _)| *m == mask).unwrap();
                assert!((found.1 - enl_mass).abs() < 1e-12);
            }
        }
        assert_eq!(visited.len(), expected);
    }

    #[test]
    fn exact_limit_is_enforced() {
        let space = crate::space::random_space(8, 0).unwrap();
        let err =
            for_each_minimal_qualifying(&space, 0.5, 7, &mut |_, _, _| {}).unwrap_err();
        assert_eq!(err.kind(), "TooLargeForExact");
    }
}
