//! Spectral gap of the weighted graph Laplacian.
//!
//! A space induces a graph through an adjacency rule; the Laplacian is
//! `L = D − W` with unit edge weights and the mass matrix `M = diag(n·μ)`
//! (normalized so uniform weights reduce to the combinatorial Laplacian).
//! The gap is the second-smallest eigenvalue of the symmetrized operator
//! `M^{-1/2} L M^{-1/2}`, computed by cyclic Jacobi rotations — dependency
//! free and robust for every real symmetric matrix at these sizes.

use crate::error::{Error, Result};
use crate::scalar::{c, Real};
use crate::space::MetricMeasureSpace;

/// How the graph is read off the metric.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AdjacencyRule<T> {
    /// Edges between points at distance 1 (within `1e-9`).
    UnitDistance,
    /// Edges between points at distance at most `t`.
    Threshold(T),
    /// Each point is joined to its `k` nearest neighbours (symmetrized).
    Knn(usize),
}

/// The spectral gap with its eigenvector.
#[derive(Clone, Debug)]
pub struct SpectralResult<T> {
    /// Second-smallest eigenvalue of the μ-weighted graph Laplacian.
    pub lambda1: T,
    /// Generalized eigenvector; μ-orthogonal to constants, unit Euclidean
    /// norm, first nonzero entry positive.
    pub eigenvector: Vec<T>,
    pub method: String,
}

/// Computes the spectral gap for the graph induced by `rule`.
pub fn lambda1_graph<T: Real>(
    space: &MetricMeasureSpace<T>,
    rule: AdjacencyRule<T>,
) -> Result<SpectralResult<T>> {
    let n = space.n();
    if n < 2 {
        return Err(Error::InvalidParameter(
            "a spectral gap needs at least two points".into(),
        ));
    }
    let adjacency = build_adjacency(space, rule)?;
    if !connected(n, &adjacency) {
        return Err(Error::DisconnectedGraph);
    }

    // S = M^{-1/2} (D − W) M^{-1/2} with M = diag(n·μ).
    let mut s = vec![T::zero(); n * n];
    let scale: Vec<T> = (0..n)
        .map(|i| (c::<T>(n as f64) * space.weight(i)).sqrt())
        .collect();
    for i in 0..n {
        let degree: T = (0..n).map(|j| adjacency[i * n + j]).sum();
        for j in 0..n {
            let l = if i == j { degree - adjacency[i * n + j] } else { -adjacency[i * n + j] };
            s[i * n + j] = l / (scale[i] * scale[j]);
        }
    }

    let (eigenvalues, eigenvectors) = jacobi_eigen(&mut s, n);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eigenvalues[a].partial_cmp(&eigenvalues[b]).expect("finite spectrum"));
    let idx = order[1];
    let lambda1 = eigenvalues[idx];

    // Undo the symmetrization: v = M^{-1/2} w solves L v = λ M v.
    let mut v: Vec<T> = (0..n).map(|i| eigenvectors[i * n + idx] / scale[i]).collect();
    let norm = v.iter().map(|x| *x * *x).sum::<T>().sqrt();
    for x in v.iter_mut() {
        *x = *x / norm;
    }
    if let Some(first) = v.iter().find(|x| x.abs() > c::<T>(1e-12)) {
        if *first < T::zero() {
            for x in v.iter_mut() {
                *x = -*x;
            }
        }
    }

    Ok(SpectralResult { lambda1, eigenvector: v, method: "cyclic-jacobi".into() })
}

fn build_adjacency<T: Real>(
    space: &MetricMeasureSpace<T>,
    rule: AdjacencyRule<T>,
) -> Result<Vec<T>> {
    let n = space.n();
    let mut w = vec![T::zero(); n * n];
    match rule {
        AdjacencyRule::UnitDistance => {
            let tol = c::<T>(1e-9);
            for i in 0..n {
                for j in (i + 1)..n {
                    if (space.dist(i, j) - T::one()).abs() <= tol {
                        w[i * n + j] = T::one();
                        w[j * n + i] = T::one();
                    }
                }
            }
        }
        AdjacencyRule::Threshold(t) => {
            if t <= T::zero() {
                return Err(Error::InvalidParameter("threshold must be positive".into()));
            }
            for i in 0..n {
                for j in (i + 1)..n {
                    if space.dist(i, j) <= t {
                        w[i * n + j] = T::one();
                        w[j * n + i] = T::one();
                    }
                }
            }
        }
        AdjacencyRule::Knn(k) => {
            if k == 0 || k >= n {
                return Err(Error::InvalidParameter(format!(
                    "knn needs 0 < k < n, got k = {k} with n = {n}"
                )));
            }
            for i in 0..n {
                let mut order: Vec<usize> = (0..n).filter(|&j| j != i).collect();
                order.sort_by(|&a, &b| {
                    space
                        .dist(i, a)
                        .partial_cmp(&space.dist(i, b))
                        .expect("finite distances")
                        .then(a.cmp(&b))
                });
                for &j in order.iter().take(k) {
                    w[i * n + j] = T::one();
                    w[j * n + i] = T::one();
                }
            }
        }
    }
    Ok(w)
}

fn connected<T: Real>(n: usize, adjacency: &[T]) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if !seen[j] && adjacency[i * n + j] > T::zero() {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Cyclic Jacobi diagonalization of a symmetric matrix (row-major,
/// destroyed). Returns eigenvalues and the orthogonal eigenvector matrix
/// (columns are eigenvectors).
pub fn jacobi_eigen<T: Real>(a: &mut [T], n: usize) -> (Vec<T>, Vec<T>) {
    let mut v = vec![T::zero(); n * n];
    for i in 0..n {
        v[i * n + i] = T::one();
    }
    if n == 1 {
        return (vec![a[0]], v);
    }

    let tol = c::<T>(1e-14)
        * (0..n).map(|i| a[i * n + i].abs()).fold(T::one(), |acc, x| acc.max(x));
    for _sweep in 0..60 {
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q].abs();
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= tol * c::<T>(1e-2) {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (c::<T>(2.0) * apq);
                let t = {
                    let t = T::one() / (theta.abs() + (T::one() + theta * theta).sqrt());
                    if theta < T::zero() {
                        -t
                    } else {
                        t
                    }
                };
                let cos = T::one() / (T::one() + t * t).sqrt();
                let sin = t * cos;

                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = cos * akp - sin * akq;
                    a[k * n + q] = sin * akp + cos * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = cos * apk - sin * aqk;
                    a[q * n + k] = sin * apk + cos * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = cos * vkp - sin * vkq;
                    v[k * n + q] = sin * vkp + cos * vkq;
                }
            }
        }
    }
    let eigenvalues: Vec<T> = (0..n).map(|i| a[i * n + i]).collect();
    (eigenvalues, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{generate, SpaceKind, DEFAULT_MAX_POINTS};

    fn complete_graph_space(n: usize) -> MetricMeasureSpace<f64> {
        let dist = vec![vec![1.0; n]; n]
            .into_iter()
            .enumerate()
            .map(|(i, mut row)| {
                row[i] = 0.0;
                row
            })
            .collect();
        MetricMeasureSpace::new(dist, vec![1.0 / n as f64; n]).unwrap()
    }

    #[test]
    fn two_point_gap_is_two() {
        // Hand oracle: L = [[1,-1],[-1,1]] has eigenvalues {0, 2}.
        let space = complete_graph_space(2);
        let result = lambda1_graph(&space, AdjacencyRule::UnitDistance).unwrap();
        assert!((result.lambda1 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn cycle_gap_matches_closed_form() {
        for n in 4..=12 {
            let space: MetricMeasureSpace<f64> =
                generate(&SpaceKind::Cycle { n }, DEFAULT_MAX_POINTS).unwrap();
            let result = lambda1_graph(&space, AdjacencyRule::UnitDistance).unwrap();
            let expected = 2.0 * (1.0 - (2.0 * std::f64::consts::PI / n as f64).cos());
            assert!(
                (result.lambda1 - expected).abs() < 1e-8,
                "n = {n}: {} vs {expected}",
                result.lambda1
            );
        }
    }

    #[test]
    fn complete_graph_gap_is_n() {
        for n in [3usize, 5, 8] {
            let space = complete_graph_space(n);
            let result = lambda1_graph(&space, AdjacencyRule::UnitDistance).unwrap();
            assert!((result.lambda1 - n as f64).abs() < 1e-8);
        }
    }

    #[test]
    fn disconnected_graph_is_rejected() {
        // Two unit edges far apart, joined by nothing at threshold 1.
        let dist = vec![
            vec![0.0, 1.0, 9.0, 9.0],
            vec![1.0, 0.0, 9.0, 9.0],
            vec![9.0, 9.0, 0.0, 1.0],
            vec![9.0, 9.0, 1.0, 0.0],
        ];
        let space = MetricMeasureSpace::new(dist, vec![0.25; 4]).unwrap();
        let err = lambda1_graph(&space, AdjacencyRule::Threshold(1.0)).unwrap_err();
        assert_eq!(err.kind(), "DisconnectedGraph");
    }

    #[test]
    fn knn_rule_connects_a_path() {
        let space: MetricMeasureSpace<f64> =
            generate(&SpaceKind::Path { n: 5 }, DEFAULT_MAX_POINTS).unwrap();
        let result = lambda1_graph(&space, AdjacencyRule::Knn(1)).unwrap();
        // 1-nn on a path symmetrizes to the path graph itself.
        let expected = 2.0 * (1.0 - (std::f64::consts::PI / 5.0).cos());
        assert!((result.lambda1 - expected).abs() < 1e-8);
    }

    #[test]
    fn eigenvector_residual_and_orthogonality() {
        for (n, rule) in [(6usize, AdjacencyRule::UnitDistance), (5, AdjacencyRule::Knn(2))] {
            let space: MetricMeasureSpace<f64> =
                generate(&SpaceKind::Cycle { n }, DEFAULT_MAX_POINTS).unwrap();
            let result = lambda1_graph(&space, rule).unwrap();
            let v = &result.eigenvector;

            // μ-orthogonal to constants.
            let mean: f64 = (0..n).map(|i| space.weight(i) * v[i]).sum();
            assert!(mean.abs() < 1e-8);

            // Residual of the generalized problem L v = λ M v.
            let adjacency = build_adjacency(&space, rule).unwrap();
            let mut worst: f64 = 0.0;
            for i in 0..n {
                let degree: f64 = (0..n).map(|j| adjacency[i * n + j]).sum();
                let mut lv = degree * v[i];
                for j in 0..n {
                    lv -= adjacency[i * n + j] * v[j];
                }
                let mv = (n as f64) * space.weight(i) * v[i];
                worst = worst.max((lv - result.lambda1 * mv).abs());
            }
            assert!(worst < 1e-8, "residual {worst}");

            // Mini-max direction: λ₁·Var_μ(v) ≤ Dirichlet energy analog.
            let var: f64 = (0..n).map(|i| space.weight(i) * v[i] * v[i]).sum::<f64>()
                - mean * mean;
            let mut energy = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    energy += adjacency[i * n + j] * (v[i] - v[j]).powi(2);
                }
            }
            energy /= n as f64;
            assert!(result.lambda1 * var <= energy + 1e-6);
        }
    }

    #[test]
    fn jacobi_handles_known_matrix() {
        // [[2,1],[1,2]] has eigenvalues {1, 3}.
        let mut a = vec![2.0f64, 1.0, 1.0, 2.0];
        let (mut values, _) = jacobi_eigen(&mut a, 2);
        values.sort_by(|x, y| x.partial_cmp(y).unwrap());
        assert!((values[0] - 1.0).abs() < 1e-12);
        assert!((values[1] - 3.0).abs() < 1e-12);
    }
}
