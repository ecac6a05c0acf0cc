//! Dense symmetric eigensolves.
//!
//! nalgebra's implicit QR returns NaN on some very sparse, highly reducible
//! matrices (for example a short path among many isolated vertices). Any
//! non-finite output is recomputed with cyclic Jacobi rotations, which
//! always converge.

use nalgebra::{DMatrix, Dyn, SymmetricEigen};

const JACOBI_SWEEPS: usize = 100;

fn finite(m: &DMatrix<f64>) -> bool {
    m.iter().all(|x| x.is_finite())
}

/// Eigenvalues (unordered) and matching eigenvector columns.
pub(crate) fn symmetric_eigen(a: DMatrix<f64>) -> SymmetricEigen<f64, Dyn> {
    let eig = SymmetricEigen::new(a.clone());
    if eig.eigenvalues.iter().all(|x| x.is_finite()) && finite(&eig.eigenvectors) {
        return eig;
    }
    jacobi(a, true)
}

/// Eigenvalues in no particular order.
pub(crate) fn symmetric_eigenvalues(a: DMatrix<f64>) -> Vec<f64> {
    let values = a.clone().symmetric_eigenvalues();
    if values.iter().all(|x| x.is_finite()) {
        return values.iter().copied().collect();
    }
    jacobi(a, false).eigenvalues.iter().copied().collect()
}

fn jacobi(mut a: DMatrix<f64>, vectors: bool) -> SymmetricEigen<f64, Dyn> {
    let n = a.nrows();
    let mut v = DMatrix::identity(n, if vectors { n } else { 0 });
    let total: f64 = a.iter().map(|x| x * x).sum();
    for _ in 0..JACOBI_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .map(|(p, q)| 2.0 * a[(p, q)] * a[(p, q)])
            .sum();
        if off <= 1e-32 * total {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (kp, kq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * kp - s * kq;
                    a[(k, q)] = s * kp + c * kq;
                }
                for k in 0..n {
                    let (pk, qk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * pk - s * qk;
                    a[(q, k)] = s * pk + c * qk;
                }
                if vectors {
                    for k in 0..n {
                        let (kp, kq) = (v[(k, p)], v[(k, q)]);
                        v[(k, p)] = c * kp - s * kq;
                        v[(k, q)] = s * kp + c * kq;
                    }
                }
            }
        }
    }
    SymmetricEigen {
        eigenvalues: a.diagonal(),
        eigenvectors: v,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sparse_adjacency(n: usize, edges: &[(usize, usize)]) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(n, n);
        for &(u, v) in edges {
            a[(u, v)] = 1.0;
            a[(v, u)] = 1.0;
        }
        a
    }

    fn sorted(mut v: Vec<f64>) -> Vec<f64> {
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }

    #[test]
    fn short_path_among_isolated_vertices() {
        let a = sparse_adjacency(21, &[(0, 20), (11, 20)]);
        let values = sorted(symmetric_eigenvalues(a.clone()));
        assert!((values[0] - 2f64.sqrt()).abs() < 1e-12);
        assert!((values[20] + 2f64.sqrt()).abs() < 1e-12);
        assert!(values[1..20].iter().all(|x| x.abs() < 1e-12));
        let eig = symmetric_eigen(a.clone());
        let residual = &a * &eig.eigenvectors - &eig.eigenvectors * DMatrix::from_diagonal(&eig.eigenvalues);
        assert!(residual.norm() < 1e-10);
    }

    #[test]
    fn jacobi_agrees_with_finite_qr_results() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let n = rng.gen_range(1..30);
            let edges: Vec<(usize, usize)> = (0..rng.gen_range(0..3 * n))
                .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
                .filter(|(u, v)| u != v)
                .collect();
            let a = sparse_adjacency(n, &edges);
            let by_jacobi = jacobi(a.clone(), true);
            let residual =
                &a * &by_jacobi.eigenvectors - &by_jacobi.eigenvectors * DMatrix::from_diagonal(&by_jacobi.eigenvalues);
            assert!(residual.norm() < 1e-10);
            let qr: Vec<f64> = a.symmetric_eigenvalues().iter().copied().collect();
            if qr.iter().all(|x| x.is_finite()) {
                let j = sorted(by_jacobi.eigenvalues.iter().copied().collect());
                for (x, y) in sorted(qr).iter().zip(&j) {
                    assert!((x - y).abs() < 1e-10);
                }
            }
        }
    }
}
