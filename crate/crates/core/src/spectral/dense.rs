//! Dense spectra of small (sub)graphs.

use nalgebra::DMatrix;

use super::{log_sum_exp, symmetric_eigen, symmetric_eigenvalues};
use crate::error::Result;
use crate::graph::{Graph, NodeSet};

/// Vertex sets up to this size are solved densely in full.
pub(crate) const DENSE_LIMIT: usize = 400;

/// Dense adjacency matrix of `G[s]`, rows in sorted member order.
pub fn dense_adjacency(g: &Graph, s: &NodeSet) -> Result<DMatrix<f64>> {
    g.check_set(s)?;
    let members = s.members();
    let k = members.len();
    let mut a = DMatrix::zeros(k, k);
    for (i, &u) in members.iter().enumerate() {
        for &w in g.neighbors(u) {
            if let Ok(j) = members.binary_search(&w) {
                a[(i, j)] = 1.0;
            }
        }
    }
    Ok(a)
}

fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// All adjacency eigenvalues of `g`, descending.
pub fn full_spectrum(g: &Graph) -> Vec<f64> {
    spectrum_of_subset(g, &NodeSet::full(g.n())).expect("full set is valid")
}

/// All adjacency eigenvalues of `G[s]`, descending.
pub fn spectrum_of_subset(g: &Graph, s: &NodeSet) -> Result<Vec<f64>> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    let a = dense_adjacency(g, s)?;
    Ok(sorted_desc(symmetric_eigenvalues(a)))
}

/// Eigendecomposition of a small induced subgraph, used to score single-vertex
/// extensions `S + v` without refactoring the whole matrix.
#[derive(Clone, Debug)]
pub struct SubsetSpectrum {
    values: Vec<f64>,
    vectors: DMatrix<f64>,
}

impl SubsetSpectrum {
    /// Spectrum of `G[s]`, rows in sorted member order.
    pub fn new(g: &Graph, s: &NodeSet) -> Result<SubsetSpectrum> {
        Ok(SubsetSpectrum::from_adjacency(dense_adjacency(g, s)?))
    }

    /// Spectrum of a symmetric adjacency matrix given in any row order.
    pub fn from_adjacency(a: DMatrix<f64>) -> SubsetSpectrum {
        if a.nrows() == 0 {
            return SubsetSpectrum {
                values: Vec::new(),
                vectors: a,
            };
        }
        let eig = symmetric_eigen(a);
        SubsetSpectrum {
            values: eig.eigenvalues.iter().copied().collect(),
            vectors: eig.eigenvectors,
        }
    }

    pub fn size(&self) -> usize {
        self.values.len()
    }

    /// Eigenvalues in no particular order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.values
    }

    /// `ln sum exp(lambda)` over the subgraph's spectrum (`-inf` when empty).
    pub fn log_sum_exp(&self) -> f64 {
        log_sum_exp(&self.values)
    }

    /// Natural connectivity of the subgraph; `None` when it is empty.
    pub fn robustness(&self) -> Option<f64> {
        (self.size() > 0).then(|| self.log_sum_exp() - (self.size() as f64).ln())
    }

    fn border(&self, local_neighbors: &[usize]) -> Vec<f64> {
        let mut z = vec![0.0; self.size()];
        for &p in local_neighbors {
            for (zi, q) in z.iter_mut().zip(self.vectors.row(p).iter()) {
                *zi += q;
            }
        }
        z
    }

    /// Spectrum (ascending) of the subgraph plus one vertex adjacent to the
    /// rows listed in `local_neighbors`.
    pub fn eigenvalues_with(&self, local_neighbors: &[usize]) -> Vec<f64> {
        bordered_eigenvalues(&self.values, &self.border(local_neighbors))
    }

    /// Natural connectivity of the subgraph plus one vertex adjacent to the
    /// rows listed in `local_neighbors`.
    pub fn robustness_with(&self, local_neighbors: &[usize]) -> f64 {
        bordered_log_exp_sum(&self.values, &self.border(local_neighbors))
            - ((self.size() + 1) as f64).ln()
    }
}

/// Bordered problem after deflation: exact eigenvalues plus the poles and
/// weights of the remaining secular equation.
struct Secular {
    deflated: Vec<f64>,
    poles: Vec<f64>,
    weights: Vec<f64>,
    lo: f64,
    hi: f64,
}

impl Secular {
    fn new(d: &[f64], z: &[f64]) -> Secular {
        assert_eq!(d.len(), z.len());
        let eps = f64::EPSILON;
        let znorm = z.iter().map(|x| x * x).sum::<f64>().sqrt();
        let scale = d.iter().fold(znorm.max(1.0), |acc, x| acc.max(x.abs()));
        let z_tol = 16.0 * eps * scale;
        let d_tol = 64.0 * eps * scale;

        let mut order: Vec<usize> = (0..d.len()).collect();
        order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));

        let mut deflated = Vec::new();
        let mut poles: Vec<f64> = Vec::new();
        let mut weights: Vec<f64> = Vec::new();
        for &i in &order {
            let (di, zi) = (d[i], z[i]);
            if zi.abs() <= z_tol {
                deflated.push(di);
                continue;
            }
            match poles.last() {
                Some(&last) if di - last <= d_tol => {
                    // Rotate the two weights into one; the other direction
                    // keeps its eigenvalue.
                    *weights.last_mut().unwrap() += zi * zi;
                    deflated.push(di);
                }
                _ => {
                    poles.push(di);
                    weights.push(zi * zi);
                }
            }
        }
        let (lo, hi) = match (poles.first(), poles.last()) {
            (Some(&first), Some(&last)) => (first.min(0.0) - znorm - 1.0, last.max(0.0) + znorm + 1.0),
            _ => (0.0, 0.0),
        };
        Secular {
            deflated,
            poles,
            weights,
            lo,
            hi,
        }
    }

    /// Root `k` (ascending, `0..=r`) of the secular equation.
    fn root(&self, k: usize) -> f64 {
        let r = self.poles.len();
        if r == 0 {
            return 0.0;
        }
        let a = if k == 0 { self.lo } else { self.poles[k - 1] };
        let b = if k == r { self.hi } else { self.poles[k] };
        secular_root(&self.poles, &self.weights, a, b, k)
    }
}

/// Eigenvalues (ascending) of the bordered matrix `[[diag(d), z], [z', 0]]`.
///
/// Poles with negligible weight and coincident poles are deflated; the rest
/// of the spectrum comes from the secular equation
/// `mu - sum_i z_i^2 / (mu - d_i) = 0`, which has exactly one root between
/// consecutive poles and one beyond each end.
pub fn bordered_eigenvalues(d: &[f64], z: &[f64]) -> Vec<f64> {
    let sec = Secular::new(d, z);
    let mut out = sec.deflated.clone();
    out.extend((0..=sec.poles.len()).map(|k| sec.root(k)));
    out.sort_by(f64::total_cmp);
    out
}

/// `ln sum_i exp(mu_i)` over the eigenvalues of `[[diag(d), z], [z', 0]]`.
///
/// Roots are found from the top down. By interlacing, each root not yet
/// computed lies between two known poles, so the remaining sum is bracketed
/// with width `exp(next pole)`; evaluation stops once that width is below
/// rounding level relative to the running total.
pub fn bordered_log_exp_sum(d: &[f64], z: &[f64]) -> f64 {
    let sec = Secular::new(d, z);
    let r = sec.poles.len();
    let top = sec.root(r);
    let shift = sec
        .deflated
        .iter()
        .copied()
        .fold(top, f64::max);
    let mut total: f64 = sec.deflated.iter().map(|x| (x - shift).exp()).sum::<f64>() + (top - shift).exp();
    let mut k = r;
    while k > 0 {
        // Roots 0..k remain; root j > 0 lies in (p_{j-1}, p_j), root 0 below p_0.
        let width = (sec.poles[k - 1] - shift).exp();
        if width <= 1e-17 * total {
            let below: f64 = sec.poles[..k - 1].iter().map(|p| (p - shift).exp()).sum();
            total += below + 0.5 * width;
            break;
        }
        total += (sec.root(k - 1) - shift).exp();
        k -= 1;
    }
    shift + total.ln()
}

/// Root of the secular function in `(a, b)`. Interval `k` lies just right of
/// pole `k-1` and just left of pole `k`.
fn secular_root(poles: &[f64], weights: &[f64], a: f64, b: f64, k: usize) -> f64 {
    let r = poles.len();
    let eval = |mu: f64| -> f64 {
        mu - poles
            .iter()
            .zip(weights)
            .map(|(p, w)| w / (mu - p))
            .sum::<f64>()
    };
    // Work relative to the nearer pole so differences mu - p stay accurate.
    let origin_idx = if k == 0 {
        0
    } else if k == r {
        r - 1
    } else if eval(0.5 * (a + b)) > 0.0 {
        k - 1
    } else {
        k
    };
    let origin = poles[origin_idx];
    let (mut t_lo, mut t_hi) = (a - origin, b - origin);
    if k == 0 {
        t_hi = 0.0;
    }
    if k == r {
        t_lo = 0.0;
    }
    if k > 0 && k < r {
        let mid = 0.5 * (a + b) - origin;
        if origin_idx == k - 1 {
            t_hi = mid;
        } else {
            t_lo = mid;
        }
    }

    let mut tau = 0.5 * (t_lo + t_hi);
    for _ in 0..200 {
        let (mut s, mut ds) = (0.0, 0.0);
        for (j, (&p, &w)) in poles.iter().zip(weights).enumerate() {
            let diff = if j == origin_idx { tau } else { tau - (p - origin) };
            let q = w / diff;
            s += q;
            ds += q / diff;
        }
        let f = origin + tau - s;
        let df = 1.0 + ds;
        if f == 0.0 {
            break;
        }
        if f < 0.0 {
            t_lo = tau;
        } else {
            t_hi = tau;
        }
        // Newton on h(tau) = tau * f(tau), which stays smooth at the origin pole.
        let h = tau * f;
        let dh = f + tau * df;
        let mut next = tau - h / dh;
        if !(next > t_lo && next < t_hi) || !next.is_finite() {
            next = 0.5 * (t_lo + t_hi);
        }
        let width = t_hi - t_lo;
        let step = (next - tau).abs();
        tau = next;
        let size = (origin + tau).abs().max(tau.abs()).max(1e-300);
        if step <= 4.0 * f64::EPSILON * size || width <= 4.0 * f64::EPSILON * size {
            break;
        }
    }
    origin + tau
}
