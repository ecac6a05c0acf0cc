//! Adjacency spectra and natural connectivity.
//!
//! Natural connectivity of a graph on `n` vertices is
//! `ln( (1/n) * sum_i exp(lambda_i) )` over the adjacency eigenvalues. Every
//! exponential sum here is evaluated with the largest exponent factored out,
//! because large cliques push `lambda_1` well past the `exp` overflow point.

mod dense;
mod lanczos;
mod perturb;
mod symmetric;

pub(crate) use symmetric::{symmetric_eigen, symmetric_eigenvalues};

pub use dense::{
    bordered_eigenvalues, bordered_log_exp_sum, dense_adjacency, full_spectrum, spectrum_of_subset,
    SubsetSpectrum,
};
pub use lanczos::{largest_magnitude_eigenpairs, top_eigenpairs, top_eigenpairs_warm, SolverOptions};
pub use perturb::{
    apply_removal, removal_score, update_eigenvalues_on_removal, update_eigenvectors_on_removal,
    UpdateOptions,
};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::graph::{ActiveSet, Graph, NodeSet};

/// Default cap on retained eigen-pairs.
pub const DEFAULT_EIGS: usize = 50;

/// Top-`t` eigen-pairs of a (masked) adjacency matrix.
///
/// Vectors have one coordinate per host vertex; coordinates of inactive
/// vertices are zero. `staleness` counts perturbation updates (and skipped
/// near-degenerate terms) applied since the last full solve.
#[derive(Clone, Debug)]
pub struct EigenBasis {
    values: Vec<f64>,
    vectors: Vec<Vec<f64>>,
    host_n: usize,
    staleness: usize,
}

impl EigenBasis {
    /// Assembles a basis, sorting pairs by descending eigenvalue.
    pub fn from_pairs(mut pairs: Vec<(f64, Vec<f64>)>, host_n: usize) -> Result<EigenBasis> {
        let dim = pairs.first().map_or(0, |p| p.1.len());
        if pairs.iter().any(|p| p.1.len() != dim) {
            return Err(invalid("eigenvectors must share one dimension"));
        }
        if pairs.len() > host_n {
            return Err(invalid("more eigen-pairs than active vertices"));
        }
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
        let (values, vectors) = pairs.into_iter().unzip();
        Ok(EigenBasis {
            values,
            vectors,
            host_n,
            staleness: 0,
        })
    }

    pub fn t(&self) -> usize {
        self.values.len()
    }

    /// Eigenvalues, descending.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    /// Vector length (the host graph's full vertex count).
    pub fn dimension(&self) -> usize {
        self.vectors.first().map_or(0, Vec::len)
    }

    /// Number of active vertices the basis describes.
    pub fn host_n(&self) -> usize {
        self.host_n
    }

    pub fn staleness(&self) -> usize {
        self.staleness
    }

    /// Drops all but the `t` leading pairs.
    pub fn truncate(&mut self, t: usize) {
        self.values.truncate(t);
        self.vectors.truncate(t);
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.t() {
            for j in i..self.t() {
                let d = dot(&self.vectors[i], &self.vectors[j]);
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((d - target).abs());
            }
        }
        worst
    }

    pub(crate) fn parts_mut(&mut self) -> (&mut Vec<f64>, &mut Vec<Vec<f64>>) {
        (&mut self.values, &mut self.vectors)
    }

    pub(crate) fn set_host_n(&mut self, host_n: usize) {
        self.host_n = host_n;
        if self.t() > host_n {
            self.truncate(host_n);
        }
    }

    pub(crate) fn add_staleness(&mut self, by: usize) {
        self.staleness += by;
    }

    /// Restores descending order after values were perturbed.
    pub(crate) fn resort(&mut self) {
        let mut order: Vec<usize> = (0..self.t()).collect();
        order.sort_by(|&a, &b| self.values[b].total_cmp(&self.values[a]));
        if order.iter().enumerate().all(|(i, &o)| i == o) {
            return;
        }
        self.values = order.iter().map(|&i| self.values[i]).collect();
        let mut old = std::mem::take(&mut self.vectors);
        self.vectors = order.iter().map(|&i| std::mem::take(&mut old[i])).collect();
    }
}

/// Natural connectivity value together with how many eigenvalues produced it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RobustnessScore {
    pub value: f64,
    pub t_used: usize,
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `ln(sum_i exp(x_i))`, stable for large arguments. Empty input gives `-inf`.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    max + xs.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

/// Natural connectivity from a set of eigenvalues and a vertex count.
pub fn robustness_from_eigenvalues(values: &[f64], node_count: usize) -> Result<RobustnessScore> {
    if node_count == 0 {
        return Err(invalid("robustness needs at least one vertex"));
    }
    if values.is_empty() {
        return Err(invalid("robustness needs at least one eigenvalue"));
    }
    Ok(RobustnessScore {
        value: log_sum_exp(values) - (node_count as f64).ln(),
        t_used: values.len(),
    })
}

/// Natural connectivity using only the retained pairs of `basis`.
pub fn robustness_from_basis(basis: &EigenBasis, node_count: usize) -> Result<RobustnessScore> {
    robustness_from_eigenvalues(basis.values(), node_count)
}

/// The size-`s` objective: natural connectivity of `G[s]` over its top
/// `min(t, |s|)` eigenvalues.
pub fn subgraph_objective(g: &Graph, s: &NodeSet, t: usize) -> Result<RobustnessScore> {
    if s.is_empty() {
        return Err(invalid("objective of an empty vertex set"));
    }
    if t == 0 {
        return Err(invalid("t must be at least 1"));
    }
    g.check_set(s)?;
    let t = t.min(s.len());
    if s.len() <= dense::DENSE_LIMIT {
        let mut spectrum = spectrum_of_subset(g, s)?;
        spectrum.truncate(t);
        robustness_from_eigenvalues(&spectrum, s.len())
    } else {
        let mask = ActiveSet::from_nodes(g.n(), s)?;
        let basis = top_eigenpairs(g, Some(&mask), t, &SolverOptions::default())?;
        robustness_from_basis(&basis, s.len())
    }
}

/// Exact natural connectivity of a whole (small) graph from its full spectrum.
pub fn exact_robustness(g: &Graph) -> Result<f64> {
    Ok(robustness_from_eigenvalues(&full_spectrum(g), g.n())?.value)
}

/// Closed form for the `k`-clique: spectrum `{k-1, -1 (k-1 times)}`, evaluated
/// as `(k-1) + ln(1 + (k-1) e^{-k}) - ln k`.
pub fn clique_robustness(k: usize) -> Result<RobustnessScore> {
    if k == 0 {
        return Err(invalid("clique size must be at least 1"));
    }
    let kf = k as f64;
    Ok(RobustnessScore {
        value: (kf - 1.0) + ((kf - 1.0) * (-kf).exp()).ln_1p() - kf.ln(),
        t_used: k,
    })
}

/// Regression coefficients for the smallest clique reaching a target robustness.
pub const VMIN_SLOPE: f64 = 1.0295;
pub const VMIN_INTERCEPT: f64 = 3.2826;

const VMIN_SEARCH_LIMIT: usize = 1_000_000;

/// Both estimates of the smallest clique size whose robustness reaches a target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VMinEstimate {
    /// `ceil(1.0295 * target + 3.2826)`, at least 1.
    pub regression: usize,
    /// Bisection over the clique closed form; `None` past the search limit.
    pub exact: Option<usize>,
}

impl VMinEstimate {
    pub fn preferred(&self) -> usize {
        self.exact.unwrap_or(self.regression)
    }
}

pub fn estimate_v_min(target: f64) -> Result<VMinEstimate> {
    if !(target >= 0.0) || !target.is_finite() {
        return Err(invalid("target robustness must be finite and non-negative"));
    }
    let regression = ((VMIN_SLOPE * target + VMIN_INTERCEPT).ceil() as usize).max(1);
    let reaches = |k: usize| clique_robustness(k).map(|r| r.value >= target).unwrap_or(false);
    let exact = if !reaches(VMIN_SEARCH_LIMIT) {
        None
    } else {
        // Clique robustness is increasing in k, so bisect for the first hit.
        let (mut lo, mut hi) = (1usize, VMIN_SEARCH_LIMIT);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if reaches(mid) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Some(lo)
    };
    Ok(VMinEstimate { regression, exact })
}
