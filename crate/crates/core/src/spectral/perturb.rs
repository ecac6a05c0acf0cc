//! First-order eigen-pair updates for deleting one vertex.
//!
//! Deleting `v` perturbs the adjacency by `dA = -(e_v a' + a e_v')`, where `a`
//! marks the active neighbours of `v`. With `S_j = a . u_j` this gives
//! `u_i' dA u_j = -(u_vi S_j + u_vj S_i)`.

use super::{log_sum_exp, EigenBasis};
use crate::error::{Error, Result};
use crate::graph::{ActiveSet, Graph};

#[derive(Clone, Debug)]
pub struct UpdateOptions {
    /// Eigenvector terms with `|lambda_j - lambda_i|` below this are skipped.
    pub gap_floor: f64,
    /// Apply the `alpha_jj = sqrt(1 - sum alpha_ij^2) - 1` correction.
    pub refine_diagonal: bool,
    /// Staleness above this forces a full re-solve in the miners.
    pub staleness_limit: usize,
}

impl Default for UpdateOptions {
    fn default() -> Self {
        UpdateOptions {
            gap_floor: 1e-6,
            refine_diagonal: false,
            staleness_limit: 10,
        }
    }
}

fn check_active(g: &Graph, active: &ActiveSet, v: usize) -> Result<()> {
    g.check_vertex(v)?;
    if active.universe() != g.n() {
        return Err(Error::InvalidArgument("active set does not match graph size".into()));
    }
    if !active.contains(v) {
        return Err(Error::InactiveVertex(v));
    }
    Ok(())
}

/// `(u_vj, S_j)` for every retained pair.
fn coordinates(basis: &EigenBasis, g: &Graph, v: usize, active: &ActiveSet) -> (Vec<f64>, Vec<f64>) {
    let uv = basis.vectors().iter().map(|u| u[v]).collect();
    let sums = basis
        .vectors()
        .iter()
        .map(|u| {
            g.neighbors(v)
                .iter()
                .filter(|&&w| active.contains(w))
                .map(|&w| u[w])
                .sum()
        })
        .collect();
    (uv, sums)
}

/// First-order eigenvalue shifts `d lambda_j = -2 u_vj S_j` for deleting `v`.
pub fn update_eigenvalues_on_removal(
    basis: &EigenBasis,
    g: &Graph,
    v: usize,
    active: &ActiveSet,
) -> Result<Vec<f64>> {
    check_active(g, active, v)?;
    let (uv, sums) = coordinates(basis, g, v, active);
    Ok(uv.iter().zip(&sums).map(|(x, s)| -2.0 * x * s).collect())
}

/// First-order eigenvector update for deleting `v`:
/// `u_j += sum_{i != j} alpha_ij u_i` with `alpha_ij = (u_i' dA u_j) / (lambda_j - lambda_i)`,
/// then coordinate `v` is zeroed and each vector renormalized. Eigenvalues are
/// left untouched. Returns the number of non-zero terms skipped for small gaps,
/// which is also added to the basis staleness.
pub fn update_eigenvectors_on_removal(
    basis: &mut EigenBasis,
    g: &Graph,
    v: usize,
    active: &ActiveSet,
    opts: &UpdateOptions,
) -> Result<usize> {
    check_active(g, active, v)?;
    let (uv, sums) = coordinates(basis, g, v, active);
    let t = basis.t();
    let mut skipped = 0;
    let (values, vectors) = basis.parts_mut();
    let old = vectors.clone();
    for j in 0..t {
        let mut alpha_sq = 0.0;
        let mut coeffs = vec![0.0; t];
        for i in 0..t {
            if i == j {
                continue;
            }
            let x = -(uv[i] * sums[j] + uv[j] * sums[i]);
            if x == 0.0 {
                continue;
            }
            let gap = values[j] - values[i];
            if gap.abs() < opts.gap_floor {
                if x.abs() > 1e-12 && i < j {
                    skipped += 1;
                }
                continue;
            }
            coeffs[i] = x / gap;
            alpha_sq += coeffs[i] * coeffs[i];
        }
        if opts.refine_diagonal {
            coeffs[j] = (1.0 - alpha_sq).max(0.0).sqrt() - 1.0;
        }
        let u = &mut vectors[j];
        for (i, c) in coeffs.iter().enumerate() {
            if *c != 0.0 {
                for (x, y) in u.iter_mut().zip(&old[i]) {
                    *x += c * y;
                }
            }
        }
        u[v] = 0.0;
        let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            u.iter_mut().for_each(|x| *x /= norm);
        }
    }
    basis.add_staleness(skipped);
    Ok(skipped)
}

/// Deletes `v` from `active` and updates `basis` to first order: eigenvalues
/// shift by their first-order change, eigenvectors follow
/// [`update_eigenvectors_on_removal`], order is restored and staleness grows
/// by one plus any skipped terms.
pub fn apply_removal(
    basis: &mut EigenBasis,
    g: &Graph,
    v: usize,
    active: &mut ActiveSet,
    opts: &UpdateOptions,
) -> Result<()> {
    let delta = update_eigenvalues_on_removal(basis, g, v, active)?;
    update_eigenvectors_on_removal(basis, g, v, active, opts)?;
    for (value, d) in basis.parts_mut().0.iter_mut().zip(&delta) {
        *value += d;
    }
    active.remove(v)?;
    basis.set_host_n(active.count());
    basis.add_staleness(1);
    basis.resort();
    Ok(())
}

/// Log of the estimated exponential spectral sum left after deleting `v`:
/// `lambda_1 + ln(e^{d lambda_1} + sum_{j>=2} c_j e^{d lambda_j})` with
/// `c_j = e^{lambda_j - lambda_1}`, i.e. `ln sum_j e^{lambda_j + d lambda_j}`.
pub fn removal_score(basis: &EigenBasis, g: &Graph, v: usize, active: &ActiveSet) -> Result<f64> {
    let delta = update_eigenvalues_on_removal(basis, g, v, active)?;
    let shifted: Vec<f64> = basis.values().iter().zip(&delta).map(|(l, d)| l + d).collect();
    Ok(log_sum_exp(&shifted))
}
