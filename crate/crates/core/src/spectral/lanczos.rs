//! Extreme eigen-pairs of a masked adjacency matrix.
//!
//! Small problems go to a dense symmetric solver. Larger ones use a block
//! Krylov method with thick restarts: the basis grows by blocks of `A * V`
//! (re-orthogonalized twice), Rayleigh-Ritz is done explicitly on the stored
//! `V' A V`, and on restart the leading Ritz vectors are kept and the
//! residuals of unconverged ones seed the next block.
//!
//! Known limitation: an eigenvalue whose multiplicity exceeds the block size
//! may converge slowly, since a block Krylov space only sees `b` directions of
//! any one eigenspace per start block.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{symmetric_eigen, EigenBasis};
use crate::error::{invalid, Error, Result};
use crate::graph::{ActiveSet, Graph};

#[derive(Clone, Debug)]
pub struct SolverOptions {
    /// Convergence requires `||A x - theta x|| <= tol * max(1, |theta|)`.
    pub tol: f64,
    pub max_restarts: usize,
    /// Seed for the start block and any replacement directions.
    pub seed: u64,
    /// Active counts up to this size are solved densely.
    pub dense_cutoff: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-8,
            max_restarts: 1000,
            seed: 0x5eed_1a2c,
            dense_cutoff: 400,
        }
    }
}

/// Adjacency of the active subgraph in local ids.
struct LocalCsr {
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl LocalCsr {
    fn new(g: &Graph, active: &[usize]) -> LocalCsr {
        let mut local = vec![usize::MAX; g.n()];
        for (i, &v) in active.iter().enumerate() {
            local[v] = i;
        }
        let mut offsets = Vec::with_capacity(active.len() + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for &v in active {
            targets.extend(g.neighbors(v).iter().map(|&w| local[w]).filter(|&w| w != usize::MAX));
            offsets.push(targets.len());
        }
        LocalCsr { offsets, targets }
    }

    fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.targets[self.offsets[i]..self.offsets[i + 1]]
                .iter()
                .map(|&j| x[j])
                .sum();
        }
    }

    fn dense(&self) -> DMatrix<f64> {
        let z = self.len();
        let mut a = DMatrix::zeros(z, z);
        for i in 0..z {
            for &j in &self.targets[self.offsets[i]..self.offsets[i + 1]] {
                a[(i, j)] = 1.0;
            }
        }
        a
    }
}

/// Which end of the spectrum a solve targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Order {
    Algebraic,
    Magnitude,
}

impl Order {
    fn key(self, theta: f64) -> f64 {
        match self {
            Order::Algebraic => theta,
            Order::Magnitude => theta.abs(),
        }
    }

    /// Descending by key, ties to the larger eigenvalue.
    fn sort(self, idx: &mut [usize], values: &DVector<f64>) {
        idx.sort_by(|&a, &b| {
            self.key(values[b])
                .total_cmp(&self.key(values[a]))
                .then(values[b].total_cmp(&values[a]))
        });
    }
}

/// Flips `x` so its largest-magnitude entry (first on ties) is positive.
fn fix_sign(x: &mut [f64]) {
    let mut best = 0.0f64;
    let mut sign = 1.0;
    for &v in x.iter() {
        if v.abs() > best {
            best = v.abs();
            sign = v.signum();
        }
    }
    if sign < 0.0 {
        x.iter_mut().for_each(|v| *v = -*v);
    }
}

/// Top `t` eigen-pairs of `A` restricted to the active vertices (all vertices
/// when `mask` is `None`). Vectors are returned in host coordinates with zeros
/// on inactive vertices.
pub fn top_eigenpairs(
    g: &Graph,
    mask: Option<&ActiveSet>,
    t: usize,
    opts: &SolverOptions,
) -> Result<EigenBasis> {
    solve(g, mask, t, opts, None, Order::Algebraic)
}

/// The `t` eigen-pairs of largest absolute value, stored by descending
/// eigenvalue like any basis. Spectral triangle estimates need these, since
/// the cubes of paired negative eigenvalues cancel those of the bulk.
pub fn largest_magnitude_eigenpairs(
    g: &Graph,
    mask: Option<&ActiveSet>,
    t: usize,
    opts: &SolverOptions,
) -> Result<EigenBasis> {
    solve(g, mask, t, opts, None, Order::Magnitude)
}

/// Like [`top_eigenpairs`], but seeds the iterative solver with the vectors
/// of an approximate basis (for example one kept current by perturbation
/// updates). The result does not depend on `start` beyond solver tolerance.
pub fn top_eigenpairs_warm(
    g: &Graph,
    mask: Option<&ActiveSet>,
    t: usize,
    opts: &SolverOptions,
    start: &EigenBasis,
) -> Result<EigenBasis> {
    solve(g, mask, t, opts, Some(start), Order::Algebraic)
}

fn solve(
    g: &Graph,
    mask: Option<&ActiveSet>,
    t: usize,
    opts: &SolverOptions,
    start: Option<&EigenBasis>,
    order: Order,
) -> Result<EigenBasis> {
    if t == 0 {
        return Err(invalid("t must be at least 1"));
    }
    if !(opts.tol > 0.0) {
        return Err(invalid("solver tolerance must be positive"));
    }
    let active: Vec<usize> = match mask {
        Some(m) => {
            if m.universe() != g.n() {
                return Err(invalid("active mask does not match graph size"));
            }
            m.iter().collect()
        }
        None => (0..g.n()).collect(),
    };
    let z = active.len();
    if z == 0 {
        return Err(invalid("no active vertices"));
    }
    let t = t.min(z);
    let csr = LocalCsr::new(g, &active);
    let kmax = z.min((2 * t).max(t + 64));

    let local_pairs = if z <= opts.dense_cutoff || kmax >= z {
        dense_pairs(&csr, t, order)
    } else {
        let start_vectors = match start {
            Some(basis) if basis.dimension() == g.n() => basis
                .vectors()
                .iter()
                .map(|u| active.iter().map(|&v| u[v]).collect())
                .collect(),
            _ => Vec::new(),
        };
        krylov_pairs(&csr, t, kmax, opts, start_vectors, order)?
    };

    let pairs = local_pairs
        .into_iter()
        .map(|(theta, mut x)| {
            fix_sign(&mut x);
            let mut host = vec![0.0; g.n()];
            for (&v, xi) in active.iter().zip(x) {
                host[v] = xi;
            }
            (theta, host)
        })
        .collect();
    EigenBasis::from_pairs(pairs, z)
}

fn dense_pairs(csr: &LocalCsr, t: usize, order: Order) -> Vec<(f64, Vec<f64>)> {
    let eig = symmetric_eigen(csr.dense());
    let mut idx: Vec<usize> = (0..csr.len()).collect();
    order.sort(&mut idx, &eig.eigenvalues);
    idx.into_iter()
        .take(t)
        .map(|i| (eig.eigenvalues[i], eig.eigenvectors.column(i).iter().copied().collect()))
        .collect()
}

struct Krylov<'a> {
    csr: &'a LocalCsr,
    /// Orthonormal basis columns; only the first `len` are in use.
    v: DMatrix<f64>,
    /// `A` times each basis column.
    av: DMatrix<f64>,
    len: usize,
    rng: ChaCha8Rng,
}

impl Krylov<'_> {
    fn random_vector(&mut self) -> DVector<f64> {
        DVector::from_fn(self.csr.len(), |_, _| self.rng.gen::<f64>() - 0.5)
    }

    fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(x.len());
        self.csr.apply(x.as_slice(), out.as_mut_slice());
        out
    }

    /// Orthonormalizes `x` against the basis (twice) and appends it together
    /// with `A x`. Directions that vanish are replaced by random ones.
    fn push(&mut self, mut x: DVector<f64>) {
        if self.len == self.v.ncols() {
            return;
        }
        for _attempt in 0..8 {
            let before = x.norm();
            if before > 0.0 {
                for _ in 0..2 {
                    if self.len > 0 {
                        let basis = self.v.columns(0, self.len);
                        let c = basis.tr_mul(&x);
                        x.gemv(-1.0, &basis, &c, 1.0);
                    }
                }
                let after = x.norm();
                if after > 1e-8 * before {
                    x /= after;
                    let ax = self.apply(&x);
                    self.v.set_column(self.len, &x);
                    self.av.set_column(self.len, &ax);
                    self.len += 1;
                    return;
                }
            }
            x = self.random_vector();
        }
    }

    fn full(&self) -> bool {
        self.len == self.v.ncols()
    }
}

fn krylov_pairs(
    csr: &LocalCsr,
    t: usize,
    kmax: usize,
    opts: &SolverOptions,
    start: Vec<Vec<f64>>,
    selection: Order,
) -> Result<Vec<(f64, Vec<f64>)>> {
    let dim = csr.len();
    let b = t.min(8);
    let keep = (t + (kmax - t) / 2).min(kmax - b);
    let mut k = Krylov {
        csr,
        v: DMatrix::zeros(dim, kmax),
        av: DMatrix::zeros(dim, kmax),
        len: 0,
        rng: ChaCha8Rng::seed_from_u64(opts.seed),
    };
    let warm = !start.is_empty();
    let mut block: Vec<DVector<f64>> = if !warm {
        (0..b).map(|_| k.random_vector()).collect()
    } else {
        start.into_iter().take(keep).map(DVector::from_vec).collect()
    };
    // Leading basis columns that are Ritz vectors with known values; their
    // block of V' A V is diagonal.
    let mut known: Vec<f64> = Vec::new();
    let mut best_residual = f64::INFINITY;
    let mut verified_fail = false;

    for restart in 0..=opts.max_restarts {
        // Grow the basis by Krylov blocks up to kmax. A warm start first
        // goes straight to Rayleigh-Ritz on the given vectors.
        if warm && restart == 0 {
            for x in block.drain(..) {
                k.push(x);
            }
        } else {
            loop {
                let first = k.len;
                for x in block.drain(..) {
                    k.push(x);
                }
                if k.full() {
                    break;
                }
                let from = first.max(k.len.saturating_sub(b));
                block = (from..k.len).map(|j| k.av.column(j).into_owned()).collect();
                if block.is_empty() {
                    block = (0..b).map(|_| k.random_vector()).collect();
                }
            }
        }

        // Rayleigh-Ritz on the stored projection.
        let m = k.len;
        let p = known.len();
        let mut h = DMatrix::zeros(m, m);
        for (i, &theta) in known.iter().enumerate() {
            h[(i, i)] = theta;
        }
        if p < m {
            let c = k.v.columns(0, m).tr_mul(&k.av.columns(p, m - p));
            for j in p..m {
                for i in 0..m {
                    let hij = if i >= p {
                        0.5 * (c[(i, j - p)] + c[(j, i - p)])
                    } else {
                        c[(i, j - p)]
                    };
                    h[(i, j)] = hij;
                    h[(j, i)] = hij;
                }
            }
        }
        let eig = symmetric_eigen(h);
        let mut order: Vec<usize> = (0..m).collect();
        selection.sort(&mut order, &eig.eigenvalues);
        let kept = keep.min(m);
        let thetas: Vec<f64> = order[..kept].iter().map(|&i| eig.eigenvalues[i]).collect();
        let y = DMatrix::from_fn(m, kept, |r, c| eig.eigenvectors[(r, order[c])]);
        let x = k.v.columns(0, m) * &y;
        let ax = k.av.columns(0, m) * &y;
        let mut residuals = ax.clone();
        for (c, &theta) in thetas.iter().enumerate() {
            residuals.column_mut(c).axpy(-theta, &x.column(c), 1.0);
        }

        let mut unconverged = Vec::new();
        let mut worst: f64 = 0.0;
        for (idx, &theta) in thetas.iter().enumerate().take(t) {
            let rn = residuals.column(idx).norm();
            worst = worst.max(rn / theta.abs().max(1.0));
            if rn > opts.tol * theta.abs().max(1.0) {
                unconverged.push(idx);
            }
        }
        best_residual = best_residual.min(worst);

        if unconverged.is_empty() {
            // Confirm against true products to rule out drift in the stored A V.
            let mut ok = true;
            let mut out = Vec::with_capacity(t);
            for (c, &theta) in thetas.iter().enumerate().take(t) {
                let xc = x.column(c).into_owned();
                let mut r = k.apply(&xc);
                r.axpy(-theta, &xc, 1.0);
                if r.norm() > opts.tol * theta.abs().max(1.0) {
                    ok = false;
                }
                out.push((theta, xc.as_slice().to_vec()));
            }
            if ok {
                return Ok(out);
            }
            if verified_fail {
                return Err(Error::NonConvergence {
                    iterations: restart,
                    best_residual,
                });
            }
            verified_fail = true;
        }
        if restart == opts.max_restarts {
            break;
        }

        // Thick restart: keep the leading Ritz vectors, then expand with
        // residuals of unconverged pairs. After a failed verification the
        // stored products are rebuilt exactly.
        k.v.columns_mut(0, kept).copy_from(&x);
        if verified_fail {
            for c in 0..kept {
                let exact = k.apply(&x.column(c).into_owned());
                k.av.set_column(c, &exact);
            }
            known.clear();
        } else {
            k.av.columns_mut(0, kept).copy_from(&ax);
            known = thetas;
        }
        k.len = kept;
        block = unconverged
            .iter()
            .take(b)
            .map(|&i| residuals.column(i).into_owned())
            .collect();
        let mut extra = t;
        while block.len() < b && extra < kept {
            block.push(residuals.column(extra).into_owned());
            extra += 1;
        }
    }
    Err(Error::NonConvergence {
        iterations: opts.max_restarts,
        best_residual,
    })
}
