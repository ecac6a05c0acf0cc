use super::Graph;
use crate::error::{invalid, Result};
use crate::spectral::EigenBasis;

/// Spectral estimate of local triangle counts from a truncated eigenbasis:
/// `t(v) ~ 1/2 * sum_j lambda_j^3 * u_vj^2`, clamped at zero.
///
/// With the full spectrum this is exact, since `t(v) = (A^3)_vv / 2`. A
/// truncated basis should hold the largest-magnitude pairs
/// ([`crate::spectral::largest_magnitude_eigenpairs`]); the top algebraic
/// pairs of a sparse graph overcount badly.
pub fn approx_local_triangles(g: &Graph, basis: &EigenBasis) -> Result<Vec<f64>> {
    if basis.t() == 0 {
        return Err(invalid("approximate triangle counts need a nonempty eigenbasis"));
    }
    if basis.dimension() != g.n() {
        return Err(invalid("eigenbasis does not match graph size"));
    }
    let mut out = vec![0.0; g.n()];
    for (lambda, u) in basis.values().iter().zip(basis.vectors()) {
        let cube = lambda * lambda * lambda;
        for (acc, x) in out.iter_mut().zip(u) {
            *acc += cube * x * x;
        }
    }
    for x in &mut out {
        *x = (*x * 0.5).max(0.0);
    }
    Ok(out)
}
