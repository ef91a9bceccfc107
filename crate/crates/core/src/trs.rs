//! Norm-constrained least squares: `min |M y - b|` subject to `|y| <= r`.
//!
//! Solved exactly through the SVD of `M`. If the minimum-norm unconstrained
//! minimizer lies inside the ball it is the answer; otherwise the solution is
//! `y(mu) = (M^T M + mu I)^-1 M^T b` with the unique `mu > 0` for which
//! `|y(mu)| = r`, found by bisection on `log mu` (the norm is monotone in `mu`).

use crate::linalg;
use crate::{Error, Matrix, Result, Vector};

#[derive(Debug, Clone, PartialEq)]
pub struct TrsSolution {
    pub y: Vector,
    /// `|M y - b|` at the solution.
    pub residual: f64,
    /// Lagrange multiplier; zero for an interior solution.
    pub mu: f64,
}

pub fn solve_trs(m: &Matrix, b: &Vector, radius: f64) -> Result<TrsSolution> {
    if m.nrows() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix with right-hand side of length {}",
            m.nrows(),
            m.ncols(),
            b.len()
        )));
    }
    if !(radius >= 0.0) || !radius.is_finite() {
        return Err(Error::OutOfRange(format!("radius {radius}")));
    }
    linalg::check_finite(m)?;
    if b.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let svd = linalg::svd(m);
    let u = svd.u.as_ref().expect("u requested");
    let vt = svd.v_t.as_ref().expect("v_t requested");
    let sigma = &svd.singular_values;
    let c = u.transpose() * b;
    let smax = sigma.iter().cloned().fold(0.0, f64::max);
    let floor = smax * 1e-14 * m.nrows().max(m.ncols()) as f64;

    let coeffs = |mu: f64| -> Vector {
        Vector::from_fn(sigma.len(), |i, _| {
            let s = sigma[i];
            if s <= floor {
                0.0
            } else {
                s * c[i] / (s * s + mu)
            }
        })
    };
    let finish = |z: Vector, mu: f64| -> TrsSolution {
        let y = vt.transpose() * z;
        let residual = (m * &y - b).norm();
        TrsSolution { y, residual, mu }
    };

    let z0 = coeffs(0.0);
    if z0.norm() <= radius {
        return Ok(finish(z0, 0.0));
    }
    if radius == 0.0 {
        return Ok(finish(Vector::zeros(sigma.len()), f64::INFINITY));
    }
    // |z(mu)| <= |M^T b| / mu, so this upper bound is feasible.
    let mut hi = (smax * c.norm() / radius).max(f64::MIN_POSITIVE);
    let mut lo = hi;
    while coeffs(lo).norm() <= radius && lo > 1e-300 {
        lo *= 1e-3;
    }
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if coeffs(mid).norm() > radius {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi / lo - 1.0 < 1e-15 {
            break;
        }
    }
    // `hi` is on the feasible side.
    Ok(finish(coeffs(hi), hi))
}
