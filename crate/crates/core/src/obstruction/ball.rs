use rayon::prelude::*;

use crate::affine::{fixed_point, invariant_line, AffineMap, EIGENVALUE_ONE_TOL};
use crate::projective::{rho, Subspace};
use crate::spectral::{self, SpectralConfig};
use crate::trs::solve_trs;
use crate::{Error, Result, Vector};

/// Both ball-membership inequalities must hold with at least this slack.
pub const BALL_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct BallHit {
    pub m: u32,
    pub n: u32,
    pub point: Vector,
    pub p1: Vector,
    pub p2: Vector,
    pub start_slack: f64,
    pub end_slack: f64,
}

/// A point of the invariant line, or the fixed point for maps without one.
fn center(g: &AffineMap, cfg: &SpectralConfig) -> Result<Vector> {
    if let Some(p) = fixed_point(g, EIGENVALUE_ONE_TOL)? {
        return Ok(p);
    }
    Ok(invariant_line(g, cfg)?.point)
}

/// Rejects `h` that commutes with `g` and shares its invariant subspaces
/// (a power of `g` up to the neutral part), where the search is meaningless.
fn check_distinct(g: &AffineMap, h: &AffineMap, cfg: &SpectralConfig) -> Result<()> {
    let (a, b) = (&g.linear, &h.linear);
    let comm = (a * b - b * a).norm();
    if comm > 1e-9 * a.norm() * b.norm() {
        return Ok(());
    }
    let (dg, dh) = (
        spectral::three_splitting(a, cfg)?,
        spectral::three_splitting(b, cfg)?,
    );
    let same = |x: &Subspace, y: &Subspace| -> Result<bool> {
        if x.is_zero() || y.is_zero() {
            return Ok(x.is_zero() && y.is_zero());
        }
        Ok(x.dim() == y.dim() && rho(x, y)? < 1e-9)
    };
    let aligned = same(&dg.aplus, &dh.aplus)? && same(&dg.aminus, &dh.aminus)?;
    let flipped = same(&dg.aplus, &dh.aminus)? && same(&dg.aminus, &dh.aplus)?;
    if aligned || flipped {
        return Err(Error::OutOfRange(
            "h commutes with g and shares its invariant subspaces; pick a transversal pair".into(),
        ));
    }
    Ok(())
}

/// Searches `1 <= m, n <= max_exp` in the order `(m + n, m)` for a point `x`
/// with `|x - p1| <= radius` and `|h^m g^n x - p2| <= radius`, both with
/// slack at least [`BALL_SLACK`]. Here `p1` is on `L_g` and `p2` on `L_h`
/// (fixed points for maps without a neutral direction).
///
/// Each inner problem `min |M y - b|` over `|y| <= radius - slack`, with
/// `M = l(h^m g^n)` and `b = p2 - h^m g^n (p1)`, is solved exactly.
pub fn ball_intersection_witness(
    g: &AffineMap,
    h: &AffineMap,
    radius: f64,
    max_exp: u32,
    cfg: &SpectralConfig,
) -> Result<Option<BallHit>> {
    if g.dim() != h.dim() {
        return Err(Error::DimensionMismatch(format!(
            "maps on R^{} and R^{}",
            g.dim(),
            h.dim()
        )));
    }
    if !(radius > BALL_SLACK) || !radius.is_finite() {
        return Err(Error::OutOfRange(format!(
            "radius {radius} must exceed the slack {BALL_SLACK:e}"
        )));
    }
    check_distinct(g, h, cfg)?;
    let p1 = center(g, cfg)?;
    let p2 = center(h, cfg)?;
    let inner = radius - BALL_SLACK;

    let mut order: Vec<(u32, u32)> = Vec::new();
    for total in 2..=2 * max_exp {
        for m in 1..=max_exp {
            if total > m && total - m <= max_exp {
                order.push((m, total - m));
            }
        }
    }
    let gp: Vec<AffineMap> = (0..=max_exp as i64)
        .map(|k| g.power(k))
        .collect::<Result<_>>()?;
    let hp: Vec<AffineMap> = (0..=max_exp as i64)
        .map(|k| h.power(k))
        .collect::<Result<_>>()?;

    let hit = order.par_iter().find_map_first(|&(m, n)| {
        let f = hp[m as usize].compose(&gp[n as usize]);
        let b = &p2 - f.apply(&p1);
        let sol = solve_trs(&f.linear, &b, inner).ok()?;
        let x = &p1 + &sol.y;
        let start_slack = radius - (&x - &p1).norm();
        let end_slack = radius - (f.apply(&x) - &p2).norm();
        (start_slack >= BALL_SLACK && end_slack >= BALL_SLACK).then(|| BallHit {
            m,
            n,
            point: x,
            p1: p1.clone(),
            p2: p2.clone(),
            start_slack,
            end_slack,
        })
    });
    Ok(hit)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contractions_with_close_fixed_points_meet() {
        let g = AffineMap::new(
            crate::linalg::from_rows(&[vec![0.5, 0.1], vec![0.1, 0.3]]),
            Vector::from_vec(vec![0.0, 0.0]),
        )
        .unwrap();
        let h = AffineMap::new(
            crate::linalg::from_rows(&[vec![0.5, 0.1], vec![0.0, 0.4]]),
            Vector::from_vec(vec![1.0, 0.0]),
        )
        .unwrap();
        let hit = ball_intersection_witness(&g, &h, 5.0, 3, &SpectralConfig::default())
            .unwrap()
            .unwrap();
        assert_eq!((hit.m, hit.n), (1, 1));
        assert!(hit.start_slack >= BALL_SLACK && hit.end_slack >= BALL_SLACK);
    }

    #[test]
    fn far_apart_expansions_do_not_meet() {
        let g = AffineMap::new(
            crate::linalg::from_rows(&[vec![3.0, 0.5], vec![0.5, 2.0]]),
            Vector::from_vec(vec![0.0, 0.0]),
        )
        .unwrap();
        let h = AffineMap::new(
            crate::linalg::from_rows(&[vec![2.0, 0.0], vec![0.0, 4.0]]),
            Vector::from_vec(vec![-100.0, 0.0]),
        )
        .unwrap();
        let hit = ball_intersection_witness(&g, &h, 1.0, 3, &SpectralConfig::default()).unwrap();
        assert!(hit.is_none());
    }
}
