use rand::Rng;

use crate::linalg::orthonormalize;
use crate::projective::{proj_distance, Subspace};
use crate::sampling::{gaussian_matrix, random_frame, seeded};
use crate::{Error, Matrix, Result};

/// Estimate of `inf_U sum_j d_hat(U, F_j) / 100` over subspaces `U` of a
/// fixed dimension.
#[derive(Debug, Clone)]
pub struct MarginEstimate {
    /// The infimum divided by 100.
    pub value: f64,
    /// The infimum itself.
    pub infimum: f64,
    /// The best subspace found.
    pub achiever: Subspace,
    pub evaluations: usize,
}

fn objective(u: &Subspace, family: &[Subspace]) -> Result<f64> {
    let mut s = 0.0;
    for f in family {
        s += proj_distance(u, f)?;
    }
    Ok(s)
}

/// Seeded random sampling of `samples` subspaces of dimension `dim_u`
/// (plus the family members of that dimension), followed by a shrinking
/// random-perturbation descent from the best few.
pub fn transversality_margin(
    family: &[Subspace],
    dim_u: usize,
    samples: usize,
    seed: u64,
) -> Result<MarginEstimate> {
    let Some(first) = family.first() else {
        return Err(Error::OutOfRange("the subspace family is empty".into()));
    };
    let n = first.ambient();
    if family.iter().any(|f| f.ambient() != n || f.is_zero()) {
        return Err(Error::DimensionMismatch(
            "family members must be nonzero subspaces of one space".into(),
        ));
    }
    if dim_u == 0 || dim_u > n {
        return Err(Error::OutOfRange(format!("dim_U = {dim_u} in R^{n}")));
    }
    let mut rng = seeded(seed);
    let mut evaluations = 0;
    let mut pool: Vec<(f64, Matrix)> = Vec::new();
    let mut consider = |basis: Matrix, evaluations: &mut usize| -> Result<()> {
        let u = Subspace::new(basis.clone())?;
        *evaluations += 1;
        pool.push((objective(&u, family)?, u.basis().clone()));
        Ok(())
    };
    for f in family.iter().filter(|f| f.dim() == dim_u) {
        consider(f.basis().clone(), &mut evaluations)?;
    }
    for _ in 0..samples.max(1) {
        consider(random_frame(&mut rng, n, dim_u), &mut evaluations)?;
    }
    pool.sort_by(|a, b| a.0.total_cmp(&b.0));
    pool.truncate(4);

    let mut best = pool[0].clone();
    for (start_val, start) in pool {
        let (mut val, mut basis) = (start_val, start);
        let mut step = 0.3;
        while step > 1e-9 {
            let mut improved = false;
            for _ in 0..12 {
                let trial = &basis + gaussian_matrix(&mut rng, n, dim_u) * step;
                let Ok(q) = orthonormalize(&trial, 1e-12) else {
                    continue;
                };
                let u = Subspace::new(q)?;
                evaluations += 1;
                let v = objective(&u, family)?;
                if v < val {
                    val = v;
                    basis = u.basis().clone();
                    improved = true;
                }
            }
            if !improved {
                step *= 0.5;
            } else if rng.random_bool(0.5) {
                step *= 1.2;
            }
        }
        if val < best.0 {
            best = (val, basis);
        }
    }
    Ok(MarginEstimate {
        value: best.0 / 100.0,
        infimum: best.0,
        achiever: Subspace::new(best.1)?,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unit;
    use crate::Vector;

    fn line(v: Vector) -> Subspace {
        Subspace::line(&v).unwrap()
    }

    #[test]
    fn single_line_has_zero_margin() {
        let est = transversality_margin(&[line(unit(3, 0))], 1, 50, 1).unwrap();
        assert!(est.value.abs() < 1e-12);
        assert!(est.achiever.relative_residual(&unit(3, 0)) < 1e-9);
    }

    #[test]
    fn coordinate_axes_match_a_grid() {
        let fam: Vec<Subspace> = (0..3).map(|i| line(unit(3, i))).collect();
        let est = transversality_margin(&fam, 1, 200, 2).unwrap();
        // Dense grid on the upper hemisphere.
        let mut grid = f64::INFINITY;
        let k = 200;
        for i in 0..=k {
            let th = std::f64::consts::FRAC_PI_2 * i as f64 / k as f64;
            for j in 0..(4 * k) {
                let ph = std::f64::consts::TAU * j as f64 / (4 * k) as f64;
                let u = Vector::from_vec(vec![th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()]);
                grid = grid.min(objective(&line(u), &fam).unwrap());
            }
        }
        assert!((est.infimum - grid).abs() <= 0.05 * grid);
        assert!((est.value - 0.02).abs() < 1e-6);
    }

    #[test]
    fn scaling_members_changes_nothing() {
        let a = vec![
            line(Vector::from_vec(vec![1.0, 2.0, 0.5])),
            line(Vector::from_vec(vec![0.0, 1.0, -1.0])),
        ];
        let b = vec![
            line(Vector::from_vec(vec![-3.0, -6.0, -1.5])),
            line(Vector::from_vec(vec![0.0, 0.25, -0.25])),
        ];
        let ea = transversality_margin(&a, 2, 100, 5).unwrap();
        let eb = transversality_margin(&b, 2, 100, 5).unwrap();
        assert!((ea.value - eb.value).abs() < 1e-9);
    }
}
