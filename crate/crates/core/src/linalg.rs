//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::SVD;

use crate::{Error, Matrix, Result, Vector};

/// Singular value decomposition with singular values in descending order.
pub fn svd(m: &Matrix) -> SVD<f64, nalgebra::Dyn, nalgebra::Dyn> {
    SVD::new(m.clone(), true, true)
}

pub fn check_finite(m: &Matrix) -> Result<()> {
    if m.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

pub fn check_square(m: &Matrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "expected a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.nrows() == 0 {
        return Err(Error::DimensionMismatch("empty matrix".into()));
    }
    check_finite(m)?;
    Ok(m.nrows())
}

/// Ratio of largest to smallest singular value (infinite when singular).
pub fn condition_number(m: &Matrix) -> f64 {
    if m.ncols() == 0 || m.nrows() == 0 {
        return 1.0;
    }
    let sv = m.singular_values();
    let max = sv.max();
    let min = sv.min();
    if min <= 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Numerical rank: singular values above `tol * sigma_max`.
pub fn rank(m: &Matrix, tol: f64) -> usize {
    if m.ncols() == 0 || m.nrows() == 0 {
        return 0;
    }
    let sv = m.singular_values();
    let max = sv.max();
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * max).count()
}

/// The `dim` right singular vectors of `m` with smallest singular values,
/// as columns, together with the largest of those singular values.
pub fn null_space(m: &Matrix, dim: usize) -> (Matrix, f64) {
    let n = m.ncols();
    if dim == 0 {
        return (Matrix::zeros(n, 0), 0.0);
    }
    // Thin SVD of a wide matrix drops null directions; pad to square.
    let padded;
    let a = if m.nrows() < n {
        padded = {
            let mut p = Matrix::zeros(n, n);
            p.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
            p
        };
        &padded
    } else {
        m
    };
    let svd = svd(a);
    let v_t = svd.v_t.expect("svd computed with v");
    let k = svd.singular_values.len();
    let mut basis = Matrix::zeros(n, dim);
    for j in 0..dim {
        let row = k - dim + j;
        basis.set_column(j, &v_t.row(row).transpose());
    }
    let residual = svd.singular_values[k - dim];
    (basis, residual)
}

/// Orthonormal basis for the column span of `basis`. Fails when the columns
/// are numerically dependent (smallest singular value below `floor` times the
/// largest).
pub fn orthonormalize(basis: &Matrix, floor: f64) -> Result<Matrix> {
    let k = basis.ncols();
    if k == 0 {
        return Ok(Matrix::zeros(basis.nrows(), 0));
    }
    let svd = svd(basis);
    let sv = &svd.singular_values;
    let max = sv[0];
    let min = sv[sv.len() - 1];
    if sv.len() < k || max == 0.0 || min <= floor * max {
        return Err(Error::DependentBasis {
            sigma_min: if max > 0.0 { min / max } else { 0.0 },
        });
    }
    let u = svd.u.expect("svd computed with u");
    Ok(u.columns(0, k).into_owned())
}

/// Orthonormal basis of the column span, discarding dependent directions
/// below `tol` (relative).
pub fn range_basis(m: &Matrix, tol: f64) -> Matrix {
    if m.ncols() == 0 {
        return Matrix::zeros(m.nrows(), 0);
    }
    let r = rank(m, tol);
    let svd = svd(m);
    let u = svd.u.expect("svd computed with u");
    u.columns(0, r).into_owned()
}

/// Concatenate column blocks side by side.
pub fn hstack(blocks: &[&Matrix]) -> Matrix {
    let rows = blocks.first().map(|b| b.nrows()).unwrap_or(0);
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = Matrix::zeros(rows, cols);
    let mut c = 0;
    for b in blocks {
        out.view_mut((0, c), (rows, b.ncols())).copy_from(*b);
        c += b.ncols();
    }
    out
}

/// Solve `a x = b` via LU; reports the condition estimate when it exceeds
/// `max_condition`.
pub fn solve(a: &Matrix, b: &Vector, max_condition: f64) -> Result<Vector> {
    let cond = condition_number(a);
    if !cond.is_finite() || cond > max_condition {
        return Err(Error::IllConditioned { condition: cond });
    }
    a.clone()
        .lu()
        .solve(b)
        .ok_or(Error::IllConditioned { condition: cond })
}

/// Moore-Penrose pseudo-inverse applied to `b` (minimum-norm least squares).
pub fn min_norm_solve(a: &Matrix, b: &Vector, tol: f64) -> Vector {
    let svd = svd(a);
    let u = svd.u.as_ref().expect("u");
    let v_t = svd.v_t.as_ref().expect("v_t");
    let sv = &svd.singular_values;
    let max = if sv.is_empty() { 0.0 } else { sv[0] };
    let mut x = Vector::zeros(a.ncols());
    for i in 0..sv.len() {
        if sv[i] > tol * max {
            let coeff = u.column(i).dot(b) / sv[i];
            x += v_t.row(i).transpose() * coeff;
        }
    }
    x
}

/// Projection matrix onto the orthogonal complement of an orthonormal basis.
pub fn complement_projector(q: &Matrix) -> Matrix {
    let n = q.nrows();
    Matrix::identity(n, n) - q * q.transpose()
}

pub fn frobenius(m: &Matrix) -> f64 {
    m.norm()
}

/// Operator 2-norm.
pub fn op_norm(m: &Matrix) -> f64 {
    if m.ncols() == 0 || m.nrows() == 0 {
        return 0.0;
    }
    m.singular_values().max()
}

/// Matrix power for integer exponents (negative uses the inverse).
pub fn matrix_power(m: &Matrix, exp: i64) -> Result<Matrix> {
    let n = check_square(m)?;
    let base = if exp < 0 {
        m.clone().try_inverse().ok_or(Error::Singular {
            det: m.determinant(),
        })?
    } else {
        m.clone()
    };
    let mut result = Matrix::identity(n, n);
    let mut acc = base;
    let mut e = exp.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            result = &result * &acc;
        }
        e >>= 1;
        if e > 0 {
            acc = &acc * &acc;
        }
    }
    Ok(result)
}

/// Block-diagonal matrix from square blocks.
pub fn block_diag(blocks: &[&Matrix]) -> Matrix {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = Matrix::zeros(n, n);
    let mut o = 0;
    for b in blocks {
        out.view_mut((o, o), (b.nrows(), b.ncols())).copy_from(*b);
        o += b.nrows();
    }
    out
}

pub fn from_rows(rows: &[Vec<f64>]) -> Matrix {
    let r = rows.len();
    let c = rows.first().map(|x| x.len()).unwrap_or(0);
    Matrix::from_fn(r, c, |i, j| rows[i][j])
}

pub fn to_rows(m: &Matrix) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

/// Standard basis vector `e_i` in `R^n`.
pub fn unit(n: usize, i: usize) -> Vector {
    let mut v = Vector::zeros(n);
    v[i] = 1.0;
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_space_of_wide_matrix() {
        let m = from_rows(&[vec![1.0, 0.0, 0.0]]);
        let (ns, res) = null_space(&m, 2);
        assert!(res < 1e-14);
        assert!((&m * &ns).norm() < 1e-14);
        assert_eq!(rank(&ns, 1e-10), 2);
    }

    #[test]
    fn power_matches_repeated_product() {
        let m = from_rows(&[vec![1.0, 2.0], vec![0.5, 3.0]]);
        let p3 = matrix_power(&m, 3).unwrap();
        assert!((p3 - &m * &m * &m).norm() < 1e-12);
        let pm2 = matrix_power(&m, -2).unwrap();
        assert!((pm2 * &m * &m - Matrix::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn orthonormalize_rejects_dependent_columns() {
        let m = from_rows(&[vec![1.0, 2.0], vec![1.0, 2.0], vec![0.0, 0.0]]);
        assert!(matches!(
            orthonormalize(&m, 1e-10),
            Err(Error::DependentBasis { .. })
        ));
    }

    #[test]
    fn min_norm_solution_is_orthogonal_to_kernel() {
        let a = from_rows(&[
            vec![1.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0],
            vec![0.0, 0.0, 2.0],
        ]);
        let b = Vector::from_vec(vec![3.0, 0.0, 4.0]);
        let x = min_norm_solve(&a, &b, 1e-12);
        assert!((x - Vector::from_vec(vec![3.0, 0.0, 2.0])).norm() < 1e-14);
    }
}
