//! Distances on projective space and between projectivized subspaces.
//!
//! Points of `P(R^n)` are lines; the distance between two lines is the sine of
//! the angle between them. For subspaces, `d_hat` is the infimum of that
//! distance over the two projectivized sets (sine of the smallest principal
//! angle) and `rho_hat` is the Hausdorff distance (for equal dimensions, sine
//! of the largest principal angle).

use serde::{Deserialize, Serialize};

use crate::linalg::{self, complement_projector};
use crate::{Error, Matrix, Result, Vector};

/// Relative floor on singular values when accepting a spanning set.
pub const INDEPENDENCE_FLOOR: f64 = 1e-10;

/// A linear subspace of `R^n` stored by an orthonormal basis (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    basis: Matrix,
}

impl Subspace {
    /// Builds the span of the columns of `basis`, which must be independent.
    pub fn new(basis: Matrix) -> Result<Self> {
        linalg::check_finite(&basis)?;
        let basis = linalg::orthonormalize(&basis, INDEPENDENCE_FLOOR)?;
        Ok(Self { basis })
    }

    pub fn from_vectors(ambient: usize, vectors: &[Vector]) -> Result<Self> {
        let mut m = Matrix::zeros(ambient, vectors.len());
        for (j, v) in vectors.iter().enumerate() {
            if v.len() != ambient {
                return Err(Error::DimensionMismatch(format!(
                    "vector of length {} in R^{}",
                    v.len(),
                    ambient
                )));
            }
            m.set_column(j, v);
        }
        Self::new(m)
    }

    pub fn line(v: &Vector) -> Result<Self> {
        if v.norm() == 0.0 {
            return Err(Error::ZeroSubspace);
        }
        Self::from_vectors(v.len(), std::slice::from_ref(v))
    }

    pub fn zero(ambient: usize) -> Self {
        Self {
            basis: Matrix::zeros(ambient, 0),
        }
    }

    pub fn whole(ambient: usize) -> Self {
        Self {
            basis: Matrix::identity(ambient, ambient),
        }
    }

    /// Caller guarantees orthonormal columns.
    pub(crate) fn from_orthonormal(basis: Matrix) -> Self {
        Self { basis }
    }

    /// Span of the standard basis vectors with the given indices.
    pub fn coordinate(ambient: usize, indices: &[usize]) -> Self {
        let mut m = Matrix::zeros(ambient, indices.len());
        for (j, &i) in indices.iter().enumerate() {
            m[(i, j)] = 1.0;
        }
        Self { basis: m }
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient(&self) -> usize {
        self.basis.nrows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn vector(&self, j: usize) -> Vector {
        self.basis.column(j).into_owned()
    }

    /// Orthogonal projector onto the subspace.
    pub fn projector(&self) -> Matrix {
        &self.basis * self.basis.transpose()
    }

    /// Euclidean distance of `v` from the subspace, relative to `|v|`.
    pub fn relative_residual(&self, v: &Vector) -> f64 {
        let nv = v.norm();
        if nv == 0.0 {
            return 0.0;
        }
        let proj = &self.basis * (self.basis.transpose() * v);
        (v - proj).norm() / nv
    }

    /// Sum of two subspaces (dependent directions dropped).
    pub fn sum(&self, other: &Subspace) -> Subspace {
        let stacked = linalg::hstack(&[&self.basis, &other.basis]);
        Subspace {
            basis: linalg::range_basis(&stacked, 1e-9),
        }
    }

    /// Image under a linear map.
    pub fn image(&self, m: &Matrix) -> Result<Subspace> {
        if m.ncols() != self.ambient() {
            return Err(Error::DimensionMismatch(format!(
                "map with {} columns applied to subspace of R^{}",
                m.ncols(),
                self.ambient()
            )));
        }
        Subspace::new(m * &self.basis)
    }

    /// Dimension of the intersection, from the rank of the concatenated bases.
    pub fn intersection_dim(&self, other: &Subspace, tol: f64) -> usize {
        let stacked = linalg::hstack(&[&self.basis, &other.basis]);
        self.dim() + other.dim() - linalg::rank(&stacked, tol)
    }

    /// Orthogonal complement.
    pub fn orthogonal_complement(&self) -> Subspace {
        let n = self.ambient();
        let (ns, _) = linalg::null_space(&self.basis.transpose(), n - self.dim());
        Subspace { basis: ns }
    }
}

fn check_pair(w1: &Subspace, w2: &Subspace) -> Result<()> {
    if w1.ambient() != w2.ambient() {
        return Err(Error::DimensionMismatch(format!(
            "subspaces of R^{} and R^{}",
            w1.ambient(),
            w2.ambient()
        )));
    }
    if w1.is_zero() || w2.is_zero() {
        return Err(Error::ZeroSubspace);
    }
    Ok(())
}

/// Sines of the principal angles between `w1` and `w2`, ascending. There are
/// `min(dim w1, dim w2)` of them.
pub fn principal_sines(w1: &Subspace, w2: &Subspace) -> Result<Vec<f64>> {
    check_pair(w1, w2)?;
    let (small, big) = if w1.dim() <= w2.dim() {
        (w1, w2)
    } else {
        (w2, w1)
    };
    let residual = complement_projector(big.basis()) * small.basis();
    let mut sines: Vec<f64> = residual
        .singular_values()
        .iter()
        .map(|s| s.clamp(0.0, 1.0))
        .collect();
    sines.sort_by(|a, b| a.total_cmp(b));
    Ok(sines)
}

/// Distance between the lines spanned by `u` and `v`: the sine of the angle
/// between them.
pub fn proj_point_distance(u: &Vector, v: &Vector) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch(format!(
            "vectors of length {} and {}",
            u.len(),
            v.len()
        )));
    }
    let nu = u.norm();
    let nv = v.norm();
    if nu == 0.0 || nv == 0.0 {
        return Err(Error::ZeroSubspace);
    }
    let u = u / nu;
    let v = v / nv;
    let perp = &u - &v * u.dot(&v);
    Ok(perp.norm().clamp(0.0, 1.0))
}

/// `d_hat(W1, W2)`: sine of the smallest principal angle.
pub fn proj_distance(w1: &Subspace, w2: &Subspace) -> Result<f64> {
    Ok(principal_sines(w1, w2)?[0])
}

/// Hausdorff distance between projectivized subspaces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hausdorff {
    pub value: f64,
    /// Set when the two subspaces have different dimensions.
    pub unequal_dims: bool,
}

/// `rho_hat(W1, W2)`. For equal dimensions this is the sine of the largest
/// principal angle; for unequal dimensions the value is still the Hausdorff
/// distance (which is then 1) and the result is flagged.
pub fn hausdorff_rho(w1: &Subspace, w2: &Subspace) -> Result<Hausdorff> {
    check_pair(w1, w2)?;
    let one_way = |a: &Subspace, b: &Subspace| -> f64 {
        let r = complement_projector(b.basis()) * a.basis();
        r.singular_values().max().clamp(0.0, 1.0)
    };
    let value = one_way(w1, w2).max(one_way(w2, w1));
    Ok(Hausdorff {
        value,
        unequal_dims: w1.dim() != w2.dim(),
    })
}

/// `rho_hat` value only.
pub fn rho(w1: &Subspace, w2: &Subspace) -> Result<f64> {
    Ok(hausdorff_rho(w1, w2)?.value)
}
