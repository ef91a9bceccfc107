//! Affine maps `x -> l x + tau`, their fixed points, invariant lines and the
//! affine subspaces `E+ = D+ + L_g`, `E- = D- + L_g`.

use crate::linalg::{self, check_square};
use crate::projective::Subspace;
use crate::spectral::{self, SpectralConfig};
use crate::{Error, Matrix, Result, Vector};

/// Default tolerance on `|lambda - 1|` when deciding whether 1 is an eigenvalue.
pub const EIGENVALUE_ONE_TOL: f64 = 1e-8;

/// Largest condition number accepted by the fixed-point solve.
const MAX_SOLVE_CONDITION: f64 = 1e13;

/// An element of `Aff(R^n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap {
    pub linear: Matrix,
    pub translation: Vector,
}

impl AffineMap {
    pub fn new(linear: Matrix, translation: Vector) -> Result<Self> {
        let n = check_square(&linear)?;
        if translation.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "translation of length {} for a {n}x{n} linear part",
                translation.len()
            )));
        }
        if translation.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let det = linear.determinant();
        if det == 0.0 || !det.is_finite() {
            return Err(Error::Singular { det });
        }
        Ok(Self {
            linear,
            translation,
        })
    }

    pub fn linear_only(linear: Matrix) -> Result<Self> {
        let n = linear.nrows();
        Self::new(linear, Vector::zeros(n))
    }

    pub fn translation_only(t: Vector) -> Self {
        let n = t.len();
        Self {
            linear: Matrix::identity(n, n),
            translation: t,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::translation_only(Vector::zeros(n))
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn apply(&self, x: &Vector) -> Vector {
        &self.linear * x + &self.translation
    }

    /// `self o other`: first `other`, then `self`.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        AffineMap {
            linear: &self.linear * &other.linear,
            translation: &self.linear * &other.translation + &self.translation,
        }
    }

    pub fn inverse(&self) -> Result<AffineMap> {
        let inv = self.linear.clone().try_inverse().ok_or(Error::Singular {
            det: self.linear.determinant(),
        })?;
        let t = -(&inv * &self.translation);
        Ok(AffineMap {
            linear: inv,
            translation: t,
        })
    }

    pub fn power(&self, exp: i64) -> Result<AffineMap> {
        let base = if exp < 0 {
            self.inverse()?
        } else {
            self.clone()
        };
        let mut result = AffineMap::identity(self.dim());
        let mut acc = base;
        let mut e = exp.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = result.compose(&acc);
            }
            e >>= 1;
            if e > 0 {
                acc = acc.compose(&acc);
            }
        }
        Ok(result)
    }

    /// `x o self o x^-1`.
    pub fn conjugate_by(&self, x: &AffineMap) -> Result<AffineMap> {
        Ok(x.compose(self).compose(&x.inverse()?))
    }
}

/// True when some eigenvalue `z` of `l` has `|z - 1| <= tol`.
pub fn has_eigenvalue_one(l: &Matrix, tol: f64) -> Result<bool> {
    Ok(spectral::eigenvalues(l)?
        .iter()
        .any(|z| (z - nalgebra::Complex::new(1.0, 0.0)).norm() <= tol))
}

/// The unique fixed point when 1 is not an eigenvalue of `l(g)`.
pub fn fixed_point(g: &AffineMap, tol: f64) -> Result<Option<Vector>> {
    if has_eigenvalue_one(&g.linear, tol)? {
        return Ok(None);
    }
    let n = g.dim();
    let a = Matrix::identity(n, n) - &g.linear;
    let mut p = linalg::solve(&a, &g.translation, MAX_SOLVE_CONDITION)?;
    // One step of iterative refinement.
    let r = &g.translation - &a * &p;
    if let Ok(dp) = linalg::solve(&a, &r, MAX_SOLVE_CONDITION) {
        p += dp;
    }
    Ok(Some(p))
}

/// The `g`-invariant line closest to the origin and the translation along it.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantLine {
    pub point: Vector,
    pub direction: Vector,
    pub t_g: Vector,
}

impl InvariantLine {
    pub fn at(&self, s: f64) -> Vector {
        &self.point + &self.direction * s
    }
}

/// `L_g` and `t_g` for a regular map acting trivially on its neutral space.
pub fn invariant_line(g: &AffineMap, cfg: &SpectralConfig) -> Result<InvariantLine> {
    let split = spectral::three_splitting(&g.linear, cfg)?;
    line_from_split(g, &split)
}

pub(crate) fn line_from_split(
    g: &AffineMap,
    split: &spectral::SpectralSplit,
) -> Result<InvariantLine> {
    let n = g.dim();
    if split.azero.is_zero() {
        return Err(Error::NotRegular(
            "linear part has no eigenvalue of modulus one".into(),
        ));
    }
    if split.aplus.is_zero() && split.aminus.is_zero() {
        return Err(Error::NotRegular(
            "linear part has no expanding or contracting directions".into(),
        ));
    }
    let id = Matrix::identity(n, n);
    let lm = &g.linear - &id;
    let k = split.azero.basis();
    let residual = linalg::op_norm(&(&lm * k));
    if residual > 1e-7 * (1.0 + linalg::op_norm(&g.linear)) {
        return Err(Error::NontrivialNeutralAction { residual });
    }
    let c = split.aplus.sum(&split.aminus);
    let kc = linalg::hstack(&[k, c.basis()]);
    let coeffs = linalg::solve(&kc, &g.translation, 1e12)?;
    let d0 = k.ncols();
    let t_g = k * coeffs.rows(0, d0);
    let tau_perp = &g.translation - &t_g;
    let tn = t_g.norm();
    if tn <= 1e-12 * (1.0 + g.translation.norm()) {
        return Err(Error::ZeroNeutralTranslation);
    }
    let point = linalg::min_norm_solve(&lm, &(-tau_perp), 1e-10);
    Ok(InvariantLine {
        point,
        direction: &t_g / tn,
        t_g,
    })
}

/// An affine subspace `point + span(directions)`.
#[derive(Debug, Clone)]
pub struct AffineSubspace {
    pub point: Vector,
    pub directions: Subspace,
}

impl AffineSubspace {
    /// Euclidean distance from `x` to the affine subspace.
    pub fn distance(&self, x: &Vector) -> f64 {
        let d = x - &self.point;
        let q = self.directions.basis();
        (&d - q * (q.transpose() * &d)).norm()
    }

    /// How far `g` moves the subspace off itself: image of the point plus
    /// images of the direction vectors.
    pub fn invariance_residual(&self, g: &AffineMap) -> f64 {
        let mut worst = self.distance(&g.apply(&self.point));
        let q = self.directions.basis();
        let gq = &g.linear * q;
        let back = q * (q.transpose() * &gq);
        for j in 0..gq.ncols() {
            let col = gq.column(j);
            let rel = (col - back.column(j)).norm() / col.norm().max(1e-300);
            worst = worst.max(rel);
        }
        worst
    }
}

/// `E+ = D+(g) + L_g` and `E- = D-(g) + L_g`.
pub fn affine_subspaces(
    g: &AffineMap,
    cfg: &SpectralConfig,
) -> Result<(AffineSubspace, AffineSubspace)> {
    let split = spectral::three_splitting(&g.linear, cfg)?;
    let line = line_from_split(g, &split)?;
    Ok((
        AffineSubspace {
            point: line.point.clone(),
            directions: split.dplus(),
        },
        AffineSubspace {
            point: line.point,
            directions: split.dminus(),
        },
    ))
}
