//! Quadratic forms, orientations of maximal isotropic subspaces and the
//! Margulis sign.
//!
//! A nondegenerate form `B` of signature `(p, q)` is normalized to a frame
//! `v_1..v_p, w_1..w_q` in which `B = x_1^2 + .. + x_p^2 - y_1^2 - .. - y_q^2`.
//! `X = span(v_i)`, `Y = span(w_j)`; the reference orientations of `X` and
//! `Y` are the frame orders. A maximal isotropic `W` (dim `q`) is oriented by
//! pulling back the orientation of `Y` through `pi_Y`, and `W^perp` (dim `p`)
//! by pulling back the orientation of `X` through `pi_X`.

use serde::{Deserialize, Serialize};

use crate::affine::AffineMap;
use crate::linalg::{self, check_square};
use crate::projective::{proj_distance, Subspace};
use crate::spectral::{self, SpectralConfig};
use crate::{Error, Matrix, Result, Vector};

/// Relative floor on `|eigenvalue|` of a Gram matrix.
const DEGENERACY_FLOOR: f64 = 1e-12;
/// Relative tolerance for isotropy checks (`|Q^T G Q| <= tol |G|`).
const ISOTROPY_TOL: f64 = 1e-7;
/// Relative tolerance for `l^T G l = G`.
const GROUP_TOL: f64 = 1e-8;
/// Smallest principal sine accepted between two "distinct" isotropic subspaces.
const TRANSVERSAL_FLOOR: f64 = 1e-9;

/// A symmetric bilinear form with a normalized frame.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticForm {
    gram: Matrix,
    p: usize,
    q: usize,
    /// Columns `v_1..v_p, w_1..w_q`.
    frame: Matrix,
    frame_inv: Matrix,
}

impl QuadraticForm {
    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn signature(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    pub fn dim(&self) -> usize {
        self.p + self.q
    }

    pub fn frame(&self) -> &Matrix {
        &self.frame
    }

    pub fn v(&self, i: usize) -> Vector {
        self.frame.column(i).into_owned()
    }

    pub fn w(&self, j: usize) -> Vector {
        self.frame.column(self.p + j).into_owned()
    }

    pub fn b(&self, u: &Vector, v: &Vector) -> f64 {
        u.dot(&(&self.gram * v))
    }

    /// Membership in the cone `C_B = {B(v, v) < 0}`.
    pub fn in_cone(&self, v: &Vector) -> bool {
        self.b(v, v) < 0.0
    }

    /// Frame coordinates `(x_1..x_p, y_1..y_q)` of each column.
    pub fn coords(&self, m: &Matrix) -> Matrix {
        &self.frame_inv * m
    }

    pub fn x_coords(&self, m: &Matrix) -> Matrix {
        self.coords(m).rows(0, self.p).into_owned()
    }

    pub fn y_coords(&self, m: &Matrix) -> Matrix {
        self.coords(m).rows(self.p, self.q).into_owned()
    }

    pub fn x_space(&self) -> Subspace {
        Subspace::new(self.frame.columns(0, self.p).into_owned()).expect("frame is a basis")
    }

    pub fn y_space(&self) -> Subspace {
        Subspace::new(self.frame.columns(self.p, self.q).into_owned()).expect("frame is a basis")
    }

    /// `pi_X(v)`: projection onto `X` along `Y`.
    pub fn pi_x(&self, v: &Vector) -> Vector {
        let c = &self.frame_inv * v;
        self.frame.columns(0, self.p) * c.rows(0, self.p)
    }

    /// `pi_Y(v)`: projection onto `Y` along `X`.
    pub fn pi_y(&self, v: &Vector) -> Vector {
        let c = &self.frame_inv * v;
        self.frame.columns(self.p, self.q) * c.rows(self.p, self.q)
    }

    /// `W^perp = {z : B(z, W) = 0}`.
    pub fn perp(&self, w: &Subspace) -> Subspace {
        let n = self.dim();
        if w.is_zero() {
            return Subspace::whole(n);
        }
        let constraints = w.basis().transpose() * &self.gram;
        let (ns, _) = linalg::null_space(&constraints, n - w.dim());
        Subspace::new(ns).expect("null space basis is orthonormal")
    }

    /// `|Q^T G Q|` relative to `|G|` for the orthonormal basis `Q` of `w`.
    pub fn isotropy_residual(&self, w: &Subspace) -> f64 {
        (w.basis().transpose() * &self.gram * w.basis()).norm() / self.gram.norm()
    }

    /// `|l^T G l - G|` relative to `|G| max(1, |l|^2)`.
    pub fn preservation_residual(&self, l: &Matrix) -> f64 {
        let r = l.transpose() * &self.gram * l - &self.gram;
        let nl = linalg::op_norm(l).max(1.0);
        r.norm() / (self.gram.norm() * nl * nl)
    }

    /// Checks `l in SO(B)` within tolerance.
    pub fn check_in_group(&self, l: &Matrix) -> Result<()> {
        if l.nrows() != self.dim() || l.ncols() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} map for a form on R^{}",
                l.nrows(),
                l.ncols(),
                self.dim()
            )));
        }
        let residual = self.preservation_residual(l);
        if residual > GROUP_TOL || l.determinant() <= 0.0 {
            return Err(Error::NotInGroup { residual });
        }
        Ok(())
    }

    fn check_maximal_isotropic(&self, w: &Subspace) -> Result<()> {
        let residual = self.isotropy_residual(w);
        if w.dim() != self.q || w.ambient() != self.dim() || residual > ISOTROPY_TOL {
            return Err(Error::NotIsotropic {
                residual,
                dim: w.dim(),
            });
        }
        Ok(())
    }
}

/// Orthonormal eigenvectors for a cluster of equal eigenvalues, fixed by
/// projecting the standard basis into the eigenspace in order.
fn canonical_cluster_basis(q: &Matrix) -> Matrix {
    let n = q.nrows();
    let k = q.ncols();
    let proj = q * q.transpose();
    let mut out: Vec<Vector> = Vec::with_capacity(k);
    for i in 0..n {
        if out.len() == k {
            break;
        }
        let mut u = proj.column(i).into_owned();
        for b in &out {
            let c = b.dot(&u);
            u -= b * c;
        }
        let nu = u.norm();
        if nu > 1e-6 {
            out.push(u / nu);
        }
    }
    let mut m = Matrix::zeros(n, k);
    for (j, u) in out.iter().enumerate() {
        m.set_column(j, u);
    }
    m
}

fn first_nonzero_positive(v: &mut Vector) {
    let scale = v.amax();
    if let Some(x) = v.iter().find(|x| x.abs() > 1e-9 * scale).copied() {
        if x < 0.0 {
            *v *= -1.0;
        }
    }
}

/// Normalizes a nondegenerate symmetric Gram matrix.
pub fn normalize_form(gram: &Matrix) -> Result<QuadraticForm> {
    let n = check_square(gram)?;
    let asym = (gram - gram.transpose()).norm();
    if asym > 1e-12 * gram.norm().max(1.0) {
        return Err(Error::OutOfRange(format!(
            "Gram matrix is not symmetric (|G - G^T| = {asym:e})"
        )));
    }
    let sym = (gram + gram.transpose()) * 0.5;
    let eig = sym.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let vals: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let min_abs = vals.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
    if scale == 0.0 || min_abs <= DEGENERACY_FLOOR * scale {
        return Err(Error::DegenerateForm(min_abs));
    }
    let mut frame = Matrix::zeros(n, n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (vals[end] - vals[start]).abs() <= 1e-9 * scale {
            end += 1;
        }
        let mut q = Matrix::zeros(n, end - start);
        for (j, &i) in order[start..end].iter().enumerate() {
            q.set_column(j, &eig.eigenvectors.column(i));
        }
        let canon = canonical_cluster_basis(&q);
        for j in 0..(end - start) {
            let mut u = canon.column(j).into_owned();
            first_nonzero_positive(&mut u);
            let mu = u.dot(&(&sym * &u));
            frame.set_column(start + j, &(u / mu.abs().sqrt()));
        }
        start = end;
    }
    let p = vals.iter().filter(|&&v| v > 0.0).count();
    let frame_inv = frame
        .clone()
        .try_inverse()
        .ok_or(Error::DegenerateForm(min_abs))?;
    Ok(QuadraticForm {
        gram: sym,
        p,
        q: n - p,
        frame,
        frame_inv,
    })
}

/// An ordered basis with its orientation sign relative to a reference.
#[derive(Debug, Clone, PartialEq)]
pub struct OrientedFrame {
    /// Basis vectors as columns.
    pub basis: Matrix,
    pub sign: i8,
}

fn det_sign(m: &Matrix, what: &str) -> Result<f64> {
    let d = m.determinant();
    let scale = m
        .column_iter()
        .map(|c| c.norm())
        .product::<f64>()
        .max(1e-300);
    if d.abs() <= 1e-10 * scale {
        return Err(Error::Numerical(format!("{what} is numerically singular")));
    }
    Ok(d.signum())
}

/// Orders a basis of the maximal isotropic `W` so that its `pi_Y` image is
/// positively oriented in `Y`.
pub fn orient_isotropic(w: &Subspace, b: &QuadraticForm) -> Result<OrientedFrame> {
    b.check_maximal_isotropic(w)?;
    let mut basis = w.basis().clone();
    let s = det_sign(&b.y_coords(&basis), "pi_Y restricted to W")?;
    if s < 0.0 {
        let last = basis.ncols() - 1;
        basis.column_mut(last).neg_mut();
    }
    Ok(OrientedFrame { basis, sign: 1 })
}

fn check_transversal(w1: &Subspace, w2: &Subspace) -> Result<()> {
    let margin = proj_distance(w1, w2)?;
    if margin < TRANSVERSAL_FLOOR {
        return Err(Error::NotTransversal { margin });
    }
    Ok(())
}

/// `V_0 = W1^perp cap W2^perp` for transversal maximal isotropic subspaces.
fn neutral_space(w1: &Subspace, w2: &Subspace, b: &QuadraticForm) -> Result<Subspace> {
    b.check_maximal_isotropic(w1)?;
    b.check_maximal_isotropic(w2)?;
    check_transversal(w1, w2)?;
    let (p, q) = b.signature();
    let constraints = linalg::hstack(&[w1.basis(), w2.basis()]).transpose() * b.gram();
    let (ns, _) = linalg::null_space(&constraints, p - q);
    Subspace::new(ns)
}

/// Sign of the orientation of `[W oriented, e]` in `W^perp`, read through `pi_X`.
fn perp_orientation(w: &Subspace, e: &Matrix, b: &QuadraticForm) -> Result<f64> {
    let ow = orient_isotropic(w, b)?;
    let full = linalg::hstack(&[&ow.basis, e]);
    det_sign(&b.x_coords(&full), "pi_X restricted to W^perp")
}

/// Compares the orientations induced on `W1^perp cap W2^perp` from the two
/// sides: `+1` when they agree, `-1` when opposite. Requires `p >= q`.
pub fn orientation_parity(w1: &Subspace, w2: &Subspace, b: &QuadraticForm) -> Result<i32> {
    let (p, q) = b.signature();
    if p < q {
        return Err(Error::WrongSignature {
            p,
            q,
            reason: "orientation comparison needs p >= q".into(),
        });
    }
    if p == q {
        // V_0 = {0}; both orientations are the trivial one.
        return Ok(1);
    }
    let v0 = neutral_space(w1, w2, b)?;
    let s1 = perp_orientation(w1, v0.basis(), b)?;
    let s2 = perp_orientation(w2, v0.basis(), b)?;
    Ok((s1 * s2) as i32)
}

/// The vectors `v0(W1^perp)` and `v0(W2^perp)` spanning `W1^perp cap W2^perp`
/// for a form of signature `(q + 1, q)`, each normalized to `B(v0, v0) = 1`.
pub fn neutral_vector(w1: &Subspace, w2: &Subspace, b: &QuadraticForm) -> Result<(Vector, Vector)> {
    let (p, q) = b.signature();
    if p != q + 1 {
        return Err(Error::WrongSignature {
            p,
            q,
            reason: "a neutral vector needs signature (q+1, q)".into(),
        });
    }
    let v0 = neutral_space(w1, w2, b)?;
    let u = v0.vector(0);
    let bu = b.b(&u, &u);
    if !(bu > 0.0) {
        return Err(Error::Numerical(format!(
            "neutral direction is not spacelike (B(v, v) = {bu:e})"
        )));
    }
    let u = u / bu.sqrt();
    let e = Matrix::from_column_slice(u.len(), 1, u.as_slice());
    let s1 = perp_orientation(w1, &e, b)?;
    let s2 = perp_orientation(w2, &e, b)?;
    Ok((&u * s1, &u * s2))
}

/// A regular element with its oriented neutral vector and sign.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedElement {
    pub element: AffineMap,
    pub v_plus: Vector,
    pub alpha: f64,
}

/// `alpha(g) = B(g q - q, v+) / B(v+, v+)^(1/2)` at an arbitrary point `q`.
pub fn alpha_at(g: &AffineMap, v_plus: &Vector, b: &QuadraticForm, point: &Vector) -> f64 {
    let d = g.apply(point) - point;
    b.b(&d, v_plus) / b.b(v_plus, v_plus).sqrt()
}

/// The Margulis sign for a form of signature `(k+1, k)`.
///
/// `l(g)` must lie in `SO(B)` and be regular: `dim A0 = 1`, `dim A+ = dim A- = k`.
pub fn margulis_alpha(
    g: &AffineMap,
    b: &QuadraticForm,
    cfg: &SpectralConfig,
) -> Result<SignedElement> {
    let (p, q) = b.signature();
    if p != q + 1 || q == 0 {
        return Err(Error::WrongSignature {
            p,
            q,
            reason: "the sign needs signature (k+1, k) with k >= 1".into(),
        });
    }
    b.check_in_group(&g.linear)?;
    let split = spectral::three_splitting(&g.linear, cfg)?;
    if split.azero.dim() != 1 || split.aplus.dim() != q || split.aminus.dim() != q {
        return Err(Error::NotRegular(format!(
            "dim A+ = {}, dim A- = {}, dim A0 = {}",
            split.aplus.dim(),
            split.aminus.dim(),
            split.azero.dim()
        )));
    }
    let (v_plus, _) = neutral_vector(&split.aplus, &split.aminus, b)?;
    let alpha = alpha_at(g, &v_plus, b, &Vector::zeros(g.dim()));
    Ok(SignedElement {
        element: g.clone(),
        v_plus,
        alpha,
    })
}

/// `R^6 = V1 + V2` with `dim V1 = dim V2 = 3` and a form of signature
/// `(2,1)` on `V1`, written in the coordinates of the given `V1` basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseTwoStructure {
    v1: Matrix,
    v2: Matrix,
    b1: QuadraticForm,
    /// Inverse of `[V1 | V2]`: ambient vector -> `(V1 coords, V2 coords)`.
    coords: Matrix,
}

impl CaseTwoStructure {
    pub fn new(v1: Matrix, v2: Matrix, b1_gram: &Matrix) -> Result<Self> {
        if v1.shape() != (6, 3) || v2.shape() != (6, 3) {
            return Err(Error::DimensionMismatch(
                "splitting needs two 6x3 bases".into(),
            ));
        }
        let b1 = normalize_form(b1_gram)?;
        if b1.signature() != (2, 1) {
            let (p, q) = b1.signature();
            return Err(Error::WrongSignature {
                p,
                q,
                reason: "the V1 form must have signature (2,1)".into(),
            });
        }
        let p = linalg::hstack(&[&v1, &v2]);
        let cond = linalg::condition_number(&p);
        if !(cond < 1e10) {
            return Err(Error::DependentBasis {
                sigma_min: 1.0 / cond,
            });
        }
        let coords = p
            .try_inverse()
            .ok_or(Error::DependentBasis { sigma_min: 0.0 })?;
        Ok(Self { v1, v2, b1, coords })
    }

    pub fn v1(&self) -> &Matrix {
        &self.v1
    }

    pub fn v2(&self) -> &Matrix {
        &self.v2
    }

    pub fn form(&self) -> &QuadraticForm {
        &self.b1
    }

    /// `pi: V -> V1` along `V2`, in `V1` coordinates.
    pub fn pi(&self, v: &Vector) -> Vector {
        (&self.coords * v).rows(0, 3).into_owned()
    }

    /// The linear map in block coordinates `[[M11, M12], [M21, M22]]`.
    pub fn blocks(&self, l: &Matrix) -> Matrix {
        &self.coords * l * linalg::hstack(&[&self.v1, &self.v2])
    }

    /// `theta_1(l)`: the induced map on `V1 = V / V2` in `V1` coordinates.
    /// Fails when `l` does not preserve `V2`.
    pub fn theta1(&self, l: &Matrix) -> Result<Matrix> {
        let m = self.blocks(l);
        let residual = m.view((0, 3), (3, 3)).norm() / m.norm();
        if residual > 1e-9 {
            return Err(Error::SplittingNotPreserved { residual });
        }
        Ok(m.view((0, 0), (3, 3)).into_owned())
    }

    /// `theta_2(l)`: the restriction to `V2` in `V2` coordinates.
    pub fn theta2(&self, l: &Matrix) -> Result<Matrix> {
        let m = self.blocks(l);
        let residual = m.view((0, 3), (3, 3)).norm() / m.norm();
        if residual > 1e-9 {
            return Err(Error::SplittingNotPreserved { residual });
        }
        Ok(m.view((3, 3), (3, 3)).into_owned())
    }
}

/// The generalized sign for linear parts in `SO(2,1) x SL_3(R)` (up to a
/// unipotent part) acting on `R^6 = V1 + V2`.
///
/// `v_g` spans `A0(g)` and is normalized through the projection `pi` so that
/// `pi(v_g)` is the unit oriented neutral vector of `theta_1(g)`; `alpha` is
/// the coefficient of `v_g` in the `A0`-component of the displacement.
pub fn alpha_case23(
    g: &AffineMap,
    s: &CaseTwoStructure,
    cfg: &SpectralConfig,
) -> Result<SignedElement> {
    if g.dim() != 6 {
        return Err(Error::DimensionMismatch(format!(
            "the split structure lives on R^6, element acts on R^{}",
            g.dim()
        )));
    }
    let hat = s.theta1(&g.linear)?;
    let hat_map = AffineMap::linear_only(hat)?;
    let projected = margulis_alpha(&hat_map, s.form(), cfg)?;
    let b1 = s.form();
    let v_hat = &projected.v_plus / b1.b(&projected.v_plus, &projected.v_plus).sqrt();

    let split = spectral::three_splitting(&g.linear, cfg)?;
    if split.azero.dim() != 1 {
        return Err(Error::NotRegular(format!(
            "dim A0 = {} on R^6",
            split.azero.dim()
        )));
    }
    let line = crate::affine::line_from_split(g, &split)?;
    let a = split.azero.vector(0);
    let pa = s.pi(&a);
    let c = pa.dot(&v_hat) / v_hat.dot(&v_hat);
    let off = (&pa - &v_hat * c).norm();
    if c.abs() < 1e-9 || off > 1e-6 * pa.norm().max(1e-300) {
        return Err(Error::Numerical(format!(
            "projection of A0(g) onto V1 is degenerate (coefficient {c:e}, residual {off:e})"
        )));
    }
    let v_g = a / c;
    let alpha = line.t_g.dot(&v_g) / v_g.dot(&v_g);
    Ok(SignedElement {
        element: g.clone(),
        v_plus: v_g,
        alpha,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Plus,
    Minus,
    /// `alpha(W) = 0` within tolerance.
    Zero,
}

/// Output of [`phi_classify`].
#[derive(Debug, Clone, PartialEq)]
pub struct PhiClass {
    pub alpha_w: f64,
    /// The unique `w0(W) = v0 + alpha(W) v` in `U^perp cap W^perp`.
    pub w0: Vector,
    pub side: Side,
    /// `B(w0(W), w_1)`; equals `-alpha(W)` with this normalization.
    pub b_w0_w1: f64,
}

/// Positive/negative classification of an isotropic line `W` relative to `U`
/// for a form of signature `(2,1)`.
pub fn phi_classify(u: &Subspace, w: &Subspace, b: &QuadraticForm) -> Result<PhiClass> {
    if b.signature() != (2, 1) {
        let (p, q) = b.signature();
        return Err(Error::WrongSignature {
            p,
            q,
            reason: "the classification is defined for signature (2,1)".into(),
        });
    }
    b.check_maximal_isotropic(u)?;
    b.check_maximal_isotropic(w)?;
    check_transversal(u, w)?;
    let ub = u.vector(0);
    let y = b.y_coords(&Matrix::from_column_slice(3, 1, ub.as_slice()))[(0, 0)];
    let v = &ub / y;
    // v0 in X with B(v0, v) = 0, oriented so (pi_X v, v0) ~ (v1, v2).
    let cv = b.coords(&Matrix::from_column_slice(3, 1, v.as_slice()));
    let (x1, x2) = (cv[(0, 0)], cv[(1, 0)]);
    let mut v0 = b.v(0) * (-x2) + b.v(1) * x1;
    let orient = x1 * x1 + x2 * x2;
    if orient <= 0.0 {
        return Err(Error::Numerical("isotropic vector with zero X part".into()));
    }
    v0 /= b.b(&v0, &v0).sqrt();
    let wb = w.vector(0);
    let alpha_w = -b.b(&v0, &wb) / b.b(&v, &wb);
    let w0 = &v0 + &v * alpha_w;
    let side = if alpha_w > 1e-12 {
        Side::Plus
    } else if alpha_w < -1e-12 {
        Side::Minus
    } else {
        Side::Zero
    };
    let b_w0_w1 = b.b(&w0, &b.w(0));
    Ok(PhiClass {
        alpha_w,
        w0,
        side,
        b_w0_w1,
    })
}

/// An ordering of four elements with the direction of the intersection line.
#[derive(Debug, Clone, PartialEq)]
pub struct FourOrdering {
    pub perm: [usize; 4],
    pub direction: Vector,
}

fn cross(a: &Vector, b: &Vector) -> Vector {
    Vector::from_vec(vec![
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ])
}

/// All 24 permutations of `0..4` in lexicographic order.
pub fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let mut seen = [false; 4];
                    if p.iter().all(|&i| !std::mem::replace(&mut seen[i], true)) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Direction of `(L_a + L_b) cap (L_c + L_d)` in `R^3`, if the two planes are
/// distinct.
pub fn plane_intersection(lines: &[Vector], perm: [usize; 4]) -> Option<Vector> {
    let n1 = cross(&lines[perm[0]], &lines[perm[1]]);
    let n2 = cross(&lines[perm[2]], &lines[perm[3]]);
    let d = cross(&n1, &n2);
    let scale = n1.norm() * n2.norm();
    if scale == 0.0 || d.norm() <= 1e-12 * scale {
        None
    } else {
        Some(d.normalize())
    }
}

/// Searches the 24 orderings of four lines in `R^3` for one whose
/// intersection line is timelike; returns the first in lexicographic order.
pub fn order_four_lines(lines: &[Vector], b: &QuadraticForm) -> Result<FourOrdering> {
    if lines.len() != 4 || b.dim() != 3 || lines.iter().any(|l| l.len() != 3) {
        return Err(Error::DimensionMismatch(
            "four lines in R^3 with a form on R^3 are required".into(),
        ));
    }
    for perm in permutations4() {
        if let Some(d) = plane_intersection(lines, perm) {
            if b.b(&d, &d) < -1e-8 * d.norm_squared() {
                return Ok(FourOrdering { perm, direction: d });
            }
        }
    }
    Err(Error::NoConeOrdering)
}

/// [`order_four_lines`] applied to the lines `A+(gamma_i)` of four hyperbolic
/// elements of `SO(2,1)`.
pub fn order_four(
    elements: &[Matrix],
    b: &QuadraticForm,
    cfg: &SpectralConfig,
) -> Result<FourOrdering> {
    if elements.len() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "expected four elements, got {}",
            elements.len()
        )));
    }
    let mut lines = Vec::with_capacity(4);
    for g in elements {
        b.check_in_group(g)?;
        let split = spectral::three_splitting(g, cfg)?;
        if split.aplus.dim() != 1 {
            return Err(Error::NotRegular(format!("dim A+ = {}", split.aplus.dim())));
        }
        lines.push(split.aplus.vector(0));
    }
    order_four_lines(&lines, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{from_rows, unit};

    fn diag(d: &[f64]) -> Matrix {
        Matrix::from_diagonal(&Vector::from_vec(d.to_vec()))
    }

    fn lorentz() -> QuadraticForm {
        normalize_form(&diag(&[1.0, 1.0, -1.0])).unwrap()
    }

    fn line(x: &[f64]) -> Subspace {
        Subspace::line(&Vector::from_vec(x.to_vec())).unwrap()
    }

    fn parallel_positive(a: &Vector, b: &Vector) -> bool {
        a.dot(b) > 0.0 && (a.dot(b).abs() - a.norm() * b.norm()).abs() < 1e-10 * a.norm() * b.norm()
    }

    #[test]
    fn standard_frames() {
        let b = lorentz();
        assert_eq!(b.signature(), (2, 1));
        assert!((b.frame() - Matrix::identity(3, 3)).norm() < 1e-14);
        let b = normalize_form(&diag(&[-1.0, 1.0, 1.0])).unwrap();
        assert_eq!(b.signature(), (2, 1));
        assert!((b.w(0) - unit(3, 0)).norm() < 1e-14);
        assert!((b.v(0) - unit(3, 1)).norm() < 1e-14);
        assert!((b.v(1) - unit(3, 2)).norm() < 1e-14);
    }

    #[test]
    fn congruent_form_is_normalized() {
        let a = from_rows(&[
            vec![1.0, 0.3, -0.2],
            vec![0.1, 2.0, 0.4],
            vec![0.5, -0.7, 1.5],
        ]);
        let g = a.transpose() * diag(&[1.0, 1.0, -1.0]) * &a;
        let b = normalize_form(&g).unwrap();
        assert_eq!(b.signature(), (2, 1));
        let d = b.frame().transpose() * &g * b.frame();
        assert!((d - diag(&[1.0, 1.0, -1.0])).norm() < 1e-10);
    }

    #[test]
    fn degenerate_form_is_rejected() {
        assert!(matches!(
            normalize_form(&diag(&[1.0, 0.0, -1.0])),
            Err(Error::DegenerateForm(_))
        ));
    }

    #[test]
    fn isotropic_orientation_examples() {
        let b = lorentz();
        let f = orient_isotropic(&line(&[1.0, 0.0, 1.0]), &b).unwrap();
        assert!(parallel_positive(
            &f.basis.column(0).into_owned(),
            &Vector::from_vec(vec![1.0, 0.0, 1.0])
        ));
        let f = orient_isotropic(&line(&[-1.0, 0.0, 1.0]), &b).unwrap();
        assert!(parallel_positive(
            &f.basis.column(0).into_owned(),
            &Vector::from_vec(vec![-1.0, 0.0, 1.0])
        ));
        assert!(matches!(
            orient_isotropic(&line(&[1.0, 0.0, 0.0]), &b),
            Err(Error::NotIsotropic { .. })
        ));
    }

    #[test]
    fn neutral_vectors_in_signature_2_1() {
        let b = lorentz();
        let (n1, n2) =
            neutral_vector(&line(&[1.0, 0.0, 1.0]), &line(&[-1.0, 0.0, 1.0]), &b).unwrap();
        assert!((&n1 - unit(3, 1)).norm() < 1e-12);
        assert!((&n2 + unit(3, 1)).norm() < 1e-12);
    }

    #[test]
    fn neutral_vectors_in_signature_3_2() {
        let b = normalize_form(&diag(&[1.0, 1.0, 1.0, -1.0, -1.0])).unwrap();
        let w1 =
            Subspace::from_vectors(5, &[unit(5, 3) + unit(5, 0), unit(5, 4) + unit(5, 1)]).unwrap();
        let w2 =
            Subspace::from_vectors(5, &[unit(5, 3) - unit(5, 0), unit(5, 4) - unit(5, 1)]).unwrap();
        let (n1, n2) = neutral_vector(&w1, &w2, &b).unwrap();
        assert!((&n1 - &n2).norm() < 1e-12);
        assert!((n1.abs() - unit(5, 2)).norm() < 1e-12);
        assert_eq!(orientation_parity(&w1, &w2, &b).unwrap(), 1);
    }

    #[test]
    fn non_transversal_pair_is_rejected() {
        let b = lorentz();
        let w = line(&[1.0, 0.0, 1.0]);
        assert!(matches!(
            neutral_vector(&w, &w, &b),
            Err(Error::NotTransversal { .. })
        ));
    }

    fn boost(t: f64) -> Matrix {
        from_rows(&[
            vec![t.cosh(), 0.0, t.sinh()],
            vec![0.0, 1.0, 0.0],
            vec![t.sinh(), 0.0, t.cosh()],
        ])
    }

    #[test]
    fn boost_with_neutral_translation() {
        let b = lorentz();
        let s = 0.75;
        let g = AffineMap::new(boost(1.2), unit(3, 1) * s).unwrap();
        let signed = margulis_alpha(&g, &b, &SpectralConfig::default()).unwrap();
        assert!((signed.alpha - s).abs() < 1e-12);
        assert!((&signed.v_plus - unit(3, 1)).norm() < 1e-12);
        let q = Vector::from_vec(vec![3.0, -2.0, 5.0]);
        assert!((alpha_at(&g, &signed.v_plus, &b, &q) - s).abs() < 1e-10);
        let inv = margulis_alpha(&g.inverse().unwrap(), &b, &SpectralConfig::default()).unwrap();
        assert!((inv.alpha - s).abs() < 1e-12);
    }

    #[test]
    fn non_group_element_is_rejected() {
        let b = lorentz();
        let g = AffineMap::new(diag(&[2.0, 1.0, 0.5]), unit(3, 1)).unwrap();
        assert!(matches!(
            margulis_alpha(&g, &b, &SpectralConfig::default()),
            Err(Error::NotInGroup { .. })
        ));
    }

    fn standard_case23() -> CaseTwoStructure {
        let mut v1 = Matrix::zeros(6, 3);
        let mut v2 = Matrix::zeros(6, 3);
        for i in 0..3 {
            v1[(i, i)] = 1.0;
            v2[(i + 3, i)] = 1.0;
        }
        CaseTwoStructure::new(v1, v2, &diag(&[1.0, 1.0, -1.0])).unwrap()
    }

    #[test]
    fn case23_block_sign() {
        let s = standard_case23();
        let l = linalg::block_diag(&[&boost(0.9), &diag(&[2.0, 3.0, 1.0 / 6.0])]);
        let mut tau = Vector::zeros(6);
        tau[1] = 1.5;
        tau[3] = 0.4;
        let g = AffineMap::new(l, tau).unwrap();
        let signed = alpha_case23(&g, &s, &SpectralConfig::default()).unwrap();
        assert!((signed.alpha - 1.5).abs() < 1e-10);
    }

    #[test]
    fn case23_rejects_mixing_maps() {
        let s = standard_case23();
        let mut l = linalg::block_diag(&[&boost(0.9), &diag(&[2.0, 3.0, 1.0 / 6.0])]);
        l[(0, 4)] = 0.5;
        let g = AffineMap::new(l, Vector::zeros(6)).unwrap();
        assert!(matches!(
            alpha_case23(&g, &s, &SpectralConfig::default()),
            Err(Error::SplittingNotPreserved { .. })
        ));
    }

    fn light(phi: f64) -> Vector {
        Vector::from_vec(vec![phi.cos(), phi.sin(), 1.0])
    }

    #[test]
    fn phi_sides_follow_the_circle() {
        let b = lorentz();
        let u = Subspace::line(&light(0.0)).unwrap();
        // alpha(W) = cot(delta / 2) for W at circle angle delta from U.
        for &delta in &[0.4, 1.3, 2.9, 3.5, 5.0] {
            let w = Subspace::line(&light(delta)).unwrap();
            let c = phi_classify(&u, &w, &b).unwrap();
            let expected = 1.0 / (delta / 2.0).tan();
            assert!((c.alpha_w - expected).abs() < 1e-10, "{delta}");
            assert!((c.b_w0_w1 + c.alpha_w).abs() < 1e-10);
        }
        assert!(phi_classify(&u, &u, &b).is_err());
    }

    #[test]
    fn four_directions_on_the_circle() {
        let b = lorentz();
        let lines: Vec<Vector> = [0.0f64, 45.0, 90.0, 135.0]
            .iter()
            .map(|d| light(d.to_radians()))
            .collect();
        let o = order_four_lines(&lines, &b).unwrap();
        assert_eq!(o.perm, [0, 2, 1, 3]);
        assert!(b.b(&o.direction, &o.direction) < -1e-8);
    }

    #[test]
    fn permutations_are_lexicographic() {
        let p = permutations4();
        assert_eq!(p.len(), 24);
        assert_eq!(p[0], [0, 1, 2, 3]);
        assert_eq!(p[23], [3, 2, 1, 0]);
        assert!(p.windows(2).all(|w| w[0] < w[1]));
    }
}
