//! Seeded random elements of the classical groups used by tests, the
//! classifier and the corpus. Everything goes through [`seeded`] so that a
//! seed fully determines the output.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::affine::AffineMap;
use crate::linalg;
use crate::signform::QuadraticForm;
use crate::{Matrix, Vector};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_matrix(rng: &mut SeededRng, r: usize, c: usize) -> Matrix {
    Matrix::from_fn(r, c, |_, _| rng.sample::<f64, _>(StandardNormal))
}

pub fn gaussian_vector(rng: &mut SeededRng, n: usize) -> Vector {
    Vector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal))
}

fn skew(rng: &mut SeededRng, n: usize, scale: f64) -> Matrix {
    let a = gaussian_matrix(rng, n, n) * scale;
    (&a - a.transpose()) * 0.5
}

fn symmetric(rng: &mut SeededRng, n: usize, scale: f64) -> Matrix {
    let a = gaussian_matrix(rng, n, n) * scale;
    (&a + a.transpose()) * 0.5
}

/// `diag(1,..,1,-1,..,-1)` with `p` ones and `q` minus ones.
pub fn standard_form(p: usize, q: usize) -> Matrix {
    Matrix::from_fn(p + q, p + q, |i, j| {
        if i != j {
            0.0
        } else if i < p {
            1.0
        } else {
            -1.0
        }
    })
}

/// `exp(J A)` with `A` skew: an element of the identity component of
/// `SO(p, q)` for the standard form.
pub fn random_so_pq(rng: &mut SeededRng, p: usize, q: usize, scale: f64) -> Matrix {
    let j = standard_form(p, q);
    (j * skew(rng, p + q, scale)).exp()
}

/// Element of `SO(3)`.
pub fn random_so3(rng: &mut SeededRng, scale: f64) -> Matrix {
    skew(rng, 3, scale).exp()
}

/// Element of `SL_n(R)`: exponential of a random traceless matrix.
pub fn random_sl(rng: &mut SeededRng, n: usize, scale: f64) -> Matrix {
    let mut a = gaussian_matrix(rng, n, n) * scale;
    let tr = a.trace() / n as f64;
    for i in 0..n {
        a[(i, i)] -= tr;
    }
    a.exp()
}

/// The standard symplectic matrix `[[0, I], [-I, 0]]` on `R^n`, `n` even.
pub fn symplectic_form_n(n: usize) -> Matrix {
    assert!(n % 2 == 0, "symplectic forms live in even dimension");
    let h = n / 2;
    let mut o = Matrix::zeros(n, n);
    for i in 0..h {
        o[(i, h + i)] = 1.0;
        o[(h + i, i)] = -1.0;
    }
    o
}

/// The standard symplectic matrix on `R^4`.
pub fn symplectic_form() -> Matrix {
    symplectic_form_n(4)
}

/// Element of `Sp_n(R)`: `exp(Omega S)` with `S` symmetric.
pub fn random_sp(rng: &mut SeededRng, n: usize, scale: f64) -> Matrix {
    (symplectic_form_n(n) * symmetric(rng, n, scale)).exp()
}

pub fn random_sp4(rng: &mut SeededRng, scale: f64) -> Matrix {
    random_sp(rng, 4, scale)
}

/// Transports an element of `SO(J)` (standard form) to `SO(B)` through the
/// normalized frame of `B`.
pub fn to_form(b: &QuadraticForm, m: &Matrix) -> Matrix {
    let f = b.frame();
    let f_inv = f.clone().try_inverse().expect("frame is invertible");
    f * m * f_inv
}

/// Commuting boosts in the planes `(v_i, w_i)` with rapidities `t_i`, in the
/// standard frame of signature `(k+1, k)`. The remaining `v_{k+1}` is fixed.
pub fn diagonal_boost(rapidities: &[f64]) -> Matrix {
    let k = rapidities.len();
    let n = 2 * k + 1;
    let mut m = Matrix::identity(n, n);
    for (i, &t) in rapidities.iter().enumerate() {
        let (x, y) = (i, k + 1 + i);
        m[(x, x)] = t.cosh();
        m[(y, y)] = t.cosh();
        m[(x, y)] = t.sinh();
        m[(y, x)] = t.sinh();
    }
    m
}

/// A regular hyperbolic element of `SO(k+1, k)` (standard form): a random
/// conjugate of a diagonal boost with distinct rapidities in `[0.3, 1.5]`.
pub fn random_regular_so(rng: &mut SeededRng, k: usize) -> Matrix {
    let mut t: Vec<f64> = Vec::with_capacity(k);
    while t.len() < k {
        let x = rng.random_range(0.3..1.5);
        if t.iter().all(|y| (x - y).abs() > 0.1) {
            t.push(x);
        }
    }
    let h = random_so_pq(rng, k + 1, k, 0.5);
    let h_inv = h.clone().try_inverse().expect("group element");
    &h * diagonal_boost(&t) * h_inv
}

/// A random affine map with the given linear part and Gaussian translation.
pub fn with_random_translation(rng: &mut SeededRng, linear: Matrix) -> AffineMap {
    let n = linear.nrows();
    AffineMap {
        linear,
        translation: gaussian_vector(rng, n),
    }
}

/// A well-conditioned random invertible matrix (singular values in
/// `[0.5, 2]`).
pub fn random_well_conditioned(rng: &mut SeededRng, n: usize) -> Matrix {
    let q1 = gaussian_matrix(rng, n, n).qr().q();
    let q2 = gaussian_matrix(rng, n, n).qr().q();
    let d = Vector::from_fn(n, |_, _| rng.random_range(0.5..2.0));
    q1 * Matrix::from_diagonal(&d) * q2
}

/// A random diagonalizable matrix of size `n` built from real and complex
/// eigenvalue blocks with moduli separated from each other and from 1 by at
/// least `1.1` (ratio), optionally including a neutral rotation or `+-1`.
pub fn random_semisimple(rng: &mut SeededRng, n: usize) -> Matrix {
    let mut blocks: Vec<Matrix> = Vec::new();
    let mut moduli: Vec<f64> = Vec::new();
    let mut size = 0;
    let fresh_modulus = |rng: &mut SeededRng, moduli: &mut Vec<f64>| loop {
        let m = (rng.random_range(-1.5..1.5f64)).exp();
        if (m.ln()).abs() > 0.1 && moduli.iter().all(|x: &f64| (x.ln() - m.ln()).abs() > 0.1) {
            moduli.push(m);
            return m;
        }
    };
    while size < n {
        let left = n - size;
        let kind = rng.random_range(0..4);
        match kind {
            0 if left >= 2 => {
                let r = fresh_modulus(rng, &mut moduli);
                let th: f64 = rng.random_range(0.3..2.8);
                blocks.push(linalg::from_rows(&[
                    vec![r * th.cos(), -r * th.sin()],
                    vec![r * th.sin(), r * th.cos()],
                ]));
                size += 2;
            }
            1 if !moduli.contains(&1.0) => {
                moduli.push(1.0);
                if left >= 2 && rng.random_bool(0.5) {
                    let th: f64 = rng.random_range(0.3..2.8);
                    blocks.push(linalg::from_rows(&[
                        vec![th.cos(), -th.sin()],
                        vec![th.sin(), th.cos()],
                    ]));
                    size += 2;
                } else {
                    let s = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                    blocks.push(Matrix::from_element(1, 1, s));
                    size += 1;
                }
            }
            _ => {
                let r = fresh_modulus(rng, &mut moduli);
                let s = if rng.random_bool(0.8) { 1.0 } else { -1.0 };
                blocks.push(Matrix::from_element(1, 1, s * r));
                size += 1;
            }
        }
    }
    let refs: Vec<&Matrix> = blocks.iter().collect();
    let d = linalg::block_diag(&refs);
    let p = random_well_conditioned(rng, n);
    let p_inv = p.clone().try_inverse().expect("well conditioned");
    p * d * p_inv
}

/// Random orthonormal `k`-frame in `R^n`.
pub fn random_frame(rng: &mut SeededRng, n: usize, k: usize) -> Matrix {
    let q = gaussian_matrix(rng, n, k).qr().q();
    q.columns(0, k).into_owned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signform::normalize_form;

    #[test]
    fn group_samplers_preserve_their_forms() {
        let mut rng = seeded(7);
        let j = standard_form(3, 2);
        let g = random_so_pq(&mut rng, 3, 2, 0.7);
        assert!((g.transpose() * &j * &g - &j).norm() < 1e-10);
        assert!((g.determinant() - 1.0).abs() < 1e-10);

        let o = symplectic_form();
        let s = random_sp4(&mut rng, 0.7);
        assert!((s.transpose() * &o * &s - &o).norm() < 1e-10);

        let o6 = symplectic_form_n(6);
        let s6 = random_sp(&mut rng, 6, 0.7);
        assert!((s6.transpose() * &o6 * &s6 - &o6).norm() < 1e-10);

        let l = random_sl(&mut rng, 3, 0.7);
        assert!((l.determinant() - 1.0).abs() < 1e-10);

        let r = random_so3(&mut rng, 1.0);
        assert!((r.transpose() * &r - Matrix::identity(3, 3)).norm() < 1e-12);
    }

    #[test]
    fn transported_elements_preserve_general_form() {
        let mut rng = seeded(3);
        let a = random_well_conditioned(&mut rng, 3);
        let gram = a.transpose() * standard_form(2, 1) * &a;
        let b = normalize_form(&gram).unwrap();
        let m = to_form(&b, &random_so_pq(&mut rng, 2, 1, 0.8));
        assert!(b.preservation_residual(&m) < 1e-12);
    }

    #[test]
    fn same_seed_same_matrix() {
        let a = random_semisimple(&mut seeded(11), 5);
        let b = random_semisimple(&mut seeded(11), 5);
        assert_eq!(a, b);
    }
}
