//! Eigenvalue-modulus splittings of linear maps.
//!
//! For a semisimple `g` the space splits as `A+(g) + A-(g) + A0(g)` where the
//! eigenvalues of `g` restricted to each piece have modulus greater than one,
//! less than one, and equal to one. `D+(g) = A+(g) + A0(g)` and
//! `D-(g) = A-(g) + A0(g)`.
//!
//! Invariant subspaces are computed as kernels of real polynomials in `g`:
//! a real eigenvalue `r` contributes `g - r`, a conjugate pair `a +- bi`
//! contributes `g^2 - 2a g + (a^2 + b^2)`. Conjugate pairs therefore always
//! stay together and every basis is real.

use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use crate::linalg::{self, check_square};
use crate::projective::{proj_distance, Subspace};
use crate::{Error, Matrix, Result};

/// Tolerances used by the splitting routines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralConfig {
    /// Relative tolerance on `|lambda|` versus 1 for the neutral class.
    pub moduli_tol: f64,
    /// Eigenvalues closer than this (relative) are treated as one cluster.
    pub cluster_tol: f64,
    /// Largest accepted relative singular value for an eigenspace kernel.
    pub semisimple_residual_tol: f64,
    /// Largest accepted condition number of the eigenvector matrix.
    pub max_eigvec_condition: f64,
    /// Smallest accepted `|det g|`.
    pub det_floor: f64,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        Self {
            moduli_tol: 1e-8,
            cluster_tol: 1e-7,
            semisimple_residual_tol: 1e-6,
            max_eigvec_condition: 1e8,
            det_floor: 1e-14,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModulusClass {
    Expanding,
    Contracting,
    Neutral,
}

/// A group of (numerically) equal eigenvalues together with the real
/// invariant subspace they span. Complex clusters carry both conjugates.
#[derive(Debug, Clone)]
pub struct EigenCluster {
    /// Representative eigenvalue (imaginary part `>= 0`).
    pub value: Complex<f64>,
    /// Real dimension of the cluster's invariant subspace.
    pub real_dim: usize,
    pub modulus: f64,
    pub class: ModulusClass,
    pub space: Subspace,
    /// Relative singular value of the kernel computation.
    pub residual: f64,
}

/// The three-way splitting of a semisimple map.
#[derive(Debug, Clone)]
pub struct SpectralSplit {
    pub aplus: Subspace,
    pub aminus: Subspace,
    pub azero: Subspace,
    pub moduli_tolerance: f64,
    pub clusters: Vec<EigenCluster>,
    /// Condition number of the matrix of all cluster bases.
    pub eigvec_condition: f64,
}

impl SpectralSplit {
    pub fn ambient(&self) -> usize {
        self.aplus.ambient()
    }

    pub fn dplus(&self) -> Subspace {
        self.aplus.sum(&self.azero)
    }

    pub fn dminus(&self) -> Subspace {
        self.aminus.sum(&self.azero)
    }

    /// Largest `|g v - P(g v)|` over the orthonormal basis vectors `v` of the
    /// three pieces, where `P` projects onto the piece containing `v`.
    pub fn invariance_residual(&self, g: &Matrix) -> f64 {
        [&self.aplus, &self.aminus, &self.azero]
            .iter()
            .filter(|s| !s.is_zero())
            .map(|s| {
                let gq = g * s.basis();
                let proj = s.projector() * &gq;
                let mut worst: f64 = 0.0;
                for j in 0..gq.ncols() {
                    worst = worst.max((gq.column(j) - proj.column(j)).norm());
                }
                worst
            })
            .fold(0.0, f64::max)
    }
}

/// Eigenvalue-modulus statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralStats {
    /// Moduli greater than one (with multiplicity, descending).
    pub omega_plus: Vec<f64>,
    /// Moduli less than one (with multiplicity, descending).
    pub omega_minus: Vec<f64>,
    /// Largest modulus in `omega_minus`.
    pub lambda_minus: Option<f64>,
    /// Smallest modulus in `omega_plus`.
    pub lambda_plus: Option<f64>,
    /// `max(1 / lambda_plus, lambda_minus)`.
    pub lambda: f64,
    /// `max(norm_plus, norm_minus)`; absent when both pieces are empty.
    pub s: Option<f64>,
    /// Operator norm of `g` restricted to `A-(g)`.
    pub norm_plus: Option<f64>,
    /// Operator norm of `g^-1` restricted to `A+(g)`.
    pub norm_minus: Option<f64>,
}

impl SpectralStats {
    pub fn is_hyperbolic(&self) -> bool {
        matches!(self.s, Some(s) if s < 1.0)
    }
}

/// Output of [`characteristic_split`].
#[derive(Debug, Clone)]
pub struct CharacteristicSplit {
    /// Kernel of `chi_1(g)`: the eigenvalues of maximal modulus.
    pub v: Subspace,
    /// Kernel of `chi_2(g)`: all remaining eigenvalues.
    pub w: Subspace,
    pub max_modulus: f64,
}

pub(crate) fn check_invertible(g: &Matrix, cfg: &SpectralConfig) -> Result<usize> {
    let n = check_square(g)?;
    let det = g.determinant();
    if !(det.abs() > cfg.det_floor) {
        return Err(Error::Singular { det });
    }
    Ok(n)
}

/// Eigenvalues of a real square matrix.
pub fn eigenvalues(g: &Matrix) -> Result<Vec<Complex<f64>>> {
    check_square(g)?;
    Ok(g.complex_eigenvalues().iter().copied().collect())
}

fn is_real(z: Complex<f64>, tol: f64) -> bool {
    z.im.abs() <= tol * (1.0 + z.norm())
}

/// Factor `g - r` or `g^2 - 2 Re(z) g + |z|^2`, divided by a bound on the
/// norms of its terms. Scaling by the terms rather than by the result keeps
/// a factor that vanishes (up to rounding) numerically zero.
fn real_factor(g: &Matrix, z: Complex<f64>, real: bool) -> Matrix {
    let n = g.nrows();
    let id = Matrix::identity(n, n);
    let ng = g.norm();
    let root_n = (n as f64).sqrt();
    let (f, scale) = if real {
        (g - &id * z.re, ng + z.re.abs() * root_n)
    } else {
        (
            g * g - g * (2.0 * z.re) + &id * z.norm_sqr(),
            ng * ng + 2.0 * z.re.abs() * ng + z.norm_sqr() * root_n,
        )
    };
    if scale > 0.0 {
        f / scale
    } else {
        f
    }
}

/// Kernel of the real polynomial whose roots are `roots` (closed under
/// conjugation), of dimension `roots.len()`.
fn polynomial_kernel(g: &Matrix, roots: &[Complex<f64>], cfg: &SpectralConfig) -> Subspace {
    let n = g.nrows();
    if roots.is_empty() {
        return Subspace::zero(n);
    }
    let mut p = Matrix::identity(n, n);
    for z in roots {
        if is_real(*z, cfg.cluster_tol) {
            p = real_factor(g, *z, true) * p;
        } else if z.im > 0.0 {
            p = real_factor(g, *z, false) * p;
        }
    }
    let (basis, _) = linalg::null_space(&p, roots.len());
    Subspace::from_orthonormal(basis)
}

fn classify_modulus(m: f64, tol: f64) -> ModulusClass {
    if m > 1.0 + tol {
        ModulusClass::Expanding
    } else if m < 1.0 - tol {
        ModulusClass::Contracting
    } else {
        ModulusClass::Neutral
    }
}

/// `V(g) = ker chi_1(g)` and `W(g) = ker chi_2(g)`, where `chi_1` collects
/// the eigenvalues of maximal modulus. Works for non-semisimple `g`
/// (the kernels are then generalized eigenspaces).
pub fn characteristic_split(g: &Matrix, cfg: &SpectralConfig) -> Result<CharacteristicSplit> {
    check_invertible(g, cfg)?;
    let eig = eigenvalues(g)?;
    let max = eig.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let tol = cfg.moduli_tol;
    let mut top = Vec::new();
    let mut rest = Vec::new();
    for z in &eig {
        let gap = (max - z.norm()) / max;
        if gap <= tol {
            top.push(*z);
        } else if gap <= 100.0 * tol {
            return Err(Error::AmbiguousModuli(format!(
                "modulus {} is within {:e} of the maximum {} but outside the tie tolerance",
                z.norm(),
                gap,
                max
            )));
        } else {
            rest.push(*z);
        }
    }
    Ok(CharacteristicSplit {
        v: polynomial_kernel(g, &top, cfg),
        w: polynomial_kernel(g, &rest, cfg),
        max_modulus: max,
    })
}

struct RawCluster {
    value: Complex<f64>,
    count: usize,
    real: bool,
}

fn cluster_eigenvalues(eig: &[Complex<f64>], cfg: &SpectralConfig) -> Result<Vec<RawCluster>> {
    let tol = cfg.cluster_tol;
    let mut reps: Vec<(Complex<f64>, bool)> = Vec::new();
    let mut lower = 0usize;
    let mut upper = 0usize;
    for z in eig {
        if is_real(*z, tol) {
            reps.push((Complex::new(z.re, 0.0), true));
        } else if z.im > 0.0 {
            upper += 1;
            reps.push((*z, false));
        } else {
            lower += 1;
        }
    }
    if upper != lower {
        return Err(Error::Numerical(
            "complex eigenvalues do not come in conjugate pairs".into(),
        ));
    }
    // Single-linkage grouping; n is small.
    let k = reps.len();
    let mut label: Vec<usize> = (0..k).collect();
    for i in 0..k {
        for j in (i + 1)..k {
            let (a, ra) = reps[i];
            let (b, rb) = reps[j];
            if ra == rb && (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm())) {
                let (li, lj) = (label[i], label[j]);
                for l in label.iter_mut() {
                    if *l == lj {
                        *l = li;
                    }
                }
            }
        }
    }
    let mut clusters: Vec<RawCluster> = Vec::new();
    let mut seen: Vec<usize> = Vec::new();
    for i in 0..k {
        if seen.contains(&label[i]) {
            continue;
        }
        seen.push(label[i]);
        let members: Vec<Complex<f64>> = (0..k)
            .filter(|&j| label[j] == label[i])
            .map(|j| reps[j].0)
            .collect();
        let mean = members
            .iter()
            .fold(Complex::new(0.0, 0.0), |acc, z| acc + z)
            / members.len() as f64;
        clusters.push(RawCluster {
            value: mean,
            count: members.len(),
            real: reps[i].1,
        });
    }
    clusters.sort_by(|a, b| {
        b.value
            .norm()
            .total_cmp(&a.value.norm())
            .then(b.value.re.total_cmp(&a.value.re))
            .then(b.value.im.total_cmp(&a.value.im))
    });
    Ok(clusters)
}

/// The splitting `A+(g), A-(g), A0(g)` of a semisimple invertible map.
pub fn three_splitting(g: &Matrix, cfg: &SpectralConfig) -> Result<SpectralSplit> {
    let n = check_invertible(g, cfg)?;
    let eig = eigenvalues(g)?;
    let raw = cluster_eigenvalues(&eig, cfg)?;

    let mut clusters = Vec::with_capacity(raw.len());
    for c in raw {
        let factor = real_factor(g, c.value, c.real);
        let real_dim = if c.real { c.count } else { 2 * c.count };
        let (basis, residual) = linalg::null_space(&factor, real_dim);
        if residual > cfg.semisimple_residual_tol {
            return Err(Error::NonSemisimple(format!(
                "eigenvalue {:.6}{:+.6}i of multiplicity {} has a deficient eigenspace (residual {:e})",
                c.value.re, c.value.im, c.count, residual
            )));
        }
        let modulus = c.value.norm();
        clusters.push(EigenCluster {
            value: c.value,
            real_dim,
            modulus,
            class: classify_modulus(modulus, cfg.moduli_tol),
            space: Subspace::from_orthonormal(basis),
            residual,
        });
    }

    // Individual moduli must agree with their cluster's class.
    for z in &eig {
        let class = classify_modulus(z.norm(), cfg.moduli_tol);
        let owner = clusters
            .iter()
            .min_by(|a, b| (a.value - z).norm().total_cmp(&(b.value - z).norm()))
            .map(|c| c.class);
        let conj_owner = clusters
            .iter()
            .min_by(|a, b| {
                (a.value - z.conj())
                    .norm()
                    .total_cmp(&(b.value - z.conj()).norm())
            })
            .map(|c| c.class);
        if owner != Some(class) && conj_owner != Some(class) {
            return Err(Error::AmbiguousModuli(format!(
                "eigenvalue modulus {} is grouped inconsistently relative to 1",
                z.norm()
            )));
        }
    }

    let blocks: Vec<&Matrix> = clusters.iter().map(|c| c.space.basis()).collect();
    let all = linalg::hstack(&blocks);
    if all.ncols() != n {
        return Err(Error::Numerical(format!(
            "eigenspaces span {} of {} dimensions",
            all.ncols(),
            n
        )));
    }
    let eigvec_condition = linalg::condition_number(&all);
    if !(eigvec_condition <= cfg.max_eigvec_condition) {
        return Err(Error::NonSemisimple(format!(
            "eigenvector matrix condition number {:e} exceeds {:e}",
            eigvec_condition, cfg.max_eigvec_condition
        )));
    }

    let gather = |class: ModulusClass| -> Result<Subspace> {
        let parts: Vec<&Matrix> = clusters
            .iter()
            .filter(|c| c.class == class)
            .map(|c| c.space.basis())
            .collect();
        if parts.is_empty() {
            Ok(Subspace::zero(n))
        } else {
            Subspace::new(linalg::hstack(&parts))
        }
    };

    Ok(SpectralSplit {
        aplus: gather(ModulusClass::Expanding)?,
        aminus: gather(ModulusClass::Contracting)?,
        azero: gather(ModulusClass::Neutral)?,
        moduli_tolerance: cfg.moduli_tol,
        clusters,
        eigvec_condition,
    })
}

fn restricted_norm(m: &Matrix, space: &Subspace) -> Option<f64> {
    if space.is_zero() {
        None
    } else {
        Some(linalg::op_norm(&(m * space.basis())))
    }
}

fn stats_from_parts(
    g: &Matrix,
    g_inv: &Matrix,
    eig: &[Complex<f64>],
    aplus: &Subspace,
    aminus: &Subspace,
    cfg: &SpectralConfig,
    strict_lambda: bool,
) -> Result<SpectralStats> {
    let mut omega_plus: Vec<f64> = Vec::new();
    let mut omega_minus: Vec<f64> = Vec::new();
    for z in eig {
        match classify_modulus(z.norm(), cfg.moduli_tol) {
            ModulusClass::Expanding => omega_plus.push(z.norm()),
            ModulusClass::Contracting => omega_minus.push(z.norm()),
            ModulusClass::Neutral => {}
        }
    }
    omega_plus.sort_by(|a, b| b.total_cmp(a));
    omega_minus.sort_by(|a, b| b.total_cmp(a));
    let lambda_plus = omega_plus.last().copied();
    let lambda_minus = omega_minus.first().copied();
    let lambda = match (lambda_plus, lambda_minus) {
        (Some(p), Some(m)) => (1.0 / p).max(m),
        (Some(p), None) => 1.0 / p,
        (None, Some(m)) => m,
        (None, None) if !strict_lambda => 1.0,
        (None, None) => {
            return Err(Error::OutOfRange(
                "lambda(g) undefined: all eigenvalues have modulus one".into(),
            ))
        }
    };
    let norm_plus = restricted_norm(g, aminus);
    let norm_minus = restricted_norm(g_inv, aplus);
    let s = match (norm_plus, norm_minus) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (a, b) => a.or(b),
    };
    Ok(SpectralStats {
        omega_plus,
        omega_minus,
        lambda_minus,
        lambda_plus,
        lambda,
        s,
        norm_plus,
        norm_minus,
    })
}

fn inverse(g: &Matrix) -> Result<Matrix> {
    g.clone().try_inverse().ok_or(Error::Singular {
        det: g.determinant(),
    })
}

/// `lambda(g)`, `s(g)` and the restricted norms. `A+` and `A-` here are the
/// generalized eigenspaces, so semisimplicity is not required.
pub fn spectral_stats(g: &Matrix, cfg: &SpectralConfig) -> Result<SpectralStats> {
    check_invertible(g, cfg)?;
    let eig = eigenvalues(g)?;
    let plus: Vec<_> = eig
        .iter()
        .copied()
        .filter(|z| classify_modulus(z.norm(), cfg.moduli_tol) == ModulusClass::Expanding)
        .collect();
    let minus: Vec<_> = eig
        .iter()
        .copied()
        .filter(|z| classify_modulus(z.norm(), cfg.moduli_tol) == ModulusClass::Contracting)
        .collect();
    let aplus = polynomial_kernel(g, &plus, cfg);
    let aminus = polynomial_kernel(g, &minus, cfg);
    stats_from_parts(g, &inverse(g)?, &eig, &aplus, &aminus, cfg, true)
}

/// Splitting and statistics computed together.
#[derive(Debug, Clone)]
pub struct SpectralData {
    pub split: SpectralSplit,
    pub stats: SpectralStats,
}

impl SpectralData {
    pub fn is_hyperbolic(&self) -> bool {
        self.stats.is_hyperbolic()
    }

    /// `min(d_hat(A+, D-), d_hat(A-, D+))`; pieces that are empty impose no
    /// constraint (value 1).
    pub fn hyperbolicity_margin(&self) -> Result<f64> {
        let split = &self.split;
        let mut margin: f64 = 1.0;
        let dminus = split.dminus();
        let dplus = split.dplus();
        if !split.aplus.is_zero() && !dminus.is_zero() {
            margin = margin.min(proj_distance(&split.aplus, &dminus)?);
        }
        if !split.aminus.is_zero() && !dplus.is_zero() {
            margin = margin.min(proj_distance(&split.aminus, &dplus)?);
        }
        Ok(margin)
    }
}

/// Three-way splitting plus statistics consistent with it. Unlike
/// [`spectral_stats`], a map with all moduli equal to one is accepted and
/// reported with `lambda = 1`.
pub fn analyze(g: &Matrix, cfg: &SpectralConfig) -> Result<SpectralData> {
    let split = three_splitting(g, cfg)?;
    let eig = eigenvalues(g)?;
    let stats = stats_from_parts(
        g,
        &inverse(g)?,
        &eig,
        &split.aplus,
        &split.aminus,
        cfg,
        false,
    )?;
    Ok(SpectralData { split, stats })
}

/// Regularity relative to a finite sample: `dim A0(g)` is minimal among
/// `g` and the sample elements.
pub fn is_regular(g: &Matrix, sample: &[Matrix], cfg: &SpectralConfig) -> Result<bool> {
    if sample.is_empty() {
        return Err(Error::OutOfRange(
            "regularity needs a nonempty sample".into(),
        ));
    }
    let own = three_splitting(g, cfg)?.azero.dim();
    let mut min = own;
    for t in sample {
        min = min.min(three_splitting(t, cfg)?.azero.dim());
    }
    Ok(own == min)
}

/// `d_hat(A+(g), D-(g)) >= eps` and `d_hat(A-(g), D+(g)) >= eps`.
pub fn is_eps_hyperbolic(g: &Matrix, eps: f64, cfg: &SpectralConfig) -> Result<bool> {
    let data = analyze(g, cfg)?;
    if !data.is_hyperbolic() {
        return Err(Error::NotHyperbolic { s: data.stats.s });
    }
    Ok(data.hyperbolicity_margin()? >= eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::from_rows;
    use crate::projective::rho;

    fn diag(d: &[f64]) -> Matrix {
        Matrix::from_diagonal(&crate::Vector::from_vec(d.to_vec()))
    }

    fn cfg() -> SpectralConfig {
        SpectralConfig::default()
    }

    fn same(a: &Subspace, b: &Subspace) -> bool {
        a.dim() == b.dim() && (a.is_zero() || rho(a, b).unwrap() < 1e-10)
    }

    #[test]
    fn characteristic_split_diagonal() {
        let cs = characteristic_split(&diag(&[3.0, 2.0, 1.0]), &cfg()).unwrap();
        assert!(same(&cs.v, &Subspace::coordinate(3, &[0])));
        assert!(same(&cs.w, &Subspace::coordinate(3, &[1, 2])));
    }

    #[test]
    fn characteristic_split_identity() {
        let cs = characteristic_split(&Matrix::identity(3, 3), &cfg()).unwrap();
        assert_eq!(cs.v.dim(), 3);
        assert!(cs.w.is_zero());
    }

    #[test]
    fn characteristic_split_scaled_rotation() {
        let g = from_rows(&[
            vec![0.0, -2.0, 0.0],
            vec![2.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ]);
        let cs = characteristic_split(&g, &cfg()).unwrap();
        assert!(same(&cs.v, &Subspace::coordinate(3, &[0, 1])));
        assert!(same(&cs.w, &Subspace::coordinate(3, &[2])));
    }

    #[test]
    fn characteristic_split_errors() {
        assert!(matches!(
            characteristic_split(&diag(&[1.0, 0.0]), &cfg()),
            Err(Error::Singular { .. })
        ));
        let tie = diag(&[2.0, 2.0 * (1.0 - 1e-7), 1.0]);
        assert!(matches!(
            characteristic_split(&tie, &cfg()),
            Err(Error::AmbiguousModuli(_))
        ));
    }

    #[test]
    fn three_splitting_examples() {
        let s = three_splitting(&diag(&[2.0, 1.0, 0.5]), &cfg()).unwrap();
        assert!(same(&s.aplus, &Subspace::coordinate(3, &[0])));
        assert!(same(&s.azero, &Subspace::coordinate(3, &[1])));
        assert!(same(&s.aminus, &Subspace::coordinate(3, &[2])));

        let s = three_splitting(&Matrix::identity(4, 4), &cfg()).unwrap();
        assert_eq!(s.azero.dim(), 4);
        assert!(s.aplus.is_zero() && s.aminus.is_zero());

        let g = from_rows(&[
            vec![0.0, -1.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 0.0, 3.0],
        ]);
        let s = three_splitting(&g, &cfg()).unwrap();
        assert!(same(&s.azero, &Subspace::coordinate(3, &[0, 1])));
        assert!(same(&s.aplus, &Subspace::coordinate(3, &[2])));
        assert!(s.aminus.is_zero());
    }

    #[test]
    fn jordan_block_is_rejected() {
        let j = from_rows(&[vec![2.0, 1.0], vec![0.0, 2.0]]);
        assert!(matches!(
            three_splitting(&j, &cfg()),
            Err(Error::NonSemisimple(_))
        ));
        // Same block in a skewed basis.
        let p = from_rows(&[vec![1.0, 0.3], vec![-0.2, 1.1]]);
        let g = &p * &j * p.clone().try_inverse().unwrap();
        assert!(matches!(
            three_splitting(&g, &cfg()),
            Err(Error::NonSemisimple(_))
        ));
    }

    #[test]
    fn stats_examples() {
        let st = spectral_stats(&diag(&[4.0, 2.0, 1.0, 1.0 / 3.0]), &cfg()).unwrap();
        assert_eq!(st.omega_plus, vec![4.0, 2.0]);
        assert!((st.omega_minus[0] - 1.0 / 3.0).abs() < 1e-15);
        assert!((st.lambda_minus.unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((st.lambda_plus.unwrap() - 2.0).abs() < 1e-14);
        assert!((st.lambda - 0.5).abs() < 1e-14);

        let g = diag(&[2.0, 0.5]);
        let a = spectral_stats(&g, &cfg()).unwrap();
        let b = spectral_stats(&g.clone().try_inverse().unwrap(), &cfg()).unwrap();
        assert!((a.lambda - 0.5).abs() < 1e-14 && (b.lambda - 0.5).abs() < 1e-14);

        let st = spectral_stats(&diag(&[2.0, 1.0, 0.5]), &cfg()).unwrap();
        assert!((st.norm_plus.unwrap() - 0.5).abs() < 1e-14);
        assert!((st.norm_minus.unwrap() - 0.5).abs() < 1e-14);
        assert!((st.s.unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn stats_with_one_side_empty() {
        let st = spectral_stats(&diag(&[3.0, 1.0]), &cfg()).unwrap();
        assert!(st.lambda_minus.is_none() && st.norm_plus.is_none());
        assert!((st.lambda - 1.0 / 3.0).abs() < 1e-14);
        assert!(matches!(
            spectral_stats(&Matrix::identity(2, 2), &cfg()),
            Err(Error::OutOfRange(_))
        ));
    }

    #[test]
    fn regularity_examples() {
        let g = diag(&[2.0, 1.0, 0.5]);
        let id = Matrix::identity(3, 3);
        assert!(is_regular(&g, &[g.clone(), id.clone()], &cfg()).unwrap());
        assert!(!is_regular(&id, &[g.clone(), id.clone()], &cfg()).unwrap());
        assert!(is_regular(&g, &[], &cfg()).is_err());
    }

    #[test]
    fn eps_hyperbolic_examples() {
        assert!(is_eps_hyperbolic(&diag(&[2.0, 1.0, 0.5]), 0.5, &cfg()).unwrap());
        assert!(matches!(
            is_eps_hyperbolic(&Matrix::identity(3, 3), 0.5, &cfg()),
            Err(Error::NotHyperbolic { .. })
        ));
    }

    #[test]
    fn skewed_hyperbolic_fails_margin() {
        // A+ = span(e1), A- = span(e1 + t e3) nearly parallel to A+.
        let t = 0.05;
        let p = from_rows(&[vec![1.0, 0.0, 1.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, t]]);
        let g = &p * diag(&[8.0, 1.0, 0.125]) * p.clone().try_inverse().unwrap();
        let data = analyze(&g, &cfg()).unwrap();
        let oracle = crate::projective::proj_point_distance(
            &crate::linalg::unit(3, 0),
            &crate::Vector::from_vec(vec![1.0, 0.0, t]),
        )
        .unwrap();
        assert!((data.hyperbolicity_margin().unwrap() - oracle).abs() < 1e-9);
        assert!(oracle < 0.5);
        if data.is_hyperbolic() {
            assert!(!is_eps_hyperbolic(&g, 0.5, &cfg()).unwrap());
        }
    }
}
