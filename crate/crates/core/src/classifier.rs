//! Catalog of the semisimple groups that can occur as the semisimple part of
//! the linear part of a properly discontinuous affine group on `R^n`,
//! `n <= 6`.
//!
//! The lists are data. What is checked numerically is the one property the
//! case split depends on: whether every regular element has eigenvalue 1 in
//! the given representation. Each entry carries a sampler (split real form
//! for complex groups, the group itself for real forms) and
//! [`verify_eigenvalue_one_generic`] compares the samples with the recorded
//! flag.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::linalg::block_diag;
use crate::sampling::{random_sl, random_so_pq, random_sp, seeded, SeededRng};
use crate::spectral::eigenvalues;
use crate::{Error, Matrix, Result, Vector};

/// Distance to 1 below which an eigenvalue counts as 1.
pub const EIGENVALUE_ONE_TOL: f64 = 1e-7;
/// Lie algebra scale of the random samples.
const SAMPLE_SCALE: f64 = 0.6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    SL,
    SO,
    Sp,
    AdSL,
    Sym2SL,
    Ext2SL,
    Ext2SO,
    #[serde(rename = "Ext2_0Sp")]
    Ext20Sp,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::SL => "SL",
            Family::SO => "SO",
            Family::Sp => "Sp",
            Family::AdSL => "AdSL",
            Family::Sym2SL => "Sym2SL",
            Family::Ext2SL => "Ext2SL",
            Family::Ext2SO => "Ext2SO",
            Family::Ext20Sp => "Ext2_0Sp",
        }
    }

    /// Dimension of the representation for parameter `n`.
    pub fn rep_dim(self, n: u32) -> u32 {
        match self {
            Family::SL | Family::SO | Family::Sp => n,
            Family::AdSL => n * n - 1,
            Family::Sym2SL => n * (n + 1) / 2,
            Family::Ext2SL | Family::Ext2SO => n * (n - 1) / 2,
            // Parameter is the rank: Sp_{2n}, dimension (n-1)(2n+1).
            Family::Ext20Sp => (n - 1) * (2 * n + 1),
        }
    }
}

/// One group in one representation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepEntry {
    pub family: Family,
    /// `n` in `SL_n`, `SO_n`, `Sp_n` (matrix size), `Ad SL_n`, `S^2 SL_n`,
    /// `wedge^2 SL_n`, `wedge^2 SO_n`; the rank `n` in `wedge^2_0 Sp_{2n}`.
    pub parameter: u32,
    pub rep_dim: u32,
    /// Real form, for real groups. `None` for the complex groups of the
    /// first table, whose `real_rank` is then the complex rank.
    pub real_form: Option<String>,
    pub real_rank: u32,
    /// Every regular element has eigenvalue 1 in this representation.
    pub eigenvalue_one_generic: bool,
}

/// A row of a table: a family with the parameters it admits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub group: String,
    pub dim_formula: String,
    pub entries: Vec<RepEntry>,
}

fn complex_entry(family: Family, parameter: u32, rank: u32, one: bool) -> RepEntry {
    RepEntry {
        family,
        parameter,
        rep_dim: family.rep_dim(parameter),
        real_form: None,
        real_rank: rank,
        eigenvalue_one_generic: one,
    }
}

/// Complex simple groups with an irreducible representation of dimension at
/// most 6 and group dimension at least 6.
pub fn table1() -> Vec<TableRow> {
    use Family::*;
    let row = |group: &str, dim: &str, entries: Vec<RepEntry>| TableRow {
        group: group.into(),
        dim_formula: dim.into(),
        entries,
    };
    vec![
        row(
            "SL_n, n >= 3",
            "n",
            (3..=5)
                .map(|n| complex_entry(SL, n, n - 1, false))
                .collect(),
        ),
        row(
            "SO_n, n >= 3, n != 4",
            "n",
            // Odd orthogonal groups fix a vector of every maximal torus.
            [3, 5, 6]
                .into_iter()
                .map(|n| complex_entry(SO, n, n / 2, n % 2 == 1))
                .collect(),
        ),
        row(
            "Sp_2n",
            "2n",
            [2, 3]
                .into_iter()
                .map(|m| complex_entry(Sp, 2 * m, m, false))
                .collect(),
        ),
        row("Ad SL_n", "n^2 - 1", vec![complex_entry(AdSL, 2, 1, true)]),
        row(
            "S^2 SL_n",
            "n(n+1)/2",
            vec![
                complex_entry(Sym2SL, 2, 1, true),
                complex_entry(Sym2SL, 3, 2, false),
            ],
        ),
        row(
            "wedge^2 SL_n, n >= 4",
            "n(n-1)/2",
            vec![complex_entry(Ext2SL, 4, 3, false)],
        ),
        row(
            "wedge^2 SO_n, n >= 3, n != 4",
            "n(n-1)/2",
            vec![complex_entry(Ext2SO, 3, 1, true)],
        ),
        row(
            "wedge^2_0 Sp_2n, n >= 2",
            "(n-1)(2n+1)",
            vec![complex_entry(Ext20Sp, 2, 2, true)],
        ),
    ]
}

/// The real forms of real rank at least 2 that survive: simple real groups
/// acting irreducibly on `R^m`, `m <= 6`.
pub fn table2() -> Vec<TableRow> {
    let real = |family: Family, parameter: u32, form: String, rank: u32, one: bool| RepEntry {
        family,
        parameter,
        rep_dim: family.rep_dim(parameter),
        real_form: Some(form),
        real_rank: rank,
        eigenvalue_one_generic: one,
    };
    vec![
        TableRow {
            group: "SL_n(R), n >= 3".into(),
            dim_formula: "n < 6".into(),
            entries: (3..=5)
                .map(|n| real(Family::SL, n, format!("SL{n}(R)"), n - 1, false))
                .collect(),
        },
        TableRow {
            group: "SO(3,2)".into(),
            dim_formula: "5".into(),
            entries: vec![real(Family::SO, 5, "SO(3,2)".into(), 2, true)],
        },
        TableRow {
            group: "Sp4(R)".into(),
            dim_formula: "4".into(),
            entries: vec![real(Family::Sp, 4, "Sp4(R)".into(), 2, false)],
        },
    ]
}

/// A simple factor of a real semisimple group, in its standard
/// representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "group", rename_all = "kebab-case")]
pub enum Factor {
    Sl {
        n: usize,
    },
    /// `SO(p, q)`; `q = 0` is the compact group.
    So {
        p: usize,
        q: usize,
    },
    Sp {
        n: usize,
    },
}

impl Factor {
    pub fn dim(self) -> usize {
        match self {
            Factor::Sl { n } | Factor::Sp { n } => n,
            Factor::So { p, q } => p + q,
        }
    }

    pub fn real_rank(self) -> usize {
        match self {
            Factor::Sl { n } => n - 1,
            Factor::So { p, q } => p.min(q),
            Factor::Sp { n } => n / 2,
        }
    }

    fn sample(self, rng: &mut SeededRng) -> Matrix {
        match self {
            Factor::Sl { n } => random_sl(rng, n, SAMPLE_SCALE),
            Factor::So { p, q } => random_so_pq(rng, p, q, SAMPLE_SCALE),
            Factor::Sp { n } => random_sp(rng, n, SAMPLE_SCALE),
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Factor::Sl { n } => write!(f, "SL{n}(R)"),
            Factor::So { p, q: 0 } => write!(f, "SO({p})"),
            Factor::So { p, q } => write!(f, "SO({p},{q})"),
            Factor::Sp { n } => write!(f, "Sp{n}(R)"),
        }
    }
}

/// A candidate semisimple part `S` acting on `R^n = V0 + V1`, trivially on
/// `V0` and block-diagonally (one block per factor) on `V1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibleEntry {
    /// 1: no eigenvalue 1 on `V1`; 2: eigenvalue 1 on `V1`.
    pub case: u8,
    /// Position in the case's list.
    pub item: u8,
    pub group: String,
    pub factors: Vec<Factor>,
    /// Block sizes of `V1`.
    pub v1_blocks: Vec<usize>,
    pub v1_dim: usize,
    pub n: usize,
    /// Largest real rank of a simple factor.
    pub real_rank: usize,
    pub eigenvalue_one_on_v1: bool,
}

impl AdmissibleEntry {
    fn new(case: u8, item: u8, factors: Vec<Factor>, n: usize) -> Self {
        let v1_blocks: Vec<usize> = factors.iter().map(|f| f.dim()).collect();
        AdmissibleEntry {
            case,
            item,
            group: factors
                .iter()
                .map(|f| f.to_string())
                .collect::<Vec<_>>()
                .join(" x "),
            v1_dim: v1_blocks.iter().sum(),
            v1_blocks,
            n,
            real_rank: factors.iter().map(|f| f.real_rank()).max().unwrap_or(0),
            eigenvalue_one_on_v1: case == 2,
            factors,
        }
    }

    /// A random element of `S` restricted to `V1`.
    pub fn sample_v1(&self, rng: &mut SeededRng) -> Matrix {
        let blocks: Vec<Matrix> = self.factors.iter().map(|f| f.sample(rng)).collect();
        let refs: Vec<&Matrix> = blocks.iter().collect();
        block_diag(&refs)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Admissible {
    pub n: usize,
    pub case1: Vec<AdmissibleEntry>,
    pub case2: Vec<AdmissibleEntry>,
}

/// The possible semisimple parts for `R^n`, `2 <= n <= 6`, split by whether
/// regular elements have eigenvalue 1 on `V1`.
pub fn admissible_semisimple(n: usize) -> Result<Admissible> {
    if n > 6 {
        return Err(Error::OutOfRange(format!(
            "n = {n}: the classification stops at dimension 6; \
             higher dimensions are an open problem"
        )));
    }
    if n < 2 {
        return Err(Error::OutOfRange(format!("n = {n} must be at least 2")));
    }
    use Factor::*;
    let mut case1 = Vec::new();
    // V0 must be nonzero in the first case, so V1 is a proper subspace.
    if n >= 4 {
        for l in 3..=5.min(n - 1) {
            case1.push(AdmissibleEntry::new(1, 1, vec![Sl { n: l }], n));
        }
    }
    if n == 6 {
        case1.push(AdmissibleEntry::new(1, 2, vec![Sp { n: 4 }], n));
        case1.push(AdmissibleEntry::new(
            1,
            3,
            vec![Sl { n: 2 }, Sl { n: 3 }],
            n,
        ));
    }
    let mut case2 = Vec::new();
    if n >= 5 {
        case2.push(AdmissibleEntry::new(2, 1, vec![So { p: 3, q: 2 }], n));
    }
    if n == 6 {
        case2.push(AdmissibleEntry::new(
            2,
            2,
            vec![So { p: 3, q: 0 }, Sl { n: 3 }],
            n,
        ));
        case2.push(AdmissibleEntry::new(
            2,
            3,
            vec![So { p: 2, q: 1 }, Sl { n: 3 }],
            n,
        ));
    }
    Ok(Admissible { n, case1, case2 })
}

/// A group that has the eigenvalue-1 property but is excluded by rank.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogNote {
    pub group: String,
    pub rep_dim: u32,
    pub real_rank: u32,
    pub eigenvalue_one_generic: bool,
    pub excluded_because: String,
}

/// `SO_3(C)` viewed as a real group acting on `C^3 = R^6`: simple as a real
/// group, not simple after complexification, eigenvalue 1 everywhere, real
/// rank 1.
pub fn catalog_notes() -> Vec<CatalogNote> {
    vec![CatalogNote {
        group: "SO3(C) as a real group".into(),
        rep_dim: 6,
        real_rank: 1,
        eigenvalue_one_generic: true,
        excluded_because: "real rank 1; at least one simple factor of real rank >= 2 is required"
            .into(),
    }]
}

/// A random element of realified `SO_3(C)` on `R^6`.
pub fn sample_realified_so3c(rng: &mut SeededRng) -> Matrix {
    let a = crate::sampling::gaussian_matrix(rng, 3, 3) * SAMPLE_SCALE;
    let b = crate::sampling::gaussian_matrix(rng, 3, 3) * SAMPLE_SCALE;
    let (a, b) = ((&a - a.transpose()) * 0.5, (&b - b.transpose()) * 0.5);
    let mut x = Matrix::zeros(6, 6);
    x.view_mut((0, 0), (3, 3)).copy_from(&a);
    x.view_mut((0, 3), (3, 3)).copy_from(&(-&b));
    x.view_mut((3, 0), (3, 3)).copy_from(&b);
    x.view_mut((3, 3), (3, 3)).copy_from(&a);
    x.exp()
}

/// Matrix of `X -> act(X)` on the span of `basis` (which `act` preserves).
fn induced<F: Fn(&Matrix) -> Matrix>(basis: &[Matrix], act: F) -> Matrix {
    let k = basis.len();
    let flat = |m: &Matrix| Vector::from_iterator(m.len(), m.iter().copied());
    let mut b = Matrix::zeros(basis[0].len(), k);
    for (j, x) in basis.iter().enumerate() {
        b.set_column(j, &flat(x));
    }
    let pinv = b
        .clone()
        .pseudo_inverse(1e-12)
        .expect("basis has full rank");
    let mut out = Matrix::zeros(k, k);
    for (j, x) in basis.iter().enumerate() {
        out.set_column(j, &(&pinv * flat(&act(x))));
    }
    out
}

fn elementary(n: usize, i: usize, j: usize) -> Matrix {
    let mut e = Matrix::zeros(n, n);
    e[(i, j)] = 1.0;
    e
}

fn symmetric_basis(n: usize) -> Vec<Matrix> {
    let mut v = Vec::new();
    for i in 0..n {
        for j in i..n {
            v.push(elementary(n, i, j) + elementary(n, j, i));
        }
    }
    v
}

fn antisymmetric_basis(n: usize) -> Vec<Matrix> {
    let mut v = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            v.push(elementary(n, i, j) - elementary(n, j, i));
        }
    }
    v
}

/// A random element of the group of `entry` in its representation: the
/// real form when one is recorded, otherwise the split real form.
pub fn sample_entry(entry: &RepEntry, rng: &mut SeededRng) -> Result<Matrix> {
    let n = entry.parameter as usize;
    let congruence = |g: &Matrix, basis: Vec<Matrix>| induced(&basis, |x| g * x * g.transpose());
    let m = match (entry.family, entry.real_form.as_deref()) {
        (Family::SL, _) => random_sl(rng, n, SAMPLE_SCALE),
        (Family::SO, Some("SO(3,2)")) => random_so_pq(rng, 3, 2, SAMPLE_SCALE),
        (Family::SO, None) => random_so_pq(rng, n - n / 2, n / 2, SAMPLE_SCALE),
        (Family::Sp, _) if n % 2 == 0 => random_sp(rng, n, SAMPLE_SCALE),
        (Family::AdSL, None) => {
            let g = random_sl(rng, n, SAMPLE_SCALE);
            let g_inv = g.clone().try_inverse().expect("group element");
            let mut basis: Vec<Matrix> = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        basis.push(elementary(n, i, j));
                    } else if i + 1 < n {
                        basis.push(elementary(n, i, i) - elementary(n, i + 1, i + 1));
                    }
                }
            }
            induced(&basis, |x| &g * x * &g_inv)
        }
        (Family::Sym2SL, None) => congruence(&random_sl(rng, n, SAMPLE_SCALE), symmetric_basis(n)),
        (Family::Ext2SL, None) => {
            congruence(&random_sl(rng, n, SAMPLE_SCALE), antisymmetric_basis(n))
        }
        (Family::Ext2SO, None) => congruence(
            &random_so_pq(rng, n - n / 2, n / 2, SAMPLE_SCALE),
            antisymmetric_basis(n),
        ),
        (Family::Ext20Sp, None) => {
            // The complement of the invariant bivector: tr(Omega X) = 0.
            let dim = 2 * n;
            let omega = crate::sampling::symplectic_form_n(dim);
            let all = antisymmetric_basis(dim);
            let c = Matrix::from_fn(1, all.len(), |_, j| (&omega * &all[j]).trace());
            let kernel = crate::linalg::null_space(&c, all.len() - 1).0;
            let basis: Vec<Matrix> = (0..kernel.ncols())
                .map(|j| {
                    all.iter()
                        .enumerate()
                        .fold(Matrix::zeros(dim, dim), |acc, (i, b)| {
                            acc + b * kernel[(i, j)]
                        })
                })
                .collect();
            congruence(&random_sp(rng, dim, SAMPLE_SCALE), basis)
        }
        (family, form) => {
            return Err(Error::NoSampler(format!(
                "{} with parameter {n} and real form {form:?}",
                family.as_str()
            )))
        }
    };
    Ok(m)
}

/// Distance from 1 to the nearest eigenvalue.
pub fn distance_to_one(m: &Matrix) -> Result<f64> {
    Ok(eigenvalues(m)?
        .iter()
        .map(|z| (z - 1.0).norm())
        .fold(f64::INFINITY, f64::min))
}

/// How many of `samples` random elements have eigenvalue 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueOneCensus {
    pub samples: usize,
    pub with_one: usize,
    /// Largest distance to 1 among the samples counted as having it.
    pub worst_hit: f64,
    /// Smallest distance to 1 among the samples counted as not having it.
    pub closest_miss: f64,
}

impl EigenvalueOneCensus {
    /// The samples unanimously agree with `flag`.
    pub fn agrees_with(&self, flag: bool) -> bool {
        if flag {
            self.with_one == self.samples
        } else {
            self.with_one == 0
        }
    }
}

fn census<F>(samples: usize, seed: u64, mut draw: F) -> Result<EigenvalueOneCensus>
where
    F: FnMut(&mut SeededRng) -> Result<Matrix>,
{
    if samples == 0 {
        return Err(Error::OutOfRange("at least one sample is required".into()));
    }
    let mut rng = seeded(seed);
    let mut c = EigenvalueOneCensus {
        samples,
        with_one: 0,
        worst_hit: 0.0,
        closest_miss: f64::INFINITY,
    };
    for _ in 0..samples {
        let m = draw(&mut rng)?;
        let d = distance_to_one(&m)?;
        let scale = 1.0 + m.norm();
        if d <= EIGENVALUE_ONE_TOL * scale {
            c.with_one += 1;
            c.worst_hit = c.worst_hit.max(d);
        } else {
            c.closest_miss = c.closest_miss.min(d);
        }
    }
    Ok(c)
}

pub fn eigenvalue_one_census(
    entry: &RepEntry,
    samples: usize,
    seed: u64,
) -> Result<EigenvalueOneCensus> {
    census(samples, seed, |rng| sample_entry(entry, rng))
}

/// Whether all `samples` random elements of `entry`'s group have eigenvalue
/// 1 in its representation.
pub fn verify_eigenvalue_one_generic(entry: &RepEntry, samples: usize, seed: u64) -> Result<bool> {
    let c = eigenvalue_one_census(entry, samples, seed)?;
    Ok(c.with_one == c.samples)
}

/// The same census for an admissible group on `V1`.
pub fn admissible_census(
    entry: &AdmissibleEntry,
    samples: usize,
    seed: u64,
) -> Result<EigenvalueOneCensus> {
    census(samples, seed, |rng| Ok(entry.sample_v1(rng)))
}

pub fn catalog_note_census(samples: usize, seed: u64) -> Result<EigenvalueOneCensus> {
    census(samples, seed, |rng| Ok(sample_realified_so3c(rng)))
}

/// An admissible entry with the outcome of its randomized check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckedEntry {
    #[serde(flatten)]
    pub entry: AdmissibleEntry,
    pub census: EigenvalueOneCensus,
    /// The census agrees with `eigenvalue_one_on_v1`.
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckedNote {
    #[serde(flatten)]
    pub note: CatalogNote,
    pub census: EigenvalueOneCensus,
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub case1: Vec<CheckedEntry>,
    pub case2: Vec<CheckedEntry>,
    pub notes: Vec<CheckedNote>,
}

impl Classification {
    pub fn all_verified(&self) -> bool {
        self.case1.iter().chain(&self.case2).all(|e| e.verified)
            && self.notes.iter().all(|n| n.verified)
    }
}

/// [`admissible_semisimple`] with every entry re-checked by sampling.
pub fn classify(n: usize, samples: usize, seed: u64) -> Result<Classification> {
    let a = admissible_semisimple(n)?;
    let check = |entries: Vec<AdmissibleEntry>| -> Result<Vec<CheckedEntry>> {
        entries
            .into_iter()
            .map(|entry| {
                let census = admissible_census(&entry, samples, seed)?;
                let verified = census.agrees_with(entry.eigenvalue_one_on_v1);
                Ok(CheckedEntry {
                    entry,
                    census,
                    verified,
                })
            })
            .collect()
    };
    let notes = catalog_notes()
        .into_iter()
        .map(|note| {
            let census = catalog_note_census(samples, seed)?;
            let verified = census.agrees_with(note.eigenvalue_one_generic);
            Ok(CheckedNote {
                note,
                census,
                verified,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Classification {
        n,
        samples,
        seed,
        case1: check(a.case1)?,
        case2: check(a.case2)?,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_shapes() {
        let t1 = table1();
        assert_eq!(t1.len(), 8);
        for row in &t1 {
            for e in &row.entries {
                assert!(e.rep_dim <= 6, "{e:?}");
            }
        }
        let ext = &t1[5].entries[0];
        assert_eq!(
            (ext.family, ext.parameter, ext.rep_dim),
            (Family::Ext2SL, 4, 6)
        );
        let sp = &t1[7].entries[0];
        assert_eq!(
            (sp.family, sp.parameter, sp.rep_dim),
            (Family::Ext20Sp, 2, 5)
        );
        let t2 = table2();
        assert_eq!(t2.len(), 3);
        assert!(t2.iter().flat_map(|r| &r.entries).all(|e| e.real_rank >= 2));
    }

    #[test]
    fn every_recorded_flag_matches_its_samples() {
        for row in table1().iter().chain(&table2()) {
            for e in &row.entries {
                let c = eigenvalue_one_census(e, 60, 9).unwrap();
                assert!(c.agrees_with(e.eigenvalue_one_generic), "{e:?}: {c:?}");
            }
        }
    }

    #[test]
    fn dimension_four_is_sl3_only() {
        let a = admissible_semisimple(4).unwrap();
        assert_eq!(a.case1.len(), 1);
        assert_eq!(a.case1[0].group, "SL3(R)");
        assert_eq!(a.case1[0].v1_dim, 3);
        assert!(a.case2.is_empty());
    }

    #[test]
    fn dimension_six_lists() {
        let a = admissible_semisimple(6).unwrap();
        let names: Vec<&str> = a.case2.iter().map(|e| e.group.as_str()).collect();
        assert_eq!(names, ["SO(3,2)", "SO(3) x SL3(R)", "SO(2,1) x SL3(R)"]);
        let sp = a.case1.iter().find(|e| e.group == "Sp4(R)").unwrap();
        assert_eq!(sp.v1_dim, 4);
        let prod = a.case1.iter().find(|e| e.item == 3).unwrap();
        assert_eq!(prod.v1_blocks, [2, 3]);
        assert!(a.case1.iter().chain(&a.case2).all(|e| e.real_rank >= 2));
    }

    #[test]
    fn small_and_large_dimensions() {
        for n in [2, 3] {
            let a = admissible_semisimple(n).unwrap();
            assert!(a.case1.is_empty() && a.case2.is_empty());
        }
        let e = admissible_semisimple(7).unwrap_err();
        assert!(e.to_string().contains("open problem"));
        assert!(admissible_semisimple(1).is_err());
    }

    #[test]
    fn cases_match_their_eigenvalue_property() {
        for n in 2..=6 {
            let a = admissible_semisimple(n).unwrap();
            for e in a.case1.iter().chain(&a.case2) {
                let c = admissible_census(e, 60, 4).unwrap();
                assert!(c.agrees_with(e.eigenvalue_one_on_v1), "{}: {c:?}", e.group);
            }
        }
    }

    #[test]
    fn catalog_note_has_the_property_but_rank_one() {
        let note = &catalog_notes()[0];
        assert_eq!(note.real_rank, 1);
        let c = catalog_note_census(40, 2).unwrap();
        assert!(c.agrees_with(note.eigenvalue_one_generic));
    }

    #[test]
    fn missing_sampler_is_reported() {
        let e = RepEntry {
            family: Family::AdSL,
            parameter: 2,
            rep_dim: 3,
            real_form: Some("SU(2)".into()),
            real_rank: 0,
            eigenvalue_one_generic: true,
        };
        assert!(matches!(
            verify_eigenvalue_one_generic(&e, 5, 0),
            Err(Error::NoSampler(_))
        ));
    }

    #[test]
    fn classify_checks_every_entry() {
        let c = classify(6, 50, 3).unwrap();
        assert_eq!((c.case1.len(), c.case2.len(), c.notes.len()), (5, 3, 1));
        assert!(c.all_verified());
        let c4 = classify(4, 50, 3).unwrap();
        assert_eq!(c4.case1.len(), 1);
        assert!(c4.case2.is_empty());
        assert!(classify(7, 50, 3).is_err());
        assert!(classify(5, 0, 3).is_err());
    }
}
