//! Deterministic fixture groups. Every fixture is a pure function of its
//! parameters.

use serde::{Deserialize, Serialize};

use crate::affine::AffineMap;
use crate::groupfile::{Group, Splitting};
use crate::linalg::{from_rows, unit};
use crate::sampling::{diagonal_boost, standard_form};
use crate::signform::{margulis_alpha, normalize_form, CaseTwoStructure, QuadraticForm};
use crate::spectral::SpectralConfig;
use crate::words::{transversality_margin_pair, GeneratorSet};
use crate::{Error, Matrix, Result, Vector};

/// Smallest accepted transversality margin of the two generators of a pair.
const PAIR_MIN_MARGIN: f64 = 1e-3;

/// `Z^n` acting on `R^n` by the standard translations `t1 .. tn`.
pub fn translation_lattice(n: usize) -> Result<GeneratorSet> {
    if !(1..=8).contains(&n) {
        return Err(Error::OutOfRange(format!(
            "lattice rank {n} is outside 1..=8"
        )));
    }
    let labels = (1..=n).map(|i| format!("t{i}")).collect();
    let maps = (0..n)
        .map(|i| AffineMap::translation_only(unit(n, i)))
        .collect();
    GeneratorSet::new(labels, maps)
}

/// The Lorentz form `x1^2 + x2^2 - y^2` on `R^3`.
pub fn lorentz_form() -> QuadraticForm {
    normalize_form(&standard_form(2, 1)).expect("standard form")
}

/// Rotation by `angle` in the `(e1, e2)` plane, an element of `SO(2,1)`.
pub fn spatial_rotation(angle: f64) -> Matrix {
    let (s, c) = angle.sin_cos();
    from_rows(&[vec![c, -s, 0.0], vec![s, c, 0.0], vec![0.0, 0.0, 1.0]])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MargulisParams {
    /// Largest eigenvalue of each generator's linear part; must exceed 1.
    pub boost_strength: f64,
    /// Rotation between the two boost axes.
    pub angle: f64,
    pub translation_scale: f64,
    /// Reverse the second translation.
    pub sign_flip: bool,
}

impl Default for MargulisParams {
    fn default() -> Self {
        Self {
            boost_strength: 3.0,
            angle: std::f64::consts::FRAC_PI_2,
            translation_scale: 3.0,
            sign_flip: false,
        }
    }
}

/// Linear parts of the pair: a boost in the `(e1, e3)` plane and its
/// conjugate by a rotation.
fn pair_linear_parts(boost_strength: f64, angle: f64) -> Result<(Matrix, Matrix)> {
    if !(boost_strength > 1.0) || !boost_strength.is_finite() {
        return Err(Error::OutOfRange(format!(
            "boost strength {boost_strength} must be a finite number > 1"
        )));
    }
    if !angle.is_finite() {
        return Err(Error::NonFinite);
    }
    // At multiples of pi the axes coincide or swap roles.
    if angle.sin().abs() < PAIR_MIN_MARGIN {
        return Err(Error::NotTransversal {
            margin: angle.sin().abs(),
        });
    }
    let l1 = diagonal_boost(&[boost_strength.ln()]);
    let r = spatial_rotation(angle);
    let l2 = &r * &l1 * r.transpose();
    Ok((l1, l2))
}

/// Two affine maps of Lorentz 3-space whose linear parts are transversal
/// boosts, each translated by `translation_scale` along its own oriented
/// neutral vector. Both signs are positive unless `sign_flip` is set, in
/// which case the second is negative.
pub fn margulis_pair(p: &MargulisParams) -> Result<GeneratorSet> {
    let (l1, l2) = pair_linear_parts(p.boost_strength, p.angle)?;
    let b = lorentz_form();
    let cfg = SpectralConfig::default();
    let v1 = margulis_alpha(&AffineMap::linear_only(l1.clone())?, &b, &cfg)?.v_plus;
    let v2 = margulis_alpha(&AffineMap::linear_only(l2.clone())?, &b, &cfg)?.v_plus;
    let sign = if p.sign_flip { -1.0 } else { 1.0 };
    let g1 = AffineMap::new(l1, v1 * p.translation_scale)?;
    let g2 = AffineMap::new(l2, v2 * (sign * p.translation_scale))?;
    let margin = transversality_margin_pair(&g1, &g2, &cfg)?;
    if margin < PAIR_MIN_MARGIN {
        return Err(Error::NotTransversal { margin });
    }
    GeneratorSet::new(vec!["a".into(), "b".into()], vec![g1, g2])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Case23Params {
    pub boost_strength: f64,
    pub angle: f64,
    pub translation_scale: f64,
    /// Size of the block mapping `V1` into `V2` (a unipotent part).
    pub coupling: f64,
    /// Put `V1` and `V2` in general position instead of the coordinate planes.
    pub mix: bool,
}

impl Default for Case23Params {
    fn default() -> Self {
        Self {
            boost_strength: 3.0,
            angle: 1.9,
            translation_scale: 1.0,
            coupling: 0.0,
            mix: false,
        }
    }
}

fn conj_diag(p: &Matrix, d: &[f64]) -> Matrix {
    let p_inv = p
        .clone()
        .try_inverse()
        .expect("fixed conjugator is invertible");
    p * Matrix::from_diagonal(&Vector::from_vec(d.to_vec())) * p_inv
}

/// Regular elements of `SL_3(R)` with distinct real eigenvalues. The first
/// contracts a plane, the second a line.
fn sl3_blocks() -> (Matrix, Matrix) {
    let p = from_rows(&[
        vec![1.0, 0.4, -0.3],
        vec![0.2, 1.0, 0.5],
        vec![-0.1, 0.3, 1.0],
    ]);
    let q = from_rows(&[
        vec![1.0, -0.5, 0.2],
        vec![0.6, 1.0, -0.4],
        vec![0.3, 0.1, 1.0],
    ]);
    (
        conj_diag(&p, &[2.2, 0.5, 1.0 / 1.1]),
        conj_diag(&q, &[0.25, 1.6, 2.5]),
    )
}

fn mixing_matrix() -> Matrix {
    Matrix::from_fn(6, 6, |i, j| {
        if i == j {
            1.5
        } else {
            0.3 * (((i * 7 + j * 3) % 5) as f64 - 2.0) / 2.0
        }
    })
}

/// Generators `a, b` on `R^6 = V1 + V2` with linear parts in
/// `SO(2,1) x SL_3(R)` (plus an optional unipotent coupling) and the split
/// structure they preserve.
pub fn case23_fixture(p: &Case23Params) -> Result<(GeneratorSet, CaseTwoStructure)> {
    let (l1, l2) = pair_linear_parts(p.boost_strength, p.angle)?;
    let b = lorentz_form();
    let cfg = SpectralConfig::default();
    let n1 = margulis_alpha(&AffineMap::linear_only(l1.clone())?, &b, &cfg)?.v_plus;
    let n2 = margulis_alpha(&AffineMap::linear_only(l2.clone())?, &b, &cfg)?.v_plus;
    let (s1, s2) = sl3_blocks();
    let c1 = from_rows(&[
        vec![0.0, 1.0, 0.0],
        vec![0.5, 0.0, 0.0],
        vec![0.0, 0.0, 1.0],
    ]);
    let c2 = from_rows(&[
        vec![1.0, 0.0, 0.0],
        vec![0.0, 0.0, -0.5],
        vec![0.0, 1.0, 0.0],
    ]);
    let x = if p.mix {
        mixing_matrix()
    } else {
        Matrix::identity(6, 6)
    };
    let x_inv = x
        .clone()
        .try_inverse()
        .expect("mixing matrix is invertible");
    let block = |a: &Matrix, c: &Matrix, d: &Matrix| -> Matrix {
        let mut m = Matrix::zeros(6, 6);
        m.view_mut((0, 0), (3, 3)).copy_from(a);
        m.view_mut((3, 0), (3, 3)).copy_from(&(c * p.coupling));
        m.view_mut((3, 3), (3, 3)).copy_from(d);
        &x * m * &x_inv
    };
    let lift = |v1: &Vector, v2: &[f64]| -> Vector {
        let mut t = Vector::zeros(6);
        t.rows_mut(0, 3).copy_from(v1);
        t.rows_mut(3, 3).copy_from(&Vector::from_vec(v2.to_vec()));
        &x * t
    };
    let a = AffineMap::new(
        block(&l1, &c1, &s1),
        lift(&(n1 * p.translation_scale), &[0.3, -0.2, 0.5]),
    )?;
    let bm = AffineMap::new(
        block(&l2, &c2, &s2),
        lift(&(n2 * p.translation_scale), &[-0.4, 0.1, 0.2]),
    )?;
    let gens = GeneratorSet::new(vec!["a".into(), "b".into()], vec![a, bm])?;
    let v1 = x.columns(0, 3).into_owned();
    let v2 = x.columns(3, 3).into_owned();
    let s = CaseTwoStructure::new(v1, v2, &standard_form(2, 1))?;
    Ok((gens, s))
}

/// `Z^3` together with `diag(2, 3, 1/6)` translated by `(1, 1, 1)`; the
/// last generator has no eigenvalue 1.
pub fn sl3_violation() -> GeneratorSet {
    let mut labels: Vec<String> = (1..=3).map(|i| format!("t{i}")).collect();
    let mut maps: Vec<AffineMap> = (0..3)
        .map(|i| AffineMap::translation_only(unit(3, i)))
        .collect();
    labels.push("d".into());
    maps.push(
        AffineMap::new(
            Matrix::from_diagonal(&Vector::from_vec(vec![2.0, 3.0, 1.0 / 6.0])),
            Vector::from_element(3, 1.0),
        )
        .expect("invertible"),
    );
    GeneratorSet::new(labels, maps).expect("valid fixture")
}

/// Options accepted by [`fixture`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixtureOptions {
    pub n: usize,
    pub margulis: MargulisParams,
    pub case23: Case23Params,
}

impl Default for FixtureOptions {
    fn default() -> Self {
        Self {
            n: 2,
            margulis: MargulisParams::default(),
            case23: Case23Params::default(),
        }
    }
}

pub const FIXTURE_NAMES: [&str; 4] = ["lattice", "margulis", "case23", "sl3-violation"];

/// A named fixture as a complete group description.
pub fn fixture(name: &str, opts: &FixtureOptions) -> Result<Group> {
    match name {
        "lattice" => Ok(Group::plain(translation_lattice(opts.n)?)),
        "margulis" => Ok(Group {
            generators: margulis_pair(&opts.margulis)?,
            form: Some(standard_form(2, 1)),
            splitting: None,
        }),
        "case23" => {
            let (generators, s) = case23_fixture(&opts.case23)?;
            Ok(Group {
                generators,
                form: Some(s.form().gram().clone()),
                splitting: Some(Splitting {
                    v1: s.v1().clone(),
                    v2: s.v2().clone(),
                }),
            })
        }
        "sl3-violation" => Ok(Group::plain(sl3_violation())),
        other => Err(Error::Config(format!(
            "unknown fixture {other:?}; known fixtures: {}",
            FIXTURE_NAMES.join(", ")
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signform::alpha_case23;
    use crate::spectral;
    use crate::words::{enumerate_words, DEFAULT_WORD_LIMIT};

    #[test]
    fn lattice_orbit_of_origin() {
        let g = translation_lattice(2).unwrap();
        let ball = enumerate_words(&g, 2, DEFAULT_WORD_LIMIT).unwrap();
        let mut pts: Vec<(i64, i64)> = ball
            .entries
            .iter()
            .map(|(_, m)| {
                (
                    m.translation[0].round() as i64,
                    m.translation[1].round() as i64,
                )
            })
            .collect();
        pts.push((0, 0));
        pts.sort();
        pts.dedup();
        assert_eq!(pts.len(), 13);
        assert!(translation_lattice(0).is_err());
        assert!(translation_lattice(9).is_err());
    }

    #[test]
    fn margulis_pair_signs() {
        let b = lorentz_form();
        let cfg = SpectralConfig::default();
        let plain = margulis_pair(&MargulisParams::default()).unwrap();
        let flipped = margulis_pair(&MargulisParams {
            sign_flip: true,
            ..Default::default()
        })
        .unwrap();
        let a: Vec<f64> = plain
            .maps()
            .iter()
            .map(|m| margulis_alpha(m, &b, &cfg).unwrap().alpha)
            .collect();
        let f: Vec<f64> = flipped
            .maps()
            .iter()
            .map(|m| margulis_alpha(m, &b, &cfg).unwrap().alpha)
            .collect();
        assert!(a[0] > 0.0 && a[1] > 0.0);
        assert!(f[0] * f[1] < 0.0);
        assert!((f[0] - a[0]).abs() < 1e-10);
        assert!((f[1] + a[1]).abs() < 1e-10);
        for m in plain.maps() {
            let l = &m.linear;
            let j = standard_form(2, 1);
            assert!((l.transpose() * &j * l - &j).norm() < 1e-10);
        }
    }

    #[test]
    fn degenerate_angle_is_rejected() {
        let p = MargulisParams {
            angle: 0.0,
            ..Default::default()
        };
        assert!(margulis_pair(&p).is_err());
        let p = MargulisParams {
            boost_strength: 1.0,
            ..Default::default()
        };
        assert!(margulis_pair(&p).is_err());
    }

    #[test]
    fn case23_blocks_agree() {
        let cfg = SpectralConfig::default();
        for params in [
            Case23Params::default(),
            Case23Params {
                coupling: 0.7,
                mix: true,
                ..Default::default()
            },
        ] {
            let (gens, s) = case23_fixture(&params).unwrap();
            for m in gens.maps() {
                let full = alpha_case23(m, &s, &cfg).unwrap().alpha;
                let theta1 = s.theta1(&m.linear).unwrap();
                let block = AffineMap::new(theta1, s.pi(&m.translation)).unwrap();
                let direct = margulis_alpha(&block, s.form(), &cfg).unwrap().alpha;
                assert!((full - direct).abs() < 1e-9, "{full} vs {direct}");
            }
        }
    }

    #[test]
    fn case23_words_realize_both_contracting_dimensions() {
        let (gens, s) = case23_fixture(&Case23Params::default()).unwrap();
        let cfg = SpectralConfig::default();
        let ball = enumerate_words(&gens, 2, DEFAULT_WORD_LIMIT).unwrap();
        let mut seen = [false; 4];
        for (_, m) in &ball.entries {
            let t2 = s.theta2(&m.linear).unwrap();
            let split = spectral::three_splitting(&t2, &cfg).unwrap();
            seen[split.aminus.dim()] = true;
        }
        assert!(seen[1] && seen[2]);
    }

    #[test]
    fn sl3_fixture_has_the_diagonal_generator() {
        let g = sl3_violation();
        assert_eq!(g.len(), 4);
        assert_eq!(g.maps()[3].linear[(1, 1)], 3.0);
    }

    #[test]
    fn named_fixtures_round_trip() {
        use crate::groupfile::{parse_group, serialize_group};
        for name in FIXTURE_NAMES {
            let g = fixture(name, &FixtureOptions::default()).unwrap();
            assert_eq!(parse_group(&serialize_group(&g)).unwrap(), g, "{name}");
        }
        assert!(fixture("nope", &FixtureOptions::default()).is_err());
    }
}
