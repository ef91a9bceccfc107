//! Escort sets: for each of four anchor lines `A_i` in `V1`, three words
//! whose `theta_2` contracts a plane and three whose `theta_2` contracts a
//! line, all hyperbolic with uniform constants and with `A-(theta_1)` close
//! to `A_i`.
//!
//! Candidates come from conjugating short words by powers of the anchor
//! word (`gamma^n w gamma^-n` drags the invariant lines of `theta_1(w)`
//! towards `A+(theta_1(gamma))`), raised to a power when needed to make the
//! restriction norms contract.

use serde::{Deserialize, Serialize};

use crate::projective::{proj_distance, Subspace};
use crate::signform::CaseTwoStructure;
use crate::spectral::{self, SpectralConfig};
use crate::words::{enumerate_words, GeneratorSet, Word};
use crate::{Error, Matrix, Result};

/// Smallest singular value accepted for the rank tests of conditions 5 and 6.
const RANK_FLOOR: f64 = 1e-3;
/// Largest conjugation exponent tried.
const MAX_CONJ_EXP: i64 = 6;
/// Powers tried to make a candidate contract.
const POWERS: [i64; 5] = [1, 2, 3, 4, 6];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EscortSets {
    pub anchors: Vec<String>,
    /// `S_i`: `dim A-(theta_2) = 2`.
    pub s_sets: Vec<[String; 3]>,
    /// `T_i`: `dim A-(theta_2) = 1`.
    pub t_sets: Vec<[String; 3]>,
    pub eps: f64,
    pub q: f64,
    pub delta: f64,
}

/// Outcome of re-checking the six conditions, with the measured extremes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EscortConditions {
    /// 1: `d_hat(A-(theta_1(x)), A_i) < delta`.
    pub proximity: bool,
    /// 2: every element is `eps`-hyperbolic.
    pub hyperbolic: bool,
    /// 3: `s(x) < q < 1`.
    pub contraction: bool,
    /// 4: `dim A-(theta_2)` is 2 on `S_i` and 1 on `T_i`.
    pub dimensions: bool,
    /// 5: the three planes of each `S_i` meet only in 0.
    pub trivial_intersection: bool,
    /// 6: the three lines of each `T_i` span `V2`.
    pub full_sum: bool,
    pub max_proximity: f64,
    pub min_hyperbolicity: f64,
    pub max_s: f64,
    /// Smallest singular value of the stacked unit normals (condition 5).
    pub min_normal_sigma: f64,
    /// Smallest singular value of the stacked unit directions (condition 6).
    pub min_line_sigma: f64,
}

impl EscortConditions {
    pub fn all(&self) -> bool {
        self.proximity
            && self.hyperbolic
            && self.contraction
            && self.dimensions
            && self.trivial_intersection
            && self.full_sum
    }
}

/// Per-word measurements used by both the builder and the checker.
#[derive(Debug, Clone)]
struct Probe {
    s: f64,
    margin: f64,
    theta1_minus: Subspace,
    theta2_minus: Subspace,
}

fn probe(
    m: &crate::affine::AffineMap,
    st: &CaseTwoStructure,
    cfg: &SpectralConfig,
) -> Result<Option<Probe>> {
    let data = spectral::analyze(&m.linear, cfg)?;
    let Some(s) = data.stats.s else {
        return Ok(None);
    };
    if s >= 1.0 {
        return Ok(None);
    }
    let margin = data.hyperbolicity_margin()?;
    let t1 = spectral::three_splitting(&st.theta1(&m.linear)?, cfg)?;
    let t2 = spectral::three_splitting(&st.theta2(&m.linear)?, cfg)?;
    if t1.aminus.dim() != 1 || t2.aminus.is_zero() {
        return Ok(None);
    }
    Ok(Some(Probe {
        s,
        margin,
        theta1_minus: t1.aminus,
        theta2_minus: t2.aminus,
    }))
}

fn anchor_line(
    w: &Word,
    gens: &GeneratorSet,
    st: &CaseTwoStructure,
    cfg: &SpectralConfig,
) -> Result<Subspace> {
    let t1 = st.theta1(&w.evaluate(gens).linear)?;
    let split = spectral::three_splitting(&t1, cfg)?;
    if split.aplus.dim() != 1 {
        return Err(Error::NotRegular(format!(
            "anchor {} has dim A+(theta_1) = {}",
            w.format(gens),
            split.aplus.dim()
        )));
    }
    Ok(split.aplus)
}

fn min_sigma(columns: &[crate::Vector]) -> f64 {
    let mut m = Matrix::zeros(columns[0].len(), columns.len());
    for (j, c) in columns.iter().enumerate() {
        m.set_column(j, &c.normalize());
    }
    m.singular_values().min()
}

fn normal(plane: &Subspace) -> crate::Vector {
    plane.orthogonal_complement().vector(0)
}

/// Builds the sets for `anchors` (four words) within `budget` candidate
/// evaluations per anchor. `None` when the budget runs out.
pub fn build_escort_sets(
    gens: &GeneratorSet,
    st: &CaseTwoStructure,
    anchors: &[Word],
    delta: f64,
    budget: usize,
    cfg: &SpectralConfig,
) -> Result<Option<EscortSets>> {
    if anchors.len() != 4 {
        return Err(Error::OutOfRange(format!(
            "four anchors are required, got {}",
            anchors.len()
        )));
    }
    if !(delta > 0.0) {
        return Err(Error::OutOfRange(format!(
            "delta = {delta} must be positive"
        )));
    }
    let lines: Vec<Subspace> = anchors
        .iter()
        .map(|w| anchor_line(w, gens, st, cfg))
        .collect::<Result<_>>()?;
    for i in 0..4 {
        for j in (i + 1)..4 {
            let d = proj_distance(&lines[i], &lines[j])?;
            if d < 1e-6 {
                return Err(Error::NotTransversal { margin: d });
            }
        }
    }
    let base = enumerate_words(gens, 3, budget.max(1))?;
    let mut s_sets = Vec::new();
    let mut t_sets = Vec::new();
    for (anchor, line) in anchors.iter().zip(&lines) {
        let mut planes: Vec<(Word, Probe)> = Vec::new();
        let mut rays: Vec<(Word, Probe)> = Vec::new();
        let mut spent = 0;
        let mut s_found = None;
        let mut t_found = None;
        'search: for n in 0..=MAX_CONJ_EXP {
            let conj = anchor.power(n);
            for (w, _) in &base.entries {
                let c = conj.conjugate(w);
                for p in POWERS {
                    if spent >= budget {
                        break 'search;
                    }
                    spent += 1;
                    let word = c.power(p);
                    let Ok(Some(pr)) = probe(&word.evaluate(gens), st, cfg) else {
                        continue;
                    };
                    if proj_distance(&pr.theta1_minus, line)? >= delta {
                        break;
                    }
                    let list = match pr.theta2_minus.dim() {
                        2 => &mut planes,
                        1 => &mut rays,
                        _ => break,
                    };
                    if !list.iter().any(|(x, _)| *x == word) {
                        list.push((word, pr));
                    }
                    break;
                }
                if s_found.is_none() {
                    s_found = pick_triple(&planes, |p| normal(&p.theta2_minus));
                }
                if t_found.is_none() {
                    t_found = pick_triple(&rays, |p| p.theta2_minus.vector(0));
                }
                if s_found.is_some() && t_found.is_some() {
                    break 'search;
                }
            }
        }
        let (Some(s), Some(t)) = (s_found, t_found) else {
            return Ok(None);
        };
        s_sets.push(s.map(|k| planes[k].0.format(gens)));
        t_sets.push(t.map(|k| rays[k].0.format(gens)));
    }
    let mut sets = EscortSets {
        anchors: anchors.iter().map(|w| w.format(gens)).collect(),
        s_sets,
        t_sets,
        eps: 0.0,
        q: 0.0,
        delta,
    };
    // Constants from the chosen words.
    let mut eps = f64::INFINITY;
    let mut max_s: f64 = 0.0;
    for word in sets.s_sets.iter().chain(&sets.t_sets).flatten() {
        let m = Word::parse(word, gens)?.evaluate(gens);
        let pr = probe(&m, st, cfg)?.expect("chosen words were probed");
        eps = eps.min(pr.margin);
        max_s = max_s.max(pr.s);
    }
    sets.eps = eps;
    sets.q = 0.5 * (1.0 + max_s);
    Ok(Some(sets))
}

/// First triple (lexicographic) whose stacked vectors are independent.
fn pick_triple<F>(list: &[(Word, Probe)], vector: F) -> Option<[usize; 3]>
where
    F: Fn(&Probe) -> crate::Vector,
{
    let v: Vec<crate::Vector> = list.iter().map(|(_, p)| vector(p)).collect();
    let k = v.len().min(40);
    for a in 0..k {
        for b in (a + 1)..k {
            for c in (b + 1)..k {
                if min_sigma(&[v[a].clone(), v[b].clone(), v[c].clone()]) >= RANK_FLOOR {
                    return Some([a, b, c]);
                }
            }
        }
    }
    None
}

/// Re-verifies the six conditions for `sets` from scratch.
pub fn check_escort_conditions(
    gens: &GeneratorSet,
    st: &CaseTwoStructure,
    sets: &EscortSets,
    cfg: &SpectralConfig,
) -> Result<EscortConditions> {
    let mut c = EscortConditions {
        proximity: true,
        hyperbolic: true,
        contraction: sets.q < 1.0,
        dimensions: true,
        trivial_intersection: true,
        full_sum: true,
        max_proximity: 0.0,
        min_hyperbolicity: f64::INFINITY,
        max_s: 0.0,
        min_normal_sigma: f64::INFINITY,
        min_line_sigma: f64::INFINITY,
    };
    for (i, anchor) in sets.anchors.iter().enumerate() {
        let line = anchor_line(&Word::parse(anchor, gens)?, gens, st, cfg)?;
        for (family, want) in [(&sets.s_sets[i], 2usize), (&sets.t_sets[i], 1usize)] {
            let mut vecs = Vec::new();
            for word in family.iter() {
                let m = Word::parse(word, gens)?.evaluate(gens);
                let Some(pr) = probe(&m, st, cfg)? else {
                    c.hyperbolic = false;
                    c.contraction = false;
                    continue;
                };
                let d = proj_distance(&pr.theta1_minus, &line)?;
                c.max_proximity = c.max_proximity.max(d);
                c.proximity &= d < sets.delta;
                c.min_hyperbolicity = c.min_hyperbolicity.min(pr.margin);
                c.hyperbolic &= pr.margin >= sets.eps && pr.margin > 0.0;
                c.max_s = c.max_s.max(pr.s);
                c.contraction &= pr.s < sets.q;
                c.dimensions &= pr.theta2_minus.dim() == want;
                if pr.theta2_minus.dim() == want {
                    vecs.push(if want == 2 {
                        normal(&pr.theta2_minus)
                    } else {
                        pr.theta2_minus.vector(0)
                    });
                }
            }
            let sigma = if vecs.len() == 3 {
                min_sigma(&vecs)
            } else {
                0.0
            };
            if want == 2 {
                c.min_normal_sigma = c.min_normal_sigma.min(sigma);
                c.trivial_intersection &= sigma >= RANK_FLOOR;
            } else {
                c.min_line_sigma = c.min_line_sigma.min(sigma);
                c.full_sum &= sigma >= RANK_FLOOR;
            }
        }
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{case23_fixture, Case23Params};

    fn anchors(gens: &GeneratorSet) -> Vec<Word> {
        ["a", "b", "a^-1", "b^-1"]
            .iter()
            .map(|s| Word::parse(s, gens).unwrap())
            .collect()
    }

    #[test]
    fn case23_sets_satisfy_all_conditions() {
        let cfg = SpectralConfig::default();
        for params in [
            Case23Params::default(),
            Case23Params {
                coupling: 0.7,
                mix: true,
                ..Default::default()
            },
        ] {
            let (gens, st) = case23_fixture(&params).unwrap();
            let sets = build_escort_sets(&gens, &st, &anchors(&gens), 0.3, 3000, &cfg)
                .unwrap()
                .expect("sets within budget");
            assert!(sets.q < 1.0 && sets.eps > 0.0);
            let c = check_escort_conditions(&gens, &st, &sets, &cfg).unwrap();
            assert!(c.all(), "{c:?}");
            assert!(c.max_proximity < 0.3);
        }
    }

    #[test]
    fn tampered_sets_fail_the_check() {
        let cfg = SpectralConfig::default();
        let (gens, st) = case23_fixture(&Case23Params::default()).unwrap();
        let mut sets = build_escort_sets(&gens, &st, &anchors(&gens), 0.3, 3000, &cfg)
            .unwrap()
            .unwrap();
        // Swapping a plane word into a line set breaks the dimension count.
        sets.t_sets[0][0] = sets.s_sets[0][0].clone();
        let c = check_escort_conditions(&gens, &st, &sets, &cfg).unwrap();
        assert!(!c.dimensions && !c.all());
    }

    #[test]
    fn wrong_anchor_count_is_rejected() {
        let cfg = SpectralConfig::default();
        let (gens, st) = case23_fixture(&Case23Params::default()).unwrap();
        let a = anchors(&gens);
        assert!(build_escort_sets(&gens, &st, &a[..3], 0.3, 100, &cfg).is_err());
        assert!(build_escort_sets(&gens, &st, &a, 0.0, 100, &cfg).is_err());
    }
}
