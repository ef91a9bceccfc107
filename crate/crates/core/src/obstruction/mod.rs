//! Bounded searches for obstructions to proper discontinuity.
//!
//! Three kinds of witness are looked for: a word whose linear part misses
//! the eigenvalue 1 (it has a fixed point), a transversal pair of hyperbolic
//! words with Margulis signs of opposite sign, and an exponent pair `(m, n)`
//! for which `h^m g^n` carries a ball around a point of `L_g` into the ball
//! around a point of `L_h`. Every search is bounded; a report saying nothing
//! was found is not a proof of properness.

mod ball;
mod escort;
mod margin;

pub use ball::{ball_intersection_witness, BallHit, BALL_SLACK};
pub use escort::{build_escort_sets, check_escort_conditions, EscortConditions, EscortSets};
pub use margin::{transversality_margin, MarginEstimate};

pub use crate::signform::CaseTwoStructure;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::affine::AffineMap;
use crate::signform::{alpha_case23, margulis_alpha, QuadraticForm, SignedElement};
use crate::spectral::{self, SpectralConfig, SpectralData};
use crate::words::{
    eigenvalue_one_certificate, enumerate_words, pair_margin, EigenvalueOneFailure, GeneratorSet,
    Word, DEFAULT_WORD_LIMIT,
};
use crate::{Error, Result};

/// What the signs are measured against.
#[derive(Debug, Clone, Copy)]
pub enum SignStructure<'a> {
    /// A form of signature `(k+1, k)` preserved by the linear parts.
    Form(&'a QuadraticForm),
    /// `R^6 = V1 + V2` with `SO(2,1)` acting on `V1`.
    CaseTwo(&'a CaseTwoStructure),
}

impl SignStructure<'_> {
    pub fn alpha(&self, g: &AffineMap, cfg: &SpectralConfig) -> Result<SignedElement> {
        match self {
            SignStructure::Form(b) => margulis_alpha(g, b, cfg),
            SignStructure::CaseTwo(s) => alpha_case23(g, s, cfg),
        }
    }

    /// Fails unless every generator's linear part is compatible with the
    /// structure.
    pub fn check(&self, gens: &GeneratorSet) -> Result<()> {
        for (label, m) in gens.labels().iter().zip(gens.maps()) {
            let r = match self {
                SignStructure::Form(b) => b.check_in_group(&m.linear),
                SignStructure::CaseTwo(s) => s
                    .theta1(&m.linear)
                    .and_then(|t| s.form().check_in_group(&t)),
            };
            r.map_err(|e| Error::Config(format!("generator {label}: {e}")))?;
        }
        Ok(())
    }
}

/// Limits and tolerances of a scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub max_len: usize,
    pub max_exp: u32,
    pub radius: f64,
    pub seed: u64,
    /// Smallest `|alpha|` counted as a sign, and smallest accepted
    /// transversality margin of a pair.
    pub margin: f64,
    /// Tolerance of the eigenvalue-1 test.
    pub tol: f64,
    pub word_limit: usize,
    /// Longest conjugator tried when no pair is transversal outright.
    pub conjugator_len: usize,
    /// Cap on the number of sign pairs examined.
    pub max_pairs: usize,
    pub spectral: SpectralConfig,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            max_len: 4,
            max_exp: 12,
            radius: 1.0,
            seed: 0,
            margin: 1e-6,
            tol: 1e-8,
            word_limit: DEFAULT_WORD_LIMIT,
            conjugator_len: 3,
            max_pairs: 20_000,
            spectral: SpectralConfig::default(),
        }
    }
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_len == 0 {
            return Err(Error::Config("max_len must be at least 1".into()));
        }
        if self.max_exp == 0 {
            return Err(Error::Config("max_exp must be at least 1".into()));
        }
        if !(self.radius > 0.0) || !self.radius.is_finite() {
            return Err(Error::Config(format!(
                "radius {} must be positive",
                self.radius
            )));
        }
        if !(self.margin > 0.0) || !(self.tol > 0.0) {
            return Err(Error::Config("margin and tol must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    OppositeSignPairFound,
    EigenvalueOneViolation,
    BallWitnessFound,
    NoObstructionWithinBudget,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::OppositeSignPairFound => "opposite-sign-pair-found",
            Verdict::EigenvalueOneViolation => "eigenvalue-one-violation",
            Verdict::BallWitnessFound => "ball-witness-found",
            Verdict::NoObstructionWithinBudget => "no-obstruction-within-budget",
        }
    }

    pub fn is_obstruction(self) -> bool {
        self != Verdict::NoObstructionWithinBudget
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignedWord {
    pub word: String,
    pub alpha: f64,
}

/// `g` (positive) and `t h t^-1` (negative) are transversal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OppositeSignPair {
    pub positive: SignedWord,
    pub negative: SignedWord,
    /// `t`; `"1"` when `g` and `h` are transversal as they are.
    pub conjugator: String,
    /// `t h t^-1` written out.
    pub conjugated: String,
    pub transversality_margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallWitness {
    /// Word for `g`.
    pub g: String,
    /// Word for `h`.
    pub h: String,
    pub m: u32,
    pub n: u32,
    pub point: Vec<f64>,
    /// Center of the first ball, on `L_g`.
    pub p1: Vec<f64>,
    /// Center of the second ball, on `L_h`.
    pub p2: Vec<f64>,
    pub radius: f64,
    /// `radius - |x - p1|`.
    pub start_slack: f64,
    /// `radius - |h^m g^n x - p2|`.
    pub end_slack: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SignSummary {
    pub hyperbolic_words: usize,
    pub signed_words: usize,
    pub positive: usize,
    pub negative: usize,
    /// `|alpha| <= margin`.
    pub undecided: usize,
    pub min_alpha: Option<f64>,
    pub max_alpha: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    pub max_len: usize,
    pub max_exp: u32,
    pub radius: f64,
    pub margin: f64,
    pub tol: f64,
    pub seed: u64,
    pub word_limit: usize,
    pub conjugator_len: usize,
    pub max_pairs: usize,
    pub words_enumerated: usize,
    pub truncated: bool,
    pub pairs_examined: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub verdict: Verdict,
    pub note: String,
    pub eigenvalue_one: Option<EigenvalueOneFailure>,
    pub signs: SignSummary,
    pub pair: Option<OppositeSignPair>,
    pub ball: Option<BallWitness>,
    pub budget: Budget,
}

const NOTE: &str = "bounded search: only obstructions are certified; \
                    no-obstruction-within-budget is not a proof of proper discontinuity";

/// A hyperbolic word with its spectral data and sign.
#[derive(Debug, Clone)]
pub struct Harvested {
    pub word: Word,
    pub map: AffineMap,
    pub data: SpectralData,
    pub alpha: Option<f64>,
}

/// Hyperbolic words of length `<= max_len` (shortlex order) with their signs
/// when a structure is given. Words whose sign is undefined (not regular,
/// rotation on the neutral space) keep `alpha = None`.
pub fn harvest(
    gens: &GeneratorSet,
    structure: Option<SignStructure<'_>>,
    cfg: &ScanConfig,
) -> Result<(Vec<Harvested>, usize, bool)> {
    let ball = enumerate_words(gens, cfg.max_len, cfg.word_limit)?;
    let total = ball.entries.len();
    let out: Vec<Option<Harvested>> = ball
        .entries
        .into_par_iter()
        .map(|(word, map)| {
            let data = spectral::analyze(&map.linear, &cfg.spectral).ok()?;
            if !data.is_hyperbolic() {
                return None;
            }
            let alpha = structure.and_then(|s| s.alpha(&map, &cfg.spectral).ok().map(|e| e.alpha));
            Some(Harvested {
                word,
                map,
                data,
                alpha,
            })
        })
        .collect();
    Ok((out.into_iter().flatten().collect(), total, ball.truncated))
}

fn summarize(h: &[Harvested], margin: f64) -> SignSummary {
    let mut s = SignSummary {
        hyperbolic_words: h.len(),
        ..Default::default()
    };
    for a in h.iter().filter_map(|x| x.alpha) {
        s.signed_words += 1;
        if a > margin {
            s.positive += 1;
        } else if a < -margin {
            s.negative += 1;
        } else {
            s.undecided += 1;
        }
        s.min_alpha = Some(s.min_alpha.map_or(a, |m: f64| m.min(a)));
        s.max_alpha = Some(s.max_alpha.map_or(a, |m: f64| m.max(a)));
    }
    s
}

struct PairHit {
    pair: OppositeSignPair,
    g: AffineMap,
    h: AffineMap,
}

fn find_pair(
    gens: &GeneratorSet,
    h: &[Harvested],
    cfg: &ScanConfig,
) -> Result<(Option<PairHit>, usize)> {
    let pos: Vec<&Harvested> = h
        .iter()
        .filter(|x| x.alpha.is_some_and(|a| a > cfg.margin))
        .collect();
    let neg: Vec<&Harvested> = h
        .iter()
        .filter(|x| x.alpha.is_some_and(|a| a < -cfg.margin))
        .collect();
    let mut order: Vec<(usize, usize, usize)> = Vec::new();
    for (i, p) in pos.iter().enumerate() {
        for (j, n) in neg.iter().enumerate() {
            order.push((p.word.len() + n.word.len(), i, j));
        }
    }
    order.sort_unstable();
    order.truncate(cfg.max_pairs);
    let signed = |x: &Harvested| SignedWord {
        word: x.word.format(gens),
        alpha: x.alpha.expect("signed"),
    };
    let mut examined = 0;
    for &(_, i, j) in &order {
        examined += 1;
        let m = pair_margin(&pos[i].data, &neg[j].data)?;
        if m >= cfg.margin {
            return Ok((
                Some(PairHit {
                    pair: OppositeSignPair {
                        positive: signed(pos[i]),
                        negative: signed(neg[j]),
                        conjugator: Word::empty().format(gens),
                        conjugated: neg[j].word.format(gens),
                        transversality_margin: m,
                    },
                    g: pos[i].map.clone(),
                    h: neg[j].map.clone(),
                }),
                examined,
            ));
        }
    }
    // No pair is transversal as it stands: conjugate the negative element.
    if order.is_empty() {
        return Ok((None, examined));
    }
    let conj = enumerate_words(gens, cfg.conjugator_len.max(1), cfg.word_limit)?;
    for &(_, i, j) in order.iter().take(64) {
        for (t, tm) in &conj.entries {
            examined += 1;
            let ht = neg[j].map.conjugate_by(tm)?;
            let Ok(dt) = spectral::analyze(&ht.linear, &cfg.spectral) else {
                continue;
            };
            let m = pair_margin(&pos[i].data, &dt)?;
            if m >= cfg.margin {
                return Ok((
                    Some(PairHit {
                        pair: OppositeSignPair {
                            positive: signed(pos[i]),
                            negative: signed(neg[j]),
                            conjugator: t.format(gens),
                            conjugated: t.conjugate(&neg[j].word).format(gens),
                            transversality_margin: m,
                        },
                        g: pos[i].map.clone(),
                        h: ht,
                    }),
                    examined,
                ));
            }
        }
    }
    Ok((None, examined))
}

fn budget(cfg: &ScanConfig, words: usize, truncated: bool, pairs: usize) -> Budget {
    Budget {
        max_len: cfg.max_len,
        max_exp: cfg.max_exp,
        radius: cfg.radius,
        margin: cfg.margin,
        tol: cfg.tol,
        seed: cfg.seed,
        word_limit: cfg.word_limit,
        conjugator_len: cfg.conjugator_len,
        max_pairs: cfg.max_pairs,
        words_enumerated: words,
        truncated,
        pairs_examined: pairs,
    }
}

/// Hyperbolic words up to `max_len`, their signs, and the first transversal
/// opposite-sign pair (conjugating the negative element if needed).
pub fn opposite_sign_search(
    gens: &GeneratorSet,
    structure: SignStructure<'_>,
    cfg: &ScanConfig,
) -> Result<ObstructionReport> {
    cfg.validate()?;
    structure.check(gens)?;
    let (h, words, truncated) = harvest(gens, Some(structure), cfg)?;
    let (hit, pairs) = find_pair(gens, &h, cfg)?;
    Ok(ObstructionReport {
        verdict: if hit.is_some() {
            Verdict::OppositeSignPairFound
        } else {
            Verdict::NoObstructionWithinBudget
        },
        note: NOTE.into(),
        eigenvalue_one: None,
        signs: summarize(&h, cfg.margin),
        pair: hit.map(|p| p.pair),
        ball: None,
        budget: budget(cfg, words, truncated, pairs),
    })
}

fn witness(gens_g: String, gens_h: String, hit: BallHit, radius: f64) -> BallWitness {
    BallWitness {
        g: gens_g,
        h: gens_h,
        m: hit.m,
        n: hit.n,
        point: hit.point.iter().copied().collect(),
        p1: hit.p1.iter().copied().collect(),
        p2: hit.p2.iter().copied().collect(),
        radius,
        start_slack: hit.start_slack,
        end_slack: hit.end_slack,
    }
}

/// The full pipeline: eigenvalue-1 certificate, hyperbolic harvest and signs,
/// opposite-sign search, and a ball witness for the pair found. Without a
/// sign structure, ball witnesses are sought for transversal pairs of
/// hyperbolic generators instead.
pub fn properness_scan(
    gens: &GeneratorSet,
    structure: Option<SignStructure<'_>>,
    cfg: &ScanConfig,
) -> Result<ObstructionReport> {
    cfg.validate()?;
    if let Some(s) = structure {
        s.check(gens)?;
    }
    let cert = eigenvalue_one_certificate(gens, cfg.max_len, cfg.tol, cfg.word_limit)?;
    if let Some(f) = cert.failures.into_iter().next() {
        return Ok(ObstructionReport {
            verdict: Verdict::EigenvalueOneViolation,
            note: NOTE.into(),
            eigenvalue_one: Some(f),
            signs: SignSummary::default(),
            pair: None,
            ball: None,
            budget: budget(cfg, cert.words_checked, cert.truncated, 0),
        });
    }
    let (h, words, truncated) = harvest(gens, structure, cfg)?;
    let signs = summarize(&h, cfg.margin);
    let (hit, pairs) = if structure.is_some() {
        find_pair(gens, &h, cfg)?
    } else {
        (None, 0)
    };
    let mut report = ObstructionReport {
        verdict: Verdict::NoObstructionWithinBudget,
        note: NOTE.into(),
        eigenvalue_one: None,
        signs,
        pair: None,
        ball: None,
        budget: budget(cfg, words, truncated, pairs),
    };
    if let Some(hit) = hit {
        report.verdict = Verdict::OppositeSignPairFound;
        if let Some(b) =
            ball_intersection_witness(&hit.g, &hit.h, cfg.radius, cfg.max_exp, &cfg.spectral)?
        {
            report.ball = Some(witness(
                hit.pair.positive.word.clone(),
                hit.pair.conjugated.clone(),
                b,
                cfg.radius,
            ));
        }
        report.pair = Some(hit.pair);
        return Ok(report);
    }
    if structure.is_none() {
        // Generators only: every ordered pair of distinct hyperbolic letters.
        let letters: Vec<&Harvested> = h.iter().filter(|x| x.word.len() == 1).collect();
        for g in &letters {
            for k in &letters {
                if g.word == k.word || g.word == k.word.inverse() {
                    continue;
                }
                if pair_margin(&g.data, &k.data)? < cfg.margin {
                    continue;
                }
                if let Some(b) = ball_intersection_witness(
                    &g.map,
                    &k.map,
                    cfg.radius,
                    cfg.max_exp,
                    &cfg.spectral,
                )? {
                    report.verdict = Verdict::BallWitnessFound;
                    report.ball = Some(witness(
                        g.word.format(gens),
                        k.word.format(gens),
                        b,
                        cfg.radius,
                    ));
                    return Ok(report);
                }
            }
        }
    }
    Ok(report)
}

/// Re-derives a report from the recorded configuration. Identical inputs
/// give a bit-identical report.
pub fn replay(
    gens: &GeneratorSet,
    structure: Option<SignStructure<'_>>,
    report: &ObstructionReport,
    spectral: SpectralConfig,
) -> Result<ObstructionReport> {
    let b = &report.budget;
    let cfg = ScanConfig {
        max_len: b.max_len,
        max_exp: b.max_exp,
        radius: b.radius,
        seed: b.seed,
        margin: b.margin,
        tol: b.tol,
        word_limit: b.word_limit,
        conjugator_len: b.conjugator_len,
        max_pairs: b.max_pairs,
        spectral,
    };
    properness_scan(gens, structure, &cfg)
}

/// Re-checks a recorded ball witness against the generators: parses the two
/// words, recomputes `h^m g^n` and both ball-membership inequalities.
pub fn verify_ball_witness(gens: &GeneratorSet, w: &BallWitness) -> Result<(f64, f64)> {
    let g = Word::parse(&w.g, gens)?.evaluate(gens);
    let h = Word::parse(&w.h, gens)?.evaluate(gens);
    let f = h.power(w.m as i64)?.compose(&g.power(w.n as i64)?);
    let x = crate::Vector::from_vec(w.point.clone());
    let p1 = crate::Vector::from_vec(w.p1.clone());
    let p2 = crate::Vector::from_vec(w.p2.clone());
    Ok((
        w.radius - (&x - p1).norm(),
        w.radius - (f.apply(&x) - p2).norm(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{
        case23_fixture, lorentz_form, margulis_pair, sl3_violation, translation_lattice,
        Case23Params, MargulisParams,
    };

    fn flipped() -> GeneratorSet {
        margulis_pair(&MargulisParams {
            sign_flip: true,
            ..Default::default()
        })
        .unwrap()
    }

    #[test]
    fn lattice_has_nothing_to_find() {
        let gens = translation_lattice(2).unwrap();
        let r = properness_scan(&gens, None, &ScanConfig::default()).unwrap();
        assert_eq!(r.verdict, Verdict::NoObstructionWithinBudget);
        assert_eq!(r.signs.hyperbolic_words, 0);
        assert!(r.pair.is_none() && r.ball.is_none());
    }

    #[test]
    fn fixed_point_word_is_reported() {
        let r = properness_scan(&sl3_violation(), None, &ScanConfig::default()).unwrap();
        assert_eq!(r.verdict, Verdict::EigenvalueOneViolation);
        let f = r.eigenvalue_one.unwrap();
        assert_eq!(f.word, "d");
        let p = f.fixed_point.unwrap();
        for (x, want) in p.iter().zip([-1.0, -0.5, 1.2]) {
            assert!((x - want).abs() < 1e-12);
        }
        assert!(f.residual.unwrap() < 1e-10);
    }

    #[test]
    fn flipped_pair_yields_certified_witness() {
        let gens = flipped();
        let b = lorentz_form();
        let r =
            properness_scan(&gens, Some(SignStructure::Form(&b)), &ScanConfig::default()).unwrap();
        assert_eq!(r.verdict, Verdict::OppositeSignPairFound);
        let pair = r.pair.as_ref().unwrap();
        assert!(pair.positive.alpha > 0.0 && pair.negative.alpha < 0.0);
        let w = r.ball.as_ref().unwrap();
        let (s0, s1) = verify_ball_witness(&gens, w).unwrap();
        assert!(s0 >= BALL_SLACK * 0.99 && s1 >= BALL_SLACK);
        assert!((s0 - w.start_slack).abs() < 1e-9 && (s1 - w.end_slack).abs() < 1e-9);
    }

    #[test]
    fn proper_pair_has_one_sign() {
        let gens = margulis_pair(&MargulisParams::default()).unwrap();
        let b = lorentz_form();
        let r =
            opposite_sign_search(&gens, SignStructure::Form(&b), &ScanConfig::default()).unwrap();
        assert_eq!(r.verdict, Verdict::NoObstructionWithinBudget);
        assert_eq!(r.signs.negative, 0);
        assert!(r.signs.positive > 0);
    }

    #[test]
    fn scan_reports_are_reproducible() {
        let gens = flipped();
        let b = lorentz_form();
        let s = Some(SignStructure::Form(&b));
        let cfg = ScanConfig {
            max_len: 3,
            ..Default::default()
        };
        let r1 = properness_scan(&gens, s, &cfg).unwrap();
        let r2 = replay(&gens, s, &r1, cfg.spectral).unwrap();
        assert_eq!(
            serde_json::to_string(&r1).unwrap(),
            serde_json::to_string(&r2).unwrap()
        );
    }

    #[test]
    fn case23_signs_are_available() {
        let (gens, st) = case23_fixture(&Case23Params::default()).unwrap();
        let cfg = ScanConfig {
            max_len: 2,
            ..Default::default()
        };
        let r = properness_scan(&gens, Some(SignStructure::CaseTwo(&st)), &cfg).unwrap();
        assert!(r.eigenvalue_one.is_none());
        assert!(r.signs.signed_words > 0);
    }

    #[test]
    fn incompatible_structure_names_the_generator() {
        let gens = sl3_violation();
        let b = crate::signform::normalize_form(&crate::sampling::standard_form(2, 1)).unwrap();
        let e = properness_scan(&gens, Some(SignStructure::Form(&b)), &ScanConfig::default())
            .unwrap_err();
        assert!(e.to_string().contains("generator d"), "{e}");
    }

    #[test]
    fn bad_budgets_are_rejected() {
        let gens = translation_lattice(1).unwrap();
        for cfg in [
            ScanConfig {
                max_len: 0,
                ..Default::default()
            },
            ScanConfig {
                radius: -1.0,
                ..Default::default()
            },
        ] {
            assert!(matches!(
                properness_scan(&gens, None, &cfg),
                Err(Error::Config(_))
            ));
        }
    }
}
