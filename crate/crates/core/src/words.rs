//! Generator sets, reduced words and word-level searches.
//!
//! Letters are ordered `a, a^-1, b, b^-1, ...` and words in shortlex order
//! (length first, then lexicographic in letters). The map of a word is the
//! composition of its letters, leftmost letter applied last:
//! `map(a b) = map(a) o map(b)`.

use std::cmp::Ordering;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::affine::{self, AffineMap};
use crate::projective::{hausdorff_rho, proj_distance, Subspace};
use crate::sampling::seeded;
use crate::spectral::{self, SpectralConfig, SpectralData};
use crate::{Error, Result};

/// Default cap on the number of words produced by one enumeration.
pub const DEFAULT_WORD_LIMIT: usize = 200_000;

/// Labeled affine generators with their inverses.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSet {
    labels: Vec<String>,
    maps: Vec<AffineMap>,
    inverses: Vec<AffineMap>,
}

impl GeneratorSet {
    pub fn new(labels: Vec<String>, maps: Vec<AffineMap>) -> Result<Self> {
        if labels.len() != maps.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for {} generators",
                labels.len(),
                maps.len()
            )));
        }
        if maps.is_empty() {
            return Err(Error::Config(
                "a generator set needs at least one map".into(),
            ));
        }
        let n = maps[0].dim();
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() || l.contains(char::is_whitespace) || l.contains('^') {
                return Err(Error::Config(format!("invalid generator label {l:?}")));
            }
            if labels[..i].contains(l) {
                return Err(Error::Config(format!("duplicate generator label {l:?}")));
            }
        }
        let mut inverses = Vec::with_capacity(maps.len());
        for m in &maps {
            if m.dim() != n {
                return Err(Error::DimensionMismatch(format!(
                    "generators act on R^{} and R^{}",
                    n,
                    m.dim()
                )));
            }
            inverses.push(m.inverse()?);
        }
        Ok(Self {
            labels,
            maps,
            inverses,
        })
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn ambient(&self) -> usize {
        self.maps[0].dim()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn maps(&self) -> &[AffineMap] {
        &self.maps
    }

    pub fn letter_map(&self, letter: Letter) -> &AffineMap {
        if letter.inverse {
            &self.inverses[letter.gen]
        } else {
            &self.maps[letter.gen]
        }
    }

    /// All `2k` letters in order.
    pub fn letters(&self) -> Vec<Letter> {
        (0..self.len())
            .flat_map(|gen| {
                [
                    Letter {
                        gen,
                        inverse: false,
                    },
                    Letter { gen, inverse: true },
                ]
            })
            .collect()
    }
}

/// A generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn inv(self) -> Letter {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }
}

/// A word in the generators; the constructors keep it reduced.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Word(Vec<Letter>);

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Freely reduces the given letter sequence.
    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[1] != w[0].inv())
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::from_letters(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn power(&self, p: i64) -> Word {
        let base = if p < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::empty();
        for _ in 0..p.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// `self * other * self^-1`.
    pub fn conjugate(&self, other: &Word) -> Word {
        self.concat(other).concat(&self.inverse())
    }

    pub fn evaluate(&self, gens: &GeneratorSet) -> AffineMap {
        let mut acc = AffineMap::identity(gens.ambient());
        for &l in &self.0 {
            acc = acc.compose(gens.letter_map(l));
        }
        acc
    }

    /// Space-separated tokens `label` / `label^-1`; the empty word is `1`.
    pub fn format(&self, gens: &GeneratorSet) -> String {
        WordDisplay { word: self, gens }.to_string()
    }

    pub fn parse(s: &str, gens: &GeneratorSet) -> Result<Word> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(Word::empty());
        }
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            let (label, inverse) = match tok.strip_suffix("^-1") {
                Some(base) => (base, true),
                None => (tok, false),
            };
            let gen = gens.labels.iter().position(|l| l == label).ok_or_else(|| {
                Error::Parse(format!("unknown generator {label:?} in word {s:?}"))
            })?;
            letters.push(Letter { gen, inverse });
        }
        Ok(Word::from_letters(letters))
    }
}

struct WordDisplay<'a> {
    word: &'a Word,
    gens: &'a GeneratorSet,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.word.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", self.gens.labels[l.gen])?;
            if l.inverse {
                write!(f, "^-1")?;
            }
        }
        Ok(())
    }
}

/// Reduced words up to a length, in shortlex order, with their maps.
#[derive(Debug, Clone)]
pub struct WordBall {
    pub entries: Vec<(Word, AffineMap)>,
    /// Set when the word limit stopped the enumeration early.
    pub truncated: bool,
}

/// Number of reduced words of length exactly `len` on `k` generators.
pub fn reduced_count(k: usize, len: usize) -> usize {
    if len == 0 {
        1
    } else {
        2 * k * (2 * k - 1).pow(len as u32 - 1)
    }
}

/// All reduced nonempty words of length `<= max_len` in shortlex order, each
/// with its evaluated map, stopping after `limit` words.
pub fn enumerate_words(gens: &GeneratorSet, max_len: usize, limit: usize) -> Result<WordBall> {
    if max_len == 0 {
        return Err(Error::Config("max_len must be at least 1".into()));
    }
    let letters = gens.letters();
    let mut entries: Vec<(Word, AffineMap)> = Vec::new();
    let mut layer: Vec<(Word, AffineMap)> =
        vec![(Word::empty(), AffineMap::identity(gens.ambient()))];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * letters.len());
        for (w, m) in &layer {
            for &l in &letters {
                if w.0.last() == Some(&l.inv()) {
                    continue;
                }
                if entries.len() + next.len() >= limit {
                    entries.extend(next);
                    return Ok(WordBall {
                        entries,
                        truncated: true,
                    });
                }
                let mut letters_w = w.0.clone();
                letters_w.push(l);
                next.push((Word(letters_w), m.compose(gens.letter_map(l))));
            }
        }
        entries.extend(next.iter().cloned());
        layer = next;
    }
    Ok(WordBall {
        entries,
        truncated: false,
    })
}

/// A uniformly chosen reduced word of the given length.
fn random_word(gens: &GeneratorSet, len: usize, rng: &mut crate::sampling::SeededRng) -> Word {
    let letters = gens.letters();
    let mut out: Vec<Letter> = Vec::with_capacity(len);
    while out.len() < len {
        let l = letters[rng.random_range(0..letters.len())];
        if out.last() != Some(&l.inv()) {
            out.push(l);
        }
    }
    Word(out)
}

/// `min` of the four `d_hat` values in the definition of transversality.
/// Pieces that are empty impose no constraint.
pub fn pair_margin(a: &SpectralData, b: &SpectralData) -> Result<f64> {
    let mut m: f64 = 1.0;
    let mut check = |x: &Subspace, y: &Subspace| -> Result<()> {
        if !x.is_zero() && !y.is_zero() {
            m = m.min(proj_distance(x, y)?);
        }
        Ok(())
    };
    check(&a.split.aplus, &b.split.dminus())?;
    check(&a.split.aminus, &b.split.dplus())?;
    check(&b.split.aplus, &a.split.dminus())?;
    check(&b.split.aminus, &a.split.dplus())?;
    Ok(m)
}

fn hyperbolic_data(g: &AffineMap, cfg: &SpectralConfig) -> Result<SpectralData> {
    let d = spectral::analyze(&g.linear, cfg)?;
    if !d.is_hyperbolic() {
        return Err(Error::NotHyperbolic { s: d.stats.s });
    }
    Ok(d)
}

/// Transversality margin of two hyperbolic maps.
pub fn transversality_margin_pair(
    g1: &AffineMap,
    g2: &AffineMap,
    cfg: &SpectralConfig,
) -> Result<f64> {
    pair_margin(&hyperbolic_data(g1, cfg)?, &hyperbolic_data(g2, cfg)?)
}

/// `eps`-transversality of two hyperbolic maps.
pub fn transversality_check(
    g1: &AffineMap,
    g2: &AffineMap,
    eps: f64,
    cfg: &SpectralConfig,
) -> Result<bool> {
    Ok(transversality_margin_pair(g1, g2, cfg)? >= eps)
}

/// Result of [`find_transversal_conjugator`].
#[derive(Debug, Clone)]
pub struct ConjugatorSearch {
    /// The word `t` and the invariant subspace `W` of `A+(g)`.
    pub found: Option<(Word, Subspace)>,
    /// `d_hat(l(t) W, D+(g))` for the found pair.
    pub margin: f64,
    pub words_tried: usize,
    /// The budget ran out without a hit; absence is not a proof.
    pub exhausted: bool,
}

/// `l(g)`-invariant subspaces of `A+(g)` of dimension `dim`, built from
/// unions of eigenvalue clusters.
fn invariant_subspaces_of_aplus(data: &SpectralData, dim: usize) -> Vec<Subspace> {
    let clusters: Vec<&spectral::EigenCluster> = data
        .split
        .clusters
        .iter()
        .filter(|c| c.class == spectral::ModulusClass::Expanding)
        .collect();
    let mut out = Vec::new();
    let k = clusters.len();
    for mask in 1u32..(1u32 << k) {
        let total: usize = (0..k)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| clusters[i].real_dim)
            .sum();
        if total != dim {
            continue;
        }
        let mut s = Subspace::zero(data.split.ambient());
        for (i, c) in clusters.iter().enumerate() {
            if mask & (1 << i) != 0 {
                s = s.sum(&c.space);
            }
        }
        out.push(s);
    }
    out
}

/// Searches for a word `t` and an `l(g)`-invariant `W` in `A+(g)` with
/// `dim W = dim A-(g)` and `d_hat(l(t) W, D+(g)) >= margin`, which makes
/// `l(t) W + D+(g)` the whole space. Shortlex words are tried first, then a
/// seeded sample of longer words, `budget` words in total.
pub fn find_transversal_conjugator(
    g: &AffineMap,
    gens: &GeneratorSet,
    budget: usize,
    margin: f64,
    seed: u64,
    cfg: &SpectralConfig,
) -> Result<ConjugatorSearch> {
    let data = spectral::analyze(&g.linear, cfg)?;
    let (dp, dm) = (data.split.aplus.dim(), data.split.aminus.dim());
    if dp < dm {
        return Err(Error::OutOfRange(format!(
            "dim A+ = {dp} is smaller than dim A- = {dm}"
        )));
    }
    if dm == 0 {
        return Ok(ConjugatorSearch {
            found: Some((Word::empty(), Subspace::zero(g.dim()))),
            margin: 1.0,
            words_tried: 0,
            exhausted: false,
        });
    }
    let candidates = invariant_subspaces_of_aplus(&data, dm);
    let dplus = data.split.dplus();
    let mut tried = 0usize;
    let test = |t: &Word, tm: &AffineMap| -> Result<Option<(Word, Subspace, f64)>> {
        for w in &candidates {
            let image = w.image(&tm.linear)?;
            let d = proj_distance(&image, &dplus)?;
            if d >= margin {
                return Ok(Some((t.clone(), w.clone(), d)));
            }
        }
        Ok(None)
    };

    // Shortlex part: the largest ball using at most half the budget.
    let mut len = 0;
    let mut count = 0;
    while count + reduced_count(gens.len(), len + 1) <= budget / 2 + 1 {
        len += 1;
        count += reduced_count(gens.len(), len);
        if len >= 12 {
            break;
        }
    }
    if len > 0 {
        let ball = enumerate_words(gens, len, budget)?;
        for (w, m) in &ball.entries {
            tried += 1;
            if let Some((t, s, d)) = test(w, m)? {
                return Ok(ConjugatorSearch {
                    found: Some((t, s)),
                    margin: d,
                    words_tried: tried,
                    exhausted: false,
                });
            }
        }
    }
    let mut rng = seeded(seed);
    while tried < budget {
        let l = len + 1 + rng.random_range(0..4usize);
        let w = random_word(gens, l, &mut rng);
        let m = w.evaluate(gens);
        tried += 1;
        if let Some((t, s, d)) = test(&w, &m)? {
            return Ok(ConjugatorSearch {
                found: Some((t, s)),
                margin: d,
                words_tried: tried,
                exhausted: false,
            });
        }
    }
    Ok(ConjugatorSearch {
        found: None,
        margin: 0.0,
        words_tried: tried,
        exhausted: true,
    })
}

/// Measured quantities for a product of two hyperbolic maps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractionReport {
    pub eps: f64,
    pub s_g: f64,
    pub s_h: f64,
    pub s_gh: Option<f64>,
    /// `rho_hat(A+(gh), A+(g))`.
    pub rho_plus: f64,
    /// `rho_hat(A-(gh), A-(h))`.
    pub rho_minus: f64,
    /// `s(gh) / (s(g) s(h))`.
    pub ratio_s: Option<f64>,
    /// `rho_plus / s(g)`.
    pub ratio_rho_plus: f64,
    /// `rho_minus / s(h)`.
    pub ratio_rho_minus: f64,
    pub gh_hyperbolicity_margin: f64,
    pub gh_eps_half_hyperbolic: bool,
    pub margin_gh_g: f64,
    pub margin_gh_h: f64,
    pub gh_eps_half_transversal_to_both: bool,
}

/// Measures the product estimates for `eps`-hyperbolic, `eps`-transversal
/// `g` and `h`.
pub fn product_contraction_report(
    g: &AffineMap,
    h: &AffineMap,
    eps: f64,
    cfg: &SpectralConfig,
) -> Result<ContractionReport> {
    let dg = hyperbolic_data(g, cfg)?;
    let dh = hyperbolic_data(h, cfg)?;
    for d in [&dg, &dh] {
        let m = d.hyperbolicity_margin()?;
        if m < eps {
            return Err(Error::OutOfRange(format!(
                "input is only {m:.3e}-hyperbolic, below eps = {eps:.3e}"
            )));
        }
    }
    let margin = pair_margin(&dg, &dh)?;
    if margin < eps {
        return Err(Error::NotTransversal { margin });
    }
    let gh = g.compose(h);
    let dgh = spectral::analyze(&gh.linear, cfg)?;
    let s_g = dg.stats.s.expect("hyperbolic");
    let s_h = dh.stats.s.expect("hyperbolic");
    let s_gh = dgh.stats.s;
    let rho_plus = hausdorff_rho(&dgh.split.aplus, &dg.split.aplus)?.value;
    let rho_minus = hausdorff_rho(&dgh.split.aminus, &dh.split.aminus)?.value;
    let gh_margin = dgh.hyperbolicity_margin()?;
    let margin_gh_g = pair_margin(&dgh, &dg)?;
    let margin_gh_h = pair_margin(&dgh, &dh)?;
    Ok(ContractionReport {
        eps,
        s_g,
        s_h,
        s_gh,
        rho_plus,
        rho_minus,
        ratio_s: s_gh.map(|s| s / (s_g * s_h)),
        ratio_rho_plus: rho_plus / s_g,
        ratio_rho_minus: rho_minus / s_h,
        gh_hyperbolicity_margin: gh_margin,
        gh_eps_half_hyperbolic: dgh.is_hyperbolic() && gh_margin >= eps / 2.0,
        margin_gh_g,
        margin_gh_h,
        gh_eps_half_transversal_to_both: margin_gh_g >= eps / 2.0 && margin_gh_h >= eps / 2.0,
    })
}

/// A word whose linear part misses the eigenvalue 1, with its fixed point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueOneFailure {
    pub word: String,
    /// Unique fixed point of the word's map, when the solve succeeded.
    pub fixed_point: Option<Vec<f64>>,
    /// `|g(p) - p|` at the fixed point.
    pub residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueOneReport {
    pub words_checked: usize,
    pub failures: Vec<EigenvalueOneFailure>,
    pub truncated: bool,
}

impl EigenvalueOneReport {
    pub fn all_pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that every word of length `<= max_len` has 1 as an eigenvalue of
/// its linear part. The tolerance is applied relative to `max(1, |l|)`.
pub fn eigenvalue_one_certificate(
    gens: &GeneratorSet,
    max_len: usize,
    tol: f64,
    limit: usize,
) -> Result<EigenvalueOneReport> {
    use rayon::prelude::*;
    let ball = enumerate_words(gens, max_len, limit)?;
    let failures: Vec<Option<EigenvalueOneFailure>> = ball
        .entries
        .par_iter()
        .map(|(w, m)| -> Result<Option<EigenvalueOneFailure>> {
            let scaled = tol * crate::linalg::op_norm(&m.linear).max(1.0);
            if affine::has_eigenvalue_one(&m.linear, scaled)? {
                return Ok(None);
            }
            let fp = affine::fixed_point(m, scaled).ok().flatten();
            let residual = fp.as_ref().map(|p| (m.apply(p) - p).norm());
            Ok(Some(EigenvalueOneFailure {
                word: w.format(gens),
                fixed_point: fp.map(|p| p.iter().copied().collect()),
                residual,
            }))
        })
        .collect::<Result<_>>()?;
    Ok(EigenvalueOneReport {
        words_checked: ball.entries.len(),
        failures: failures.into_iter().flatten().collect(),
        truncated: ball.truncated,
    })
}
