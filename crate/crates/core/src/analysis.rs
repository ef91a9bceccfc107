//! Per-generator and per-word summaries of a group file.

use serde::{Deserialize, Serialize};

use crate::affine::AffineMap;
use crate::groupfile::Group;
use crate::obstruction::SignStructure;
use crate::signform::{CaseTwoStructure, QuadraticForm};
use crate::spectral::{self, SpectralConfig};
use crate::words::{enumerate_words, Word, DEFAULT_WORD_LIMIT};
use crate::{Error, Result};

/// An owned sign structure, built from a group's form and splitting.
#[derive(Debug, Clone)]
pub enum OwnedStructure {
    Form(QuadraticForm),
    CaseTwo(CaseTwoStructure),
}

impl OwnedStructure {
    /// `None` when the group carries neither a form nor a splitting.
    pub fn from_group(group: &Group) -> Result<Option<Self>> {
        if let Some(s) = group.case_two() {
            return Ok(Some(OwnedStructure::CaseTwo(s?)));
        }
        match group.quadratic_form() {
            Some(b) => Ok(Some(OwnedStructure::Form(b?))),
            None => Ok(None),
        }
    }

    pub fn view(&self) -> SignStructure<'_> {
        match self {
            OwnedStructure::Form(b) => SignStructure::Form(b),
            OwnedStructure::CaseTwo(s) => SignStructure::CaseTwo(s),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            OwnedStructure::Form(b) => {
                let (p, q) = b.signature();
                format!("form of signature ({p},{q})")
            }
            OwnedStructure::CaseTwo(_) => "splitting V1 + V2 with a form on V1".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementSummary {
    pub word: String,
    pub dim_plus: usize,
    pub dim_minus: usize,
    pub dim_zero: usize,
    pub lambda: f64,
    pub s: Option<f64>,
    pub hyperbolic: bool,
    /// `min(d_hat(A+, D-), d_hat(A-, D+))`.
    pub hyperbolicity_margin: f64,
    /// Distance from the spectrum of the linear part to 1.
    pub distance_to_one: f64,
    /// The Margulis sign, when a structure is present and the element is
    /// regular enough to carry one.
    pub alpha: Option<f64>,
    /// Why a step failed, if one did.
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupAnalysis {
    pub dimension: usize,
    pub structure: Option<String>,
    pub generators: Vec<ElementSummary>,
    /// Reduced words of length 2 up to `max_len`, in shortlex order.
    pub words: Vec<ElementSummary>,
    pub max_len: usize,
    pub truncated: bool,
    pub hyperbolic_words: usize,
    /// Words of length `<= max_len` (generators included) whose linear part
    /// has no eigenvalue within `tol` of 1.
    pub without_eigenvalue_one: usize,
    pub tol: f64,
}

fn summarize(
    word: String,
    map: &AffineMap,
    structure: Option<SignStructure<'_>>,
    cfg: &SpectralConfig,
) -> ElementSummary {
    let distance_to_one = spectral::eigenvalues(&map.linear)
        .map(|ev| {
            ev.iter()
                .map(|z| (z - 1.0).norm())
                .fold(f64::INFINITY, f64::min)
        })
        .unwrap_or(f64::NAN);
    let data = match spectral::analyze(&map.linear, cfg) {
        Ok(d) => d,
        Err(e) => {
            return ElementSummary {
                word,
                dim_plus: 0,
                dim_minus: 0,
                dim_zero: 0,
                lambda: f64::NAN,
                s: None,
                hyperbolic: false,
                hyperbolicity_margin: f64::NAN,
                distance_to_one,
                alpha: None,
                note: Some(e.to_string()),
            }
        }
    };
    let mut note = None;
    let alpha = match structure {
        Some(s) if data.is_hyperbolic() => match s.alpha(map, cfg) {
            Ok(a) => Some(a.alpha),
            Err(e) => {
                note = Some(e.to_string());
                None
            }
        },
        _ => None,
    };
    ElementSummary {
        word,
        dim_plus: data.split.aplus.dim(),
        dim_minus: data.split.aminus.dim(),
        dim_zero: data.split.azero.dim(),
        lambda: data.stats.lambda,
        s: data.stats.s,
        hyperbolic: data.is_hyperbolic(),
        hyperbolicity_margin: data.hyperbolicity_margin().unwrap_or(f64::NAN),
        distance_to_one,
        alpha,
        note,
    }
}

/// Spectral data and signs of every generator and every reduced word of
/// length `2..=max_len`.
pub fn analyze_group(
    group: &Group,
    max_len: usize,
    tol: f64,
    cfg: &SpectralConfig,
) -> Result<GroupAnalysis> {
    if max_len == 0 {
        return Err(Error::Config("max_len must be at least 1".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::Config("tol must be positive".into()));
    }
    let owned = OwnedStructure::from_group(group)?;
    let structure = owned.as_ref().map(|o| o.view());
    if let Some(s) = structure {
        s.check(&group.generators)?;
    }
    let gens = &group.generators;
    let generators: Vec<ElementSummary> = gens
        .letters()
        .into_iter()
        .step_by(2)
        .map(|l| {
            let w = Word::letter(l);
            summarize(w.format(gens), &w.evaluate(gens), structure, cfg)
        })
        .collect();
    let ball = enumerate_words(gens, max_len, DEFAULT_WORD_LIMIT)?;
    let all: Vec<ElementSummary> = ball
        .entries
        .iter()
        .map(|(w, m)| summarize(w.format(gens), m, structure, cfg))
        .collect();
    let hyperbolic_words = all.iter().filter(|e| e.hyperbolic).count();
    let without_eigenvalue_one = all.iter().filter(|e| !(e.distance_to_one <= tol)).count();
    let words = ball
        .entries
        .iter()
        .zip(all)
        .filter(|((w, _), _)| w.len() >= 2)
        .map(|(_, e)| e)
        .collect();
    Ok(GroupAnalysis {
        dimension: group.dimension(),
        structure: owned.as_ref().map(|o| o.describe()),
        generators,
        words,
        max_len,
        truncated: ball.truncated,
        hyperbolic_words,
        without_eigenvalue_one,
        tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{fixture, FixtureOptions};

    #[test]
    fn lattice_has_nothing_hyperbolic() {
        let g = fixture("lattice", &FixtureOptions::default()).unwrap();
        let a = analyze_group(&g, 2, 1e-8, &SpectralConfig::default()).unwrap();
        assert_eq!(a.generators.len(), 2);
        assert_eq!(a.words.len(), 12);
        assert_eq!(a.hyperbolic_words, 0);
        assert_eq!(a.without_eigenvalue_one, 0);
        assert!(a.structure.is_none());
        assert!(a
            .generators
            .iter()
            .all(|e| e.dim_zero == 2 && e.alpha.is_none()));
    }

    #[test]
    fn margulis_generators_carry_signs() {
        let mut opts = FixtureOptions::default();
        let g = fixture("margulis", &opts).unwrap();
        let a = analyze_group(&g, 2, 1e-8, &SpectralConfig::default()).unwrap();
        assert!(a
            .generators
            .iter()
            .all(|e| e.hyperbolic && e.alpha.unwrap() > 0.0));
        opts.margulis.sign_flip = true;
        let g = fixture("margulis", &opts).unwrap();
        let a = analyze_group(&g, 1, 1e-8, &SpectralConfig::default()).unwrap();
        assert!(a.generators[0].alpha.unwrap() > 0.0);
        assert!(a.generators[1].alpha.unwrap() < 0.0);
        assert!(a.words.is_empty());
    }

    #[test]
    fn case23_uses_the_split_structure() {
        let g = fixture("case23", &FixtureOptions::default()).unwrap();
        let a = analyze_group(&g, 1, 1e-8, &SpectralConfig::default()).unwrap();
        assert!(a.structure.unwrap().contains("splitting"));
        assert!(a.generators.iter().all(|e| e.alpha.is_some()));
    }

    #[test]
    fn sl3_violation_is_counted() {
        let g = fixture("sl3-violation", &FixtureOptions::default()).unwrap();
        let a = analyze_group(&g, 1, 1e-8, &SpectralConfig::default()).unwrap();
        assert!(a.without_eigenvalue_one >= 1);
        assert!(analyze_group(&g, 0, 1e-8, &SpectralConfig::default()).is_err());
    }
}
