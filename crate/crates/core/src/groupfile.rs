//! The JSON group file.
//!
//! ```json
//! {
//!   "dimension": 3,
//!   "form": [[1, 0, 0], [0, 1, 0], [0, 0, -1]],
//!   "generators": [
//!     {"label": "a", "linear": [[...], [...], [...]], "translation": [0, 1, 0]}
//!   ]
//! }
//! ```
//!
//! `form` is optional. A split structure on `R^6` adds
//! `"splitting": {"v1": [three 6-vectors], "v2": [three 6-vectors]}`, in which
//! case `form` is the 3x3 Gram matrix of the `V1` form in the coordinates of
//! the `v1` basis. Numbers are written in shortest round-trip decimal form,
//! so serializing and parsing reproduces every value exactly.

use serde::{Deserialize, Serialize};

use crate::affine::AffineMap;
use crate::linalg::{from_rows, to_rows};
use crate::signform::{normalize_form, CaseTwoStructure, QuadraticForm};
use crate::words::GeneratorSet;
use crate::{Error, Matrix, Result, Vector};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGenerator {
    label: String,
    linear: Vec<Vec<f64>>,
    translation: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSplitting {
    v1: Vec<Vec<f64>>,
    v2: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroup {
    dimension: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    form: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    splitting: Option<RawSplitting>,
    generators: Vec<RawGenerator>,
}

/// Bases of `V1` and `V2` as columns (6x3 each).
#[derive(Debug, Clone, PartialEq)]
pub struct Splitting {
    pub v1: Matrix,
    pub v2: Matrix,
}

/// Everything a group file describes.
#[derive(Debug, Clone, PartialEq)]
pub struct Group {
    pub generators: GeneratorSet,
    /// Gram matrix: on `R^n`, or on `V1` coordinates when `splitting` is set.
    pub form: Option<Matrix>,
    pub splitting: Option<Splitting>,
}

impl Group {
    pub fn plain(generators: GeneratorSet) -> Self {
        Self {
            generators,
            form: None,
            splitting: None,
        }
    }

    pub fn dimension(&self) -> usize {
        self.generators.ambient()
    }

    /// The form on `R^n`, when there is one and no splitting.
    pub fn quadratic_form(&self) -> Option<Result<QuadraticForm>> {
        match (&self.form, &self.splitting) {
            (Some(f), None) => Some(normalize_form(f)),
            _ => None,
        }
    }

    /// The split structure, when a splitting is given.
    pub fn case_two(&self) -> Option<Result<CaseTwoStructure>> {
        let s = self.splitting.as_ref()?;
        let form = self.form.as_ref()?;
        Some(CaseTwoStructure::new(s.v1.clone(), s.v2.clone(), form))
    }
}

fn err_at(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{path}: {msg}"))
}

fn check_finite(path: &str, xs: &[f64]) -> Result<()> {
    if let Some(i) = xs.iter().position(|x| !x.is_finite()) {
        return Err(err_at(&format!("{path}[{i}]"), "non-finite number"));
    }
    Ok(())
}

fn square(path: &str, rows: &[Vec<f64>], n: usize) -> Result<Matrix> {
    if rows.len() != n {
        return Err(err_at(
            path,
            format!("expected {n} rows, found {}", rows.len()),
        ));
    }
    for (i, r) in rows.iter().enumerate() {
        let p = format!("{path}[{i}]");
        if r.len() != n {
            return Err(err_at(
                &p,
                format!("expected {n} entries, found {}", r.len()),
            ));
        }
        check_finite(&p, r)?;
    }
    Ok(from_rows(rows))
}

fn basis(path: &str, vectors: &[Vec<f64>]) -> Result<Matrix> {
    if vectors.len() != 3 {
        return Err(err_at(
            path,
            format!("expected 3 vectors, found {}", vectors.len()),
        ));
    }
    let mut m = Matrix::zeros(6, 3);
    for (j, v) in vectors.iter().enumerate() {
        let p = format!("{path}[{j}]");
        if v.len() != 6 {
            return Err(err_at(&p, format!("expected 6 entries, found {}", v.len())));
        }
        check_finite(&p, v)?;
        m.set_column(j, &Vector::from_vec(v.clone()));
    }
    Ok(m)
}

fn columns_as_rows(m: &Matrix) -> Vec<Vec<f64>> {
    m.column_iter()
        .map(|c| c.iter().copied().collect())
        .collect()
}

/// Parses a group file. Errors carry the JSON path of the offending field.
pub fn parse_group(text: &str) -> Result<Group> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawGroup = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if path == "." || path.is_empty() {
            Error::Parse(inner.to_string())
        } else {
            err_at(&path, inner)
        }
    })?;
    let n = raw.dimension;
    if !(1..=16).contains(&n) {
        return Err(err_at("dimension", format!("{n} is outside 1..=16")));
    }
    if raw.generators.is_empty() {
        return Err(err_at("generators", "at least one generator is required"));
    }
    let mut labels = Vec::new();
    let mut maps = Vec::new();
    for (i, g) in raw.generators.iter().enumerate() {
        let base = format!("generators[{i}]");
        let linear = square(&format!("{base}.linear"), &g.linear, n)?;
        if g.translation.len() != n {
            return Err(err_at(
                &format!("{base}.translation"),
                format!("expected {n} entries, found {}", g.translation.len()),
            ));
        }
        check_finite(&format!("{base}.translation"), &g.translation)?;
        let map = AffineMap::new(linear, Vector::from_vec(g.translation.clone()))
            .map_err(|e| err_at(&format!("{base}.linear"), e))?;
        labels.push(g.label.clone());
        maps.push(map);
    }
    let generators = GeneratorSet::new(labels, maps).map_err(|e| err_at("generators", e))?;
    let splitting = match &raw.splitting {
        None => None,
        Some(s) => {
            if n != 6 {
                return Err(err_at("splitting", "a splitting requires dimension 6"));
            }
            Some(Splitting {
                v1: basis("splitting.v1", &s.v1)?,
                v2: basis("splitting.v2", &s.v2)?,
            })
        }
    };
    let form = match &raw.form {
        None => None,
        Some(rows) => {
            let k = if splitting.is_some() { 3 } else { n };
            let m = square("form", rows, k)?;
            normalize_form(&m).map_err(|e| err_at("form", e))?;
            Some(m)
        }
    };
    if splitting.is_some() && form.is_none() {
        return Err(err_at("form", "a splitting requires the V1 form"));
    }
    let group = Group {
        generators,
        form,
        splitting,
    };
    if let Some(Err(e)) = group.case_two() {
        return Err(err_at("splitting", e));
    }
    Ok(group)
}

/// Serializes a group to pretty-printed JSON.
pub fn serialize_group(group: &Group) -> String {
    let gens = &group.generators;
    let raw = RawGroup {
        dimension: gens.ambient(),
        form: group.form.as_ref().map(to_rows),
        splitting: group.splitting.as_ref().map(|s| RawSplitting {
            v1: columns_as_rows(&s.v1),
            v2: columns_as_rows(&s.v2),
        }),
        generators: gens
            .labels()
            .iter()
            .zip(gens.maps())
            .map(|(l, m)| RawGenerator {
                label: l.clone(),
                linear: to_rows(&m.linear),
                translation: m.translation.iter().copied().collect(),
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&raw).expect("group serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const LATTICE: &str = r#"{
        "dimension": 2,
        "generators": [
            {"label": "t1", "linear": [[1, 0], [0, 1]], "translation": [1, 0]},
            {"label": "t2", "linear": [[1, 0], [0, 1]], "translation": [0, 1]}
        ]
    }"#;

    #[test]
    fn parses_and_round_trips() {
        let g = parse_group(LATTICE).unwrap();
        assert_eq!(g.dimension(), 2);
        assert_eq!(g.generators.labels(), ["t1", "t2"]);
        let again = parse_group(&serialize_group(&g)).unwrap();
        assert_eq!(again, g);
    }

    #[test]
    fn awkward_numbers_survive() {
        let text = LATTICE.replace("[1, 0]}", "[0.1, 1e-300]}");
        let g = parse_group(&text).unwrap();
        let again = parse_group(&serialize_group(&g)).unwrap();
        assert_eq!(again.generators.maps()[0].translation[0], 0.1);
        assert_eq!(again.generators.maps()[0].translation[1], 1e-300);
    }

    #[test]
    fn short_row_reports_its_path() {
        let text = LATTICE.replace(
            "[[1, 0], [0, 1]], \"translation\": [0, 1]",
            "[[1, 0], [0]], \"translation\": [0, 1]",
        );
        let e = parse_group(&text).unwrap_err().to_string();
        assert!(e.contains("generators[1].linear[1]"), "{e}");
    }

    #[test]
    fn type_errors_report_their_path() {
        let text = LATTICE.replace("\"translation\": [0, 1]", "\"translation\": [0, \"x\"]");
        let e = parse_group(&text).unwrap_err().to_string();
        assert!(e.contains("generators[1].translation[1]"), "{e}");
        let e = parse_group("{\"dimension\": 2,").unwrap_err().to_string();
        assert!(e.contains("line"), "{e}");
    }

    #[test]
    fn singular_generator_is_rejected() {
        let text = LATTICE.replace(
            "[[1, 0], [0, 1]], \"translation\": [1, 0]",
            "[[1, 0], [0, 0]], \"translation\": [1, 0]",
        );
        let e = parse_group(&text).unwrap_err().to_string();
        assert!(e.contains("generators[0].linear"), "{e}");
    }
}
