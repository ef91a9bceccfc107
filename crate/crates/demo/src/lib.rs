//! Browser bindings: each export takes plain numbers or a group file and
//! returns a pretty-printed JSON document.

use wasm_bindgen::prelude::*;

use margulis_core::analysis::{analyze_group, OwnedStructure};
use margulis_core::classifier;
use margulis_core::corpus::{fixture, FixtureOptions};
use margulis_core::groupfile::parse_group;
use margulis_core::obstruction::{properness_scan, ScanConfig};
use margulis_core::spectral::SpectralConfig;

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

/// Admissible semisimple parts for `R^n` with their sampled eigenvalue-1 check.
#[wasm_bindgen]
pub fn classify(n: u32, samples: u32, seed: u32) -> Result<String, String> {
    classifier::classify(n as usize, samples as usize, seed as u64)
        .map(|c| to_json(&c))
        .map_err(|e| e.to_string())
}

/// Builds the two-generator Lorentzian fixture and scans it.
#[wasm_bindgen]
pub fn scan_margulis(
    flip: bool,
    boost: f64,
    angle: f64,
    scale: f64,
    max_len: u32,
    seed: u32,
) -> Result<String, String> {
    let mut opts = FixtureOptions::default();
    opts.margulis.sign_flip = flip;
    opts.margulis.boost_strength = boost;
    opts.margulis.angle = angle;
    opts.margulis.translation_scale = scale;
    let group = fixture("margulis", &opts).map_err(|e| e.to_string())?;
    let structure = OwnedStructure::from_group(&group).map_err(|e| e.to_string())?;
    let cfg = ScanConfig {
        max_len: max_len.min(6) as usize,
        seed: seed as u64,
        ..ScanConfig::default()
    };
    properness_scan(
        &group.generators,
        structure.as_ref().map(|s| s.view()),
        &cfg,
    )
    .map(|r| to_json(&r))
    .map_err(|e| e.to_string())
}

/// Spectral summary of a group file.
#[wasm_bindgen]
pub fn analyze(group_json: &str, max_len: u32) -> Result<String, String> {
    let group = parse_group(group_json).map_err(|e| e.to_string())?;
    analyze_group(
        &group,
        max_len.min(6) as usize,
        1e-8,
        &SpectralConfig::default(),
    )
    .map(|a| to_json(&a))
    .map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use margulis_core::groupfile::serialize_group;

    #[test]
    fn classify_four() {
        let v: serde_json::Value = serde_json::from_str(&classify(4, 20, 1).unwrap()).unwrap();
        assert_eq!(v["case1"][0]["group"], "SL3(R)");
        assert!(classify(7, 20, 1).unwrap_err().contains("open problem"));
    }

    #[test]
    fn scan_distinguishes_the_signs() {
        let pi2 = std::f64::consts::FRAC_PI_2;
        let v: serde_json::Value =
            serde_json::from_str(&scan_margulis(true, 3.0, pi2, 3.0, 2, 0).unwrap()).unwrap();
        assert_eq!(v["verdict"], "opposite-sign-pair-found");
        let v: serde_json::Value =
            serde_json::from_str(&scan_margulis(false, 3.0, pi2, 3.0, 2, 0).unwrap()).unwrap();
        assert_eq!(v["verdict"], "no-obstruction-within-budget");
        assert!(scan_margulis(false, 0.5, pi2, 3.0, 2, 0).is_err());
    }

    #[test]
    fn analyze_a_fixture_file() {
        let text = serialize_group(&fixture("lattice", &FixtureOptions::default()).unwrap());
        let v: serde_json::Value = serde_json::from_str(&analyze(&text, 2).unwrap()).unwrap();
        assert_eq!(v["hyperbolic_words"], 0);
        assert!(analyze("{\"dimension\": 2}", 2)
            .unwrap_err()
            .contains("generators"));
    }
}
