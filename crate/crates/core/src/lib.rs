//! Numerical machinery for affine groups acting on `R^n`.
//!
//! The crate computes the expanding/contracting/neutral splitting of linear
//! maps, projective distances between subspaces, invariant lines of affine
//! maps, the Margulis sign of regular elements preserving a form of signature
//! `(k+1, k)` (and its variant for `SO(2,1) x SL_3(R)` acting on `R^6`), and a
//! bounded search for obstructions to proper discontinuity.
//!
//! Module map:
//!
//! * [`spectral`]: `A+ / A- / A0` splitting, `lambda(g)`, `s(g)`, hyperbolicity.
//! * [`projective`]: the metrics `d_hat` and `rho_hat` on projectivized subspaces.
//! * [`affine`]: affine maps, fixed points, invariant lines, `E+ / E-`.
//! * [`analysis`]: per-generator and per-word summaries of a group.
//! * [`signform`]: quadratic forms, orientations, the sign `alpha(g)`.
//! * [`words`]: generator sets, reduced-word enumeration, transversality.
//! * [`obstruction`]: opposite-sign search, escort sets, ball witnesses.
//! * [`classifier`]: catalog of admissible semisimple linear parts for `n <= 6`.
//! * [`corpus`]: deterministic fixture groups.
//! * [`groupfile`]: the JSON group file and report formats.

pub mod affine;
pub mod analysis;
pub mod classifier;
pub mod corpus;
mod error;
pub mod groupfile;
pub mod linalg;
pub mod obstruction;
pub mod projective;
pub mod sampling;
pub mod signform;
pub mod spectral;
pub mod trs;
pub mod words;

pub use error::{Error, Result};

pub use nalgebra::{DMatrix, DVector};

/// Square real matrix. Most operations check squareness and finiteness on entry.
pub type Matrix = DMatrix<f64>;
/// Real column vector.
pub type Vector = DVector<f64>;
