//! Characteristic polynomial of the boundary-layer ansatz, its roots, and their
//! classification against the dominant balances of each regime.

pub mod charpoly;
pub mod classify;
pub mod predict;
pub mod roots;

pub use charpoly::{build_charpoly, CharPoly};
pub use classify::{classify_roots, ClassifiedRoot, RootFamily};
pub use predict::{
    case5_lambda2_refined, depressed_cubic_roots, incident_root, matching_roots, predicted_roots, Balance,
    PredictedRoot,
};
pub use roots::{find_roots, poly_roots, ROOT_RESIDUAL_TOL};

use crate::error::Result;
use crate::setup::{RegimeParams, SpectralPoint};

/// Builds `P`, finds and classifies its six roots at one spectral point.
pub fn classified_roots(params: &RegimeParams, point: &SpectralPoint) -> Result<[ClassifiedRoot; 6]> {
    let p = CharPoly::at(point)?;
    let roots = find_roots(&p)?;
    let preds = matching_roots(params, point)?;
    classify_roots(params, &roots, &preds, point.eps)
}

/// The classified root carrying `family`, if present.
pub fn root_of(roots: &[ClassifiedRoot; 6], family: RootFamily) -> Option<&ClassifiedRoot> {
    roots.iter().find(|r| r.family == family)
}
