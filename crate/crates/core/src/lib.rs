//! Approximate solutions for near-critical reflection of internal gravity waves
//! on a slope, in the linear viscous/diffusive Boussinesq setting.
//!
//! The approximate solution is an incident wave packet plus boundary-layer
//! wave packets built from the decaying roots of a degree-6 characteristic
//! polynomial. The crate constructs both, evaluates them on physical grids and
//! measures every asymptotic order (root scalings, amplitudes, norms, residuals)
//! as a fitted power of the small parameter ε.

pub mod diagnostics;
pub mod error;
pub mod fit;
pub mod modes;
pub mod packets;
pub mod setup;
pub mod spectrum;

pub use error::{Error, Result};
pub use setup::{
    critical_wavenumber, dispersion, downward_branch, group_velocity, viscosity_diffusivity, Branch, CriticalSetup,
    RegimeCase, RegimeParams, SpectralPoint, Wavenumber,
};
pub use spectrum::{
    build_charpoly, case5_lambda2_refined, classified_roots, classify_roots, find_roots, predicted_roots, Balance,
    CharPoly, ClassifiedRoot, PredictedRoot, RootFamily,
};

pub use num_complex::Complex64;
