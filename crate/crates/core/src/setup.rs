//! Physical regime: dispersion relation, downward branch selection, the
//! critical wavenumber at a prescribed criticality, and the (ν, κ) scaling
//! laws of the five viscosity/diffusivity regimes.
//!
//! All quantities are in slope-aligned coordinates `(x, y)` with buoyancy
//! frequency `N = 1`.

use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest admissible small parameter.
pub const EPS_MAX: f64 = 0.5;

/// Minimal distance of the slope angle from `π/4`, where the incident root degenerates.
pub const GAMMA_QUARTER_PI_MARGIN: f64 = 1e-2;

/// Wavenumber along the slope used to tune criticality.
pub const DEFAULT_K0: f64 = 1.0;

/// Default slope angle `π/6`.
pub const DEFAULT_GAMMA: f64 = std::f64::consts::FRAC_PI_6;

/// Sign of the frequency branch `ω^±`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// The five viscosity/diffusivity regimes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RegimeCase {
    /// `ν = ν₀ε⁶`, `κ = κ₀ε^β`, `β < 6`.
    Case1,
    /// `ν = ν₀ε⁶`, `κ = κ₀ε^β`, `β > 6`.
    Case2,
    /// `ν = ν₀ε^β`, `κ = κ₀ε⁶`, `β < 6`.
    Case3,
    /// `ν = ν₀ε^β`, `κ = κ₀ε⁶`, `β > 6`.
    Case4,
    /// `ν = ν₀ε^β`, `κ = κ₀ε^β`, `β > 6`.
    Case5,
}

impl RegimeCase {
    pub const ALL: [RegimeCase; 5] =
        [RegimeCase::Case1, RegimeCase::Case2, RegimeCase::Case3, RegimeCase::Case4, RegimeCase::Case5];

    pub fn index(self) -> u8 {
        match self {
            RegimeCase::Case1 => 1,
            RegimeCase::Case2 => 2,
            RegimeCase::Case3 => 3,
            RegimeCase::Case4 => 4,
            RegimeCase::Case5 => 5,
        }
    }

    /// Whether the case requires `β < 6` (otherwise `β > 6`).
    pub fn requires_small_beta(self) -> bool {
        matches!(self, RegimeCase::Case1 | RegimeCase::Case3)
    }

    /// Exponents `(p_ν, p_κ)` such that `ν = ν₀ε^{p_ν}`, `κ = κ₀ε^{p_κ}`.
    pub fn exponents(self, beta: f64) -> (f64, f64) {
        match self {
            RegimeCase::Case1 | RegimeCase::Case2 => (6.0, beta),
            RegimeCase::Case3 | RegimeCase::Case4 => (beta, 6.0),
            RegimeCase::Case5 => (beta, beta),
        }
    }

    /// The case obtained by exchanging the roles of ν and κ.
    pub fn swapped(self) -> RegimeCase {
        match self {
            RegimeCase::Case1 => RegimeCase::Case3,
            RegimeCase::Case2 => RegimeCase::Case4,
            RegimeCase::Case3 => RegimeCase::Case1,
            RegimeCase::Case4 => RegimeCase::Case2,
            RegimeCase::Case5 => RegimeCase::Case5,
        }
    }
}

impl fmt::Display for RegimeCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}", self.index())
    }
}

impl FromStr for RegimeCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        let digit = t.strip_prefix("case").or_else(|| t.strip_prefix('c')).unwrap_or(&t);
        match digit {
            "1" => Ok(RegimeCase::Case1),
            "2" => Ok(RegimeCase::Case2),
            "3" => Ok(RegimeCase::Case3),
            "4" => Ok(RegimeCase::Case4),
            "5" => Ok(RegimeCase::Case5),
            _ => Err(Error::Regime(format!("unknown regime case `{s}`"))),
        }
    }
}

/// Slope angle, regime and scaling constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeParams {
    pub gamma: f64,
    pub case: RegimeCase,
    pub beta: f64,
    pub nu0: f64,
    pub kappa0: f64,
}

impl RegimeParams {
    pub fn new(gamma: f64, case: RegimeCase, beta: f64, nu0: f64, kappa0: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma < std::f64::consts::FRAC_PI_2) {
            return Err(Error::Regime(format!("slope angle {gamma} outside (0, π/2)")));
        }
        if (gamma - FRAC_PI_4).abs() < GAMMA_QUARTER_PI_MARGIN {
            return Err(Error::Regime(format!("slope angle {gamma} too close to π/4 (|cos²γ − ω²| is not order one)")));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::Regime(format!("exponent β = {beta} must be positive")));
        }
        if case.requires_small_beta() && beta >= 6.0 {
            return Err(Error::Regime(format!("{case} requires β < 6, got {beta}")));
        }
        if !case.requires_small_beta() && beta <= 6.0 {
            return Err(Error::Regime(format!("{case} requires β > 6, got {beta}")));
        }
        if !(nu0 > 0.0 && kappa0 > 0.0) {
            return Err(Error::Regime(format!("scaling constants must be positive (ν₀ = {nu0}, κ₀ = {kappa0})")));
        }
        Ok(Self { gamma, case, beta, nu0, kappa0 })
    }

    /// Default slope angle `π/6` with `ν₀ = κ₀ = 1`.
    pub fn standard(case: RegimeCase, beta: f64) -> Result<Self> {
        Self::new(DEFAULT_GAMMA, case, beta, 1.0, 1.0)
    }
}

/// Real spectral coordinates `(k, m)` along and normal to the slope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wavenumber {
    pub k: f64,
    pub m: f64,
}

impl Wavenumber {
    pub fn new(k: f64, m: f64) -> Self {
        Self { k, m }
    }

    fn check(self) -> Result<()> {
        if self.k == 0.0 && self.m == 0.0 {
            Err(Error::Domain("zero wavenumber".into()))
        } else {
            Ok(())
        }
    }
}

/// `ω^±_{k,m} = ±(k cos γ − m sin γ)/√(k² + m²)`.
pub fn dispersion(w: Wavenumber, gamma: f64, branch: Branch) -> Result<f64> {
    w.check()?;
    let (s, c) = gamma.sin_cos();
    Ok(branch.sign() * (w.k * c - w.m * s) / w.k.hypot(w.m))
}

/// Gradient `∇_{k,m} ω^±`.
pub fn group_velocity(w: Wavenumber, gamma: f64, branch: Branch) -> Result<[f64; 2]> {
    w.check()?;
    let (s, c) = gamma.sin_cos();
    let r2 = w.k * w.k + w.m * w.m;
    let r3 = r2 * r2.sqrt();
    let tilt = s * w.k + c * w.m;
    let sign = branch.sign();
    Ok([sign * w.m * tilt / r3, -sign * w.k * tilt / r3])
}

/// The branch whose group velocity points towards the wall (`∂_m ω < 0`).
pub fn downward_branch(w: Wavenumber, gamma: f64) -> Result<Branch> {
    let [_, dm] = group_velocity(w, gamma, Branch::Plus)?;
    if dm < 0.0 {
        Ok(Branch::Plus)
    } else if dm > 0.0 {
        Ok(Branch::Minus)
    } else {
        Err(Error::Domain(format!("no downward-propagating branch at (k, m) = ({}, {})", w.k, w.m)))
    }
}

/// `ζ = ω² − sin²γ`, evaluated as `k(k cos 2γ − m sin 2γ)/(k² + m²)` to avoid one cancellation.
pub fn criticality(w: Wavenumber, gamma: f64) -> f64 {
    let (s2, c2) = (2.0 * gamma).sin_cos();
    w.k * (w.k * c2 - w.m * s2) / (w.k * w.k + w.m * w.m)
}

/// Centre of the incident packet at a given ε.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalSetup {
    pub k0: f64,
    pub m0: f64,
    pub eps: f64,
    pub omega: f64,
    pub zeta: f64,
    pub branch: Branch,
}

/// Solves `(cos γ − m sin γ)²/(1 + m²) = sin²γ + ε²` for `m` on the root
/// continuous with `cot 2γ` at `ε = 0`, then puts ω on the downward branch.
pub fn critical_wavenumber(params: &RegimeParams, eps: f64) -> Result<CriticalSetup> {
    if !(eps > 0.0 && eps < EPS_MAX) {
        return Err(Error::Regime(format!("ε = {eps} outside (0, {EPS_MAX})")));
    }
    let (s, c) = params.gamma.sin_cos();
    let e2 = eps * eps;
    // ε² m² + 2cs m − (cos 2γ − ε²) = 0
    let cs = c * s;
    let rhs = c * c - s * s - e2;
    let disc = cs * cs + e2 * rhs;
    if disc < 0.0 {
        return Err(Error::Regime(format!("no real critical wavenumber for ε = {eps}, γ = {}", params.gamma)));
    }
    // Rationalised form of (−cs + √disc)/ε², free of cancellation.
    let m0 = rhs / (cs + disc.sqrt());
    let w = Wavenumber::new(DEFAULT_K0, m0);
    let branch = downward_branch(w, params.gamma)?;
    let omega = dispersion(w, params.gamma, branch)?;
    let zeta = criticality(w, params.gamma);
    Ok(CriticalSetup { k0: DEFAULT_K0, m0, eps, omega, zeta, branch })
}

/// `(ν, κ)` for the regime at the given ε.
pub fn viscosity_diffusivity(params: &RegimeParams, eps: f64) -> Result<(f64, f64)> {
    if !(eps > 0.0) {
        return Err(Error::Domain(format!("ε = {eps} must be positive")));
    }
    let case = params.case;
    if case.requires_small_beta() != (params.beta < 6.0) || params.beta == 6.0 {
        return Err(Error::Regime(format!("β = {} is outside the range of {case}", params.beta)));
    }
    let (pn, pk) = case.exponents(params.beta);
    Ok((params.nu0 * eps.powf(pn), params.kappa0 * eps.powf(pk)))
}

/// Everything the local (per wavenumber) analysis needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    pub k: f64,
    pub m: f64,
    pub omega: f64,
    pub zeta: f64,
    pub nu: f64,
    pub kappa: f64,
    pub gamma: f64,
    pub eps: f64,
}

impl SpectralPoint {
    /// Evaluates ω on the downward branch and ζ at `(k, m)`.
    pub fn at(params: &RegimeParams, eps: f64, k: f64, m: f64) -> Result<Self> {
        let (nu, kappa) = viscosity_diffusivity(params, eps)?;
        let w = Wavenumber::new(k, m);
        let branch = downward_branch(w, params.gamma)?;
        let omega = dispersion(w, params.gamma, branch)?;
        Ok(Self { k, m, omega, zeta: criticality(w, params.gamma), nu, kappa, gamma: params.gamma, eps })
    }

    /// The mirrored point `(−k, −m)`; every modal quantity there is the complex conjugate.
    pub fn mirrored(&self) -> Self {
        Self { k: -self.k, m: -self.m, omega: -self.omega, ..*self }
    }
}

impl CriticalSetup {
    pub fn point(&self, params: &RegimeParams) -> Result<SpectralPoint> {
        let (nu, kappa) = viscosity_diffusivity(params, self.eps)?;
        Ok(SpectralPoint {
            k: self.k0,
            m: self.m0,
            omega: self.omega,
            zeta: self.zeta,
            nu,
            kappa,
            gamma: params.gamma,
            eps: self.eps,
        })
    }
}
