use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::setup::SpectralPoint;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Degree-6 characteristic polynomial `P(λ) = Σ c_n λⁿ` of the viscous/diffusive
/// symbol for the ansatz `e^{ikx − λy − iωt}`; `P(λ) = det A(λ)` for the symbol
/// matrix of [`crate::modes::symbol_matrix`].
///
/// `c₆ = −κν`, `c₄ = −iω(κ+ν) + 3νκk²`, `c₂ = ζ + 2iω(κ+ν)k² − 3νκk⁴`,
/// `c₁ = −2ik sinγ cosγ`, `c₀ = k²(cos²γ − ω² − iω(κ+ν)k² + νκk⁴)`.
/// The `3νκk²` term carries the sign of `−νκ(λ² − k²)³`, the purely dissipative part of the determinant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharPoly {
    pub coeffs: [Complex64; 7],
    pub nu: f64,
    pub kappa: f64,
    pub omega: f64,
    pub zeta: f64,
    pub k: f64,
    pub gamma: f64,
}

pub fn build_charpoly(nu: f64, kappa: f64, omega: f64, zeta: f64, k: f64, gamma: f64) -> Result<CharPoly> {
    if !(nu > 0.0 && kappa > 0.0) {
        return Err(Error::Domain(format!("ν = {nu}, κ = {kappa} must be positive")));
    }
    if k == 0.0 {
        return Err(Error::Domain("k = 0".into()));
    }
    let (s, c) = gamma.sin_cos();
    let sum = nu + kappa;
    let prod = nu * kappa;
    let k2 = k * k;
    let zero = Complex64::new(0.0, 0.0);
    let c6 = Complex64::new(-prod, 0.0);
    let c4 = -I * omega * sum + 3.0 * prod * k2;
    let c2 = zeta + 2.0 * I * omega * sum * k2 - 3.0 * prod * k2 * k2;
    let c1 = -2.0 * I * k * s * c;
    let c0 = k2 * (c * c - omega * omega - I * omega * sum * k2 + prod * k2 * k2);
    Ok(CharPoly { coeffs: [c0, c1, c2, zero, c4, zero, c6], nu, kappa, omega, zeta, k, gamma })
}

impl CharPoly {
    pub fn at(point: &SpectralPoint) -> Result<Self> {
        build_charpoly(point.nu, point.kappa, point.omega, point.zeta, point.k, point.gamma)
    }

    pub fn eval(&self, lambda: Complex64) -> Complex64 {
        horner(&self.coeffs, lambda)
    }

    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `|P(λ)| / (max_n |c_n| · max(1, |λ|)⁶)`, the scale-free residual used as root post-condition.
    pub fn scaled_residual(&self, lambda: Complex64) -> f64 {
        let scale = self.max_coeff() * lambda.norm().max(1.0).powi(6);
        self.eval(lambda).norm() / scale
    }
}

pub(crate) fn horner(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
}

/// Value and derivative by Horner's scheme.
pub(crate) fn horner_d(coeffs: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn substitution_example() {
        let p = build_charpoly(1.0, 1.0, 1.0, 0.0, 1.0, FRAC_PI_4).unwrap();
        let c = p.coeffs;
        let close = |a: Complex64, b: Complex64| (a - b).norm() < 1e-14;
        assert!(close(c[6], Complex64::new(-1.0, 0.0)));
        assert!(close(c[4], Complex64::new(3.0, -2.0)));
        assert!(close(c[2], Complex64::new(-3.0, 4.0)));
        assert!(close(c[1], Complex64::new(0.0, -1.0)));
        assert!(close(c[0], Complex64::new(0.5, -2.0)));
        assert_eq!(c[3], Complex64::new(0.0, 0.0));
        assert_eq!(c[5], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn equals_symbol_determinant() {
        use crate::modes::symbol_matrix;
        use nalgebra::Matrix4;
        let (nu, ka, om, k, g): (f64, f64, f64, f64, f64) = (2e-3, 7e-4, 0.47, 1.3, 0.44);
        let zeta = om * om - g.sin().powi(2);
        let p = build_charpoly(nu, ka, om, zeta, k, g).unwrap();
        for lam in [Complex64::new(0.3, -1.1), Complex64::new(12.0, 5.0), Complex64::new(-40.0, 90.0)] {
            let a = symbol_matrix(k, lam, om, nu, ka, g);
            let det = Matrix4::from_fn(|i, j| a[i][j]).determinant();
            let scale: f64 = p.coeffs.iter().enumerate().map(|(n, c)| c.norm() * lam.norm().powi(n as i32)).sum();
            assert!((p.eval(lam) - det).norm() <= 1e-13 * scale, "{lam}");
        }
    }

    #[test]
    fn symmetric_in_viscosity_and_diffusivity() {
        let a = build_charpoly(1e-3, 4e-5, 0.52, 0.01, 1.1, 0.5).unwrap();
        let b = build_charpoly(4e-5, 1e-3, 0.52, 0.01, 1.1, 0.5).unwrap();
        for (x, y) in a.coeffs.iter().zip(&b.coeffs) {
            assert!((x - y).norm() <= 1e-15 * x.norm());
        }
    }

    #[test]
    fn rejects_non_positive_dissipation() {
        assert!(build_charpoly(0.0, 1.0, 0.5, 0.0, 1.0, 0.5).is_err());
        assert!(build_charpoly(1.0, -1.0, 0.5, 0.0, 1.0, 0.5).is_err());
        assert!(build_charpoly(1.0, 1.0, 0.5, 0.0, 0.0, 0.5).is_err());
    }

    #[test]
    fn horner_derivative_matches_difference() {
        let c =
            [Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.1), Complex64::new(0.0, 3.0), Complex64::new(2.0, 0.0)];
        let x = Complex64::new(0.3, -0.7);
        let h = 1e-6;
        let (_, d) = horner_d(&c, x);
        let fd = (horner(&c, x + h) - horner(&c, x - h)) / (2.0 * h);
        assert!((d - fd).norm() < 1e-8);
    }
}
