//! Leading-order roots from the per-case dominant balances of `P(λ)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::setup::{RegimeCase, RegimeParams, SpectralPoint};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Which reduced equation a predicted root solves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Balance {
    /// `λ₁ ≈ −ik(cos²γ − ω²)/(2 sinγ cosγ)`.
    Incident,
    /// Cubic balance: `−iωDλ³ (+ ζλ) − 2ik sinγ cosγ = 0`.
    Cubic,
    /// `−Dλ² − iω = 0` with the larger-scaled root.
    Quadratic,
    /// `ζλ − 2ik sinγ cosγ = 0` (regime 5 only).
    ZetaLinear,
    /// `−iω(ν+κ)λ² + ζ = 0` (regime 5 only).
    ZetaQuadratic,
    /// `−νκλ² − iω(ν+κ) = 0` (regime 5 only).
    Outer,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictedRoot {
    pub balance: Balance,
    pub lambda: Complex64,
    /// Predicted scale exponent: `|λ| ∼ ε^q`.
    pub q: f64,
}

/// `λ₁` from the incident balance `c₁λ + c₀ = 0` at `ν = κ = 0`.
pub fn incident_root(point: &SpectralPoint) -> Complex64 {
    let (s, c) = point.gamma.sin_cos();
    -I * point.k * (c * c - point.omega * point.omega) / (2.0 * s * c)
}

/// Roots of `a₃x³ + a₁x + a₀ = 0` by Cardano's formula, refined by one Newton step.
pub fn depressed_cubic_roots(a3: Complex64, a1: Complex64, a0: Complex64) -> [Complex64; 3] {
    let p = a1 / a3;
    let q = a0 / a3;
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
    let sq = disc.sqrt();
    let (u1, u2) = (-q / 2.0 + sq, -q / 2.0 - sq);
    let u3 = if u1.norm() >= u2.norm() { u1 } else { u2 };
    let mut out = [Complex64::new(0.0, 0.0); 3];
    if u3.norm() == 0.0 {
        return out;
    }
    let u = u3.powf(1.0 / 3.0);
    let rot = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let mut uk = u;
    for x in out.iter_mut() {
        let mut z = uk - p / (3.0 * uk);
        let f = z * z * z + p * z + q;
        let df = 3.0 * z * z + p;
        if df.norm() > 0.0 {
            z -= f / df;
        }
        *x = z;
        uk *= rot;
    }
    out
}

fn sqrt_pair(w: Complex64) -> [Complex64; 2] {
    let r = w.sqrt();
    [r, -r]
}

/// Leading-order roots `λ̄ε^q` of each reduced equation, plus the incident root.
/// Always six entries, in a fixed order per regime.
pub fn predicted_roots(params: &RegimeParams, point: &SpectralPoint) -> Result<Vec<PredictedRoot>> {
    let (s, c) = point.gamma.sin_cos();
    let (nu, kappa, omega, zeta, k) = (point.nu, point.kappa, point.omega, point.zeta, point.k);
    if k == 0.0 || omega == 0.0 {
        return Err(Error::Domain("predictions need k ≠ 0 and ω ≠ 0".into()));
    }
    let beta = params.beta;
    let coupling = -2.0 * I * k * s * c;
    let mut out = vec![PredictedRoot { balance: Balance::Incident, lambda: incident_root(point), q: 0.0 }];
    let mut push = |balance, roots: &[Complex64], q| {
        out.extend(roots.iter().map(|&lambda| PredictedRoot { balance, lambda, q }));
    };
    match params.case {
        RegimeCase::Case1 | RegimeCase::Case3 => {
            let (d3, d2) = if params.case == RegimeCase::Case1 { (kappa, nu) } else { (nu, kappa) };
            let cubic = depressed_cubic_roots(-I * omega * d3, Complex64::new(0.0, 0.0), coupling);
            push(Balance::Cubic, &cubic, -beta / 3.0);
            push(Balance::Quadratic, &sqrt_pair(-I * omega / d2), -3.0);
        }
        RegimeCase::Case2 | RegimeCase::Case4 => {
            let (d3, d2) = if params.case == RegimeCase::Case2 { (nu, kappa) } else { (kappa, nu) };
            let cubic = depressed_cubic_roots(-I * omega * d3, Complex64::new(zeta, 0.0), coupling);
            push(Balance::Cubic, &cubic, -2.0);
            push(Balance::Quadratic, &sqrt_pair(-I * omega / d2), -beta / 2.0);
        }
        RegimeCase::Case5 => {
            if zeta == 0.0 {
                return Err(Error::Domain("regime 5 predictions need ζ ≠ 0".into()));
            }
            let sum = nu + kappa;
            push(Balance::ZetaLinear, &[-coupling / zeta], -2.0);
            push(Balance::ZetaQuadratic, &sqrt_pair(zeta / (I * omega * sum)), -(beta - 2.0) / 2.0);
            push(Balance::Outer, &sqrt_pair(-I * omega * sum / (nu * kappa)), -beta / 2.0);
        }
    }
    Ok(out)
}

/// Targets used to match exact roots to families. Equal to [`predicted_roots`]
/// except in regime 5, where the two ζ-balances are replaced by the roots of
/// `−iω(ν+κ)λ³ + ζλ − 2ik sinγ cosγ = 0`. That cubic reduces to both balances
/// when ζ ≫ (ν+κ)^{2/3} and stays valid where ζ crosses zero inside a packet lobe.
pub fn matching_roots(params: &RegimeParams, point: &SpectralPoint) -> Result<Vec<PredictedRoot>> {
    let mut out = predicted_roots(params, point)?;
    if params.case != RegimeCase::Case5 {
        return Ok(out);
    }
    let (s, c) = point.gamma.sin_cos();
    let sum = point.nu + point.kappa;
    let cubic =
        depressed_cubic_roots(-I * point.omega * sum, Complex64::new(point.zeta, 0.0), -2.0 * I * point.k * s * c);
    let linear = out.iter().find(|p| p.balance == Balance::ZetaLinear).map(|p| p.lambda).unwrap();
    // the cubic root closest to 2ik sc/ζ continues the linear balance
    let lin =
        (0..3).min_by(|&a, &b| log_distance(cubic[a], linear).total_cmp(&log_distance(cubic[b], linear))).unwrap();
    let mut quad = (0..3).filter(|&j| j != lin).map(|j| cubic[j]);
    for p in out.iter_mut() {
        match p.balance {
            Balance::ZetaLinear => p.lambda = cubic[lin],
            Balance::ZetaQuadratic => p.lambda = quad.next().unwrap(),
            _ => {}
        }
    }
    Ok(out)
}

fn log_distance(a: Complex64, b: Complex64) -> f64 {
    (a / b).ln().norm()
}

/// Three-term expansion of the slowly decaying regime-5 root:
/// `λ₂ ≈ L + iω(κ+ν)L⁴/(2ik sinγ cosγ) − k²(cos²γ − ω²)/(2ik sinγ cosγ)` with `L = 2ik sinγ cosγ/ζ`.
pub fn case5_lambda2_refined(params: &RegimeParams, point: &SpectralPoint) -> Result<Complex64> {
    if params.case != RegimeCase::Case5 {
        return Err(Error::Regime(format!("refined λ₂ is defined for C5 only, got {}", params.case)));
    }
    if point.zeta == 0.0 {
        return Err(Error::Domain("refined λ₂ needs ζ ≠ 0".into()));
    }
    let (s, c) = point.gamma.sin_cos();
    let (k, omega) = (point.k, point.omega);
    let two_iksc = 2.0 * I * k * s * c;
    let l = two_iksc / point.zeta;
    let sum = point.nu + point.kappa;
    Ok(l + I * omega * sum * l.powi(4) / two_iksc - k * k * (c * c - omega * omega) / two_iksc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setup::critical_wavenumber;
    use crate::spectrum::charpoly::horner;

    #[test]
    fn cardano_satisfies_cubic() {
        let (a3, a1, a0) = (Complex64::new(0.3, -1.2), Complex64::new(2.0, 0.5), Complex64::new(-0.7, 0.1));
        let r = depressed_cubic_roots(a3, a1, a0);
        for z in r {
            assert!((a3 * z * z * z + a1 * z + a0).norm() < 1e-14);
        }
        // Vieta: the roots sum to zero, product −a₀/a₃
        let sum: Complex64 = r.iter().sum();
        assert!(sum.norm() < 1e-13);
        assert!((r[0] * r[1] * r[2] + a0 / a3).norm() < 1e-13);
    }

    #[test]
    fn cardano_pure_cube() {
        let r = depressed_cubic_roots(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(-8.0, 0.0));
        assert!(r.iter().any(|z| (z - 2.0).norm() < 1e-14));
        assert!(r.iter().all(|z| (z.norm() - 2.0).abs() < 1e-14));
    }

    #[test]
    fn case2_cubic_is_epsilon_free_after_scaling() {
        // with λ = λ̄ε⁻², ν = ν₀ε⁶, ζ = ε²:  −iων₀λ̄³ + λ̄ − 2ik sc = 0
        let p = RegimeParams::standard(RegimeCase::Case2, 8.0).unwrap();
        let (s, c) = p.gamma.sin_cos();
        let mut scaled = Vec::new();
        for eps in [0.1, 0.01] {
            let cs = critical_wavenumber(&p, eps).unwrap();
            let mut pt = cs.point(&p).unwrap();
            pt.omega = p.gamma.sin().hypot(eps);
            let preds = predicted_roots(&p, &pt).unwrap();
            let mut cub: Vec<Complex64> =
                preds.iter().filter(|x| x.balance == Balance::Cubic).map(|x| x.lambda * eps * eps).collect();
            for z in &cub {
                let f = -I * pt.omega * z * z * z + z - 2.0 * I * s * c;
                assert!(f.norm() < 1e-9, "{z} {f}");
            }
            cub.sort_by(|a, b| a.arg().total_cmp(&b.arg()));
            scaled.push(cub);
        }
        // only ω differs between the two ε, so the scaled roots move by O(ε²)
        for (a, b) in scaled[0].iter().zip(&scaled[1]) {
            assert!((a - b).norm() < 0.05 * a.norm());
        }
    }

    #[test]
    fn quadratic_root_has_one_decaying_sign() {
        let p = RegimeParams::standard(RegimeCase::Case1, 4.0).unwrap();
        let pt = critical_wavenumber(&p, 0.05).unwrap().point(&p).unwrap();
        let preds = predicted_roots(&p, &pt).unwrap();
        let quad: Vec<_> = preds.iter().filter(|x| x.balance == Balance::Quadratic).collect();
        assert_eq!(quad.len(), 2);
        assert_eq!(quad.iter().filter(|x| x.lambda.re > 0.0).count(), 1);
        let expected = (pt.omega / (2.0 * pt.nu)).sqrt();
        for x in quad {
            assert!((x.lambda.re.abs() / expected - 1.0).abs() < 1e-12);
            assert!((x.lambda.im.abs() / expected - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn incident_root_limit_and_exact_inviscid_root() {
        let p = RegimeParams::standard(RegimeCase::Case1, 4.0).unwrap();
        let pt = critical_wavenumber(&p, 1e-3).unwrap().point(&p).unwrap();
        let l1 = incident_root(&pt);
        assert!((l1 - Complex64::new(0.0, -1.0 / 3f64.sqrt())).norm() < 1e-5);
        // at ν = κ = 0, λ = −im is an exact root of P
        let cs = critical_wavenumber(&p, 1e-3).unwrap();
        let (s, c) = p.gamma.sin_cos();
        let w = cs.omega;
        let coeffs = [Complex64::new(c * c - w * w, 0.0), -2.0 * I * s * c, Complex64::new(cs.zeta, 0.0)];
        let lam = -I * cs.m0;
        assert!(horner(&coeffs, lam).norm() < 1e-14);
    }

    #[test]
    fn refined_lambda2_requires_case5() {
        let p = RegimeParams::standard(RegimeCase::Case2, 8.0).unwrap();
        let pt = critical_wavenumber(&p, 0.1).unwrap().point(&p).unwrap();
        assert!(case5_lambda2_refined(&p, &pt).is_err());
    }

    #[test]
    fn refined_lambda2_real_part_sign() {
        for beta in [7.0, 9.0] {
            let p = RegimeParams::standard(RegimeCase::Case5, beta).unwrap();
            let pt = critical_wavenumber(&p, 0.1).unwrap().point(&p).unwrap();
            let l2 = case5_lambda2_refined(&p, &pt).unwrap();
            assert!(l2.re > 0.0);
            let order = 0.1f64.powf(beta - 8.0);
            assert!(l2.re / order > 0.1 && l2.re / order < 100.0);
        }
    }

    #[test]
    fn matching_targets_survive_vanishing_criticality() {
        use crate::spectrum::classified_roots;
        let p = RegimeParams::standard(RegimeCase::Case5, 7.0).unwrap();
        let eps = 0.05;
        let cs = critical_wavenumber(&p, eps).unwrap();
        // walk m across the ζ = 0 locus
        for r in [-0.5, 0.0, 0.5, 1.0, 1.5, 2.0] {
            let pt = SpectralPoint::at(&p, eps, cs.k0, cs.m0 + r * eps * eps).unwrap();
            let roots = classified_roots(&p, &pt).unwrap();
            assert_eq!(roots.iter().filter(|x| x.decays).count(), 3, "ζ/ε² = {}", pt.zeta / (eps * eps));
        }
        // away from regime 5 the targets are the leading-order roots
        let q = RegimeParams::standard(RegimeCase::Case2, 8.0).unwrap();
        let pt = critical_wavenumber(&q, eps).unwrap().point(&q).unwrap();
        assert_eq!(matching_roots(&q, &pt).unwrap(), predicted_roots(&q, &pt).unwrap());
    }

    #[test]
    fn matching_targets_approach_leading_order_in_regime_5() {
        let p = RegimeParams::standard(RegimeCase::Case5, 9.0).unwrap();
        let pt = critical_wavenumber(&p, 1e-3).unwrap().point(&p).unwrap();
        let lead = predicted_roots(&p, &pt).unwrap();
        let matched = matching_roots(&p, &pt).unwrap();
        for a in &lead {
            let near = matched
                .iter()
                .filter(|b| b.balance == a.balance)
                .map(|b| (a.lambda - b.lambda).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(near < 1e-2 * a.lambda.norm(), "{:?}", a.balance);
        }
    }
}
