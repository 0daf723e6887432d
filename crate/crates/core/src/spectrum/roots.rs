//! Polynomial roots for coefficient sets whose magnitudes span many decades.
//!
//! The upper Newton polygon of `(n, ln|c_n|)` splits the roots into modulus
//! groups. Each edge gives a rescaled polynomial whose coefficients are all
//! `O(1)`, solved through the eigenvalues of its companion matrix. The
//! approximations are then polished with Newton's method on the full
//! polynomial, with implicit deflation against the other roots.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use super::charpoly::{horner_d, CharPoly};
use crate::error::{Error, Result};

/// Bound on `|P(λ)| / (max|c| · max(1,|λ|)^deg)` accepted after polishing.
pub const ROOT_RESIDUAL_TOL: f64 = 1e-10;

const MAX_POLISH: usize = 80;

/// The six roots of a characteristic polynomial, sorted by modulus then argument.
pub fn find_roots(p: &CharPoly) -> Result<[Complex64; 6]> {
    let r = poly_roots(&p.coeffs)?;
    let mut out = [Complex64::new(0.0, 0.0); 6];
    out.copy_from_slice(&r);
    Ok(out)
}

/// All roots (with multiplicity) of `Σ c_n xⁿ`, with a nonzero leading coefficient.
pub fn poly_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let deg = coeffs.len().checked_sub(1).ok_or_else(|| Error::Domain("empty polynomial".into()))?;
    if deg == 0 || coeffs[deg] == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain("leading coefficient must be nonzero".into()));
    }
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::Domain("non-finite coefficient".into()));
    }
    // zero roots from vanishing low-order coefficients
    let lead_zero = coeffs.iter().take_while(|c| c.norm() == 0.0).count();
    let core = &coeffs[lead_zero..];

    let mut roots = newton_polygon_start(core)?;
    polish(core, &mut roots);
    if !accepted(core, &roots) {
        // fall back to one companion matrix for the whole polynomial
        roots = companion_eigenvalues(core, geometric_scale(core))?;
        polish(core, &mut roots);
    }
    let worst = roots.iter().map(|&z| scaled_residual(core, z)).fold(0.0, f64::max);
    if !accepted(core, &roots) {
        return Err(Error::NoConvergence { residual: worst });
    }
    roots.extend(std::iter::repeat_n(Complex64::new(0.0, 0.0), lead_zero));
    sort_roots(&mut roots);
    Ok(roots)
}

pub(crate) fn sort_roots(roots: &mut [Complex64]) {
    roots.sort_by(|a, b| a.norm().total_cmp(&b.norm()).then(a.arg().total_cmp(&b.arg())));
}

fn scaled_residual(coeffs: &[Complex64], z: Complex64) -> f64 {
    let deg = coeffs.len() - 1;
    let cmax = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let (p, _) = horner_d(coeffs, z);
    p.norm() / (cmax * z.norm().max(1.0).powi(deg as i32))
}

fn accepted(coeffs: &[Complex64], roots: &[Complex64]) -> bool {
    if roots.len() != coeffs.len() - 1 || roots.iter().any(|z| !z.is_finite()) {
        return false;
    }
    if roots.iter().any(|&z| scaled_residual(coeffs, z) > ROOT_RESIDUAL_TOL) {
        return false;
    }
    // polishing must not have merged two simple roots
    for i in 0..roots.len() {
        for j in 0..i {
            let d = (roots[i] - roots[j]).norm();
            if d <= 1e-12 * roots[i].norm().max(roots[j].norm()) {
                let (_, dp) = horner_d(coeffs, roots[i]);
                if dp.norm() > 1e-6 * coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max) {
                    return false;
                }
            }
        }
    }
    true
}

/// Vertices of the upper convex hull of `(n, ln|c_n|)` over nonzero coefficients.
fn upper_hull(coeffs: &[Complex64]) -> Vec<(usize, f64)> {
    let pts: Vec<(usize, f64)> =
        coeffs.iter().enumerate().filter(|(_, c)| c.norm() > 0.0).map(|(n, c)| (n, c.norm().ln())).collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 as f64 - a.0 as f64) * (p.1 - a.1) - (b.1 - a.1) * (p.0 as f64 - a.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}

fn newton_polygon_start(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let hull = upper_hull(coeffs);
    let mut roots = Vec::with_capacity(coeffs.len() - 1);
    for w in hull.windows(2) {
        let ((a, la), (b, lb)) = (w[0], w[1]);
        let rho = ((la - lb) / (b - a) as f64).exp();
        roots.extend(companion_eigenvalues(&coeffs[a..=b], rho)?);
    }
    Ok(roots)
}

/// Geometric mean root modulus `(|c_0|/|c_n|)^{1/n}`.
fn geometric_scale(coeffs: &[Complex64]) -> f64 {
    let n = coeffs.len() - 1;
    (coeffs[0].norm() / coeffs[n].norm()).powf(1.0 / n as f64)
}

/// Roots of `Σ c_j xʲ` via the companion matrix of the polynomial in `z = x/ρ`.
fn companion_eigenvalues(coeffs: &[Complex64], rho: f64) -> Result<Vec<Complex64>> {
    let n = coeffs.len() - 1;
    let scaled: Vec<Complex64> = coeffs.iter().enumerate().map(|(j, &c)| c * rho.powi(j as i32)).collect();
    let lead = scaled[n];
    if n == 1 {
        return Ok(vec![-scaled[0] / lead * rho]);
    }
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        m[(i, n - 1)] = -scaled[i] / lead;
    }
    let eig = Schur::try_new(m, f64::EPSILON, 10_000)
        .and_then(|s| s.eigenvalues())
        .ok_or(Error::NoConvergence { residual: f64::INFINITY })?;
    Ok(eig.iter().map(|z| z * rho).collect())
}

/// Newton iteration with Maehly's implicit deflation, one root at a time.
fn polish(coeffs: &[Complex64], roots: &mut [Complex64]) {
    for _sweep in 0..3 {
        for i in 0..roots.len() {
            let mut z = roots[i];
            for _ in 0..MAX_POLISH {
                let (p, dp) = horner_d(coeffs, z);
                if p.norm() == 0.0 {
                    break;
                }
                let mut defl = Complex64::new(0.0, 0.0);
                for (j, &r) in roots.iter().enumerate() {
                    if j != i && r != z {
                        defl += 1.0 / (z - r);
                    }
                }
                let step = p / (dp - p * defl);
                if !step.is_finite() {
                    break;
                }
                let next = z - step;
                // stop once the residual no longer decreases
                if horner_d(coeffs, next).0.norm() > p.norm() && step.norm() < 1e-8 * z.norm() {
                    break;
                }
                z = next;
                if step.norm() <= 4.0 * f64::EPSILON * z.norm() {
                    break;
                }
            }
            roots[i] = z;
        }
    }
}
