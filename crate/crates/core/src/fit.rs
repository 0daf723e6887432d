//! Least-squares power laws `value ≈ C ε^p`.

use crate::error::{Error, Result};

pub const MIN_SAMPLES: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct ExponentFit {
    pub samples: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

impl ExponentFit {
    /// `C ε^p` at the given ε.
    pub fn predict(&self, eps: f64) -> f64 {
        (self.intercept + self.slope * eps.ln()).exp()
    }
}

/// Slope of `ln value` against `ln ε`. Needs at least four samples spanning a decade.
pub fn fit_exponent(samples: &[(f64, f64)]) -> Result<ExponentFit> {
    if samples.len() < MIN_SAMPLES {
        return Err(Error::Domain(format!("{} samples, need at least {MIN_SAMPLES}", samples.len())));
    }
    if let Some(&(e, v)) = samples.iter().find(|(e, v)| !(*e > 0.0 && *v > 0.0 && v.is_finite())) {
        return Err(Error::Domain(format!("non-positive sample ({e}, {v})")));
    }
    let (lo, hi) = samples.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &(e, _)| (lo.min(e), hi.max(e)));
    if hi / lo < 10.0 * (1.0 - 1e-12) {
        return Err(Error::Domain(format!("ε range [{lo:.3e}, {hi:.3e}] spans less than a decade")));
    }
    let n = samples.len() as f64;
    let xs: Vec<f64> = samples.iter().map(|s| s.0.ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|s| s.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    Ok(ExponentFit { samples: samples.to_vec(), slope, intercept, r2 })
}

/// `n` log-spaced values from `hi` down to `lo`.
pub fn log_sweep(hi: f64, lo: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![hi];
    }
    let (a, b) = (hi.ln(), lo.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}
