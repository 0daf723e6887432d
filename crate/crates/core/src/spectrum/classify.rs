//! Matching exact roots to dominant-balance predictions and labelling them.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use super::predict::{Balance, PredictedRoot};
use crate::error::{Error, Result};
use crate::setup::{RegimeCase, RegimeParams};

/// Largest accepted distance in `(ln|λ|, arg λ)` between a root and its prediction.
pub const MAX_MATCH_DISTANCE: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RootFamily {
    Incident,
    Bl2,
    Bl3,
    /// Growing partner of the `λ₂, λ₃` family.
    Bl4,
    Bl5,
    /// Growing partner of `λ₅`.
    Bl6,
    /// Regime-5 root with vanishing decay rate (`β ≥ 8`).
    Degenerate,
}

impl RootFamily {
    pub fn name(self) -> &'static str {
        match self {
            RootFamily::Incident => "incident",
            RootFamily::Bl2 => "bl2",
            RootFamily::Bl3 => "bl3",
            RootFamily::Bl4 => "bl4",
            RootFamily::Bl5 => "bl5",
            RootFamily::Bl6 => "bl6",
            RootFamily::Degenerate => "degenerate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifiedRoot {
    pub lambda: Complex64,
    pub family: RootFamily,
    pub balance: Balance,
    pub predicted: Complex64,
    /// Predicted exponent of the matched balance.
    pub q_predicted: f64,
    /// `ln|λ| / ln ε` at this single ε.
    pub q_fit: f64,
    pub decays: bool,
}

fn distance(a: Complex64, b: Complex64) -> f64 {
    let dl = (a.norm().ln() - b.norm().ln()).abs();
    let mut da = (a.arg() - b.arg()).abs();
    if da > PI {
        da = 2.0 * PI - da;
    }
    dl + da
}

fn all_permutations() -> &'static [[usize; 6]] {
    static PERMS: OnceLock<Vec<[usize; 6]>> = OnceLock::new();
    PERMS.get_or_init(|| {
        permutations(6)
            .into_iter()
            .map(|p| {
                let mut a = [0; 6];
                a.copy_from_slice(&p);
                a
            })
            .collect()
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Assigns each root to one prediction by minimal total `(ln|λ|, arg)` distance over all
/// permutations, then labels the decaying members of each family.
pub fn classify_roots(
    params: &RegimeParams,
    roots: &[Complex64; 6],
    predictions: &[PredictedRoot],
    eps: f64,
) -> Result<[ClassifiedRoot; 6]> {
    if predictions.len() != 6 {
        return Err(Error::Classification(format!("expected 6 predictions, got {}", predictions.len())));
    }
    let mut cost = [[0.0; 6]; 6];
    for (i, &r) in roots.iter().enumerate() {
        for (j, p) in predictions.iter().enumerate() {
            cost[i][j] = distance(r, p.lambda);
        }
    }
    let mut best = (f64::INFINITY, [0usize; 6]);
    for perm in all_permutations() {
        let total: f64 = perm.iter().enumerate().map(|(i, &j)| cost[i][j]).sum();
        if total < best.0 {
            best = (total, *perm);
        }
    }
    let perm = best.1;
    let worst = perm.iter().enumerate().map(|(i, &j)| cost[i][j]).fold(0.0, f64::max);
    if worst > MAX_MATCH_DISTANCE {
        let detail: Vec<String> = perm
            .iter()
            .enumerate()
            .map(|(i, &j)| format!("{:.3e}→{:?}: {:.2}", roots[i], predictions[j].balance, cost[i][j]))
            .collect();
        return Err(Error::Classification(format!("no consistent assignment at ε = {eps:.3e}: {}", detail.join(", "))));
    }

    let ln_eps = eps.ln();
    let mut out: Vec<ClassifiedRoot> = perm
        .iter()
        .enumerate()
        .map(|(i, &j)| ClassifiedRoot {
            lambda: roots[i],
            family: RootFamily::Incident,
            balance: predictions[j].balance,
            predicted: predictions[j].lambda,
            q_predicted: predictions[j].q,
            q_fit: roots[i].norm().ln() / ln_eps,
            decays: roots[i].re > 0.0,
        })
        .collect();

    let degenerate = params.case == RegimeCase::Case5 && params.beta >= 8.0;
    let group =
        |out: &[ClassifiedRoot], b: Balance| -> Vec<usize> { (0..6).filter(|&i| out[i].balance == b).collect() };
    let label_pair =
        |out: &mut Vec<ClassifiedRoot>, idx: Vec<usize>, dec: RootFamily, grow: RootFamily| -> Result<()> {
            let decaying: Vec<usize> = idx.iter().copied().filter(|&i| out[i].decays).collect();
            if idx.len() != 2 || decaying.len() != 1 {
                return Err(Error::Classification(format!(
                    "expected one decaying root of two in a quadratic family at ε = {eps:.3e}"
                )));
            }
            for i in idx {
                out[i].family = if out[i].decays { dec } else { grow };
            }
            Ok(())
        };

    match params.case {
        RegimeCase::Case5 => {
            for i in group(&out, Balance::ZetaLinear) {
                out[i].family = if degenerate {
                    RootFamily::Degenerate
                } else if out[i].decays {
                    RootFamily::Bl2
                } else {
                    return Err(Error::Classification(format!("λ₂ does not decay at ε = {eps:.3e}")));
                };
            }
            let g = group(&out, Balance::ZetaQuadratic);
            label_pair(&mut out, g, RootFamily::Bl3, RootFamily::Bl4)?;
            let g = group(&out, Balance::Outer);
            label_pair(&mut out, g, RootFamily::Bl5, RootFamily::Bl6)?;
        }
        _ => {
            let cubic = group(&out, Balance::Cubic);
            let mut decaying: Vec<usize> = cubic.iter().copied().filter(|&i| out[i].decays).collect();
            if cubic.len() != 3 || decaying.len() != 2 {
                return Err(Error::Classification(format!(
                    "cubic family has {} decaying roots at ε = {eps:.3e}, expected 2",
                    decaying.len()
                )));
            }
            decaying.sort_by(|&a, &b| out[a].lambda.arg().total_cmp(&out[b].lambda.arg()));
            for i in cubic {
                out[i].family = RootFamily::Bl4;
            }
            out[decaying[0]].family = RootFamily::Bl2;
            out[decaying[1]].family = RootFamily::Bl3;
            let g = group(&out, Balance::Quadratic);
            label_pair(&mut out, g, RootFamily::Bl5, RootFamily::Bl6)?;
        }
    }
    out.sort_by_key(|r| r.family);
    let mut arr = [out[0]; 6];
    arr.copy_from_slice(&out);
    Ok(arr)
}
