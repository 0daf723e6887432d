//! Expected ε-exponents of every measured quantity, per regime and β.
//!
//! Slots follow [`crate::packets::SLOT_FAMILIES`]: 0 → λ₂ (or the degenerate
//! root), 1 → λ₃, 2 → λ₅. An exponent `p` means `quantity ∼ ε^p`.

use crate::setup::RegimeCase;

/// Branch point of the regime-1 `λ₅` orders.
pub const CASE1_BRANCH: f64 = 4.5;
/// Branch point of the regime-4 orders and onset of the regime-5 degeneracy.
pub const CASE4_BRANCH: f64 = 8.0;

/// `det M` at the packet centre.
pub fn det(case: RegimeCase, beta: f64) -> f64 {
    match case {
        RegimeCase::Case1 if beta > CASE1_BRANCH => 3.0 - 2.0 * beta / 3.0,
        RegimeCase::Case1 => 0.0,
        RegimeCase::Case2 => 8.0 - 1.5 * beta,
        RegimeCase::Case3 => 4.0 * beta / 3.0 - 9.0,
        RegimeCase::Case4 if beta < CASE4_BRANCH => beta / 2.0 - 4.0,
        RegimeCase::Case4 => 0.0,
        RegimeCase::Case5 => 2.0 - beta / 2.0,
    }
}

/// `(a₂, a₃, a₅)` from the three-row lift.
pub fn amplitudes(case: RegimeCase, beta: f64) -> [f64; 3] {
    match case {
        RegimeCase::Case1 => {
            let a5 = if beta < CASE1_BRANCH { -beta / 3.0 } else { beta / 3.0 - 3.0 };
            [-beta / 3.0, -beta / 3.0, a5]
        }
        RegimeCase::Case2 => [-2.0, -2.0, 1.5 * beta - 10.0],
        RegimeCase::Case3 => [-beta / 3.0, -beta / 3.0, 9.0 - 5.0 * beta / 3.0],
        RegimeCase::Case4 => [-2.0, -2.0, if beta < CASE4_BRANCH { 2.0 - beta / 2.0 } else { -2.0 }],
        RegimeCase::Case5 => [-2.0, -2.0, -1.0],
    }
}

/// `B` component of the `λ₅` eigenvector.
pub fn b5(case: RegimeCase, beta: f64) -> f64 {
    match case {
        RegimeCase::Case1 | RegimeCase::Case2 => 6.0 - beta,
        RegimeCase::Case3 | RegimeCase::Case4 => beta - 6.0,
        RegimeCase::Case5 => 0.0,
    }
}

/// Prandtl number `ν/κ`.
pub fn prandtl(case: RegimeCase, beta: f64) -> f64 {
    let (pn, pk) = case.exponents(beta);
    pn - pk
}

/// Decay exponents `β_j` with `Re λ_j ∼ ε^{−β_j}`.
pub fn decay(case: RegimeCase, beta: f64) -> [f64; 3] {
    match case {
        RegimeCase::Case1 | RegimeCase::Case3 => [beta / 3.0, beta / 3.0, 3.0],
        RegimeCase::Case2 | RegimeCase::Case4 => [2.0, 2.0, beta / 2.0],
        RegimeCase::Case5 => [CASE4_BRANCH - beta, beta / 2.0 - 1.0, beta / 2.0],
    }
}

/// Order of `|X_λ|` where it is unbounded: `λ₅` in regimes 2 and 3.
pub fn eigen_size(case: RegimeCase, beta: f64) -> [f64; 3] {
    match case {
        RegimeCase::Case2 => [0.0, 0.0, 6.0 - beta],
        RegimeCase::Case3 => [0.0, 0.0, beta - 6.0],
        _ => [0.0; 3],
    }
}

/// Whether slot 0 holds the degenerate root.
pub fn degenerate(case: RegimeCase, beta: f64) -> bool {
    case == RegimeCase::Case5 && beta >= CASE4_BRANCH
}

/// `(L∞, L²)` bound exponents from amplitude, decay and eigenvector orders:
/// `α_j + 2 + ξ_j` and `(2 + β_j + 2α_j)/2 + ξ_j`.
pub fn lemma_bounds(case: RegimeCase, beta: f64) -> [(f64, f64); 3] {
    let (a, d, x) = (amplitudes(case, beta), decay(case, beta), eigen_size(case, beta));
    std::array::from_fn(|j| (a[j] + 2.0 + x[j], (2.0 + d[j] + 2.0 * a[j]) / 2.0 + x[j]))
}

/// Tabulated `(L∞, L²)` sizes of each boundary-layer packet; `None` where no entry exists.
pub fn sizes(case: RegimeCase, beta: f64) -> [Option<(f64, f64)>; 3] {
    let layer23 = match case {
        RegimeCase::Case1 | RegimeCase::Case3 => Some((2.0 - beta / 3.0, 1.0 - beta / 6.0)),
        RegimeCase::Case2 | RegimeCase::Case4 => Some((0.0, 0.0)),
        RegimeCase::Case5 => None,
    };
    let layer5 = match case {
        RegimeCase::Case1 if beta < CASE1_BRANCH => Some((2.0 - beta / 3.0, 2.5 - beta / 3.0)),
        RegimeCase::Case1 => Some((beta / 3.0 - 1.0, beta / 3.0 - 0.5)),
        RegimeCase::Case2 => Some((beta / 2.0 - 2.0, 0.75 * beta - 3.0)),
        RegimeCase::Case3 => Some((11.0 - 5.0 * beta / 3.0, 11.5 - 5.0 * beta / 3.0)),
        RegimeCase::Case4 if beta < CASE4_BRANCH => Some((4.0 - beta / 2.0, 3.0 - beta / 4.0)),
        RegimeCase::Case4 => Some((0.0, beta / 4.0 - 1.0)),
        RegimeCase::Case5 => None,
    };
    if degenerate(case, beta) {
        return [None, Some((0.0, (beta - 6.0) / 4.0)), Some((1.0, beta / 4.0))];
    }
    [layer23, layer23, layer5]
}

/// `(L∞, L²)` of `𝒲^app`.
pub fn approximate(case: RegimeCase, beta: f64) -> (f64, f64) {
    match case {
        RegimeCase::Case1 | RegimeCase::Case3 => (2.0 - beta / 3.0, 0.0),
        _ => (0.0, 0.0),
    }
}

/// `(L∞, L²)` of the incident packet.
pub fn incident() -> (f64, f64) {
    (0.0, 0.0)
}

/// `‖R_app‖_{L²}` from the consistency table.
pub fn consistency(case: RegimeCase, beta: f64) -> f64 {
    match case {
        RegimeCase::Case2 | RegimeCase::Case4 => 6.0,
        _ => beta,
    }
}

/// `(‖R_ν‖, ‖R_κ‖)`: each part carries its coefficient.
pub fn consistency_parts(case: RegimeCase, beta: f64) -> (f64, f64) {
    case.exponents(beta)
}

/// `Re λ₂` in regime 5.
pub fn case5_lambda2_re(beta: f64) -> f64 {
    beta - CASE4_BRANCH
}
