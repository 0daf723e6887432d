//! Boundary-layer eigenvectors, the incident trace, and the boundary lift.
//!
//! A boundary-layer mode is `(U, W, B, P) e^{ikx − λy − iωt}` with `Re λ > 0`
//! in the kernel of the 4×4 symbol of the viscous/diffusive system. Three
//! such modes are combined so that `u`, `w` and `∂_y b` cancel the incident
//! packet at `y = 0`.

use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};
use num_complex::{Complex, Complex64};
use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::fit::{fit_exponent, ExponentFit};
use crate::setup::{critical_wavenumber, RegimeCase, RegimeParams, SpectralPoint};
use crate::spectrum::{classified_roots, root_of, ClassifiedRoot, RootFamily};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Smallest accepted `|det M| / Π ‖column‖` (Hadamard ratio).
pub const NEAR_SINGULAR_RATIO: f64 = 1e-14;

/// Relative residual the boundary lift must reach.
pub const LIFT_RESIDUAL_TOL: f64 = 1e-12;

type Row4 = [Complex64; 4];

/// Symbol of the system for the ansatz `e^{ikx − λy − iωt}`, unknowns `(U, W, B, P)`.
/// Rows: u-momentum, w-momentum, buoyancy, incompressibility.
pub fn symbol_matrix(k: f64, lambda: Complex64, omega: f64, nu: f64, kappa: f64, gamma: f64) -> [Row4; 4] {
    let (s, c) = gamma.sin_cos();
    let z = Complex64::new(0.0, 0.0);
    let lap = lambda * lambda - k * k;
    let mom = -I * omega - nu * lap;
    let buo = -I * omega - kappa * lap;
    [[mom, z, (-s).into(), I * k], [z, mom, (-c).into(), -lambda], [s.into(), c.into(), buo, z], [I * k, -lambda, z, z]]
}

/// `max_i |(A X)_i| / Σ_j |A_ij X_j|`.
pub fn kernel_residual(a: &[Row4; 4], x: &Row4) -> f64 {
    a.iter()
        .map(|row| {
            let (sum, mag) = row
                .iter()
                .zip(x)
                .fold((Complex64::new(0.0, 0.0), 0.0), |(s, m), (&aij, &xj)| (s + aij * xj, m + (aij * xj).norm()));
            if mag == 0.0 {
                0.0
            } else {
                sum.norm() / mag
            }
        })
        .fold(0.0, f64::max)
}

/// Kernel residual with every product split into its monomials, so that the
/// `−iω − ν(λ² − k²)` diagonal is not charged for its own cancellation.
pub fn expanded_kernel_residual(
    k: f64,
    lambda: Complex64,
    omega: f64,
    nu: f64,
    kappa: f64,
    gamma: f64,
    x: &Row4,
) -> f64 {
    let (s, c) = gamma.sin_cos();
    let [u, w, b, p] = *x;
    let iw = I * omega;
    let l2 = lambda * lambda;
    let k2 = Complex64::from(k * k);
    let diag = |d: f64, v: Complex64| [-iw * v, -d * l2 * v, d * k2 * v];
    let [a0, a1, a2] = diag(nu, u);
    let [b0, b1, b2] = diag(nu, w);
    let [c0, c1, c2] = diag(kappa, b);
    let rows: [Vec<Complex64>; 4] = [
        vec![a0, a1, a2, -s * b, I * k * p],
        vec![b0, b1, b2, -c * b, -lambda * p],
        vec![s * u, c * w, c0, c1, c2],
        vec![I * k * u, -lambda * w],
    ];
    rows.iter().map(|r| cancellation(r)).fold(0.0, f64::max)
}

/// The displayed eigenvector `U = 1`, `W = ik/λ`, `B = (sinγ + ikλ⁻¹cosγ)/(iω − κ(k² − λ²))`.
pub fn eigenvector(
    k: f64,
    lambda: Complex64,
    omega: f64,
    kappa: f64,
    gamma: f64,
) -> Result<(Complex64, Complex64, Complex64)> {
    if lambda.norm() == 0.0 {
        return Err(Error::SingularMode("λ = 0".into()));
    }
    let (s, c) = gamma.sin_cos();
    let den = I * omega - kappa * (k * k - lambda * lambda);
    if den.norm() <= 1e-15 * (omega.abs() + (kappa * (k * k - lambda * lambda)).norm()) {
        return Err(Error::SingularMode(format!("iω − κ(k² − λ²) vanishes at λ = {lambda:.6e}")));
    }
    Ok((Complex64::new(1.0, 0.0), I * k / lambda, (s + I * k * c / lambda) / den))
}

/// The displayed pressure `P = (1/ik)[iω + ν(λ² − k²) + sinγ(sinγ + ikλ⁻¹cosγ)/(iω + κ(λ² − k²))]`.
pub fn pressure(k: f64, lambda: Complex64, omega: f64, nu: f64, kappa: f64, gamma: f64) -> Result<Complex64> {
    if k == 0.0 {
        return Err(Error::SingularMode("k = 0".into()));
    }
    let (_, _, b) = eigenvector(k, lambda, omega, kappa, gamma)?;
    let s = gamma.sin();
    Ok((I * omega + nu * (lambda * lambda - k * k) + s * b) / (I * k))
}

/// `|Σ t| / Σ|t|`, one for no cancellation.
fn cancellation(terms: &[Complex64]) -> f64 {
    let sum: Complex64 = terms.iter().sum();
    let mag: f64 = terms.iter().map(|t| t.norm()).sum();
    if mag == 0.0 {
        0.0
    } else {
        sum.norm() / mag
    }
}

/// `(U, W, B, P)` at a root of `P(λ)`, choosing between equivalent expressions
/// for `B` and `P` the one with the least cancellation.
///
/// At a root, the buoyancy row gives `B = (s + ikc/λ)/(iω + κ(λ² − k²))` while the
/// momentum rows give `B = a(λ² − k²)/(λ(sλ + ikc))` with `a = −iω − ν(λ² − k²)`.
/// Near the κ-quadratic balance the first denominator cancels to a small
/// remainder and the second form keeps full precision, and vice versa near the
/// ν-quadratic balance.
pub fn stable_eigenvector(k: f64, lambda: Complex64, omega: f64, nu: f64, kappa: f64, gamma: f64) -> Result<Row4> {
    if lambda.norm() == 0.0 || k == 0.0 {
        return Err(Error::SingularMode(format!("λ = {lambda}, k = {k}")));
    }
    let (s, c) = gamma.sin_cos();
    let lap = lambda * lambda - k * k;
    let iw = I * omega;
    let num1 = [Complex64::from(s), I * k * c / lambda];
    let den1 = [iw, kappa * lap];
    let q1 = cancellation(&num1) * cancellation(&den1);
    let a = [-iw, -nu * lap];
    let lap_terms = [lambda * lambda, Complex64::from(-k * k)];
    let tilt = [s * lambda, I * k * c];
    let q2 = cancellation(&a) * cancellation(&lap_terms) * cancellation(&tilt);
    let from_buoyancy = q1 >= q2;
    let b = if from_buoyancy {
        num1.iter().sum::<Complex64>() / den1.iter().sum::<Complex64>()
    } else {
        a.iter().sum::<Complex64>() * lap / (lambda * tilt.iter().sum::<Complex64>())
    };
    if !b.is_finite() || q1.max(q2) == 0.0 {
        return Err(Error::SingularMode(format!("no finite buoyancy component at λ = {lambda:.6e}")));
    }
    let w = I * k / lambda;
    // The momentum factor a cancels near the ν-quadratic balance; there the
    // identity a(λ² − k²) = λ(sλ + ikc)B recovers it from the buoyancy row.
    let mut mom = a.iter().sum::<Complex64>();
    if from_buoyancy && cancellation(&a) < cancellation(&lap_terms) * cancellation(&tilt) {
        mom = lambda * tilt.iter().sum::<Complex64>() * b / lap;
    }
    // P from the u-row or from the w-row
    let p1 = [s * b, -mom];
    let p2 = [mom * w, -c * b];
    let p = if cancellation(&p1) >= cancellation(&p2) {
        p1.iter().sum::<Complex64>() / (I * k)
    } else {
        p2.iter().sum::<Complex64>() / lambda
    };
    Ok([Complex64::new(1.0, 0.0), w, b, p])
}

/// Incident plane-wave polarisation `(û, ŵ, b̂, p̂)` at `(k, m)` on frequency ω.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncidentMode {
    pub k: f64,
    pub m: f64,
    pub omega: f64,
    pub u: Complex64,
    pub w: Complex64,
    pub b: Complex64,
    pub p: Complex64,
}

impl IncidentMode {
    pub fn new(k: f64, m: f64, omega: f64, gamma: f64) -> Result<Self> {
        if m == 0.0 || omega == 0.0 || k == 0.0 {
            return Err(Error::Domain(format!("incident mode needs k, m, ω ≠ 0 (k = {k}, m = {m}, ω = {omega})")));
        }
        let (s, c) = gamma.sin_cos();
        let u = Complex64::new(1.0, 0.0);
        let w = Complex64::new(-k / m, 0.0);
        let b = I * (k * c - m * s) / (m * omega);
        // first momentum row without dissipation: −iωû − sinγ b̂ + ik p̂ = 0
        let p = (I * omega * u + s * b) / (I * k);
        Ok(Self { k, m, omega, u, w, b, p })
    }

    pub fn vector(&self) -> Row4 {
        [self.u, self.w, self.b, self.p]
    }

    /// `(𝔲, 𝔴, 𝔟) = (−û, −ŵ, −im b̂)`.
    pub fn trace(&self) -> [Complex64; 3] {
        [-self.u, -self.w, -I * self.m * self.b]
    }
}

/// Negated incident trace at `(k, m)`.
pub fn incident_trace(k: f64, m: f64, omega: f64, gamma: f64) -> Result<[Complex64; 3]> {
    Ok(IncidentMode::new(k, m, omega, gamma)?.trace())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryLayerMode {
    pub family: RootFamily,
    pub lambda: Complex64,
    pub u: Complex64,
    pub w: Complex64,
    pub b: Complex64,
    pub p: Complex64,
    pub amplitude: Complex64,
}

impl BoundaryLayerMode {
    /// Eigenvector and pressure at a root; the amplitude is set by the lift.
    pub fn at_root(point: &SpectralPoint, family: RootFamily, lambda: Complex64) -> Result<Self> {
        let [u, w, b, p] = stable_eigenvector(point.k, lambda, point.omega, point.nu, point.kappa, point.gamma)?;
        Ok(Self { family, lambda, u, w, b, p, amplitude: Complex64::new(0.0, 0.0) })
    }

    pub fn vector(&self) -> Row4 {
        [self.u, self.w, self.b, self.p]
    }

    /// Column of the lift matrix: `(U, W, −λB)`.
    pub fn trace_column(&self) -> [Complex64; 3] {
        [self.u, self.w, -self.lambda * self.b]
    }

    /// `max(|U|, |W|, |B|)`, the size of the eigenvector in the norm estimates.
    pub fn eigen_size(&self) -> f64 {
        self.u.norm().max(self.w.norm()).max(self.b.norm())
    }
}

/// The 3×3 boundary-lift system `M a = (𝔲, 𝔴, 𝔟)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeSystem {
    pub k: f64,
    pub lambdas: [Complex64; 3],
    pub bs: [Complex64; 3],
    pub m: [[Complex64; 3]; 3],
    pub rhs: [Complex64; 3],
    pub det_closed: Complex64,
    pub det_numeric: Complex64,
}

impl AmplitudeSystem {
    /// From `(λ_j, B_j)` of the modes labelled 2, 3, 5 (in that order).
    pub fn new(k: f64, lambdas: [Complex64; 3], bs: [Complex64; 3], rhs: [Complex64; 3]) -> Self {
        let mut m = [[Complex64::new(0.0, 0.0); 3]; 3];
        for j in 0..3 {
            m[0][j] = Complex64::new(1.0, 0.0);
            m[1][j] = I * k / lambdas[j];
            m[2][j] = -lambdas[j] * bs[j];
        }
        let det_closed = Self::closed_det(k, lambdas, bs);
        let det_numeric = Matrix3::from_fn(|i, j| m[i][j]).determinant();
        Self { k, lambdas, bs, m, rhs, det_closed, det_numeric }
    }

    pub fn from_modes(k: f64, modes: [&BoundaryLayerMode; 3], rhs: [Complex64; 3]) -> Self {
        Self::new(k, modes.map(|m| m.lambda), modes.map(|m| m.b), rhs)
    }

    /// `ik(B₂λ₂/λ₃ − B₃λ₃/λ₂ + B₃λ₃/λ₅ − B₂λ₂/λ₅ + B₅λ₅/λ₂ − B₅λ₅/λ₃)`.
    pub fn closed_det(k: f64, l: [Complex64; 3], b: [Complex64; 3]) -> Complex64 {
        let [l2, l3, l5] = l;
        let [b2, b3, b5] = b;
        I * k * (b2 * l2 / l3 - b3 * l3 / l2 + b3 * l3 / l5 - b2 * l2 / l5 + b5 * l5 / l2 - b5 * l5 / l3)
    }

    /// Adjugate of `M` written out entrywise. The lower-left entry is
    /// `ik(B₂λ₂/λ₃ − B₃λ₃/λ₂)`; the remaining entries are the familiar closed forms.
    pub fn adjugate(&self) -> [[Complex64; 3]; 3] {
        let ik = I * self.k;
        let [l2, l3, l5] = self.lambdas;
        let [b2, b3, b5] = self.bs;
        [
            [-ik * b5 * l5 / l3 + ik * b3 * l3 / l5, b5 * l5 - b3 * l3, ik * (1.0 / l5 - 1.0 / l3)],
            [ik * b5 * l5 / l2 - ik * b2 * l2 / l5, -b5 * l5 + b2 * l2, ik * (1.0 / l2 - 1.0 / l5)],
            [-ik * b3 * l3 / l2 + ik * b2 * l2 / l3, b3 * l3 - b2 * l2, ik * (1.0 / l3 - 1.0 / l2)],
        ]
    }

    /// `|det(DM)| / Π_j ‖(DM)_{·j}‖` with `D` scaling each row to unit maximum;
    /// invariant under row and column scaling.
    pub fn hadamard_ratio(&self) -> f64 {
        let rows: Vec<f64> = self.m.iter().map(|r| r.iter().map(|z| z.norm()).fold(0.0, f64::max)).collect();
        let cols: f64 =
            (0..3).map(|j| (0..3).map(|i| (self.m[i][j].norm() / rows[i]).powi(2)).sum::<f64>().sqrt()).product();
        self.det_closed.norm() / rows.iter().product::<f64>() / cols
    }

    /// `max_i |(M a − rhs)_i| / (Σ_j |M_ij a_j| + |rhs_i|)`.
    pub fn residual(&self, a: &[Complex64; 3]) -> f64 {
        (0..3)
            .map(|i| {
                let mut r = -self.rhs[i];
                let mut mag = self.rhs[i].norm();
                for j in 0..3 {
                    r += self.m[i][j] * a[j];
                    mag += (self.m[i][j] * a[j]).norm();
                }
                if mag == 0.0 {
                    0.0
                } else {
                    r.norm() / mag
                }
            })
            .fold(0.0, f64::max)
    }

    fn apply_inverse(&self, v: &[Complex64; 3]) -> [Complex64; 3] {
        let adj = self.adjugate();
        let mut out = [Complex64::new(0.0, 0.0); 3];
        for i in 0..3 {
            out[i] = (0..3).map(|j| adj[i][j] * v[j]).sum::<Complex64>() / self.det_closed;
        }
        out
    }

    /// Generic LU solve, used as a cross-check of the closed-form inverse.
    pub fn solve_lu(&self) -> Option<[Complex64; 3]> {
        let m = Matrix3::from_fn(|i, j| self.m[i][j]);
        let v = Vector3::from_column_slice(&self.rhs);
        m.lu().solve(&v).map(|x| [x[0], x[1], x[2]])
    }
}

/// `(a₂, a₃, a₅)` via the closed-form inverse plus one refinement step.
pub fn solve_amplitudes(system: &AmplitudeSystem, eps: f64) -> Result<[Complex64; 3]> {
    let ratio = system.hadamard_ratio();
    if !(ratio > NEAR_SINGULAR_RATIO) {
        return Err(Error::NearSingular { det: system.det_closed.norm(), relative: ratio, eps });
    }
    let mut a = system.apply_inverse(&system.rhs);
    let mut r = system.rhs;
    for (i, ri) in r.iter_mut().enumerate() {
        *ri -= (0..3).map(|j| system.m[i][j] * a[j]).sum::<Complex64>();
    }
    let da = system.apply_inverse(&r);
    for j in 0..3 {
        a[j] += da[j];
    }
    let res = system.residual(&a);
    if res > LIFT_RESIDUAL_TOL {
        return Err(Error::Accuracy { change: res, tolerance: LIFT_RESIDUAL_TOL });
    }
    Ok(a)
}

/// `(a₃, a₅)` lifting only the `u` and `w` rows: `[[1, 1], [ik/λ₃, ik/λ₅]] a = (𝔲, 𝔴)`.
pub fn solve_two_mode(k: f64, l3: Complex64, l5: Complex64, rhs: [Complex64; 2]) -> Result<[Complex64; 2]> {
    let (w3, w5) = (I * k / l3, I * k / l5);
    let det = w5 - w3;
    let scale = 1.0 + w3.norm().max(w5.norm());
    if det.norm() <= NEAR_SINGULAR_RATIO * scale {
        return Err(Error::NearSingular { det: det.norm(), relative: det.norm() / scale, eps: f64::NAN });
    }
    Ok([(w5 * rhs[0] - rhs[1]) / det, (rhs[1] - w3 * rhs[0]) / det])
}

/// How the boundary conditions are lifted at one spectral point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LiftPolicy {
    /// Three-row lift; in regime 5 with `β ≥ 8` the degenerate mode is dropped
    /// and only `(u, w)` are lifted by the remaining two modes.
    Standard,
    /// Three-row lift always. In regime 5 with `β ≥ 8` the degenerate mode
    /// still enters the amplitude solve but is left out of the synthesized packet.
    ThreeRow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LiftKind {
    Full,
    TwoRow,
}

/// All modal data at one spectral point.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSet {
    pub point: SpectralPoint,
    pub roots: [ClassifiedRoot; 6],
    pub incident: IncidentMode,
    /// Modes labelled 2 (or degenerate), 3, 5 with their amplitudes.
    pub modes: [BoundaryLayerMode; 3],
    pub system: AmplitudeSystem,
    pub lift: LiftKind,
    pub policy: LiftPolicy,
}

impl ModeSet {
    /// Whether the slow regime-5 root is present in place of `λ₂`.
    pub fn degenerate(&self) -> bool {
        self.modes[0].family == RootFamily::Degenerate
    }

    /// Modes that make up the boundary-layer packet.
    pub fn packet_modes(&self) -> impl Iterator<Item = &BoundaryLayerMode> {
        let skip_first = self.degenerate();
        self.modes.iter().skip(usize::from(skip_first))
    }

    /// `Σ a_j (U_j, W_j, −λ_j B_j) − (𝔲, 𝔴, 𝔟)` over the packet modes.
    pub fn trace_mismatch(&self) -> [Complex64; 3] {
        let mut out = self.system.rhs.map(|x| -x);
        for m in self.packet_modes() {
            let col = m.trace_column();
            for i in 0..3 {
                out[i] += m.amplitude * col[i];
            }
        }
        out
    }
}

/// Refinement sweeps of [`ModeSet::refined_trace`].
pub const TRACE_REFINEMENTS: usize = 3;

type Dd = Complex<TwoFloat>;

fn dd(z: Complex64) -> Dd {
    Complex::new(TwoFloat::from(z.re), TwoFloat::from(z.im))
}

fn undd(z: Dd) -> Complex64 {
    Complex64::new(f64::from(z.re), f64::from(z.im))
}

impl ModeSet {
    /// `(u, w, ∂_y b)` at `y = 0` per unit density, like [`ModeSet::trace_mismatch`]
    /// but in double-double: the amplitudes are refined against the lifted rows with
    /// residuals in double-double, then the traces are summed in double-double.
    /// The stored `λ`, eigenvectors and incident polarisation are taken as exact.
    /// In double precision the same sum has a rounding floor of `ε_mach max_j |a_j λ_j B_j|`.
    pub fn refined_trace(&self) -> [Complex64; 3] {
        let slots: Vec<usize> = if self.degenerate() { vec![1, 2] } else { vec![0, 1, 2] };
        let rows = if self.lift == LiftKind::TwoRow { 2 } else { 3 };
        let cols: Vec<[Dd; 3]> = slots
            .iter()
            .map(|&j| {
                let m = &self.modes[j];
                [dd(m.u), dd(m.w), -dd(m.lambda) * dd(m.b)]
            })
            .collect();
        let inc = &self.incident;
        let field = [dd(inc.u), dd(inc.w), dd(Complex64::new(0.0, inc.m)) * dd(inc.b)];
        let mut a: Vec<Dd> = slots.iter().map(|&j| dd(self.modes[j].amplitude)).collect();
        let trace = |a: &[Dd]| -> [Dd; 3] {
            let mut out = field;
            for (aj, col) in a.iter().zip(&cols) {
                for i in 0..3 {
                    out[i] += *aj * col[i];
                }
            }
            out
        };
        // a three-row lift with the degenerate column left out of the packet has no square system to refine
        let square = slots.len() == rows;
        let m = |i: usize, c: usize| undd(cols[c][i]);
        for _ in 0..TRACE_REFINEMENTS {
            if !square {
                break;
            }
            let r = trace(&a).map(undd);
            let delta: Option<Vec<Complex64>> = if rows == 3 {
                Matrix3::from_fn(m).lu().solve(&Vector3::new(-r[0], -r[1], -r[2])).map(|v| v.iter().copied().collect())
            } else {
                Matrix2::from_fn(m).lu().solve(&Vector2::new(-r[0], -r[1])).map(|v| v.iter().copied().collect())
            };
            let Some(delta) = delta else { break };
            for (aj, d) in a.iter_mut().zip(delta) {
                *aj += dd(d);
            }
        }
        trace(&a).map(undd)
    }
}

/// Roots, eigenvectors and amplitudes at one spectral point.
pub fn mode_set(params: &RegimeParams, point: &SpectralPoint, policy: LiftPolicy) -> Result<ModeSet> {
    let roots = classified_roots(params, point)?;
    let first = root_of(&roots, RootFamily::Bl2)
        .or_else(|| root_of(&roots, RootFamily::Degenerate))
        .ok_or_else(|| Error::Classification("no λ₂ root".into()))?;
    let picks = [first, root_of(&roots, RootFamily::Bl3).unwrap(), root_of(&roots, RootFamily::Bl5).unwrap()];
    let mut modes = [BoundaryLayerMode::at_root(point, picks[0].family, picks[0].lambda)?; 3];
    for (slot, r) in modes.iter_mut().zip(&picks).skip(1) {
        *slot = BoundaryLayerMode::at_root(point, r.family, r.lambda)?;
    }
    for m in &modes {
        if m.family != RootFamily::Degenerate && !(m.lambda.re > 0.0) {
            return Err(Error::Contract(format!("mode {} does not decay (λ = {:.6e})", m.family.name(), m.lambda)));
        }
    }
    let incident = IncidentMode::new(point.k, point.m, point.omega, point.gamma)?;
    let rhs = incident.trace();
    let system = AmplitudeSystem::from_modes(point.k, [&modes[0], &modes[1], &modes[2]], rhs);
    let degenerate = modes[0].family == RootFamily::Degenerate;
    let lift = if degenerate && policy == LiftPolicy::Standard {
        let [a3, a5] =
            solve_two_mode(point.k, modes[1].lambda, modes[2].lambda, [rhs[0], rhs[1]]).map_err(|e| match e {
                Error::NearSingular { det, relative, .. } => Error::NearSingular { det, relative, eps: point.eps },
                other => other,
            })?;
        modes[1].amplitude = a3;
        modes[2].amplitude = a5;
        LiftKind::TwoRow
    } else {
        let a = solve_amplitudes(&system, point.eps)?;
        for (m, aj) in modes.iter_mut().zip(a) {
            m.amplitude = aj;
        }
        LiftKind::Full
    };
    Ok(ModeSet { point: *point, roots, incident, modes, system, lift, policy })
}

/// Mode set at the packet centre `(k₀, m₀)` for a given ε.
pub fn centre_mode_set(params: &RegimeParams, eps: f64, policy: LiftPolicy) -> Result<ModeSet> {
    let setup = critical_wavenumber(params, eps)?;
    mode_set(params, &setup.point(params)?, policy)
}

/// Closed-form `det M` at the packet centre over an ε-sweep, with its fitted exponent.
pub fn det_orders(params: &RegimeParams, eps_list: &[f64]) -> Result<(Vec<(f64, Complex64)>, ExponentFit)> {
    let mut dets = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        let ms = centre_mode_set(params, eps, LiftPolicy::ThreeRow)?;
        dets.push((eps, ms.system.det_closed));
    }
    let fit = fit_exponent(&dets.iter().map(|&(e, d)| (e, d.norm())).collect::<Vec<_>>())?;
    Ok((dets, fit))
}

/// Whether regime 5 at this β has a degenerate `λ₂`.
pub fn has_degenerate_mode(params: &RegimeParams) -> bool {
    params.case == RegimeCase::Case5 && params.beta >= 8.0
}
