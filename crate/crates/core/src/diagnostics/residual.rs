use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fit::{fit_exponent, ExponentFit};
use crate::packets::{linspace, Derivative, Lobe, Packet};
use crate::setup::RegimeCase;

use super::norms::full_plane_component_l2;

/// `ε²x` half-width of the boundary row on which traces are sampled.
pub const BOUNDARY_X_SPAN: f64 = 4.0;
pub const BOUNDARY_POINTS: usize = 201;

/// Coarsest FD step, in units of the local length scale, and the number of halvings.
pub const FD_COARSE_STEP: f64 = 0.4;
pub const FD_LEVELS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualReport {
    pub case: RegimeCase,
    pub beta: f64,
    pub eps: f64,
    pub l2_ru: f64,
    pub l2_rw: f64,
    pub l2_rb: f64,
    pub boundary_res_u: f64,
    pub boundary_res_w: f64,
    pub boundary_res_dyb: f64,
    /// The same three sups from the double-precision synthesized field.
    pub boundary_synth: [f64; 3],
    /// Incident `sup |u|`, `sup |w|`, `sup |∂_y b|` on the boundary row.
    pub trace_scale: [f64; 3],
}

impl ResidualReport {
    /// Viscous part `‖(R_u, R_w)‖`.
    pub fn l2_nu(&self) -> f64 {
        self.l2_ru.hypot(self.l2_rw)
    }

    /// Diffusive part `‖R_b‖`.
    pub fn l2_kappa(&self) -> f64 {
        self.l2_rb
    }

    pub fn l2_total(&self) -> f64 {
        self.l2_nu().hypot(self.l2_rb)
    }

    /// Boundary residuals relative to the incident trace scale of each component.
    pub fn relative_boundary(&self) -> [f64; 3] {
        let r = [self.boundary_res_u, self.boundary_res_w, self.boundary_res_dyb];
        std::array::from_fn(|i| r[i] / self.trace_scale[i])
    }

    pub fn is_valid(&self) -> bool {
        [self.l2_ru, self.l2_rw, self.l2_rb, self.boundary_res_u, self.boundary_res_w, self.boundary_res_dyb]
            .iter()
            .chain(&self.trace_scale)
            .chain(&self.boundary_synth)
            .all(|v| v.is_finite() && *v >= 0.0)
    }
}

/// PDE remainder of `𝒲^app`: `(−νΔu, −νΔw, −κΔb)` of the incident packet, `Δ ↦ −(k² + m²)`.
/// The boundary-layer modes solve the viscous system exactly and contribute nothing.
pub fn remainder(lobe: &Lobe) -> Packet {
    let inc = lobe.incident();
    let (nu, kappa) = lobe.nodes.first().map(|n| (n.modes.point.nu, n.modes.point.kappa)).unwrap_or((0.0, 0.0));
    inc.map_density("remainder", |t| {
        let k2 = t.k * t.k + t.mu.im * t.mu.im;
        [(nu * k2).into(), (nu * k2).into(), (kappa * k2).into(), Complex64::new(0.0, 0.0)]
    })
}

/// Sup over the row `y = 0` of `|u|`, `|w|`, `|∂_y b|` of the physical field.
pub fn boundary_residual(packet: &Packet, xs: &[f64], t: f64) -> [f64; 3] {
    xs.iter().fold([0.0; 3], |acc, &x| {
        let v = packet.value(x, 0.0, t, Derivative::NONE);
        let db = packet.value(x, 0.0, t, Derivative::DY)[2];
        [acc[0].max(v[0].norm()), acc[1].max(v[1].norm()), acc[2].max(db.norm())]
    })
}

/// Boundary row `ε²x ∈ [−BOUNDARY_X_SPAN, BOUNDARY_X_SPAN]`.
pub fn boundary_row(eps: f64) -> Vec<f64> {
    let h = eps * eps;
    linspace(-BOUNDARY_X_SPAN / h, BOUNDARY_X_SPAN / h, BOUNDARY_POINTS)
}

/// [`boundary_residual`] of `𝒲^app`, summed node by node from the double-double
/// traces of [`crate::modes::ModeSet::refined_trace`].
pub fn refined_boundary_residual(lobe: &Lobe, xs: &[f64], t: f64) -> [f64; 3] {
    let nodes: Vec<(f64, f64, [Complex64; 3])> = lobe
        .nodes
        .par_iter()
        .map(|n| {
            let w = n.node.dk * n.node.dm * n.node.density;
            (n.node.k, n.modes.point.omega, n.modes.refined_trace().map(|z| z * w))
        })
        .collect();
    xs.par_iter()
        .map(|&x| {
            let mut v = [Complex64::new(0.0, 0.0); 3];
            for (k, omega, tr) in &nodes {
                let ph = Complex64::new(0.0, k * x - omega * t).exp();
                for c in 0..3 {
                    v[c] += tr[c] * ph;
                }
            }
            v.map(|z| 2.0 * z.re.abs())
        })
        .reduce(|| [0.0; 3], |a, b| [a[0].max(b[0]), a[1].max(b[1]), a[2].max(b[2])])
}

/// Remainder norms and boundary residuals of `𝒲^app` for one lobe.
pub fn pde_residual(lobe: &Lobe, t: f64) -> Result<ResidualReport> {
    let [l2_ru, l2_rw, l2_rb] = full_plane_component_l2(&remainder(lobe));
    let xs = boundary_row(lobe.spec.eps);
    let [bu, bw, bb] = refined_boundary_residual(lobe, &xs, t);
    let boundary_synth = boundary_residual(&lobe.approximate()?, &xs, t);
    let trace_scale = boundary_residual(&lobe.incident(), &xs, t);
    let report = ResidualReport {
        case: lobe.params.case,
        beta: lobe.params.beta,
        eps: lobe.spec.eps,
        l2_ru,
        l2_rw,
        l2_rb,
        boundary_res_u: bu,
        boundary_res_w: bw,
        boundary_res_dyb: bb,
        boundary_synth,
        trace_scale,
    };
    if !report.is_valid() {
        return Err(Error::Contract(format!("non-finite residual report {report:?}")));
    }
    Ok(report)
}

/// Steps `(h_x, h_y, h_t)` of a central-difference stencil.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Steps {
    pub x: f64,
    pub y: f64,
    pub t: f64,
}

impl Steps {
    fn scaled(&self, f: f64) -> Steps {
        Steps { x: self.x * f, y: self.y * f, t: self.t * f }
    }
}

/// Residual of the viscous/diffusive system applied to the physical field of
/// `packet` at `(x, y, t)`, every derivative by second-order central differences.
/// Rows as in the symbol: u- and w-momentum, buoyancy, incompressibility.
pub fn fd_residual(packet: &Packet, nu: f64, kappa: f64, gamma: f64, at: (f64, f64, f64), h: Steps) -> [f64; 4] {
    let (s, c) = gamma.sin_cos();
    let (x, y, t) = at;
    let f = |dx: f64, dy: f64, dt: f64| -> [f64; 4] {
        packet.value(x + dx, y + dy, t + dt, Derivative::NONE).map(|z| z.re)
    };
    let f0 = f(0.0, 0.0, 0.0);
    let (xp, xm) = (f(h.x, 0.0, 0.0), f(-h.x, 0.0, 0.0));
    let (yp, ym) = (f(0.0, h.y, 0.0), f(0.0, -h.y, 0.0));
    let (tp, tm) = (f(0.0, 0.0, h.t), f(0.0, 0.0, -h.t));
    let d1 = |p: f64, m: f64, step: f64| (p - m) / (2.0 * step);
    let d2 = |p: f64, m: f64, o: f64, step: f64| (p - 2.0 * o + m) / (step * step);
    let lap = |i: usize| d2(xp[i], xm[i], f0[i], h.x) + d2(yp[i], ym[i], f0[i], h.y);
    let dt = |i: usize| d1(tp[i], tm[i], h.t);
    let (u, w, b) = (0, 1, 2);
    let p = 3;
    [
        dt(u) - nu * lap(u) - s * f0[b] + d1(xp[p], xm[p], h.x),
        dt(w) - nu * lap(w) - c * f0[b] + d1(yp[p], ym[p], h.y),
        s * f0[u] + c * f0[w] + dt(b) - kappa * lap(b),
        d1(xp[u], xm[u], h.x) + d1(yp[w], ym[w], h.y),
    ]
}

/// Convergence of the finite-difference residual of `𝒲^app` towards the spectral remainder.
#[derive(Debug, Clone, PartialEq)]
pub struct FdConvergence {
    /// `(x, y, t)` of the probe.
    pub probe: (f64, f64, f64),
    /// Relative step `h` and `max |R_FD − R_spectral|` at each level.
    pub samples: Vec<(f64, f64)>,
    pub fit: ExponentFit,
}

impl FdConvergence {
    pub fn order(&self) -> f64 {
        self.fit.slope
    }
}

/// Refines a central-difference stencil of the full system at a probe inside the
/// slowest layer (`y = 1/Re λ_slow`, `x = 0`). Steps are `h` times the local scales:
/// the carrier wavelength in `x`, the fastest layer in `y`, the period in `t`.
pub fn fd_convergence(lobe: &Lobe, t: f64) -> Result<FdConvergence> {
    let app = lobe.approximate()?;
    let bl = lobe.boundary_layers()?;
    let (slow, fast) = bl.decay_range().ok_or_else(|| Error::Contract("no decaying layers".into()))?;
    let centre = &lobe.nodes[lobe.nodes.len() / 2].modes.point;
    let probe = (0.0, 1.0 / slow, t);
    let base = Steps { x: 1.0 / centre.k.abs(), y: 1.0 / fast, t: 1.0 / centre.omega.abs() };
    let rem = remainder(lobe);
    let spectral: [f64; 4] = rem.value(probe.0, probe.1, probe.2, Derivative::NONE).map(|z| z.re);
    let mut samples = Vec::with_capacity(FD_LEVELS);
    for level in 0..FD_LEVELS {
        let h = FD_COARSE_STEP / f64::from(1u32 << level);
        let r = fd_residual(&app, centre.nu, centre.kappa, centre.gamma, probe, base.scaled(h));
        let err = (0..4).map(|i| (r[i] - spectral[i]).abs()).fold(0.0, f64::max);
        samples.push((h, err));
    }
    let fit = fit_exponent(&samples)?;
    Ok(FdConvergence { probe, samples, fit })
}
