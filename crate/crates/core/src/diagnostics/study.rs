//! ε-sweeps of one regime and the comparison of every fitted exponent with its
//! expected value.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;

use super::norms::{full_plane_l2, layer_l2, sup_norm, Norms};
use super::orders;
use super::residual::{fd_convergence, pde_residual, FdConvergence, ResidualReport};
use crate::error::{Error, Result};
use crate::fit::{fit_exponent, log_sweep};
use crate::modes::{centre_mode_set, has_degenerate_mode, LiftPolicy};
use crate::packets::{Grid, Lobe, Packet, WavePacketSpec, DEFAULT_NODES};
use crate::setup::{critical_wavenumber, RegimeCase, RegimeParams, SpectralPoint};
use crate::spectrum::{find_roots, CharPoly, ClassifiedRoot, RootFamily};

pub const ROOT_TOL: f64 = 0.05;
pub const ORDER_TOL: f64 = 0.15;
pub const SIZE_TOL: f64 = 0.25;
pub const INCIDENT_TOL: f64 = 0.1;
pub const FD_ORDER: f64 = 2.0;
pub const FD_TOL: f64 = 0.2;
/// Boundary residual relative to the incident trace scale.
pub const BOUNDARY_TOL: f64 = 1e-8;
/// Smallest relative `∂_y b` residual that counts as an unlifted condition.
pub const UNLIFTED_FLOOR: f64 = 1e-6;
pub const CENSUS_SECONDS: f64 = 1.0;

/// Sweep of the exponent fits: deep enough that subleading corrections are small.
pub fn asymptotic_sweep() -> Vec<f64> {
    log_sweep(1e-2, 1e-3, 8)
}

/// Sweep of the root census and the CLI default.
pub fn census_sweep() -> Vec<f64> {
    log_sweep(1e-1, 1e-2, 8)
}

/// The `(case, β)` pairs checked by default.
pub fn default_matrix() -> Vec<(RegimeCase, f64)> {
    use RegimeCase::*;
    vec![
        (Case1, 3.0),
        (Case1, 5.0),
        (Case2, 7.0),
        (Case2, 9.0),
        (Case3, 3.0),
        (Case3, 5.0),
        (Case4, 7.0),
        (Case4, 9.0),
        (Case5, 7.0),
        (Case5, 9.0),
        (Case5, 11.0),
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub eps: Vec<f64>,
    pub census_eps: Vec<f64>,
    pub nodes: usize,
    pub t: f64,
    /// `ε²x` half-width of the sup-norm grid.
    pub x_span: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            eps: asymptotic_sweep(),
            census_eps: census_sweep(),
            nodes: DEFAULT_NODES,
            t: 0.0,
            x_span: 4.0,
            nx: 41,
            ny: 24,
        }
    }
}

/// Everything measured at one ε.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub eps: f64,
    /// Roots at the packet centre.
    pub roots: [ClassifiedRoot; 6],
    pub det: f64,
    /// `|a₂|, |a₃|, |a₅|` of the three-row lift at the centre.
    pub amplitudes: [f64; 3],
    pub b5: f64,
    pub prandtl: f64,
    /// `Re λ` of the three slots at the centre.
    pub decay: [f64; 3],
    /// Norms of each boundary-layer packet; `None` for the degenerate slot.
    pub layers: [Option<Norms>; 3],
    pub incident: Norms,
    /// `L∞` measured; `L²` bounded by `‖𝒲_inc‖ + ‖𝒲_BL‖`.
    pub app: Norms,
    pub residual: ResidualReport,
}

fn norms_of(packet: &Packet, l2: f64, eps: f64, cfg: &StudyConfig) -> Result<Norms> {
    let grid = Grid::for_packet(packet, eps, cfg.x_span, cfg.nx, cfg.ny)?;
    Ok(Norms { l2, linf: sup_norm(packet, &grid, cfg.t) })
}

impl SweepPoint {
    pub fn measure(params: &RegimeParams, eps: f64, cfg: &StudyConfig) -> Result<Self> {
        let centre = centre_mode_set(params, eps, LiftPolicy::ThreeRow)?;
        let spec = WavePacketSpec::centred(params, eps, cfg.nodes)?;
        let sized = Lobe::build(params, &spec, LiftPolicy::ThreeRow)?;
        let lifted =
            if has_degenerate_mode(params) { Lobe::build(params, &spec, LiftPolicy::Standard)? } else { sized.clone() };

        let mut layers = [None; 3];
        for slot in sized.layer_slots() {
            let p = sized.boundary_layer(slot)?;
            layers[slot] = Some(norms_of(&p, layer_l2(&p)?, eps, cfg)?);
        }
        let inc = sized.incident();
        let incident = norms_of(&inc, full_plane_l2(&inc), eps, cfg)?;
        let bl_l2 = layer_l2(&sized.boundary_layers()?)?;
        let app = norms_of(&sized.approximate()?, incident.l2 + bl_l2, eps, cfg)?;

        let m = &centre.modes;
        Ok(Self {
            eps,
            roots: centre.roots,
            det: centre.system.det_closed.norm(),
            amplitudes: [m[0].amplitude.norm(), m[1].amplitude.norm(), m[2].amplitude.norm()],
            b5: m[2].b.norm(),
            prandtl: centre.point.nu / centre.point.kappa,
            decay: [m[0].lambda.re, m[1].lambda.re, m[2].lambda.re],
            layers,
            incident,
            app,
            residual: pde_residual(&lifted, cfg.t)?,
        })
    }

    pub fn root(&self, family: RootFamily) -> Option<&ClassifiedRoot> {
        self.roots.iter().find(|r| r.family == family)
    }
}

/// Decaying-root counts over every node of the packet lobe at one ε.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CensusPoint {
    pub eps: f64,
    pub nodes: usize,
    pub min_decaying: usize,
    pub max_decaying: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Census {
    pub points: Vec<CensusPoint>,
    pub seconds: f64,
}

/// Counts roots with `Re λ > 0` at every lobe node for each ε.
pub fn root_census(params: &RegimeParams, eps_list: &[f64], nodes: usize) -> Result<Census> {
    let start = Instant::now();
    let mut points = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        let spec = WavePacketSpec::centred(params, eps, nodes)?;
        let lobe = spec.lobe_nodes();
        let counts = lobe
            .par_iter()
            .map(|n| {
                let pt = SpectralPoint::at(params, eps, n.k, n.m)?;
                let roots = find_roots(&CharPoly::at(&pt)?)?;
                Ok(roots.iter().filter(|r| r.re > 0.0).count())
            })
            .collect::<Result<Vec<usize>>>()?;
        points.push(CensusPoint {
            eps,
            nodes: counts.len(),
            min_decaying: counts.iter().copied().min().unwrap_or(0),
            max_decaying: counts.iter().copied().max().unwrap_or(0),
        });
    }
    Ok(Census { points, seconds: start.elapsed().as_secs_f64() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    /// Fitted exponent within `tol` of the expected one.
    Exponent,
    /// Measured value at most the expected one.
    AtMost,
    /// Measured value at least the expected one.
    AtLeast,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub case: RegimeCase,
    pub beta: f64,
    pub table: &'static str,
    pub label: String,
    pub kind: RowKind,
    pub expected: f64,
    pub measured: f64,
    pub r2: Option<f64>,
    pub tol: f64,
}

impl ReportRow {
    pub fn diff(&self) -> f64 {
        match self.kind {
            RowKind::Exponent => (self.measured - self.expected).abs(),
            RowKind::AtMost => (self.measured - self.expected).max(0.0),
            RowKind::AtLeast => (self.expected - self.measured).max(0.0),
        }
    }

    pub fn pass(&self) -> bool {
        match self.kind {
            RowKind::Exponent => self.diff() <= self.tol,
            RowKind::AtMost => self.measured <= self.expected,
            RowKind::AtLeast => self.measured >= self.expected,
        }
    }
}

/// One regime's sweep, census, FD check and the rows comparing them to the expected orders.
#[derive(Debug, Clone, PartialEq)]
pub struct Study {
    pub params: RegimeParams,
    pub points: Vec<SweepPoint>,
    pub census: Census,
    pub fd: FdConvergence,
    pub rows: Vec<ReportRow>,
}

struct Rows<'a> {
    params: &'a RegimeParams,
    rows: Vec<ReportRow>,
}

impl Rows<'_> {
    fn push(
        &mut self,
        table: &'static str,
        label: String,
        kind: RowKind,
        expected: f64,
        measured: f64,
        r2: Option<f64>,
        tol: f64,
    ) {
        let (case, beta) = (self.params.case, self.params.beta);
        self.rows.push(ReportRow { case, beta, table, label, kind, expected, measured, r2, tol });
    }

    /// Fitted slope of `value` over the sweep; a failed fit is recorded as a NaN row.
    fn exponent(&mut self, table: &'static str, label: String, expected: f64, samples: Vec<(f64, f64)>, tol: f64) {
        match fit_exponent(&samples) {
            Ok(f) => self.push(table, label, RowKind::Exponent, expected, f.slope, Some(f.r2), tol),
            Err(_) => self.push(table, label, RowKind::Exponent, expected, f64::NAN, None, tol),
        }
    }

    /// `value ≤ K ε^p` at every point, `K` twice the largest ratio over the larger-ε half.
    fn bound(&mut self, label: String, p: f64, samples: &[(f64, f64)]) {
        let ratios: Vec<f64> = samples.iter().map(|&(e, v)| v / e.powf(p)).collect();
        let mut by_eps: Vec<(f64, f64)> = samples.iter().map(|s| s.0).zip(ratios.iter().copied()).collect();
        by_eps.sort_by(|a, b| b.0.total_cmp(&a.0));
        let upper = by_eps.len().div_ceil(2);
        let k = 2.0 * by_eps[..upper].iter().map(|r| r.1).fold(0.0, f64::max);
        let worst = ratios.iter().map(|r| r / k).fold(0.0, f64::max);
        self.push("lemma", label, RowKind::AtMost, 1.0, worst, None, 0.0);
    }
}

impl Study {
    pub fn run(params: &RegimeParams, cfg: &StudyConfig) -> Result<Self> {
        if cfg.eps.len() < crate::fit::MIN_SAMPLES {
            return Err(Error::Domain(format!("sweep has {} points, need {}", cfg.eps.len(), crate::fit::MIN_SAMPLES)));
        }
        let points = cfg.eps.par_iter().map(|&e| SweepPoint::measure(params, e, cfg)).collect::<Result<Vec<_>>>()?;
        let census = root_census(params, &cfg.census_eps, cfg.nodes)?;
        // largest ε: the stencil stays above the roundoff of the summed layers
        let coarse = cfg.eps.iter().copied().fold(0.0, f64::max);
        let fd_lobe = Lobe::build(params, &WavePacketSpec::centred(params, coarse, cfg.nodes)?, LiftPolicy::ThreeRow)?;
        let fd = fd_convergence(&fd_lobe, cfg.t)?;
        let rows = Self::compare(params, &points, &census, &fd);
        Ok(Self { params: *params, points, census, fd, rows })
    }

    fn compare(params: &RegimeParams, points: &[SweepPoint], census: &Census, fd: &FdConvergence) -> Vec<ReportRow> {
        let (case, beta) = (params.case, params.beta);
        let mut r = Rows { params, rows: Vec::new() };
        let series =
            |f: &dyn Fn(&SweepPoint) -> f64| -> Vec<(f64, f64)> { points.iter().map(|p| (p.eps, f(p))).collect() };

        if case != RegimeCase::Case5 {
            for c in &census.points {
                r.push(
                    "census",
                    format!("min decaying roots ε={:.3e}", c.eps),
                    RowKind::AtLeast,
                    3.0,
                    c.min_decaying as f64,
                    None,
                    0.0,
                );
                r.push(
                    "census",
                    format!("max decaying roots ε={:.3e}", c.eps),
                    RowKind::AtMost,
                    3.0,
                    c.max_decaying as f64,
                    None,
                    0.0,
                );
            }
            r.push("census", "seconds per sweep".into(), RowKind::AtMost, CENSUS_SECONDS, census.seconds, None, 0.0);
        }

        for root in &points[0].roots {
            let fam = root.family;
            let s = series(&|p| p.root(fam).map_or(f64::NAN, |x| x.lambda.norm()));
            r.exponent("roots", format!("|λ| {}", fam.name()), root.q_predicted, s, ROOT_TOL);
        }
        if case == RegimeCase::Case5 && beta < 10.0 {
            let s = series(&|p| p.decay[0]);
            r.exponent("case5", "Re λ₂".into(), orders::case5_lambda2_re(beta), s, ORDER_TOL);
        }

        r.exponent("prop3", "det M".into(), orders::det(case, beta), series(&|p| p.det), ORDER_TOL);
        let amps = orders::amplitudes(case, beta);
        for (j, name) in ["a2", "a3", "a5"].iter().enumerate() {
            r.exponent("prop3", (*name).into(), amps[j], series(&|p| p.amplitudes[j]), ORDER_TOL);
        }
        r.exponent("prop3", "|B₅|".into(), orders::b5(case, beta), series(&|p| p.b5), ORDER_TOL);
        r.exponent("prop3", "Pr".into(), orders::prandtl(case, beta), series(&|p| p.prandtl), ORDER_TOL);

        let decay = orders::decay(case, beta);
        let sizes = orders::sizes(case, beta);
        let bounds = orders::lemma_bounds(case, beta);
        let names = ["bl2", "bl3", "bl5"];
        for j in 0..3 {
            if points[0].layers[j].is_none() {
                continue;
            }
            r.exponent("decay", format!("Re λ {}", names[j]), -decay[j], series(&|p| p.decay[j]), SIZE_TOL);
            let li = series(&|p| p.layers[j].map_or(f64::NAN, |n| n.linf));
            let l2 = series(&|p| p.layers[j].map_or(f64::NAN, |n| n.l2));
            if let Some((e_inf, e_2)) = sizes[j] {
                r.exponent("sizes", format!("{} L∞", names[j]), e_inf, li.clone(), SIZE_TOL);
                r.exponent("sizes", format!("{} L²", names[j]), e_2, l2.clone(), SIZE_TOL);
            }
            r.bound(format!("{} L∞ ≤ Kε^{:.4}", names[j], bounds[j].0), bounds[j].0, &li);
            r.bound(format!("{} L² ≤ Kε^{:.4}", names[j], bounds[j].1), bounds[j].1, &l2);
        }
        let (app_inf, app_2) = orders::approximate(case, beta);
        r.exponent("sizes", "app L∞".into(), app_inf, series(&|p| p.app.linf), SIZE_TOL);
        r.exponent("sizes", "app L²".into(), app_2, series(&|p| p.app.l2), SIZE_TOL);
        let (inc_inf, inc_2) = orders::incident();
        r.exponent("sizes", "incident L∞".into(), inc_inf, series(&|p| p.incident.linf), INCIDENT_TOL);
        r.exponent("sizes", "incident L²".into(), inc_2, series(&|p| p.incident.l2), INCIDENT_TOL);

        r.exponent(
            "consistency",
            "‖R_app‖".into(),
            orders::consistency(case, beta),
            series(&|p| p.residual.l2_total()),
            SIZE_TOL,
        );
        let (pn, pk) = orders::consistency_parts(case, beta);
        r.exponent("consistency", "‖R_ν‖".into(), pn, series(&|p| p.residual.l2_nu()), SIZE_TOL);
        r.exponent("consistency", "‖R_κ‖".into(), pk, series(&|p| p.residual.l2_kappa()), SIZE_TOL);
        r.push("consistency", "FD order".into(), RowKind::Exponent, FD_ORDER, fd.order(), Some(fd.fit.r2), FD_TOL);

        let worst = |i: usize| points.iter().map(|p| p.residual.relative_boundary()[i]).fold(0.0, f64::max);
        r.push("boundary", "u(y=0)".into(), RowKind::AtMost, BOUNDARY_TOL, worst(0), None, 0.0);
        r.push("boundary", "w(y=0)".into(), RowKind::AtMost, BOUNDARY_TOL, worst(1), None, 0.0);
        if orders::degenerate(case, beta) {
            let least = points.iter().map(|p| p.residual.relative_boundary()[2]).fold(f64::INFINITY, f64::min);
            r.push("boundary", "∂_y b(y=0) unlifted".into(), RowKind::AtLeast, UNLIFTED_FLOOR, least, None, 0.0);
        } else {
            r.push("boundary", "∂_y b(y=0)".into(), RowKind::AtMost, BOUNDARY_TOL, worst(2), None, 0.0);
        }
        r.rows
    }

    pub fn passed(&self) -> bool {
        self.rows.iter().all(ReportRow::pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| !r.pass())
    }
}

/// Runs every `(case, β)` in turn; each study parallelises over its own sweep.
pub fn run_matrix(matrix: &[(RegimeCase, f64)], gamma: f64, cfg: &StudyConfig) -> Result<Vec<Study>> {
    matrix
        .iter()
        .map(|&(case, beta)| {
            let p = RegimeParams::new(gamma, case, beta, 1.0, 1.0)?;
            critical_wavenumber(&p, cfg.eps[0])?;
            Study::run(&p, cfg)
        })
        .collect()
}

pub const CSV_HEADER: &str = "case,beta,table,label,kind,expected,measured,diff,r2,tol,pass";

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Rows as CSV, floats with 17 significant digits.
pub fn report_csv(rows: &[ReportRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let kind = match r.kind {
            RowKind::Exponent => "exponent",
            RowKind::AtMost => "at_most",
            RowKind::AtLeast => "at_least",
        };
        let _ = writeln!(
            out,
            "{},{},{},\"{}\",{},{},{},{},{},{},{}",
            r.case,
            num(r.beta),
            r.table,
            r.label.replace('"', "'"),
            kind,
            num(r.expected),
            num(r.measured),
            num(r.diff()),
            r.r2.map(num).unwrap_or_default(),
            num(r.tol),
            r.pass()
        );
    }
    out
}

/// Human-readable table, one line per row.
pub fn report_text(rows: &[ReportRow]) -> String {
    let mut out = format!(
        "{:<4} {:>5} {:<12} {:<28} {:>11} {:>11} {:>9} {:>8} {}\n",
        "case", "beta", "table", "quantity", "expected", "measured", "diff", "r2", "status"
    );
    for r in rows {
        let r2 = r.r2.map(|v| format!("{v:.5}")).unwrap_or_else(|| "-".into());
        let _ = writeln!(
            out,
            "{:<4} {:>5} {:<12} {:<28} {:>11.4e} {:>11.4e} {:>9.3e} {:>8} {}",
            r.case.to_string(),
            r.beta,
            r.table,
            r.label,
            r.expected,
            r.measured,
            r.diff(),
            r2,
            if r.pass() { "ok" } else { "FAIL" }
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(kind: RowKind, expected: f64, measured: f64, tol: f64) -> ReportRow {
        ReportRow {
            case: RegimeCase::Case1,
            beta: 3.0,
            table: "t",
            label: "x".into(),
            kind,
            expected,
            measured,
            r2: None,
            tol,
        }
    }

    #[test]
    fn row_verdicts() {
        assert!(row(RowKind::Exponent, 1.0, 1.1, 0.15).pass());
        assert!(!row(RowKind::Exponent, 1.0, 1.2, 0.15).pass());
        assert!(!row(RowKind::Exponent, 1.0, f64::NAN, 0.15).pass());
        assert!(row(RowKind::AtMost, 1e-8, 1e-9, 0.0).pass());
        assert!(!row(RowKind::AtLeast, 1e-6, 1e-9, 0.0).pass());
        assert_eq!(row(RowKind::AtMost, 1.0, 3.0, 0.0).diff(), 2.0);
    }

    #[test]
    fn lemma_constant_from_upper_half() {
        let p = RegimeParams::standard(RegimeCase::Case1, 3.0).unwrap();
        let mut r = Rows { params: &p, rows: Vec::new() };
        let exact: Vec<(f64, f64)> = log_sweep(1e-2, 1e-3, 8).into_iter().map(|e| (e, 3.0 * e * e)).collect();
        r.bound("exact".into(), 2.0, &exact);
        assert!((r.rows[0].measured - 0.5).abs() < 1e-12);
        // a steeper decay than the bound fails at the small-ε end
        let steep: Vec<(f64, f64)> = exact.iter().map(|&(e, _)| (e, e)).collect();
        r.bound("steep".into(), 2.0, &steep);
        assert!(!r.rows[1].pass());
    }

    #[test]
    fn csv_has_fixed_columns() {
        let csv = report_csv(&[row(RowKind::Exponent, 1.0, 1.05, 0.15)]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1].split(',').count(), CSV_HEADER.split(',').count());
        assert!(lines[1].contains("1.0500000000000000e0"));
        assert!(lines[1].ends_with("true"));
    }

    #[test]
    fn census_counts_three_layers() {
        let p = RegimeParams::standard(RegimeCase::Case2, 7.0).unwrap();
        let c = root_census(&p, &census_sweep(), 16).unwrap();
        assert!(c.points.iter().all(|x| x.min_decaying == 3 && x.max_decaying == 3));
    }

    #[test]
    fn one_sweep_point_is_consistent() {
        let p = RegimeParams::standard(RegimeCase::Case1, 3.0).unwrap();
        let cfg = StudyConfig { nodes: 12, ..StudyConfig::default() };
        let pt = SweepPoint::measure(&p, 0.01, &cfg).unwrap();
        assert!(pt.layers.iter().all(Option::is_some));
        assert!(pt.residual.relative_boundary().iter().all(|&r| r < BOUNDARY_TOL));
        assert!(pt.app.l2 >= pt.incident.l2);
        assert!(pt.root(RootFamily::Bl5).unwrap().decays);
    }
}
