//! Subcommands. Each writes its files under the output directory and returns
//! whether every checked row passed.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use critrefl_core::diagnostics::{orders, report_csv, report_text, stability_bound, ReportRow, Study};
use critrefl_core::fit::fit_exponent;
use critrefl_core::modes::{centre_mode_set, LiftPolicy};
use critrefl_core::packets::{Derivative, Grid, Lobe, Packet, WavePacketSpec};
use critrefl_core::setup::critical_wavenumber;
use critrefl_core::{classified_roots, RegimeParams, SpectralPoint};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::CliError;

/// Files written and the pass/fail verdict of a command.
#[derive(Debug, Default)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub passed: bool,
    /// Printed on stdout after the file list.
    pub summary: String,
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn write(dir: &Path, name: &str, body: &str, out: &mut Outcome) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let path = dir.join(name);
    fs::write(&path, body).map_err(|e| CliError::io(&path, e))?;
    out.files.push(path);
    Ok(())
}

/// The centre wavenumber, or `k_nodes` Gauss–Legendre `k` nodes across the lobe at `m₀`.
fn root_points(params: &RegimeParams, eps: f64, k_nodes: usize) -> critrefl_core::Result<Vec<SpectralPoint>> {
    let spec = WavePacketSpec::centred(params, eps, k_nodes)?;
    if k_nodes == 1 {
        return Ok(vec![SpectralPoint::at(params, eps, spec.k0, spec.m0)?]);
    }
    let mut ks: Vec<(usize, f64)> = spec.lobe_nodes().iter().map(|n| (n.k_index, n.k)).collect();
    ks.dedup_by_key(|p| p.0);
    ks.iter().map(|&(_, k)| SpectralPoint::at(params, eps, k, spec.m0)).collect()
}

pub const ROOTS_HEADER: &str = "eps,node,k,m,index,family,lambda_re,lambda_im,q_fit,q_predicted,decays";

pub fn roots(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let params = cfg.params()?;
    let blocks = cfg
        .eps
        .par_iter()
        .map(|&eps| {
            let mut s = String::new();
            for (node, pt) in root_points(&params, eps, cfg.k_nodes)?.iter().enumerate() {
                for (i, r) in classified_roots(&params, pt)?.iter().enumerate() {
                    let _ = writeln!(
                        s,
                        "{},{node},{},{},{i},{},{},{},{},{},{}",
                        num(eps),
                        num(pt.k),
                        num(pt.m),
                        r.family.name(),
                        num(r.lambda.re),
                        num(r.lambda.im),
                        num(r.q_fit),
                        num(r.q_predicted),
                        r.decays
                    );
                }
            }
            Ok(s)
        })
        .collect::<critrefl_core::Result<Vec<String>>>()?;
    let mut out = Outcome { passed: true, ..Default::default() };
    write(&cfg.out, "roots.csv", &format!("{ROOTS_HEADER}\n{}", blocks.concat()), &mut out)?;
    Ok(out)
}

pub const SOLVE_HEADER: &str = "eps,det_re,det_im,det_abs,a2_abs,a3_abs,a5_abs,b5_abs,hadamard";
pub const SOLVE_FIT_HEADER: &str = "quantity,expected,fitted,r2";

pub fn solve(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let params = cfg.params()?;
    let sets = cfg
        .eps
        .par_iter()
        .map(|&eps| centre_mode_set(&params, eps, LiftPolicy::ThreeRow).map(|m| (eps, m)))
        .collect::<critrefl_core::Result<Vec<_>>>()?;
    let mut csv = format!("{SOLVE_HEADER}\n");
    let mut series: [Vec<(f64, f64)>; 5] = Default::default();
    for (eps, m) in &sets {
        let det = m.system.det_closed;
        let a = m.modes.each_ref().map(|x| x.amplitude.norm());
        let b5 = m.modes[2].b.norm();
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{}",
            num(*eps),
            num(det.re),
            num(det.im),
            num(det.norm()),
            num(a[0]),
            num(a[1]),
            num(a[2]),
            num(b5),
            num(m.system.hadamard_ratio())
        );
        for (s, v) in series.iter_mut().zip([det.norm(), a[0], a[1], a[2], b5]) {
            s.push((*eps, v));
        }
    }
    let mut out = Outcome { passed: true, ..Default::default() };
    write(&cfg.out, "solve.csv", &csv, &mut out)?;

    let (case, beta) = (params.case, params.beta);
    let amps = orders::amplitudes(case, beta);
    let expected = [orders::det(case, beta), amps[0], amps[1], amps[2], orders::b5(case, beta)];
    let names = ["det M", "a2", "a3", "a5", "|B5|"];
    let mut fits = format!("{SOLVE_FIT_HEADER}\n");
    for ((name, exp), s) in names.iter().zip(expected).zip(&series) {
        match fit_exponent(s) {
            Ok(f) => {
                let _ = writeln!(fits, "{name},{},{},{}", num(exp), num(f.slope), num(f.r2));
            }
            Err(e) => {
                out.summary = format!("no exponent fits: {e}\n");
                return Ok(out);
            }
        }
    }
    write(&cfg.out, "solve_fit.csv", &fits, &mut out)?;
    Ok(out)
}

pub const FIELD_HEADER_REAL: &str = "eps,t,x,y,u,w,b,p";
pub const FIELD_HEADER_COMPLEX: &str = "eps,t,x,y,u_re,u_im,w_re,w_im,b_re,b_im,p_re,p_im";

fn field_csv(packet: &Packet, grid: &Grid, eps: f64, t: f64, real_part: bool) -> String {
    let rows: Vec<String> = grid
        .ys
        .par_iter()
        .map(|&y| {
            let mut s = String::new();
            for &x in &grid.xs {
                let _ = write!(s, "{},{},{},{}", num(eps), num(t), num(x), num(y));
                if real_part {
                    for v in packet.value(x, y, t, Derivative::NONE) {
                        let _ = write!(s, ",{}", num(v.re));
                    }
                } else {
                    for v in packet.lobe_value(x, y, t, Derivative::NONE) {
                        let _ = write!(s, ",{},{}", num(v.re), num(v.im));
                    }
                }
                s.push('\n');
            }
            s
        })
        .collect();
    let header = if real_part { FIELD_HEADER_REAL } else { FIELD_HEADER_COMPLEX };
    format!("{header}\n{}", rows.concat())
}

/// One file per packet and ε: `field_<i>_<label>.csv`, `i` indexing `eps`.
/// With `real_part` the columns are the physical field, otherwise the complex
/// lobe sum whose doubled real part is the physical field.
pub fn field(cfg: &RunConfig, real_part: bool) -> Result<Outcome, CliError> {
    let params = cfg.params()?;
    let mut out = Outcome { passed: true, ..Default::default() };
    for (i, &eps) in cfg.eps.iter().enumerate() {
        let spec = WavePacketSpec::new(cfg.envelope, cfg.k0, critical_wavenumber(&params, eps)?.m0, eps, cfg.nodes)?;
        let lobe = Lobe::build(&params, &spec, LiftPolicy::Standard)?;
        let mut packets = vec![lobe.incident()];
        for slot in lobe.layer_slots() {
            packets.push(lobe.boundary_layer(slot)?);
        }
        packets.push(lobe.approximate()?.relabel("app"));
        for p in &packets {
            let mut grid = Grid::for_packet(p, eps, cfg.x_span, cfg.nx, cfg.ny)?;
            if grid.ys.first() != Some(&0.0) {
                grid.ys.insert(0, 0.0);
            }
            let name = format!("field_{i:02}_{}.csv", p.label);
            write(&cfg.out, &name, &field_csv(p, &grid, eps, cfg.t, real_part), &mut out)?;
        }
    }
    Ok(out)
}

fn failing_rows(rows: &[ReportRow]) -> String {
    let failed: Vec<ReportRow> = rows.iter().filter(|r| !r.pass()).cloned().collect();
    if failed.is_empty() {
        String::new()
    } else {
        format!("failing rows:\n{}", report_text(&failed))
    }
}

/// Every table for the configured `(case, β)`; the exit status ignores row failures.
pub fn report(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let params = cfg.params()?;
    let study = Study::run(&params, &cfg.study())?;
    let mut text = report_text(&study.rows);
    let _ = writeln!(text, "\nstability bound at t = {}:", cfg.t);
    for p in &study.points {
        let r = &p.residual;
        let (nu, kappa) = critrefl_core::viscosity_diffusivity(&params, p.eps)?;
        let _ = writeln!(
            text,
            "  eps {:.4e}  bound {:.4e}  ‖R_app‖ {:.4e}",
            p.eps,
            stability_bound(cfg.t, nu, kappa),
            r.l2_total()
        );
    }
    let mut out = Outcome { passed: true, ..Default::default() };
    write(&cfg.out, "report.csv", &report_csv(&study.rows), &mut out)?;
    write(&cfg.out, "report.txt", &text, &mut out)?;
    out.summary = failing_rows(&study.rows);
    Ok(out)
}

/// The configured matrix of `(case, β)`; passes only if every row of every study passes.
pub fn verify(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let study_cfg = cfg.study();
    let mut rows = Vec::new();
    for &(case, beta) in &cfg.matrix {
        let params = RegimeParams::new(cfg.gamma, case, beta, cfg.nu0, cfg.kappa0)?;
        rows.extend(Study::run(&params, &study_cfg)?.rows);
    }
    let mut out = Outcome { passed: rows.iter().all(ReportRow::pass), ..Default::default() };
    write(&cfg.out, "verify.csv", &report_csv(&rows), &mut out)?;
    write(&cfg.out, "verify.txt", &report_text(&rows), &mut out)?;
    let failed = rows.iter().filter(|r| !r.pass()).count();
    out.summary = format!("{} rows, {failed} failing\n{}", rows.len(), failing_rows(&rows));
    Ok(out)
}
