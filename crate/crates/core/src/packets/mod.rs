//! Incident and boundary-layer wave packets as Gauss–Legendre quadratures of
//! their spectral integrals, evaluated on physical grids.

pub mod envelope;
pub mod field;
pub mod lobe;

pub use envelope::{Envelope, LobeNode, WavePacketSpec, BUMP_L1, BUMP_SQ_L1, DEFAULT_NODES};
pub use field::{linspace, stretched, synth, Derivative, FieldSample, Grid, Packet, Term, LAYER_TRUNCATION};
pub use lobe::{Lobe, NodeModes, SLOT_FAMILIES};

use crate::error::{Error, Result};

/// Largest accepted relative change of field values when the node count doubles.
pub const RICHARDSON_TOL: f64 = 1e-6;

pub fn synth_incident(lobe: &Lobe, grid: &Grid, t: f64) -> FieldSample {
    synth(&lobe.incident(), grid, t, Derivative::NONE)
}

pub fn synth_boundary_layer(lobe: &Lobe, slot: usize, grid: &Grid, t: f64) -> Result<FieldSample> {
    Ok(synth(&lobe.boundary_layer(slot)?, grid, t, Derivative::NONE))
}

/// Spectral derivative `∂_x^dx ∂_y^dy ∂_t^dt` of a packet on a grid.
pub fn derivative_fields(packet: &Packet, grid: &Grid, t: f64, d: Derivative) -> Result<FieldSample> {
    let d = Derivative::new(d.dx, d.dy, d.dt)?;
    Ok(synth(packet, grid, t, d))
}

/// Relative change of `𝒲^app` at `points` when the nodes per dimension double:
/// `max |v_{2n} − v_n| / max |v_{2n}|`. Errors above [`RICHARDSON_TOL`].
pub fn richardson_change(lobe: &Lobe, points: &[(f64, f64)], t: f64) -> Result<f64> {
    let fine_spec = lobe.spec.with_nodes(2 * lobe.spec.nodes)?;
    let fine = Lobe::build(&lobe.params, &fine_spec, lobe.policy)?;
    let (a, b) = (lobe.approximate()?, fine.approximate()?);
    let mut diff: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for &(x, y) in points {
        let (va, vb) = (a.value(x, y, t, Derivative::NONE), b.value(x, y, t, Derivative::NONE));
        for c in 0..3 {
            diff = diff.max((va[c] - vb[c]).norm());
            scale = scale.max(vb[c].norm());
        }
    }
    let change = if scale == 0.0 { diff } else { diff / scale };
    if change > RICHARDSON_TOL {
        return Err(Error::Accuracy { change, tolerance: RICHARDSON_TOL });
    }
    Ok(change)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modes::{mode_set, LiftPolicy};
    use crate::setup::{RegimeCase, RegimeParams, SpectralPoint};
    use num_complex::Complex64;

    fn lobe(case: RegimeCase, beta: f64, eps: f64, nodes: usize) -> Lobe {
        let p = RegimeParams::standard(case, beta).unwrap();
        let spec = WavePacketSpec::centred(&p, eps, nodes).unwrap();
        Lobe::build(&p, &spec, LiftPolicy::Standard).unwrap()
    }

    #[test]
    fn incident_at_origin_is_envelope_mass() {
        let l = lobe(RegimeCase::Case1, 4.0, 0.1, DEFAULT_NODES);
        let u = l.incident().value(0.0, 0.0, 0.0, Derivative::NONE)[0];
        assert!((u.re / l.spec.l1_exact() - 1.0).abs() < 1e-8);
        assert_eq!(u.im, 0.0);
    }

    #[test]
    fn mirrored_node_is_conjugate() {
        let p = RegimeParams::standard(RegimeCase::Case2, 8.0).unwrap();
        let spec = WavePacketSpec::centred(&p, 0.1, 8).unwrap();
        let node = spec.lobe_nodes()[20];
        let pt = SpectralPoint::at(&p, 0.1, node.k, node.m).unwrap();
        let mirror = SpectralPoint::at(&p, 0.1, -node.k, -node.m).unwrap();
        assert_eq!(mirror, pt.mirrored());
        let (a, b) =
            (mode_set(&p, &pt, LiftPolicy::Standard).unwrap(), mode_set(&p, &mirror, LiftPolicy::Standard).unwrap());
        // arg ordering of the pair 2, 3 flips under conjugation, so match by λ
        for x in &a.modes {
            let y = b
                .modes
                .iter()
                .min_by(|u, v| (u.lambda - x.lambda.conj()).norm().total_cmp(&(v.lambda - x.lambda.conj()).norm()))
                .unwrap();
            assert!((x.lambda.conj() - y.lambda).norm() < 1e-9 * x.lambda.norm());
            assert!((x.amplitude.conj() - y.amplitude).norm() < 1e-8 * x.amplitude.norm());
            assert!((x.b.conj() - y.b).norm() < 1e-8 * x.b.norm());
        }
        let (ia, ib) = (a.incident.vector(), b.incident.vector());
        for c in 0..4 {
            assert!((ia[c].conj() - ib[c]).norm() < 1e-12 * (1.0 + ia[c].norm()));
        }
    }

    #[test]
    fn packets_are_divergence_free() {
        let l = lobe(RegimeCase::Case2, 8.0, 0.1, 24);
        let dx = Derivative::new(1, 0, 0).unwrap();
        for packet in [l.incident(), l.boundary_layers().unwrap()] {
            for &(x, y) in &[(0.0, 0.0), (30.0, 1e-3), (-50.0, 0.02)] {
                let ux = packet.lobe_value(x, y, 0.3, dx)[0];
                let wy = packet.lobe_value(x, y, 0.3, Derivative::DY)[1];
                assert!((ux + wy).norm() <= 1e-10 * (ux.norm() + wy.norm()), "{}", packet.label);
            }
        }
    }

    #[test]
    fn boundary_traces_cancel() {
        for (case, beta) in [(RegimeCase::Case1, 4.0), (RegimeCase::Case4, 9.0)] {
            let l = lobe(case, beta, 0.1, 24);
            let (app, inc) = (l.approximate().unwrap(), l.incident());
            for x in [-200.0, 0.0, 35.0] {
                let v = app.lobe_value(x, 0.0, 0.0, Derivative::NONE);
                let vb = app.lobe_value(x, 0.0, 0.0, Derivative::DY)[2];
                let i = inc.lobe_value(x, 0.0, 0.0, Derivative::NONE);
                let ib = inc.lobe_value(x, 0.0, 0.0, Derivative::DY)[2];
                let scale = l.spec.l1_exact();
                assert!(v[0].norm() <= 1e-8 * scale && v[1].norm() <= 1e-8 * scale, "{case} {x}: {v:?} vs {i:?}");
                assert!(vb.norm() <= 1e-8 * scale.max(ib.norm()), "{case} {x}");
            }
        }
    }

    #[test]
    fn spectral_derivative_matches_finite_difference() {
        let l = lobe(RegimeCase::Case1, 3.0, 0.1, 24);
        let inc = l.incident();
        let bl = l.boundary_layer(2).unwrap();
        let d2 = Derivative::new(0, 2, 0).unwrap();
        for (packet, y0, h) in [(&inc, 3.0, 1e-2), (&bl, 2e-4, 1e-7)] {
            let f = |y: f64| packet.value(7.0, y, 0.0, Derivative::NONE);
            let fd: Vec<Complex64> = (0..3).map(|c| (f(y0 + h)[c] - 2.0 * f(y0)[c] + f(y0 - h)[c]) / (h * h)).collect();
            let sp = packet.value(7.0, y0, 0.0, d2);
            let scale = sp[..3].iter().map(|z| z.norm()).fold(0.0, f64::max);
            for c in 0..3 {
                assert!((fd[c] - sp[c]).norm() < 1e-4 * scale, "{} c={c}: {} vs {}", packet.label, fd[c], sp[c]);
            }
        }
    }

    #[test]
    fn layer_decays_on_its_scale() {
        let l = lobe(RegimeCase::Case2, 8.0, 0.1, 24);
        let bl = l.boundary_layer(2).unwrap();
        let re = l.nodes.iter().map(|n| n.modes.modes[2].lambda.re).fold(f64::INFINITY, f64::min);
        let e0 = bl.envelope(0.0, 0.0, 0.0);
        let e1 = bl.envelope(0.0, 10.0 / re, 0.0);
        assert!(e1 < 1e-3 * e0);
        assert!(bl.decays());
    }

    #[test]
    fn time_shift_is_a_phase() {
        let l = lobe(RegimeCase::Case1, 4.0, 0.1, 4);
        let mut p = l.boundary_layer(0).unwrap();
        p.terms.truncate(1);
        let w = p.terms[0].omega;
        let a = p.lobe_value(3.0, 1e-3, 0.0, Derivative::NONE);
        let b = p.lobe_value(3.0, 1e-3, 0.7, Derivative::NONE);
        let phase = Complex64::new(0.0, -w * 0.7).exp();
        for c in 0..4 {
            assert!((a[c] * phase - b[c]).norm() < 1e-12 * a[c].norm());
        }
    }

    #[test]
    fn doubling_nodes_leaves_incident_unchanged() {
        let coarse = lobe(RegimeCase::Case1, 4.0, 0.1, DEFAULT_NODES);
        let fine = lobe(RegimeCase::Case1, 4.0, 0.1, 2 * DEFAULT_NODES);
        for &(x, y) in &[(0.0, 0.0), (40.0, 20.0), (-150.0, 90.0)] {
            let a = coarse.incident().value(x, y, 0.0, Derivative::NONE);
            let b = fine.incident().value(x, y, 0.0, Derivative::NONE);
            for c in 0..3 {
                assert!((a[c] - b[c]).norm() < 1e-8 * coarse.spec.l1_exact());
            }
        }
        let change = richardson_change(&coarse, &[(0.0, 0.0), (40.0, 1e-4)], 0.0).unwrap();
        assert!(change < RICHARDSON_TOL);
    }

    #[test]
    fn degenerate_slot_is_not_a_layer() {
        let l = lobe(RegimeCase::Case5, 9.0, 0.1, 8);
        assert!(l.degenerate());
        assert!(matches!(l.boundary_layer(0), Err(Error::Contract(_))));
        assert_eq!(l.layer_slots(), vec![1, 2]);
        assert!(l.boundary_layers().unwrap().decays());
        assert!(matches!(l.boundary_layer(3), Err(Error::Domain(_))));
    }

    #[test]
    fn derivative_order_is_bounded() {
        assert!(Derivative::new(3, 0, 0).is_err());
        let l = lobe(RegimeCase::Case1, 4.0, 0.1, 4);
        let g = Grid::new(vec![0.0], vec![0.0]).unwrap();
        assert!(derivative_fields(&l.incident(), &g, 0.0, Derivative { dx: 0, dy: 3, dt: 0 }).is_err());
    }

    #[test]
    fn grid_is_layer_resolving() {
        let l = lobe(RegimeCase::Case1, 4.0, 0.05, 8);
        let bl = l.boundary_layers().unwrap();
        let g = Grid::for_packet(&bl, 0.05, 4.0, 11, 40).unwrap();
        let (slow, fast) = bl.decay_range().unwrap();
        assert_eq!(g.ys[0], 0.0);
        assert!(g.ys[1] <= 1.0 / (50.0 * fast) * (1.0 + 1e-12));
        assert!((g.ys.last().unwrap() * slow - LAYER_TRUNCATION).abs() < 1e-9);
        assert!(g.ys.windows(2).all(|w| w[1] > w[0]));
        let s = synth(&bl, &g, 0.0, Derivative::NONE);
        assert!(s.is_finite());
        assert_eq!(s.values.len(), g.len());
        assert!(Grid::new(vec![0.0], vec![-1.0]).is_err());
    }
}
