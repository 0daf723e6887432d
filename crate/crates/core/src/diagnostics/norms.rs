use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::packets::{FieldSample, Grid, Packet, Term};

/// Largest accepted ratio of the analytic `y`-tail to the grid `L²` norm.
pub const TAIL_FRACTION: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Norms {
    pub l2: f64,
    pub linf: f64,
}

fn by_k_node(packet: &Packet) -> BTreeMap<usize, Vec<&Term>> {
    let mut groups: BTreeMap<usize, Vec<&Term>> = BTreeMap::new();
    for t in &packet.terms {
        groups.entry(t.k_index).or_default().push(t);
    }
    groups
}

/// Half-plane `L²` norm of the physical field of a decaying packet.
///
/// Plancherel in `x` at each `k` node and exact integration in `y`:
/// `∫₀^∞ e^{(μ_j + μ̄_l) y} dy = −1/(μ_j + μ̄_l)`. The mirrored lobe has disjoint
/// `k`-support, so it doubles the squared norm.
pub fn layer_l2(packet: &Packet) -> Result<f64> {
    if !packet.decays() {
        return Err(Error::Contract(format!("packet `{}` has non-decaying terms", packet.label)));
    }
    let total: f64 = by_k_node(packet)
        .into_par_iter()
        .map(|(_, terms)| {
            let dk = terms[0].dk;
            let mut acc = Complex64::new(0.0, 0.0);
            for a in &terms {
                for b in &terms {
                    let dot: Complex64 = (0..3).map(|c| a.density[c] * b.density[c].conj()).sum();
                    acc += dot * (a.dm * b.dm) / -(a.mu + b.mu.conj());
                }
            }
            dk * acc.re
        })
        .sum();
    Ok((2.0 * 2.0 * PI * total.max(0.0)).sqrt())
}

/// Whole-plane `L²` norm of the physical field: `(2π)² ∫∫ |Â X|² dk dm` per lobe.
/// Meaningful for packets with `μ = im` on the real axis.
pub fn full_plane_l2(packet: &Packet) -> f64 {
    full_plane_component_l2(packet).iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// [`full_plane_l2`] of `u`, `w`, `b` separately.
pub fn full_plane_component_l2(packet: &Packet) -> [f64; 3] {
    let mut acc = [0.0; 3];
    for t in &packet.terms {
        for (a, z) in acc.iter_mut().zip(&t.density[..3]) {
            *a += t.dk * t.dm * z.norm_sqr();
        }
    }
    acc.map(|v| (2.0 * 4.0 * PI * PI * v).sqrt())
}

/// Rounds of local refinement in [`sup_norm`].
pub const SUP_REFINEMENTS: usize = 4;

/// Largest carrier envelope of `|(u, w, b)|`: grid maximum, then [`SUP_REFINEMENTS`]
/// rounds of a 5×5 search at halved spacing around the best point (kept in `y ≥ 0`).
pub fn sup_norm(packet: &Packet, grid: &Grid, t: f64) -> f64 {
    let env = |x: f64, y: f64| packet.envelope(x, y, t);
    let (mut best, ix, iy) = grid
        .ys
        .par_iter()
        .enumerate()
        .map(|(iy, &y)| {
            grid.xs.iter().enumerate().map(|(ix, &x)| (env(x, y), ix, iy)).fold((0.0, 0, iy), |a, b| {
                if b.0 > a.0 {
                    b
                } else {
                    a
                }
            })
        })
        .reduce(|| (0.0, 0, 0), |a, b| if b.0 > a.0 || (b.0 == a.0 && (b.2, b.1) < (a.2, a.1)) { b } else { a });
    let gap = |v: &[f64], i: usize| {
        let lo = if i > 0 { v[i] - v[i - 1] } else { 0.0 };
        let hi = if i + 1 < v.len() { v[i + 1] - v[i] } else { 0.0 };
        lo.max(hi)
    };
    let (mut x, mut y) = (grid.xs[ix], grid.ys[iy]);
    let (mut hx, mut hy) = (gap(&grid.xs, ix) / 2.0, gap(&grid.ys, iy) / 2.0);
    for _ in 0..SUP_REFINEMENTS {
        let (x0, y0) = (x, y);
        for i in -2..=2 {
            for j in -2..=2 {
                let (xt, yt) = (x0 + f64::from(i) * hx / 2.0, (y0 + f64::from(j) * hy / 2.0).max(0.0));
                let v = env(xt, yt);
                if v > best {
                    (best, x, y) = (v, xt, yt);
                }
            }
        }
        hx /= 2.0;
        hy /= 2.0;
    }
    best
}

fn trapezoid(xs: &[f64], f: &[f64]) -> f64 {
    xs.windows(2).zip(f.windows(2)).map(|(x, v)| 0.5 * (x[1] - x[0]) * (v[0] + v[1])).sum()
}

/// Norms of a synthesized field by trapezoidal quadrature on its grid, with the
/// `y`-tail beyond the last row bounded by `|f(y_max)|² / (2 rate)`.
/// `decay_rate` is the slowest `Re λ`; errors when the tail exceeds [`TAIL_FRACTION`] of the norm.
pub fn sample_norms(field: &FieldSample, decay_rate: f64) -> Result<Norms> {
    let (xs, ys) = (&field.grid.xs, &field.grid.ys);
    if xs.len() < 2 || ys.len() < 2 {
        return Err(Error::Domain("sample norms need at least a 2 × 2 grid".into()));
    }
    let sq = |v: &[Complex64; 4]| v[..3].iter().map(|z| z.norm_sqr()).sum::<f64>();
    let rows: Vec<f64> = (0..ys.len())
        .map(|iy| {
            let line: Vec<f64> = (0..xs.len()).map(|ix| sq(&field.at(ix, iy))).collect();
            trapezoid(xs, &line)
        })
        .collect();
    let l2_sq = trapezoid(ys, &rows);
    let tail = rows[rows.len() - 1] / (2.0 * decay_rate);
    let l2 = l2_sq.sqrt();
    if !(tail <= TAIL_FRACTION * TAIL_FRACTION * l2_sq) {
        return Err(Error::GridTruncation { tail: tail.sqrt(), norm: l2 });
    }
    Ok(Norms { l2, linf: field.sup() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packets::{linspace, synth, Derivative};

    fn term(k_index: usize, k: f64, mu: Complex64, dk: f64, dm: f64, amp: Complex64) -> Term {
        let z = Complex64::new(0.0, 0.0);
        Term { k_index, k, omega: 0.5, mu, dk, dm, density: [amp, z, z, z] }
    }

    #[test]
    fn single_mode_layer_integral() {
        // one node: ‖2 Re(c e^{ikx−λy})‖² per unit k-weight is 2·2π·dk·|c dm|²/(2 Re λ)
        let lam = Complex64::new(3.0, 5.0);
        let a = Complex64::new(0.7, -0.2);
        let p = Packet::new("one", vec![term(0, 1.0, -lam, 0.01, 0.02, a)]);
        let expect = (2.0 * 2.0 * PI * 0.01 * (a * 0.02).norm_sqr() / (2.0 * lam.re)).sqrt();
        assert!((layer_l2(&p).unwrap() / expect - 1.0).abs() < 1e-14);
    }

    #[test]
    fn layer_l2_rejects_growing_terms() {
        let p = Packet::new("g", vec![term(0, 1.0, Complex64::new(0.1, 0.0), 1.0, 1.0, Complex64::new(1.0, 0.0))]);
        assert!(layer_l2(&p).is_err());
    }

    #[test]
    fn cross_terms_at_equal_k_interfere() {
        let lam = Complex64::new(2.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let same = Packet::new("s", vec![term(0, 1.0, -lam, 1.0, 1.0, one), term(0, 1.0, -lam, 1.0, 1.0, -one)]);
        assert!(layer_l2(&same).unwrap() < 1e-14);
        let apart = Packet::new("a", vec![term(0, 1.0, -lam, 1.0, 1.0, one), term(1, 1.1, -lam, 1.0, 1.0, -one)]);
        assert!(layer_l2(&apart).unwrap() > 1.0);
    }

    #[test]
    fn exact_and_grid_norms_agree_for_a_smooth_layer_packet() {
        // Gaussian-weighted k nodes: x-extent is finite so a grid can capture it
        let n = 40;
        let h = 0.05;
        let lam = Complex64::new(4.0, 1.0);
        let terms: Vec<Term> = (0..n)
            .map(|i| {
                let s = -1.0 + 2.0 * (i as f64 + 0.5) / n as f64;
                let amp = Complex64::new((-8.0 * s * s).exp(), 0.0);
                term(i, 1.0 + h * s, -lam, 2.0 * h / n as f64, 1.0, amp)
            })
            .collect();
        let p = Packet::new("g", terms);
        let exact = layer_l2(&p).unwrap();
        let grid = Grid::new(linspace(-400.0, 400.0, 4001), linspace(0.0, 8.0, 401)).unwrap();
        let f = synth(&p, &grid, 0.0, Derivative::NONE);
        let num = sample_norms(&f, lam.re).unwrap();
        assert!((num.l2 / exact - 1.0).abs() < 2e-3, "{} vs {exact}", num.l2);
        let env = sup_norm(&p, &Grid::new(linspace(-5.0, 5.0, 11), vec![0.0]).unwrap(), 0.0);
        assert!(num.linf <= env * (1.0 + 1e-12));
        assert!(num.linf > 0.99 * env);
    }

    #[test]
    fn truncated_grid_is_reported() {
        let lam = Complex64::new(0.1, 0.0);
        let p = Packet::new("slow", vec![term(0, 1.0, -lam, 1.0, 1.0, Complex64::new(1.0, 0.0))]);
        let grid = Grid::new(linspace(-3.0, 3.0, 31), linspace(0.0, 1.0, 11)).unwrap();
        let f = synth(&p, &grid, 0.0, Derivative::NONE);
        assert!(matches!(sample_norms(&f, lam.re), Err(Error::GridTruncation { .. })));
    }

    #[test]
    fn full_plane_norm_of_one_node() {
        let p = Packet::new("i", vec![term(0, 1.0, Complex64::new(0.0, 0.6), 0.1, 0.2, Complex64::new(2.0, 0.0))]);
        let expect = (2.0 * 4.0 * PI * PI * 0.1 * 0.2 * 4.0).sqrt();
        assert!((full_plane_l2(&p) / expect - 1.0).abs() < 1e-15);
    }
}
