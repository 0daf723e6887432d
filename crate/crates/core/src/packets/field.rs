use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// One quadrature term `dk dm · density · e^{ikx + μy − iωt}` of a lobe.
/// `density` is `Â(k, m)` times the modal vector `(u, w, b, p)` (and the amplitude
/// for boundary layers); `μ = im` for the incident wave and `−λ` for a layer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub k_index: usize,
    pub k: f64,
    pub omega: f64,
    pub mu: Complex64,
    pub dk: f64,
    pub dm: f64,
    pub density: [Complex64; 4],
}

impl Term {
    fn phase(&self, x: f64, y: f64, t: f64) -> Complex64 {
        (I * self.k * x + self.mu * y - I * self.omega * t).exp()
    }

    fn symbol(&self, d: Derivative) -> Complex64 {
        (I * self.k).powu(d.dx as u32) * self.mu.powu(d.dy as u32) * (-I * self.omega).powu(d.dt as u32)
    }
}

/// Multi-index of a derivative `∂_x^dx ∂_y^dy ∂_t^dt`, each order at most 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Derivative {
    pub dx: u8,
    pub dy: u8,
    pub dt: u8,
}

impl Derivative {
    pub const NONE: Derivative = Derivative { dx: 0, dy: 0, dt: 0 };
    pub const DY: Derivative = Derivative { dx: 0, dy: 1, dt: 0 };

    pub fn new(dx: u8, dy: u8, dt: u8) -> Result<Self> {
        if dx > 2 || dy > 2 || dt > 2 {
            return Err(Error::Domain(format!("derivative order ({dx}, {dy}, {dt}) exceeds 2")));
        }
        Ok(Self { dx, dy, dt })
    }
}

/// A wave packet as the terms of its `(k₀, m₀)` lobe. The physical field adds the
/// mirrored lobe, which is the complex conjugate, so it equals `2 Re` of the lobe sum.
#[derive(Debug, Clone, PartialEq)]
pub struct Packet {
    pub label: String,
    pub terms: Vec<Term>,
}

impl Packet {
    pub fn new(label: &str, terms: Vec<Term>) -> Self {
        Self { label: label.to_string(), terms }
    }

    pub fn relabel(mut self, label: &str) -> Self {
        self.label = label.to_string();
        self
    }

    pub fn concat(&self, other: &Packet) -> Packet {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Packet { label: format!("{}+{}", self.label, other.label), terms }
    }

    /// Multiplies each term's density componentwise by `f(term)`.
    pub fn map_density(&self, label: &str, f: impl Fn(&Term) -> [Complex64; 4]) -> Packet {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let g = f(t);
                let mut out = *t;
                for c in 0..4 {
                    out.density[c] *= g[c];
                }
                out
            })
            .collect();
        Packet::new(label, terms)
    }

    /// Whether every term decays in `y`.
    pub fn decays(&self) -> bool {
        self.terms.iter().all(|t| t.mu.re < 0.0)
    }

    /// Slowest and fastest decay rates `Re λ` over the terms that decay.
    pub fn decay_range(&self) -> Option<(f64, f64)> {
        let rates = self.terms.iter().map(|t| -t.mu.re).filter(|&r| r > 0.0);
        rates.fold(None, |acc, r| match acc {
            None => Some((r, r)),
            Some((lo, hi)) => Some((lo.min(r), hi.max(r))),
        })
    }

    /// Lobe sum `Σ dk dm · density · symbol · e^{ikx + μy − iωt}`.
    pub fn lobe_value(&self, x: f64, y: f64, t: f64, d: Derivative) -> [Complex64; 4] {
        let mut out = [ZERO; 4];
        for term in &self.terms {
            let f = term.phase(x, y, t) * term.symbol(d) * (term.dk * term.dm);
            for c in 0..4 {
                out[c] += term.density[c] * f;
            }
        }
        out
    }

    /// The physical field: lobe plus mirrored lobe.
    pub fn value(&self, x: f64, y: f64, t: f64, d: Derivative) -> [Complex64; 4] {
        self.lobe_value(x, y, t, d).map(|v| Complex64::new(2.0 * v.re, 0.0))
    }

    /// Largest `|(u, w, b)|` of the physical field over one carrier period at `(x, y)`:
    /// `√(2(|E|² + |E·E|))` for the lobe value `E`.
    pub fn envelope(&self, x: f64, y: f64, t: f64) -> f64 {
        let e = self.lobe_value(x, y, t, Derivative::NONE);
        let sq: f64 = e[..3].iter().map(|z| z.norm_sqr()).sum();
        let dot: Complex64 = e[..3].iter().map(|z| z * z).sum();
        (2.0 * (sq + dot.norm())).sqrt()
    }
}

/// Tensor grid in slope coordinates, `y ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// `0` followed by `n − 1` geometrically spaced points from `lo` to `hi`.
pub fn stretched(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let mut out = vec![0.0];
    if n >= 2 {
        let ratio = (hi / lo).ln();
        let steps = (n - 2).max(1) as f64;
        out.extend((0..n - 1).map(|i| lo * (ratio * i as f64 / steps).exp()));
    }
    out
}

/// Ratio of `y_max` to the slowest decay length: `e^{−Re λ y}` falls below 10⁻¹².
pub const LAYER_TRUNCATION: f64 = 27.631_021_115_928_547;

impl Grid {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.is_empty() || ys.is_empty() {
            return Err(Error::Domain("empty grid".into()));
        }
        if ys.iter().any(|&y| !(y >= 0.0)) {
            return Err(Error::Domain("grid has points below the slope (y < 0)".into()));
        }
        Ok(Self { xs, ys })
    }

    /// `ε²x ∈ [−x_span, x_span]` uniformly; `y` stretched from `1/(50 max Re λ)` to where the
    /// slowest layer has decayed by `10⁻¹²`. Packets without layers get `ε²y ∈ [0, x_span]`
    /// uniformly, and packets with both kinds of term get the union of the two.
    pub fn for_packet(packet: &Packet, eps: f64, x_span: f64, nx: usize, ny: usize) -> Result<Self> {
        let h = eps * eps;
        let xs = linspace(-x_span / h, x_span / h, nx);
        let outer = linspace(0.0, x_span / h, ny);
        let ys = match packet.decay_range() {
            Some((slow, fast)) => {
                let mut ys = stretched(1.0 / (50.0 * fast), LAYER_TRUNCATION / slow, ny);
                if !packet.decays() {
                    ys.extend(outer);
                    ys.sort_by(f64::total_cmp);
                    ys.dedup();
                }
                ys
            }
            None => outer,
        };
        Self::new(xs, ys)
    }

    pub fn len(&self) -> usize {
        self.xs.len() * self.ys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Field values on a grid, row-major in `y` (index `iy * nx + ix`).
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSample {
    pub grid: Grid,
    pub t: f64,
    pub derivative: Derivative,
    /// `(u, w, b, p)` per grid point.
    pub values: Vec<[Complex64; 4]>,
    pub label: String,
}

impl FieldSample {
    pub fn at(&self, ix: usize, iy: usize) -> [Complex64; 4] {
        self.values[iy * self.grid.xs.len() + ix]
    }

    /// Largest `|(u, w, b)|` over the grid.
    pub fn sup(&self) -> f64 {
        self.values.iter().map(|v| v[..3].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.iter().all(|z| z.is_finite()))
    }
}

/// Evaluates the physical field of `packet` (or a derivative of it) on `grid`, in parallel over rows.
pub fn synth(packet: &Packet, grid: &Grid, t: f64, d: Derivative) -> FieldSample {
    let nx = grid.xs.len();
    let values: Vec<[Complex64; 4]> =
        grid.ys.par_iter().flat_map_iter(|&y| grid.xs.iter().map(move |&x| packet.value(x, y, t, d))).collect();
    debug_assert_eq!(values.len(), nx * grid.ys.len());
    FieldSample { grid: grid.clone(), t, derivative: d, values, label: packet.label.clone() }
}
