use std::fmt;
use std::num::NonZeroUsize;
use std::str::FromStr;

use gauss_quad::legendre::GaussLegendre;

use crate::error::{Error, Result};
use crate::setup::{critical_wavenumber, RegimeParams};

/// `∫ exp(1 − 1/(1 − s²)) ds` over `(−1, 1)`.
pub const BUMP_L1: f64 = 1.206_900_322_437_876_2;
/// `∫ exp(1 − 1/(1 − s²))² ds` over `(−1, 1)`.
pub const BUMP_SQ_L1: f64 = 0.983_380_812_912_726_5;

pub const DEFAULT_NODES: usize = 48;

/// Envelope profile `χ`, supported on `[−1, 1]` with `χ(0) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Envelope {
    /// `exp(1 − 1/(1 − s²))`.
    #[default]
    Bump,
}

impl Envelope {
    pub fn eval(self, s: f64) -> f64 {
        match self {
            Envelope::Bump => {
                let q = 1.0 - s * s;
                if q <= 0.0 {
                    0.0
                } else {
                    (1.0 - 1.0 / q).exp()
                }
            }
        }
    }

    pub fn l1_norm(self) -> f64 {
        match self {
            Envelope::Bump => BUMP_L1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Envelope::Bump => "bump",
        }
    }
}

impl fmt::Display for Envelope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Envelope {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bump" => Ok(Envelope::Bump),
            other => Err(Error::Domain(format!("unknown envelope `{other}`"))),
        }
    }
}

/// One node of the lobe centred at `(k₀, m₀)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LobeNode {
    /// Index of the `k` coordinate, shared by all nodes with the same `k`.
    pub k_index: usize,
    pub k: f64,
    pub m: f64,
    /// `ε² w_s` and `ε² w_r`: the GL weights in `k` and `m`.
    pub dk: f64,
    pub dm: f64,
    /// `Â(k, m)` from this lobe alone.
    pub density: f64,
}

/// Spectral envelope `Â(k, m) = ε⁻² Σ± χ(ε⁻²(k ± k₀)) χ(ε⁻²(m ± m₀))` and its quadrature.
#[derive(Debug, Clone, PartialEq)]
pub struct WavePacketSpec {
    pub envelope: Envelope,
    pub k0: f64,
    pub m0: f64,
    pub eps: f64,
    /// Gauss–Legendre nodes per lobe per dimension.
    pub nodes: usize,
    rule: Vec<(f64, f64)>,
}

impl WavePacketSpec {
    pub fn new(envelope: Envelope, k0: f64, m0: f64, eps: f64, nodes: usize) -> Result<Self> {
        let n = NonZeroUsize::new(nodes).ok_or_else(|| Error::Domain("quadrature needs at least one node".into()))?;
        if !(eps > 0.0) {
            return Err(Error::Domain(format!("ε = {eps} must be positive")));
        }
        if !(k0.abs() > eps * eps) {
            return Err(Error::Domain(format!("lobes overlap: |k₀| = {k0} ≤ ε² = {}", eps * eps)));
        }
        let rule = GaussLegendre::new(n).as_node_weight_pairs().to_vec();
        Ok(Self { envelope, k0, m0, eps, nodes, rule })
    }

    /// Packet centred on the critical wavenumber for `(params, ε)`.
    pub fn centred(params: &RegimeParams, eps: f64, nodes: usize) -> Result<Self> {
        let cs = critical_wavenumber(params, eps)?;
        Self::new(Envelope::Bump, cs.k0, cs.m0, eps, nodes)
    }

    pub fn with_nodes(&self, nodes: usize) -> Result<Self> {
        Self::new(self.envelope, self.k0, self.m0, self.eps, nodes)
    }

    pub fn width(&self) -> f64 {
        self.eps * self.eps
    }

    /// `Â(k, m)`.
    pub fn amplitude(&self, k: f64, m: f64) -> f64 {
        let h = self.width();
        let chi = |x: f64| self.envelope.eval(x / h);
        (chi(k + self.k0) * chi(m + self.m0) + chi(k - self.k0) * chi(m - self.m0)) / h
    }

    /// Tensor nodes of the lobe at `(k₀, m₀)`; nodes where `Â` underflows to zero are left out.
    pub fn lobe_nodes(&self) -> Vec<LobeNode> {
        let h = self.width();
        let mut out = Vec::with_capacity(self.rule.len() * self.rule.len());
        for (i, &(s, ws)) in self.rule.iter().enumerate() {
            let cs = self.envelope.eval(s);
            for &(r, wr) in &self.rule {
                let density = cs * self.envelope.eval(r) / h;
                if density == 0.0 {
                    continue;
                }
                out.push(LobeNode {
                    k_index: i,
                    k: self.k0 + h * s,
                    m: self.m0 + h * r,
                    dk: h * ws,
                    dm: h * wr,
                    density,
                });
            }
        }
        out
    }

    /// `‖Â‖_{L¹}` by quadrature over both lobes, evaluating the full two-lobe `Â` at every node.
    pub fn l1_quadrature(&self) -> f64 {
        let h = self.width();
        let mut total = 0.0;
        for sign in [1.0, -1.0] {
            for &(s, ws) in &self.rule {
                for &(r, wr) in &self.rule {
                    total += self.amplitude(sign * (self.k0 + h * s), sign * (self.m0 + h * r)) * h * h * ws * wr;
                }
            }
        }
        total
    }

    /// `2ε²‖χ‖²_{L¹}`.
    pub fn l1_exact(&self) -> f64 {
        2.0 * self.width() * self.envelope.l1_norm().powi(2)
    }
}
