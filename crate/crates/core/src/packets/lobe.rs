use num_complex::Complex64;
use rayon::prelude::*;

use super::envelope::{LobeNode, WavePacketSpec};
use super::field::{Packet, Term};
use crate::error::{Error, Result};
use crate::modes::{mode_set, LiftPolicy, ModeSet};
use crate::setup::{RegimeParams, SpectralPoint};
use crate::spectrum::RootFamily;

/// Packet family stored in each slot of [`ModeSet::modes`].
pub const SLOT_FAMILIES: [RootFamily; 3] = [RootFamily::Bl2, RootFamily::Bl3, RootFamily::Bl5];

#[derive(Debug, Clone, PartialEq)]
pub struct NodeModes {
    pub node: LobeNode,
    pub modes: ModeSet,
}

/// Modal data at every quadrature node of the lobe centred at `(k₀, m₀)`.
/// Roots, eigenvectors and amplitudes are recomputed per node with the local
/// `ω(k, m)`; the mirrored lobe is the complex conjugate and is never stored.
#[derive(Debug, Clone)]
pub struct Lobe {
    pub params: RegimeParams,
    pub spec: WavePacketSpec,
    pub policy: LiftPolicy,
    pub nodes: Vec<NodeModes>,
}

impl Lobe {
    pub fn build(params: &RegimeParams, spec: &WavePacketSpec, policy: LiftPolicy) -> Result<Self> {
        let nodes = spec
            .lobe_nodes()
            .into_par_iter()
            .map(|node| {
                let point = SpectralPoint::at(params, spec.eps, node.k, node.m)?;
                Ok(NodeModes { node, modes: mode_set(params, &point, policy)? })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { params: *params, spec: spec.clone(), policy, nodes })
    }

    /// Whether any node carries a degenerate slow root in slot 0.
    pub fn degenerate(&self) -> bool {
        self.nodes.iter().any(|n| n.modes.degenerate())
    }

    pub fn incident(&self) -> Packet {
        let terms = self
            .nodes
            .iter()
            .map(|n| {
                let inc = &n.modes.incident;
                let d = n.node.density;
                Term {
                    k_index: n.node.k_index,
                    k: n.node.k,
                    omega: n.modes.point.omega,
                    mu: Complex64::new(0.0, inc.m),
                    dk: n.node.dk,
                    dm: n.node.dm,
                    density: inc.vector().map(|v| v * d),
                }
            })
            .collect();
        Packet::new("incident", terms)
    }

    /// Packet of the mode in `slot` (0, 1, 2 for the families 2, 3, 5).
    /// A slot holding the degenerate regime-5 root is not a boundary layer.
    pub fn boundary_layer(&self, slot: usize) -> Result<Packet> {
        let family = *SLOT_FAMILIES
            .get(slot)
            .ok_or_else(|| Error::Domain(format!("boundary-layer slot {slot} out of range 0..3")))?;
        let mut terms = Vec::with_capacity(self.nodes.len());
        for n in &self.nodes {
            let mode = &n.modes.modes[slot];
            if mode.family == RootFamily::Degenerate {
                return Err(Error::Contract(format!(
                    "slot {slot} holds the degenerate root λ = {:.6e}, which does not decay",
                    mode.lambda
                )));
            }
            if !(mode.lambda.re > 0.0) {
                return Err(Error::Contract(format!("non-decaying mode λ = {:.6e}", mode.lambda)));
            }
            let d = n.node.density;
            terms.push(Term {
                k_index: n.node.k_index,
                k: n.node.k,
                omega: n.modes.point.omega,
                mu: -mode.lambda,
                dk: n.node.dk,
                dm: n.node.dm,
                density: mode.vector().map(|v| v * mode.amplitude * d),
            });
        }
        Ok(Packet::new(family.name(), terms))
    }

    /// Slots that form the boundary-layer packet (the degenerate slot is left out).
    pub fn layer_slots(&self) -> Vec<usize> {
        if self.degenerate() {
            vec![1, 2]
        } else {
            vec![0, 1, 2]
        }
    }

    /// Sum of all boundary-layer packets.
    pub fn boundary_layers(&self) -> Result<Packet> {
        let mut out = Packet::new("bl", Vec::new());
        for slot in self.layer_slots() {
            out = out.concat(&self.boundary_layer(slot)?);
        }
        Ok(out.relabel("bl"))
    }

    /// `𝒲^app = 𝒲_inc + 𝒲_BL`.
    pub fn approximate(&self) -> Result<Packet> {
        Ok(self.incident().concat(&self.boundary_layers()?).relabel("app"))
    }
}
