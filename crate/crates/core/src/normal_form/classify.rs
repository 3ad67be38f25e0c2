//! Whole-torus assembly and the stable/unstable verdict.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::blocks::{block_set_a, block_set_b, block_set_c, block_set_e, block_two_mode_case2, SpectralBlock};
use super::{lambda_external, omega_polys, normal_form_constant, Frequencies};
use crate::error::{Error, Result};
use crate::resonance::{ResonanceCatalog, SetTag};
use crate::torus::TorusSpec;
use crate::ModeIndex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockClass {
    Elliptic,
    Hyperbolic,
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Stable,
    Unstable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub verdict: Verdict,
    pub hyperbolic_modes: Vec<ModeIndex>,
    pub max_im: f64,
}

/// Quadratic Hamiltonian around a torus: scalar external modes up to
/// `|j| <= band` plus the coupled blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveHamiltonian {
    pub spec: TorusSpec,
    pub constant: f64,
    pub freqs: Frequencies,
    pub scalar_lambdas: BTreeMap<ModeIndex, f64>,
    pub blocks: Vec<SpectralBlock>,
    pub band: i64,
}

impl EffectiveHamiltonian {
    pub fn block_of(&self, j: ModeIndex) -> Option<&SpectralBlock> {
        self.blocks.iter().find(|b| b.modes.contains(&j))
    }
}

/// Smallest band covering every internal and coupled mode, plus a margin.
pub fn default_band(spec: &TorusSpec, catalog: &ResonanceCatalog) -> i64 {
    let coupled = catalog.coupled_modes();
    spec.internal.iter().chain(&coupled).map(|j| j.abs()).max().unwrap_or(0) + 4
}

pub fn build_blocks(spec: &TorusSpec, catalog: &ResonanceCatalog) -> Result<Vec<SpectralBlock>> {
    catalog
        .all_pairs()
        .map(|pair| match pair.set_tag {
            SetTag::TwoMode => block_two_mode_case2(spec, pair),
            SetTag::A => block_set_a(spec, pair),
            SetTag::B => block_set_b(spec, pair),
            SetTag::C => block_set_c(spec, pair),
            SetTag::E => block_set_e(spec, pair),
        })
        .collect()
}

pub fn effective_hamiltonian(spec: &TorusSpec, catalog: &ResonanceCatalog, band: i64) -> Result<EffectiveHamiltonian> {
    if catalog.internal != spec.internal {
        return Err(Error::PreconditionViolated("catalog built for another torus"));
    }
    let blocks = build_blocks(spec, catalog)?;
    let mut scalar_lambdas = BTreeMap::new();
    for j in -band..=band {
        if spec.is_internal(j) || blocks.iter().any(|b| b.modes.contains(&j)) {
            continue;
        }
        scalar_lambdas.insert(j, lambda_external(j, spec));
    }
    let omega = omega_polys(&spec.internal).iter().map(|p| p.eval(&spec.rho, spec.nu)).collect();
    Ok(EffectiveHamiltonian {
        spec: spec.clone(),
        constant: normal_form_constant(spec),
        freqs: Frequencies { omega },
        scalar_lambdas,
        blocks,
        band,
    })
}

pub fn classify_blocks(blocks: &[SpectralBlock]) -> Classification {
    let mut hyperbolic_modes = Vec::new();
    let mut max_im = 0.0f64;
    for b in blocks.iter().filter(|b| b.classification == super::BlockClass::Hyperbolic) {
        hyperbolic_modes.extend_from_slice(&b.modes);
        max_im = max_im.max(b.max_im);
    }
    hyperbolic_modes.sort_unstable();
    hyperbolic_modes.dedup();
    let verdict = if hyperbolic_modes.is_empty() { Verdict::Stable } else { Verdict::Unstable };
    Classification { verdict, hyperbolic_modes, max_im }
}

/// Assembles the effective Hamiltonian and classifies the torus. Tori
/// where the block analysis does not apply (overlapping pairs, or a
/// three-mode torus with an extra one-mode resonance) are refused.
pub fn classify_torus(spec: &TorusSpec, catalog: &ResonanceCatalog) -> Result<(EffectiveHamiltonian, Classification)> {
    if !catalog.disjoint {
        return Err(Error::PreconditionViolated("external pairs are not disjoint"));
    }
    if spec.dim() == 3 && !catalog.one_mode_solutions.is_empty() {
        return Err(Error::PreconditionViolated("one-mode resonances present"));
    }
    let mut modes: Vec<ModeIndex> = catalog.all_pairs().flat_map(|p| p.modes()).collect();
    let total = modes.len();
    modes.sort_unstable();
    modes.dedup();
    if modes.len() != total {
        return Err(Error::PreconditionViolated("external mode shared by two pairs"));
    }
    let eff = effective_hamiltonian(spec, catalog, default_band(spec, catalog))?;
    let class = classify_blocks(&eff.blocks);
    Ok((eff, class))
}
