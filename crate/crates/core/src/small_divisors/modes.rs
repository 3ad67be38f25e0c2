//! The external normal modes of an effective Hamiltonian with their
//! conserved charges, and their frequencies sampled over a ρ grid.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::normal_form::{lambda_poly, omega_polys, BlockClass, EffectiveHamiltonian};
use crate::rho_form::NuPoly;
use crate::ModeIndex;

/// Identifies one normal mode: a scalar external mode, or branch `branch`
/// (in increasing order of frequency) of the block whose frame reference is
/// `reference`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModeLabel {
    Scalar(ModeIndex),
    Block { reference: ModeIndex, branch: u8 },
}

impl ModeLabel {
    /// The wavenumber used in reports.
    pub fn index(self) -> ModeIndex {
        match self {
            ModeLabel::Scalar(j) => j,
            ModeLabel::Block { reference, .. } => reference,
        }
    }
}

/// A normal mode of one of the eff's blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockMode {
    pub label: ModeLabel,
    pub block: usize,
    pub branch: usize,
    pub mass: i64,
    pub momentum: i64,
    /// Unperturbed frequency `|w_a|²` in the block frame.
    pub zeroth: i128,
    pub hyperbolic: bool,
}

pub fn block_modes(eff: &EffectiveHamiltonian) -> Vec<BlockMode> {
    let mut out = Vec::new();
    for (bi, b) in eff.blocks.iter().enumerate() {
        let (mass, momentum) = b.model.charges();
        for branch in 0..b.normal_frequencies.len() {
            out.push(BlockMode {
                label: ModeLabel::Block { reference: b.reference, branch: branch as u8 },
                block: bi,
                branch,
                mass,
                momentum,
                zeroth: b.model.zeroth_order(),
                hyperbolic: b.classification == BlockClass::Hyperbolic,
            });
        }
    }
    out
}

/// Whether `j` is a scalar external mode (neither internal nor in a block).
pub fn is_scalar(eff: &EffectiveHamiltonian, j: ModeIndex) -> bool {
    !eff.spec.is_internal(j) && eff.block_of(j).is_none()
}

/// Ω, ∇Ω and the block-mode frequencies with their gradients at each grid
/// point. Block gradients use central differences.
#[derive(Debug, Clone)]
pub struct Samples {
    pub grid: Vec<Vec<f64>>,
    pub omega: Vec<Vec<f64>>,
    pub omega_grad: Vec<Vec<Vec<f64>>>,
    pub block: Vec<Vec<Complex64>>,
    pub block_grad: Vec<Vec<Vec<Complex64>>>,
    pub omega_polys: Vec<NuPoly>,
    pub shift: NuPoly,
}

const FD_STEP: f64 = 1e-6;

impl Samples {
    pub fn new(eff: &EffectiveHamiltonian, modes: &[BlockMode], grid: &[Vec<f64>]) -> Self {
        let nu = eff.spec.nu;
        let n = eff.spec.dim();
        let polys = omega_polys(&eff.spec.internal);
        let freqs = |rho: &[f64]| -> Vec<Complex64> {
            let per_block: Vec<Vec<Complex64>> = eff
                .blocks
                .iter()
                .map(|b| b.model.normal_frequencies(rho, nu).expect("block spectrum"))
                .collect();
            modes.iter().map(|m| per_block[m.block][m.branch]).collect()
        };
        let mut s = Samples {
            grid: grid.to_vec(),
            omega: Vec::with_capacity(grid.len()),
            omega_grad: Vec::with_capacity(grid.len()),
            block: Vec::with_capacity(grid.len()),
            block_grad: Vec::with_capacity(grid.len()),
            shift: lambda_poly(0, n),
            omega_polys: polys,
        };
        for rho in grid {
            s.omega.push(s.omega_polys.iter().map(|p| p.eval(rho, nu)).collect());
            s.omega_grad
                .push(s.omega_polys.iter().map(|p| p.form.gradient(rho).iter().map(|g| nu * nu * g).collect()).collect());
            s.block.push(freqs(rho));
            let mut grads = vec![vec![Complex64::new(0.0, 0.0); n]; modes.len()];
            if !modes.is_empty() {
                for i in 0..n {
                    let h = FD_STEP * rho[i].abs().max(1.0);
                    let (mut up, mut dn) = (rho.clone(), rho.clone());
                    up[i] += h;
                    dn[i] -= h;
                    let (fu, fd) = (freqs(&up), freqs(&dn));
                    for (a, g) in grads.iter_mut().enumerate() {
                        g[i] = (fu[a] - fd[a]) / (2.0 * h);
                    }
                }
            }
            s.block_grad.push(grads);
        }
        s
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }
}
