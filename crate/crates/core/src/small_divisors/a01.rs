//! Hypotheses A0 (frequencies stay close to `|w_a|²`) and A1 (first-order
//! Melnikov conditions) at the torus' own ρ.

use alloc::vec::Vec;

use num_complex::Complex64;

use super::modes::{block_modes, ModeLabel};
use crate::normal_form::{lambda_poly, EffectiveHamiltonian};
use crate::rho_form::RhoForm;

#[derive(Debug, Clone, PartialEq)]
pub struct A0Report {
    /// `sup |Λ_a − |w_a|²|` over scalars and block normal modes.
    pub sup: f64,
    /// `9ν² max_𝒟 P(ρ)` with `P` the action polynomial of the scalar Λ's.
    pub bound: f64,
    pub pass: bool,
}

/// `Σρ_i² + 4Σ_{i<j} ρ_iρ_j`, the ν² part of every scalar Λ over 9.
fn action_polynomial(n: usize) -> RhoForm {
    let mut terms = Vec::new();
    for i in 0..n {
        terms.push((i, i, 1));
        for j in i + 1..n {
            terms.push((i, j, 4));
        }
    }
    RhoForm::from_terms(n, &terms)
}

/// The constant of A0 over the torus' domain: the action polynomial has
/// nonnegative coefficients, so its maximum sits at a corner.
pub fn a0_bound(eff: &EffectiveHamiltonian) -> f64 {
    let p = action_polynomial(eff.spec.dim());
    let max = eff.spec.domain.corners().iter().map(|c| p.eval(c)).fold(0.0, f64::max);
    9.0 * eff.spec.nu * eff.spec.nu * max
}

pub fn check_a0(eff: &EffectiveHamiltonian) -> A0Report {
    let mut sup = 0.0f64;
    for (&j, &l) in &eff.scalar_lambdas {
        sup = sup.max((l - (j * j) as f64).abs());
    }
    for b in &eff.blocks {
        let z = b.model.zeroth_order() as f64;
        for f in &b.normal_frequencies {
            sup = sup.max((f.re - z).abs());
        }
    }
    let bound = a0_bound(eff);
    A0Report { sup, bound, pass: sup.is_finite() && sup <= bound * (1.0 + 1e-12) }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum A1Kind {
    /// `|Λ_a| ≥ δ`
    Magnitude,
    /// `|Im Λ_a| ≥ δ` on hyperbolic modes
    Imaginary,
    /// `|Λ_a − Λ_b| ≥ δ` across clusters
    Difference,
    /// `|Λ_a + Λ_b| ≥ δ`
    Sum,
}

#[derive(Debug, Clone, PartialEq)]
pub struct A1Entry {
    pub kind: A1Kind,
    pub a: ModeLabel,
    pub b: Option<ModeLabel>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct A1Report {
    pub delta: f64,
    /// Smallest value found for each kind (absent when nothing to check).
    pub minima: Vec<A1Entry>,
    pub violations: Vec<A1Entry>,
    /// Whether the modes outside the band are covered analytically.
    pub tail_certified: bool,
    pub pass: bool,
}

struct Mode {
    label: ModeLabel,
    lambda: Complex64,
    cluster: i128,
    hyperbolic: bool,
}

/// Checks the four first-order conditions over the band of scalar modes
/// and all block normal modes. Clusters `[a]` group modes with the same
/// unperturbed frequency.
pub fn check_a1(eff: &EffectiveHamiltonian, delta: f64) -> A1Report {
    let mut modes: Vec<Mode> = eff
        .scalar_lambdas
        .iter()
        .map(|(&j, &l)| Mode { label: ModeLabel::Scalar(j), lambda: Complex64::new(l, 0.0), cluster: (j as i128).pow(2), hyperbolic: false })
        .collect();
    for m in block_modes(eff) {
        modes.push(Mode {
            label: m.label,
            lambda: eff.blocks[m.block].normal_frequencies[m.branch],
            cluster: m.zeroth,
            hyperbolic: m.hyperbolic,
        });
    }
    let mut minima: Vec<A1Entry> = Vec::new();
    let mut violations = Vec::new();
    let mut record = |e: A1Entry| {
        if e.value < delta {
            violations.push(e.clone());
        }
        match minima.iter_mut().find(|m| m.kind == e.kind) {
            Some(m) if m.value <= e.value => {}
            Some(m) => *m = e,
            None => minima.push(e),
        }
    };
    for (i, a) in modes.iter().enumerate() {
        record(A1Entry { kind: A1Kind::Magnitude, a: a.label, b: None, value: a.lambda.norm() });
        if a.hyperbolic {
            record(A1Entry { kind: A1Kind::Imaginary, a: a.label, b: None, value: a.lambda.im.abs() });
        }
        for b in &modes[i..] {
            record(A1Entry { kind: A1Kind::Sum, a: a.label, b: Some(b.label), value: (a.lambda + b.lambda).norm() });
            if a.cluster != b.cluster {
                let value = (a.lambda - b.lambda).norm();
                record(A1Entry { kind: A1Kind::Difference, a: a.label, b: Some(b.label), value });
            }
        }
    }
    // Scalars share their ν² shift, so two of them differ by exactly a² − b²,
    // at least 1 across clusters; beyond the band they also clear every
    // block frequency and every sum.
    let next = (eff.band + 1) as f64;
    let shift = lambda_poly(0, eff.spec.dim()).eval(&eff.spec.rho, eff.spec.nu);
    let block_max = modes.iter().filter(|m| matches!(m.label, ModeLabel::Block { .. })).fold(0.0f64, |x, m| x.max(m.lambda.norm()));
    let tail_certified = 1.0 >= delta && next * next + shift - block_max >= delta && next * next + shift >= delta;
    let pass = violations.is_empty() && tail_certified;
    A1Report { delta, minima, violations, tail_certified, pass }
}
