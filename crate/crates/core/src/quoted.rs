//! Published closed forms that disagree with what the exact computation gives.
//!
//! Nothing here changes a computed result: each check compares a quoted value
//! with the computed one and returns a note when they differ.

use alloc::vec::Vec;

use crate::normal_form::{ClosedForm, EffectiveHamiltonian};
use crate::resonance::{ExternalPair, ResonanceCatalog};
use crate::ModeIndex;

/// Tolerance under which a closed form counts as agreeing with the spectrum.
pub const AGREEMENT: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub enum Discrepancy {
    /// A quoted resonance set differs from the exhaustive enumeration.
    SetMembership { set: char, internal: Vec<ModeIndex>, quoted: Vec<(ModeIndex, ModeIndex)>, computed: Vec<(ModeIndex, ModeIndex)> },
    /// The quoted two-mode rotation angle does not diagonalize the block.
    TwoModeRotation { modes: Vec<ModeIndex>, mismatch: f64 },
    /// The quoted ℰ diagonal omits `j²` (it is the rotating-frame value) and the
    /// quoted coupling is 1/9 of the counted one.
    SetEClosedForm { mode: ModeIndex, coupling_ratio: f64, mismatch: f64 },
}

impl Discrepancy {
    pub fn code(&self) -> &'static str {
        match self {
            Discrepancy::SetMembership { .. } => "set-membership",
            Discrepancy::TwoModeRotation { .. } => "two-mode-rotation",
            Discrepancy::SetEClosedForm { .. } => "set-e-closed-form",
        }
    }
}

type Quoted = (&'static [ModeIndex], [&'static [(ModeIndex, ModeIndex)]; 4]);

/// Catalogs stated in closed form in the literature, as unordered pairs.
const QUOTED_CATALOGS: &[Quoted] = &[(&[-6, -3, 10], [&[(-14, 2)], &[(1, 9)], &[], &[]])];

fn unordered(set: &[ExternalPair]) -> Vec<(ModeIndex, ModeIndex)> {
    let mut v: Vec<_> = set.iter().map(|p| (p.s.min(p.t), p.s.max(p.t))).collect();
    v.sort_unstable();
    v
}

/// Compare a computed catalog with any quoted catalog for the same torus.
pub fn catalog_discrepancies(cat: &ResonanceCatalog) -> Vec<Discrepancy> {
    let mut key = cat.internal.clone();
    key.sort_unstable();
    let mut out = Vec::new();
    for (internal, sets) in QUOTED_CATALOGS {
        if key[..] != internal[..] {
            continue;
        }
        for ((name, computed), quoted) in ['A', 'B', 'C', 'E'].into_iter().zip([&cat.a, &cat.b, &cat.c, &cat.e]).zip(sets) {
            let computed = unordered(computed);
            let mut quoted = quoted.to_vec();
            quoted.sort_unstable();
            if computed != quoted {
                out.push(Discrepancy::SetMembership { set: name, internal: cat.internal.clone(), quoted, computed });
            }
        }
    }
    out
}

/// Notes for every block whose quoted closed form disagrees with its spectrum.
pub fn block_discrepancies(eff: &EffectiveHamiltonian) -> Vec<Discrepancy> {
    let mut out = Vec::new();
    for b in &eff.blocks {
        match &b.transform {
            ClosedForm::TwoMode { lambda_s, lambda_t, mismatch, .. } => {
                let scale = lambda_s.abs().max(lambda_t.abs()).max(1e-300);
                if mismatch / scale > AGREEMENT {
                    out.push(Discrepancy::TwoModeRotation { modes: b.modes.clone(), mismatch: *mismatch });
                }
            }
            ClosedForm::SetE { coupling_quoted, coupling_counted, mismatch, .. } => {
                out.push(Discrepancy::SetEClosedForm {
                    mode: b.modes[0],
                    coupling_ratio: coupling_counted / coupling_quoted,
                    mismatch: *mismatch,
                });
            }
            ClosedForm::SetB { .. } | ClosedForm::Hermitian { .. } => {}
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normal_form::{block_set_e, classify_torus, effective_hamiltonian, Frequencies};
    use crate::resonance::enumerate_sets;
    use crate::{RhoBox, TorusSpec};
    use alloc::vec;

    #[test]
    fn set_a_is_flagged_and_b_agrees() {
        let cat = enumerate_sets(&[-3, 10, -6], 48).unwrap();
        let notes = catalog_discrepancies(&cat);
        assert_eq!(
            notes,
            vec![Discrepancy::SetMembership {
                set: 'A',
                internal: vec![-3, 10, -6],
                quoted: vec![(-14, 2)],
                computed: vec![(-14, 18)]
            }]
        );
        assert!(catalog_discrepancies(&enumerate_sets(&[0, 2], 40).unwrap()).is_empty());
    }

    #[test]
    fn two_mode_rotation_is_flagged() {
        let spec = TorusSpec::with_domain(vec![0, 2], vec![1.5, 1.2], 0.05, RhoBox::cube(2, 1.0, 2.0)).unwrap();
        let cat = enumerate_sets(&[0, 2], 40).unwrap();
        let (eff, _) = classify_torus(&spec, &cat).unwrap();
        let notes = block_discrepancies(&eff);
        assert_eq!(notes.len(), 1);
        assert_eq!(notes[0].code(), "two-mode-rotation");
    }

    #[test]
    fn set_e_coupling_ratio_is_nine() {
        let spec = TorusSpec::with_domain(vec![-8, -6, 0], vec![1.5, 1.5, 1.5], 0.05, RhoBox::cube(3, 1.0, 2.0)).unwrap();
        let cat = enumerate_sets(&[-8, -6, 0], 200).unwrap();
        // the full torus shares modes between pairs, so check the ℰ block on its own
        let mut eff = effective_hamiltonian(&spec, &cat, 0).unwrap_or_else(|_| EffectiveHamiltonian {
            spec: spec.clone(),
            constant: 0.0,
            freqs: Frequencies { omega: vec![] },
            scalar_lambdas: Default::default(),
            blocks: vec![],
            band: 0,
        });
        eff.blocks = vec![block_set_e(&spec, &cat.e[0]).unwrap()];
        let notes = block_discrepancies(&eff);
        assert_eq!(notes.len(), 1);
        let Discrepancy::SetEClosedForm { coupling_ratio, .. } = notes[0] else { panic!() };
        assert!((coupling_ratio - 9.0).abs() < 1e-12);
    }
}
