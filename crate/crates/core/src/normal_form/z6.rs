//! Coefficients of the resonant sextic part `Z₆ = Σ_ℛ a_j1 a_j2 a_j3 b_ℓ1 b_ℓ2 b_ℓ3`,
//! obtained by counting ordered index selections.
//!
//! This is the independent route to every frequency correction and block
//! coupling; the closed forms in the parent module are tested against it.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by the inherent methods when std is linked
use num_traits::Float;

use crate::resonance::is_resonant;
use crate::rho_form::{RhoForm, Q};
use crate::ModeIndex;

/// Coefficients of the action monomials `Π|a_i|^{2e_i}` of `Z₀,₆`.
#[derive(Debug, Clone, PartialEq)]
pub struct Z6Table {
    pub n: usize,
    pub action: BTreeMap<Vec<u32>, u64>,
    /// Ordered resonant selections of internal modes that are not action
    /// monomials (angle-dependent terms among internal modes).
    pub non_action: u64,
}

fn counts(sel: &[usize], n: usize) -> Vec<u32> {
    let mut c = vec![0u32; n];
    for &i in sel {
        c[i] += 1;
    }
    c
}

fn triples(n: usize) -> impl Iterator<Item = [usize; 3]> {
    (0..n * n * n).map(move |x| [x % n, x / n % n, x / (n * n)])
}

pub fn z6_internal_coefficients(internal: &[ModeIndex]) -> Z6Table {
    let n = internal.len();
    let mut action = BTreeMap::new();
    let mut non_action = 0;
    for j in triples(n) {
        for l in triples(n) {
            let jm = j.map(|i| internal[i]);
            let lm = l.map(|i| internal[i]);
            if !is_resonant(&jm, &lm) {
                continue;
            }
            let (cj, cl) = (counts(&j, n), counts(&l, n));
            if cj == cl {
                *action.entry(cj).or_insert(0) += 1;
            } else {
                non_action += 1;
            }
        }
    }
    Z6Table { n, action, non_action }
}

impl Z6Table {
    pub fn coefficient(&self, exps: &[u32]) -> u64 {
        self.action.get(exps).copied().unwrap_or(0)
    }

    /// The 1 / 9 / 36 pattern: `|a_i|⁶ → 1`, `|a_i|⁴|a_j|² → 9`, `|a_p a_q a_m|² → 36`.
    pub fn matches_pattern(&self) -> bool {
        self.non_action == 0
            && self.action.iter().all(|(e, &c)| {
                let mut e = e.clone();
                e.sort_unstable();
                let expect = match e.as_slice() {
                    [.., 0, 3] | [3] => 1,
                    [.., 0, 1, 2] | [1, 2] => 9,
                    [1, 1, 1] => 36,
                    _ => return false,
                };
                c == expect
            })
    }

    /// `Z₀,₆` evaluated at `|a_i|² = ρ_i`.
    pub fn eval(&self, rho: &[f64]) -> f64 {
        self.action
            .iter()
            .map(|(e, &c)| c as f64 * e.iter().zip(rho).map(|(&k, r)| r.powi(k as i32)).product::<f64>())
            .sum()
    }

    /// `∂Z₀,₆/∂ρ_i`: the ν²-part of Ω_i.
    pub fn omega_form(&self, i: usize) -> RhoForm {
        let mut f = RhoForm::zero(self.n);
        for (e, &c) in &self.action {
            if e[i] == 0 {
                continue;
            }
            let mut rest = e.clone();
            rest[i] -= 1;
            let vars: Vec<usize> = rest.iter().enumerate().flat_map(|(v, &k)| core::iter::repeat_n(v, k as usize)).collect();
            f.add_term(vars[0], vars[1], Q::from_integer((c * e[i] as u64) as i64));
        }
        f
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LinkKind {
    /// `ζ_x η_y`: x among the `a`'s, y among the `b`'s.
    ZetaEta,
    /// `ζ_x ζ_y` (and its conjugate `η_x η_y`), `x <= y`.
    ZetaZeta,
}

/// A quadratic external monomial of `Z₂,₆` with its internal dressing
/// `count · Π (νρ_i)^{amp_i/2} · e^{i phase·θ}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coupling {
    pub kind: LinkKind,
    pub x: ModeIndex,
    pub y: ModeIndex,
    /// +1 per internal `a`, −1 per internal `b`.
    pub phase: Vec<i64>,
    pub amp: Vec<u32>,
    pub count: u64,
}

impl Coupling {
    pub fn value(&self, rho: &[f64], nu: f64) -> f64 {
        self.count as f64 * self.amp.iter().zip(rho).map(|(&k, r)| (nu * r).sqrt().powi(k as i32)).product::<f64>()
    }

    /// Integer mass and momentum carried by the monomial; both vanish for
    /// every term of a gauge- and translation-invariant Hamiltonian.
    pub fn charges(&self, internal: &[ModeIndex]) -> (i64, i64) {
        let (ext_mass, ext_mom) = match self.kind {
            LinkKind::ZetaEta => (0, self.x - self.y),
            LinkKind::ZetaZeta => (2, self.x + self.y),
        };
        let mass = ext_mass + self.phase.iter().sum::<i64>();
        let mom = ext_mom + self.phase.iter().zip(internal).map(|(c, m)| c * m).sum::<i64>();
        (mass, mom)
    }
}

/// All monomials of `Z₆` with exactly two factors from `externals` and the
/// rest internal, grouped by shape. The `η η` conjugates are implied.
pub fn external_couplings(internal: &[ModeIndex], externals: &[ModeIndex]) -> Vec<Coupling> {
    let n = internal.len();
    let pool: Vec<ModeIndex> = internal.iter().chain(externals).copied().collect();
    let m = pool.len();
    let mut acc: BTreeMap<(LinkKind, ModeIndex, ModeIndex, Vec<i64>, Vec<u32>), u64> = BTreeMap::new();
    for j in triples(m) {
        let jm = j.map(|i| pool[i]);
        let ej = j.iter().filter(|&&i| i >= n).count();
        if ej == 0 || ej > 2 {
            continue;
        }
        for l in triples(m) {
            let el = l.iter().filter(|&&i| i >= n).count();
            if ej + el != 2 {
                continue;
            }
            let lm = l.map(|i| pool[i]);
            if !is_resonant(&jm, &lm) {
                continue;
            }
            let mut phase = vec![0i64; n];
            let mut amp = vec![0u32; n];
            for &i in j.iter().filter(|&&i| i < n) {
                phase[i] += 1;
                amp[i] += 1;
            }
            for &i in l.iter().filter(|&&i| i < n) {
                phase[i] -= 1;
                amp[i] += 1;
            }
            let ext_j: Vec<ModeIndex> = j.iter().filter(|&&i| i >= n).map(|&i| pool[i]).collect();
            let key = if ej == 1 {
                let y = l.iter().find(|&&i| i >= n).map(|&i| pool[i]).unwrap();
                (LinkKind::ZetaEta, ext_j[0], y, phase, amp)
            } else {
                (LinkKind::ZetaZeta, ext_j[0].min(ext_j[1]), ext_j[0].max(ext_j[1]), phase, amp)
            };
            *acc.entry(key).or_insert(0) += 1;
        }
    }
    acc.into_iter()
        .map(|((kind, x, y, phase, amp), count)| Coupling { kind, x, y, phase, amp, count })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normal_form::{lambda_shift_form, omega_form};
    use proptest::prelude::*;

    #[test]
    fn two_mode_coefficients() {
        let t = z6_internal_coefficients(&[0, 1]);
        assert_eq!(t.coefficient(&[3, 0]), 1);
        assert_eq!(t.coefficient(&[2, 1]), 9);
        assert_eq!(t.coefficient(&[1, 2]), 9);
        assert!(t.matches_pattern());
        let t = z6_internal_coefficients(&[-3, 10, -6]);
        assert_eq!(t.coefficient(&[1, 1, 1]), 36);
        assert_eq!(t.coefficient(&[0, 2, 1]), 9);
        assert!(t.matches_pattern());
    }

    #[test]
    fn couplings_of_the_b_pair() {
        let cs = external_couplings(&[-3, 10, -6], &[1, 9]);
        let zz: Vec<_> = cs.iter().filter(|c| c.kind == LinkKind::ZetaZeta).collect();
        assert_eq!(zz.len(), 1);
        // a_s a_t a_m b_p² b_q: 3! orderings of (s, t, m) times 3 of (p, p, q)
        assert_eq!(zz[0].count, 18);
        assert_eq!(zz[0].phase, vec![-2, -1, 1]);
        for c in &cs {
            assert_eq!(c.charges(&[-3, 10, -6]), (0, 0));
        }
    }

    proptest! {
        #[test]
        fn counted_frequencies_match_closed_forms(a in -12i64..12, b in -12i64..12, c in -12i64..12, three in any::<bool>()) {
            let internal: Vec<i64> = if three { vec![a, b, c] } else { vec![a, b] };
            let mut sorted = internal.clone();
            sorted.sort_unstable();
            sorted.dedup();
            prop_assume!(sorted.len() == internal.len());
            let t = z6_internal_coefficients(&internal);
            prop_assert!(t.matches_pattern());
            for i in 0..internal.len() {
                prop_assert_eq!(t.omega_form(i), omega_form(internal.len(), i));
            }
        }

        #[test]
        fn counted_external_shift_matches(a in -12i64..12, b in -12i64..12, c in -12i64..12, x in -40i64..40) {
            let internal = [a, b, c];
            prop_assume!(a != b && b != c && a != c && !internal.contains(&x));
            let cs = external_couplings(&internal, &[x]);
            let mut diag = RhoForm::zero(3);
            for cp in cs.iter().filter(|cp| cp.kind == LinkKind::ZetaEta && cp.phase.iter().all(|&p| p == 0)) {
                let vars: Vec<usize> = cp.amp.iter().enumerate().flat_map(|(v, &k)| core::iter::repeat_n(v, k as usize / 2)).collect();
                diag.add_term(vars[0], vars[1], Q::from_integer(cp.count as i64));
            }
            prop_assert_eq!(diag, lambda_shift_form(3));
        }
    }
}
