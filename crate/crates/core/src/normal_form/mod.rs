//! Effective quadratic Hamiltonians around two- and three-dimensional tori.
//!
//! Frequencies and external Λ's are quadratic forms in ρ (see
//! [`crate::rho_form`]). The closed forms below are checked in the tests
//! against coefficients obtained by counting ordered resonant selections in
//! [`z6`].

mod blocks;
mod classify;
mod spectrum;
pub mod z6;

use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by the inherent methods when std is linked
use num_traits::Float;

pub use blocks::{
    block_set_a, block_set_b, block_set_c, block_set_e, block_two_mode_case2, BlockKind, BlockModel,
    ClosedForm, FrameMatrices, SpectralBlock,
};
pub use classify::{
    build_blocks, classify_blocks, classify_torus, default_band, effective_hamiltonian, BlockClass, Classification,
    EffectiveHamiltonian, Verdict,
};
pub use spectrum::{classify_spectrum, generic_block_spectrum, hessian_from_frame, standard_symplectic};

use crate::rho_form::{NuPoly, RhoForm};
use crate::torus::TorusSpec;
use crate::ModeIndex;

/// Internal-mode frequencies Ω(ρ).
#[derive(Debug, Clone, PartialEq)]
pub struct Frequencies {
    pub omega: Vec<f64>,
}

/// The ν²-part of Ω_i as a form: `3(ρ_i² + 3Σρ_j² + 6Σρ_iρ_j + 12Σρ_jρ_k)`
/// with `j, k ≠ i`.
pub fn omega_form(n: usize, i: usize) -> RhoForm {
    let mut terms = Vec::new();
    for a in 0..n {
        for b in a..n {
            let c = match (a == b, a == i || b == i) {
                (true, true) => 3,
                (true, false) => 9,
                (false, true) => 18,
                (false, false) => 36,
            };
            terms.push((a, b, c));
        }
    }
    RhoForm::from_terms(n, &terms)
}

pub fn omega_polys(internal: &[ModeIndex]) -> Vec<NuPoly> {
    let n = internal.len();
    (0..n)
        .map(|i| NuPoly::new((internal[i] as i128).pow(2), omega_form(n, i)))
        .collect()
}

fn omega(spec: &TorusSpec) -> Frequencies {
    Frequencies { omega: omega_polys(&spec.internal).iter().map(|p| p.eval(&spec.rho, spec.nu)).collect() }
}

pub fn omega_two_mode(spec: &TorusSpec) -> Frequencies {
    assert_eq!(spec.dim(), 2, "two internal modes expected");
    omega(spec)
}

pub fn omega_three_mode(spec: &TorusSpec) -> Frequencies {
    assert_eq!(spec.dim(), 3, "three internal modes expected");
    omega(spec)
}

/// `9(Σρ_i² + 4Σ_{i<j}ρ_iρ_j)`, the shift shared by every uncoupled external mode.
pub fn lambda_shift_form(n: usize) -> RhoForm {
    let mut terms = Vec::new();
    for a in 0..n {
        for b in a..n {
            terms.push((a, b, if a == b { 9 } else { 36 }));
        }
    }
    RhoForm::from_terms(n, &terms)
}

pub fn lambda_poly(j: ModeIndex, n: usize) -> NuPoly {
    NuPoly::new((j as i128).pow(2), lambda_shift_form(n))
}

pub fn lambda_external(j: ModeIndex, spec: &TorusSpec) -> f64 {
    debug_assert!(!spec.is_internal(j));
    lambda_poly(j, spec.dim()).eval(&spec.rho, spec.nu)
}

/// The constant of the two-mode normal form,
/// `ν³(ρ1³ + ρ2³ + 9ρ1²ρ2 + 9ρ2²ρ1) + 9ν(p²ρ1 + q²ρ2)`; three-mode tori use
/// `ν³ Z₀,₆(ρ) + ν Σ i²ρ_i`. Metadata only.
pub fn normal_form_constant(spec: &TorusSpec) -> f64 {
    let (nu, r) = (spec.nu, &spec.rho);
    if spec.dim() == 2 {
        let (p, q) = (spec.internal[0] as f64, spec.internal[1] as f64);
        nu.powi(3) * (r[0].powi(3) + r[1].powi(3) + 9.0 * r[0] * r[0] * r[1] + 9.0 * r[1] * r[1] * r[0])
            + 9.0 * (nu * p * p * r[0] + nu * q * q * r[1])
    } else {
        let table = z6::z6_internal_coefficients(&spec.internal);
        let linear: f64 = spec.internal.iter().zip(r).map(|(i, ri)| (i * i) as f64 * ri).sum();
        nu.powi(3) * table.eval(r) + nu * linear
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()))
    }

    #[test]
    fn omega_examples() {
        let s = TorusSpec::new(vec![0, 1], vec![1.0, 1.0], 0.0).unwrap();
        assert_eq!(omega_two_mode(&s).omega, vec![0.0, 1.0]);
        let s = TorusSpec::new(vec![0, 1], vec![1.0, 1.0], 0.1).unwrap();
        let w = omega_two_mode(&s).omega;
        assert!(close(w[0], 0.3) && close(w[1], 1.3));
        let s = TorusSpec::unstable_three_torus(0.1);
        let w = omega_three_mode(&s).omega;
        assert!(close(w[0], 23.34), "{w:?}");
        let s0 = TorusSpec::unstable_three_torus(0.0);
        assert_eq!(omega_three_mode(&s0).omega, vec![9.0, 100.0, 36.0]);
    }

    #[test]
    fn omega_two_mode_closed_form() {
        // p² + 3ν²(ρ1² + 3ρ2² + 6ρ1ρ2)
        let f = omega_form(2, 0);
        assert_eq!(f, RhoForm::from_terms(2, &[(0, 0, 3), (1, 1, 9), (0, 1, 18)]));
        let g = omega_form(3, 1);
        // q² + 3ν²(ρ2² + 3ρ1² + 3ρ3² + 6ρ1ρ2 + 6ρ2ρ3 + 12ρ1ρ3)
        assert_eq!(
            g,
            RhoForm::from_terms(3, &[(1, 1, 3), (0, 0, 9), (2, 2, 9), (0, 1, 18), (1, 2, 18), (0, 2, 36)])
        );
    }

    #[test]
    fn omega_permutation_equivariance() {
        let a = TorusSpec::new(vec![-3, 10, -6], vec![1.2, 1.7, 1.4], 0.07).unwrap();
        let b = TorusSpec::new(vec![10, -6, -3], vec![1.7, 1.4, 1.2], 0.07).unwrap();
        let (wa, wb) = (omega_three_mode(&a).omega, omega_three_mode(&b).omega);
        assert!(close(wa[0], wb[2]) && close(wa[1], wb[0]) && close(wa[2], wb[1]));
        let c = TorusSpec::new(vec![2, 5], vec![1.1, 1.9], 0.1).unwrap();
        let d = TorusSpec::new(vec![5, 2], vec![1.9, 1.1], 0.1).unwrap();
        let (wc, wd) = (omega_two_mode(&c).omega, omega_two_mode(&d).omega);
        assert!(close(wc[0], wd[1]) && close(wc[1], wd[0]));
    }

    #[test]
    fn lambda_examples() {
        let s = TorusSpec::new(vec![0, 1], vec![1.0, 1.0], 0.1).unwrap();
        assert!(close(lambda_external(3, &s), 9.54));
        let s = TorusSpec::unstable_three_torus(0.1);
        assert!(close(lambda_external(5, &s), 43.18));
        let s = TorusSpec::unstable_three_torus(0.0);
        assert_eq!(lambda_external(7, &s), 49.0);
    }
}
