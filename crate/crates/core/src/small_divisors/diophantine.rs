//! Exact lattice systems: rational elimination for the linear ones and a
//! perfect-square search for the conic ones.

use alloc::vec;
use alloc::vec::Vec;

use num_rational::Ratio;
use num_traits::Zero;

use crate::arith::exact_sqrt;
use crate::error::{Error, Result};
use crate::ModeIndex;

pub type R128 = Ratio<i128>;

/// Outcome of [`exact_linear_solve`].
#[derive(Debug, Clone, PartialEq)]
pub enum LinearSolution {
    /// Unique rational solution. `non_integral` names the first component
    /// that is not an integer, if any.
    Unique { k: Vec<R128>, non_integral: Option<(usize, R128)> },
    /// The rows reduce to `0 = c` with `c != 0`; `row` is that residual.
    Inconsistent { residual: R128 },
    /// Consistent but rank deficient: one particular solution (free
    /// variables set to zero) and the free variable indices.
    Underdetermined { particular: Vec<R128>, free: Vec<usize> },
}

impl LinearSolution {
    pub fn integer_solution(&self) -> Option<Vec<i64>> {
        match self {
            LinearSolution::Unique { k, non_integral: None } => Some(k.iter().map(|x| x.to_integer() as i64).collect()),
            _ => None,
        }
    }
}

/// Solves `Σ_j a_ij k_j + c_i = 0`, each row given as `[a_i1, …, a_in, c_i]`.
pub fn exact_linear_solve(rows: &[Vec<i64>]) -> Result<LinearSolution> {
    let n = rows.first().map(|r| r.len()).ok_or(Error::EmptyRange)?.checked_sub(1).ok_or(Error::EmptyRange)?;
    if rows.iter().any(|r| r.len() != n + 1) {
        return Err(Error::PreconditionViolated("rows of unequal length"));
    }
    // Augmented matrix [A | −c].
    let mut m: Vec<Vec<R128>> = rows
        .iter()
        .map(|r| {
            let mut v: Vec<R128> = r[..n].iter().map(|&x| R128::from_integer(x as i128)).collect();
            v.push(R128::from_integer(-(r[n] as i128)));
            v
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..m.len()).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x *= inv;
        }
        for i in 0..m.len() {
            if i != row && !m[i][col].is_zero() {
                let f = m[i][col];
                let pivot_row = m[row].clone();
                for (x, p) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= f * p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if let Some(r) = m[row..].iter().find(|r| !r[n].is_zero()) {
        return Ok(LinearSolution::Inconsistent { residual: r[n] });
    }
    let mut k = vec![R128::zero(); n];
    for (r, &col) in pivots.iter().enumerate() {
        k[col] = m[r][n];
    }
    if pivots.len() < n {
        let free = (0..n).filter(|c| !pivots.contains(c)).collect();
        return Ok(LinearSolution::Underdetermined { particular: k, free });
    }
    let non_integral = k.iter().enumerate().find(|(_, x)| !x.is_integer()).map(|(i, x)| (i, *x));
    Ok(LinearSolution::Unique { k, non_integral })
}

/// Conservation and resonance conditions for a divisor with one free
/// external mode `j`:
///
/// ```text
/// Σ k_i + mass_offset = 0
/// Σ m_i k_i + momentum_offset + momentum_sign · j = 0
/// Σ m_i² k_i + energy_offset + energy_sign · j² = 0
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConicSystem {
    pub mass_offset: i64,
    pub momentum_coeffs: Vec<i64>,
    pub momentum_offset: i64,
    pub momentum_sign: i64,
    pub energy_coeffs: Vec<i64>,
    pub energy_offset: i64,
    pub energy_sign: i64,
    pub unknown_mode: bool,
}

impl ConicSystem {
    pub fn new(
        internal: &[ModeIndex],
        mass_offset: i64,
        (momentum_offset, momentum_sign): (i64, i64),
        (energy_offset, energy_sign): (i64, i64),
    ) -> Self {
        Self {
            mass_offset,
            momentum_coeffs: internal.to_vec(),
            momentum_offset,
            momentum_sign,
            energy_coeffs: internal.iter().map(|m| m * m).collect(),
            energy_offset,
            energy_sign,
            unknown_mode: true,
        }
    }

    /// `Ω·k + σ_a Λ_a + σ_j Λ_j` with `a` of charges `(mass, momentum)` and
    /// unperturbed frequency `zeroth`.
    pub fn for_divisor(internal: &[ModeIndex], sign_a: i64, a: (i64, i64, i64), sign_j: i64) -> Self {
        Self::new(internal, sign_a * a.0 + sign_j, (sign_a * a.1, sign_j), (sign_a * a.2, sign_j))
    }

    /// The literal system quoted for set 𝒜 of the `(−3, 10, −6)` torus:
    /// `Σk = 0`, `−3k₁ + 10k₂ − 6k₃ + 2 − j = 0`, `9k₁ + 100k₂ + 36k₃ + 4 − j² = 0`.
    pub fn set_a_literal() -> Self {
        Self::new(&[-3, 10, -6], 0, (2, -1), (4, -1))
    }

    /// Checks a candidate against all three equations.
    pub fn satisfied_by(&self, k: &[i64], j: i64) -> bool {
        let dot = |c: &[i64]| c.iter().zip(k).map(|(a, b)| (*a as i128) * (*b as i128)).sum::<i128>();
        let j = j as i128;
        k.iter().map(|&x| x as i128).sum::<i128>() + self.mass_offset as i128 == 0
            && dot(&self.momentum_coeffs) + self.momentum_offset as i128 + self.momentum_sign as i128 * j == 0
            && dot(&self.energy_coeffs) + self.energy_offset as i128 + self.energy_sign as i128 * j * j == 0
    }
}

/// A lattice point of a [`ConicSystem`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConicSolution {
    pub k: Vec<i64>,
    pub j: i64,
}

impl ConicSolution {
    pub fn norm2(&self) -> i128 {
        self.k.iter().map(|&x| (x as i128).pow(2)).sum()
    }
}

/// All nonzero integer solutions with `|k₂| <= param_range`, sorted by |k|
/// (`k₃` is unrestricted except on lines lying entirely in the solution set).
/// `k₁` is eliminated by the mass equation and `j` by the momentum
/// equation; what remains is quadratic in `k₃` for each `k₂`.
pub fn conic_search(system: &ConicSystem, param_range: i64) -> Result<Vec<ConicSolution>> {
    if param_range <= 0 {
        return Err(Error::EmptyRange);
    }
    let n = system.momentum_coeffs.len();
    if !system.unknown_mode || !(2..=3).contains(&n) || system.momentum_sign.abs() != 1 || system.energy_sign == 0 {
        return Err(Error::PreconditionViolated("conic system needs a free mode with unit momentum weight"));
    }
    let (m, e) = (&system.momentum_coeffs, &system.energy_coeffs);
    let (mo, s) = (system.momentum_offset as i128, system.momentum_sign as i128);
    let (eo, es) = (system.energy_offset as i128, system.energy_sign as i128);
    let c0 = -(system.mass_offset as i128);
    let mut out = Vec::new();
    let mut push = |k: Vec<i128>| {
        if k.iter().all(|&x| x == 0) {
            return;
        }
        // j = −(m·k + mo)/s with s = ±1
        let j = -(k.iter().zip(m).map(|(a, b)| a * *b as i128).sum::<i128>() + mo) * s;
        let sol = ConicSolution { k: k.iter().map(|&x| x as i64).collect(), j: j as i64 };
        debug_assert!(system.satisfied_by(&sol.k, sol.j));
        out.push(sol);
    };
    for k2 in -(param_range as i128)..=param_range as i128 {
        if n == 2 {
            let k = vec![c0 - k2, k2];
            let j = -(k[0] * m[0] as i128 + k[1] * m[1] as i128 + mo) * s;
            if k[0] * e[0] as i128 + k[1] * e[1] as i128 + eo + es * j * j == 0 {
                push(k);
            }
            continue;
        }
        // k1 = c0 − k2 − k3;  j = u + v k3;  energy = A + B k3 + es (u + v k3)²
        let k1_const = c0 - k2;
        let (m0, m1, m2) = (m[0] as i128, m[1] as i128, m[2] as i128);
        let (e0, e1, e2) = (e[0] as i128, e[1] as i128, e[2] as i128);
        let u = -(m0 * k1_const + m1 * k2 + mo) * s;
        let v = -(m2 - m0) * s;
        let big_a = e0 * k1_const + e1 * k2 + eo;
        let big_b = e2 - e0;
        let qa = es * v * v;
        let qb = big_b + 2 * es * u * v;
        let qc = big_a + es * u * u;
        let mut roots = Vec::new();
        if qa == 0 {
            if qb != 0 && qc % qb == 0 {
                roots.push(-qc / qb);
            } else if qb == 0 && qc == 0 {
                // the whole line solves the system; report it inside the same range
                roots.extend(-(param_range as i128)..=param_range as i128);
            }
        } else {
            let disc = qb * qb - 4 * qa * qc;
            if let Some(r) = exact_sqrt(disc) {
                for num in [-qb + r, -qb - r] {
                    if num % (2 * qa) == 0 {
                        roots.push(num / (2 * qa));
                    }
                }
                roots.dedup();
            }
        }
        for k3 in roots {
            push(vec![k1_const - k3, k2, k3]);
        }
    }
    out.sort_by(|a, b| a.norm2().cmp(&b.norm2()).then_with(|| a.k.cmp(&b.k)));
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i128, d: i128) -> R128 {
        R128::new(n, d)
    }

    #[test]
    fn quoted_b_system_has_rational_solution_only() {
        let sol = exact_linear_solve(&[vec![1, 1, 1, 2], vec![-3, 10, -6, 2], vec![9, 100, 36, 2]]).unwrap();
        let LinearSolution::Unique { k, non_integral } = sol else { panic!("{sol:?}") };
        assert_eq!(k[1], r(-7, 26));
        assert!(non_integral.is_some());
        // substitute back
        let rows = [[1, 1, 1, 2], [-3, 10, -6, 2], [9, 100, 36, 2]];
        for row in rows {
            let v: R128 = (0..3).map(|i| k[i] * R128::from_integer(row[i])).sum::<R128>() + R128::from_integer(row[3]);
            assert!(v.is_zero());
        }
    }

    #[test]
    fn quoted_a_system_has_no_integer_solution() {
        let sol = exact_linear_solve(&[vec![1, 1, 1, 1], vec![-3, 10, -6, 2], vec![9, 100, 36, 4]]).unwrap();
        assert!(sol.integer_solution().is_none());
    }

    #[test]
    fn trivial_and_degenerate_linear_systems() {
        let id = exact_linear_solve(&[vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0]]).unwrap();
        assert_eq!(id.integer_solution(), Some(vec![0, 0, 0]));
        let bad = exact_linear_solve(&[vec![1, 1, 1], vec![2, 2, 3]]).unwrap();
        assert!(matches!(bad, LinearSolution::Inconsistent { .. }));
        let under = exact_linear_solve(&[vec![1, 1, -2]]).unwrap();
        assert!(matches!(under, LinearSolution::Underdetermined { ref free, .. } if free == &vec![1]));
    }

    #[test]
    fn extremal_solution_of_quoted_conic() {
        let sys = ConicSystem::set_a_literal();
        let sols = conic_search(&sys, 1000).unwrap();
        assert_eq!(sols[0], ConicSolution { k: vec![-975, 195, 780], j: 197 });
        assert_eq!(91 * 195 + 27 * 780 + 4, 197 * 197);
        for s in &sols {
            assert!(sys.satisfied_by(&s.k, s.j));
        }
        assert!(conic_search(&sys, 100).unwrap().is_empty());
        assert_eq!(conic_search(&sys, 0), Err(Error::EmptyRange));
    }

    #[test]
    fn degenerate_conic_drops_zero() {
        let sys = ConicSystem::new(&[1, 2, 3], 0, (0, 1), (0, 1));
        let sols = conic_search(&sys, 5).unwrap();
        assert!(sols.iter().all(|s| s.k.iter().any(|&x| x != 0)));
        for s in &sols {
            assert!(sys.satisfied_by(&s.k, s.j));
        }
    }

    proptest! {
        #[test]
        fn conic_matches_brute_force(
            m in proptest::collection::vec(-6i64..=6, 3),
            mass in -2i64..=2, mo in -5i64..=5, eo in -10i64..=10, s in prop_oneof![Just(-1i64), Just(1)],
        ) {
            let sys = ConicSystem::new(&m, mass, (mo, s), (eo, s));
            let range = 6;
            let found = conic_search(&sys, range).unwrap();
            for sol in &found {
                prop_assert!(sys.satisfied_by(&sol.k, sol.j));
            }
            // brute force over a box inside the searched strip
            for k2 in -range..=range {
                for k3 in -range..=range {
                    let k = [-mass - k2 - k3, k2, k3];
                    if k == [0, 0, 0] { continue; }
                    let j = -(m[0] * k[0] + m[1] * k[1] + m[2] * k[2] + mo) * s;
                    if sys.satisfied_by(&k, j) {
                        prop_assert!(found.iter().any(|f| f.k == k), "missing {:?}", k);
                    }
                }
            }
        }

        #[test]
        fn linear_solution_substitutes_back(a in proptest::collection::vec(-9i64..=9, 12)) {
            let rows: Vec<Vec<i64>> = a.chunks(4).map(|c| c.to_vec()).collect();
            if let LinearSolution::Unique { k, .. } = exact_linear_solve(&rows).unwrap() {
                for row in &rows {
                    let v: R128 = (0..3).map(|i| k[i] * R128::from_integer(row[i] as i128)).sum::<R128>()
                        + R128::from_integer(row[3] as i128);
                    prop_assert!(v.is_zero());
                }
            }
        }
    }
}
