use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::ModeIndex;

/// Axis-aligned box of action parameters ρ.
#[derive(Debug, Clone, PartialEq)]
pub struct RhoBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl RhoBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        assert_eq!(lo.len(), hi.len());
        assert!(lo.iter().zip(&hi).all(|(a, b)| a <= b), "empty box");
        Self { lo, hi }
    }

    /// `[c_i − eps, c_i + eps]` around `center`.
    pub fn around(center: &[f64], eps: f64) -> Self {
        Self::new(
            center.iter().map(|c| c - eps).collect(),
            center.iter().map(|c| c + eps).collect(),
        )
    }

    pub fn cube(dim: usize, lo: f64, hi: f64) -> Self {
        Self::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn contains(&self, rho: &[f64]) -> bool {
        rho.len() == self.dim()
            && rho.iter().zip(self.lo.iter().zip(&self.hi)).all(|(r, (a, b))| *a <= *r && r <= b)
    }

    pub fn center(&self) -> Vec<f64> {
        self.lo.iter().zip(&self.hi).map(|(a, b)| 0.5 * (a + b)).collect()
    }

    pub fn corners(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        (0..1usize << n)
            .map(|mask| (0..n).map(|i| if mask >> i & 1 == 1 { self.hi[i] } else { self.lo[i] }).collect())
            .collect()
    }

    /// Tensor grid with `res` points per axis including both endpoints
    /// (`res = 1` gives the center).
    pub fn grid(&self, res: usize) -> Vec<Vec<f64>> {
        assert!(res >= 1);
        let n = self.dim();
        let axis = |i: usize, k: usize| {
            if res == 1 {
                0.5 * (self.lo[i] + self.hi[i])
            } else {
                self.lo[i] + (self.hi[i] - self.lo[i]) * k as f64 / (res - 1) as f64
            }
        };
        let total = res.pow(n as u32);
        (0..total)
            .map(|mut idx| {
                let mut p = vec![0.0; n];
                for (i, slot) in p.iter_mut().enumerate() {
                    *slot = axis(i, idx % res);
                    idx /= res;
                }
                p
            })
            .collect()
    }
}

/// An invariant-torus specification: internal modes, actions `|a_i|² = νρ_i`
/// and the parameter domain.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusSpec {
    pub internal: Vec<ModeIndex>,
    pub rho: Vec<f64>,
    pub nu: f64,
    pub domain: RhoBox,
}

impl TorusSpec {
    /// Domain defaults to `[1,2]ⁿ` when it contains ρ, else the single point ρ.
    pub fn new(internal: Vec<ModeIndex>, rho: Vec<f64>, nu: f64) -> Result<Self> {
        let cube = RhoBox::cube(rho.len(), 1.0, 2.0);
        let domain = if cube.contains(&rho) { cube } else { RhoBox::new(rho.clone(), rho.clone()) };
        Self::with_domain(internal, rho, nu, domain)
    }

    /// ν = 0 is accepted as the decoupled limit.
    pub fn with_domain(internal: Vec<ModeIndex>, rho: Vec<f64>, nu: f64, domain: RhoBox) -> Result<Self> {
        if !(2..=3).contains(&internal.len()) {
            return Err(Error::InvalidSpec("two or three internal modes required"));
        }
        for (i, a) in internal.iter().enumerate() {
            if internal[..i].contains(a) {
                return Err(Error::InvalidSpec("internal modes must be distinct"));
            }
        }
        if rho.len() != internal.len() {
            return Err(Error::InvalidSpec("rho length must match the internal modes"));
        }
        if rho.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
            return Err(Error::InvalidSpec("rho must be strictly positive"));
        }
        if !(0.0..1.0).contains(&nu) {
            return Err(Error::InvalidSpec("nu must lie in [0, 1)"));
        }
        if !domain.contains(&rho) {
            return Err(Error::InvalidSpec("domain must contain rho"));
        }
        Ok(Self { internal, rho, nu, domain })
    }

    pub fn dim(&self) -> usize {
        self.internal.len()
    }

    pub fn is_internal(&self, j: ModeIndex) -> bool {
        self.internal.contains(&j)
    }

    /// Same torus at different actions (domain kept, widened if needed).
    pub fn at_rho(&self, rho: &[f64]) -> Self {
        let mut s = self.clone();
        s.rho = rho.to_vec();
        if !s.domain.contains(rho) {
            s.domain = RhoBox::new(rho.to_vec(), rho.to_vec());
        }
        s
    }

    /// The unstable three-torus `(−3, 10, −6)` at `ρ = (2, 1, 9)` on the box
    /// of half-width `10⁻²` around it.
    pub fn unstable_three_torus(nu: f64) -> Self {
        let rho = vec![2.0, 1.0, 9.0];
        Self::with_domain(vec![-3, 10, -6], rho.clone(), nu, RhoBox::around(&rho, 1e-2))
            .expect("valid preset")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_and_corners() {
        let b = RhoBox::cube(2, 1.0, 2.0);
        let g = b.grid(3);
        assert_eq!(g.len(), 9);
        assert!(g.contains(&vec![1.5, 1.0]));
        assert_eq!(b.corners().len(), 4);
        assert_eq!(b.grid(1), vec![vec![1.5, 1.5]]);
    }

    #[test]
    fn spec_validation() {
        assert!(TorusSpec::new(vec![0, 1], vec![1.0, 1.0], 0.1).is_ok());
        assert!(TorusSpec::new(vec![0, 0], vec![1.0, 1.0], 0.1).is_err());
        assert!(TorusSpec::new(vec![0, 1], vec![1.0], 0.1).is_err());
        assert!(TorusSpec::new(vec![0, 1], vec![1.0, -1.0], 0.1).is_err());
        assert!(TorusSpec::new(vec![0, 1], vec![1.0, 1.0], 1.5).is_err());
        let s = TorusSpec::new(vec![0, 1], vec![5.0, 1.0], 0.1).unwrap();
        assert!(s.domain.contains(&[5.0, 1.0]));
        let u = TorusSpec::unstable_three_torus(0.01);
        assert!(u.domain.contains(&[2.01, 0.99, 8.99]));
    }
}
