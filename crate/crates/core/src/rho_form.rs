//! Quadratic forms in the action parameters with exact rational coefficients.
//!
//! Every O(ν²) frequency correction in the normal form is such a form, so
//! identities like "a = 0 at ρ = (2,1,9)" can be checked exactly.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

pub type Q = Ratio<i64>;

/// `Σ_{i≤j} c_ij ρ_i ρ_j` in `n ≤ 3` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhoForm {
    n: usize,
    /// Row-major upper triangle, `c[i*n + j]` for `i <= j`.
    c: Vec<Q>,
}

impl RhoForm {
    pub fn zero(n: usize) -> Self {
        Self { n, c: vec![Q::zero(); n * n] }
    }

    /// Builds from `(i, j, coefficient)` triples (0-based, order irrelevant).
    pub fn from_terms(n: usize, terms: &[(usize, usize, i64)]) -> Self {
        let mut f = Self::zero(n);
        for &(i, j, v) in terms {
            f.add_term(i, j, Q::from_integer(v));
        }
        f
    }

    pub fn add_term(&mut self, i: usize, j: usize, v: Q) {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.c[i * self.n + j] += v;
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, i: usize, j: usize) -> Q {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.c[i * self.n + j]
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, s: Q) -> Self {
        Self { n: self.n, c: self.c.iter().map(|x| x * s).collect() }
    }

    /// Renames variables: the result's variable `perm[i]` is this form's `i`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        let mut f = Self::zero(self.n);
        for i in 0..self.n {
            for j in i..self.n {
                f.add_term(perm[i], perm[j], self.coeff(i, j));
            }
        }
        f
    }

    pub fn eval_exact(&self, rho: &[Q]) -> Q {
        let mut acc = Q::zero();
        for i in 0..self.n {
            for j in i..self.n {
                acc += self.coeff(i, j) * rho[i] * rho[j];
            }
        }
        acc
    }

    pub fn eval(&self, rho: &[f64]) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n {
            for j in i..self.n {
                acc += to_f64(self.coeff(i, j)) * rho[i] * rho[j];
            }
        }
        acc
    }

    pub fn gradient(&self, rho: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.n];
        for i in 0..self.n {
            for j in i..self.n {
                let c = to_f64(self.coeff(i, j));
                if i == j {
                    g[i] += 2.0 * c * rho[i];
                } else {
                    g[i] += c * rho[j];
                    g[j] += c * rho[i];
                }
            }
        }
        g
    }

    /// `z·∇f(ρ)`, which is linear in ρ.
    pub fn directional(&self, rho: &[f64], z: &[f64]) -> f64 {
        self.gradient(rho).iter().zip(z).map(|(g, z)| g * z).sum()
    }

    /// Sum of absolute coefficients times the monomial maxima: an upper
    /// bound for `|f|` on a box with nonnegative lower corner.
    pub fn abs_bound(&self, hi: &[f64]) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n {
            for j in i..self.n {
                acc += to_f64(self.coeff(i, j)).abs() * hi[i].abs() * hi[j].abs();
            }
        }
        acc
    }
}

pub fn to_f64(q: Q) -> f64 {
    q.to_f64().expect("finite rational")
}

impl Add for &RhoForm {
    type Output = RhoForm;
    fn add(self, o: &RhoForm) -> RhoForm {
        assert_eq!(self.n, o.n);
        RhoForm { n: self.n, c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &RhoForm {
    type Output = RhoForm;
    fn sub(self, o: &RhoForm) -> RhoForm {
        self + &(-o)
    }
}

impl Neg for &RhoForm {
    type Output = RhoForm;
    fn neg(self) -> RhoForm {
        self.scale(Q::from_integer(-1))
    }
}

impl Mul<i64> for &RhoForm {
    type Output = RhoForm;
    fn mul(self, k: i64) -> RhoForm {
        self.scale(Q::from_integer(k))
    }
}

/// `int + ν²·form(ρ)`: an integer zeroth-order part plus a ν² correction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NuPoly {
    pub int: i128,
    pub form: RhoForm,
}

impl NuPoly {
    pub fn new(int: i128, form: RhoForm) -> Self {
        Self { int, form }
    }

    pub fn eval(&self, rho: &[f64], nu: f64) -> f64 {
        self.int as f64 + nu * nu * self.form.eval(rho)
    }

    pub fn combine(terms: &[(i64, &NuPoly)]) -> NuPoly {
        let n = terms[0].1.form.dim();
        let mut out = NuPoly::new(0, RhoForm::zero(n));
        for &(k, p) in terms {
            out.int += k as i128 * p.int;
            out.form = &out.form + &(&p.form * k);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_and_gradient() {
        // ρ1² + 4ρ1ρ2 − ρ2²
        let f = RhoForm::from_terms(2, &[(0, 0, 1), (0, 1, 4), (1, 1, -1)]);
        assert_eq!(f.eval(&[1.0, 2.0]), 1.0 + 8.0 - 4.0);
        assert_eq!(f.gradient(&[1.0, 2.0]), vec![2.0 + 8.0, 4.0 - 4.0]);
        let q = |x| Q::from_integer(x);
        assert_eq!(f.eval_exact(&[q(1), q(2)]), q(5));
        let g = f.permute(&[1, 0]);
        assert_eq!(g.eval(&[2.0, 1.0]), 5.0);
        assert!((&f - &f).is_zero());
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let f = RhoForm::from_terms(3, &[(0, 0, 3), (0, 2, -7), (1, 2, 5), (2, 2, 1)]);
        let rho = [1.3, 0.7, 2.1];
        let g = f.gradient(&rho);
        for i in 0..3 {
            let h = 1e-6;
            let mut up = rho;
            let mut dn = rho;
            up[i] += h;
            dn[i] -= h;
            let fd = (f.eval(&up) - f.eval(&dn)) / (2.0 * h);
            assert!((fd - g[i]).abs() < 1e-6);
        }
    }
}
