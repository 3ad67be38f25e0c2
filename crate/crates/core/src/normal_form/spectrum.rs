//! Linearized spectra of quadratic Hamiltonians in real symplectic coordinates.

use alloc::vec::Vec;

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use super::blocks::FrameMatrices;
use crate::error::{Error, Result};

/// `J = [[0, I], [−I, 0]]` on `(q, p)` coordinates, so that `ż = J S z`.
pub fn standard_symplectic(n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = 1.0;
        j[(n + i, i)] = -1.0;
    }
    j
}

/// Frequencies `Λ = iλ` of the flow `ż = J S z`, where `λ` runs over the
/// eigenvalues of `J S`. A mode `w ∝ e^{−iΛt}` has frequency `Λ`; the identity
/// Hessian gives `±1`. Sorted by (real, imaginary) part with conjugate
/// pairs made exact.
pub fn generic_block_spectrum(coeff: &DMatrix<f64>, form: &DMatrix<f64>) -> Result<Vec<Complex64>> {
    let dim = coeff.nrows();
    if dim % 2 != 0 || coeff.ncols() != dim || form.shape() != (dim, dim) {
        return Err(Error::PreconditionViolated("block matrices must be square of even dimension"));
    }
    if form.determinant().abs() < 1e-12 {
        return Err(Error::PreconditionViolated("symplectic form is degenerate"));
    }
    let flow = form * coeff;
    let scale = flow.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1.0);
    let schur = Schur::try_new(flow, f64::EPSILON, 10_000).ok_or(Error::NonConvergence)?;
    let lambdas = schur.complex_eigenvalues();
    let freqs: Vec<Complex64> = lambdas.iter().map(|l| Complex64::new(-l.im, l.re)).collect();
    Ok(pair_conjugates(freqs, 1e-12 * scale))
}

fn by_parts(a: &Complex64, b: &Complex64) -> core::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Snaps near-real values to the real axis and averages each complex value
/// with its nearest conjugate partner.
fn pair_conjugates(mut v: Vec<Complex64>, tol: f64) -> Vec<Complex64> {
    for z in v.iter_mut() {
        if z.im.abs() <= tol {
            z.im = 0.0;
        }
    }
    let mut used = alloc::vec![false; v.len()];
    for i in 0..v.len() {
        if used[i] || v[i].im <= 0.0 {
            continue;
        }
        let target = v[i].conj();
        let partner = (0..v.len())
            .filter(|&k| !used[k] && k != i && v[k].im < 0.0)
            .min_by(|&a, &b| (v[a] - target).norm().total_cmp(&(v[b] - target).norm()));
        if let Some(k) = partner {
            let avg = Complex64::new(0.5 * (v[i].re + v[k].re), 0.5 * (v[i].im - v[k].im));
            v[i] = avg;
            v[k] = avg.conj();
            used[i] = true;
            used[k] = true;
        }
    }
    v.sort_by(by_parts);
    v
}

/// Real Hessian of `K = Σ H_xy w_x w̄_y + Σ (G_xy w_x w_y + c.c.)` in the
/// coordinates `w = (q + ip)/√2`, ordered `(q_1..q_n, p_1..p_n)`.
pub fn hessian_from_frame(m: &FrameMatrices) -> DMatrix<f64> {
    let n = m.h.nrows();
    let energy = |z: &[f64]| -> f64 {
        let w: Vec<Complex64> =
            (0..n).map(|i| Complex64::new(z[i], z[n + i]) / core::f64::consts::SQRT_2).collect();
        let mut k = Complex64::new(0.0, 0.0);
        for x in 0..n {
            for y in 0..n {
                k += w[x] * w[y].conj() * m.h[(x, y)];
                k += 2.0 * (w[x] * w[y] * m.g[(x, y)]).re;
            }
        }
        k.re
    };
    let dim = 2 * n;
    let unit = |a: usize| {
        let mut z = alloc::vec![0.0; dim];
        z[a] = 1.0;
        z
    };
    let mut s = DMatrix::zeros(dim, dim);
    for a in 0..dim {
        s[(a, a)] = 2.0 * energy(&unit(a));
    }
    for a in 0..dim {
        for b in a + 1..dim {
            let mut z = unit(a);
            z[b] = 1.0;
            let v = energy(&z) - 0.5 * s[(a, a)] - 0.5 * s[(b, b)];
            s[(a, b)] = v;
            s[(b, a)] = v;
        }
    }
    s
}

/// Largest |Im Λ| and the elliptic/hyperbolic/degenerate verdict:
/// hyperbolic above `10⁻³ν²`, elliptic below round-off, degenerate between.
pub fn classify_spectrum(eigs: &[Complex64], nu: f64) -> (super::BlockClass, f64) {
    let max_im = eigs.iter().fold(0.0f64, |m, z| m.max(z.im.abs()));
    let scale = eigs.iter().fold(1.0f64, |m, z| m.max(z.norm()));
    let noise = 1e-9 * scale;
    let class = if max_im <= noise {
        super::BlockClass::Elliptic
    } else if max_im > 1e-3 * nu * nu {
        super::BlockClass::Hyperbolic
    } else {
        super::BlockClass::Degenerate
    };
    let reported = if class == super::BlockClass::Elliptic { 0.0 } else { max_im };
    (class, reported)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_hessian_has_unit_frequency() {
        let s = DMatrix::identity(2, 2);
        let e = generic_block_spectrum(&s, &standard_symplectic(1)).unwrap();
        assert_eq!(e.len(), 2);
        assert!((e[0] - Complex64::new(-1.0, 0.0)).norm() < 1e-14);
        assert!((e[1] - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn block_diagonal_union() {
        let mut s = DMatrix::zeros(4, 4);
        // mode 1: frequency 2; mode 2: frequency 5 (diagonal Hessians)
        s[(0, 0)] = 2.0;
        s[(2, 2)] = 2.0;
        s[(1, 1)] = 5.0;
        s[(3, 3)] = 5.0;
        let e = generic_block_spectrum(&s, &standard_symplectic(2)).unwrap();
        let re: Vec<f64> = e.iter().map(|z| z.re).collect();
        for (a, b) in re.iter().zip([-5.0, -2.0, 2.0, 5.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn hyperbolic_saddle() {
        // H = pq: λ = ±1 real, Λ = ±i
        let mut s = DMatrix::zeros(2, 2);
        s[(0, 1)] = 1.0;
        s[(1, 0)] = 1.0;
        let e = generic_block_spectrum(&s, &standard_symplectic(1)).unwrap();
        assert!(e.iter().all(|z| z.re.abs() < 1e-14 && (z.im.abs() - 1.0).abs() < 1e-14));
        assert_eq!(e[0], e[1].conj());
    }

    #[test]
    fn rejects_bad_shapes() {
        let s = DMatrix::identity(3, 3);
        assert!(generic_block_spectrum(&s, &DMatrix::identity(3, 3)).is_err());
        let s = DMatrix::identity(2, 2);
        assert!(generic_block_spectrum(&s, &DMatrix::zeros(2, 2)).is_err());
    }
}
