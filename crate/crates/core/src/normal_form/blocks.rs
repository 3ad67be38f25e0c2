//! External blocks: the modes of one resonant pair, their quadratic
//! Hamiltonian in a rotating frame, and its spectrum.
//!
//! The frame multiplies each block mode by `e^{i g·θ}` so that every coupling
//! becomes time independent; its frequency then shifts by `g·Ω`. The
//! reference mode (the `t` of the defining system) keeps `g = 0`. Couplings
//! and diagonal shifts come from [`super::z6::external_couplings`], so the
//! closed forms quoted from the literature are checked, not assumed.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by the inherent methods when std is linked
use num_traits::Float;

use super::spectrum::{classify_spectrum, generic_block_spectrum, hessian_from_frame, standard_symplectic};
use super::z6::{external_couplings, z6_internal_coefficients, Coupling, LinkKind};
use super::{lambda_poly, BlockClass};
use crate::error::{Error, Result};
use crate::resonance::{is_resonant, ExternalPair, SetTag};
use crate::rho_form::{NuPoly, RhoForm, Q};
use crate::torus::TorusSpec;
use crate::ModeIndex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BlockKind {
    TwoMode,
    SetA,
    SetB,
    SetC,
    SetE,
}

impl BlockKind {
    pub fn from_tag(tag: SetTag) -> Self {
        match tag {
            SetTag::A => BlockKind::SetA,
            SetTag::B => BlockKind::SetB,
            SetTag::C => BlockKind::SetC,
            SetTag::E => BlockKind::SetE,
            SetTag::TwoMode => BlockKind::TwoMode,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BlockKind::TwoMode => "two-mode",
            BlockKind::SetA => "A",
            BlockKind::SetB => "B",
            BlockKind::SetC => "C",
            BlockKind::SetE => "E",
        }
    }
}

/// Complex coefficient matrices of the frame Hamiltonian
/// `K = Σ h_xy w_x w̄_y + Σ (g_xy w_x w_y + c.c.)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameMatrices {
    pub h: DMatrix<f64>,
    pub g: DMatrix<f64>,
}

/// Structure of a block, evaluable at any ρ.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockModel {
    pub kind: BlockKind,
    pub internal: Vec<ModeIndex>,
    /// Sorted block modes.
    pub modes: Vec<ModeIndex>,
    pub reference: ModeIndex,
    pub couplings: Vec<Coupling>,
    /// Twice the frame exponent `g` of each mode.
    pub gauge2: Vec<Vec<i64>>,
    /// Whether the mode enters the normal-mode basis conjugated.
    pub conjugated: Vec<bool>,
    omega: Vec<NuPoly>,
}

impl BlockModel {
    pub fn new(internal: &[ModeIndex], pair: &ExternalPair) -> Result<Self> {
        let modes = pair.modes();
        let reference = pair.roles().1;
        let couplings = external_couplings(internal, &modes);
        let n = internal.len();
        let idx = |x: ModeIndex| modes.iter().position(|&m| m == x).expect("block mode");
        let mut gauge2: Vec<Option<Vec<i64>>> = vec![None; modes.len()];
        let mut conjugated = vec![false; modes.len()];
        // A single ℰ mode takes its frame from the ζ² self-coupling instead.
        if modes.len() == 2 {
            gauge2[idx(reference)] = Some(vec![0; n]);
        }
        let twice = |c: &[i64]| c.iter().map(|v| 2 * v).collect::<Vec<i64>>();
        // Propagate along links until every mode has a frame.
        for _ in 0..modes.len() + 1 {
            for c in &couplings {
                let (x, y) = (idx(c.x), idx(c.y));
                let c2 = twice(&c.phase);
                let update = match (c.kind, x == y, &gauge2[x], &gauge2[y]) {
                    (LinkKind::ZetaZeta, true, None, _) => Some((x, c.phase.clone(), false)),
                    (_, true, _, _) => None,
                    (LinkKind::ZetaEta, false, None, Some(gy)) => {
                        Some((x, gy.iter().zip(&c2).map(|(a, b)| a + b).collect(), conjugated[y]))
                    }
                    (LinkKind::ZetaEta, false, Some(gx), None) => {
                        Some((y, gx.iter().zip(&c2).map(|(a, b)| a - b).collect(), conjugated[x]))
                    }
                    (LinkKind::ZetaZeta, false, None, Some(gy)) => {
                        Some((x, c2.iter().zip(gy).map(|(a, b)| a - b).collect(), !conjugated[y]))
                    }
                    (LinkKind::ZetaZeta, false, Some(gx), None) => {
                        Some((y, c2.iter().zip(gx).map(|(a, b)| a - b).collect(), !conjugated[x]))
                    }
                    _ => None,
                };
                if let Some((k, g, conj)) = update {
                    gauge2[k] = Some(g);
                    conjugated[k] = conj;
                }
            }
        }
        let gauge2: Vec<Vec<i64>> = gauge2.into_iter().map(|g| g.ok_or(Error::NonStationaryCoupling)).collect::<Result<_>>()?;
        // Every link must be stationary in the chosen frame.
        for c in &couplings {
            let (gx, gy) = (&gauge2[idx(c.x)], &gauge2[idx(c.y)]);
            let ok = (0..n).all(|i| match c.kind {
                LinkKind::ZetaEta => 2 * c.phase[i] == gx[i] - gy[i],
                LinkKind::ZetaZeta => 2 * c.phase[i] == gx[i] + gy[i],
            });
            if !ok {
                return Err(Error::NonStationaryCoupling);
            }
        }
        let table = z6_internal_coefficients(internal);
        let omega = (0..n)
            .map(|i| NuPoly::new((internal[i] as i128).pow(2), table.omega_form(i)))
            .collect();
        Ok(Self {
            kind: BlockKind::from_tag(pair.set_tag),
            internal: internal.to_vec(),
            modes,
            reference,
            couplings,
            gauge2,
            conjugated,
            omega,
        })
    }

    fn index(&self, x: ModeIndex) -> usize {
        self.modes.iter().position(|&m| m == x).expect("block mode")
    }

    /// Frame shift `g_x·Ω` as an exact polynomial.
    pub fn frame_shift(&self, x: ModeIndex) -> NuPoly {
        let g = &self.gauge2[self.index(x)];
        let n = self.internal.len();
        let mut out = NuPoly::new(0, RhoForm::zero(n));
        for (i, &gi) in g.iter().enumerate() {
            out.int += gi as i128 * self.omega[i].int;
            out.form = &out.form + &(&self.omega[i].form * gi);
        }
        assert!(out.int % 2 == 0, "half-integer frame on the integer part");
        out.int /= 2;
        out.form = out.form.scale(Q::new(1, 2));
        out
    }

    /// Exact diagonal entry `x² + (zero-phase ζ_xη_x terms) + g_x·Ω`.
    pub fn frame_diagonal(&self, x: ModeIndex) -> NuPoly {
        let mut out = self.frame_shift(x);
        out.int += (x as i128).pow(2);
        for c in self.couplings.iter().filter(|c| c.kind == LinkKind::ZetaEta && c.x == x && c.y == x) {
            let mut f = RhoForm::zero(self.internal.len());
            let idx: Vec<usize> = (0..c.amp.len()).filter(|&i| c.amp[i] > 0).collect();
            match idx[..] {
                [i] => f.add_term(i, i, Q::from_integer(c.count as i64)),
                [i, j] => f.add_term(i, j, Q::from_integer(c.count as i64)),
                _ => unreachable!("diagonal terms carry two internal actions"),
            }
            out.form = &out.form + &f;
        }
        out
    }

    /// Exact detuning `a` of a pair block: `(Λ_ref + Λ_other)/2` when the
    /// other mode enters conjugated (ζζ coupling), else `(Λ_ref − Λ_other)/2`.
    pub fn detuning(&self) -> Option<NuPoly> {
        if self.modes.len() != 2 {
            return None;
        }
        let r = self.index(self.reference);
        let o = 1 - r;
        let sign = if self.conjugated[o] { 1 } else { -1 };
        let dr = self.frame_diagonal(self.modes[r]);
        let d_o = self.frame_diagonal(self.modes[o]);
        let mut out = NuPoly::combine(&[(1, &dr), (sign, &d_o)]);
        assert!(out.int % 2 == 0);
        out.int /= 2;
        out.form = out.form.scale(Q::new(1, 2));
        Some(out)
    }

    pub fn frame(&self, rho: &[f64], nu: f64) -> FrameMatrices {
        let k = self.modes.len();
        let mut h = DMatrix::zeros(k, k);
        let mut g = DMatrix::zeros(k, k);
        for (a, &x) in self.modes.iter().enumerate() {
            h[(a, a)] = (x * x) as f64 + self.frame_shift(x).eval(rho, nu);
        }
        for c in &self.couplings {
            let (a, b) = (self.index(c.x), self.index(c.y));
            let v = c.value(rho, nu);
            match c.kind {
                LinkKind::ZetaEta => h[(a, b)] += v,
                LinkKind::ZetaZeta if a == b => g[(a, a)] += v,
                LinkKind::ZetaZeta => {
                    g[(a, b)] += 0.5 * v;
                    g[(b, a)] += 0.5 * v;
                }
            }
        }
        FrameMatrices { h, g }
    }

    /// Mass and momentum shared by the block's normal modes in the frame.
    pub fn charges(&self) -> (i64, i64) {
        let r = self.index(self.reference);
        let g2 = &self.gauge2[r];
        let mass2 = 2 + g2.iter().sum::<i64>();
        let mom2 = 2 * self.reference + g2.iter().zip(&self.internal).map(|(g, m)| g * m).sum::<i64>();
        assert!(mass2 % 2 == 0 && mom2 % 2 == 0);
        (mass2 / 2, mom2 / 2)
    }

    /// Common integer part of the normal-mode frequencies.
    pub fn zeroth_order(&self) -> i128 {
        (self.reference as i128).pow(2) + self.frame_shift(self.reference).int
    }

    /// Frequencies of the block's normal modes (one per mode), from the
    /// frame matrices in closed form.
    pub fn normal_frequencies(&self, rho: &[f64], nu: f64) -> Result<Vec<Complex64>> {
        let m = self.frame(rho, nu);
        let mut out = match self.modes.len() {
            1 => {
                let (h, g) = (m.h[(0, 0)], m.g[(0, 0)]);
                let disc = h * h - 4.0 * g * g;
                if disc >= 0.0 {
                    vec![Complex64::new(h.signum() * disc.sqrt(), 0.0)]
                } else {
                    vec![Complex64::new(0.0, (-disc).sqrt())]
                }
            }
            2 => {
                let r = self.index(self.reference);
                let o = 1 - r;
                let coupled_zz = m.g[(r, o)] != 0.0 || self.conjugated[o];
                let coupled_ze = m.h[(r, o)] != 0.0;
                if coupled_zz && coupled_ze {
                    // Mixed coupling: fall back to the full real spectrum.
                    let s = hessian_from_frame(&m);
                    let all = generic_block_spectrum(&s, &standard_symplectic(2))?;
                    all.into_iter().filter(|z| z.re > 0.0).collect()
                } else if coupled_zz {
                    // basis (w_ref, w̄_other)
                    let (d_r, d_o, c) = (m.h[(r, r)], m.h[(o, o)], 2.0 * m.g[(r, o)]);
                    let b = 0.5 * (d_r - d_o);
                    let a = 0.5 * (d_r + d_o);
                    let root = Complex64::new(a * a - c * c, 0.0).sqrt();
                    vec![b - root, b + root]
                } else {
                    let (x, y, c) = (m.h[(0, 0)], m.h[(1, 1)], m.h[(0, 1)]);
                    let mean = 0.5 * (x + y);
                    let shift = (0.25 * (x - y) * (x - y) + c * c).sqrt();
                    vec![Complex64::new(mean - shift, 0.0), Complex64::new(mean + shift, 0.0)]
                }
            }
            _ => return Err(Error::PreconditionViolated("blocks hold one or two modes")),
        };
        out.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        Ok(out)
    }
}

/// Closed-form data quoted for each block type, with the comparison against
/// the counted frame Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub enum ClosedForm {
    /// Two-mode pair: rotation by α.
    TwoMode {
        lambda_s: f64,
        lambda_t: f64,
        coupling: f64,
        alpha_quoted: f64,
        alpha_derived: f64,
        /// `(Λ_t − cα, Λ_s + cα)` with the quoted α.
        quoted_pair: [f64; 2],
        /// `(Λ_t + cα, Λ_s − cα)`, the exact eigenvalues.
        derived_pair: [f64; 2],
        /// Largest difference of the quoted pair from the spectrum.
        mismatch: f64,
    },
    /// ℬ pair: `Λ± = b ± √(a² − c²)`.
    SetB {
        witness: Vec<ModeIndex>,
        lambda_s: f64,
        lambda_t: f64,
        coupling: f64,
        a: f64,
        b: f64,
        delta: f64,
        alpha: Complex64,
        lambda_minus: Complex64,
        lambda_plus: Complex64,
        /// Largest relative difference from the counted spectrum.
        mismatch: f64,
        /// `(witness, [Λ−, Λ+])` for every internal selection producing the pair.
        per_witness: Vec<(Vec<ModeIndex>, [Complex64; 2])>,
    },
    /// ℰ mode: `Λ_s β = (1 − β²)c`, eigenvalue `(1 − β²)/(1 + β²)·Λ_s`.
    SetE {
        lambda_s: f64,
        coupling_quoted: f64,
        coupling_counted: f64,
        beta: Option<f64>,
        beta_residual: f64,
        quoted_eigen: f64,
        /// `√(Λ_s² − 4c²)` with the quoted coupling.
        derived_eigen: Complex64,
        mismatch: f64,
    },
    /// ζη-coupled pair (𝒜, 𝒞): eigenvalues `mean ± √(((Λ1 − Λ2)/2)² + c²)`.
    Hermitian { mean: f64, shift: f64, mismatch: f64 },
}

/// One block with its real Hessian, spectrum and classification.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralBlock {
    pub kind: BlockKind,
    pub modes: Vec<ModeIndex>,
    pub reference: ModeIndex,
    /// Real symmetric Hessian in `(q, p)` coordinates of the frame modes.
    pub coeff: DMatrix<f64>,
    /// Generic spectrum `Λ = iλ` of `J·coeff` (both signs).
    pub eigenvalues: Vec<Complex64>,
    /// One frequency per normal mode.
    pub normal_frequencies: Vec<Complex64>,
    pub transform: ClosedForm,
    pub classification: BlockClass,
    pub max_im: f64,
    pub model: BlockModel,
}

impl SpectralBlock {
    /// `trace(coeff)/2`, equal to the sum of the uncoupled frame Λ's.
    pub fn half_trace(&self) -> f64 {
        self.coeff.trace() / 2.0
    }
}

fn pos(internal: &[ModeIndex], x: ModeIndex) -> usize {
    internal.iter().position(|&m| m == x).expect("internal witness")
}

fn assemble(spec: &TorusSpec, pair: &ExternalPair) -> Result<(BlockModel, DMatrix<f64>, Vec<Complex64>, Vec<Complex64>)> {
    let model = BlockModel::new(&spec.internal, pair)?;
    let frame = model.frame(&spec.rho, spec.nu);
    let coeff = hessian_from_frame(&frame);
    let eig = generic_block_spectrum(&coeff, &standard_symplectic(model.modes.len()))?;
    let normal = model.normal_frequencies(&spec.rho, spec.nu)?;
    Ok((model, coeff, eig, normal))
}

fn finish(
    spec: &TorusSpec,
    model: BlockModel,
    coeff: DMatrix<f64>,
    eigenvalues: Vec<Complex64>,
    normal: Vec<Complex64>,
    transform: ClosedForm,
) -> SpectralBlock {
    let (classification, max_im) = classify_spectrum(&eigenvalues, spec.nu);
    SpectralBlock {
        kind: model.kind,
        modes: model.modes.clone(),
        reference: model.reference,
        coeff,
        eigenvalues,
        normal_frequencies: normal,
        transform,
        classification,
        max_im,
        model,
    }
}

fn rel_diff(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
}

/// The case-2 block of a two-mode torus.
pub fn block_two_mode_case2(spec: &TorusSpec, pair: &ExternalPair) -> Result<SpectralBlock> {
    if spec.dim() != 2 || pair.set_tag != SetTag::TwoMode {
        return Err(Error::PreconditionViolated("two-mode pair expected"));
    }
    let (model, coeff, eig, normal) = assemble(spec, pair)?;
    let (_, t) = pair.roles();
    let p = pair.internal_witness[0];
    let (r1, r2) = if spec.internal[0] == p { (spec.rho[0], spec.rho[1]) } else { (spec.rho[1], spec.rho[0]) };
    let nu2 = spec.nu * spec.nu;
    let tt = (t * t) as f64;
    let lambda_s = tt + nu2 * (21.0 * r2 * r2 - 3.0 * r1 * r1 + 36.0 * r1 * r2);
    let lambda_t = tt + 9.0 * nu2 * (r1 * r1 + r2 * r2 + 4.0 * r1 * r2);
    let coupling = 9.0 * nu2 * r1 * r2;
    let num = -2.0 * r1 * r1 + 2.0 * r2 * r2;
    let alpha_quoted = (num + (4.0 * r1.powi(4) + 2.0 * r1 * r1 * r2 * r2 + 4.0 * r2.powi(4)).sqrt()) / (3.0 * r1 * r2);
    let alpha_derived = (num + (4.0 * r1.powi(4) + r1 * r1 * r2 * r2 + 4.0 * r2.powi(4)).sqrt()) / (3.0 * r1 * r2);
    let quoted_pair = [lambda_t - coupling * alpha_quoted, lambda_s + coupling * alpha_quoted];
    let derived_pair = [lambda_t + coupling * alpha_derived, lambda_s - coupling * alpha_derived];
    let mut q = quoted_pair;
    q.sort_by(f64::total_cmp);
    let mismatch = q.iter().zip(&normal).map(|(a, b)| (a - b.re).abs()).fold(0.0, f64::max);
    let transform = ClosedForm::TwoMode {
        lambda_s,
        lambda_t,
        coupling,
        alpha_quoted,
        alpha_derived,
        quoted_pair,
        derived_pair,
        mismatch,
    };
    Ok(finish(spec, model, coeff, eig, normal, transform))
}

fn hermitian(spec: &TorusSpec, pair: &ExternalPair, tag: SetTag) -> Result<SpectralBlock> {
    if spec.dim() != 3 || pair.set_tag != tag {
        return Err(Error::PreconditionViolated("three-mode pair of the matching set expected"));
    }
    let (model, coeff, eig, normal) = assemble(spec, pair)?;
    let m = model.frame(&spec.rho, spec.nu);
    let mean = 0.5 * (m.h[(0, 0)] + m.h[(1, 1)]);
    let shift = (0.25 * (m.h[(0, 0)] - m.h[(1, 1)]).powi(2) + m.h[(0, 1)].powi(2)).sqrt();
    let mismatch = rel_diff(normal[0], Complex64::new(mean - shift, 0.0))
        .max(rel_diff(normal[1], Complex64::new(mean + shift, 0.0)));
    Ok(finish(spec, model, coeff, eig, normal, ClosedForm::Hermitian { mean, shift, mismatch }))
}

pub fn block_set_a(spec: &TorusSpec, pair: &ExternalPair) -> Result<SpectralBlock> {
    hermitian(spec, pair, SetTag::A)
}

pub fn block_set_c(spec: &TorusSpec, pair: &ExternalPair) -> Result<SpectralBlock> {
    hermitian(spec, pair, SetTag::C)
}

/// `(Λ−, Λ+)` of a ℬ pair for one witness `(j5, j6, j7)`, using
/// `Λ_s' = 2Ω_j5 + Ω_j6 − Ω_j7 − Λ_s` and coupling `18ν²ρ_j5√(ρ_j6ρ_j7)`
/// (or `6ν²…` when `j5 = j6`).
fn set_b_derived(spec: &TorusSpec, s: ModeIndex, t: ModeIndex, w: &[ModeIndex]) -> [Complex64; 2] {
    let om = super::omega_polys(&spec.internal);
    let (i5, i6, i7) = (pos(&spec.internal, w[0]), pos(&spec.internal, w[1]), pos(&spec.internal, w[2]));
    let omv = |i: usize| om[i].eval(&spec.rho, spec.nu);
    let n = spec.dim();
    let big_w = 2.0 * omv(i5) + omv(i6) - omv(i7);
    let lam = |x: ModeIndex| lambda_poly(x, n).eval(&spec.rho, spec.nu);
    let lambda_s = big_w - lam(s);
    let lambda_t = lam(t);
    let count = if w[0] == w[1] { 6.0 } else { 18.0 };
    let c = count * spec.nu * spec.nu * spec.rho[i5] * (spec.rho[i6] * spec.rho[i7]).sqrt();
    let (a, b) = (0.5 * (lambda_t - lambda_s), 0.5 * (lambda_t + lambda_s));
    let root = Complex64::new(a * a - c * c, 0.0).sqrt();
    [b - root, b + root]
}

/// The ℬ block: a ζζ-coupled pair, hyperbolic iff `a² < c²`.
pub fn block_set_b(spec: &TorusSpec, pair: &ExternalPair) -> Result<SpectralBlock> {
    if spec.dim() != 3 || pair.set_tag != SetTag::B {
        return Err(Error::PreconditionViolated("three-mode B pair expected"));
    }
    let (model, coeff, eig, normal) = assemble(spec, pair)?;
    let (s, t) = if pair.roles().1 == model.reference { pair.roles() } else { (pair.roles().1, pair.roles().0) };
    let w = &pair.internal_witness;
    let (i5, i6, i7) = (pos(&spec.internal, w[0]), pos(&spec.internal, w[1]), pos(&spec.internal, w[2]));
    let (r5, r6, r7) = (spec.rho[i5], spec.rho[i6], spec.rho[i7]);
    let nu2 = spec.nu * spec.nu;
    let n = spec.dim();
    let lambda_t = lambda_poly(t, n).eval(&spec.rho, spec.nu);
    let distinct = w[0] != w[1] && w[1] != w[2] && w[0] != w[2];
    let lambda_s = if distinct {
        (t * t) as f64
            + 3.0 * nu2 * (-r5 * r5 + r6 * r6 + 5.0 * r7 * r7 - 6.0 * r5 * r6 + 12.0 * r6 * r7 + 6.0 * r7 * r5)
    } else {
        let d = set_b_derived(spec, s, t, w);
        d[0].re + d[1].re - lambda_t
    };
    let count = if w[0] == w[1] { 6.0 } else { 18.0 };
    let coupling = count * nu2 * r5 * (r6 * r7).sqrt();
    let a = 0.5 * (lambda_t - lambda_s);
    let b = 0.5 * (lambda_t + lambda_s);
    let delta = a * a - coupling * coupling;
    let root = Complex64::new(delta, 0.0).sqrt();
    let alpha = if coupling == 0.0 { Complex64::new(0.0, 0.0) } else { -(a - root) / (nu2 * r5 * (r6 * r7).sqrt()) };
    let (lambda_minus, lambda_plus) = (b - root, b + root);
    let mismatch = rel_diff(lambda_minus, normal[0]).max(rel_diff(lambda_plus, normal[1]));

    let mut per_witness = Vec::new();
    for &x in &spec.internal {
        for &y in &spec.internal {
            for &z in &spec.internal {
                if is_resonant(&[x, x, y], &[z, s, t]) {
                    per_witness.push((vec![x, y, z], set_b_derived(spec, s, t, &[x, y, z])));
                }
            }
        }
    }
    let transform = ClosedForm::SetB {
        witness: w.clone(),
        lambda_s,
        lambda_t,
        coupling,
        a,
        b,
        delta,
        alpha,
        lambda_minus,
        lambda_plus,
        mismatch,
        per_witness,
    };
    let block = finish(spec, model, coeff, eig, normal, transform);
    if block.classification == BlockClass::Degenerate {
        return Err(Error::DegenerateBlock { modes: [s.min(t), s.max(t)] });
    }
    Ok(block)
}

/// The single-mode ℰ block with `ζ² + η²` coupling.
pub fn block_set_e(spec: &TorusSpec, pair: &ExternalPair) -> Result<SpectralBlock> {
    if spec.dim() != 3 || pair.set_tag != SetTag::E {
        return Err(Error::PreconditionViolated("three-mode E mode expected"));
    }
    let (model, coeff, eig, normal) = assemble(spec, pair)?;
    let w = &pair.internal_witness;
    let (i11, i12, i13) = (pos(&spec.internal, w[0]), pos(&spec.internal, w[1]), pos(&spec.internal, w[2]));
    let (r1, r2, r3) = (spec.rho[i11], spec.rho[i12], spec.rho[i13]);
    let nu2 = spec.nu * spec.nu;
    let distinct = w[0] != w[1] && w[1] != w[2] && w[0] != w[2];
    let frame = model.frame(&spec.rho, spec.nu);
    let lambda_s = if distinct {
        3.0 * nu2 * (2.0 * r1 * r1 + r2 * r2 - r3 * r3 + 9.0 * r1 * r2 + 3.0 * r3 * r1)
    } else {
        frame.h[(0, 0)]
    };
    let coupling_quoted = nu2 * r1 * (r2 * r3).sqrt();
    let coupling_counted = frame.g[(0, 0)];
    let c = coupling_quoted;
    let beta = if c == 0.0 {
        Some(0.0)
    } else if lambda_s == 0.0 {
        None
    } else {
        // smaller root of c β² + Λ β − c = 0
        Some(2.0 * c / (lambda_s + lambda_s.signum() * (lambda_s * lambda_s + 4.0 * c * c).sqrt()))
    };
    let (beta_residual, quoted_eigen) = match beta {
        Some(b) => (lambda_s * b - (1.0 - b * b) * c, (1.0 - b * b) / (1.0 + b * b) * lambda_s),
        None => (0.0, 0.0),
    };
    let disc = lambda_s * lambda_s - 4.0 * c * c;
    let derived_eigen = if disc >= 0.0 {
        Complex64::new(lambda_s.signum() * disc.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-disc).sqrt())
    };
    let mismatch = rel_diff(Complex64::new(quoted_eigen, 0.0), derived_eigen);
    let transform = ClosedForm::SetE {
        lambda_s,
        coupling_quoted,
        coupling_counted,
        beta,
        beta_residual,
        quoted_eigen,
        derived_eigen,
        mismatch,
    };
    let block = finish(spec, model, coeff, eig, normal, transform);
    if block.classification == BlockClass::Degenerate {
        return Err(Error::DegenerateBlock { modes: [pair.s, pair.s] });
    }
    Ok(block)
}
