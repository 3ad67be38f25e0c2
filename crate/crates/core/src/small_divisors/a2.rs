//! Hypothesis A2: lower bounds or transversality for every divisor
//! `Ω·k + σ_aΛ_a + σ_bΛ_b` allowed by mass and momentum conservation.
//!
//! Each divisor is written as `N + ν²F(ρ) + Σ σ_a (Λ_a(ρ) − Z_a)` with an
//! exact integer `N`, a quadratic form `F` and the block frequencies `Λ_a`
//! (unperturbed value `Z_a`). Scalar families are infinite; for a fixed `k`
//! the integer part is a polynomial in the free mode, so only the finitely
//! many near-resonant members are examined and the rest are certified by
//! the integer part alone.

use alloc::vec;
use alloc::vec::Vec;

use super::modes::{block_modes, BlockMode, ModeLabel, Samples};
use crate::normal_form::{omega_polys, EffectiveHamiltonian};
use crate::rho_form::{to_f64, RhoForm};
use crate::torus::RhoBox;
use crate::ModeIndex;

#[allow(unused_imports)] // shadowed by the inherent methods when std is linked
use num_traits::Float;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DivisorKind {
    OmegaK,
    OmegaKPlusLambda,
    OmegaKPlusLambdaPlusLambda,
    OmegaKPlusLambdaMinusLambda,
}

impl DivisorKind {
    pub fn name(self) -> &'static str {
        match self {
            DivisorKind::OmegaK => "OmegaK",
            DivisorKind::OmegaKPlusLambda => "OmegaKPlusLambda",
            DivisorKind::OmegaKPlusLambdaPlusLambda => "OmegaKPlusLambdaPlusLambda",
            DivisorKind::OmegaKPlusLambdaMinusLambda => "OmegaKPlusLambdaMinusLambda",
        }
    }

    pub fn mode_count(self) -> usize {
        match self {
            DivisorKind::OmegaK => 0,
            DivisorKind::OmegaKPlusLambda => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DivisorExpression {
    pub kind: DivisorKind,
    pub k: Vec<i64>,
    pub modes: Vec<ModeLabel>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum A2Verdict {
    LowerBounded,
    Transversal,
    Violated,
    FilteredByConservation,
}

impl A2Verdict {
    pub const ALL: [A2Verdict; 4] =
        [A2Verdict::LowerBounded, A2Verdict::Transversal, A2Verdict::Violated, A2Verdict::FilteredByConservation];

    pub fn name(self) -> &'static str {
        match self {
            A2Verdict::LowerBounded => "LowerBounded",
            A2Verdict::Transversal => "Transversal",
            A2Verdict::Violated => "Violated",
            A2Verdict::FilteredByConservation => "FilteredByConservation",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// Smallest |value| over the grid.
    GridMinimum(f64),
    /// Unit direction along which the divisor grows by at least δ.
    Direction(Vec<f64>),
    /// Grid point with the smallest |value|, and that value.
    Failing { rho: Vec<f64>, value: f64 },
    /// Mode forced by momentum conservation that is not an external mode.
    ForcedMode(ModeIndex),
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerdictEntry {
    pub expr: DivisorExpression,
    pub verdict: A2Verdict,
    pub witness: Witness,
}

/// Expressions not listed individually.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct A2Summary {
    /// Finite expressions certified by their integer part over the whole domain.
    pub analytic: usize,
    /// Scalar-pair families (one per `k`) whose members outside the listed
    /// ones are certified by their integer part.
    pub families: usize,
    /// `(k, mode)` combinations violating mass conservation.
    pub mass_filtered: usize,
    /// Scalar candidates that belong to a block; the block's normal modes
    /// carry them in the frame.
    pub frame_covered: usize,
    /// `Ω·k + Λ_j − Λ_j`, identical to `Ω·k`.
    pub reduces_to_omega_k: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisReport {
    pub delta: f64,
    pub k_max: i64,
    pub entries: Vec<VerdictEntry>,
    pub summary: A2Summary,
}

impl HypothesisReport {
    pub fn count(&self, v: A2Verdict) -> usize {
        self.entries.iter().filter(|e| e.verdict == v).count()
    }

    pub fn pass(&self) -> bool {
        self.count(A2Verdict::Violated) == 0
    }

    pub fn violations(&self) -> impl Iterator<Item = &VerdictEntry> {
        self.entries.iter().filter(|e| e.verdict == A2Verdict::Violated)
    }
}

/// Admissibility of the monomial behind `Ω·k + Σ σ_a Λ_a` for scalar modes:
/// `e^{ik·θ}` times `η_a` for `σ_a = +1` and `ζ_a` for `σ_a = −1` conserves
/// mass and momentum iff `Σk + Σσ = 0` and `Σ m_i k_i + Σ σ_a a = 0`.
pub fn conservation_filter(internal: &[ModeIndex], k: &[i64], external: &[ModeIndex], signs: &[i64]) -> bool {
    let charges: Vec<(i64, i64)> = external.iter().map(|&j| (1, j)).collect();
    conservation_filter_charged(internal, k, &charges, signs)
}

/// As [`conservation_filter`] for modes with arbitrary `(mass, momentum)`.
pub fn conservation_filter_charged(internal: &[ModeIndex], k: &[i64], charges: &[(i64, i64)], signs: &[i64]) -> bool {
    let mass: i64 = k.iter().sum::<i64>() + charges.iter().zip(signs).map(|(c, s)| c.0 * s).sum::<i64>();
    let mom: i64 = internal.iter().zip(k).map(|(m, k)| m * k).sum::<i64>()
        + charges.iter().zip(signs).map(|(c, s)| c.1 * s).sum::<i64>();
    mass == 0 && mom == 0
}

/// Real quadratic form in f64 for the inner loops.
#[derive(Debug, Clone, PartialEq)]
struct QuadF {
    n: usize,
    c: Vec<f64>,
}

impl QuadF {
    fn zero(n: usize) -> Self {
        Self { n, c: vec![0.0; n * n] }
    }

    fn from_form(f: &RhoForm) -> Self {
        let n = f.dim();
        let mut q = Self::zero(n);
        for i in 0..n {
            for j in i..n {
                q.c[i * n + j] = to_f64(f.coeff(i, j));
            }
        }
        q
    }

    fn add_scaled(&mut self, o: &QuadF, s: f64) {
        for (a, b) in self.c.iter_mut().zip(&o.c) {
            *a += s * b;
        }
    }

    fn eval(&self, r: &[f64]) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n {
            for j in i..self.n {
                acc += self.c[i * self.n + j] * r[i] * r[j];
            }
        }
        acc
    }

    fn directional(&self, r: &[f64], z: &[f64]) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n {
            for j in i..self.n {
                let c = self.c[i * self.n + j];
                acc += c * (z[i] * r[j] + r[i] * z[j]);
            }
        }
        acc
    }

    /// Rigorous range on a box: `F(c + d) = F(c) + ∇F(c)·d + F(d)`.
    fn range(&self, center: &[f64], half: &[f64]) -> (f64, f64) {
        let f0 = self.eval(center);
        let mut r = 0.0;
        for i in 0..self.n {
            let mut unit = vec![0.0; self.n];
            unit[i] = 1.0;
            r += self.directional(center, &unit).abs() * half[i];
            for j in i..self.n {
                r += self.c[i * self.n + j].abs() * half[i] * half[j];
            }
        }
        (f0 - r, f0 + r)
    }
}

/// One divisor ready for assessment.
struct Divisor {
    expr: DivisorExpression,
    int: i128,
    form: QuadF,
    blocks: Vec<(usize, f64)>,
    transversal_allowed: bool,
}

struct Ctx<'a> {
    eff: &'a EffectiveHamiltonian,
    delta: f64,
    nu2: f64,
    m: Vec<i64>,
    m2: Vec<i128>,
    omega: Vec<QuadF>,
    shift: QuadF,
    modes: Vec<BlockMode>,
    samples: Samples,
    /// `sup_grid |Λ_a − Z_a|` per block mode
    block_sup: Vec<f64>,
    center: Vec<f64>,
    half: Vec<f64>,
    corners: Vec<Vec<f64>>,
    entries: Vec<VerdictEntry>,
    summary: A2Summary,
    excluded: Vec<bool>,
}

impl<'a> Ctx<'a> {
    fn new(eff: &'a EffectiveHamiltonian, delta: f64, grid: &[Vec<f64>]) -> Self {
        let spec = &eff.spec;
        let n = spec.dim();
        let modes = block_modes(eff);
        let samples = Samples::new(eff, &modes, grid);
        let block_sup = (0..modes.len())
            .map(|a| {
                let z = modes[a].zeroth as f64;
                samples.block.iter().fold(0.0f64, |s, v| s.max((v[a] - z).norm()))
            })
            .collect();
        let dom: &RhoBox = &spec.domain;
        let center = dom.center();
        let half = dom.lo.iter().zip(&dom.hi).map(|(l, h)| 0.5 * (h - l)).collect();
        Ctx {
            eff,
            delta,
            nu2: spec.nu * spec.nu,
            m: spec.internal.clone(),
            m2: spec.internal.iter().map(|&x| (x as i128).pow(2)).collect(),
            omega: omega_polys(&spec.internal).iter().map(|p| QuadF::from_form(&p.form)).collect(),
            shift: QuadF::from_form(&crate::normal_form::lambda_poly(0, n).form),
            modes,
            block_sup,
            center,
            half,
            corners: dom.corners(),
            excluded: vec![false; samples.len()],
            samples,
            entries: Vec::new(),
            summary: A2Summary::default(),
        }
    }

    fn omega_k(&self, k: &[i64]) -> (i128, QuadF) {
        let mut f = QuadF::zero(self.m.len());
        for (i, &ki) in k.iter().enumerate() {
            f.add_scaled(&self.omega[i], ki as f64);
        }
        (k.iter().zip(&self.m2).map(|(&a, b)| a as i128 * b).sum(), f)
    }

    fn k_dot_m(&self, k: &[i64]) -> i64 {
        k.iter().zip(&self.m).map(|(a, b)| a * b).sum()
    }

    /// Integer-part certificate: true when `|N + ν²F + blocks| ≥ δ` on the
    /// whole domain.
    fn analytic(&self, int: i128, form: &QuadF, blocks: &[(usize, f64)]) -> bool {
        let (lo, hi) = form.range(&self.center, &self.half);
        let slack: f64 = blocks.iter().map(|&(a, _)| self.block_sup[a]).sum();
        let lo = int as f64 + self.nu2 * lo - slack;
        let hi = int as f64 + self.nu2 * hi + slack;
        lo >= self.delta || hi <= -self.delta
    }

    fn value(&self, d: &Divisor, g: usize) -> num_complex::Complex64 {
        let rho = &self.samples.grid[g];
        let mut v = num_complex::Complex64::new(d.int as f64 + self.nu2 * d.form.eval(rho), 0.0);
        for &(a, s) in &d.blocks {
            v += (self.samples.block[g][a] - self.modes[a].zeroth as f64) * s;
        }
        v
    }

    fn slope(&self, d: &Divisor, g: usize, z: &[f64]) -> f64 {
        let rho = &self.samples.grid[g];
        let mut v = self.nu2 * d.form.directional(rho, z);
        for &(a, s) in &d.blocks {
            let grad = &self.samples.block_grad[g][a];
            v += s * grad.iter().zip(z).map(|(c, zi)| c.re * zi).sum::<f64>();
        }
        v
    }

    fn directions(&self, d: &Divisor, argmin: usize) -> Vec<Vec<f64>> {
        let n = self.m.len();
        let k: Vec<f64> = d.expr.k.iter().map(|&x| x as f64).collect();
        let mut out = Vec::new();
        let mut push = |v: Vec<f64>| {
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 0.0 {
                let u: Vec<f64> = v.iter().map(|x| x / norm).collect();
                out.push(u.clone());
                out.push(u.iter().map(|x| -x).collect());
            }
        };
        if n == 2 {
            push(vec![k[1], k[0]]);
        } else if d.expr.kind == DivisorKind::OmegaK {
            push(vec![k[1] + k[2], k[0] + k[2], k[0] + k[1]]);
        }
        push(k.iter().map(|x| -x).collect());
        for i in 0..n {
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            push(e);
        }
        let rho = &self.samples.grid[argmin];
        let grad: Vec<f64> = (0..n)
            .map(|i| {
                let mut e = vec![0.0; n];
                e[i] = 1.0;
                let mut v = self.nu2 * d.form.directional(rho, &e);
                for &(a, s) in &d.blocks {
                    v += s * self.samples.block_grad[argmin][a][i].re;
                }
                v
            })
            .collect();
        push(grad);
        out
    }

    fn transversal(&self, d: &Divisor, z: &[f64]) -> bool {
        if d.blocks.is_empty() {
            // the slope of a quadratic form is linear in ρ: corners suffice
            self.corners.iter().all(|c| self.nu2 * d.form.directional(c, z) >= self.delta)
        } else {
            (0..self.samples.len()).all(|g| self.slope(d, g, z) >= self.delta)
        }
    }

    fn assess(&mut self, d: Divisor) {
        if self.analytic(d.int, &d.form, &d.blocks) {
            self.summary.analytic += 1;
            return;
        }
        let mut min = f64::INFINITY;
        let mut argmin = 0;
        for g in 0..self.samples.len() {
            let v = self.value(&d, g).norm();
            if v < self.delta || (self.delta == 0.0 && v == 0.0) {
                self.excluded[g] = true;
            }
            if v < min {
                min = v;
                argmin = g;
            }
        }
        let (verdict, witness) = if min >= self.delta {
            (A2Verdict::LowerBounded, Witness::GridMinimum(min))
        } else if let Some(z) = d
            .transversal_allowed
            .then(|| self.directions(&d, argmin).into_iter().find(|z| self.transversal(&d, z)))
            .flatten()
        {
            (A2Verdict::Transversal, Witness::Direction(z))
        } else {
            (A2Verdict::Violated, Witness::Failing { rho: self.samples.grid[argmin].clone(), value: min })
        };
        self.entries.push(VerdictEntry { expr: d.expr, verdict, witness });
    }

    fn filtered(&mut self, expr: DivisorExpression, forced: ModeIndex) {
        self.entries.push(VerdictEntry { expr, verdict: A2Verdict::FilteredByConservation, witness: Witness::ForcedMode(forced) });
    }

    fn scalar_status(&self, j: ModeIndex) -> Scalar {
        if self.eff.spec.is_internal(j) {
            Scalar::Internal
        } else if self.eff.block_of(j).is_some() {
            Scalar::InBlock
        } else {
            Scalar::Free
        }
    }

    fn hyperbolic(&self, a: usize) -> bool {
        self.modes[a].hyperbolic
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Scalar {
    Internal,
    InBlock,
    Free,
}

fn lattice(n: usize, k_max: i64) -> impl Iterator<Item = Vec<i64>> {
    let side = (2 * k_max + 1) as usize;
    (0..side.pow(n as u32)).filter_map(move |mut idx| {
        let mut k = vec![0i64; n];
        for x in k.iter_mut() {
            *x = (idx % side) as i64 - k_max;
            idx /= side;
        }
        k.iter().any(|&x| x != 0).then_some(k)
    })
}

/// Integers `x ≡ parity (mod 2)` with `lo < x² < hi`.
fn ring(lo: f64, hi: f64, parity: i64) -> Vec<i64> {
    if hi <= 0.0 {
        return Vec::new();
    }
    let top = hi.sqrt().ceil() as i64 + 1;
    (-top..=top).filter(|x| (x - parity).rem_euclid(2) == 0 && ((x * x) as f64) < hi && ((x * x) as f64) > lo).collect()
}

fn run<'a>(eff: &'a EffectiveHamiltonian, delta: f64, k_max: i64, grid: &[Vec<f64>]) -> Ctx<'a> {
    let mut cx = Ctx::new(eff, delta, grid);
    let n = cx.m.len();
    let nb = cx.modes.len();
    let scalar = |j: ModeIndex| ModeLabel::Scalar(j);
    for k in lattice(n, k_max) {
        let sum: i64 = k.iter().sum();
        let km = cx.k_dot_m(&k) as i128;
        let (k0, fk) = cx.omega_k(&k);
        let expr = |kind, modes: Vec<ModeLabel>| DivisorExpression { kind, k: k.clone(), modes };

        // Ω·k
        cx.assess(Divisor { expr: expr(DivisorKind::OmegaK, vec![]), int: k0, form: fk.clone(), blocks: vec![], transversal_allowed: true });

        // Ω·k + Λ_a
        let mut matched = false;
        if sum == -1 {
            matched = true;
            let j = -km as i64;
            let e = expr(DivisorKind::OmegaKPlusLambda, vec![scalar(j)]);
            match cx.scalar_status(j) {
                Scalar::Internal => cx.filtered(e, j),
                Scalar::InBlock => cx.summary.frame_covered += 1,
                Scalar::Free => {
                    let mut f = fk.clone();
                    f.add_scaled(&cx.shift, 1.0);
                    cx.assess(Divisor { expr: e, int: k0 + (j as i128).pow(2), form: f, blocks: vec![], transversal_allowed: true });
                }
            }
        }
        for a in 0..nb {
            let ma = &cx.modes[a];
            if sum == -ma.mass && km == -(ma.momentum as i128) {
                matched = true;
                let e = expr(DivisorKind::OmegaKPlusLambda, vec![ma.label]);
                let int = k0 + ma.zeroth;
                cx.assess(Divisor { expr: e, int, form: fk.clone(), blocks: vec![(a, 1.0)], transversal_allowed: !cx.hyperbolic(a) });
            }
        }
        if !matched {
            cx.summary.mass_filtered += 1;
        }

        // Ω·k + Λ_a + Λ_b
        if sum == -2 {
            cx.summary.families += 1;
            let p = -km;
            let mut f = fk.clone();
            f.add_scaled(&cx.shift, 2.0);
            let (flo, fhi) = f.range(&cx.center, &cx.half);
            let t = delta + cx.nu2 * flo.abs().max(fhi.abs());
            // N = k0 + j² + (p − j)² = k0 + p²/2 + x²/2 with x = 2j − p
            let base = 2.0 * k0 as f64 + (p * p) as f64;
            for x in ring(-2.0 * t - base, 2.0 * t - base, (p.rem_euclid(2)) as i64) {
                if x > 0 {
                    continue;
                }
                let j = ((x as i128 + p) / 2) as i64;
                let l = p as i64 - j;
                let e = expr(DivisorKind::OmegaKPlusLambdaPlusLambda, vec![scalar(j), scalar(l)]);
                match (cx.scalar_status(j), cx.scalar_status(l)) {
                    (Scalar::Free, Scalar::Free) => {
                        let int = k0 + (j as i128).pow(2) + (l as i128).pow(2);
                        cx.assess(Divisor { expr: e, int, form: f.clone(), blocks: vec![], transversal_allowed: true });
                    }
                    (Scalar::Internal, _) => cx.filtered(e, j),
                    (_, Scalar::Internal) => cx.filtered(e, l),
                    _ => cx.summary.frame_covered += 1,
                }
            }
        }
        for a in 0..nb {
            let ma = cx.modes[a].clone();
            // scalar j with block mode a
            if sum == -1 - ma.mass {
                let j = (-km - ma.momentum as i128) as i64;
                let e = expr(DivisorKind::OmegaKPlusLambdaPlusLambda, vec![scalar(j), ma.label]);
                match cx.scalar_status(j) {
                    Scalar::Internal => cx.filtered(e, j),
                    Scalar::InBlock => cx.summary.frame_covered += 1,
                    Scalar::Free => {
                        let mut f = fk.clone();
                        f.add_scaled(&cx.shift, 1.0);
                        let int = k0 + (j as i128).pow(2) + ma.zeroth;
                        cx.assess(Divisor { expr: e, int, form: f, blocks: vec![(a, 1.0)], transversal_allowed: !ma.hyperbolic });
                    }
                }
            }
            for b in a..nb {
                let mb = &cx.modes[b];
                if sum == -ma.mass - mb.mass && km == -(ma.momentum as i128) - mb.momentum as i128 {
                    let e = expr(DivisorKind::OmegaKPlusLambdaPlusLambda, vec![ma.label, mb.label]);
                    let int = k0 + ma.zeroth + mb.zeroth;
                    let allowed = !(ma.hyperbolic && mb.hyperbolic);
                    let blocks = if a == b { vec![(a, 2.0)] } else { vec![(a, 1.0), (b, 1.0)] };
                    cx.assess(Divisor { expr: e, int, form: fk.clone(), blocks, transversal_allowed: allowed });
                }
            }
        }

        // Ω·k + Λ_a − Λ_b, a ≠ b
        if sum == 0 {
            let d = -km;
            if d == 0 {
                cx.summary.reduces_to_omega_k += 1;
            } else {
                cx.summary.families += 1;
                let (flo, fhi) = fk.range(&cx.center, &cx.half);
                let t = delta + cx.nu2 * flo.abs().max(fhi.abs());
                // N = k0 + 2dj − d² is linear in j
                let lo = ((d * d - k0) as f64 - t) / (2 * d) as f64;
                let hi = ((d * d - k0) as f64 + t) / (2 * d) as f64;
                let (lo, hi) = (lo.min(hi).floor() as i64, lo.max(hi).ceil() as i64);
                for j in lo..=hi {
                    let l = j - d as i64;
                    let int = k0 + 2 * d * j as i128 - d * d;
                    if (int as f64).abs() >= t {
                        continue;
                    }
                    let e = expr(DivisorKind::OmegaKPlusLambdaMinusLambda, vec![scalar(j), scalar(l)]);
                    match (cx.scalar_status(j), cx.scalar_status(l)) {
                        (Scalar::Free, Scalar::Free) => {
                            cx.assess(Divisor { expr: e, int, form: fk.clone(), blocks: vec![], transversal_allowed: true })
                        }
                        (Scalar::Internal, _) => cx.filtered(e, j),
                        (_, Scalar::Internal) => cx.filtered(e, l),
                        _ => cx.summary.frame_covered += 1,
                    }
                }
            }
        }
        for a in 0..nb {
            let ma = cx.modes[a].clone();
            // +Λ_j − Λ_a and +Λ_a − Λ_j
            for (sj, sa) in [(1i64, -1i64), (-1, 1)] {
                if sum + sj + sa * ma.mass != 0 {
                    continue;
                }
                let j = (-(km + (sa * ma.momentum) as i128) * sj as i128) as i64;
                let modes = if sj > 0 { vec![scalar(j), ma.label] } else { vec![ma.label, scalar(j)] };
                let e = expr(DivisorKind::OmegaKPlusLambdaMinusLambda, modes);
                match cx.scalar_status(j) {
                    Scalar::Internal => cx.filtered(e, j),
                    Scalar::InBlock => cx.summary.frame_covered += 1,
                    Scalar::Free => {
                        let mut f = fk.clone();
                        f.add_scaled(&cx.shift, sj as f64);
                        let int = k0 + sj as i128 * (j as i128).pow(2) + sa as i128 * ma.zeroth;
                        let blocks = vec![(a, sa as f64)];
                        cx.assess(Divisor { expr: e, int, form: f, blocks, transversal_allowed: !ma.hyperbolic });
                    }
                }
            }
            for b in 0..nb {
                if a == b {
                    continue;
                }
                let mb = &cx.modes[b];
                if sum + ma.mass - mb.mass == 0 && km + ma.momentum as i128 - mb.momentum as i128 == 0 {
                    let e = expr(DivisorKind::OmegaKPlusLambdaMinusLambda, vec![ma.label, mb.label]);
                    let int = k0 + ma.zeroth - mb.zeroth;
                    let allowed = !(ma.hyperbolic && mb.hyperbolic);
                    cx.assess(Divisor { expr: e, int, form: fk.clone(), blocks: vec![(a, 1.0), (b, -1.0)], transversal_allowed: allowed });
                }
            }
        }
    }
    cx
}

/// Checks every admissible divisor with `|k|∞ <= k_max`. Expressions are
/// evaluated on `grid`; transversality of polynomial divisors is exact on
/// the torus' domain.
pub fn check_a2(eff: &EffectiveHamiltonian, delta: f64, k_max: i64, grid: &[Vec<f64>]) -> HypothesisReport {
    let cx = run(eff, delta, k_max, grid);
    let mut entries = cx.entries;
    entries.sort_by(|a, b| a.expr.cmp(&b.expr));
    HypothesisReport { delta, k_max, entries, summary: cx.summary }
}

/// Fraction of the `res^n` domain grid on which some admissible divisor is
/// smaller than δ (for δ = 0: exactly zero).
pub fn measure_scan(eff: &EffectiveHamiltonian, delta: f64, k_max: i64, res: usize) -> f64 {
    let grid = eff.spec.domain.grid(res);
    let cx = run(eff, delta, k_max, &grid);
    cx.excluded.iter().filter(|&&e| e).count() as f64 / grid.len() as f64
}
