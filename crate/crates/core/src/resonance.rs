//! Momentum/energy resonances of the quintic nonlinearity.
//!
//! Every routine here works in exact integer arithmetic. The closed-form
//! solvers for the external pairs are cross-checked against brute force in
//! the tests.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::arith::{exact_div, exact_sqrt};
use crate::error::{Error, Result};
use crate::ModeIndex;

/// An element of the resonant set: two index triples with equal momentum and energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ResonantTuple {
    pub j: [ModeIndex; 3],
    pub l: [ModeIndex; 3],
}

impl ResonantTuple {
    pub fn new(j: [ModeIndex; 3], l: [ModeIndex; 3]) -> Option<Self> {
        is_resonant(&j, &l).then_some(Self { j, l })
    }
}

/// `Σj = Σl` and `Σj² = Σl²`.
pub fn is_resonant(j: &[ModeIndex], l: &[ModeIndex]) -> bool {
    let s = |v: &[ModeIndex]| v.iter().map(|&x| x as i128).sum::<i128>();
    let q = |v: &[ModeIndex]| v.iter().map(|&x| (x as i128) * (x as i128)).sum::<i128>();
    s(j) == s(l) && q(j) == q(l)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SetTag {
    A,
    B,
    C,
    E,
    TwoMode,
}

/// A pair of external modes coupled quadratically to the internal ones.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExternalPair {
    pub s: ModeIndex,
    pub t: ModeIndex,
    /// Internal modes in the order they enter the defining system, e.g.
    /// `(j3, j4)` for 𝒜 or `(j5, j6, j7)` for ℬ.
    pub internal_witness: Vec<ModeIndex>,
    pub set_tag: SetTag,
}

impl ExternalPair {
    pub fn modes(&self) -> Vec<ModeIndex> {
        if self.s == self.t {
            vec![self.s]
        } else {
            vec![self.s, self.t]
        }
    }

    /// The pair in the roles of its defining system: the first entry sits
    /// with the doubled internal mode on the left-hand side (`s` of
    /// `2j3 + s = 2j4 + t`), the second is `t`. For ℬ and ℰ, where the roles
    /// are symmetric, this is `(s, t)` as stored.
    pub fn roles(&self) -> (ModeIndex, ModeIndex) {
        let w = &self.internal_witness;
        let (s, t) = (self.s, self.t);
        match self.set_tag {
            SetTag::A | SetTag::TwoMode => {
                if is_resonant(&[w[0], w[0], s], &[w[1], w[1], t]) {
                    (s, t)
                } else {
                    (t, s)
                }
            }
            SetTag::C => {
                if is_resonant(&[w[1], w[1], s], &[w[0], w[2], t]) {
                    (s, t)
                } else {
                    (t, s)
                }
            }
            SetTag::B | SetTag::E => (s, t),
        }
    }

    /// Re-checks the defining linear and quadratic identities.
    pub fn identities_hold(&self) -> bool {
        let w = &self.internal_witness;
        let (s, t) = (self.s, self.t);
        match self.set_tag {
            // Normalization may have swapped s and t; accept either role.
            SetTag::A | SetTag::TwoMode => {
                is_resonant(&[w[0], w[0], s], &[w[1], w[1], t])
                    || is_resonant(&[w[0], w[0], t], &[w[1], w[1], s])
            }
            SetTag::B => is_resonant(&[w[0], w[0], w[1]], &[w[2], s, t]),
            SetTag::C => {
                is_resonant(&[w[1], w[1], s], &[w[0], w[2], t])
                    || is_resonant(&[w[1], w[1], t], &[w[0], w[2], s])
            }
            SetTag::E => s == t && is_resonant(&[w[0], w[0], w[1]], &[w[2], s, s]),
        }
    }
}

/// Exact-integer resonance catalog for a torus.
#[derive(Debug, Clone, PartialEq)]
pub struct ResonanceCatalog {
    pub internal: Vec<ModeIndex>,
    pub a: Vec<ExternalPair>,
    pub b: Vec<ExternalPair>,
    pub c: Vec<ExternalPair>,
    pub e: Vec<ExternalPair>,
    pub disjoint: bool,
    pub one_mode_solutions: Vec<ModeIndex>,
}

impl ResonanceCatalog {
    pub fn all_pairs(&self) -> impl Iterator<Item = &ExternalPair> {
        self.a.iter().chain(&self.b).chain(&self.c).chain(&self.e)
    }

    /// External modes appearing in any set.
    pub fn coupled_modes(&self) -> Vec<ModeIndex> {
        let mut v: Vec<ModeIndex> = self.all_pairs().flat_map(|p| p.modes()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// All resonant tuples with entries in `[-k, k]`, each triple sorted and
/// `j <= l` lexicographically.
pub fn enumerate_r(k: i64) -> Vec<ResonantTuple> {
    assert!(k >= 1, "band must be positive");
    let mut groups: BTreeMap<(i64, i64), Vec<[ModeIndex; 3]>> = BTreeMap::new();
    for a in -k..=k {
        for b in a..=k {
            for c in b..=k {
                groups
                    .entry((a + b + c, a * a + b * b + c * c))
                    .or_default()
                    .push([a, b, c]);
            }
        }
    }
    let mut out = Vec::new();
    for triples in groups.values() {
        for (i, j) in triples.iter().enumerate() {
            for l in &triples[i..] {
                out.push(ResonantTuple { j: *j, l: *l });
            }
        }
    }
    out.sort_unstable();
    out
}

/// Solves `2p + s = 2q + t`, `2p² + s² = 2q² + t²` for the unique pair, if any.
pub fn solve_two_mode_pair(p: ModeIndex, q: ModeIndex) -> Option<ExternalPair> {
    assert_ne!(p, q, "internal modes must differ");
    let gap = q - p;
    if gap % 2 != 0 {
        return None;
    }
    let n = gap / 2;
    let (s, t) = (p + 3 * n, p - n);
    debug_assert!(is_resonant(&[p, p, s], &[q, q, t]));
    if s == p || s == q || t == p || t == q {
        return None;
    }
    Some(normalized(s, t, vec![p, q], SetTag::TwoMode))
}

/// Solutions `ℓ ∉ internal` of `2j1 + j2 = 2j3 + ℓ`, `2j1² + j2² = 2j3² + ℓ²`.
pub fn solve_one_mode(j: [ModeIndex; 3], internal: &[ModeIndex]) -> Vec<ModeIndex> {
    let l = 2 * j[0] + j[1] - 2 * j[2];
    if is_resonant(&[j[0], j[0], j[1]], &[j[2], j[2], l]) && !internal.contains(&l) {
        vec![l]
    } else {
        Vec::new()
    }
}

/// Union of [`solve_one_mode`] over all ordered internal selections.
pub fn one_mode_solutions(internal: &[ModeIndex]) -> Vec<ModeIndex> {
    let mut out = Vec::new();
    for &a in internal {
        for &b in internal {
            for &c in internal {
                out.extend(solve_one_mode([a, b, c], internal));
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn normalized(s: ModeIndex, t: ModeIndex, witness: Vec<ModeIndex>, set_tag: SetTag) -> ExternalPair {
    let (s, t) = if s <= t { (s, t) } else { (t, s) };
    ExternalPair { s, t, internal_witness: witness, set_tag }
}

/// Given `x + y = sum` and `x² + y² = sumsq`, returns `(min, max)` when integral.
fn pair_from_sums(sum: i128, sumsq: i128) -> Option<(i128, i128)> {
    // (x - y)² = 2(x² + y²) − (x + y)²
    let d = exact_sqrt(2 * sumsq - sum * sum)?;
    let lo = exact_div(sum - d, 2)?;
    Some((lo, sum - lo))
}

fn solve_a(j3: ModeIndex, j4: ModeIndex) -> Option<(ModeIndex, ModeIndex)> {
    // s - t = 2(j4 - j3), s + t = j3 + j4
    let (s, t) = ((3 * j4 - j3) / 2, (3 * j3 - j4) / 2);
    ((3 * j4 - j3) % 2 == 0 && is_resonant(&[j3, j3, s], &[j4, j4, t])).then_some((s, t))
}

fn solve_b(j5: ModeIndex, j6: ModeIndex, j7: ModeIndex) -> Option<(ModeIndex, ModeIndex)> {
    let sum = (2 * j5 + j6 - j7) as i128;
    let sumsq = (2 * j5 * j5 + j6 * j6 - j7 * j7) as i128;
    let (s, t) = pair_from_sums(sum, sumsq)?;
    Some((s as ModeIndex, t as ModeIndex))
}

fn solve_c(j8: ModeIndex, j9: ModeIndex, j10: ModeIndex) -> Option<(ModeIndex, ModeIndex)> {
    // s - t = j8 + j10 - 2 j9 =: d,  s² - t² = j8² + j10² - 2 j9² =: e
    let d = (j8 + j10 - 2 * j9) as i128;
    let e = (j8 * j8 + j10 * j10 - 2 * j9 * j9) as i128;
    if d == 0 {
        return None;
    }
    let sum = exact_div(e, d)?;
    let s = exact_div(sum + d, 2)?;
    let t = sum - s;
    let (s, t) = (s as ModeIndex, t as ModeIndex);
    is_resonant(&[j9, j9, s], &[j8, j10, t]).then_some((s, t))
}

fn solve_e(j11: ModeIndex, j12: ModeIndex, j13: ModeIndex) -> Option<ModeIndex> {
    let twice = 2 * j11 + j12 - j13;
    if twice % 2 != 0 {
        return None;
    }
    let s = twice / 2;
    is_resonant(&[j11, j11, j12], &[j13, s, s]).then_some(s)
}

/// Solves the four external-pair systems over all ordered internal selections.
///
/// Selections that reproduce another set's monomial are skipped: 𝒞 needs
/// `j8 ≠ j10` (otherwise it is the 𝒜 system).
pub fn enumerate_sets(internal: &[ModeIndex], bound: i64) -> Result<ResonanceCatalog> {
    if !(2..=3).contains(&internal.len()) {
        return Err(Error::InvalidSpec("two or three internal modes required"));
    }
    let max_abs = internal.iter().map(|x| x.abs()).max().unwrap_or(0);
    if bound < max_abs + 1 {
        return Err(Error::PreconditionViolated("bound must exceed every internal mode"));
    }
    let is_internal = |x: ModeIndex| internal.contains(&x);
    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut c = Vec::new();
    let mut e = Vec::new();
    let check = |x: ModeIndex| -> Result<()> {
        if x.abs() > bound {
            Err(Error::BoundTooSmall { bound, mode: x })
        } else {
            Ok(())
        }
    };

    for &x in internal {
        for &y in internal {
            if x == y {
                continue;
            }
            if let Some((s, t)) = solve_a(x, y) {
                if s != t && !is_internal(s) && !is_internal(t) {
                    check(s)?;
                    check(t)?;
                    let tag = if internal.len() == 2 { SetTag::TwoMode } else { SetTag::A };
                    a.push(normalized(s, t, vec![x, y], tag));
                }
            }
            for &z in internal {
                if let Some((s, t)) = solve_b(x, y, z) {
                    if s != t && !is_internal(s) && !is_internal(t) {
                        check(s)?;
                        check(t)?;
                        b.push(normalized(s, t, vec![x, y, z], SetTag::B));
                    }
                }
                if x != z {
                    if let Some((s, t)) = solve_c(x, y, z) {
                        if s != t && !is_internal(s) && !is_internal(t) {
                            check(s)?;
                            check(t)?;
                            c.push(normalized(s, t, vec![x, y, z], SetTag::C));
                        }
                    }
                }
            }
        }
        for &y in internal {
            for &z in internal {
                if let Some(s) = solve_e(x, y, z) {
                    if !is_internal(s) {
                        check(s)?;
                        e.push(ExternalPair { s, t: s, internal_witness: vec![x, y, z], set_tag: SetTag::E });
                    }
                }
            }
        }
    }

    for set in [&mut a, &mut b, &mut c, &mut e] {
        dedup_pairs(set);
    }
    let disjoint = {
        let mut seen: BTreeMap<ModeIndex, usize> = BTreeMap::new();
        let mut ok = true;
        for (idx, set) in [&a, &b, &c, &e].iter().enumerate() {
            for pair in set.iter() {
                for m in pair.modes() {
                    if let Some(&prev) = seen.get(&m) {
                        ok &= prev == idx;
                    }
                    seen.insert(m, idx);
                }
            }
        }
        ok
    };
    Ok(ResonanceCatalog {
        internal: internal.to_vec(),
        a,
        b,
        c,
        e,
        disjoint,
        one_mode_solutions: one_mode_solutions(internal),
    })
}

/// Keeps one entry per `(s, t)`, with the smallest witness.
fn dedup_pairs(set: &mut Vec<ExternalPair>) {
    set.sort_by(|x, y| (x.s, x.t, &x.internal_witness).cmp(&(y.s, y.t, &y.internal_witness)));
    set.dedup_by(|x, y| x.s == y.s && x.t == y.t);
}

/// Default search bound `4·max|internal| + 8`.
pub fn default_bound(internal: &[ModeIndex]) -> i64 {
    4 * internal.iter().map(|x| x.abs()).max().unwrap_or(0) + 8
}

/// Parameters of the polynomial family of ℬ-type quintuples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyParams {
    pub p: ModeIndex,
    pub k: i64,
    pub n: i64,
    pub r: i64,
}

/// `(p, q, m, s, t)` with `2p + q = m + s + t` and `2p² + q² = m² + s² + t²`.
pub fn appendix_b_family(params: FamilyParams) -> Result<[ModeIndex; 5]> {
    let FamilyParams { p, k, n, r } = params;
    if k == 0 || (n == 0 && r == 0) {
        return Err(Error::InvalidFamilyParams);
    }
    let q = p + k * (n * n - n * r + r * r);
    let m = p + k * n * r;
    let s = p + k * (r * r - n * r);
    let t = p + k * (n * n - n * r);
    let quint = [p, q, m, s, t];
    assert!(is_resonant(&[p, p, q], &[m, s, t]), "family identity failed for {params:?}");
    for i in 0..5 {
        for j in i + 1..5 {
            if quint[i] == quint[j] {
                return Err(Error::DegenerateQuintuple(quint));
            }
        }
    }
    Ok(quint)
}

/// Recovers family parameters for a ℬ-type quintuple, up to permutations of
/// `(m, s, t)`, with `|k|, |n|, |r| <= search_bound`. Degenerate quintuples
/// give `None`.
pub fn family_covers(quint: [ModeIndex; 5], search_bound: i64) -> Result<Option<FamilyParams>> {
    let [p, q, m, s, t] = quint;
    if !is_resonant(&[p, p, q], &[m, s, t]) {
        return Err(Error::PreconditionViolated("quintuple violates the set-B identities"));
    }
    for i in 0..5 {
        for j in i + 1..5 {
            if quint[i] == quint[j] {
                return Ok(None);
            }
        }
    }
    // With primes denoting offsets from p: m' + t' = k n², m' + s' = k r², m' = k n r.
    let perms = [[m, s, t], [m, t, s], [s, m, t], [s, t, m], [t, m, s], [t, s, m]];
    for [mm, ss, tt] in perms {
        let (mp, sp, tp) = ((mm - p) as i128, (ss - p) as i128, (tt - p) as i128);
        let (kn2, kr2) = (mp + tp, mp + sp);
        for k in 1..=search_bound as i128 {
            for k in [k, -k] {
                let (Some(n2), Some(r2)) = (exact_div(kn2, k), exact_div(kr2, k)) else {
                    continue;
                };
                let (Some(n), Some(r)) = (exact_sqrt(n2), exact_sqrt(r2)) else {
                    continue;
                };
                if n > search_bound as i128 || r > search_bound as i128 {
                    continue;
                }
                for (n, r) in [(n, r), (n, -r), (-n, r), (-n, -r)] {
                    let params = FamilyParams { p, k: k as i64, n: n as i64, r: r as i64 };
                    if let Ok(gen) = appendix_b_family(params) {
                        let mut a = [gen[2], gen[3], gen[4]];
                        let mut b = [m, s, t];
                        a.sort_unstable();
                        b.sort_unstable();
                        if gen[1] == q && a == b {
                            return Ok(Some(params));
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}
