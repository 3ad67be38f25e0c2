//! JSON views of the core analysis types.
//!
//! Values are built as `serde_json::Value`, whose objects are sorted maps, so
//! the same inputs always serialize to the same bytes.

use num_complex::Complex64;
use quintic_core::normal_form::{BlockClass, Classification, ClosedForm, EffectiveHamiltonian, SpectralBlock, Verdict};
use quintic_core::quoted::Discrepancy;
use quintic_core::resonance::{ExternalPair, ResonanceCatalog, SetTag};
use quintic_core::small_divisors::{
    A0Report, A1Entry, A2Verdict, A1Kind, A1Report, ConicSolution, HypothesisReport, ModeLabel, VerdictEntry, Witness,
};
use quintic_core::TorusSpec;
use serde::Serialize;
use serde_json::{json, Value};

pub fn complex(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn complexes(v: &[Complex64]) -> Value {
    Value::Array(v.iter().map(|&z| complex(z)).collect())
}

pub fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("plain data serializes")
}

/// Pretty JSON with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

pub fn spec(s: &TorusSpec) -> Value {
    json!({
        "internal": s.internal,
        "rho": s.rho,
        "nu": s.nu,
        "domain": { "lo": s.domain.lo, "hi": s.domain.hi },
    })
}

fn tag(t: SetTag) -> &'static str {
    match t {
        SetTag::A => "A",
        SetTag::B => "B",
        SetTag::C => "C",
        SetTag::E => "E",
        SetTag::TwoMode => "two-mode",
    }
}

fn pair(p: &ExternalPair) -> Value {
    json!({ "s": p.s, "t": p.t, "witness": p.internal_witness, "set": tag(p.set_tag) })
}

fn pairs(v: &[ExternalPair]) -> Value {
    Value::Array(v.iter().map(pair).collect())
}

pub fn catalog(cat: &ResonanceCatalog) -> Value {
    let (two_mode, a): (Vec<ExternalPair>, Vec<ExternalPair>) =
        cat.a.iter().cloned().partition(|p| p.set_tag == SetTag::TwoMode);
    json!({
        "internal": cat.internal,
        "two_mode": pairs(&two_mode),
        "A": pairs(&a),
        "B": pairs(&cat.b),
        "C": pairs(&cat.c),
        "E": pairs(&cat.e),
        "disjoint": cat.disjoint,
        "one_mode_solutions": cat.one_mode_solutions,
    })
}

pub fn discrepancy(d: &Discrepancy) -> Value {
    match d {
        Discrepancy::SetMembership { set, internal, quoted, computed } => json!({
            "code": d.code(),
            "set": set.to_string(),
            "internal": internal,
            "quoted": quoted,
            "computed": computed,
            "note": "the quoted set differs from the exhaustive enumeration; the enumeration is used",
        }),
        Discrepancy::TwoModeRotation { modes, mismatch } => json!({
            "code": d.code(),
            "modes": modes,
            "mismatch": mismatch,
            "note": "the quoted rotation angle does not diagonalize the block; the computed spectrum is used",
        }),
        Discrepancy::SetEClosedForm { mode, coupling_ratio, mismatch } => json!({
            "code": d.code(),
            "mode": mode,
            "coupling_ratio": coupling_ratio,
            "mismatch": mismatch,
            "note": "the quoted diagonal is the rotating-frame value and the quoted coupling is rescaled; the counted block is used",
        }),
    }
}

pub fn discrepancies(v: &[Discrepancy]) -> Value {
    Value::Array(v.iter().map(discrepancy).collect())
}

fn block_class(c: BlockClass) -> &'static str {
    match c {
        BlockClass::Elliptic => "elliptic",
        BlockClass::Hyperbolic => "hyperbolic",
        BlockClass::Degenerate => "degenerate",
    }
}

fn closed_form(c: &ClosedForm) -> Value {
    match c {
        ClosedForm::TwoMode { lambda_s, lambda_t, coupling, alpha_quoted, alpha_derived, quoted_pair, derived_pair, mismatch } => {
            json!({
                "type": "two-mode",
                "lambda_s": lambda_s, "lambda_t": lambda_t, "coupling": coupling,
                "alpha_quoted": alpha_quoted, "alpha_derived": alpha_derived,
                "quoted_pair": quoted_pair, "derived_pair": derived_pair, "mismatch": mismatch,
            })
        }
        ClosedForm::SetB { witness, lambda_s, lambda_t, coupling, a, b, delta, alpha, lambda_minus, lambda_plus, mismatch, per_witness } => {
            json!({
                "type": "set-B",
                "witness": witness, "lambda_s": lambda_s, "lambda_t": lambda_t, "coupling": coupling,
                "a": a, "b": b, "delta": delta, "alpha": complex(*alpha),
                "lambda_minus": complex(*lambda_minus), "lambda_plus": complex(*lambda_plus),
                "mismatch": mismatch,
                "per_witness": per_witness.iter().map(|(w, l)| json!({ "witness": w, "lambda": complexes(l) })).collect::<Vec<_>>(),
            })
        }
        ClosedForm::SetE { lambda_s, coupling_quoted, coupling_counted, beta, beta_residual, quoted_eigen, derived_eigen, mismatch } => {
            json!({
                "type": "set-E",
                "lambda_s": lambda_s, "coupling_quoted": coupling_quoted, "coupling_counted": coupling_counted,
                "beta": beta, "beta_residual": beta_residual, "quoted_eigen": quoted_eigen,
                "derived_eigen": complex(*derived_eigen), "mismatch": mismatch,
            })
        }
        ClosedForm::Hermitian { mean, shift, mismatch } => {
            json!({ "type": "hermitian", "mean": mean, "shift": shift, "mismatch": mismatch })
        }
    }
}

pub fn block(b: &SpectralBlock) -> Value {
    let coeff: Vec<Vec<f64>> = (0..b.coeff.nrows()).map(|i| b.coeff.row(i).iter().copied().collect()).collect();
    json!({
        "kind": b.kind.name(),
        "modes": b.modes,
        "reference": b.reference,
        "charges": b.model.charges(),
        "coeff": coeff,
        "eigenvalues": complexes(&b.eigenvalues),
        "normal_frequencies": complexes(&b.normal_frequencies),
        "closed_form": closed_form(&b.transform),
        "classification": block_class(b.classification),
        "max_im": b.max_im,
    })
}

pub fn effective_hamiltonian(e: &EffectiveHamiltonian) -> Value {
    json!({
        "spec": spec(&e.spec),
        "constant": e.constant,
        "omega": e.freqs.omega,
        "band": e.band,
        "scalar_lambdas": e.scalar_lambdas.iter().map(|(j, l)| json!([j, l])).collect::<Vec<_>>(),
        "blocks": e.blocks.iter().map(block).collect::<Vec<_>>(),
    })
}

pub fn classification(c: &Classification) -> Value {
    json!({
        "verdict": match c.verdict { Verdict::Stable => "stable", Verdict::Unstable => "unstable" },
        "hyperbolic_modes": c.hyperbolic_modes,
        "max_im": c.max_im,
    })
}

pub fn label(m: &ModeLabel) -> Value {
    match m {
        ModeLabel::Scalar(j) => json!({ "scalar": j }),
        ModeLabel::Block { reference, branch } => json!({ "block": reference, "branch": branch }),
    }
}

fn witness(w: &Witness) -> Value {
    match w {
        Witness::GridMinimum(v) => json!({ "grid_minimum": v }),
        Witness::Direction(z) => json!({ "direction": z }),
        Witness::Failing { rho, value } => json!({ "failing_rho": rho, "value": value }),
        Witness::ForcedMode(j) => json!({ "forced_mode": j }),
    }
}

pub fn verdict_entry(e: &VerdictEntry) -> Value {
    json!({
        "kind": e.expr.kind.name(),
        "k": e.expr.k,
        "modes": e.expr.modes.iter().map(label).collect::<Vec<_>>(),
        "verdict": e.verdict.name(),
        "witness": witness(&e.witness),
    })
}

/// One compact JSON object per line.
pub fn verdict_lines(r: &HypothesisReport) -> String {
    let mut out = String::new();
    for e in &r.entries {
        out.push_str(&serde_json::to_string(&verdict_entry(e)).expect("values serialize"));
        out.push('\n');
    }
    out
}

pub fn hypothesis_summary(r: &HypothesisReport) -> Value {
    let counts: serde_json::Map<String, Value> =
        A2Verdict::ALL.iter().map(|&v| (v.name().to_string(), json!(r.count(v)))).collect();
    json!({
        "delta": r.delta,
        "k_max": r.k_max,
        "listed": r.entries.len(),
        "counts": counts,
        "certified_analytically": r.summary.analytic,
        "families": r.summary.families,
        "mass_filtered": r.summary.mass_filtered,
        "frame_covered": r.summary.frame_covered,
        "reduces_to_omega_k": r.summary.reduces_to_omega_k,
        "pass": r.pass(),
    })
}

pub fn a0(r: &A0Report) -> Value {
    json!({ "sup": r.sup, "bound": r.bound, "pass": r.pass })
}

fn a1_entry(e: &A1Entry) -> Value {
    let kind = match e.kind {
        A1Kind::Magnitude => "magnitude",
        A1Kind::Imaginary => "imaginary",
        A1Kind::Difference => "difference",
        A1Kind::Sum => "sum",
    };
    json!({ "kind": kind, "a": label(&e.a), "b": e.b.as_ref().map(label), "value": e.value })
}

pub fn a1(r: &A1Report) -> Value {
    json!({
        "delta": r.delta,
        "minima": r.minima.iter().map(a1_entry).collect::<Vec<_>>(),
        "violations": r.violations.iter().map(a1_entry).collect::<Vec<_>>(),
        "tail_certified": r.tail_certified,
        "pass": r.pass,
    })
}

pub fn conic_solutions(v: &[ConicSolution]) -> Value {
    Value::Array(v.iter().map(|s| json!({ "k": s.k, "j": s.j })).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use quintic_core::resonance::enumerate_sets;

    #[test]
    fn catalog_is_sorted_and_stable() {
        let cat = enumerate_sets(&[-3, 10, -6], 48).unwrap();
        let a = render(&catalog(&cat));
        assert_eq!(a, render(&catalog(&cat)));
        let keys: Vec<&str> = a.lines().filter(|l| l.starts_with("  \"")).map(|l| l.trim().split('"').nth(1).unwrap()).collect();
        let mut sorted = keys.clone();
        sorted.sort_unstable();
        assert_eq!(keys, sorted);
        assert_eq!(catalog(&cat)["B"][0]["s"], 1);
        assert_eq!(catalog(&cat)["B"][0]["t"], 9);
    }

    #[test]
    fn complex_pairs() {
        assert_eq!(complex(Complex64::new(1.5, -2.0)), json!([1.5, -2.0]));
    }
}
