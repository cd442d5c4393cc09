//! JSON rendering of verdicts and reports, plus the integer-only system
//! input format. Rationals are always emitted as `"p/q"` strings, and maps
//! use sorted keys, so identical inputs serialize byte-identically.

use serde_json::{json, Map, Value};

use crate::analyzer::{
    BadWeight, Certificate, DualLPoint, HierarchyReport, MainCharReport, MainCharStatus, Property,
    SearchBudget, Status, Verdict,
};
use crate::arith::{format_rat, Int, Rat};
use crate::clutter::{Clutter, IdealReport, IntersectionProfile};
use crate::cone::GscOutcome;
use crate::error::Error;
use crate::lspec::LSpec;
use crate::matrix::IntMat;
use crate::polyhedron::LinearSystem;
use crate::tilt::{Brace, ResiliencyProfile, TiltConstraint};
use num_traits::{One, Signed, Zero};

/// Version stamp carried by every assembled report.
pub const SCHEMA_VERSION: u64 = 1;

fn int_value(v: &Int) -> Value {
    match i64::try_from(v) {
        Ok(small) => json!(small),
        Err(_) => json!(v.to_string()),
    }
}

fn int_vec(v: &[Int]) -> Value {
    Value::Array(v.iter().map(int_value).collect())
}

fn rat_value(r: &Rat) -> Value {
    json!(format_rat(r))
}

fn rat_vec(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(rat_value).collect())
}

fn usize_vec(v: &[usize]) -> Value {
    Value::Array(v.iter().map(|&i| json!(i)).collect())
}

/// Parses the `{"M": [[int]], "b": [int]}` system format. Entries must be
/// JSON integers; fractional entries are rejected with a hint to scale the
/// system (multiply each row and its right-hand side by the denominator).
pub fn parse_system(text: &str) -> Result<LinearSystem, Error> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Parse("expected an object with fields \"M\" and \"b\"".into()))?;
    let m_val = obj.get("M").ok_or_else(|| Error::Parse("missing field \"M\"".into()))?;
    let b_val = obj.get("b").ok_or_else(|| Error::Parse("missing field \"b\"".into()))?;
    let m_rows = m_val
        .as_array()
        .ok_or_else(|| Error::Parse("\"M\" must be an array of rows".into()))?;
    let mut rows: Vec<Vec<Int>> = Vec::with_capacity(m_rows.len());
    let mut ncols: Option<usize> = None;
    for (i, row) in m_rows.iter().enumerate() {
        let entries = row
            .as_array()
            .ok_or_else(|| Error::Parse(format!("M[{i}] must be an array")))?;
        match ncols {
            None => ncols = Some(entries.len()),
            Some(n) if n != entries.len() => {
                return Err(Error::Parse(format!(
                    "M[{i}] has {} entries, expected {n}",
                    entries.len()
                )));
            }
            _ => {}
        }
        let mut out = Vec::with_capacity(entries.len());
        for (j, e) in entries.iter().enumerate() {
            out.push(entry_int(e, &format!("M[{i}][{j}]"))?);
        }
        rows.push(out);
    }
    let b_entries = b_val
        .as_array()
        .ok_or_else(|| Error::Parse("\"b\" must be an array".into()))?;
    if b_entries.len() != rows.len() {
        return Err(Error::Parse(format!(
            "b has {} entries but M has {} rows",
            b_entries.len(),
            rows.len()
        )));
    }
    let mut b = Vec::with_capacity(b_entries.len());
    for (i, e) in b_entries.iter().enumerate() {
        b.push(entry_int(e, &format!("b[{i}]"))?);
    }
    let cols = ncols.unwrap_or(0);
    if cols == 0 {
        return Err(Error::Parse("system must have at least one variable".into()));
    }
    LinearSystem::new(IntMat::from_int_rows(&rows, cols), b)
}

fn entry_int(v: &Value, at: &str) -> Result<Int, Error> {
    if let Some(n) = v.as_i64() {
        return Ok(Int::from(n));
    }
    if v.is_number() {
        return Err(Error::Parse(format!(
            "{at} = {v} is not an integer; scale the row and its right-hand side \
             by the denominator first"
        )));
    }
    Err(Error::Parse(format!("{at} must be a JSON integer, got {v}")))
}

pub fn system_value(sys: &LinearSystem) -> Value {
    let rows: Vec<Value> = (0..sys.nrows()).map(|i| int_vec(sys.m.row(i))).collect();
    json!({ "M": Value::Array(rows), "b": int_vec(&sys.b) })
}

pub fn property_name(p: &Property) -> String {
    match p {
        Property::Tdi => "tdi".into(),
        Property::NearTdi => "near-tdi".into(),
        Property::Tdd => "tdd".into(),
        Property::TdInL(l) => format!("td-in-{l}"),
    }
}

pub fn status_name(s: Status) -> &'static str {
    match s {
        Status::Certified => "certified",
        Status::Refuted => "refuted",
        Status::Undecided => "undecided",
    }
}

/// Exit code convention shared with the command-line driver.
pub fn exit_code(s: Status) -> i32 {
    match s {
        Status::Certified => 0,
        Status::Refuted => 1,
        Status::Undecided => 2,
    }
}

/// One-line name of the rule the certificate instantiates.
pub fn rule_for(c: &Certificate) -> &'static str {
    match c {
        Certificate::DivisionResiliency { .. } => {
            "division-closure and resiliency sufficient condition"
        }
        Certificate::NondegenerateTdi { .. } => {
            "equality-cone and resiliency characterization (non-degenerate)"
        }
        Certificate::BadWeight(_) => "explicit bad weight",
        Certificate::Exhausted { .. } => "search budget exhausted",
        Certificate::Degenerate { .. } => "degeneracy precondition failed",
        Certificate::ClutterIntersection { .. } => "member-blocker intersection-size condition",
    }
}

fn domain_name(l: &LSpec) -> Value {
    json!(l.to_string())
}

pub fn gsc_value(g: &GscOutcome) -> Value {
    json!({
        "holds": g.holds,
        "counterexample": g.counterexample.as_ref().map(|v| int_vec(v)),
        "multiplier_bound": g.multiplier_bound.as_ref().map(int_value),
        "lattice_points_scanned": g.lattice_points_scanned,
    })
}

pub fn resiliency_value(p: &ResiliencyProfile) -> Value {
    json!({
        "integral": p.integral,
        "resilient": p.resilient,
        "half_resilient": p.half_resilient,
        "p_resilient": p.p_resilient,
        "shifts": Value::Array(
            p.shifts.iter().map(|s| s.as_ref().map(int_value).unwrap_or(Value::Null)).collect()
        ),
        "vacuous": &p.vacuous,
    })
}

pub fn bad_weight_value(b: &BadWeight) -> Value {
    json!({
        "w": int_vec(&b.w),
        "domain": domain_name(&b.lspec),
        "tight_rows": usize_vec(&b.tight_rows),
    })
}

pub fn certificate_value(c: &Certificate) -> Value {
    match c {
        Certificate::DivisionResiliency { p, gsc, profile } => json!({
            "kind": "division-resiliency",
            "p": int_value(p),
            "gsc": gsc_value(gsc),
            "profile": resiliency_value(profile),
        }),
        Certificate::NondegenerateTdi { gsc, profile } => json!({
            "kind": "nondegenerate-tdi",
            "gsc": gsc_value(gsc),
            "profile": resiliency_value(profile),
        }),
        Certificate::BadWeight(b) => {
            let mut v = bad_weight_value(b);
            v.as_object_mut()
                .expect("bad weight renders as an object")
                .insert("kind".into(), json!("bad-weight"));
            v
        }
        Certificate::Exhausted { weight_box, primes, note } => json!({
            "kind": "exhausted",
            "weight_box": weight_box,
            "primes": primes,
            "note": note,
        }),
        Certificate::Degenerate { reason } => json!({
            "kind": "degenerate",
            "reason": reason,
        }),
        Certificate::ClutterIntersection { max_sb, all_in_p, binary, ideal, weight_box } => {
            json!({
                "kind": "clutter-intersection",
                "max_intersection": max_sb,
                "all_in_pattern": all_in_p,
                "binary": binary,
                "ideal": ideal,
                "weight_box": weight_box,
            })
        }
    }
}

pub fn verdict_value(v: &Verdict) -> Value {
    json!({
        "property": property_name(&v.property),
        "status": status_name(v.status),
        "rule": rule_for(&v.certificate),
        "certificate": certificate_value(&v.certificate),
    })
}

pub fn budget_value(b: &SearchBudget) -> Value {
    json!({
        "weight_box": b.weight_box,
        "prime_sample": &b.prime_sample,
        "denominator_cap": b.denominator_cap,
    })
}

pub fn dual_point_value(d: &DualLPoint) -> Value {
    json!({
        "has_point": d.has_point,
        "witness": d.witness.as_ref().map(|v| rat_vec(v)),
        "affine_point": d.affine_point.as_ref().map(|v| rat_vec(v)),
        "tight_rows": usize_vec(&d.tight_rows),
        "note": &d.note,
    })
}

fn subscript(n: usize) -> String {
    n.to_string()
        .chars()
        .map(|c| char::from_u32(0x2080 + c.to_digit(10).expect("digit")).expect("subscript"))
        .collect()
}

/// Renders a tilt constraint as its canonical equation over the dual
/// variables `u_i` (1-based), e.g. `u₂ = 1`.
pub fn tilt_equation(t: &TiltConstraint) -> String {
    let mut lhs = String::new();
    for (&i, c) in t.index_set.iter().zip(&t.coeff) {
        if c.is_zero() {
            continue;
        }
        if lhs.is_empty() {
            if c.is_negative() {
                lhs.push('-');
            }
        } else {
            lhs.push_str(if c.is_negative() { " - " } else { " + " });
        }
        let mag = c.abs();
        if !mag.is_one() {
            lhs.push_str(&mag.to_string());
        }
        lhs.push('u');
        lhs.push_str(&subscript(i + 1));
    }
    if lhs.is_empty() {
        lhs.push('0');
    }
    format!("{lhs} = {}", t.rhs)
}

pub fn tilt_value(t: &TiltConstraint) -> Value {
    json!({
        "equation": tilt_equation(t),
        "index_set": usize_vec(&t.index_set),
        "coeff": int_vec(&t.coeff),
        "rhs": int_value(&t.rhs),
        "w": rat_vec(&t.provenance.w),
        "tau": rat_value(&t.provenance.tau),
        "rho": rat_vec(&t.provenance.rho),
        "face_tight": usize_vec(&t.provenance.f_tight),
        "down_tight": usize_vec(&t.provenance.fplus_tight),
    })
}

pub fn brace_value(b: &Brace) -> Value {
    json!({
        "i_hat": b.i_hat,
        "rho": int_vec(&b.rho),
        "gap": int_value(&b.gap),
    })
}

pub fn main_char_value(r: &MainCharReport) -> Value {
    let status = match &r.status {
        MainCharStatus::Consistent => json!({"kind": "consistent"}),
        MainCharStatus::RefutedGsc => json!({"kind": "refuted-generating-set"}),
        MainCharStatus::RefutedTilt(idx) => {
            json!({"kind": "refuted-tilt", "cases": usize_vec(idx)})
        }
    };
    let cases: Vec<Value> = r
        .cases
        .iter()
        .map(|c| {
            json!({
                "face_tight": usize_vec(&c.face_tight),
                "down_tight": usize_vec(&c.down_tight),
                "w": int_vec(&c.w),
                "canonical": c.canonical,
                "constraint": tilt_value(&c.constraint),
                "solvable": c.solvable,
                "witness": c.witness.as_ref().map(|v| rat_vec(v)),
            })
        })
        .collect();
    json!({
        "domain": domain_name(&r.lspec),
        "mode": match r.mode {
            crate::analyzer::DownFaceMode::All => "all",
            crate::analyzer::DownFaceMode::Any => "any",
        },
        "weight_box": r.weight_box,
        "gsc": gsc_value(&r.gsc),
        "cases": Value::Array(cases),
        "status": status,
    })
}

pub fn hierarchy_value(h: &HierarchyReport) -> Value {
    json!({
        "tdi": verdict_value(&h.tdi),
        "near_tdi": verdict_value(&h.near),
        "integral": h.integral,
    })
}

pub fn clutter_value(c: &Clutter) -> Value {
    let members: Vec<Value> = c
        .members()
        .iter()
        .map(|s| Value::Array(s.iter().map(|&e| json!(e + 1)).collect()))
        .collect();
    json!({ "ground_size": c.ground_size(), "members": Value::Array(members) })
}

pub fn ideal_value(r: &IdealReport) -> Value {
    json!({
        "ideal": r.ideal,
        "fractional_vertex": r.fractional_vertex.as_ref().map(|v| rat_vec(v)),
    })
}

pub fn intersection_value(p: &IntersectionProfile) -> Value {
    json!({
        "max_intersection": p.max_sb,
        "all_in_pattern": p.all_in_p,
        "binary": p.binary,
    })
}

/// Assembles the versioned report envelope. The timing field is the only
/// part that varies between identical runs; comparisons should drop it.
pub fn assemble(
    check: &str,
    input: Value,
    verdicts: Vec<Value>,
    budget: &SearchBudget,
    timing_ms: u64,
) -> Value {
    let mut map = Map::new();
    map.insert("schema".into(), json!(SCHEMA_VERSION));
    map.insert("check".into(), json!(check));
    map.insert("input".into(), input);
    map.insert("verdicts".into(), Value::Array(verdicts));
    map.insert("budget".into(), budget_value(budget));
    map.insert("timing_ms".into(), json!(timing_ms));
    Value::Object(map)
}

/// Serializes with sorted keys; stable across runs for identical values.
pub fn to_string(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("report values contain no non-string keys")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analyzer::decide_tdi_nondegenerate;
    use crate::arith::int;
    use crate::polyhedron::tests::{sys2, sys4};

    #[test]
    fn parse_accepts_integers_only() {
        let sys = parse_system(r#"{"M": [[3,1],[0,1],[-1,0],[0,-1]], "b": [6,3,0,0]}"#).unwrap();
        assert_eq!(sys.nrows(), 4);
        assert_eq!(sys.nvars(), 2);
        assert_eq!(*sys.m.get(0, 0), int(3));

        let err = parse_system(r#"{"M": [[0.5]], "b": [1]}"#).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("scale"), "{msg}");

        assert!(parse_system(r#"{"M": [[1],[1,2]], "b": [0,0]}"#).is_err());
        assert!(parse_system(r#"{"M": [[1]], "b": []}"#).is_err());
        assert!(parse_system(r#"{"b": [0]}"#).is_err());
    }

    #[test]
    fn system_echo_round_trips() {
        let text = r#"{"M": [[2],[3]], "b": [0,0]}"#;
        let sys = parse_system(text).unwrap();
        let echo = system_value(&sys);
        let again = parse_system(&echo.to_string()).unwrap();
        assert_eq!(sys, again);
    }

    #[test]
    fn verdict_serialization_is_deterministic() {
        let v = decide_tdi_nondegenerate(&sys2()).unwrap();
        let a = to_string(&verdict_value(&v));
        let b = to_string(&verdict_value(&decide_tdi_nondegenerate(&sys2()).unwrap()));
        assert_eq!(a, b);
        let parsed: Value = serde_json::from_str(&a).unwrap();
        assert_eq!(parsed, verdict_value(&v));
        assert_eq!(parsed["status"], json!("certified"));
        assert!(parsed["rule"].as_str().unwrap().contains("resiliency"));
    }

    #[test]
    fn tilt_equation_rendering() {
        use crate::arith::int_to_rat;
        use crate::lp::optimal_face;
        use crate::polyhedron::face_from_tight;
        use crate::tilt::tilt_constraint;

        // w = (0,1) selects the vertex (0,3), tight on rows {0,1}; the
        // down-face keeping row 0 yields the canonical constraint u₂ = 1,
        // the one keeping row 1 yields u₁ = 1.
        let sys = sys2();
        let w: Vec<_> = [0, 1].iter().map(|&k| int_to_rat(&int(k))).collect();
        let f = optimal_face(&sys, &w).unwrap();
        assert_eq!(f.tight_set, vec![0, 1]);
        let along0 = face_from_tight(&sys, &[0]).unwrap();
        let t = tilt_constraint(&sys, &w, &f, &along0).unwrap();
        assert_eq!(tilt_equation(&t), "u₂ = 1");
        let along1 = face_from_tight(&sys, &[1]).unwrap();
        let t = tilt_constraint(&sys, &w, &f, &along1).unwrap();
        assert_eq!(tilt_equation(&t), "u₁ = 1");
    }

    #[test]
    fn report_envelope_shape() {
        let budget = SearchBudget::default();
        let v = decide_tdi_nondegenerate(&sys4()).unwrap();
        let rep = assemble(
            "tdi",
            system_value(&sys4()),
            vec![verdict_value(&v)],
            &budget,
            0,
        );
        assert_eq!(rep["schema"], json!(1));
        assert_eq!(rep["check"], json!("tdi"));
        assert_eq!(rep["verdicts"].as_array().unwrap().len(), 1);
        assert_eq!(rep["budget"]["weight_box"], json!(2));
    }

    #[test]
    fn exit_codes_cover_statuses() {
        assert_eq!(exit_code(Status::Certified), 0);
        assert_eq!(exit_code(Status::Refuted), 1);
        assert_eq!(exit_code(Status::Undecided), 2);
    }
}
