//! Replay of the two worked examples against pinned expectations.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Value};
use wsclosure::reduction::{multiplicity, square_reduction_pair};
use wsclosure::{
    classify_reductions, core_via_colon, dim_i_mod_igt, i_greater, integral_closure, intersect_star_two,
    is_reduction_parameter, refute_star_membership, rees_valuations, star_of_min_reduction, ArcSampler, MonomialIdeal,
    Poly, PolyIdeal,
};

use crate::parse::parse_poly;
use crate::run::{Options, Report};

/// Expected values, keyed by ideal and then by the computed object.
pub const EXPECTATIONS: &str = include_str!("../data/expectations.json");

fn names() -> Vec<String> {
    vec!["x".to_string(), "y".to_string()]
}

fn ideal(rows: &[&[u32]]) -> MonomialIdeal {
    MonomialIdeal::from_exponents(2, rows).expect("two-variable exponents")
}

fn poly(s: &str) -> Poly {
    parse_poly(s, &names()).expect("fixed polynomial")
}

fn valuations(i: &MonomialIdeal) -> wsclosure::Result<Value> {
    Ok(json!(rees_valuations(i)?
        .iter()
        .map(|v| json!({ "weight": v.weight, "value": v.value_on_ideal }))
        .collect::<Vec<_>>()))
}

/// Every object the examples pin, computed from scratch.
pub fn compute() -> wsclosure::Result<Value> {
    let n = names();
    let show = |i: &MonomialIdeal| i.display_with(&n);

    let i1 = ideal(&[&[2, 0], &[1, 2], &[0, 3]]);
    let j1 = ideal(&[&[2, 0], &[0, 3]]);
    let star1 = star_of_min_reduction(&PolyIdeal::from_monomial(&j1)?, &i1)?;
    let first = json!({
        "rees_valuations": valuations(&i1)?,
        "integral_closure": show(&integral_closure(&i1)?),
        "igt": show(&i_greater(&i1)?),
        "core (x^2, y^3)": show(&core_via_colon(&i1, &j1)?),
        "dim_igt": dim_i_mod_igt(&i1)?,
        "classify_reductions": classify_reductions(&i1)?.to_string(),
        "star (x^2, y^3) contains x*y^2": star1.contains(&poly("x*y^2")),
    });

    let i2 = ideal(&[&[2, 0], &[1, 1], &[0, 2]]);
    let squares = ideal(&[&[2, 0], &[0, 2]]);
    let one = BigRational::one();
    let (ja, jb) = square_reduction_pair(&one, &one);
    let both = intersect_star_two(&ja, &jb, &i2)?;
    let second = json!({
        "rees_valuations": valuations(&i2)?,
        "igt": show(&i_greater(&i2)?),
        "core (x^2, y^2)": show(&core_via_colon(&i2, &squares)?),
        "colength (x^2, y^2)": squares.colength(),
        "multiplicity": multiplicity(&i2)?,
        "reduction (x^2 + x*y, y^2)": is_reduction_parameter(&ja, &i2)?,
        "reduction (x^2, y^2 + x*y)": is_reduction_parameter(&jb, &i2)?,
        "star intersection a=b=1 modulo igt": both.basis_polys().iter().map(|p| p.display_with(&n)).collect::<Vec<_>>(),
        "dim_igt": dim_i_mod_igt(&i2)?,
        "classify_reductions": classify_reductions(&i2)?.to_string(),
    });

    let refutation = refute_star_membership(&poly("x*y"), &squares, &ArcSampler::default())?;
    let third = json!({
        "x*y refuted": refutation.witness.is_some(),
        "x*y witness": refutation.witness.as_ref().map(|(_, arcs)| arcs.to_string()),
        "x*y witness index": refutation.witness.as_ref().map(|(idx, _)| idx),
    });

    Ok(json!({
        show(&i1): first,
        show(&i2): second,
        show(&squares): third,
    }))
}

/// Leaf values by dotted path; arrays are compared whole.
fn flatten(v: &Value, prefix: &str, out: &mut BTreeMap<String, Value>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let path = if prefix.is_empty() { k.clone() } else { format!("{prefix} / {k}") };
                flatten(x, &path, out);
            }
        }
        _ => {
            out.insert(prefix.to_string(), v.clone());
        }
    }
}

/// Paths where `actual` and `expected` differ, with both values (`null` when absent).
pub fn diff(expected: &Value, actual: &Value) -> Vec<(String, Value, Value)> {
    let (mut e, mut a) = (BTreeMap::new(), BTreeMap::new());
    flatten(expected, "", &mut e);
    flatten(actual, "", &mut a);
    let mut keys: Vec<&String> = e.keys().chain(a.keys()).collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .filter_map(|k| {
            let (x, y) = (e.get(k).cloned().unwrap_or(Value::Null), a.get(k).cloned().unwrap_or(Value::Null));
            (x != y).then(|| (k.clone(), x, y))
        })
        .collect()
}

pub fn paper_examples(opts: &Options, rep: &mut Report) -> wsclosure::Result<()> {
    let text = opts.expectations.as_deref().unwrap_or(EXPECTATIONS);
    let expected: Value = serde_json::from_str(text)
        .map_err(|e| wsclosure::Error::Precondition(format!("expectations are not valid JSON: {e}")))?;
    let actual = compute()?;
    let mut all = BTreeMap::new();
    flatten(&actual, "", &mut all);
    let mismatches = diff(&expected, &actual);
    for path in all.keys() {
        let status = if mismatches.iter().any(|(k, _, _)| k == path) { "FAIL" } else { "PASS" };
        rep.line(format!("{status} {path}"));
    }
    for (path, want, got) in &mismatches {
        rep.line(format!("  {path}: expected {want}, got {got}"));
    }
    rep.line(format!("{} checks, {} mismatches", all.len(), mismatches.len()));
    rep.result = json!({
        "checks": all.len(),
        "mismatches": mismatches
            .iter()
            .map(|(k, want, got)| json!({ "path": k, "expected": want, "actual": got }))
            .collect::<Vec<_>>(),
        "computed": actual,
    });
    rep.mismatch = !mismatches.is_empty();
    Ok(())
}
