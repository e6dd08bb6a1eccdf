//! Execute parsed requests and build reports.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use wsclosure::reduction::{local_colength, multiplicity, DEFAULT_COLENGTH_ORDER_LIMIT};
use wsclosure::relative::{delta, minimal_truncation};
use wsclosure::rrs::verify_report;
use wsclosure::{
    bounded_search, classify_reductions, construct_from_igt, core_via_colon, dim_i_mod_igt, i_greater, in_integral_closure,
    integral_closure, is_reduction_monomial, is_reduction_parameter, newton_polyhedron, refute_star_membership,
    rees_valuations, relative_membership, root_multiplicity, star_of_min_reduction, unique_deep_root_check, vbar,
    zz_membership, ArcPair, ArcSampler, IdealOrder, MonicHypersurface, MonomialIdeal, Poly, RrsSystem, SearchOutcome, Vbar,
};

use crate::parse::{Command, ReductionInput, Request};

/// Version of the JSON layout.
pub const SCHEMA_VERSION: u64 = 1;

/// `q_max` for `rrs search` and the search step of `classify` when `--q-max` is absent.
pub const DEFAULT_SEARCH_Q_MAX: u32 = 3;
/// `q_max` for the constructive certificate when `--q-max` is absent.
pub const DEFAULT_CONSTRUCT_Q_MAX: u32 = 40;
/// Number of seeded sample points for `zz-check h in I`.
pub const ZZ_SAMPLES: usize = 25;

/// Flags shared by every command.
#[derive(Clone, Debug, Default)]
pub struct Options {
    pub seed: u64,
    /// Arc pairs for the refuter (default 500).
    pub budget: Option<usize>,
    /// Truncation for `relclose ... at (arc pair)`; the least valid one when absent.
    pub trunc: Option<u32>,
    pub q_max: Option<u32>,
    /// Replacement expectations for `paper-examples`, as JSON text.
    pub expectations: Option<String>,
}

impl Options {
    fn sampler(&self) -> ArcSampler {
        ArcSampler {
            seed: self.seed,
            count: self.budget.unwrap_or(ArcSampler::default().count),
            ..ArcSampler::default()
        }
    }
}

/// How a report maps to the process exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Definite,
    Inconclusive,
    Failed,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Definite => 0,
            Status::Failed => 1,
            Status::Inconclusive => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub result: Value,
    pub certificates: Option<Value>,
    pub witnesses: Option<Value>,
    pub inconclusive: bool,
    pub budget_used: Value,
    /// Stable error code and message when the command failed.
    pub error: Option<(String, String)>,
    /// A definite run whose checks did not all pass (`paper-examples`).
    pub mismatch: bool,
    /// Human-readable lines.
    pub text: Vec<String>,
}

impl Report {
    fn new(command: &str, inputs: Value) -> Self {
        Report {
            command: command.to_string(),
            inputs,
            result: Value::Null,
            certificates: None,
            witnesses: None,
            inconclusive: false,
            budget_used: Value::Null,
            error: None,
            mismatch: false,
            text: Vec::new(),
        }
    }

    pub(crate) fn line(&mut self, s: impl Into<String>) {
        self.text.push(s.into());
    }

    pub fn status(&self) -> Status {
        if self.error.as_ref().is_some_and(|(code, _)| code != "E_BUDGET") || self.mismatch {
            Status::Failed
        } else if self.inconclusive || self.error.is_some() {
            Status::Inconclusive
        } else {
            Status::Definite
        }
    }

    pub fn to_json(&self) -> Value {
        let mut obj = json!({
            "schema": SCHEMA_VERSION,
            "command": self.command,
            "inputs": self.inputs,
            "result": self.result,
            "inconclusive": self.inconclusive,
            "budget_used": self.budget_used,
        });
        let map = obj.as_object_mut().expect("object literal");
        if let Some(c) = &self.certificates {
            map.insert("certificates".into(), c.clone());
        }
        if let Some(w) = &self.witnesses {
            map.insert("witnesses".into(), w.clone());
        }
        if let Some((code, message)) = &self.error {
            map.insert("error".into(), json!({ "code": code, "message": message }));
        }
        obj
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for l in &self.text {
            out.push_str(l);
            out.push('\n');
        }
        if let Some((code, message)) = &self.error {
            out.push_str(&format!("error[{code}]: {message}\n"));
        }
        out
    }
}

/// Names used for the ring of a request.
struct Ring<'a>(&'a [String]);

impl Ring<'_> {
    fn poly(&self, p: &Poly) -> String {
        p.display_with(self.0)
    }

    fn ideal(&self, i: &MonomialIdeal) -> String {
        i.display_with(self.0)
    }

    fn polys(&self, ps: &[Poly]) -> Vec<String> {
        ps.iter().map(|p| self.poly(p)).collect()
    }

    fn system(&self, sys: &RrsSystem) -> Value {
        json!({ "q": sys.q(), "coeffs": self.polys(sys.coeffs()) })
    }
}

fn rat(x: &BigRational) -> String {
    x.to_string()
}

/// Run one request. Library errors become reports carrying their code.
pub fn run(req: &Request, opts: &Options) -> Report {
    let ring = Ring(&req.ring);
    let inputs = inputs_of(&req.command, &ring);
    let mut report = Report::new(req.command.name(), inputs);
    report.inputs["ring"] = json!(req.ring);
    if let Err(e) = execute(&req.command, &ring, opts, &mut report) {
        report.error = Some((e.code().to_string(), e.to_string()));
    }
    report
}

fn inputs_of(cmd: &Command, r: &Ring) -> Value {
    match cmd {
        Command::Newton(i)
        | Command::Rees(i)
        | Command::Iclose(i)
        | Command::Igt(i)
        | Command::Colength(i)
        | Command::Multiplicity(i)
        | Command::DimIgt(i)
        | Command::ClassifyReductions(i) => json!({ "ideal": r.ideal(i) }),
        Command::Vbar { f, ideal } | Command::Ord { f, ideal } => json!({ "f": r.poly(f), "ideal": r.ideal(ideal) }),
        Command::Reduction { j, ideal } => {
            let j = match j {
                ReductionInput::Monomial(m) => r.ideal(m),
                ReductionInput::Parameter(p) => format!("({})", r.polys(p.generators()).join(", ")),
            };
            json!({ "j": j, "ideal": r.ideal(ideal) })
        }
        Command::Core { j, ideal } => json!({ "j": r.ideal(j), "ideal": r.ideal(ideal) }),
        Command::StarMinRed { j, ideal, member } => json!({
            "j": r.polys(j.generators()),
            "ideal": r.ideal(ideal),
            "member": member.as_ref().map(|m| r.poly(m)),
        }),
        Command::RrsCertify { h, ideal }
        | Command::RrsSearch { h, ideal }
        | Command::ZzCertificate { h, ideal }
        | Command::Classify { h, ideal } => json!({ "h": r.poly(h), "ideal": r.ideal(ideal) }),
        Command::RrsVerify { h, ideal, coeffs } => {
            json!({ "h": r.poly(h), "ideal": r.ideal(ideal), "coeffs": r.polys(coeffs) })
        }
        Command::ZzAt { f, point, root } => json!({
            "f": r.poly(f),
            "point": point.iter().map(rat).collect::<Vec<_>>(),
            "root": rat(root),
        }),
        Command::Relclose { h, ideal, arcs } => json!({
            "h": r.poly(h),
            "ideal": r.ideal(ideal),
            "arcs": arcs.as_ref().map(|(a, b)| format!("({a}, {b})")),
        }),
        Command::PaperExamples => json!({}),
    }
}

fn execute(cmd: &Command, r: &Ring, opts: &Options, rep: &mut Report) -> wsclosure::Result<()> {
    match cmd {
        Command::Newton(i) => {
            let np = newton_polyhedron(i)?;
            let vertices: Vec<Vec<u32>> = np.vertices().iter().map(|v| v.entries().to_vec()).collect();
            let facets: Vec<Value> = np
                .facets()
                .iter()
                .map(|f| json!({ "normal": f.normal, "value": f.value, "bounded": f.bounded }))
                .collect();
            for v in &vertices {
                rep.line(format!("vertex {v:?}"));
            }
            for f in np.facets() {
                let kind = if f.bounded { "bounded" } else { "unbounded" };
                rep.line(format!("facet {:?} . a >= {} ({kind})", f.normal, f.value));
            }
            rep.result = json!({ "vertices": vertices, "facets": facets });
        }
        Command::Rees(i) => {
            let vals = rees_valuations(i)?;
            for v in &vals {
                rep.line(format!("v(a) = {:?} . a, v(I) = {}", v.weight, v.value_on_ideal));
            }
            rep.result = json!(vals
                .iter()
                .map(|v| json!({ "weight": v.weight, "value": v.value_on_ideal }))
                .collect::<Vec<_>>());
        }
        Command::Iclose(i) => {
            let c = integral_closure(i)?;
            rep.line(format!("integral closure: {}", r.ideal(&c)));
            rep.result = json!({ "generators": r.ideal(&c), "integrally_closed": c == *i });
        }
        Command::Igt(i) => {
            let g = i_greater(i)?;
            rep.line(format!("I_> = {}", r.ideal(&g)));
            rep.result = json!({ "generators": r.ideal(&g) });
        }
        Command::Colength(i) => {
            let c = i
                .colength()
                .ok_or_else(|| wsclosure::Error::Unsupported(format!("{} is not of finite colength", r.ideal(i))))?;
            rep.line(format!("colength: {c}"));
            rep.result = json!(c);
        }
        Command::Multiplicity(i) => {
            let e = multiplicity(i)?;
            rep.line(format!("multiplicity: {e}"));
            rep.result = json!(e);
        }
        Command::DimIgt(i) => {
            let d = dim_i_mod_igt(i)?;
            rep.line(format!("dim I/I_> = {d}"));
            rep.result = json!(d);
        }
        Command::ClassifyReductions(i) => {
            let c = classify_reductions(i)?;
            rep.line(format!("{c}"));
            rep.result = json!(c.to_string());
        }
        Command::Vbar { f, ideal } => {
            let v = vbar(f, ideal)?;
            let s = match &v {
                Vbar::Finite(x) => rat(x),
                Vbar::Infinite => "infinity".to_string(),
            };
            rep.line(format!("vbar = {s}"));
            rep.result = json!(s);
        }
        Command::Ord { f, ideal } => {
            let cap = opts.budget.map_or(256, |b| b as u32);
            match ideal.ord(f, cap) {
                IdealOrder::Finite(n) => {
                    rep.line(format!("ord = {n}"));
                    rep.result = json!(n);
                }
                IdealOrder::AtLeast(n) => {
                    rep.line(format!("ord >= {n} (cap reached)"));
                    rep.result = json!({ "at_least": n });
                    rep.inconclusive = true;
                }
                IdealOrder::Infinite => {
                    rep.line("ord = infinity");
                    rep.result = json!("infinity");
                }
            }
            rep.budget_used = json!({ "cap": cap });
        }
        Command::Reduction { j, ideal } => {
            let (is_red, method) = match j {
                ReductionInput::Monomial(m) => (is_reduction_monomial(m, ideal)?, "rees-valuations"),
                ReductionInput::Parameter(p) => (is_reduction_parameter(p, ideal)?, "colength"),
            };
            if let ReductionInput::Parameter(p) = j {
                rep.result = json!({
                    "reduction": is_red,
                    "method": method,
                    "colength": local_colength(p, DEFAULT_COLENGTH_ORDER_LIMIT)?,
                    "multiplicity": multiplicity(ideal)?,
                });
            } else {
                rep.result = json!({ "reduction": is_red, "method": method });
            }
            rep.line(format!("reduction: {is_red} (by {method})"));
        }
        Command::Core { j, ideal } => {
            let c = core_via_colon(ideal, j)?;
            rep.line(format!("core = J^2 : I = {}", r.ideal(&c)));
            rep.result = json!({ "generators": r.ideal(&c) });
        }
        Command::StarMinRed { j, ideal, member } => {
            let star = star_of_min_reduction(j, ideal)?;
            let mut gens = r.polys(j.generators());
            gens.extend(star.igt().generators().iter().rev().map(|g| r.poly(&Poly::monomial(g.clone(), BigRational::from_integer(1.into())))));
            rep.line(format!("*J = J + I_> = ({})", gens.join(", ")));
            rep.result = json!({
                "generators": gens,
                "igt": r.ideal(star.igt()),
                "truncation_order": star.quotient().order(),
                "dim_mod_truncation": star.quotient().dim(),
            });
            if let Some(m) = member {
                let inside = star.contains(m);
                rep.line(format!("{} in *J: {inside}", r.poly(m)));
                rep.result["member"] = json!(inside);
            }
        }
        Command::RrsCertify { h, ideal } => {
            let q_max = opts.q_max.unwrap_or(DEFAULT_CONSTRUCT_Q_MAX);
            let sys = construct_from_igt(h, ideal, q_max)?;
            let ok = wsclosure::verify(h, &sys, ideal);
            rep.line(format!("certificate with q = {}, verified: {ok}", sys.q()));
            for (k, c) in sys.coeffs().iter().enumerate() {
                rep.line(format!("  a_{} = {}", k + 1, r.poly(c)));
            }
            rep.result = json!({ "certified": ok });
            rep.certificates = Some(json!([r.system(&sys)]));
            rep.budget_used = json!({ "q": sys.q(), "q_max": q_max });
        }
        Command::RrsSearch { h, ideal } => {
            let q_max = opts.q_max.unwrap_or(DEFAULT_SEARCH_Q_MAX);
            match bounded_search(h, ideal, q_max, None)? {
                SearchOutcome::Found { system, degree_bounds } => {
                    rep.line(format!("found a system with q = {}", system.q()));
                    for (k, c) in system.coeffs().iter().enumerate() {
                        rep.line(format!("  a_{} = {}", k + 1, r.poly(c)));
                    }
                    rep.result = json!({ "found": true });
                    rep.certificates = Some(json!([r.system(&system)]));
                    rep.budget_used = json!({ "q": system.q(), "q_max": q_max, "degree_bounds": degree_bounds });
                }
                SearchOutcome::NotFound { q_max, slack } => {
                    rep.line(format!("no system up to q = {q_max} (degree slack {slack}); inconclusive"));
                    rep.result = json!({ "found": false });
                    rep.inconclusive = true;
                    rep.budget_used = json!({ "q_max": q_max, "slack": slack });
                }
            }
        }
        Command::RrsVerify { h, ideal, coeffs } => {
            if coeffs.len() % 2 == 0 {
                return Err(wsclosure::Error::Precondition(format!(
                    "a system has 2q+1 coefficients, got {}",
                    coeffs.len()
                )));
            }
            let sys = RrsSystem::new((coeffs.len() as u32 - 1) / 2, coeffs.clone())?;
            match verify_report(h, &sys, ideal) {
                Ok(()) => {
                    rep.line(format!("valid system with q = {}", sys.q()));
                    rep.result = json!({ "valid": true });
                }
                Err(why) => {
                    rep.line(format!("invalid: {why}"));
                    rep.result = json!({ "valid": false, "reason": why.to_string() });
                }
            }
        }
        Command::ZzAt { f, point, root } => {
            let cover = MonicHypersurface::new(f.clone(), r.0.len() - 1)?;
            let inside = zz_membership(&cover, point, root);
            let mult = root_multiplicity(&cover, point, root);
            let deep: Vec<String> = cover.deep_roots(point).iter().map(rat).collect();
            rep.line(format!("in ZZ(F): {inside} (multiplicity {mult}, l = {})", cover.ell()));
            rep.line(format!("deep roots over the point: [{}]", deep.join(", ")));
            rep.result = json!({ "in_zz": inside, "multiplicity": mult, "ell": cover.ell(), "deep_roots": deep });
        }
        Command::ZzCertificate { h, ideal } => {
            let q_max = opts.q_max.unwrap_or(DEFAULT_CONSTRUCT_Q_MAX);
            let sys = construct_from_igt(h, ideal, q_max)?;
            let cover = MonicHypersurface::from_rrs(&sys, None)?;
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            let samples: Vec<Vec<BigRational>> = (0..ZZ_SAMPLES)
                .map(|_| {
                    (0..ideal.nvars())
                        .map(|_| {
                            let d: i64 = rng.gen_range(1..=3);
                            BigRational::new(rng.gen_range(-4 * d..=4 * d).into(), d.into())
                        })
                        .collect()
                })
                .collect();
            let on_locus = samples.iter().all(|x| zz_membership(&cover, x, &h.eval(x)));
            let unique = unique_deep_root_check(&cover, &samples);
            rep.line(format!("F has degree {} in T (q = {})", cover.degree(), sys.q()));
            rep.line(format!("(x, h(x)) in ZZ(F) at {ZZ_SAMPLES} sample points: {on_locus}"));
            rep.line(format!("at most one deep root over each sample: {unique}"));
            rep.result = json!({ "on_locus": on_locus, "unique_deep_root": unique, "degree": cover.degree() });
            rep.certificates = Some(json!([r.system(&sys)]));
            rep.mismatch = !(on_locus && unique);
            rep.budget_used = json!({ "samples": ZZ_SAMPLES });
        }
        Command::Relclose { h, ideal, arcs } => match arcs {
            Some((a, b)) => {
                let pair = wsclosure::delta_pair_of_ideal(ideal)?;
                let joined = ArcPair::new(a.clone(), b.clone())?.joined();
                let k = opts.trunc.unwrap_or_else(|| minimal_truncation(&pair, &joined));
                let inside = relative_membership(&delta(h), &pair, &joined, k)?;
                rep.line(format!("Delta(h) in the relative closure along this pair: {inside} (truncation {k})"));
                rep.result = json!({ "member_along_pair": inside, "truncation": k });
                if !inside {
                    rep.witnesses = Some(json!([{ "index": null, "arcs": format!("({a}, {b})") }]));
                }
            }
            None => {
                let sampler = opts.sampler();
                let refutation = refute_star_membership(h, ideal, &sampler)?;
                match &refutation.witness {
                    Some((idx, arcs)) => {
                        rep.line(format!("refuted by arc pair #{idx}: {arcs}"));
                        rep.result = json!({ "refuted": true });
                        rep.witnesses = Some(json!([{ "index": idx, "arcs": arcs.to_string() }]));
                    }
                    None => {
                        rep.line(format!("no refutation in {} arc pairs; inconclusive", refutation.tried));
                        rep.result = json!({ "refuted": false });
                        rep.inconclusive = true;
                    }
                }
                rep.budget_used = json!({ "arc_pairs": refutation.tried, "seed": sampler.seed });
            }
        },
        Command::Classify { h, ideal } => classify(h, ideal, r, opts, rep)?,
        Command::PaperExamples => crate::examples::paper_examples(opts, rep)?,
    }
    Ok(())
}

/// `classify h in I`: ideal membership, integral closure, `I_>` certificate, bounded
/// search, arc-pair refuter, in that order.
fn classify(h: &Poly, ideal: &MonomialIdeal, r: &Ring, opts: &Options, rep: &mut Report) -> wsclosure::Result<()> {
    let mut steps: Vec<Value> = Vec::new();
    let finish = |rep: &mut Report, verdict: &str, steps: &mut Vec<Value>| {
        rep.line(format!("verdict: {verdict}"));
        rep.result = json!({ "verdict": verdict, "steps": steps.clone() });
    };

    if ideal.contains_poly(h) {
        steps.push(json!({ "step": "ideal-membership", "outcome": "member" }));
        rep.certificates = Some(json!([{ "q": 0, "coeffs": [r.poly(&-h)] }]));
        finish(rep, "IN_IDEAL", &mut steps);
        return Ok(());
    }
    steps.push(json!({ "step": "ideal-membership", "outcome": "not a member" }));

    if !in_integral_closure(h, ideal)? {
        let vals = rees_valuations(ideal)?;
        let v = vals
            .iter()
            .find(|v| v.value_of_poly(h).is_some_and(|x| x < v.value_on_ideal as i128))
            .expect("a nonmember of the closure falls below some Rees valuation");
        rep.witnesses = Some(json!([{
            "valuation": v.weight,
            "value_on_h": v.value_of_poly(h).map(|x| x as i64),
            "value_on_ideal": v.value_on_ideal,
        }]));
        steps.push(json!({ "step": "integral-closure", "outcome": "not in the closure" }));
        finish(rep, "NOT_IN_INTEGRAL_CLOSURE", &mut steps);
        return Ok(());
    }
    steps.push(json!({ "step": "integral-closure", "outcome": "in the closure" }));

    // h = (terms in I) + (terms in I_>) gives a certificate for the second part
    let igt = i_greater(ideal)?;
    let n = ideal.nvars();
    let (mut in_i, mut rest) = (Poly::zero(n), Poly::zero(n));
    for (e, c) in h.terms() {
        let t = Poly::monomial(e.clone(), c.clone());
        if ideal.contains(e) {
            in_i = &in_i + &t;
        } else {
            rest = &rest + &t;
        }
    }
    if rest.terms().all(|(e, _)| igt.contains(e)) {
        match construct_from_igt(&rest, ideal, opts.q_max.unwrap_or(DEFAULT_CONSTRUCT_Q_MAX)) {
            Ok(sys) => {
                steps.push(json!({ "step": "igt-certificate", "outcome": "certified" }));
                let mut cert = r.system(&sys);
                cert["element"] = json!(r.poly(&rest));
                cert["ideal_part"] = json!(r.poly(&in_i));
                rep.certificates = Some(json!([cert]));
                finish(rep, "IN_STAR", &mut steps);
                return Ok(());
            }
            Err(e) if e.code() == "E_BUDGET" => {
                steps.push(json!({ "step": "igt-certificate", "outcome": format!("budget: {e}") }));
            }
            Err(e) => return Err(e),
        }
    } else {
        steps.push(json!({ "step": "igt-certificate", "outcome": "not in I + I_>" }));
    }

    let q_max = opts.q_max.unwrap_or(DEFAULT_SEARCH_Q_MAX);
    match bounded_search(h, ideal, q_max, None) {
        Ok(SearchOutcome::Found { system, .. }) => {
            steps.push(json!({ "step": "bounded-search", "outcome": "found" }));
            rep.certificates = Some(json!([r.system(&system)]));
            rep.budget_used = json!({ "search_q_max": q_max });
            finish(rep, "IN_STAR", &mut steps);
            return Ok(());
        }
        Ok(SearchOutcome::NotFound { .. }) => {
            steps.push(json!({ "step": "bounded-search", "outcome": "not found" }));
        }
        Err(e) if e.code() == "E_BUDGET" => {
            steps.push(json!({ "step": "bounded-search", "outcome": format!("budget: {e}") }));
        }
        Err(e) => return Err(e),
    }

    let sampler = opts.sampler();
    let refutation = refute_star_membership(h, ideal, &sampler)?;
    rep.budget_used = json!({ "search_q_max": q_max, "arc_pairs": refutation.tried, "seed": sampler.seed });
    if let Some((idx, arcs)) = &refutation.witness {
        steps.push(json!({ "step": "arc-refuter", "outcome": "refuted" }));
        rep.line(format!("witness arc pair #{idx}: {arcs}"));
        rep.witnesses = Some(json!([{ "index": idx, "arcs": arcs.to_string() }]));
        finish(rep, "NOT_IN_STAR", &mut steps);
    } else {
        steps.push(json!({ "step": "arc-refuter", "outcome": "no witness" }));
        rep.inconclusive = true;
        finish(rep, "UNKNOWN", &mut steps);
    }
    Ok(())
}
