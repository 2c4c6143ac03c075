//! Structured reports behind the command-line front end.
//!
//! Every command produces one JSON document with the command echo, a datum
//! fingerprint, results and caveats. Object keys are sorted and no timing is
//! recorded, so output is byte-identical for identical inputs.

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::cone::{imaginary_cone_contains, key_witness, tits_dual_contains, verify_cone_identities, ConeQuery};
use crate::datum::CoxeterDatum;
use crate::dihedral::{decompose_reflections, maximal_dihedral};
use crate::dominance::{dominance_cover, dominates, enumerate_dn, DnReport};
use crate::element::{parse_word, reduce_word, render_word, GroupElement};
use crate::error::{Error, Result};
use crate::height::{describe_stop, enumerate_tn, infinity_height, standard_height, stored_positive, verify_height_identities};
use crate::scalar::{parse_vec, render_vec, Scalar};
use crate::store::{classify_root, RootId, RootStore};

/// Default maximum length for the Tits-dual cross-check.
pub const TITS_CHECK_LEN: usize = 6;

#[derive(Clone, Debug, Serialize)]
pub struct Bounds {
    /// Enumeration depth.
    pub depth: usize,
    /// Largest `n` for `D_n` and `T_n`.
    pub n: usize,
    /// Largest reflection length for the height identities.
    pub max_len: usize,
    /// Root depth for the cone sweep.
    pub cone_depth: usize,
    /// Element length for the cone sweep's `wv - v >= 0` check.
    pub cone_len: usize,
}

impl Bounds {
    pub fn from_depth(depth: usize, n: usize) -> Self {
        Self { depth, n, max_len: depth, cone_depth: depth.min(6), cone_len: 4 }
    }
}

/// Inputs shared by every command, already parsed.
#[derive(Clone, Debug, Default)]
pub struct Request {
    pub depth: Option<usize>,
    pub n: Option<usize>,
    pub x: Option<String>,
    pub y: Option<String>,
    pub word: Option<String>,
    /// Cap on stored positive roots.
    pub max_roots: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Validate,
    Roots,
    Dominates,
    Dn,
    SmallRoots,
    Height,
    Tn,
    Decompose,
    Chains,
    Cone,
    Witness,
    Verify,
    Report,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Roots => "roots",
            Command::Dominates => "dominates",
            Command::Dn => "dn",
            Command::SmallRoots => "small-roots",
            Command::Height => "height",
            Command::Tn => "tn",
            Command::Decompose => "decompose",
            Command::Chains => "chains",
            Command::Cone => "cone",
            Command::Witness => "witness",
            Command::Verify => "verify",
            Command::Report => "report",
        }
    }
}

/// Hex SHA-256 of the canonical datum text plus backend and tolerance.
pub fn fingerprint<S: Scalar>(d: &CoxeterDatum<S>) -> String {
    let mut h = Sha256::new();
    h.update(d.to_datum_text().as_bytes());
    h.update(format!("backend={} epsilon={:e}", S::NAME, d.tol().epsilon).as_bytes());
    hex::encode(h.finalize())
}

struct Ctx<S: Scalar> {
    store: RootStore<S>,
    caveats: Vec<String>,
}

impl<S: Scalar> Ctx<S> {
    fn d(&self) -> &CoxeterDatum<S> {
        self.store.datum()
    }

    fn vector(&self, label: &str, text: Option<&String>) -> Result<Vec<S>> {
        let text = text.ok_or_else(|| Error::Input(format!("missing --{label}")))?;
        let v = parse_vec::<S>(text)
            .ok_or_else(|| Error::Input(format!("bad --{label} literal `{text}`")))?;
        self.d().check_dim(&v)?;
        Ok(v)
    }

    /// Depth of `|v|` when `v` is a root.
    fn root_depth(&self, v: &[S]) -> Result<usize> {
        classify_root(self.d(), v)
            .map(|(_, depth)| depth)
            .ok_or_else(|| Error::UnknownRoot(render_vec(v)))
    }

    fn ensure(&mut self, depth: usize) -> Result<()> {
        self.store.enumerate_to_depth(depth)
    }

    fn positive_root(&mut self, v: &[S]) -> Result<RootId> {
        let depth = self.root_depth(v)?;
        if self.d().tol().is_negative_vec(v) {
            return Err(Error::UnknownRoot(format!("{} is negative; a positive root is required", render_vec(v))));
        }
        self.ensure(depth)?;
        stored_positive(&self.store, v)
    }

    fn truncation_caveat(&mut self) {
        if !self.store.is_exhausted() {
            let msg = format!("root store truncated at depth {} ({} roots)", self.store.depth(), self.store.len());
            self.caveats.push(msg);
        }
    }
}

fn root_record<S: Scalar>(store: &RootStore<S>, id: RootId) -> Value {
    let r = store.root(id);
    json!({
        "root": render_vec(&r.coeffs),
        "depth": r.depth,
        "word": store.reflection_word(id).word_literal(),
    })
}

fn roots_list<S: Scalar>(store: &RootStore<S>, ids: &[RootId]) -> Vec<Value> {
    ids.iter().map(|&id| root_record(store, id)).collect()
}

fn element_record<S: Scalar>(g: &GroupElement<S>) -> Value {
    json!({ "word": g.word_literal(), "length": g.length() })
}

fn dn_record<S: Scalar>(store: &RootStore<S>, r: &DnReport) -> Value {
    let sets: serde_json::Map<String, Value> = r
        .sets
        .iter()
        .map(|(n, ids)| (n.to_string(), json!({ "count": ids.len(), "roots": roots_list(store, ids) })))
        .collect();
    json!({
        "sets": sets,
        "complete_up_to": r.complete_up_to,
        "depth_scanned": r.depth_scanned,
        "stop": r.stop,
        "certificate": describe_stop(&r.stop),
    })
}

/// Runs one command and returns `(results, caveats)`.
pub fn run_command<S: Scalar>(cmd: Command, datum: CoxeterDatum<S>, req: &Request) -> Result<(Value, Vec<String>)> {
    let validation = datum.validate()?;
    let mut store = RootStore::new(datum);
    if let Some(cap) = req.max_roots {
        store = store.with_max_roots(cap);
    }
    let mut ctx = Ctx { store, caveats: Vec::new() };
    if !S::EXACT {
        ctx.caveats.push(format!(
            "float backend: values within epsilon = {:e} are treated as equal",
            ctx.d().tol().epsilon
        ));
    }
    let results = match cmd {
        Command::Validate => serde_json::to_value(&validation).expect("serialisable"),
        Command::Roots => {
            let depth = req.depth.unwrap_or(5);
            ctx.ensure(depth)?;
            let levels: Vec<Value> = (1..=ctx.store.depth())
                .map(|d| json!({ "depth": d, "roots": roots_list(&ctx.store, ctx.store.level(d)) }))
                .collect();
            ctx.truncation_caveat();
            json!({ "count": ctx.store.len(), "exhausted": ctx.store.is_exhausted(), "levels": levels })
        }
        Command::Dominates => {
            let x = ctx.vector("x", req.x.as_ref())?;
            let y = ctx.vector("y", req.y.as_ref())?;
            let verdict = dominates(&ctx.store, &x, &y)?;
            json!({
                "x": render_vec(&x),
                "y": render_vec(&y),
                "form": ctx.d().bilinear(&x, &y)?.render(),
                "holds": verdict.holds,
                "reason": verdict.reason,
            })
        }
        Command::Dn | Command::SmallRoots => {
            let n = if cmd == Command::SmallRoots { 0 } else { req.n.unwrap_or(2) };
            let r = enumerate_dn(&mut ctx.store, n)?;
            dn_record(&ctx.store, &r)
        }
        Command::Tn => {
            let n = req.n.unwrap_or(2);
            let t = enumerate_tn(&mut ctx.store, n)?;
            let sets: serde_json::Map<String, Value> = t
                .sets
                .keys()
                .map(|&k| {
                    let refl = t.reflections(&ctx.store, k);
                    (k.to_string(), json!({ "count": refl.len(), "reflections": refl }))
                })
                .collect();
            json!({
                "sets": sets,
                "complete_up_to": t.dn.complete_up_to,
                "certificate": describe_stop(&t.dn.stop),
            })
        }
        Command::Height => {
            let x = match (&req.x, &req.word) {
                (Some(_), _) => ctx.vector("x", req.x.as_ref())?,
                (None, Some(w)) => reflection_root(ctx.d(), w)?,
                (None, None) => return Err(Error::Input("height needs --x or --word".into())),
            };
            let id = ctx.positive_root(&x)?;
            let report = infinity_height(&ctx.store, id, None)?;
            debug_assert_eq!(report.standard, standard_height(&ctx.store, id));
            serde_json::to_value(report).expect("serialisable")
        }
        Command::Decompose => {
            let x = ctx.vector("x", req.x.as_ref())?;
            let id = ctx.positive_root(&x)?;
            let dep = ctx.store.root(id).depth;
            let window = req.depth.unwrap_or(2 * dep - 1);
            ctx.ensure(window)?;
            let dec = decompose_reflections(&ctx.store, id, window)?;
            if !dec.complete {
                ctx.caveats.push(format!(
                    "decomposition window {window} is below {}; planes meeting only deeper roots are omitted",
                    2 * dep - 1
                ));
            }
            let planes: Vec<Value> = dec
                .planes
                .iter()
                .map(|p| {
                    json!({
                        "canonical_pair": [render_vec(&p.subsystem.a), render_vec(&p.subsystem.b)],
                        "kind": p.subsystem.kind,
                        "height": p.height,
                        "roots_in_window": p.subsystem.roots.len(),
                    })
                })
                .collect();
            json!({
                "reflection": render_vec(&x),
                "window": dec.window,
                "complete": dec.complete,
                "partition_verified": dec.partition_verified,
                "standard_height": dep - 1,
                "standard_sum": dec.standard_sum,
                "infinity_sum": dec.infinity_sum,
                "planes": planes,
            })
        }
        Command::Chains => {
            let x = ctx.vector("x", req.x.as_ref())?;
            let y = ctx.vector("y", req.y.as_ref())?;
            let need = ctx.root_depth(&x)? + ctx.root_depth(&y)?;
            ctx.ensure(need)?;
            let sub = maximal_dihedral(&ctx.store, &x, &y)?;
            let k = req.n.unwrap_or(5);
            let chains = if sub.is_infinite() {
                let (a, b) = sub.dominance_chains(ctx.d(), k)?;
                let render = |c: Vec<Vec<S>>| c.iter().map(|v| render_vec(v)).collect::<Vec<_>>();
                json!({ "alpha": render(a), "beta": render(b) })
            } else {
                Value::Null
            };
            json!({
                "canonical_pair": [render_vec(&sub.a), render_vec(&sub.b)],
                "kind": sub.kind,
                "form": sub.form.render(),
                "theta": format!("{:.12}", sub.theta),
                "certified": sub.certified,
                "window": sub.window,
                "roots_in_window": roots_list(&ctx.store, &sub.roots),
                "dominance_chains": chains,
            })
        }
        Command::Cone => {
            let x = ctx.vector("x", req.x.as_ref())?;
            match req.y.as_ref() {
                Some(_) => {
                    let y = ctx.vector("y", req.y.as_ref())?;
                    let verdict = imaginary_cone_contains(&ctx.store, ConeQuery::RootDifference { x: &x, y: &y })?;
                    let need = ctx.root_depth(&x)?.max(ctx.root_depth(&y)?);
                    ctx.ensure(need)?;
                    let tits = tits_dual_contains(&ctx.store, &x, &y, TITS_CHECK_LEN)?;
                    json!({
                        "mode": "root-difference",
                        "vector": render_vec(&crate::matrix::sub(&x, &y)),
                        "status": verdict.status,
                        "witness": verdict.witness.as_ref().map(element_record),
                        "certificate": verdict.certificate,
                        "tits_dual": tits,
                    })
                }
                None => {
                    let verdict = imaginary_cone_contains(&ctx.store, ConeQuery::General(&x))?;
                    json!({
                        "mode": "general",
                        "vector": render_vec(&x),
                        "status": verdict.status,
                        "witness": verdict.witness.as_ref().map(element_record),
                        "certificate": verdict.certificate,
                    })
                }
            }
        }
        Command::Witness => {
            let x = ctx.vector("x", req.x.as_ref())?;
            let y = ctx.vector("y", req.y.as_ref())?;
            let kw = key_witness(ctx.d(), &x, &y)?;
            let need = [ctx.root_depth(&x)?, ctx.root_depth(&y)?, ctx.root_depth(&kw.wx)?, ctx.root_depth(&kw.wy)?]
                .into_iter()
                .max()
                .unwrap_or(1);
            ctx.ensure(need)?;
            let cover = dominance_cover(&ctx.store, &x, &y)?;
            json!({
                "witness": element_record(&kw.w),
                "wx": render_vec(&kw.wx),
                "wy": render_vec(&kw.wy),
                "pairings": kw.pairings.iter().map(Scalar::render).collect::<Vec<_>>(),
                "is_cover": cover.is_cover,
                "between": cover.between.as_ref().map(|v| render_vec(v)),
                "cover_cross_checked": cover.cross_checked,
            })
        }
        Command::Verify | Command::Report => {
            let depth = req.depth.unwrap_or(if cmd == Command::Verify { 6 } else { 8 });
            let n = req.n.unwrap_or(3);
            let out = report_all_with(&mut ctx.store, &Bounds::from_depth(depth, n))?;
            ctx.truncation_caveat();
            out
        }
    };
    Ok((results, ctx.caveats))
}

/// Root of the reflection with the given word (1-based literal).
pub fn reflection_root<S: Scalar>(d: &CoxeterDatum<S>, word: &str) -> Result<Vec<S>> {
    let letters = parse_word(word).ok_or_else(|| Error::Input(format!("bad --word `{word}`")))?;
    let g = reduce_word(d, &letters)?;
    // g x = -x puts x in N(g)
    g.inversion_roots(d)
        .into_iter()
        .find(|x| {
            crate::store::reflection_element(d, x).is_some_and(|r| r.same_element(&g, d))
        })
        .ok_or_else(|| Error::UnknownRoot(format!("word {} is not a reflection", render_word(g.word()))))
}

/// Runs every enumeration and identity check and aggregates one dossier.
pub fn report_all<S: Scalar>(datum: CoxeterDatum<S>, bounds: &Bounds) -> Result<Value> {
    datum.validate()?;
    let mut store = RootStore::new(datum);
    report_all_with(&mut store, bounds)
}

fn report_all_with<S: Scalar>(store: &mut RootStore<S>, b: &Bounds) -> Result<Value> {
    store.enumerate_to_depth(b.depth)?;
    let level_sizes: Vec<usize> = (1..=store.depth()).map(|d| store.level(d).len()).collect();
    let tn = enumerate_tn(store, b.n)?;
    let dn = dn_record(store, &tn.dn);
    let heights = verify_height_identities(store, b.max_len, b.n)?;
    store.enumerate_to_depth(b.cone_depth)?;
    let cone_depth = b.cone_depth.min(store.depth());
    let cone = verify_cone_identities(store, cone_depth, b.cone_len)?;
    let dominated_pairs: usize = store
        .up_to_depth(b.depth)
        .map(|id| crate::dominance::dominated_count(store, id))
        .sum::<Result<usize>>()?;
    let tn_counts: serde_json::Map<String, Value> =
        tn.sets.iter().map(|(k, v)| (k.to_string(), json!(v.len()))).collect();
    Ok(json!({
        "bounds": b,
        "finite_group": store.is_exhausted(),
        "positive_roots": {
            "enumerated": store.len(),
            "level_sizes": level_sizes,
        },
        "dominated_pairs_within_depth": dominated_pairs,
        "dn": dn,
        "tn_counts": tn_counts,
        "height_identities": heights,
        "cone_identities": cone,
        "all_checks_passed": heights.passed && cone.passed,
    }))
}

/// Wraps results in the report envelope.
pub fn envelope<S: Scalar>(cmd: Command, datum: &CoxeterDatum<S>, options: Value, outcome: Result<(Value, Vec<String>)>) -> (Value, i32) {
    let base = |status: &str| {
        json!({
            "command": cmd.name(),
            "options": options.clone(),
            "backend": S::NAME,
            "datum": { "rank": datum.rank(), "fingerprint": fingerprint(datum) },
            "status": status,
        })
    };
    match outcome {
        Ok((results, caveats)) => {
            let failed = results.get("all_checks_passed").is_some_and(|v| v == &Value::Bool(false));
            let mut doc = base(if failed { "checks-failed" } else { "ok" });
            doc["results"] = results;
            doc["caveats"] = json!(caveats);
            (doc, if failed { 2 } else { 0 })
        }
        Err(e) => {
            let mut doc = base("error");
            doc["error"] = error_record(&e);
            (doc, exit_code(&e))
        }
    }
}

pub fn error_record(e: &Error) -> Value {
    json!({ "kind": e.kind(), "message": e.to_string() })
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_inconclusive() {
        2
    } else {
        1
    }
}

/// Plain-text rendering of a report for `--pretty`.
pub fn pretty(v: &Value) -> String {
    let mut out = String::new();
    pretty_into(v, 0, &mut out);
    out
}

fn pretty_into(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                match val {
                    Value::Object(m) if !m.is_empty() => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        pretty_into(val, indent + 1, out);
                    }
                    Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        pretty_into(val, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k:<24} {}\n", scalar_text(val))),
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match item {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}-\n"));
                        pretty_into(item, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}- {}\n", scalar_text(item))),
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar_text(other))),
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => a.iter().map(scalar_text).collect::<Vec<_>>().join("  "),
        Value::Object(m) if m.is_empty() => "{}".into(),
        other => other.to_string(),
    }
}
