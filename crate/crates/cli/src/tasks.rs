//! Runs tasks against a built workspace and renders results as JSON.
//! Integers are strings so that arbitrary precision survives; object keys
//! are sorted by `serde_json::Map`.

use std::sync::Arc;

use num_bigint::BigInt;
use serde_json::{json, Value};
use sesq_core::cohomology::{ascend, base_change_compare, cohomology, POINT_ENUMERATION_LIMIT};
use sesq_core::intlin::{FgModule, GroupInvariants, Lattice, Vector};
use sesq_core::scheme::{
    congruence_name, is_unramified, poset_dot, scheme_dot, CongruenceScheme, FiniteSpace,
};
use sesq_core::sesquiad::{
    localize, Polynomial, Separability, Sesquiad, DEFAULT_SEPARABILITY_LIMIT,
};
use sesq_core::smodule::random::{hom, module, rng, Shape};
use sesq_core::smodule::{
    is_exact_pair, is_flat, tensor, Flatness, ModuleHom, SesquiadModule, IDEAL_ENUMERATION_BOUND,
};
use sesq_core::Result;

use crate::build::{Task, Workspace};

/// Bounds and switches shared by every task of a run.
#[derive(Clone, Copy, Debug)]
pub struct Config {
    pub bound_spec: usize,
    pub cap_sep: usize,
    pub seed: u64,
}

/// Points are listed in full up to this many.
const POINT_LISTING_LIMIT: usize = 64;

pub fn provenance(cfg: &Config) -> Value {
    json!({
        "bounds": {
            "spec": cfg.bound_spec.to_string(),
            "separability_cap": cfg.cap_sep.to_string(),
            "separability_search": DEFAULT_SEPARABILITY_LIMIT.to_string(),
            "ideal_enumeration": IDEAL_ENUMERATION_BOUND.to_string(),
            "point_enumeration": POINT_ENUMERATION_LIMIT.to_string(),
        },
        "saturation": "exact-ideal",
        "prime_definition": "0 and 1 in different classes, quotient without zero divisors",
        "seed": cfg.seed.to_string(),
    })
}

/// Modeling decisions a given operation relies on.
fn decisions(op: &str) -> Vec<&'static str> {
    match op {
        "cohomology" => vec![
            "computed on carriers (R-modules) via the Godement resolution, cross-checked against higher limits over the poset",
            "H^p for p >= 1 is reported as the full module on the computed group; degree 0 keeps the point families",
            "X_Z is the same finite space carrying the sheaf of carrier rings",
            "degrees computed up to dim X + 1",
        ],
        "sections" | "flabby" => vec!["sheaves from files have a constant structure sheaf"],
        "spec" | "residues" | "dot" => vec!["points of the spectrum are prime congruences ordered by inclusion"],
        "unramified" | "etale" => vec![
            "separability quantifies over algebraic elements; elements without annihilator up to the cap are listed and impose no condition",
            "flat when R_B is free over R_A on the chosen generators, otherwise by the module flatness test",
        ],
        "flat" => vec!["finite rings: every ideal enumerated; R_A = Z: torsion-freeness; otherwise unknown is possible"],
        _ => vec![],
    }
}

fn int(n: &BigInt) -> Value {
    Value::String(n.to_string())
}

fn vector(v: &Vector) -> Value {
    Value::Array(v.iter().map(int).collect())
}

fn group(g: &GroupInvariants) -> Value {
    json!({
        "free_rank": g.free_rank.to_string(),
        "torsion": g.torsion.iter().map(int).collect::<Vec<_>>(),
        "text": g.to_string(),
    })
}

fn lattice(l: &Lattice) -> Value {
    Value::Array(l.basis().iter().map(vector).collect())
}

fn module_summary(m: &SesquiadModule) -> Value {
    let mut v = json!({
        "carrier": group(&m.carrier().invariants()),
        "rank": m.rank().to_string(),
        "point_count": m.len().to_string(),
        "full": m.is_full_module(),
    });
    if m.len() <= POINT_LISTING_LIMIT {
        v["points"] = Value::Array(m.points().iter().map(vector).collect());
    }
    v
}

fn carrier_summary(m: &FgModule) -> Value {
    group(&m.invariants())
}

fn polynomial(p: &Polynomial, a: &Sesquiad) -> Value {
    Value::String(p.display(a))
}

/// Result payload and an optional DOT rendering.
pub struct Outcome {
    pub result: Value,
    pub dot: Option<String>,
}

fn plain(result: Value) -> Outcome {
    Outcome { result, dot: None }
}

pub fn run_task(w: &Workspace, t: &Task, cfg: &Config) -> Result<Outcome> {
    let a = &t.args;
    match t.op.as_str() {
        "spec" => spec(&w.sesquiads[&a[0]], cfg),
        "congruences" => congruences(&w.sesquiads[&a[0]], cfg).map(plain),
        "simple" => Ok(plain(
            json!({ "simple": w.sesquiads[&a[0]].is_simple(cfg.bound_spec)? }),
        )),
        "residues" => residues(&w.sesquiads[&a[0]], cfg).map(plain),
        "units" => units(&w.sesquiads[&a[0]], cfg).map(plain),
        "closed" => {
            let s = &w.sesquiads[&a[0]];
            let (closed, counter) =
                s.is_algebraically_closed_upto(a[1].parse().expect("checked when building"));
            Ok(plain(json!({
                "degree": a[1],
                "closed": closed,
                "counterexample": counter.map(|p| polynomial(&p, s)),
            })))
        }
        "random" => random(&w.sesquiads[&a[0]], cfg).map(plain),
        "invariants" => Ok(plain(module_summary(&w.modules[&a[0]]))),
        "flat" => flat(&w.modules[&a[0]]).map(plain),
        "tensor" => {
            let p = tensor(&w.modules[&a[0]], &w.modules[&a[1]])?;
            Ok(plain(module_summary(&p.module)))
        }
        "classify" => classify(&w.homs[&a[0]]).map(plain),
        "exact" => exact(&w.homs[&a[0]], &w.homs[&a[1]]).map(plain),
        "separable" => {
            let f = &w.maps[&a[0]];
            let b = f.target.index_of(&a[1]).expect("checked when building");
            let r = f.is_separable(b, cfg.cap_sep, DEFAULT_SEPARABILITY_LIMIT)?;
            Ok(plain(separability(&r, &f.source)))
        }
        "unramified" | "etale" => etale(&w.maps[&a[0]], cfg).map(plain),
        "sections" => sections(&w.sheaves[&a[0]]),
        "cohomology" => cohomology_report(&w.sheaves[&a[0]]),
        "flabby" => Ok(plain(
            json!({ "flabby": ascend(&w.sheaves[&a[0]])?.is_flabby() }),
        )),
        "dot" => {
            let text = match w.spaces.get(&a[0]) {
                Some(space) => poset_dot(space),
                None => scheme_dot(&CongruenceScheme::spec(
                    &w.sesquiads[&a[0]],
                    cfg.bound_spec,
                )?),
            };
            Ok(Outcome {
                result: json!({ "dot": text }),
                dot: Some(text),
            })
        }
        other => unreachable!("operation `{other}` is validated when building"),
    }
}

pub fn task_report(t: &Task, outcome: std::result::Result<&Outcome, String>) -> Value {
    let mut v = json!({
        "name": t.name,
        "op": t.op,
        "args": t.args,
        "decisions": decisions(&t.op),
    });
    match outcome {
        Ok(o) => v["result"] = o.result.clone(),
        Err(e) => v["error"] = Value::String(e),
    }
    v
}

fn space_summary(space: &FiniteSpace) -> Value {
    let mut names: Vec<&str> = space.names().iter().map(String::as_str).collect();
    names.sort();
    let mut covers: Vec<[&str; 2]> = space
        .covers()
        .into_iter()
        .map(|(x, y)| [space.name(x), space.name(y)])
        .collect();
    covers.sort();
    json!({
        "points": names,
        "covers": covers,
        "dimension": space.dimension().to_string(),
        "open_sets": space.opens().len().to_string(),
    })
}

fn spec(s: &Arc<Sesquiad>, cfg: &Config) -> Result<Outcome> {
    let x = CongruenceScheme::spec(s, cfg.bound_spec)?;
    let mut v = space_summary(x.space());
    let mut stalks: Vec<(String, String)> = (0..x.space().len())
        .map(|p| (x.space().name(p).to_string(), x.stalk(p).len().to_string()))
        .collect();
    stalks.sort();
    v["stalk_sizes"] = Value::Object(
        stalks
            .into_iter()
            .map(|(k, n)| (k, Value::String(n)))
            .collect(),
    );
    v["global_size"] = json!(x.global().len().to_string());
    Ok(Outcome {
        result: v,
        dot: Some(scheme_dot(&x)),
    })
}

fn congruences(s: &Arc<Sesquiad>, cfg: &Config) -> Result<Value> {
    let all = s.all_congruences(cfg.bound_spec)?;
    let mut rows = Vec::with_capacity(all.len());
    for c in &all {
        let maximal = if c.is_total(s) {
            false
        } else {
            s.is_maximal(c, cfg.bound_spec)?
        };
        rows.push(json!({
            "classes": congruence_name(s, c),
            "prime": c.is_prime(s),
            "maximal": maximal,
            "total": c.is_total(s),
        }));
    }
    Ok(json!({ "count": all.len().to_string(), "congruences": rows }))
}

fn residues(s: &Arc<Sesquiad>, cfg: &Config) -> Result<Value> {
    let (primes, _) = s.spec_c(cfg.bound_spec)?;
    let mut rows = Vec::with_capacity(primes.len());
    for p in &primes {
        let l = localize(s, p)?;
        rows.push(json!({
            "prime": congruence_name(s, p),
            "local_size": l.local.len().to_string(),
            "residue": l.residue.names(),
            "residue_via_quotient": l.residue_via_quotient.names(),
            "comparison_bijective": l.comparison.is_injective_on_elements() && l.residue.len() == l.residue_via_quotient.len(),
        }));
    }
    Ok(json!({ "primes": rows }))
}

fn units(s: &Sesquiad, cfg: &Config) -> Result<Value> {
    let u = s.unit_inclusions(cfg.bound_spec)?;
    Ok(json!({
        "monoid_units": u.monoid_units.iter().map(|&x| s.name(x)).collect::<Vec<_>>(),
        "units_in_nonzero": u.first_holds,
        "units_in_nonzero_strict": u.first_strict,
        "nonzero_in_ring_units": u.second_holds,
        "nonzero_in_ring_units_strict": u.second_strict,
    }))
}

fn random(s: &Arc<Sesquiad>, cfg: &Config) -> Result<Value> {
    let mut g = rng(cfg.seed);
    let shape = Shape::finite(16);
    let m = module(&mut g, s, &shape);
    let f = hom(&mut g, s, &shape);
    Ok(json!({
        "module": module_summary(&m),
        "hom": classify(&f)?,
    }))
}

fn flat(m: &SesquiadModule) -> Result<Value> {
    let f = is_flat(m)?;
    let mut v = json!({ "flatness": f.label() });
    if let Flatness::NotFlat { ideal } = &f {
        v["failing_ideal"] = lattice(ideal);
    }
    Ok(v)
}

fn classify(f: &ModuleHom) -> Result<Value> {
    let c = f.classify();
    let k = f.kernel()?;
    let q = f.cokernel()?;
    Ok(json!({
        "mono": c.mono,
        "epi": c.epi,
        "iso": c.iso,
        "full": f.is_full(),
        "strong": f.is_strong()?,
        "point_injective": f.is_point_injective(),
        "point_surjective": f.is_point_surjective(),
        "carrier_injective": f.carrier_injective(),
        "carrier_surjective": f.carrier_surjective(),
        "kernel": module_summary(&k.source),
        "cokernel": module_summary(&q.target),
    }))
}

fn exact(f: &ModuleHom, g: &ModuleHom) -> Result<Value> {
    let exact = is_exact_pair(f, g)?;
    let strong = exact && f.is_strong()? && g.is_strong()?;
    Ok(json!({ "exact": exact, "strong_exact": strong }))
}

fn separability(r: &Separability, a: &Sesquiad) -> Value {
    match r {
        Separability::Separable { witness } => {
            json!({ "verdict": "separable", "witness": polynomial(witness, a) })
        }
        Separability::Inseparable {
            witness,
            conclusive,
        } => {
            json!({ "verdict": "inseparable", "witness": polynomial(witness, a), "conclusive": conclusive })
        }
        Separability::NotAlgebraicUpToCap => json!({ "verdict": "not-algebraic-up-to-cap" }),
    }
}

fn etale(f: &sesq_core::sesquiad::SesquiadHom, cfg: &Config) -> Result<Value> {
    let r = is_unramified(f, cfg.bound_spec, cfg.cap_sep, DEFAULT_SEPARABILITY_LIMIT)?;
    let residues: Vec<Value> = r
        .residues
        .iter()
        .map(|c| {
            json!({
                "prime": c.prime,
                "pulled_back": c.pulled_back,
                "injective": c.injective,
                "finite": c.finite,
                "separable": c.separable.label(),
                "witness": c.witness.as_ref().map(|(b, p)| json!({ "element": b, "polynomial": p })),
                "not_algebraic": c.not_algebraic,
            })
        })
        .collect();
    Ok(json!({
        "flat": r.flat.label(),
        "finitely_presented": r.finitely_presented,
        "residues": residues,
        "unramified": r.unramified.label(),
        "etale": r.etale.label(),
    }))
}

fn sections(f: &sesq_core::scheme::ModuleSheaf) -> Result<Outcome> {
    let s = f.global_sections()?;
    let span = s.span_module();
    let limit = s.limit_module();
    let space = f.scheme().space();
    let result = json!({
        "space": space_summary(space),
        "global_families": s.families.len().to_string(),
        "span": carrier_summary(&span),
        "limit": carrier_summary(&limit),
        "span_is_limit": s.span == s.limit,
    });
    Ok(Outcome {
        result,
        dot: Some(poset_dot(space)),
    })
}

fn cohomology_report(f: &sesq_core::scheme::ModuleSheaf) -> Result<Outcome> {
    let h = cohomology(f)?;
    let cmp = base_change_compare(f)?;
    let space = f.scheme().space();
    let degrees: Vec<Value> = h
        .iter()
        .map(|r| {
            json!({
                "degree": r.degree.to_string(),
                "group": group(&r.group),
                "point_count": r.module.len().to_string(),
            })
        })
        .collect();
    let base_change: Vec<Value> = cmp
        .iter()
        .map(|d| {
            json!({
                "degree": d.degree.to_string(),
                "source": group(&d.source),
                "target": group(&d.target),
                "injective": d.injective,
                "surjective": d.surjective,
            })
        })
        .collect();
    let result = json!({
        "space": space_summary(space),
        "flabby": ascend(f)?.is_flabby(),
        "cohomology": degrees,
        "base_change": base_change,
    });
    Ok(Outcome {
        result,
        dot: Some(poset_dot(space)),
    })
}
