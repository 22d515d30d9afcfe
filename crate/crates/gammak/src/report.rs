//! JSON renderings of results. Everything printed goes through these.

use gammak_core::intlinalg::{FiniteGroup, GroupHom, IntMatrix};
use gammak_core::ktheory::{AutTower, K0Result, K1Comparison, K1Result, K1Verdict, Probe};
use gammak_core::semimodule::Matrix;
use gammak_core::{Caps, FgAbelianGroup, GammaSemiring, ModuleMode};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

/// Integers that fit in i64 are numbers; anything larger is a decimal string.
pub fn int(x: &BigInt) -> Value {
    x.to_i64().map_or_else(|| Value::String(x.to_string()), Value::from)
}

pub fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

pub fn group(g: &FgAbelianGroup) -> Value {
    json!({ "rank": g.rank(), "torsion": ints(g.torsion()) })
}

pub fn int_matrix(m: &IntMatrix) -> Value {
    Value::Array((0..m.rows()).map(|r| ints(m.row(r))).collect())
}

pub fn group_hom(h: &GroupHom) -> Value {
    json!({
        "source": group(&h.source),
        "target": group(&h.target),
        "matrix": int_matrix(&h.matrix),
        "is_iso": h.is_iso(),
    })
}

pub fn matrix(m: &Matrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|r| Value::Array((0..m.cols()).map(|c| json!(m.get(r, c))).collect()))
            .collect(),
    )
}

pub fn caps(c: &Caps) -> Value {
    json!({
        "carrier": c.carrier,
        "rank": c.rank,
        "k1_levels": c.k1_levels,
        "iso_search": c.iso,
        "budget": c.budget,
    })
}

pub fn mode(m: ModuleMode) -> &'static str {
    match m {
        ModuleMode::Right => "right",
        ModuleMode::StrictBimodule => "strict-bimodule",
    }
}

pub fn structure_summary(s: &GammaSemiring) -> Value {
    json!({
        "name": s.name(),
        "arity": s.arity(),
        "t_size": s.card(),
        "gamma_size": s.gamma_card(),
    })
}

fn probe(p: &Probe) -> Value {
    match p {
        Probe::Unchanged => json!({ "result": "unchanged" }),
        Probe::Changed => json!({ "result": "changed" }),
        Probe::Unavailable(why) => json!({ "result": "unavailable", "reason": why }),
        Probe::NotRun => json!({ "result": "not-run" }),
    }
}

pub fn k0(k: &K0Result, m: ModuleMode) -> Value {
    let mon = &k.monoid;
    let cl = &mon.classification;
    let generators: Vec<Value> = mon
        .generators
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let class = &cl.classes[c];
            json!({
                "index": i,
                "class": c,
                "module_size": class.size(),
                "idempotent": matrix(class.representative.idempotent.matrix()),
                "image": ints(&k.generator_images[i]),
            })
        })
        .collect();
    let relations: Vec<Value> = mon
        .relations
        .iter()
        .map(|r| json!({ "lhs": r.lhs, "rhs": r.rhs }))
        .collect();
    let classes: Vec<Value> = cl
        .classes
        .iter()
        .enumerate()
        .map(|(c, class)| {
            json!({
                "class": c,
                "module_size": class.size(),
                "idempotents": class.members,
                "indecomposable": class.indecomposable,
                "vector": mon.class_vectors[c],
                "complement": class.complement.map(|(q, n)| json!({ "class": q, "rank": n })),
            })
        })
        .collect();
    json!({
        "invariant": "K0",
        "structure": k.base().name(),
        "mode": mode(m),
        "group": group(&k.group),
        "generators": generators,
        "relations": relations,
        "caps": caps(&k.caps),
        "completeness": {
            "rank_cap": k.rank_cap,
            "complete": k.complete,
            "probe": probe(&k.probe),
        },
        "stationarity": Value::Null,
        "classes": classes,
        "free_classes": cl.free_classes,
        "retract_only": cl.retract_only(),
    })
}

pub fn tower_levels(t: &AutTower) -> Value {
    Value::Array(
        t.levels
            .iter()
            .map(|l| {
                let gens: Vec<Value> = l
                    .generator_preimages()
                    .into_iter()
                    .map(|x| matrix(l.group.element(x)))
                    .collect();
                json!({
                    "level": l.level(),
                    "automorphisms": l.group.order(),
                    "elementary": l.elementary.len(),
                    "quotient": group(&l.quotient.group),
                    "generators": gens,
                })
            })
            .collect(),
    )
}

pub fn k1(r: &K1Result, c: &Caps, m: ModuleMode) -> Value {
    let top = r.tower.levels.last();
    let generators: Vec<Value> = top
        .map(|l| {
            l.generator_preimages()
                .into_iter()
                .map(|x| matrix(l.group.element(x)))
                .collect()
        })
        .unwrap_or_default();
    // the quotient is presented by its invariant factors
    let relations: Vec<Value> = r
        .value
        .torsion()
        .iter()
        .enumerate()
        .map(|(i, d)| json!({ "generator": i, "order": int(d) }))
        .collect();
    json!({
        "invariant": "K1",
        "structure": r.tower.base.name(),
        "mode": mode(m),
        "group": group(&r.value),
        "generators": generators,
        "relations": relations,
        "caps": caps(c),
        "completeness": Value::Null,
        "stationarity": {
            "levels": r.quotients.len(),
            "stationary": r.stationary,
            "truncated_at": r.tower.truncated_at,
        },
        "levels": tower_levels(&r.tower),
        "stabilization": r.maps.iter().map(group_hom).collect::<Vec<_>>(),
    })
}

fn verdict(v: K1Verdict) -> &'static str {
    match v {
        K1Verdict::Agree => "agree",
        K1Verdict::Disagree => "disagree",
        K1Verdict::Inconclusive => "inconclusive",
    }
}

pub fn k1_comparison(c: &K1Comparison) -> Value {
    json!({
        "left": c.left.iter().map(group).collect::<Vec<_>>(),
        "right": c.right.iter().map(group).collect::<Vec<_>>(),
        "left_stationary": c.left_stationary,
        "right_stationary": c.right_stationary,
        "verdict": verdict(c.verdict),
    })
}
