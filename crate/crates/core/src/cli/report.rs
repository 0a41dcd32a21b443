use serde_json::{json, Value};

use super::document::{chain_map_doc, complex_doc, module_map_doc, to_json};
use crate::complexes::Homotopy;
use crate::lifting::{Evidence, Verdict};

pub fn homotopy_json(h: &Homotopy) -> Value {
    let comps: serde_json::Map<String, Value> =
        h.components().filter(|(_, m)| !m.is_zero()).map(|(k, m)| (k.to_string(), to_json(&m.matrix().to_rows()))).collect();
    json!({ "map": to_json(&chain_map_doc(&h.map)), "homotopy": comps })
}

pub fn evidence_json(e: &Evidence) -> Value {
    match e {
        Evidence::Certified => json!({ "kind": "certified" }),
        Evidence::Homotopy(h) => {
            let mut v = homotopy_json(h);
            v["kind"] = json!("homotopy");
            v
        }
        Evidence::Retraction(r) => json!({ "kind": "retraction", "map": to_json(&chain_map_doc(r)) }),
        Evidence::NoExtension { mono, map } => json!({
            "kind": "no-extension",
            "mono": to_json(&chain_map_doc(mono)),
            "map": to_json(&chain_map_doc(map)),
        }),
        Evidence::NoLift { epi, map } => json!({
            "kind": "no-lift",
            "epi": to_json(&chain_map_doc(epi)),
            "map": to_json(&chain_map_doc(map)),
        }),
        Evidence::ModuleNoExtension { mono, map } => json!({
            "kind": "module-no-extension",
            "mono": to_json(&module_map_doc(mono)),
            "map": to_json(&module_map_doc(map)),
        }),
        Evidence::ModuleNoLift { epi, map } => json!({
            "kind": "module-no-lift",
            "epi": to_json(&module_map_doc(epi)),
            "map": to_json(&module_map_doc(map)),
        }),
        Evidence::Component { degree, verdict } => json!({
            "kind": "component",
            "degree": degree,
            "verdict": verdict_json(verdict),
        }),
        Evidence::NotNullHomotopic { probe, map } => json!({
            "kind": "not-null-homotopic",
            "probe": to_json(&complex_doc(probe)),
            "map": to_json(&chain_map_doc(map)),
        }),
        Evidence::Homology { probe, degree, homology } => json!({
            "kind": "homology",
            "probe": to_json(&complex_doc(probe)),
            "degree": degree,
            "homology": homology.factors(),
        }),
        Evidence::NotInImage { degree, map } => json!({
            "kind": "not-in-image",
            "degree": degree,
            "map": to_json(&chain_map_doc(map)),
        }),
        Evidence::Hypothesis(why) => json!({ "kind": "hypothesis", "reason": why }),
    }
}

pub fn verdict_json(v: &Verdict) -> Value {
    json!({
        "status": to_json(&v.status),
        "universe": v.universe,
        "instances": v.instances,
        "exhaustive": v.exhaustive,
        "cross_check": v.cross_check,
        "notes": v.notes,
        "evidence": evidence_json(&v.evidence),
    })
}
