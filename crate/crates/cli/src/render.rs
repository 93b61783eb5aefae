//! Text, structured-text (JSON) and DOT renderings of command results.

use std::fmt::Write as _;

use pmalg::algebra::{FiniteAlgebra, ValidationReport};
use pmalg::congruence::{classify, congruence_lattice};
use pmalg::duality::dual_space;
use pmalg::terms::variety::Membership;
use pmalg::terms::{CheckOutcome, Identity};
use pmalg::{ExactDecomposition, Natural};
use serde_json::{json, Value};

use crate::Format;

fn structured(v: Value) -> String {
    serde_json::to_string_pretty(&v).expect("JSON value serializes")
}

fn names(alg: &FiniteAlgebra, items: impl IntoIterator<Item = usize>) -> String {
    items.into_iter().map(|x| alg.name(x)).collect::<Vec<_>>().join(",")
}

pub fn validation(report: &ValidationReport, format: Format) -> String {
    if format == Format::StructuredText {
        return structured(serde_json::to_value(report).expect("report serializes"));
    }
    if report.passed {
        return "valid pm-algebra".into();
    }
    let mut s = String::from("invalid pm-algebra\n");
    for v in &report.violations {
        let _ = writeln!(s, "  {} at {:?}", v.axiom, v.witness);
    }
    s
}

pub fn dual(alg: &FiniteAlgebra, format: Format) -> String {
    let space = dual_space(alg);
    let max = space.max_points();
    let min = space.min_points();
    let role = |p: usize| match (max.contains(p), min.contains(p)) {
        (true, true) => "max,min",
        (true, false) => "max",
        (false, true) => "min",
        (false, false) => "body",
    };
    match format {
        Format::Dot => space.to_dot(),
        Format::StructuredText => {
            let points: Vec<Value> = (0..space.len())
                .map(|p| {
                    json!({
                        "point": format!("P{p}"),
                        "filter": space.filter(p).map(|f| f.ones().map(|x| alg.name(x)).collect::<Vec<_>>()),
                        "phi": format!("P{}", space.phi(p)),
                        "role": role(p),
                    })
                })
                .collect();
            let covers: Vec<Value> = space
                .covers()
                .into_iter()
                .map(|(a, b)| json!([format!("P{a}"), format!("P{b}")]))
                .collect();
            structured(json!({
                "points": points,
                "covers": covers,
                "space_type": space.space_type().label(),
                "phi_connected": space.is_phi_connected(),
            }))
        }
        Format::Table => {
            let mut s = format!("{:<6} {:<6} {:<8} filter\n", "point", "phi", "role");
            for p in 0..space.len() {
                let filter = space.filter(p).map(|f| names(alg, f.ones())).unwrap_or_default();
                let _ = writeln!(s, "{:<6} {:<6} {:<8} {{{filter}}}", format!("P{p}"), format!("P{}", space.phi(p)), role(p));
            }
            let _ = writeln!(s, "space: {}", space.space_type().label());
            s
        }
    }
}

pub fn congruences(alg: &FiniteAlgebra, format: Format) -> String {
    let lattice = congruence_lattice(alg);
    match format {
        Format::Dot => lattice.to_dot(),
        Format::StructuredText => {
            let rows: Vec<Value> = lattice
                .congruences
                .iter()
                .zip(&lattice.csubsets)
                .enumerate()
                .map(|(i, (c, y))| {
                    json!({
                        "index": i,
                        "blocks": c.blocks(),
                        "num_blocks": c.num_blocks(),
                        "c_subset": y.to_vec(),
                    })
                })
                .collect();
            structured(json!({ "congruences": rows, "covers": lattice.covers() }))
        }
        Format::Table => {
            let mut s = format!("{:<5} {:<7} {:<14} blocks\n", "index", "#blocks", "C-subset");
            for (i, (c, y)) in lattice.congruences.iter().zip(&lattice.csubsets).enumerate() {
                let cs = format!("{{{}}}", y.to_vec().iter().map(|p| format!("P{p}")).collect::<Vec<_>>().join(","));
                let blocks = c
                    .blocks()
                    .iter()
                    .map(|b| format!("{{{}}}", names(alg, b.iter().copied())))
                    .collect::<Vec<_>>()
                    .join(" ");
                let _ = writeln!(s, "{:<5} {:<7} {:<14} {blocks}", format!("t{i}"), c.num_blocks(), cs);
            }
            s
        }
    }
}

pub fn classification(alg: &FiniteAlgebra, format: Format) -> String {
    let c = classify(alg);
    let label = match alg.size() {
        1 => Some("trivial"),
        2 => Some("2"),
        _ => None,
    };
    if format == Format::StructuredText {
        let mut v = serde_json::to_value(&c).expect("classification serializes");
        v["space_type"] = json!(c.space_type.label());
        v["label"] = json!(label);
        return structured(v);
    }
    match label {
        Some(l) => format!("{}; algebra {l}", c.summary()),
        None => c.summary(),
    }
}

pub fn check(alg: &FiniteAlgebra, id: &Identity, out: &CheckOutcome, format: Format) -> String {
    let witness: Vec<(String, String)> = out
        .witness()
        .map(|w| w.iter().map(|(v, &x)| (v.clone(), alg.name(x))).collect())
        .unwrap_or_default();
    if format == Format::StructuredText {
        let w: serde_json::Map<String, Value> = witness.into_iter().map(|(k, v)| (k, json!(v))).collect();
        return structured(json!({
            "identity": id.to_string(),
            "holds": out.holds(),
            "witness": if out.holds() { Value::Null } else { Value::Object(w) },
        }));
    }
    if out.holds() {
        "PASS".into()
    } else {
        let w: Vec<String> = witness.iter().map(|(v, x)| format!("{v}={x}")).collect();
        format!("FAIL {}", w.join(" "))
    }
}

pub fn membership(record: &Membership, format: Format) -> String {
    let rows = record.rows();
    if format == Format::StructuredText {
        let map: serde_json::Map<String, Value> = rows.into_iter().map(|(k, v)| (k, json!(v))).collect();
        return structured(Value::Object(map));
    }
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut s = String::new();
    for (k, v) in rows {
        let _ = writeln!(s, "{k:<width$}  {}", if v { "yes" } else { "no" });
    }
    s
}

pub fn algebra(alg: &FiniteAlgebra, format: Format) -> String {
    if format != Format::Dot {
        return alg.to_file().to_json();
    }
    let mut s = String::from("digraph lattice {\n  rankdir=BT;\n");
    for x in alg.elements() {
        let _ = writeln!(
            s,
            "  e{x} [label=\"{}\\n'={} *={}\"];",
            alg.name(x),
            alg.name(alg.neg(x)),
            alg.name(alg.star(x))
        );
    }
    for (x, y) in alg.lattice().covers() {
        let _ = writeln!(s, "  e{x} -> e{y};");
    }
    s.push_str("}\n");
    s
}

pub fn homs(kind: &str, maps: &[Vec<usize>], list: bool, format: Format) -> String {
    if format == Format::StructuredText {
        return structured(json!({
            "kind": kind,
            "count": maps.len(),
            "maps": if list { json!(maps) } else { Value::Null },
        }));
    }
    let mut s = format!("{kind}: {}\n", maps.len());
    if list {
        for m in maps {
            let _ = writeln!(s, "  {m:?}");
        }
    }
    s
}

pub fn free(dec: &ExactDecomposition, checks: &[(usize, Natural, u64)], format: Format) -> String {
    if format == Format::StructuredText {
        let factors: Vec<Value> = dec
            .factors
            .iter()
            .map(|f| json!({ "k": f.k, "size": f.size.to_string(), "multiplicity": f.multiplicity.to_string() }))
            .collect();
        let oracle: Vec<Value> = checks
            .iter()
            .map(|(k, f, o)| json!({ "k": k, "formula": f.to_string(), "oracle": o, "agree": *f == (*o).into() }))
            .collect();
        return structured(json!({ "n": dec.n, "factors": factors, "oracle": oracle, "product": dec.to_string() }));
    }
    let mut s = format!("F({}) = {}\n{:>4} {:>12} multiplicity\n", dec.n, dec, "k", "|B_k|");
    for f in &dec.factors {
        let _ = writeln!(s, "{:>4} {:>12} {}", f.k, f.size, f.multiplicity);
    }
    for (k, formula, oracle) in checks {
        let verdict = if *formula == (*oracle).into() { "agree" } else { "DISAGREE" };
        let _ = writeln!(s, "oracle k={k}: formula {formula}, enumeration {oracle}: {verdict}");
    }
    s
}
