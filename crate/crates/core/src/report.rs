//! Human-readable and JSON renderings of every analysis.
//!
//! Charts are named by the coordinates of their vertex. Coordinates and
//! indices are 1-based in text and 0-based in JSON. Rationals are JSON
//! strings `"p/q"`. JSON objects have sorted keys, so output is
//! byte-deterministic.

use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::charts::ChartAtlas;
use crate::lattice::{IntVector, Rational};
use crate::moment::{star_classification, MomentImage, StarTag, VertexStatus};
use crate::polytope::{format_point, DelzantPolytope};
use crate::scene::{parse_integer, parse_rational};
use crate::smoothness::{SmoothnessReport, WitnessPoint};
use crate::subtorus::{defining_equations, AffineSubtorus, BinomialEquation};

pub fn format_int_vec(v: &[num_bigint::BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

fn chart_name(d: &DelzantPolytope, label: usize) -> String {
    format_point(d.vertex(label))
}

fn support_text(s: &[usize]) -> String {
    let parts: Vec<String> = s.iter().map(|i| format!("z{}", i + 1)).collect();
    format!("{{{}}}", parts.join(","))
}

fn rat_json(r: &Rational) -> Value {
    Value::String(r.to_string())
}

pub fn int_json(v: &[num_bigint::BigInt]) -> Value {
    // entries are small lattice data; a failed conversion would be a bug
    Value::Array(
        v.iter()
            .map(|x| json!(i64::try_from(x).expect("entry fits in i64")))
            .collect(),
    )
}

fn point_json(p: &[Rational]) -> Value {
    Value::Array(p.iter().map(rat_json).collect())
}

fn witness_text(w: &WitnessPoint) -> String {
    match w {
        WitnessPoint::Exact(z) => format_point(z),
        WitnessPoint::Approximate(z) => {
            let parts: Vec<String> = z
                .iter()
                .map(|c| format!("{:.12}{:+.12}i", c.re, c.im))
                .collect();
            format!("({}) [approximate]", parts.join(","))
        }
    }
}

fn witness_json(w: &WitnessPoint) -> Value {
    match w {
        WitnessPoint::Exact(z) => json!({ "exact": true, "point": point_json(z) }),
        WitnessPoint::Approximate(z) => json!({
            "exact": false,
            "point": z.iter().map(|c| json!([c.re, c.im])).collect::<Vec<_>>(),
        }),
    }
}

pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

// ---- verify ----

pub fn verify_text(d: &DelzantPolytope) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "Delzant polytope in R^{} with {} vertices: OK",
        d.dim(),
        d.num_vertices()
    );
    for l in 0..d.num_vertices() {
        let data = d.vertex_data(l);
        let edges: Vec<String> = data.edges.iter().map(|e| format_int_vec(e)).collect();
        let normals: Vec<String> = data.normals.iter().map(|e| format_int_vec(e)).collect();
        let _ = writeln!(
            out,
            "vertex {}: edges v = {}; normals u = {}",
            chart_name(d, l),
            edges.join(" "),
            normals.join(" ")
        );
    }
    out
}

pub fn verify_json(d: &DelzantPolytope) -> Value {
    let vertices: Vec<Value> = (0..d.num_vertices())
        .map(|l| {
            let data = d.vertex_data(l);
            json!({
                "label": l,
                "vertex": point_json(d.vertex(l)),
                "edges": data.edges.iter().map(|e| int_json(e)).collect::<Vec<_>>(),
                "normals": data.normals.iter().map(|e| int_json(e)).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "delzant": true, "dimension": d.dim(), "vertices": vertices })
}

// ---- equations ----

pub fn equations_text(d: &DelzantPolytope, atlas: &ChartAtlas, sub: &AffineSubtorus) -> String {
    let mut out = String::new();
    let q: Vec<String> = sub.q().iter().map(|x| format_int_vec(x)).collect();
    let _ = writeln!(out, "n = {}, k = {}, q = {}", sub.n(), sub.k(), q.join(" "));
    for l in atlas.labels() {
        let _ = writeln!(out, "chart {}:", chart_name(d, l));
        let eqs = defining_equations(atlas, sub, l).expect("label from atlas");
        if eqs.is_empty() {
            let _ = writeln!(out, "  (no equations)");
        }
        for f in eqs {
            let _ = writeln!(out, "  f{} = {}", f.j + sub.k() + 1, f);
        }
    }
    out
}

pub fn equation_json(d: &DelzantPolytope, f: &BinomialEquation) -> Value {
    json!({
        "chart": f.label,
        "vertex": point_json(d.vertex(f.label)),
        "j": f.j,
        "exponents": int_json(&f.exponents),
        "coefficient": rat_json(&f.coefficient),
    })
}

pub fn equations_json(d: &DelzantPolytope, atlas: &ChartAtlas, sub: &AffineSubtorus) -> Value {
    let eqs: Vec<Value> = atlas
        .labels()
        .flat_map(|l| defining_equations(atlas, sub, l).expect("label from atlas"))
        .map(|f| equation_json(d, &f))
        .collect();
    json!({
        "n": sub.n(),
        "k": sub.k(),
        "p": sub.p().iter().map(|x| int_json(x)).collect::<Vec<_>>(),
        "q": sub.q().iter().map(|x| int_json(x)).collect::<Vec<_>>(),
        "equations": eqs,
    })
}

/// Reads back the `equations` list written by [`equations_json`].
pub fn parse_equations_json(text: &str) -> Result<Vec<BinomialEquation>, String> {
    let v: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let list = v
        .get("equations")
        .and_then(Value::as_array)
        .ok_or("missing \"equations\" list")?;
    list.iter()
        .map(|e| {
            let label = e
                .get("chart")
                .and_then(Value::as_u64)
                .ok_or("missing \"chart\"")? as usize;
            let j = e.get("j").and_then(Value::as_u64).ok_or("missing \"j\"")? as usize;
            let exponents = e
                .get("exponents")
                .and_then(Value::as_array)
                .ok_or("missing \"exponents\"")?
                .iter()
                .map(parse_integer)
                .collect::<Result<IntVector, _>>()?;
            let coefficient =
                parse_rational(e.get("coefficient").ok_or("missing \"coefficient\"")?)?;
            Ok(BinomialEquation {
                label,
                j,
                exponents,
                coefficient,
            })
        })
        .collect()
}

// ---- smoothness ----

pub fn smoothness_text(d: &DelzantPolytope, rep: &SmoothnessReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "verdict: {}", rep.verdict);
    let _ = writeln!(out, "required Jacobian rank: {}", rep.expected_rank);
    for w in &rep.witnesses {
        let _ = writeln!(
            out,
            "witness: chart {}, support {}, point {}, rank {} < {}",
            chart_name(d, w.stratum.label),
            support_text(&w.stratum.support),
            witness_text(&w.point),
            w.rank,
            rep.expected_rank
        );
    }
    let _ = writeln!(out, "strata:");
    for s in &rep.strata {
        let status = match &s.rank {
            None => "misses the locus".to_string(),
            Some(r) => {
                let mut t = format!("min rank {}", r.min_rank);
                if !s.reached_by_orbit {
                    t.push_str(" [not reached from the open orbit]");
                }
                t
            }
        };
        let _ = writeln!(
            out,
            "  chart {} support {}: {}",
            chart_name(d, s.stratum.label),
            support_text(&s.stratum.support),
            status
        );
    }
    out
}

pub fn smoothness_json(d: &DelzantPolytope, rep: &SmoothnessReport) -> Value {
    json!({
        "verdict": rep.verdict.to_string(),
        "expected_rank": rep.expected_rank,
        "witnesses": rep.witnesses.iter().map(|w| json!({
            "chart": w.stratum.label,
            "vertex": point_json(d.vertex(w.stratum.label)),
            "support": w.stratum.support,
            "rank": w.rank,
            "witness": witness_json(&w.point),
        })).collect::<Vec<_>>(),
        "strata": rep.strata.iter().map(|s| json!({
            "chart": s.stratum.label,
            "support": s.stratum.support,
            "meets_locus": s.rank.is_some(),
            "min_rank": s.rank.as_ref().map(|r| r.min_rank),
            "reached_by_orbit": s.reached_by_orbit,
        })).collect::<Vec<_>>(),
    })
}

// ---- moment ----

fn status_name(s: VertexStatus) -> &'static str {
    match s {
        VertexStatus::Vertex => "VERTEX_WITH_FIXED_POINT",
        VertexStatus::NonVertex => "NON_VERTEX",
    }
}

fn star_text(t: &StarTag) -> String {
    match t {
        StarTag::Cond1 => "COND1".into(),
        StarTag::Cond2 { i, i_prime } => format!("COND2(z{},z{})", i + 1, i_prime + 1),
        StarTag::Neither => "NEITHER".into(),
    }
}

pub fn moment_text(
    d: &DelzantPolytope,
    atlas: &ChartAtlas,
    sub: &AffineSubtorus,
    m: &MomentImage,
) -> String {
    let mut out = String::new();
    if !m.within_hypotheses() {
        let _ = writeln!(
            out,
            "note: the closure is {}; this image is outside the hypotheses of the moment theorem",
            m.verdict
        );
    }
    let hull: Vec<String> = m
        .projected
        .hull_vertices
        .iter()
        .map(|v| format_point(v))
        .collect();
    let _ = writeln!(
        out,
        "image polytope in R^{}: vertices {}",
        m.projected.dim,
        hull.join(" ")
    );
    for l in atlas.labels() {
        let tags: Vec<String> = star_classification(atlas, sub, l)
            .tags
            .iter()
            .map(star_text)
            .collect();
        let _ = write!(
            out,
            "chart {} -> {}: {}, star [{}]",
            chart_name(d, l),
            format_point(&m.projected.point_images[l]),
            status_name(m.statuses[l]),
            tags.join(" ")
        );
        if let Some(c) = &m.certificates[l] {
            let _ = write!(
                out,
                ", fixed point {} {}",
                format_point(&c.point),
                if c.verified() { "verified" } else { "FAILED" }
            );
        }
        out.push('\n');
    }
    let _ = writeln!(
        out,
        "theorem check (hull vertices = certified vertex images): {}",
        if m.theorem_holds { "PASS" } else { "FAIL" }
    );
    out
}

pub fn moment_json(d: &DelzantPolytope, atlas: &ChartAtlas, m: &MomentImage) -> Value {
    json!({
        "verdict": m.verdict.to_string(),
        "within_hypotheses": m.within_hypotheses(),
        "dimension": m.projected.dim,
        "hull_vertices": m.projected.hull_vertices.iter().map(|v| point_json(v)).collect::<Vec<_>>(),
        "vertices": atlas.labels().map(|l| json!({
            "chart": l,
            "vertex": point_json(d.vertex(l)),
            "image": point_json(&m.projected.point_images[l]),
            "status": status_name(m.statuses[l]),
            "fixed_point": m.certificates[l].as_ref().map(|c| json!({
                "point": point_json(&c.point),
                "equations_vanish": c.equations_vanish,
                "in_fixed_stratum": c.in_fixed_stratum,
            })),
        })).collect::<Vec<_>>(),
        "theorem_holds": m.theorem_holds,
    })
}
