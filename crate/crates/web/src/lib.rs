//! Bindings for the static demo page in `www/`.
//!
//! Every export takes the matrix as text and returns a JSON string. Failures
//! come back as `{"error": ..., "exit_code": ...}` so the page never has to
//! catch a JavaScript exception.

use num_traits::ToPrimitive;
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

use troprank::hyperarrange::{kapranov3_certify, tropical_polytope_complex, Certificate};
use troprank::lifts::{build_rank3_lift, rank_over_k, DEFAULT_RETRIES};
use troprank::num::Rat;
use troprank::trop::{trop_det, tropical_rank_report, Multiplicity, TropicalMatrix, BRUTE_FORCE_LIMIT};
use troprank::{Error, Result};

fn finish(r: Result<Value>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e.to_string(), "exit_code": e.exit_code() }).to_string(),
    }
}

fn strings(v: &[Rat]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

fn float(x: &Rat) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn rank_value(text: &str) -> Result<Value> {
    let m = TropicalMatrix::parse(text)?;
    let rep = tropical_rank_report(&m)?;
    let mut out = json!({
        "rows": m.nrows(),
        "cols": m.ncols(),
        "rank": rep.rank,
        "witness_rows": one_based(&rep.rows),
        "witness_cols": one_based(&rep.cols),
    });
    if m.is_square() {
        let det = trop_det(&m)?;
        out["det"] = json!({
            "value": det.value.to_string(),
            "optimal_count": det.optimal_count(),
            "multiple": det.multiplicity == Multiplicity::Multiple,
            "singular": !det.is_unique(),
            "optimal_permutations": det.optimal_permutations.iter().map(|p| one_based(p)).collect::<Vec<_>>(),
            "enumerated": m.nrows() <= BRUTE_FORCE_LIMIT,
        });
    }
    Ok(out)
}

/// Tropical rank with a witness submatrix, plus the determinant of a square input.
#[wasm_bindgen]
pub fn rank(text: &str) -> String {
    finish(rank_value(text))
}

fn hull_value(text: &str) -> Result<Value> {
    let m = TropicalMatrix::parse(text)?;
    let points = m.columns();
    let hull = tropical_polytope_complex(&points)?;
    let mut out = json!({
        "f_vector": hull.f_vector,
        "type_f_vector": hull.type_f_vector,
        "cells": hull.cells.iter().map(|c| json!({ "dim": c.dim, "vertices": c.vertices.iter().map(|v| strings(v)).collect::<Vec<_>>() })).collect::<Vec<_>>(),
    });
    // in R^3 modulo (1,1,1), x - x_0 drops to the plane
    if m.nrows() == 3 {
        let plane = |v: &[Rat]| [float(&(&v[1] - &v[0])), float(&(&v[2] - &v[0]))];
        out["plane"] = json!({
            "points": points.iter().map(|p| plane(p)).collect::<Vec<_>>(),
            "cells": hull.cells.iter().map(|c| c.vertices.iter().map(|v| plane(v)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        });
    }
    Ok(out)
}

/// Cell structure of the tropical convex hull of the columns. For three rows
/// the result also carries planar coordinates for drawing.
#[wasm_bindgen]
pub fn hull(text: &str) -> String {
    finish(hull_value(text))
}

fn lift_value(text: &str, seed: u32) -> Result<Value> {
    let a = TropicalMatrix::parse(text)?;
    let cert = kapranov3_certify(&a)?;
    Certificate::parse(&cert.to_text())?.verify(&a)?;
    let lift = build_rank3_lift(&a, &cert, seed.into(), DEFAULT_RETRIES)?;
    let vals = lift.valuations()?;
    if vals != a {
        return Err(Error::Internal("valuations of the lift differ from the matrix".into()));
    }
    let (i, j) = cert.stable_pair;
    Ok(json!({
        "stable_pair": [i + 1, j + 1],
        "certificate": cert.to_text(),
        "lift": lift.to_text(),
        "scale": lift.scale(),
        "rank_over_k": rank_over_k(&lift),
    }))
}

/// Certificate and rank-3 lift of a 5-row matrix of tropical rank at most 3.
#[wasm_bindgen]
pub fn certify_and_lift(text: &str, seed: u32) -> String {
    finish(lift_value(text, seed))
}
