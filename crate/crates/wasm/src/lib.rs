//! Browser bindings for the invariant engine: three JSON-producing entry
//! points consumed by the static demo page in `www/`.
//!
//! Big integers are emitted as decimal strings; chart-friendly `f64` values
//! are included alongside where exactness is not needed for display.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use wallcross::action::{self, SignMatrix};
use wallcross::closedform;
use wallcross::engine::{self, PoincareCrossing};
use wallcross::xray;

fn rational_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn err(msg: impl std::fmt::Display) -> JsValue {
    JsValue::from_str(&msg.to_string())
}

fn record_value(r: u32) -> Result<Value, String> {
    if r == 0 || r > 12 {
        return Err("rank must be between 1 and 12".into());
    }
    let product = closedform::poincare_product(r);
    let betti: Vec<String> = product.coeffs().iter().map(BigInt::to_string).collect();
    let betti_f64: Vec<f64> = product
        .coeffs()
        .iter()
        .map(|c| c.to_f64().unwrap_or(f64::NAN))
        .collect();
    Ok(json!({
        "betti": betti,
        "betti_f64": betti_f64,
        "dim": closedform::quotient_dim(r),
        "euler": closedform::euler_char(r).to_string(),
        "poincare": product.to_string(),
        "r": r,
    }))
}

/// Closed-form record for rank `r`: polynomial, Betti list, Euler
/// characteristic and quotient dimension.
#[wasm_bindgen]
pub fn poincare_record(r: u32) -> Result<String, JsValue> {
    record_value(r).map(|v| v.to_string()).map_err(err)
}

fn trace_value(r: u32, kind: &str, seed: u32) -> Result<Value, String> {
    if r == 0 || r > 8 {
        return Err("trace supports ranks 1 through 8".into());
    }
    let path = match kind {
        "canonical" => engine::canonical_path(r),
        "random" => engine::random_path_seeded(r, u64::from(seed)),
        other => return Err(format!("unknown path kind {other:?}")),
    };
    let (value, trace) = engine::walk(r, &path, &PoincareCrossing).map_err(|e| e.to_string())?;
    let steps: Vec<Value> = trace
        .steps
        .iter()
        .map(|s| {
            json!({
                "b": s.b,
                "f": s.f,
                "factor": s.factor.to_string(),
                "running": s.running.to_string(),
                "entered": s.entered.pattern(),
                "wall_dim": s.wall.dim(),
                "wall_fixed_signs": s.wall.pattern(),
            })
        })
        .collect();
    Ok(json!({
        "final": value.to_string(),
        "r": r,
        "steps": steps,
    }))
}

/// Wall-by-wall recursion trace along the canonical or a seeded random path.
#[wasm_bindgen]
pub fn trace_json(r: u32, kind: &str, seed: u32) -> Result<String, JsValue> {
    trace_value(r, kind, seed).map(|v| v.to_string()).map_err(err)
}

fn xray_value(r: u32) -> Result<Value, String> {
    if r == 0 || r > xray::STRATA_MAX_RANK {
        return Err(format!(
            "x-ray view supports ranks 1 through {}",
            xray::STRATA_MAX_RANK
        ));
    }
    let a = SignMatrix::build(r).map_err(|e| e.to_string())?;
    let vertices: Vec<Value> = (0..a.num_columns())
        .map(|j| {
            let coords: Vec<f64> = a
                .column(j)
                .iter()
                .map(|&s| f64::from(s) / 2.0)
                .collect();
            json!({"column": j, "coords": coords})
        })
        .collect();
    let mut walls = Vec::new();
    let mut stratum_count = 0usize;
    for s in xray::enumerate_strata(&a).map_err(|e| e.to_string())? {
        stratum_count += 1;
        let Some(normal) = xray::wall_normal(&s, &a) else {
            continue;
        };
        let (b, f) = xray::interior_wall_signs(&s, &normal, &a).map_err(|e| e.to_string())?;
        let verts: Vec<Vec<f64>> = s
            .moment_vertices
            .iter()
            .map(|v| v.iter().map(rational_f64).collect())
            .collect();
        walls.push(json!({
            "b": b,
            "balanced": b == f,
            "boundary": xray::is_boundary_stratum(&s, &a),
            "columns": s.columns,
            "f": f,
            "normal": normal.iter().map(rational_f64).collect::<Vec<f64>>(),
            "vertices": verts,
        }));
    }
    let gkm = action::gkm_report(&a).map_err(|e| e.to_string())?;
    Ok(json!({
        "face_count": 3usize.pow(r),
        "fixed_point_count": a.num_columns(),
        "pairwise_independent": gkm.pairwise_independent_everywhere,
        "r": r,
        "stratum_count": stratum_count,
        "vertices": vertices,
        "walls": walls,
    }))
}

/// X-ray summary for drawing: cube vertices, codimension-1 walls with their
/// measured `(b, f)` signs and balance flags, and headline counts.
#[wasm_bindgen]
pub fn xray_json(r: u32) -> Result<String, JsValue> {
    xray_value(r).map(|v| v.to_string()).map_err(err)
}
