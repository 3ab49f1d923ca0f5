//! Browser bindings for a planar frame playground.
//!
//! Each exported function takes the current point set as a JSON array of
//! `[x, y]` pairs (uniform weights) and returns a JSON document with a
//! `"status"` field, so the page never has to handle a thrown exception.
//! The same functions run natively, which is how they are tested.

use probframe::duality::pushforward_certificate;
use probframe::frame::{
    self, bessel_to_tight, finite_frame_potential, frame_bounds, frame_potential_lower_bound,
};
use probframe::potential::pdfp_pushforward;
use probframe::transport::{hyperplane_projection, wasserstein};
use probframe::{DiscreteMeasure, FrameError};
use serde::Serialize;
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

#[derive(Serialize)]
struct Atoms {
    atoms: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl From<&DiscreteMeasure> for Atoms {
    fn from(m: &DiscreteMeasure) -> Self {
        let (atoms, weights) = m.support().map(|(x, w)| (x.to_vec(), w)).unzip();
        Atoms { atoms, weights }
    }
}

fn parse_points(points: &str) -> Result<DiscreteMeasure, Value> {
    let atoms: Vec<Vec<f64>> = serde_json::from_str(points).map_err(
        |e| json!({ "status": "error", "error": "ParseError", "detail": e.to_string() }),
    )?;
    if atoms.iter().any(|a| a.len() != 2) {
        return Err(
            json!({ "status": "error", "error": "ParseError", "detail": "points must be [x, y] pairs" }),
        );
    }
    DiscreteMeasure::uniform(2, atoms).map_err(domain_error)
}

fn domain_error(e: FrameError) -> Value {
    json!({ "status": "error", "error": e.kind(), "detail": e.to_string() })
}

fn respond(result: Result<Value, Value>) -> String {
    match result {
        Ok(mut v) => {
            v["status"] = json!("ok");
            v.to_string()
        }
        Err(e) => e.to_string(),
    }
}

/// Frame bounds, the canonical dual and the dual frame potential of the
/// uniform measure on `points`.
#[wasm_bindgen]
pub fn analyze_frame(points: &str) -> String {
    respond(parse_points(points).and_then(|mu| {
        let b = frame_bounds(&mu).map_err(domain_error)?;
        let mut out = json!({
            "A": b.lower,
            "B": b.upper,
            "tight": b.tight,
            "parseval": b.parseval,
            "is_frame": b.is_frame(),
            "frame_potential": finite_frame_potential(&mu),
            "frame_potential_bound": frame_potential_lower_bound(&mu),
        });
        if b.is_frame() {
            let (map, dual) = frame::canonical_dual(&mu).map_err(domain_error)?;
            let report = pdfp_pushforward(&mu, &map).map_err(domain_error)?;
            let cert = pushforward_certificate(&mu, &map).map_err(domain_error)?;
            out["dual"] = json!(Atoms::from(&dual));
            out["dual_images"] = json!(map.images_on_support(&mu).map_err(domain_error)?);
            out["pdfp"] = json!(report.value);
            out["pdfp_bound"] = json!(report.lower_bound);
            out["dual_residual"] = json!(cert.residual);
        }
        Ok(out)
    }))
}

/// Adds a complement `ν_k` so that `½μ + ½ν_k` is tight with bound `kB`.
#[wasm_bindgen]
pub fn complete_to_tight(points: &str, k: f64) -> String {
    respond(parse_points(points).and_then(|mu| {
        let c = bessel_to_tight(&mu, k, None, None).map_err(domain_error)?;
        let b = frame_bounds(&c.measure).map_err(domain_error)?;
        Ok(json!({
            "complement": Atoms::from(&c.complement),
            "measure": Atoms::from(&c.measure),
            "bessel_bound": c.bessel_bound,
            "tight_bound": c.tight_bound,
            "A": b.lower,
            "B": b.upper,
            "tight": b.tight,
        }))
    }))
}

/// Optimal transport from μ to its projection onto the line orthogonal to
/// `(cos θ, sin θ)`, next to the moment `∫|⟨x,y⟩|ᵖdμ` it should equal.
#[wasm_bindgen]
pub fn hyperplane_transport(points: &str, angle: f64, p: f64) -> String {
    respond(parse_points(points).and_then(|mu| {
        let x = [angle.cos(), angle.sin()];
        let projected = mu
            .pushforward(&hyperplane_projection(&x).map_err(domain_error)?)
            .map_err(domain_error)?;
        let plan = wasserstein(&mu, &projected, p).map_err(domain_error)?;
        let moves: Vec<Value> = plan
            .coupling
            .pairs()
            .filter(|(_, _, w)| *w > 0.0)
            .map(|(a, b, w)| json!({ "from": a, "to": b, "mass": w }))
            .collect();
        Ok(json!({
            "direction": x,
            "projected": Atoms::from(&projected),
            "moves": moves,
            "cost": plan.cost,
            "moment": mu.directional_moment(&x, p),
        }))
    }))
}
