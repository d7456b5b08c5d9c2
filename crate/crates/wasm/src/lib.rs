//! Browser bindings. Every function returns a JSON string; errors come back
//! as `{"error": "..."}` so the page only has one thing to parse.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use tritwist::spectra::{run_experiment, ExperimentConfig};
use tritwist::twisted::{count_classes, decide_text};

fn wrap(r: tritwist::Result<Value>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({"error": e.to_string()}).to_string(),
    }
}

/// Twisted class count of an additive map, e.g. `("poly:fq:2", "ring:a=1,b=1", 1)`.
#[wasm_bindgen]
pub fn classes(ring: &str, aut: &str, window: u32) -> String {
    wrap(count_classes(ring, aut, Some(window as usize)).map(|r| r.to_json()))
}

/// Decides whether `b` and `bprime` are twisted conjugate.
#[wasm_bindgen]
pub fn twisted(ring: &str, aut: &str, b: &str, bprime: &str) -> String {
    wrap(decide_text(ring, aut, b, bprime, None).map(|r| r.to_json()))
}

/// Runs a named experiment with its defaults and returns the report.
#[wasm_bindgen]
pub fn verify(name: &str, seed: u32) -> String {
    let mut cfg = ExperimentConfig::new(name);
    cfg.seed = seed.into();
    wrap(run_experiment(&cfg).map(|r| r.to_json()))
}
