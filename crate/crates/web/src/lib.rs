//! Browser bindings for the long-term constraint learners. Each export
//! returns JSON or an error message; `www/index.html` draws the results.

pub mod demo;

use serde::Serialize;
use wasm_bindgen::prelude::wasm_bindgen;

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

/// Cumulative loss and violation curves for the three online LP learners.
#[wasm_bindgen]
pub fn run_curves(seed: u32, repetition: u32, rounds: usize, c: f64, kappa: f64) -> Result<String, String> {
    to_json(&demo::curves(seed.into(), repetition.into(), rounds, c, kappa)?)
}

/// One penalised projection step from `(zx, zy)` along `(dx, dy)`.
#[wasm_bindgen]
pub fn prox_step(seed: u32, zx: f64, zy: f64, dx: f64, dy: f64, step: f64, penalty: f64) -> Result<String, String> {
    to_json(&demo::prox_view(seed.into(), [zx, zy], [dx, dy], step, penalty)?)
}

/// The prox solution traced as the penalty weight grows from zero.
#[wasm_bindgen]
pub fn penalty_path(
    seed: u32,
    zx: f64,
    zy: f64,
    dx: f64,
    dy: f64,
    step: f64,
    max_penalty: f64,
    steps: usize,
) -> Result<String, String> {
    to_json(&demo::penalty_path(seed.into(), [zx, zy], [dx, dy], step, max_penalty, steps)?)
}
