//! Browser bindings for the divisibility diagram demo. Every export takes
//! plain numbers or JSON text and returns JSON text for the page to draw.

use std::sync::Arc;

use gaussdiv::channel::{classify_map, FalsifierBudget};
use gaussdiv::divisibility::{classify_process, ClassifyOptions, Crossing, ProcessClass, Region};
use gaussdiv::models::{
    amplification_windows, is_physical, phase_insensitive_process, qbm_rate_profile, AmplificationWindow,
    RateSegment,
};
use gaussdiv::{GaussianMap, PositivityClass, PositivityScan, QbmParams, RateProfile, DEFAULT_TOL};
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Debug, Serialize)]
struct PathPoint {
    t: f64,
    eps: f64,
    mu: f64,
    region: Region,
}

#[derive(Debug, Serialize)]
struct ProcessView {
    class: ProcessClass,
    crossings: Vec<Crossing>,
    path: Vec<PathPoint>,
    physical: bool,
    violation_time: Option<f64>,
    windows: Vec<AmplificationWindow>,
}

fn view(rates: RateProfile, grid: usize) -> Result<String, String> {
    let rates = Arc::new(rates);
    let process = phase_insensitive_process(Arc::clone(&rates)).map_err(|e| e.to_string())?;
    let report = classify_process(&process, &ClassifyOptions { grid, ..ClassifyOptions::default() })
        .map_err(|e| e.to_string())?;
    let phys = is_physical(&rates, grid).map_err(|e| e.to_string())?;
    let windows = amplification_windows(&rates, grid).map_err(|e| e.to_string())?;
    let path = report
        .samples
        .iter()
        .map(|s| PathPoint { t: s.rates.t, eps: s.rates.eps, mu: s.rates.mu, region: s.region })
        .collect();
    let out = ProcessView {
        class: report.class,
        crossings: report.crossings,
        path,
        physical: phys.physical,
        violation_time: phys.violation_time,
        windows,
    };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

pub fn rate_profile_view(segments_json: &str, grid: usize) -> Result<String, String> {
    let segments: Vec<RateSegment> = serde_json::from_str(segments_json).map_err(|e| format!("segments: {e}"))?;
    view(RateProfile::piecewise(segments).map_err(|e| e.to_string())?, grid)
}

pub fn qbm_view(omega0: f64, omega_c: f64, alpha: f64, t_bath: f64, horizon: f64, grid: usize) -> Result<String, String> {
    let params = QbmParams { omega0, omega_c, alpha, t_bath, horizon };
    view(qbm_rate_profile(params).map_err(|e| e.to_string())?, grid)
}

#[derive(Debug, Serialize)]
struct ChannelView {
    class: PositivityClass,
    cp_margin: f64,
    /// Noise above the quantum limit `|g^2 - 1| / 2`.
    quantum_limit_gap: f64,
}

pub fn channel_view(gain: f64, noise: f64) -> Result<String, String> {
    let map = GaussianMap::phase_insensitive(gain, noise);
    let verdict = classify_map(&map, DEFAULT_TOL, &PositivityScan::default(), &FalsifierBudget::default())
        .map_err(|e| e.to_string())?;
    let out = ChannelView {
        class: verdict.class,
        cp_margin: verdict.cp_margin,
        quantum_limit_gap: map.quantum_limit_gap().map_err(|e| e.to_string())?,
    };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

/// Classifies a piecewise-constant rate profile given as a JSON array of
/// `{t0, t1, eps, mu}` segments.
#[wasm_bindgen(js_name = classifyRates)]
pub fn classify_rates(segments_json: &str, grid: usize) -> Result<String, JsError> {
    rate_profile_view(segments_json, grid).map_err(|e| JsError::new(&e))
}

/// Trajectory of quantum Brownian motion with an Ohmic bath.
#[wasm_bindgen(js_name = qbmTrajectory)]
pub fn qbm_trajectory(
    omega0: f64,
    omega_c: f64,
    alpha: f64,
    t_bath: f64,
    horizon: f64,
    grid: usize,
) -> Result<String, JsError> {
    qbm_view(omega0, omega_c, alpha, t_bath, horizon, grid).map_err(|e| JsError::new(&e))
}

/// Positivity class of the phase-insensitive channel `(g 1, y 1)`.
#[wasm_bindgen(js_name = checkChannel)]
pub fn check_channel(gain: f64, noise: f64) -> Result<String, JsError> {
    channel_view(gain, noise).map_err(|e| JsError::new(&e))
}
