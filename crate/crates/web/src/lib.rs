//! wasm-bindgen entry points for the static demo page in `www/`.
//!
//! Every export takes the window length `c` (cycles) and Taylor order `K`;
//! the remaining model settings are the 50 Hz / 10 kHz / 50 fps / H=13
//! reference. Results cross the boundary as flat `Float64Array`s or JSON.

use hpl_core::bench::{run_scenario, RunOptions, ScenarioKind, ScenarioSpec, Sweep};
use hpl_core::design::{bank_from_multipliers, compose_filter, SvdDesign};
use hpl_core::optimize::optimize_for_order;
use hpl_core::response::gain;
use hpl_core::{tft_filter_bank, DesignSettings, ModelConfig, MultiplierSet};
use wasm_bindgen::prelude::*;

fn model(window_cycles: u32, taylor_order: usize) -> Result<ModelConfig, String> {
    let cfg = ModelConfig::reference(window_cycles, taylor_order);
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn check_multipliers(cfg: &ModelConfig, y: &[f64]) -> Result<(), String> {
    if y.len() != cfg.terms() {
        return Err(format!("expected {} multipliers, got {}", cfg.terms(), y.len()));
    }
    Ok(())
}

/// Runs the multiplier search for order `h` and returns the design row as JSON.
#[wasm_bindgen]
pub fn design_order(window_cycles: u32, taylor_order: usize, h: usize) -> Result<String, String> {
    let cfg = model(window_cycles, taylor_order)?;
    let design = SvdDesign::new(&cfg).map_err(|e| e.to_string())?;
    let l = design.l_matrix(h).map_err(|e| e.to_string())?;
    let row = optimize_for_order(&design, h, &l, &DesignSettings::default()).map_err(|e| e.to_string())?;
    serde_json::to_string(&row).map_err(|e| e.to_string())
}

/// Gain of the plain and the weighted filter of order `h` on `points`
/// frequencies in [f_min, f_max]. Returns triples (f, tft, weighted).
#[wasm_bindgen]
pub fn response_curves(
    window_cycles: u32,
    taylor_order: usize,
    h: usize,
    multipliers: Vec<f64>,
    f_min: f64,
    f_max: f64,
    points: usize,
) -> Result<Vec<f64>, String> {
    let cfg = model(window_cycles, taylor_order)?;
    check_multipliers(&cfg, &multipliers)?;
    if points < 2 || !(f_max > f_min) {
        return Err(format!("need at least two points over a non-empty range, got {points} on [{f_min}, {f_max}]"));
    }
    let design = SvdDesign::new(&cfg).map_err(|e| e.to_string())?;
    let l = design.l_matrix(h).map_err(|e| e.to_string())?;
    let tft = compose_filter(&l, &design.svd, &vec![1.0; cfg.terms()]).map_err(|e| e.to_string())?;
    let weighted = compose_filter(&l, &design.svd, &multipliers).map_err(|e| e.to_string())?;
    let ts = cfg.sample_period();
    let mut out = Vec::with_capacity(3 * points);
    for i in 0..points {
        let f = f_min + (f_max - f_min) * i as f64 / (points - 1) as f64;
        out.extend([f, gain(&tft, ts, f), gain(&weighted, ts, f)]);
    }
    Ok(out)
}

/// Maximum TVE (%) of order `h` against out-of-band interharmonic amplitude,
/// swept from 0.001 to `max_amplitude` in `steps` points. Returns triples
/// (amplitude, tft, weighted).
#[wasm_bindgen]
pub fn obi_sweep(
    window_cycles: u32,
    taylor_order: usize,
    h: usize,
    multipliers: Vec<f64>,
    max_amplitude: f64,
    steps: usize,
    seed: u64,
) -> Result<Vec<f64>, String> {
    let cfg = model(window_cycles, taylor_order)?;
    check_multipliers(&cfg, &multipliers)?;
    if steps < 2 || !(max_amplitude > 0.001) {
        return Err(format!("need at least two steps up to an amplitude above 0.001, got {steps} up to {max_amplitude}"));
    }
    let mut set = MultiplierSet::default();
    set.insert(h, multipliers).map_err(|e| e.to_string())?;
    let bank = bank_from_multipliers(&cfg, &set).map_err(|e| e.to_string())?;
    let tft = tft_filter_bank(&cfg).map_err(|e| e.to_string())?;
    let mut spec = ScenarioSpec::new(ScenarioKind::ObiAmplitudeSweep, seed);
    spec.model = Some(cfg);
    let step = (max_amplitude - 0.001) / (steps - 1) as f64;
    spec.sweep = Some(Sweep { start: 0.001, stop: max_amplitude, step });
    spec.signal.duration_s = 1.0;
    let result = run_scenario(&spec, &bank, Some(&tft), RunOptions::default()).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(3 * result.points.len());
    for p in &result.points {
        let m = p.orders.iter().find(|m| m.h == h).ok_or_else(|| format!("order {h} missing from results"))?;
        out.extend([p.sweep_value, m.baseline_max_tve_percent.unwrap_or(f64::NAN), m.max_tve_percent]);
    }
    Ok(out)
}
