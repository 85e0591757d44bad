//! Minimax search for the odd multipliers y_{h,3}, y_{h,5}, ….
//!
//! The filter is linear in the weights w_k = d_{1,k}/(y_k·λ_k), so the
//! response of each row of l_h is tabulated once on the transition-band grid
//! and every candidate costs one small complex dot product per grid point.
//!
//! Search layout (deterministic):
//! * the last free multiplier is found by a logarithmic scan over
//!   [0.2, 20] (ratio 1.05) followed by step-halving refinement to 0.005;
//! * any other free multipliers are scanned on the same logarithmic grid
//!   (every fourth point once there are two or more of them), then settled on a 0.1 lattice by neighbour descent, each candidate
//!   scored by its best last multiplier.
//!
//! The optimum lies in a narrow curved valley (the last multiplier is the
//! steep direction), which is why the last variable is always re-solved.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::{DesignSettings, ModelConfig};
use crate::design::{compose_filter, SvdDesign};
use crate::error::Result;
use crate::response::{frequency_response, max_transition_gain, TransitionBand};

pub const GRID_MIN: f64 = 0.2;
pub const GRID_MAX: f64 = 20.0;
pub const GRID_RATIO: f64 = 1.05;
pub const REFINE_RESOLUTION: f64 = 0.005;
pub const LATTICE_STEP: f64 = 0.1;
pub const TIE_TOLERANCE: f64 = 1e-6;
pub const LEADING_STRIDE: usize = 4;

/// Design outcome for one harmonic order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignRow {
    pub h: usize,
    pub tft_max_gain: f64,
    pub optimized_max_gain: f64,
    /// 1 − optimized / tft.
    pub reduction: f64,
    /// y_{h,1..=K+1}.
    pub multipliers: Vec<f64>,
    pub grid_step_hz: f64,
    /// Gain at h·f0 of the chosen filter.
    pub passband_gain: f64,
    /// Some candidate was rejected for leaving the passband guard window.
    pub passband_guard_active: bool,
    /// The search could not beat unit multipliers; unit multipliers kept.
    pub no_improvement: bool,
    /// K < 2: only y_{h,1} exists and it is held at one.
    pub no_free_multipliers: bool,
}

/// Tabulated responses for one order.
struct Objective {
    /// Contribution of all fixed terms at each grid frequency.
    base: Vec<Complex64>,
    /// Per free variable, its response at each grid frequency (unit multiplier).
    free: Vec<Vec<Complex64>>,
    base_center: Complex64,
    free_center: Vec<Complex64>,
    guard: (f64, f64),
    guard_hit: std::cell::Cell<bool>,
}

impl Objective {
    fn new(
        cfg: &ModelConfig,
        design: &SvdDesign,
        h: usize,
        l: &DMatrix<Complex64>,
        settings: &DesignSettings,
    ) -> Result<Self> {
        let ts = cfg.sample_period();
        let center = h as f64 * cfg.nominal_frequency_hz;
        let mut grid = TransitionBand::new(cfg, h)?.grid(settings.grid_step_hz)?;
        // points nearest the passband usually carry the maximum; visiting them
        // first makes the early exit in `eval` effective
        grid.sort_by(|a, b| (a - center).abs().total_cmp(&(b - center).abs()));

        let weights = design.weights();
        let free_idx: Vec<usize> = cfg.free_multiplier_indices().iter().map(|k| k - 1).collect();
        let rows: Vec<Vec<Complex64>> = (0..l.nrows()).map(|k| l.row(k).iter().copied().collect()).collect();
        let respond = |k: usize, f: f64| frequency_response(&rows[k], ts, f) * weights[k];

        let fixed: Vec<usize> = (0..l.nrows()).filter(|k| !free_idx.contains(k) && weights[*k] != 0.0).collect();
        let base = grid.iter().map(|&f| fixed.iter().map(|&k| respond(k, f)).sum()).collect();
        let free = free_idx.iter().map(|&k| grid.iter().map(|&f| respond(k, f)).collect()).collect();
        Ok(Self {
            base,
            free,
            base_center: fixed.iter().map(|&k| respond(k, center)).sum(),
            free_center: free_idx.iter().map(|&k| respond(k, center)).collect(),
            guard: settings.passband_guard,
            guard_hit: std::cell::Cell::new(false),
        })
    }

    /// Max transition gain for multipliers `y` of the free variables, or any
    /// value above `cutoff` once the running maximum exceeds it.
    fn eval(&self, y: &[f64], cutoff: f64) -> f64 {
        let inv: Vec<f64> = y.iter().map(|v| 1.0 / v).collect();
        let center: Complex64 = self.base_center + self.free_center.iter().zip(&inv).map(|(r, i)| r * i).sum::<Complex64>();
        let pass = center.norm();
        if pass < self.guard.0 || pass > self.guard.1 {
            self.guard_hit.set(true);
            return f64::INFINITY;
        }
        let mut max = 0.0f64;
        for (i, b) in self.base.iter().enumerate() {
            let mut z = *b;
            for (col, w) in self.free.iter().zip(&inv) {
                z += col[i] * w;
            }
            let g = z.norm_sqr();
            if g > max {
                max = g;
                if max.sqrt() > cutoff {
                    return max.sqrt();
                }
            }
        }
        max.sqrt()
    }
}

fn log_grid() -> Vec<f64> {
    let mut out = Vec::new();
    let mut y = GRID_MIN;
    while y <= GRID_MAX * (1.0 + 1e-12) {
        out.push(y);
        y *= GRID_RATIO;
    }
    out
}

fn distance_to_ones(y: &[f64]) -> f64 {
    y.iter().map(|v| (v - 1.0).powi(2)).sum::<f64>().sqrt()
}

#[derive(Clone)]
struct Candidate {
    y: Vec<f64>,
    value: f64,
}

impl Candidate {
    fn none(dim: usize) -> Self {
        Self { y: vec![1.0; dim], value: f64::INFINITY }
    }

    /// Strictly better, or tied within tolerance and closer to all-ones.
    fn beaten_by(&self, y: &[f64], value: f64) -> bool {
        if value < self.value - TIE_TOLERANCE {
            return true;
        }
        (value - self.value).abs() <= TIE_TOLERANCE && distance_to_ones(y) < distance_to_ones(&self.y)
    }

    fn cutoff(&self) -> f64 {
        self.value + TIE_TOLERANCE
    }
}

/// Best last multiplier for fixed leading multipliers.
fn solve_last(obj: &Objective, leading: &[f64], grid: &[f64]) -> Candidate {
    let dim = leading.len() + 1;
    let mut y = leading.to_vec();
    y.push(1.0);
    let mut best = Candidate::none(dim);
    for &g in grid {
        y[dim - 1] = g;
        let v = obj.eval(&y, best.cutoff());
        if best.beaten_by(&y, v) {
            best = Candidate { y: y.clone(), value: v };
        }
    }
    if !best.value.is_finite() {
        return best;
    }
    let mut step = best.y[dim - 1] * (GRID_RATIO - 1.0);
    while step >= REFINE_RESOLUTION {
        let mut moved = false;
        for dir in [-1.0, 1.0] {
            let cand = best.y[dim - 1] + dir * step;
            if cand <= 0.0 {
                continue;
            }
            y[dim - 1] = cand;
            let v = obj.eval(&y, best.cutoff());
            if best.beaten_by(&y, v) {
                best = Candidate { y: y.clone(), value: v };
                moved = true;
                break;
            }
        }
        if !moved {
            step /= 2.0;
        }
    }
    best
}

fn lattice(v: f64) -> f64 {
    ((v / LATTICE_STEP).round() * LATTICE_STEP).max(LATTICE_STEP)
}

fn search(obj: &Objective, dims: usize) -> Candidate {
    let grid = log_grid();
    if dims == 1 {
        return solve_last(obj, &[], &grid);
    }
    let leading = dims - 1;

    // coarse tensor scan over the leading variables; with two or more of them
    // only every LEADING_STRIDE-th grid point is visited
    let coarse: Vec<f64> = if leading == 1 { grid.clone() } else { grid.iter().step_by(LEADING_STRIDE).copied().collect() };
    let mut best = Candidate::none(dims);
    let mut idx = vec![0usize; leading];
    'scan: loop {
        let lead: Vec<f64> = idx.iter().map(|&i| coarse[i]).collect();
        let cand = solve_last(obj, &lead, &grid);
        if best.beaten_by(&cand.y, cand.value) {
            best = cand;
        }
        for slot in (0..leading).rev() {
            idx[slot] += 1;
            if idx[slot] < coarse.len() {
                continue 'scan;
            }
            idx[slot] = 0;
        }
        break;
    }
    if !best.value.is_finite() {
        return best;
    }

    // settle the leading variables on the lattice
    let mut lead: Vec<f64> = best.y[..leading].iter().map(|&v| lattice(v)).collect();
    let mut current = solve_last(obj, &lead, &grid);
    loop {
        let mut best_neighbour = Candidate::none(dims);
        for slot in 0..leading {
            for dir in [-1.0, 1.0] {
                let v = lead[slot] + dir * LATTICE_STEP;
                if v < LATTICE_STEP - 1e-12 {
                    continue;
                }
                let mut trial = lead.clone();
                trial[slot] = lattice(v);
                let cand = solve_last(obj, &trial, &grid);
                if best_neighbour.beaten_by(&cand.y, cand.value) {
                    best_neighbour = cand;
                }
            }
        }
        if !current.beaten_by(&best_neighbour.y, best_neighbour.value) {
            break;
        }
        lead = best_neighbour.y[..leading].to_vec();
        current = best_neighbour;
    }
    current
}

/// Runs the multiplier search for order `h` given a prepared SVD design and l_h.
pub fn optimize_for_order(
    design: &SvdDesign,
    h: usize,
    l: &DMatrix<Complex64>,
    settings: &DesignSettings,
) -> Result<DesignRow> {
    let cfg = &design.cfg;
    let terms = cfg.terms();
    let band = TransitionBand::new(cfg, h)?;
    let ts = cfg.sample_period();
    let center = h as f64 * cfg.nominal_frequency_hz;

    let unit = vec![1.0; terms];
    let tft_filter = compose_filter(l, &design.svd, &unit)?;
    let tft_gain = max_transition_gain(&tft_filter, cfg, &band, settings.grid_step_hz)?;

    let free = cfg.free_multiplier_indices();
    let mut row = DesignRow {
        h,
        tft_max_gain: tft_gain,
        optimized_max_gain: tft_gain,
        reduction: 0.0,
        multipliers: unit.clone(),
        grid_step_hz: settings.grid_step_hz,
        passband_gain: crate::response::gain(&tft_filter, ts, center),
        passband_guard_active: false,
        no_improvement: false,
        no_free_multipliers: free.is_empty(),
    };
    if free.is_empty() {
        return Ok(row);
    }

    let obj = Objective::new(cfg, design, h, l, settings)?;
    let best = search(&obj, free.len());
    row.passband_guard_active = obj.guard_hit.get();

    let mut y = unit;
    for (slot, &k) in free.iter().enumerate() {
        y[k - 1] = best.y[slot];
    }
    let filter = compose_filter(l, &design.svd, &y)?;
    let achieved = max_transition_gain(&filter, cfg, &band, settings.grid_step_hz)?;
    if !(achieved < tft_gain) {
        row.no_improvement = true;
        return Ok(row);
    }
    row.optimized_max_gain = achieved;
    row.reduction = 1.0 - achieved / tft_gain;
    row.passband_gain = crate::response::gain(&filter, ts, center);
    row.multipliers = y;
    Ok(row)
}

/// Optimizes the odd multipliers of order `h` with default design settings.
pub fn optimize_multipliers(cfg: &ModelConfig, h: usize) -> Result<DesignRow> {
    let design = SvdDesign::new(cfg)?;
    let l = design.l_matrix(h)?;
    optimize_for_order(&design, h, &l, &DesignSettings::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_spans_range() {
        let g = log_grid();
        assert_eq!(g[0], GRID_MIN);
        assert!(*g.last().unwrap() <= GRID_MAX && *g.last().unwrap() > GRID_MAX / GRID_RATIO);
        assert_eq!(g.len(), 95);
    }

    #[test]
    fn lattice_rounding() {
        assert!((lattice(1.57) - 1.6).abs() < 1e-12);
        assert!((lattice(0.01) - 0.1).abs() < 1e-12);
    }

    #[test]
    fn tie_break_prefers_unit_distance() {
        let c = Candidate { y: vec![3.0], value: 0.5 };
        assert!(c.beaten_by(&[2.0], 0.5 + 5e-7));
        assert!(!c.beaten_by(&[4.0], 0.5));
        assert!(c.beaten_by(&[9.0], 0.4));
    }

    #[test]
    fn k0_has_nothing_to_optimize() {
        let cfg = ModelConfig::reference(3, 0);
        let row = optimize_multipliers(&cfg, 2).unwrap();
        assert!(row.no_free_multipliers);
        assert_eq!(row.multipliers, vec![1.0]);
        assert_eq!(row.optimized_max_gain, row.tft_max_gain);
    }
}
