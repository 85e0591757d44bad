//! Frequency-domain evaluation of complex FIR phasor filters.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::ModelConfig;
use crate::error::{Error, Result};

/// Complex response Σ_n r[n]·e^{j2π·f·n·T_s} of a centred filter (n = −N_h..=N_h).
///
/// For a real tone A·cos(2πft + φ) the phasor estimator returns
/// A·e^{jφ}·H(f) plus the image term A·e^{−jφ}·H(−f), so |H(h·f0)| = 1 for
/// an exact h-th harmonic filter.
pub fn frequency_response(filter: &[Complex64], sample_period: f64, f: f64) -> Complex64 {
    let nh = (filter.len() / 2) as f64;
    let omega = 2.0 * std::f64::consts::PI * f * sample_period;
    let step = Complex64::from_polar(1.0, omega);
    // re-anchor the rotating phasor periodically to bound drift
    let mut acc = Complex64::new(0.0, 0.0);
    let mut rot = Complex64::from_polar(1.0, -omega * nh);
    for (i, &c) in filter.iter().enumerate() {
        if i % 64 == 0 {
            rot = Complex64::from_polar(1.0, omega * (i as f64 - nh));
        }
        acc += c * rot;
        rot *= step;
    }
    acc
}

pub fn gain(filter: &[Complex64], sample_period: f64, f: f64) -> f64 {
    frequency_response(filter, sample_period, f).norm()
}

/// Ψ_h = [(h−1)f0, h·f0 − f_re/2] ∪ [h·f0 + f_re/2, (h+1)f0].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitionBand {
    pub h: usize,
    pub lower: (f64, f64),
    pub upper: (f64, f64),
}

impl TransitionBand {
    pub fn new(cfg: &ModelConfig, h: usize) -> Result<Self> {
        if h == 0 || h > cfg.max_harmonic {
            return Err(Error::OrderOutOfRange { h, max: cfg.max_harmonic });
        }
        let (f0, half) = (cfg.nominal_frequency_hz, cfg.reporting_rate_hz / 2.0);
        let hf = h as f64 * f0;
        let band = Self { h, lower: ((h as f64 - 1.0) * f0, hf - half), upper: (hf + half, hf + f0) };
        if band.lower.0 > band.lower.1 || band.upper.0 > band.upper.1 {
            return Err(Error::InvalidArgument(format!("transition band of order {h} is empty")));
        }
        Ok(band)
    }

    /// Sample points spaced `step` apart in both intervals, endpoints included.
    pub fn grid(&self, step: f64) -> Result<Vec<f64>> {
        if !(step > 0.0) {
            return Err(Error::InvalidArgument(format!("grid step must be positive, got {step}")));
        }
        let mut out = Vec::new();
        for (a, b) in [self.lower, self.upper] {
            let count = ((b - a) / step + 1e-9).floor() as usize;
            out.extend((0..=count).map(|i| a + i as f64 * step));
            if b - out[out.len() - 1] > 1e-9 * b.abs().max(1.0) {
                out.push(b);
            }
        }
        Ok(out)
    }
}

/// Maximum gain over the transition band sampled every `grid_step` Hz.
pub fn max_transition_gain(
    filter: &[Complex64],
    cfg: &ModelConfig,
    band: &TransitionBand,
    grid_step: f64,
) -> Result<f64> {
    let ts = cfg.sample_period();
    Ok(band.grid(grid_step)?.into_iter().map(|f| gain(filter, ts, f)).fold(0.0, f64::max))
}
