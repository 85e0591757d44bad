//! Model configuration shared by design, estimation and benchmarking.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Current version of every structured file this crate writes.
pub const FORMAT_VERSION: u32 = 1;

/// Window and signal-model parameters.
///
/// Physical quantities carry their unit in the field name so the TOML form
/// is self-describing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub nominal_frequency_hz: f64,
    pub sampling_frequency_hz: f64,
    pub reporting_rate_hz: f64,
    /// Highest harmonic order modelled (H).
    pub max_harmonic: usize,
    /// Taylor expansion order (K).
    pub taylor_order: usize,
    /// Window length in nominal cycles (c).
    pub window_cycles: u32,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            nominal_frequency_hz: 50.0,
            sampling_frequency_hz: 10_000.0,
            reporting_rate_hz: 50.0,
            max_harmonic: 13,
            taylor_order: 2,
            window_cycles: 3,
        }
    }
}

fn is_integer(x: f64) -> bool {
    (x - x.round()).abs() <= 1e-9 * x.abs().max(1.0)
}

impl ModelConfig {
    /// Reference settings: 50 Hz, 10 kHz, 50 fps, H=13 with the given window.
    pub fn reference(window_cycles: u32, taylor_order: usize) -> Self {
        Self { window_cycles, taylor_order, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        let (f0, fs, fre) = (self.nominal_frequency_hz, self.sampling_frequency_hz, self.reporting_rate_hz);
        if !(f0 > 0.0 && fs > 0.0 && fre > 0.0) || !f0.is_finite() || !fs.is_finite() || !fre.is_finite() {
            return bad(format!("frequencies must be positive and finite (f0={f0}, fs={fs}, f_re={fre})"));
        }
        if self.max_harmonic < 2 {
            return bad(format!("max_harmonic must be at least 2, got {}", self.max_harmonic));
        }
        if self.window_cycles < 1 {
            return bad("window_cycles must be at least 1".into());
        }
        if (self.window_cycles as usize) < self.taylor_order + 1 {
            return bad(format!(
                "window_cycles ({}) must be >= taylor_order + 1 ({})",
                self.window_cycles,
                self.taylor_order + 1
            ));
        }
        if fs < 2.0 * self.max_harmonic as f64 * f0 {
            return bad(format!(
                "sampling frequency {fs} Hz violates Nyquist for harmonic {} of {f0} Hz",
                self.max_harmonic
            ));
        }
        if !is_integer(f0 / fre) {
            return bad(format!("reporting rate {fre} must divide the nominal frequency {f0}"));
        }
        if !is_integer(fs / fre) {
            return bad(format!("reporting rate {fre} must divide the sampling frequency {fs}"));
        }
        if !is_integer(fs / f0) {
            return bad(format!("nominal frequency {f0} must divide the sampling frequency {fs}"));
        }
        Ok(())
    }

    pub fn sample_period(&self) -> f64 {
        1.0 / self.sampling_frequency_hz
    }

    /// Window length N, the odd integer nearest to c·fs/f0 (ties go up).
    pub fn window_len(&self) -> usize {
        let exact = self.window_cycles as f64 * self.sampling_frequency_hz / self.nominal_frequency_hz;
        let r = exact.round() as i64;
        let n = if r % 2 != 0 {
            r
        } else if exact < r as f64 {
            r - 1
        } else {
            r + 1
        };
        n.max(1) as usize
    }

    /// Half window N_h, so that N = 2·N_h + 1.
    pub fn half_window(&self) -> usize {
        (self.window_len() - 1) / 2
    }

    /// Number of samples between consecutive reports.
    pub fn samples_per_report(&self) -> usize {
        (self.sampling_frequency_hz / self.reporting_rate_hz).round() as usize
    }

    /// Number of Taylor terms, K+1.
    pub fn terms(&self) -> usize {
        self.taylor_order + 1
    }

    /// Odd multiplier indices (1-based) that the optimizer may move, i.e. 3, 5, 7, ...
    pub fn free_multiplier_indices(&self) -> Vec<usize> {
        (3..=self.terms()).step_by(2).collect()
    }
}

/// Filter design settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DesignSettings {
    /// Frequency step used when scanning the transition band.
    pub grid_step_hz: f64,
    /// Passband-centre gain window that optimized candidates must respect.
    pub passband_guard: (f64, f64),
}

impl Default for DesignSettings {
    fn default() -> Self {
        Self { grid_step_hz: 0.1, passband_guard: (0.9, 1.1) }
    }
}

/// On-disk design configuration: `[model]` plus an optional `[design]` table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignConfigFile {
    #[serde(default = "default_version")]
    pub format_version: u32,
    pub model: ModelConfig,
    #[serde(default)]
    pub design: DesignSettings,
}

pub(crate) fn default_version() -> u32 {
    FORMAT_VERSION
}

impl DesignConfigFile {
    pub fn from_toml(text: &str) -> Result<Self> {
        let file: Self = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if file.format_version != FORMAT_VERSION {
            return Err(Error::Parse(format!("unsupported format_version {}", file.format_version)));
        }
        file.model.validate()?;
        Ok(file)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}
