//! Scenario specifications, sweep execution and result tables.

use std::f64::consts::PI;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::config::{default_version, ModelConfig, FORMAT_VERSION};
use crate::design::FilterBank;
use crate::error::{Error, Result};
use crate::estimator::{stream_estimate, Report};

use super::metrics::{response_time, tve};
use super::signal::{add_noise, apply_am, apply_pm, multitone, point_rng, ModulationDepth, MultitoneParams, TestSignal};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    /// Sweep value: interharmonic amplitude (p.u.).
    ObiAmplitudeSweep,
    /// Sweep value: harmonic amplitude (p.u.).
    HarmonicAmplitudeSweep,
    /// Sweep value: SNR (dB).
    NoiseObi,
    /// Sweep value: fundamental frequency (Hz).
    FreqDeviationObi,
    /// Sweep value: modulation frequency (Hz).
    AmObi,
    /// Sweep value: modulation frequency (Hz).
    PmObi,
    /// Sweep value: frequency ramp rate (Hz/s).
    RampObi,
    /// Sweep value: harmonic order.
    AmpStep,
    /// Sweep value: harmonic order.
    PhaseStep,
}

impl ScenarioKind {
    pub fn is_step(self) -> bool {
        matches!(self, ScenarioKind::AmpStep | ScenarioKind::PhaseStep)
    }

    pub fn default_sweep(self, cfg: &ModelConfig) -> Sweep {
        let s = |start, stop, step| Sweep { start, stop, step };
        let f0 = cfg.nominal_frequency_hz;
        match self {
            ScenarioKind::ObiAmplitudeSweep => s(0.001, 0.05, 0.001),
            ScenarioKind::HarmonicAmplitudeSweep => s(0.08, 0.12, 0.005),
            ScenarioKind::NoiseObi => s(50.0, 80.0, 5.0),
            ScenarioKind::FreqDeviationObi => s(f0 - 0.5, f0 + 0.5, 0.1),
            ScenarioKind::AmObi | ScenarioKind::PmObi => s(0.1, 2.0, 0.1),
            ScenarioKind::RampObi => s(1.0, 1.0, 1.0),
            ScenarioKind::AmpStep | ScenarioKind::PhaseStep => s(2.0, cfg.max_harmonic as f64, 1.0),
        }
    }
}

/// Inclusive sweep; `stop` is always visited even when it is off the step grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Sweep {
    pub fn points(&self) -> Result<Vec<f64>> {
        let bad = |m: &str| Err(Error::InvalidConfig(format!("sweep {m}: {self:?}")));
        if !(self.start.is_finite() && self.stop.is_finite() && self.step.is_finite()) {
            return bad("has non-finite bounds");
        }
        if self.stop < self.start {
            return bad("stop is below start");
        }
        if self.stop == self.start {
            return Ok(vec![self.start]);
        }
        if !(self.step > 0.0) {
            return bad("step must be positive");
        }
        let span = self.stop - self.start;
        let tol = 1e-9 * self.step;
        let n = ((span + tol) / self.step).floor() as usize;
        let mut pts: Vec<f64> = (0..=n).map(|i| self.start + i as f64 * self.step).collect();
        if span - n as f64 * self.step > tol {
            pts.push(self.stop);
        }
        Ok(pts)
    }
}

/// Signal-level settings shared by all kinds; unset fields take the defaults
/// of the matching test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SignalSettings {
    pub fundamental_amplitude_pu: f64,
    pub harmonic_amplitude_pu: f64,
    pub obi_amplitude_pu: f64,
    /// Record length per sweep point for steady and modulated tests.
    pub duration_s: f64,
    /// AM default: uniform 0.1. PM default: 0.1·h rad.
    pub modulation_depth: Option<ModulationDepth>,
    pub ramp_start_hz: Option<f64>,
    pub ramp_span_hz: f64,
    pub step_amplitude_ratio: f64,
    pub step_phase_rad: f64,
    /// Step tests report at this rate to resolve the response time.
    pub step_reporting_rate_hz: f64,
    pub step_duration_s: f64,
    /// Reports dropped at each end of steady and modulated records.
    pub edge_reports: usize,
}

impl Default for SignalSettings {
    fn default() -> Self {
        Self {
            fundamental_amplitude_pu: 1.0,
            harmonic_amplitude_pu: 0.1,
            obi_amplitude_pu: 0.01,
            duration_s: 2.0,
            modulation_depth: None,
            ramp_start_hz: None,
            ramp_span_hz: 1.0,
            step_amplitude_ratio: 0.1,
            step_phase_rad: -PI / 18.0,
            step_reporting_rate_hz: 1000.0,
            step_duration_s: 0.6,
            edge_reports: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    #[serde(default = "default_version")]
    pub format_version: u32,
    pub kind: ScenarioKind,
    pub seed: u64,
    /// Must agree with the banks on f0, fs, f_re and H when given.
    #[serde(default)]
    pub model: Option<ModelConfig>,
    #[serde(default)]
    pub sweep: Option<Sweep>,
    #[serde(default)]
    pub signal: SignalSettings,
}

impl ScenarioSpec {
    pub fn new(kind: ScenarioKind, seed: u64) -> Self {
        Self { format_version: FORMAT_VERSION, kind, seed, model: None, sweep: None, signal: SignalSettings::default() }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let spec: Self = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if spec.format_version != FORMAT_VERSION {
            return Err(Error::Parse(format!("unsupported format_version {}", spec.format_version)));
        }
        if let Some(m) = &spec.model {
            m.validate()?;
        }
        Ok(spec)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    pub fn sweep_or_default(&self, cfg: &ModelConfig) -> Sweep {
        self.sweep.unwrap_or_else(|| self.kind.default_sweep(cfg))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderMetrics {
    pub h: usize,
    pub max_tve_percent: f64,
    pub baseline_max_tve_percent: Option<f64>,
    pub response_time_s: Option<f64>,
    pub baseline_response_time_s: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointResult {
    pub index: usize,
    pub sweep_value: f64,
    pub orders: Vec<OrderMetrics>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub sweep_value: f64,
    pub t_tag: f64,
    pub h: usize,
    pub tve_percent: f64,
    pub baseline_tve_percent: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioResult {
    pub kind: ScenarioKind,
    pub seed: u64,
    pub sweep: Sweep,
    pub points: Vec<PointResult>,
    /// Per-order maxima across the sweep.
    pub summary: Vec<OrderMetrics>,
    pub warnings: Vec<String>,
    pub trace: Vec<TraceRow>,
}

impl ScenarioResult {
    pub fn summary_for(&self, h: usize) -> Option<&OrderMetrics> {
        self.summary.iter().find(|m| m.h == h)
    }

    /// Largest per-order TVE across the sweep and all orders.
    pub fn max_tve_percent(&self) -> f64 {
        self.summary.iter().map(|m| m.max_tve_percent).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunOptions {
    /// Collect per-report TVE rows.
    pub trace: bool,
}

fn check_compatible(cfg: &ModelConfig, other: &ModelConfig, what: &str) -> Result<()> {
    let same = cfg.nominal_frequency_hz == other.nominal_frequency_hz
        && cfg.sampling_frequency_hz == other.sampling_frequency_hz
        && cfg.reporting_rate_hz == other.reporting_rate_hz
        && cfg.max_harmonic == other.max_harmonic;
    if same {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!("{what} disagrees with the scenario on f0, fs, f_re or H")))
    }
}

struct Point {
    signal: TestSignal,
    samples: Vec<f64>,
    start: f64,
    reporting_rate: f64,
    orders: Vec<usize>,
}

fn build_point(spec: &ScenarioSpec, cfg: &ModelConfig, window_s: f64, index: usize, value: f64) -> Result<Point> {
    let set = &spec.signal;
    let fs = cfg.sampling_frequency_hz;
    let mut params = MultitoneParams {
        fundamental_amplitude_pu: set.fundamental_amplitude_pu,
        harmonic_amplitude_pu: set.harmonic_amplitude_pu,
        obi_amplitude_pu: set.obi_amplitude_pu,
        fundamental_hz: None,
    };
    let mut rng = point_rng(spec.seed, index as u64);
    let mut duration = set.duration_s;
    let all_orders: Vec<usize> = (2..=cfg.max_harmonic).collect();
    let kind = spec.kind;

    if kind.is_step() {
        let h = value.round() as usize;
        if (value - h as f64).abs() > 1e-9 || h < 2 || h > cfg.max_harmonic {
            return Err(Error::InvalidConfig(format!("step sweep value {value} is not a harmonic order in 2..={}", cfg.max_harmonic)));
        }
        let (ka, kp) = match kind {
            ScenarioKind::AmpStep => (set.step_amplitude_ratio, 0.0),
            _ => (0.0, set.step_phase_rad),
        };
        let (samples, signal) = super::signal::gen_step(cfg, h, ka, kp, set.step_duration_s)?;
        return Ok(Point { signal, samples, start: -0.5 * set.step_duration_s, reporting_rate: set.step_reporting_rate_hz, orders: vec![h] });
    }

    match kind {
        ScenarioKind::ObiAmplitudeSweep => params.obi_amplitude_pu = value,
        ScenarioKind::HarmonicAmplitudeSweep => params.harmonic_amplitude_pu = value,
        ScenarioKind::FreqDeviationObi => params.fundamental_hz = Some(value),
        _ => {}
    }
    let mut signal = multitone(cfg, &params, &mut rng);
    match kind {
        ScenarioKind::AmObi => {
            apply_am(&mut signal, value, set.modulation_depth.unwrap_or(ModulationDepth::Uniform(0.1)));
            duration = duration.max(1.0 / value + window_s + 2.0 * set.edge_reports as f64 / cfg.reporting_rate_hz);
        }
        ScenarioKind::PmObi => {
            apply_pm(&mut signal, value, set.modulation_depth.unwrap_or(ModulationDepth::PerOrder(0.1)));
            duration = duration.max(1.0 / value + window_s + 2.0 * set.edge_reports as f64 / cfg.reporting_rate_hz);
        }
        ScenarioKind::RampObi => {
            if !(value > 0.0) {
                return Err(Error::InvalidConfig(format!("ramp rate {value} must be positive")));
            }
            signal.fundamental_hz = set.ramp_start_hz.unwrap_or(cfg.nominal_frequency_hz - 0.5 * set.ramp_span_hz);
            signal.ramp_hz_per_s = value;
            duration = set.ramp_span_hz / value;
        }
        _ => {}
    }
    signal.check_nyquist(fs, duration)?;
    let len = (duration * fs).round() as usize;
    let mut samples = signal.sample(fs, 0.0, len);
    if kind == ScenarioKind::NoiseObi {
        add_noise(&mut samples, set.fundamental_amplitude_pu, value, &mut rng);
    }
    Ok(Point { signal, samples, start: 0.0, reporting_rate: cfg.reporting_rate_hz, orders: all_orders })
}

/// Per-report TVE series of one bank for order h.
fn tve_series(reports: &[Report], signal: &TestSignal, h: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut tags = Vec::with_capacity(reports.len());
    let mut errs = Vec::with_capacity(reports.len());
    for r in reports {
        let est = r.get(h).ok_or(Error::OrderOutOfRange { h, max: 0 })?;
        let reference = signal.reference(h, r.t_tag).ok_or(Error::OrderOutOfRange { h, max: 0 })?;
        tags.push(r.t_tag);
        errs.push(tve(est.phasor, reference)?);
    }
    Ok((tags, errs))
}

fn run_point(
    spec: &ScenarioSpec,
    cfg: &ModelConfig,
    bank: &FilterBank,
    baseline: Option<&FilterBank>,
    options: RunOptions,
    index: usize,
    value: f64,
) -> Result<(PointResult, Vec<TraceRow>)> {
    let window_s = bank.window_len().max(baseline.map_or(0, FilterBank::window_len)) as f64 / cfg.sampling_frequency_hz;
    let point = build_point(spec, cfg, window_s, index, value)?;
    let step = spec.kind.is_step();
    let trim = |mut reports: Vec<Report>| {
        if !step {
            let e = spec.signal.edge_reports;
            if reports.len() > 2 * e {
                reports.truncate(reports.len() - e);
                reports.drain(..e);
            } else {
                reports.clear();
            }
        }
        reports
    };
    let main = trim(stream_estimate(&point.samples, point.start, bank, point.reporting_rate)?);
    let base = match baseline {
        Some(b) => Some(trim(stream_estimate(&point.samples, point.start, b, point.reporting_rate)?)),
        None => None,
    };
    if main.is_empty() {
        return Err(Error::InvalidConfig(format!("sweep point {value} produced no reports; record too short")));
    }

    let mut orders = Vec::new();
    let mut trace = Vec::new();
    for &h in &point.orders {
        let (tags, errs) = tve_series(&main, &point.signal, h)?;
        let base_series = base.as_deref().map(|b| tve_series(b, &point.signal, h)).transpose()?;
        let max = |v: &[f64]| v.iter().copied().fold(0.0, f64::max);
        let (response, base_response) = if step {
            (
                Some(response_time(&tags, &errs)?),
                base_series.as_ref().map(|(t, e)| response_time(t, e)).transpose()?,
            )
        } else {
            (None, None)
        };
        orders.push(OrderMetrics {
            h,
            max_tve_percent: max(&errs),
            baseline_max_tve_percent: base_series.as_ref().map(|(_, e)| max(e)),
            response_time_s: response,
            baseline_response_time_s: base_response,
        });
        if options.trace {
            for (&t, &e) in tags.iter().zip(&errs) {
                // Baseline windows may differ in length, so match reports by tag.
                let b = base_series.as_ref().and_then(|(bt, be)| {
                    bt.iter().position(|&x| (x - t).abs() < 1e-12).map(|j| be[j])
                });
                trace.push(TraceRow { sweep_value: value, t_tag: t, h, tve_percent: e, baseline_tve_percent: b });
            }
        }
    }
    Ok((PointResult { index, sweep_value: value, orders }, trace))
}

/// Runs every sweep point of `spec` through `bank` (and `baseline` when given).
///
/// Points are independent and may run in parallel; results are merged in
/// sweep order, so the output depends only on the inputs.
pub fn run_scenario(
    spec: &ScenarioSpec,
    bank: &FilterBank,
    baseline: Option<&FilterBank>,
    options: RunOptions,
) -> Result<ScenarioResult> {
    if spec.format_version != FORMAT_VERSION {
        return Err(Error::InvalidConfig(format!("unsupported format_version {}", spec.format_version)));
    }
    let cfg = spec.model.unwrap_or(bank.cfg);
    cfg.validate()?;
    check_compatible(&cfg, &bank.cfg, "bank")?;
    if let Some(b) = baseline {
        check_compatible(&cfg, &b.cfg, "baseline bank")?;
    }
    let sweep = spec.sweep_or_default(&cfg);
    let values = sweep.points()?;

    let mut warnings = Vec::new();
    if matches!(spec.kind, ScenarioKind::AmObi | ScenarioKind::PmObi) {
        if let Some(fm) = values.iter().copied().find(|&fm| fm > cfg.reporting_rate_hz / 2.0) {
            warnings.push(format!("modulation frequency {fm} Hz exceeds half the reporting rate; reports alias"));
        }
    }
    if spec.kind == ScenarioKind::AmObi {
        let depth = spec.signal.modulation_depth.unwrap_or(ModulationDepth::Uniform(0.1));
        if (2..=cfg.max_harmonic).any(|h| depth.for_order(h) >= 1.0) {
            warnings.push("amplitude modulation depth reaches 1; envelopes cross zero".into());
        }
    }

    let run = |(i, &v): (usize, &f64)| run_point(spec, &cfg, bank, baseline, options, i, v);
    #[cfg(feature = "parallel")]
    let outcomes: Vec<_> = {
        use rayon::prelude::*;
        values.par_iter().enumerate().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let outcomes: Vec<_> = values.iter().enumerate().map(run).collect();

    let mut points = Vec::with_capacity(outcomes.len());
    let mut trace = Vec::new();
    for o in outcomes {
        let (p, t) = o?;
        points.push(p);
        trace.extend(t);
    }
    let summary = summarize(&points);
    Ok(ScenarioResult { kind: spec.kind, seed: spec.seed, sweep, points, summary, warnings, trace })
}

fn summarize(points: &[PointResult]) -> Vec<OrderMetrics> {
    let mut out: Vec<OrderMetrics> = Vec::new();
    let fmax = |a: Option<f64>, b: Option<f64>| match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    };
    for m in points.iter().flat_map(|p| &p.orders) {
        match out.iter_mut().find(|s| s.h == m.h) {
            Some(s) => {
                s.max_tve_percent = s.max_tve_percent.max(m.max_tve_percent);
                s.baseline_max_tve_percent = fmax(s.baseline_max_tve_percent, m.baseline_max_tve_percent);
                s.response_time_s = fmax(s.response_time_s, m.response_time_s);
                s.baseline_response_time_s = fmax(s.baseline_response_time_s, m.baseline_response_time_s);
            }
            None => out.push(*m),
        }
    }
    out.sort_by_key(|m| m.h);
    out
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn opt_ms(v: Option<f64>) -> String {
    v.map(|x| (x * 1e3).to_string()).unwrap_or_default()
}

impl ScenarioResult {
    /// One row per (sweep point, order).
    pub fn write_points_csv(&self, mut w: impl Write) -> Result<()> {
        let step = self.kind.is_step();
        write!(w, "sweep_value,h,max_tve_percent,baseline_max_tve_percent")?;
        writeln!(w, "{}", if step { ",response_time_ms,baseline_response_time_ms" } else { "" })?;
        for p in &self.points {
            for m in &p.orders {
                write!(w, "{},{},{},{}", p.sweep_value, m.h, m.max_tve_percent, opt(m.baseline_max_tve_percent))?;
                if step {
                    write!(w, ",{},{}", opt_ms(m.response_time_s), opt_ms(m.baseline_response_time_s))?;
                }
                writeln!(w)?;
            }
        }
        Ok(())
    }

    /// One row per order with maxima across the sweep.
    pub fn write_summary_csv(&self, mut w: impl Write) -> Result<()> {
        let step = self.kind.is_step();
        write!(w, "h,max_tve_percent,baseline_max_tve_percent")?;
        writeln!(w, "{}", if step { ",max_response_time_ms,baseline_max_response_time_ms" } else { "" })?;
        for m in &self.summary {
            write!(w, "{},{},{}", m.h, m.max_tve_percent, opt(m.baseline_max_tve_percent))?;
            if step {
                write!(w, ",{},{}", opt_ms(m.response_time_s), opt_ms(m.baseline_response_time_s))?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    pub fn write_trace_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "sweep_value,t_tag,h,tve_percent,baseline_tve_percent")?;
        for r in &self.trace {
            writeln!(w, "{},{},{},{},{}", r.sweep_value, r.t_tag, r.h, r.tve_percent, opt(r.baseline_tve_percent))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::tft_filter_bank;

    #[test]
    fn sweep_points_include_stop() {
        let p = Sweep { start: 0.001, stop: 0.05, step: 0.005 }.points().unwrap();
        assert_eq!(p.len(), 11);
        assert_eq!(*p.last().unwrap(), 0.05);
        let p = Sweep { start: 50.0, stop: 80.0, step: 5.0 }.points().unwrap();
        assert_eq!(p, vec![50.0, 55.0, 60.0, 65.0, 70.0, 75.0, 80.0]);
        assert_eq!(Sweep { start: 1.0, stop: 1.0, step: 0.0 }.points().unwrap(), vec![1.0]);
        assert!(Sweep { start: 2.0, stop: 1.0, step: 0.1 }.points().is_err());
        assert!(Sweep { start: 0.0, stop: 1.0, step: 0.0 }.points().is_err());
    }

    #[test]
    fn spec_toml_roundtrip_and_errors() {
        let text = "kind = \"noise_obi\"\nseed = 3\n[sweep]\nstart = 50.0\nstop = 60.0\nstep = 5.0\n";
        let spec = ScenarioSpec::from_toml(text).unwrap();
        assert_eq!(spec.kind, ScenarioKind::NoiseObi);
        assert_eq!(ScenarioSpec::from_toml(&spec.to_toml()).unwrap(), spec);
        assert!(ScenarioSpec::from_toml("kind = \"noise_obi\"\n").is_err(), "seed is mandatory");
        assert!(ScenarioSpec::from_toml("kind = \"bogus\"\nseed = 1\n").is_err());
    }

    #[test]
    fn in_model_signal_gives_negligible_tve_with_tft() {
        let bank = tft_filter_bank(&ModelConfig::default()).unwrap();
        let mut spec = ScenarioSpec::new(ScenarioKind::HarmonicAmplitudeSweep, 1);
        spec.signal.obi_amplitude_pu = 0.0;
        spec.signal.duration_s = 0.3;
        spec.sweep = Some(Sweep { start: 0.1, stop: 0.1, step: 0.0 });
        let r = run_scenario(&spec, &bank, None, RunOptions::default()).unwrap();
        assert_eq!(r.summary.len(), 12);
        assert!(r.max_tve_percent() < 1e-6, "{}", r.max_tve_percent());
    }

    #[test]
    fn results_are_deterministic() {
        let bank = tft_filter_bank(&ModelConfig::default()).unwrap();
        let mut spec = ScenarioSpec::new(ScenarioKind::NoiseObi, 9);
        spec.signal.duration_s = 0.3;
        spec.sweep = Some(Sweep { start: 60.0, stop: 70.0, step: 10.0 });
        let opts = RunOptions { trace: true };
        let a = run_scenario(&spec, &bank, Some(&bank), opts).unwrap();
        let b = run_scenario(&spec, &bank, Some(&bank), opts).unwrap();
        let csv = |r: &ScenarioResult| {
            let mut v = Vec::new();
            r.write_points_csv(&mut v).unwrap();
            r.write_summary_csv(&mut v).unwrap();
            r.write_trace_csv(&mut v).unwrap();
            v
        };
        assert_eq!(csv(&a), csv(&b));
        assert!(!a.trace.is_empty());
        let m = a.summary_for(5).unwrap();
        assert_eq!(Some(m.max_tve_percent), m.baseline_max_tve_percent);
    }

    #[test]
    fn step_scenario_reports_response_time() {
        let bank = tft_filter_bank(&ModelConfig::default()).unwrap();
        let mut spec = ScenarioSpec::new(ScenarioKind::AmpStep, 1);
        spec.sweep = Some(Sweep { start: 3.0, stop: 3.0, step: 0.0 });
        let r = run_scenario(&spec, &bank, None, RunOptions::default()).unwrap();
        let rt = r.summary_for(3).unwrap().response_time_s.unwrap();
        assert!(rt > 0.0 && rt < 0.06, "{rt}");
    }

    #[test]
    fn mismatched_bank_is_rejected() {
        let bank = tft_filter_bank(&ModelConfig::default()).unwrap();
        let mut spec = ScenarioSpec::new(ScenarioKind::NoiseObi, 1);
        spec.model = Some(ModelConfig { reporting_rate_hz: 100.0, ..ModelConfig::default() });
        assert!(matches!(run_scenario(&spec, &bank, None, RunOptions::default()), Err(Error::InvalidConfig(_))));
    }
}
