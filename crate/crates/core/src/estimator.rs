//! Sliding-window phasor estimation with a designed filter bank.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::design::FilterBank;
use crate::error::{Error, Result};

/// N consecutive samples centred on `t_tag`.
#[derive(Debug, Clone, Copy)]
pub struct SampleWindow<'a> {
    pub samples: &'a [f64],
    pub t_tag: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasorEstimate {
    pub h: usize,
    pub t_tag: f64,
    pub phasor: Complex64,
    pub amplitude: f64,
    /// Radians in (−π, π].
    pub phase: f64,
}

impl PhasorEstimate {
    pub fn new(h: usize, t_tag: f64, phasor: Complex64) -> Self {
        Self { h, t_tag, phasor, amplitude: phasor.norm(), phase: wrap_phase(phasor.arg()) }
    }
}

/// Wraps an angle to (−π, π].
pub fn wrap_phase(x: f64) -> f64 {
    let mut y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    }
    y
}

/// e^{−j2π·h·f0·t}, reduced to whole cycles before the trig call.
fn demodulator(h: usize, f0: f64, t: f64) -> Complex64 {
    let cycles = h as f64 * f0 * t;
    let frac = cycles - cycles.round();
    Complex64::from_polar(1.0, -2.0 * PI * frac)
}

/// Filter coefficients split into real and imaginary planes for the inner loop.
#[derive(Debug, Clone)]
struct PreparedFilter {
    h: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

#[derive(Debug, Clone)]
struct Prepared {
    f0: f64,
    n: usize,
    filters: Vec<PreparedFilter>,
}

impl Prepared {
    fn new(bank: &FilterBank) -> Self {
        let filters = bank
            .filters
            .iter()
            .map(|(&h, c)| PreparedFilter { h, re: c.iter().map(|z| z.re).collect(), im: c.iter().map(|z| z.im).collect() })
            .collect();
        Self { f0: bank.cfg.nominal_frequency_hz, n: bank.window_len(), filters }
    }

    fn apply(&self, samples: &[f64], t_tag: f64, out: &mut Vec<PhasorEstimate>) {
        for f in &self.filters {
            let mut acc_re = 0.0;
            let mut acc_im = 0.0;
            for ((&s, &a), &b) in samples.iter().zip(&f.re).zip(&f.im) {
                acc_re += a * s;
                acc_im += b * s;
            }
            let phasor = 2.0 * demodulator(f.h, self.f0, t_tag) * Complex64::new(acc_re, acc_im);
            out.push(PhasorEstimate::new(f.h, t_tag, phasor));
        }
    }
}

/// Estimates every phasor in the bank from one centred window.
pub fn estimate_window(window: &SampleWindow<'_>, bank: &FilterBank) -> Result<Vec<PhasorEstimate>> {
    let n = bank.window_len();
    if window.samples.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: window.samples.len() });
    }
    let mut out = Vec::with_capacity(bank.filters.len());
    Prepared::new(bank).apply(window.samples, window.t_tag, &mut out);
    Ok(out)
}

/// All phasor estimates sharing one time tag.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    /// Index of the centre sample in the stream.
    pub center_index: u64,
    pub t_tag: f64,
    pub estimates: Vec<PhasorEstimate>,
}

impl Report {
    pub fn get(&self, h: usize) -> Option<&PhasorEstimate> {
        self.estimates.iter().find(|e| e.h == h)
    }
}

/// Incremental estimator holding only the most recent N samples.
///
/// Reports are tagged at the centre sample. The first tag is the earliest
/// sample with a complete window; later tags follow every `step` samples.
#[derive(Debug, Clone)]
pub struct StreamEstimator {
    prepared: Prepared,
    fs: f64,
    start_time: f64,
    step: u64,
    /// Stream index of `buf[0]`.
    buf_origin: u64,
    buf: Vec<f64>,
    next_center: u64,
}

impl StreamEstimator {
    /// Reports at the bank's configured reporting rate.
    pub fn new(bank: &FilterBank, start_time: f64) -> Self {
        let step = bank.cfg.samples_per_report() as u64;
        Self::build(bank, start_time, step)
    }

    /// Reports every `reporting_rate_hz`; fs/f_re must be an integer.
    pub fn with_reporting_rate(bank: &FilterBank, start_time: f64, reporting_rate_hz: f64) -> Result<Self> {
        let ratio = bank.cfg.sampling_frequency_hz / reporting_rate_hz;
        if !(reporting_rate_hz > 0.0) || (ratio - ratio.round()).abs() > 1e-9 || ratio.round() < 1.0 {
            return Err(Error::InvalidArgument(format!(
                "reporting rate {reporting_rate_hz} Hz does not divide fs = {} Hz",
                bank.cfg.sampling_frequency_hz
            )));
        }
        Ok(Self::build(bank, start_time, ratio.round() as u64))
    }

    fn build(bank: &FilterBank, start_time: f64, step: u64) -> Self {
        let prepared = Prepared::new(bank);
        let half = (prepared.n as u64 - 1) / 2;
        Self {
            buf: Vec::with_capacity(2 * prepared.n),
            prepared,
            fs: bank.cfg.sampling_frequency_hz,
            start_time,
            step,
            buf_origin: 0,
            next_center: half,
        }
    }

    /// Samples consumed so far.
    pub fn samples_seen(&self) -> u64 {
        self.buf_origin + self.buf.len() as u64
    }

    /// Appends samples and returns every report whose window became complete.
    pub fn push(&mut self, chunk: &[f64]) -> Vec<Report> {
        let mut reports = Vec::new();
        let n = self.prepared.n as u64;
        let half = (n - 1) / 2;
        for &s in chunk {
            if self.buf.len() == self.buf.capacity() {
                let drop = self.buf.len() - (self.prepared.n - 1);
                self.buf.drain(..drop);
                self.buf_origin += drop as u64;
            }
            self.buf.push(s);
            let last = self.samples_seen() - 1;
            if last == self.next_center + half {
                let first = (self.next_center - half - self.buf_origin) as usize;
                let window = &self.buf[first..first + self.prepared.n];
                let t_tag = self.start_time + self.next_center as f64 / self.fs;
                let mut estimates = Vec::with_capacity(self.prepared.filters.len());
                self.prepared.apply(window, t_tag, &mut estimates);
                reports.push(Report { center_index: self.next_center, t_tag, estimates });
                self.next_center += self.step;
            }
        }
        reports
    }
}

/// Runs a whole record through a fresh [`StreamEstimator`].
///
/// Records shorter than one window yield no reports.
pub fn stream_estimate(
    samples: &[f64],
    start_time: f64,
    bank: &FilterBank,
    reporting_rate_hz: f64,
) -> Result<Vec<Report>> {
    Ok(StreamEstimator::with_reporting_rate(bank, start_time, reporting_rate_hz)?.push(samples))
}
