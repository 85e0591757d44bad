//! Synthetic test waveforms and their closed-form reference phasors.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::config::ModelConfig;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarmonicTone {
    pub h: usize,
    pub amplitude: f64,
    pub phase: f64,
    /// Relative amplitude modulation depth.
    pub am_depth: f64,
    /// Phase modulation depth in radians.
    pub pm_depth: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterharmonicTone {
    pub frequency_hz: f64,
    pub amplitude: f64,
    pub phase: f64,
}

/// Simultaneous amplitude and phase step applied to every harmonic tone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub time_s: f64,
    pub amplitude_ratio: f64,
    pub phase_rad: f64,
}

/// Sum of (possibly modulated) harmonic tones plus fixed interharmonic tones.
///
/// Harmonic h has envelope A_h(1 + m_a cos 2πf_m t)(1 + k_a g) and argument
/// 2πh·f·t + πh·R·t² + m_p cos(2πf_m t − π) + φ_h + k_p g, where g is the
/// unit step (one from the step instant onwards).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestSignal {
    pub nominal_frequency_hz: f64,
    pub fundamental_hz: f64,
    pub ramp_hz_per_s: f64,
    pub modulation_hz: f64,
    pub harmonics: Vec<HarmonicTone>,
    pub interharmonics: Vec<InterharmonicTone>,
    pub step: Option<Step>,
}

fn cos_cycles(cycles: f64, extra_rad: f64) -> f64 {
    (2.0 * PI * (cycles - cycles.round()) + extra_rad).cos()
}

impl TestSignal {
    fn tone_parts(&self, tone: &HarmonicTone, t: f64) -> (f64, f64) {
        let g = match self.step {
            Some(s) if t >= s.time_s => (s.amplitude_ratio, s.phase_rad),
            _ => (0.0, 0.0),
        };
        let mod_arg = 2.0 * PI * self.modulation_hz * t;
        let envelope = tone.amplitude * (1.0 + tone.am_depth * mod_arg.cos()) * (1.0 + g.0);
        let offset = tone.pm_depth * (mod_arg - PI).cos() + tone.phase + g.1;
        (envelope, offset)
    }

    fn tone_cycles(&self, h: usize, t: f64, freq: f64) -> f64 {
        h as f64 * (freq * t + 0.5 * self.ramp_hz_per_s * t * t)
    }

    /// Instantaneous value of the h-order tone alone.
    pub fn harmonic_value(&self, h: usize, t: f64) -> f64 {
        self.harmonics
            .iter()
            .filter(|tone| tone.h == h)
            .map(|tone| {
                let (env, off) = self.tone_parts(tone, t);
                env * cos_cycles(self.tone_cycles(h, t, self.fundamental_hz), off)
            })
            .sum()
    }

    pub fn value(&self, t: f64) -> f64 {
        let mut s = 0.0;
        for tone in &self.harmonics {
            let (env, off) = self.tone_parts(tone, t);
            s += env * cos_cycles(self.tone_cycles(tone.h, t, self.fundamental_hz), off);
        }
        for tone in &self.interharmonics {
            s += tone.amplitude * cos_cycles(tone.frequency_hz * t, tone.phase);
        }
        s
    }

    /// Samples at t = start + i/fs for i in 0..len.
    pub fn sample(&self, fs: f64, start: f64, len: usize) -> Vec<f64> {
        (0..len).map(|i| self.value(start + i as f64 / fs)).collect()
    }

    /// Reference phasor of order h relative to nominal demodulation at f0.
    pub fn reference(&self, h: usize, t: f64) -> Option<Complex64> {
        let tone = self.harmonics.iter().find(|tone| tone.h == h)?;
        let (env, off) = self.tone_parts(tone, t);
        let drift = self.tone_cycles(h, t, self.fundamental_hz - self.nominal_frequency_hz);
        Some(Complex64::from_polar(env, 2.0 * PI * drift + off))
    }

    /// Highest tone frequency over [0, duration].
    pub fn max_frequency_hz(&self, duration: f64) -> f64 {
        let f_end = self.fundamental_hz + self.ramp_hz_per_s.max(0.0) * duration;
        let harmonics = self
            .harmonics
            .iter()
            .map(|t| t.h as f64 * f_end + t.pm_depth * self.modulation_hz)
            .fold(0.0, f64::max);
        self.interharmonics.iter().map(|t| t.frequency_hz).fold(harmonics, f64::max)
    }

    pub fn check_nyquist(&self, fs: f64, duration: f64) -> Result<()> {
        let f = self.max_frequency_hz(duration);
        if f >= fs / 2.0 {
            return Err(Error::InvalidArgument(format!("tone at {f} Hz is above the Nyquist frequency {}", fs / 2.0)));
        }
        Ok(())
    }
}

/// Amplitudes of the multitone test signal, in p.u.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MultitoneParams {
    pub fundamental_amplitude_pu: f64,
    pub harmonic_amplitude_pu: f64,
    pub obi_amplitude_pu: f64,
    /// Actual fundamental frequency; `None` means nominal.
    pub fundamental_hz: Option<f64>,
}

impl Default for MultitoneParams {
    fn default() -> Self {
        Self { fundamental_amplitude_pu: 1.0, harmonic_amplitude_pu: 0.1, obi_amplitude_pu: 0.01, fundamental_hz: None }
    }
}

/// Deterministic generator for sweep point `index` of a run seeded with `seed`.
pub fn point_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn draw_phase(rng: &mut impl Rng) -> f64 {
    rng.random_range(-PI..=PI)
}

/// Fundamental, harmonics 2..=H and one interharmonic tone at h·f0 − f_re/2
/// below each harmonic, with phases uniform on [−π, π].
///
/// Phases are drawn in the order φ_1..φ_H, then the interharmonic phases.
pub fn multitone(cfg: &ModelConfig, params: &MultitoneParams, rng: &mut impl Rng) -> TestSignal {
    let f0 = cfg.nominal_frequency_hz;
    let harmonics = (1..=cfg.max_harmonic)
        .map(|h| HarmonicTone {
            h,
            amplitude: if h == 1 { params.fundamental_amplitude_pu } else { params.harmonic_amplitude_pu },
            phase: draw_phase(rng),
            am_depth: 0.0,
            pm_depth: 0.0,
        })
        .collect();
    let interharmonics = (2..=cfg.max_harmonic)
        .map(|h| InterharmonicTone {
            frequency_hz: h as f64 * f0 - 0.5 * cfg.reporting_rate_hz,
            amplitude: params.obi_amplitude_pu,
            phase: draw_phase(rng),
        })
        .filter(|t| t.amplitude != 0.0)
        .collect();
    TestSignal {
        nominal_frequency_hz: f0,
        fundamental_hz: params.fundamental_hz.unwrap_or(f0),
        ramp_hz_per_s: 0.0,
        modulation_hz: 0.0,
        harmonics,
        interharmonics,
        step: None,
    }
}

/// Samples `duration` seconds of a multitone signal starting at t = 0.
pub fn gen_multitone(cfg: &ModelConfig, params: &MultitoneParams, duration: f64, seed: u64) -> Result<(Vec<f64>, TestSignal)> {
    let sig = multitone(cfg, params, &mut point_rng(seed, 0));
    sample_checked(cfg, sig, duration)
}

fn sample_checked(cfg: &ModelConfig, sig: TestSignal, duration: f64) -> Result<(Vec<f64>, TestSignal)> {
    let fs = cfg.sampling_frequency_hz;
    sig.check_nyquist(fs, duration)?;
    let len = (duration * fs).round() as usize;
    Ok((sig.sample(fs, 0.0, len), sig))
}

/// Fundamental plus a 0.1 p.u. h-order harmonic, both stepping at t = 0.
///
/// Samples cover [−duration/2, duration/2).
pub fn gen_step(cfg: &ModelConfig, h: usize, amplitude_ratio: f64, phase_rad: f64, duration: f64) -> Result<(Vec<f64>, TestSignal)> {
    if h < 2 || h > cfg.max_harmonic {
        return Err(Error::OrderOutOfRange { h, max: cfg.max_harmonic });
    }
    let f0 = cfg.nominal_frequency_hz;
    let tone = |h, amplitude| HarmonicTone { h, amplitude, phase: 0.0, am_depth: 0.0, pm_depth: 0.0 };
    let sig = TestSignal {
        nominal_frequency_hz: f0,
        fundamental_hz: f0,
        ramp_hz_per_s: 0.0,
        modulation_hz: 0.0,
        harmonics: vec![tone(1, 1.0), tone(h, 0.1)],
        interharmonics: Vec::new(),
        step: Some(Step { time_s: 0.0, amplitude_ratio, phase_rad }),
    };
    let fs = cfg.sampling_frequency_hz;
    sig.check_nyquist(fs, duration)?;
    let len = (duration * fs).round() as usize;
    Ok((sig.sample(fs, -0.5 * duration, len), sig))
}

/// How modulation depth is assigned across harmonic orders.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode", content = "depth")]
pub enum ModulationDepth {
    /// The same depth for every order.
    Uniform(f64),
    /// Depth `d·h` for order h.
    PerOrder(f64),
}

impl ModulationDepth {
    pub fn for_order(&self, h: usize) -> f64 {
        match *self {
            ModulationDepth::Uniform(d) => d,
            ModulationDepth::PerOrder(d) => d * h as f64,
        }
    }
}

/// Multitone with sinusoidal amplitude modulation at `fm` on every harmonic.
pub fn gen_am(
    cfg: &ModelConfig,
    params: &MultitoneParams,
    fm: f64,
    depth: ModulationDepth,
    duration: f64,
    seed: u64,
) -> Result<(Vec<f64>, TestSignal)> {
    let mut sig = multitone(cfg, params, &mut point_rng(seed, 0));
    apply_am(&mut sig, fm, depth);
    sample_checked(cfg, sig, duration)
}

/// Multitone with sinusoidal phase modulation at `fm` on every harmonic.
pub fn gen_pm(
    cfg: &ModelConfig,
    params: &MultitoneParams,
    fm: f64,
    depth: ModulationDepth,
    duration: f64,
    seed: u64,
) -> Result<(Vec<f64>, TestSignal)> {
    let mut sig = multitone(cfg, params, &mut point_rng(seed, 0));
    apply_pm(&mut sig, fm, depth);
    sample_checked(cfg, sig, duration)
}

/// Multitone whose fundamental starts at `start_hz` and rises at `rate` Hz/s.
pub fn gen_ramp(
    cfg: &ModelConfig,
    params: &MultitoneParams,
    start_hz: f64,
    rate: f64,
    duration: f64,
    seed: u64,
) -> Result<(Vec<f64>, TestSignal)> {
    let mut sig = multitone(cfg, params, &mut point_rng(seed, 0));
    sig.fundamental_hz = start_hz;
    sig.ramp_hz_per_s = rate;
    sample_checked(cfg, sig, duration)
}

pub(crate) fn apply_am(sig: &mut TestSignal, fm: f64, depth: ModulationDepth) {
    sig.modulation_hz = fm;
    for t in &mut sig.harmonics {
        t.am_depth = depth.for_order(t.h);
    }
}

pub(crate) fn apply_pm(sig: &mut TestSignal, fm: f64, depth: ModulationDepth) {
    sig.modulation_hz = fm;
    for t in &mut sig.harmonics {
        t.pm_depth = depth.for_order(t.h);
    }
}

/// Noise standard deviation giving `snr_db` relative to a fundamental of
/// amplitude `a1`, with SNR = 10·log10(a1² / 2σ²).
pub fn noise_sigma(a1: f64, snr_db: f64) -> f64 {
    a1 / (2.0 * 10f64.powf(snr_db / 10.0)).sqrt()
}

/// Adds zero-mean white Gaussian noise; an infinite SNR leaves samples untouched.
pub fn add_noise(samples: &mut [f64], a1: f64, snr_db: f64, rng: &mut impl Rng) {
    let sigma = noise_sigma(a1, snr_db);
    if sigma == 0.0 {
        return;
    }
    let normal = Normal::new(0.0, sigma).expect("finite positive sigma");
    for s in samples {
        *s += normal.sample(rng);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> ModelConfig {
        ModelConfig::default()
    }

    #[test]
    fn multitone_has_25_components_and_bounded_peak() {
        let (s, sig) = gen_multitone(&cfg(), &MultitoneParams::default(), 1.0, 7).unwrap();
        assert_eq!(sig.harmonics.len() + sig.interharmonics.len(), 25);
        assert!(s.iter().all(|v| v.abs() <= 2.32 + 1e-12));
        assert_eq!(sig.interharmonics[0].frequency_hz, 75.0);
        assert_eq!(sig.interharmonics[11].frequency_hz, 625.0);
        for t in sig.harmonics.iter().map(|t| t.phase).chain(sig.interharmonics.iter().map(|t| t.phase)) {
            assert!((-PI..=PI).contains(&t));
        }
    }

    #[test]
    fn multitone_is_deterministic() {
        let a = gen_multitone(&cfg(), &MultitoneParams::default(), 0.2, 42).unwrap().0;
        let b = gen_multitone(&cfg(), &MultitoneParams::default(), 0.2, 42).unwrap().0;
        let c = gen_multitone(&cfg(), &MultitoneParams::default(), 0.2, 43).unwrap().0;
        assert_eq!(a.iter().map(|v| v.to_bits()).collect::<Vec<_>>(), b.iter().map(|v| v.to_bits()).collect::<Vec<_>>());
        assert_ne!(a, c);
    }

    #[test]
    fn multitone_rms_matches_tone_energy() {
        let p = MultitoneParams::default();
        let (s, _) = gen_multitone(&cfg(), &p, 1.0, 3).unwrap();
        let rms = (s.iter().map(|v| v * v).sum::<f64>() / s.len() as f64).sqrt();
        let expected = ((1.0 + 12.0 * 0.01 + 12.0 * 1e-4) / 2.0f64).sqrt();
        assert!((rms / expected - 1.0).abs() < 0.01, "rms {rms} vs {expected}");
    }

    #[test]
    fn steady_reference_is_constant() {
        let sig = multitone(&cfg(), &MultitoneParams::default(), &mut point_rng(5, 0));
        for h in 1..=13 {
            let r0 = sig.reference(h, 0.0).unwrap();
            let tone = sig.harmonics[h - 1];
            assert!((r0 - Complex64::from_polar(tone.amplitude, tone.phase)).norm() < 1e-15);
            for t in [0.013, 0.5, 1.7] {
                assert!((sig.reference(h, t).unwrap() - r0).norm() < 1e-12);
            }
        }
        assert!(sig.reference(14, 0.0).is_none());
    }

    #[test]
    fn step_levels() {
        let (_, sig) = gen_step(&cfg(), 5, 0.1, 0.0, 0.4).unwrap();
        assert_eq!(sig.reference(1, -0.01).unwrap().norm(), 1.0);
        assert_eq!(sig.reference(5, -0.01).unwrap().norm(), 0.1);
        assert!((sig.reference(1, 0.01).unwrap().norm() - 1.1).abs() < 1e-15);
        assert!((sig.reference(5, 0.01).unwrap().norm() - 0.11).abs() < 1e-15);
        let (_, sig) = gen_step(&cfg(), 5, 0.0, -PI / 18.0, 0.4).unwrap();
        assert!((sig.reference(5, 0.01).unwrap().arg().to_degrees() + 10.0).abs() < 1e-12);
        assert!(gen_step(&cfg(), 14, 0.1, 0.0, 0.4).is_err());
    }

    #[test]
    fn modulation_references_at_zero() {
        let p = MultitoneParams::default();
        let (_, am) = gen_am(&cfg(), &p, 2.0, ModulationDepth::Uniform(0.1), 0.1, 1).unwrap();
        assert!((am.reference(3, 0.0).unwrap().norm() - 0.1 * 1.1).abs() < 1e-15);
        let (_, pm) = gen_pm(&cfg(), &p, 2.0, ModulationDepth::PerOrder(0.1), 0.1, 1).unwrap();
        let tone = pm.harmonics[2];
        let expected = Complex64::from_polar(0.1, tone.phase - 0.3);
        assert!((pm.reference(3, 0.0).unwrap() - expected).norm() < 1e-15);
    }

    #[test]
    fn ramp_sweeps_fundamental() {
        let (s, sig) = gen_ramp(&cfg(), &MultitoneParams::default(), 49.5, 1.0, 1.0, 1).unwrap();
        assert_eq!(s.len(), 10_000);
        // instantaneous frequency = d(cycles)/dt
        let inst = |t: f64| (sig.tone_cycles(1, t + 1e-6, sig.fundamental_hz) - sig.tone_cycles(1, t - 1e-6, sig.fundamental_hz)) / 2e-6;
        assert!((inst(0.0) - 49.5).abs() < 1e-6);
        assert!((inst(1.0) - 50.5).abs() < 1e-6);
    }

    #[test]
    fn reference_tracks_sampled_tone() {
        let mut sig = multitone(&cfg(), &MultitoneParams::default(), &mut point_rng(9, 0));
        apply_pm(&mut sig, 1.3, ModulationDepth::PerOrder(0.1));
        sig.fundamental_hz = 50.2;
        sig.ramp_hz_per_s = 0.7;
        for t in [0.0, 0.123, 0.77] {
            let p = sig.reference(4, t).unwrap();
            let rebuilt = (p * Complex64::from_polar(1.0, 2.0 * PI * 200.0 * t)).re;
            assert!((rebuilt - sig.harmonic_value(4, t)).abs() < 1e-12);
        }
    }

    #[test]
    fn noise_statistics() {
        assert!((noise_sigma(1.0, 60.0) - 7.0710678118654755e-4).abs() < 1e-15);
        let mut s = vec![0.0; 1_000_000];
        add_noise(&mut s, 1.0, 60.0, &mut point_rng(11, 0));
        let var = s.iter().map(|v| v * v).sum::<f64>() / s.len() as f64;
        let sigma2 = noise_sigma(1.0, 60.0).powi(2);
        assert!((var / sigma2 - 1.0).abs() < 0.05);
        let mut quiet = vec![0.25; 8];
        add_noise(&mut quiet, 1.0, f64::INFINITY, &mut point_rng(11, 0));
        assert_eq!(quiet, vec![0.25; 8]);
    }

    #[test]
    fn nyquist_is_enforced() {
        let c = ModelConfig { sampling_frequency_hz: 1300.0, reporting_rate_hz: 50.0, ..cfg() };
        assert!(gen_multitone(&c, &MultitoneParams::default(), 0.1, 1).is_err());
    }
}
