//! Accuracy metrics: TVE, step response time and window residual.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// TVE threshold, in percent, that defines the response time.
pub const RESPONSE_TVE_LIMIT: f64 = 1.0;

/// Total vector error in percent: 100·|est − ref| / |ref|.
pub fn tve(estimate: Complex64, reference: Complex64) -> Result<f64> {
    let r = reference.norm();
    if !(r > 0.0) {
        return Err(Error::InvalidArgument("TVE needs a nonzero reference phasor".into()));
    }
    Ok(100.0 * (estimate - reference).norm() / r)
}

/// Time between the first and last report whose TVE exceeds 1%.
///
/// Returns 0 when no report exceeds the limit.
pub fn response_time(t_tags: &[f64], tve_percent: &[f64]) -> Result<f64> {
    if t_tags.len() != tve_percent.len() {
        return Err(Error::LengthMismatch { expected: t_tags.len(), got: tve_percent.len() });
    }
    let mut over = t_tags.iter().zip(tve_percent).filter(|(_, &e)| e > RESPONSE_TVE_LIMIT).map(|(&t, _)| t);
    let Some(first) = over.next() else { return Ok(0.0) };
    let last = over.next_back().unwrap_or(first);
    Ok(last - first)
}

/// Window residual in percent between the true h-component samples and the
/// waveform rebuilt from an estimated phasor, Re(p̂·e^{j2πh·f0·t}).
///
/// `component[i]` is the sample at `t_tag + (i − N_h)/fs`.
pub fn residual(component: &[f64], t_tag: f64, fs: f64, f0: f64, h: usize, estimate: Complex64) -> Result<f64> {
    if component.len().is_multiple_of(2) {
        return Err(Error::InvalidArgument("residual window must have odd length".into()));
    }
    let half = (component.len() / 2) as i64;
    let mut err = 0.0;
    let mut energy = 0.0;
    for (i, &s) in component.iter().enumerate() {
        let n = i as i64 - half;
        let t = t_tag + n as f64 / fs;
        let cycles = h as f64 * f0 * t;
        let rebuilt = (estimate * Complex64::from_polar(1.0, 2.0 * PI * (cycles - cycles.round()))).re;
        err += (s - rebuilt).powi(2);
        energy += s * s;
    }
    if !(energy > 0.0) {
        return Err(Error::InvalidArgument("residual of a zero-energy component".into()));
    }
    Ok(100.0 * (err / energy).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn tve_examples() {
        let r = Complex64::from_polar(0.1, 0.7);
        assert_eq!(tve(r, r).unwrap(), 0.0);
        assert!((tve(1.01 * r, r).unwrap() - 1.0).abs() < 1e-12);
        let rotated = r * Complex64::from_polar(1.0, 0.01);
        // |e^{j0.01} − 1| = 2 sin(0.005)
        assert!((tve(rotated, r).unwrap() - 200.0 * 0.005f64.sin()).abs() < 1e-10);
        assert!(tve(r, Complex64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn response_time_examples() {
        let t = [0.0, 0.001, 0.002, 0.003, 0.004];
        assert_eq!(response_time(&t, &[0.0; 5]).unwrap(), 0.0);
        assert_eq!(response_time(&t, &[0.5, 2.0, 0.3, 5.0, 0.9]).unwrap(), 0.002);
        assert_eq!(response_time(&t, &[0.5, 2.0, 0.3, 0.2, 0.9]).unwrap(), 0.0);
        assert!(response_time(&t, &[0.0; 4]).is_err());
    }

    fn tone(h: usize, amp: f64, phase: f64, t_tag: f64) -> Vec<f64> {
        (-300..=300).map(|n| amp * (2.0 * PI * 50.0 * h as f64 * (t_tag + n as f64 / 1e4) + phase).cos()).collect()
    }

    #[test]
    fn residual_examples() {
        let p = Complex64::from_polar(0.1, -1.2);
        let s = tone(3, 0.1, -1.2, 0.25);
        assert!(residual(&s, 0.25, 1e4, 50.0, 3, p).unwrap() < 1e-10);
        assert!((residual(&s, 0.25, 1e4, 50.0, 3, 1.01 * p).unwrap() - 1.0).abs() < 1e-9);
        assert!((residual(&s, 0.25, 1e4, 50.0, 3, Complex64::new(0.0, 0.0)).unwrap() - 100.0).abs() < 1e-12);
        assert!(residual(&[0.0; 3], 0.0, 1e4, 50.0, 3, p).is_err());
    }

    proptest! {
        #[test]
        fn tve_is_scale_invariant(
            er in -1.0..1.0f64, ei in -1.0..1.0f64,
            rr in 0.1..1.0f64, ra in -3.0..3.0f64,
            sm in 0.01..100.0f64, sa in -3.0..3.0f64,
        ) {
            let e = Complex64::new(er, ei);
            let r = Complex64::from_polar(rr, ra);
            let s = Complex64::from_polar(sm, sa);
            let a = tve(e, r).unwrap();
            let b = tve(s * e, s * r).unwrap();
            prop_assert!((a - b).abs() <= 1e-9 * a.max(1.0));
        }
    }
}
