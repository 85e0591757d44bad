//! Runs every scenario kind on the reference configuration and prints per-order maxima.

use hpl_core::bench::{run_scenario, RunOptions, ScenarioKind, ScenarioSpec, Sweep};
use hpl_core::{design_bank, tft_filter_bank, ModelConfig};

fn main() -> hpl_core::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let cfg = ModelConfig::default();
    let bank = design_bank(&cfg)?;
    let tft = tft_filter_bank(&cfg)?;
    let kinds = [
        (ScenarioKind::ObiAmplitudeSweep, Some(Sweep { start: 0.001, stop: 0.05, step: 0.005 })),
        (ScenarioKind::HarmonicAmplitudeSweep, None),
        (ScenarioKind::NoiseObi, None),
        (ScenarioKind::FreqDeviationObi, None),
        (ScenarioKind::AmObi, None),
        (ScenarioKind::PmObi, None),
        (ScenarioKind::RampObi, None),
        (ScenarioKind::AmpStep, None),
        (ScenarioKind::PhaseStep, None),
    ];
    for (kind, sweep) in kinds {
        let mut spec = ScenarioSpec::new(kind, seed);
        spec.sweep = sweep;
        let r = run_scenario(&spec, &bank, Some(&tft), RunOptions::default())?;
        println!("{kind:?} (seed {seed}) warnings={:?}", r.warnings);
        for m in &r.summary {
            print!("  h={:2} svd={:7.3}% tft={:7.3}%", m.h, m.max_tve_percent, m.baseline_max_tve_percent.unwrap_or(f64::NAN));
            if let (Some(a), Some(b)) = (m.response_time_s, m.baseline_response_time_s) {
                print!("  rt={:.1}ms tft_rt={:.1}ms", a * 1e3, b * 1e3);
            }
            println!();
        }
    }
    Ok(())
}
