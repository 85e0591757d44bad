//! Test-signal generators, accuracy metrics and scenario sweeps.

pub mod metrics;
pub mod scenario;
pub mod signal;

pub use metrics::{residual, response_time, tve};
pub use scenario::{run_scenario, RunOptions, ScenarioKind, ScenarioResult, ScenarioSpec, SignalSettings, Sweep};
pub use signal::{add_noise, gen_am, gen_multitone, gen_pm, gen_ramp, gen_step, noise_sigma, ModulationDepth, MultitoneParams, TestSignal};
