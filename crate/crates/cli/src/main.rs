//! `hpl`: design filter banks, estimate phasors, run benchmark scenarios and
//! check the Taylor-basis eigenstructure.

mod manifest;

use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use hpl_core::bench::{run_scenario, RunOptions, ScenarioSpec};
use hpl_core::io::{write_phasor_csv, SampleRecord};
use hpl_core::model::verify_appendix_structure;
use hpl_core::{tft_filter_bank, DesignConfigFile, Error, FilterBank, ModelConfig, StreamEstimator};

use manifest::{Manifest, Timing};

const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_VERIFY: u8 = 4;

#[derive(Parser)]
#[command(name = "hpl", version, about = "Dynamic harmonic phasor filter banks")]
struct Cli {
    /// Where to write the run manifest (default: next to the main output, or stderr).
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Design a filter bank from a model configuration.
    Design {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Emit the plain least-squares bank without optimization.
        #[arg(long)]
        tft: bool,
    },
    /// Run a bank over a sample file and write phasors as CSV.
    Estimate {
        #[arg(long)]
        bank: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a benchmark scenario and write result tables into a directory.
    Bench {
        /// Scenario specification (TOML).
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        bank: PathBuf,
        /// Comparison bank; defaults to the least-squares bank of the same model.
        #[arg(long)]
        baseline: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Overrides the scenario seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Also write per-report TVE rows.
        #[arg(long)]
        trace: bool,
    },
    /// Check parity, interlacing and first-row structure of the Taylor basis SVD.
    Verify {
        /// Single model configuration; without it the grid c = K+1, K = 2..=6 is checked.
        #[arg(long)]
        config: Option<PathBuf>,
        /// JSON file for the full reports.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Error(Error),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Error(Error::Io(e))
    }
}

type CmdResult = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))
}

fn load_bank(path: &Path) -> Result<FilterBank, Error> {
    FilterBank::from_json(&read(path)?)
}

fn write(path: &Path, bytes: impl AsRef<[u8]>) -> Result<(), Error> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, bytes)?;
    Ok(())
}

fn configure_threads() {
    if let Some(n) = std::env::var("HPL_THREADS").ok().and_then(|v| v.parse::<usize>().ok()).filter(|&n| n > 0) {
        // Fails only if a pool already exists, in which case it is left alone.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let mut manifest = Manifest::new(&cli.command);
    let started = Instant::now();
    let outcome = match &cli.command {
        Command::Design { config, out, tft } => cmd_design(config, out, *tft, &mut manifest),
        Command::Estimate { bank, input, out } => cmd_estimate(bank, input, out, &mut manifest),
        Command::Bench { config, bank, baseline, out, seed, trace } => {
            cmd_bench(config, bank, baseline.as_deref(), out, *seed, *trace, &mut manifest)
        }
        Command::Verify { config, out } => cmd_verify(config.as_deref(), out.as_deref(), &mut manifest),
    };
    manifest.wall_clock_s = started.elapsed().as_secs_f64();
    let code = match &outcome {
        Ok(()) => 0,
        Err(Failure::Verification) => EXIT_VERIFY,
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            if e.is_numerical() {
                EXIT_NUMERICAL
            } else {
                EXIT_CONFIG
            }
        }
    };
    manifest.exit_code = code;
    if let Err(e) = manifest.emit(cli.manifest.as_deref()) {
        eprintln!("warning: could not write manifest: {e}");
    }
    ExitCode::from(code)
}

fn cmd_design(config: &Path, out: &Path, tft: bool, manifest: &mut Manifest) -> CmdResult {
    manifest.inputs.insert("config".into(), config.display().to_string());
    manifest.set_primary_output(out);
    let file = DesignConfigFile::from_toml(&read(config)?)?;
    let cfg = file.model;
    let bank = if tft {
        hpl_core::design::tft_filter_bank_with(&cfg, file.design)?
    } else {
        if cfg.free_multiplier_indices().is_empty() {
            return Err(Error::InvalidConfig(format!(
                "K = {} leaves no free multiplier (need K >= 2, hence c >= 3)",
                cfg.taylor_order
            ))
            .into());
        }
        hpl_core::design::design_bank_with(&cfg, file.design)?
    };
    write(out, bank.to_json())?;
    println!("{:>3} {:>10} {:>10} {:>9}  multipliers", "h", "tft_gain", "opt_gain", "reduction");
    for row in &bank.design_report.rows {
        let y: Vec<String> = row.multipliers.iter().map(|v| format!("{v:.3}")).collect();
        let mut flags = String::new();
        if row.no_improvement {
            flags.push_str("  [no improvement]");
        }
        if row.passband_guard_active {
            flags.push_str("  [passband guard]");
        }
        println!(
            "{:>3} {:>10.4} {:>10.4} {:>8.1}%  [{}]{flags}",
            row.h,
            row.tft_max_gain,
            row.optimized_max_gain,
            100.0 * row.reduction,
            y.join(", ")
        );
    }
    Ok(())
}

/// Mean frame time over at least this many frames.
const MIN_TIMED_FRAMES: usize = 1000;

fn cmd_estimate(bank_path: &Path, input: &Path, out: &Path, manifest: &mut Manifest) -> CmdResult {
    manifest.inputs.insert("bank".into(), bank_path.display().to_string());
    manifest.inputs.insert("input".into(), input.display().to_string());
    manifest.set_primary_output(out);
    let bank = load_bank(bank_path)?;
    let file = fs::File::open(input).map_err(|e| Error::InvalidConfig(format!("{}: {e}", input.display())))?;
    let record = SampleRecord::read(BufReader::new(file))?;
    if record.fs_hz != bank.cfg.sampling_frequency_hz {
        return Err(Error::InvalidConfig(format!(
            "sample file fs = {} Hz but the bank was designed for {} Hz",
            record.fs_hz, bank.cfg.sampling_frequency_hz
        ))
        .into());
    }

    let run = || StreamEstimator::new(&bank, record.start_time_s).push(&record.samples);
    let start = Instant::now();
    let reports = run();
    let mut elapsed = start.elapsed().as_secs_f64();
    let mut frames = reports.len();
    if frames == 0 {
        eprintln!(
            "warning: {} samples are fewer than one window ({}); no reports",
            record.samples.len(),
            bank.window_len()
        );
    } else {
        while frames < MIN_TIMED_FRAMES {
            let t = Instant::now();
            frames += run().len();
            elapsed += t.elapsed().as_secs_f64();
        }
    }
    manifest.timing = Some(Timing {
        frames,
        window_len: bank.window_len(),
        orders: bank.filters.len(),
        mean_frame_time_s: if frames > 0 { elapsed / frames as f64 } else { 0.0 },
    });

    let mut buf = Vec::new();
    write_phasor_csv(&reports, &mut buf)?;
    write(out, buf)?;
    eprintln!("{} reports written to {}", reports.len(), out.display());
    Ok(())
}

fn cmd_bench(
    config: &Path,
    bank_path: &Path,
    baseline: Option<&Path>,
    out: &Path,
    seed: Option<u64>,
    trace: bool,
    manifest: &mut Manifest,
) -> CmdResult {
    manifest.inputs.insert("config".into(), config.display().to_string());
    manifest.inputs.insert("bank".into(), bank_path.display().to_string());
    let mut spec = ScenarioSpec::from_toml(&read(config)?)?;
    if let Some(s) = seed {
        spec.seed = s;
    }
    manifest.seeds.push(spec.seed);
    let bank = load_bank(bank_path)?;
    let baseline = match baseline {
        Some(p) => {
            manifest.inputs.insert("baseline".into(), p.display().to_string());
            load_bank(p)?
        }
        None => tft_filter_bank(&bank.cfg)?,
    };
    let result = run_scenario(&spec, &bank, Some(&baseline), RunOptions { trace })?;
    for w in &result.warnings {
        eprintln!("warning: {w}");
    }

    fs::create_dir_all(out)?;
    let mut files = vec![("points.csv", Vec::new()), ("summary.csv", Vec::new())];
    result.write_points_csv(&mut files[0].1)?;
    result.write_summary_csv(&mut files[1].1)?;
    if trace {
        let mut t = Vec::new();
        result.write_trace_csv(&mut t)?;
        files.push(("trace.csv", t));
    }
    for (name, bytes) in files {
        let p = out.join(name);
        write(&p, bytes)?;
        manifest.outputs.push(p.display().to_string());
    }
    manifest.manifest_default = Some(out.join("manifest.json"));

    let step = spec.kind.is_step();
    println!("{:>3} {:>12} {:>12}{}", "h", "max_tve_%", "baseline_%", if step { "  response_ms  baseline_ms" } else { "" });
    for m in &result.summary {
        print!("{:>3} {:>12.4} {:>12.4}", m.h, m.max_tve_percent, m.baseline_max_tve_percent.unwrap_or(f64::NAN));
        if step {
            print!(
                "  {:>11.1}  {:>11.1}",
                1e3 * m.response_time_s.unwrap_or(f64::NAN),
                1e3 * m.baseline_response_time_s.unwrap_or(f64::NAN)
            );
        }
        println!();
    }
    Ok(())
}

fn verification_grid() -> Vec<ModelConfig> {
    (2..=6).map(|k| ModelConfig::reference(k as u32 + 1, k)).collect()
}

fn fmt_list(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.6e}")).collect::<Vec<_>>().join(", ")
}

fn cmd_verify(config: Option<&Path>, out: Option<&Path>, manifest: &mut Manifest) -> CmdResult {
    let configs = match config {
        Some(p) => {
            manifest.inputs.insert("config".into(), p.display().to_string());
            vec![DesignConfigFile::from_toml(&read(p)?)?.model]
        }
        None => verification_grid(),
    };
    if let Some(o) = out {
        manifest.set_primary_output(o);
    }
    let mut reports = Vec::new();
    let mut all_ok = true;
    for cfg in &configs {
        cfg.validate()?;
        let r = verify_appendix_structure(cfg)?;
        let ok = r.passed();
        all_ok &= ok;
        println!("c={} K={}: {}", r.window_cycles, r.taylor_order, if ok { "PASS" } else { "FAIL" });
        println!("  singular values: [{}]", fmt_list(&r.singular_values));
        println!("  d first row:     [{}]", fmt_list(&r.d_first_row));
        for (a, g, w, rel) in &r.interlacing {
            println!("  interlacing a={a}: {g:.9e} vs {w:.9e} (rel {rel:.1e})");
        }
        let flags = [
            ("parity", r.parity_ok),
            ("eigen identity", r.eigen_identity_ok),
            ("interlacing", r.interlacing_ok),
            ("eigenvalue product", r.eigen_product_ok),
            ("even entries vanish", r.even_entries_vanish),
            ("odd entries nonzero", r.odd_entries_nonzero),
        ];
        for (name, flag) in flags {
            println!("  {name:<20} {}", if flag { "ok" } else { "FAILED" });
        }
        reports.push(r);
    }
    if let Some(o) = out {
        write(o, serde_json::to_string_pretty(&reports).expect("reports serialize") + "\n")?;
    }
    if all_ok {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}
