use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const REFERENCE: &str = "format_version = 1

[model]
nominal_frequency_hz = 50.0
sampling_frequency_hz = 10000.0
reporting_rate_hz = 50.0
max_harmonic = 13
taylor_order = 2
window_cycles = 3
";

fn hpl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hpl")).args(args).output().expect("hpl runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn design(dir: &TempDir, name: &str, extra: &[&str]) -> PathBuf {
    let cfg = write(dir, "ref.toml", REFERENCE);
    let out = dir.path().join(name);
    let mut args = vec!["design", "--config", s(&cfg), "--out", s(&out)];
    args.extend_from_slice(extra);
    let o = hpl(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    out
}

#[test]
fn design_prints_reductions_and_is_repeatable() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "ref.toml", REFERENCE);
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let out = hpl(&["design", "--config", s(&cfg), "--out", s(&a)]);
    assert!(out.status.success());
    let table = String::from_utf8(out.stdout).unwrap();
    let reductions: Vec<f64> = table
        .lines()
        .skip(1)
        .map(|l| l.split_whitespace().nth(3).unwrap().trim_end_matches('%').parse().unwrap())
        .collect();
    assert_eq!(reductions.len(), 12);
    assert!(reductions.iter().all(|&r| r >= 86.0), "{reductions:?}");
    assert!(hpl(&["design", "--config", s(&cfg), "--out", s(&b)]).status.success());
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert!(dir.path().join("a.json.manifest.json").exists());
}

#[test]
fn design_rejects_two_cycle_window() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c2.toml", &REFERENCE.replace("taylor_order = 2", "taylor_order = 1").replace("window_cycles = 3", "window_cycles = 2"));
    let out = hpl(&["design", "--config", s(&cfg), "--out", s(&dir.path().join("x.json"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no free multiplier"));
    let cfg = write(&dir, "bad.toml", "[model]\nnominal_frequency_hz = \"fifty\"\n");
    assert_eq!(hpl(&["design", "--config", s(&cfg), "--out", s(&dir.path().join("y.json"))]).status.code(), Some(2));
}

fn sample_file(dir: &TempDir, name: &str, fs_hz: f64, len: usize) -> PathBuf {
    let mut text = format!("# fs_hz = {fs_hz}\n# start_time_s = 0\n");
    for i in 0..len {
        let t = i as f64 / 10_000.0;
        let v = (2.0 * PI * 50.0 * t + 0.2).cos() + 0.1 * (2.0 * PI * 150.0 * t - 1.0).cos() + 0.05 * (2.0 * PI * 350.0 * t + 2.0).cos();
        text.push_str(&format!("{v}\n"));
    }
    write(dir, name, &text)
}

#[test]
fn estimate_recovers_steady_amplitudes() {
    let dir = TempDir::new().unwrap();
    let bank = design(&dir, "tft.json", &["--tft"]);
    let input = sample_file(&dir, "steady.txt", 10_000.0, 3000);
    let out = dir.path().join("phasors.csv");
    let o = hpl(&["estimate", "--bank", s(&bank), "--input", s(&input), "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t_tag,h,real,imag,amplitude,phase_rad"));
    let mut rows = 0;
    for l in lines {
        let f: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
        let expected = match f[1] as usize {
            1 => 1.0,
            3 => 0.1,
            7 => 0.05,
            _ => 0.0,
        };
        assert!((f[4] - expected).abs() < 1e-6, "{l}");
        rows += 1;
    }
    assert_eq!(rows, 13 * ((3000 - 601) / 200 + 1));
    let manifest: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("phasors.csv.manifest.json")).unwrap()).unwrap();
    assert!(manifest["timing"]["frames"].as_u64().unwrap() >= 1000);
    assert!(manifest["timing"]["mean_frame_time_s"].as_f64().unwrap() > 0.0);
}

#[test]
fn estimate_short_file_and_fs_mismatch() {
    let dir = TempDir::new().unwrap();
    let bank = design(&dir, "tft.json", &["--tft"]);
    let short = sample_file(&dir, "short.txt", 10_000.0, 300);
    let out = dir.path().join("short.csv");
    let o = hpl(&["estimate", "--bank", s(&bank), "--input", s(&short), "--out", s(&out)]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    assert_eq!(fs::read_to_string(&out).unwrap(), "t_tag,h,real,imag,amplitude,phase_rad\n");
    let other = sample_file(&dir, "other.txt", 8_000.0, 3000);
    let o = hpl(&["estimate", "--bank", s(&bank), "--input", s(&other), "--out", s(&dir.path().join("o.csv"))]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bench_writes_tables() {
    let dir = TempDir::new().unwrap();
    let bank = design(&dir, "bank.json", &[]);
    let spec = write(
        &dir,
        "noise.toml",
        "kind = \"noise_obi\"\nseed = 4\n[sweep]\nstart = 60.0\nstop = 70.0\nstep = 10.0\n[signal]\nduration_s = 0.4\n",
    );
    let out = dir.path().join("res");
    let o = hpl(&["bench", "--config", s(&spec), "--bank", s(&bank), "--out", s(&out), "--trace", "--seed", "5"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let points = fs::read_to_string(out.join("points.csv")).unwrap();
    assert!(points.starts_with("sweep_value,h,max_tve_percent,baseline_max_tve_percent\n"));
    assert_eq!(points.lines().count(), 1 + 2 * 12);
    assert_eq!(fs::read_to_string(out.join("summary.csv")).unwrap().lines().count(), 13);
    assert!(out.join("trace.csv").exists());
    let manifest: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seeds"][0], 5);

    let bad = write(&dir, "bad.toml", "kind = \"mystery\"\nseed = 1\n");
    let o = hpl(&["bench", "--config", s(&bad), "--bank", s(&bank), "--out", s(&dir.path().join("bad"))]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_single_config_and_exit_codes() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "ref.toml", REFERENCE);
    let o = hpl(&["verify", "--config", s(&cfg)]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let sv = text.lines().find(|l| l.contains("singular values")).unwrap();
    let inner = sv.split('[').nth(1).unwrap().trim_end_matches(']');
    assert_eq!(inner.split(", ").filter(|v| v.parse::<f64>().unwrap() > 0.0).count(), 3, "{sv}");
    assert!(text.contains("d first row"));

    let bad = write(&dir, "bad.toml", "not toml at all [");
    assert_eq!(hpl(&["verify", "--config", s(&bad)]).status.code(), Some(2));

    // The default grid includes K >= 4, whose smallest odd first-row entries
    // fall below the absolute 1e-6 floor.
    let o = hpl(&["verify"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stdout).contains("c=3 K=2: PASS"));
}
