//! Run manifest written alongside every command's output.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use hpl_core::config::FORMAT_VERSION;
use serde::Serialize;

use crate::Command;

#[derive(Debug, Serialize)]
pub struct Timing {
    pub frames: usize,
    pub window_len: usize,
    pub orders: usize,
    pub mean_frame_time_s: f64,
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub tool_version: &'static str,
    pub command: &'static str,
    pub format_version: u32,
    pub inputs: BTreeMap<String, String>,
    pub seeds: Vec<u64>,
    pub outputs: Vec<String>,
    pub threads: usize,
    pub wall_clock_s: f64,
    pub timing: Option<Timing>,
    pub exit_code: u8,
    #[serde(skip)]
    pub manifest_default: Option<PathBuf>,
}

impl Manifest {
    pub fn new(cmd: &Command) -> Self {
        let command = match cmd {
            Command::Design { .. } => "design",
            Command::Estimate { .. } => "estimate",
            Command::Bench { .. } => "bench",
            Command::Verify { .. } => "verify",
        };
        Self {
            tool_version: env!("CARGO_PKG_VERSION"),
            command,
            format_version: FORMAT_VERSION,
            inputs: BTreeMap::new(),
            seeds: Vec::new(),
            outputs: Vec::new(),
            threads: rayon::current_num_threads(),
            wall_clock_s: 0.0,
            timing: None,
            exit_code: 0,
            manifest_default: None,
        }
    }

    /// Records `out` and places the manifest at `<out>.manifest.json`.
    pub fn set_primary_output(&mut self, out: &Path) {
        self.outputs.push(out.display().to_string());
        let mut name = out.as_os_str().to_owned();
        name.push(".manifest.json");
        self.manifest_default = Some(PathBuf::from(name));
    }

    pub fn emit(&self, path: Option<&Path>) -> std::io::Result<()> {
        let text = serde_json::to_string_pretty(self).expect("manifest serializes") + "\n";
        match path.or(self.manifest_default.as_deref()) {
            Some(p) if self.exit_code == 0 || path.is_some() => std::fs::write(p, text),
            _ => {
                eprint!("{text}");
                Ok(())
            }
        }
    }
}
