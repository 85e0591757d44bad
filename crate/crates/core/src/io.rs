//! Plain-text sample records and phasor CSV output.
//!
//! A sample file holds one value per line. Header lines start with `#` and
//! may carry `key = value` pairs; `fs_hz` is required, `start_time_s`
//! defaults to zero. Other header lines are treated as comments.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::estimator::Report;

#[derive(Debug, Clone, PartialEq)]
pub struct SampleRecord {
    pub fs_hz: f64,
    pub start_time_s: f64,
    pub samples: Vec<f64>,
}

impl SampleRecord {
    pub fn read(reader: impl BufRead) -> Result<Self> {
        let mut fs_hz = None;
        let mut start_time_s = 0.0;
        let mut samples = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            if let Some(header) = trimmed.strip_prefix('#') {
                if let Some((key, value)) = header.split_once(['=', ':']) {
                    let parse = |v: &str| {
                        v.trim()
                            .parse::<f64>()
                            .map_err(|e| Error::Parse(format!("line {}: {}: {e}", lineno + 1, key.trim())))
                    };
                    match key.trim() {
                        "fs_hz" => fs_hz = Some(parse(value)?),
                        "start_time_s" => start_time_s = parse(value)?,
                        _ => {}
                    }
                }
                continue;
            }
            let v: f64 = trimmed
                .parse()
                .map_err(|e| Error::Parse(format!("line {}: {e}: {trimmed:?}", lineno + 1)))?;
            if !v.is_finite() {
                return Err(Error::Parse(format!("line {}: non-finite sample", lineno + 1)));
            }
            samples.push(v);
        }
        let fs_hz = fs_hz.ok_or_else(|| Error::Parse("missing '# fs_hz = ...' header".into()))?;
        if !(fs_hz > 0.0) || !fs_hz.is_finite() {
            return Err(Error::Parse(format!("invalid fs_hz {fs_hz}")));
        }
        Ok(Self { fs_hz, start_time_s, samples })
    }

    pub fn write(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "# fs_hz = {}", self.fs_hz)?;
        writeln!(w, "# start_time_s = {}", self.start_time_s)?;
        for s in &self.samples {
            writeln!(w, "{s}")?;
        }
        Ok(())
    }
}

pub const PHASOR_CSV_HEADER: &str = "t_tag,h,real,imag,amplitude,phase_rad";

/// Writes one row per (report, order) in report order.
pub fn write_phasor_csv(reports: &[Report], mut w: impl Write) -> Result<()> {
    writeln!(w, "{PHASOR_CSV_HEADER}")?;
    for r in reports {
        for e in &r.estimates {
            writeln!(w, "{},{},{},{},{},{}", e.t_tag, e.h, e.phasor.re, e.phasor.im, e.amplitude, e.phase)?;
        }
    }
    Ok(())
}
