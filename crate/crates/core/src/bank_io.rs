//! JSON document format for filter banks.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::{DesignSettings, ModelConfig, FORMAT_VERSION};
use crate::design::{BankKind, DesignReport, FilterBank, MultiplierSet};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct FilterEntry {
    h: usize,
    multipliers: Vec<f64>,
    /// (real, imag) pairs for n = −N_h..=N_h.
    coefficients: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct BankDocument {
    format_version: u32,
    kind: BankKind,
    model: ModelConfig,
    design: DesignSettings,
    filters: Vec<FilterEntry>,
    design_report: DesignReport,
}

impl FilterBank {
    /// Serializes to pretty-printed JSON; floats use shortest round-trip form.
    pub fn to_json(&self) -> String {
        let filters = self
            .filters
            .iter()
            .map(|(&h, coeffs)| FilterEntry {
                h,
                multipliers: self.multipliers.get(h).map(<[f64]>::to_vec).unwrap_or_default(),
                coefficients: coeffs.iter().map(|z| [z.re, z.im]).collect(),
            })
            .collect();
        let doc = BankDocument {
            format_version: FORMAT_VERSION,
            kind: self.kind,
            model: self.cfg,
            design: self.settings,
            filters,
            design_report: self.design_report.clone(),
        };
        let mut out = serde_json::to_string_pretty(&doc).expect("bank serializes");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: BankDocument = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if doc.format_version != FORMAT_VERSION {
            return Err(Error::Parse(format!("unsupported bank format_version {}", doc.format_version)));
        }
        doc.model.validate()?;
        let n = doc.model.window_len();
        let mut filters = BTreeMap::new();
        let mut multipliers = MultiplierSet::default();
        for entry in doc.filters {
            if entry.h == 0 || entry.h > doc.model.max_harmonic {
                return Err(Error::OrderOutOfRange { h: entry.h, max: doc.model.max_harmonic });
            }
            if entry.coefficients.len() != n {
                return Err(Error::LengthMismatch { expected: n, got: entry.coefficients.len() });
            }
            if !entry.multipliers.is_empty() {
                multipliers.insert(entry.h, entry.multipliers)?;
            }
            filters.insert(entry.h, entry.coefficients.iter().map(|[re, im]| Complex64::new(*re, *im)).collect());
        }
        if filters.is_empty() {
            return Err(Error::Parse("bank contains no filters".into()));
        }
        Ok(FilterBank {
            cfg: doc.model,
            settings: doc.design,
            kind: doc.kind,
            filters,
            multipliers,
            design_report: doc.design_report,
        })
    }
}
