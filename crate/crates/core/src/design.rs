//! Filter bank design: the least-squares TFT bank, its SVD superposition
//! form, and multiplier-weighted composition.

use std::collections::BTreeMap;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::{DesignSettings, ModelConfig};
use crate::error::{Error, Result};
use crate::model::{build_taylor_basis, modulation_diag, svd_taylor_basis, SvdFactors, TaylorBasis};
use crate::optimize::{optimize_for_order, DesignRow};
use crate::response::{max_transition_gain, TransitionBand};

/// Upper bound on the condition number of the (column-equilibrated) normal matrices.
pub const CONDITION_LIMIT: f64 = 1e12;

/// Per-harmonic multipliers y_{h,k}, k = 1..=K+1 stored at index k−1.
///
/// Even-indexed multipliers stay at one; they cannot change the filter
/// because the matching entries of the first row of D vanish.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MultiplierSet {
    values: BTreeMap<usize, Vec<f64>>,
}

impl MultiplierSet {
    pub fn unit(cfg: &ModelConfig, orders: impl IntoIterator<Item = usize>) -> Self {
        Self { values: orders.into_iter().map(|h| (h, vec![1.0; cfg.terms()])).collect() }
    }

    pub fn insert(&mut self, h: usize, y: Vec<f64>) -> Result<()> {
        for (i, &v) in y.iter().enumerate() {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidArgument(format!("multiplier y[{h},{}] = {v} is not positive", i + 1)));
            }
            if i % 2 == 1 && v != 1.0 {
                return Err(Error::InvalidArgument(format!("even multiplier y[{h},{}] must be 1", i + 1)));
            }
        }
        self.values.insert(h, y);
        Ok(())
    }

    pub fn get(&self, h: usize) -> Option<&[f64]> {
        self.values.get(&h).map(Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &[f64])> {
        self.values.iter().map(|(&h, v)| (h, v.as_slice()))
    }
}

/// Gains achieved by the design, one row per optimized order.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DesignReport {
    pub rows: Vec<DesignRow>,
}

impl DesignReport {
    pub fn row(&self, h: usize) -> Option<&DesignRow> {
        self.rows.iter().find(|r| r.h == h)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BankKind {
    /// Plain least-squares Taylor-Fourier filters.
    Tft,
    /// SVD superposition with optimized odd multipliers.
    SvdOptimized,
}

/// Zero-order phasor filters for every harmonic order, plus design metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterBank {
    pub cfg: ModelConfig,
    pub settings: DesignSettings,
    pub kind: BankKind,
    pub filters: BTreeMap<usize, Vec<Complex64>>,
    pub multipliers: MultiplierSet,
    pub design_report: DesignReport,
}

impl FilterBank {
    pub fn filter(&self, h: usize) -> Option<&[Complex64]> {
        self.filters.get(&h).map(Vec::as_slice)
    }

    pub fn orders(&self) -> impl Iterator<Item = usize> + '_ {
        self.filters.keys().copied()
    }

    pub fn window_len(&self) -> usize {
        self.cfg.window_len()
    }
}

fn equilibrated_condition(m: &DMatrix<Complex64>) -> f64 {
    let sv = m.singular_values();
    let max = sv.max();
    let min = sv.min();
    if min <= 0.0 {
        f64::INFINITY
    } else {
        (max / min).powi(2)
    }
}

fn column_block_index(h_block: usize, k: usize, terms: usize) -> usize {
    h_block * terms + k
}

/// Least-squares TFT bank: row (h−1)(K+1)+1 of G⁺ for every order.
///
/// G is column-equilibrated and factored with Householder QR, so G⁺ rows are
/// obtained from R⁻ᴴ without forming GᴴG.
pub fn tft_filter_bank(cfg: &ModelConfig) -> Result<FilterBank> {
    tft_filter_bank_with(cfg, DesignSettings::default())
}

pub fn tft_filter_bank_with(cfg: &ModelConfig, settings: DesignSettings) -> Result<FilterBank> {
    let basis = build_taylor_basis(cfg)?;
    let filters = tft_rows(cfg, &basis)?;
    let ts = cfg.sample_period();
    let mut rows = Vec::new();
    for h in 2..=cfg.max_harmonic {
        let band = TransitionBand::new(cfg, h)?;
        let filter = &filters[&h];
        let g = max_transition_gain(filter, cfg, &band, settings.grid_step_hz)?;
        rows.push(DesignRow {
            h,
            tft_max_gain: g,
            optimized_max_gain: g,
            reduction: 0.0,
            multipliers: vec![1.0; cfg.terms()],
            grid_step_hz: settings.grid_step_hz,
            passband_gain: crate::response::gain(filter, ts, h as f64 * cfg.nominal_frequency_hz),
            passband_guard_active: false,
            no_improvement: false,
            no_free_multipliers: cfg.free_multiplier_indices().is_empty(),
        });
    }
    Ok(FilterBank {
        cfg: *cfg,
        settings,
        kind: BankKind::Tft,
        multipliers: MultiplierSet::unit(cfg, 1..=cfg.max_harmonic),
        filters,
        design_report: DesignReport { rows },
    })
}

fn tft_rows(cfg: &ModelConfig, basis: &TaylorBasis) -> Result<BTreeMap<usize, Vec<Complex64>>> {
    let n = basis.rows();
    let terms = basis.terms();
    let hmax = cfg.max_harmonic;
    let cols = 2 * hmax * terms;
    if n < cols {
        return Err(Error::InvalidConfig(format!(
            "window of {n} samples cannot resolve {cols} Taylor-Fourier unknowns"
        )));
    }
    let scale: Vec<f64> = (0..terms).map(|k| basis.matrix().column(k).norm()).collect();
    let mut g = DMatrix::<Complex64>::zeros(n, cols);
    for block in 0..2 * hmax {
        let order = if block < hmax { (block + 1) as f64 } else { -((block - hmax + 1) as f64) };
        let e = modulation_diag(cfg, order);
        for k in 0..terms {
            let col = column_block_index(block, k, terms);
            for (i, ei) in e.iter().enumerate() {
                g[(i, col)] = ei * (basis.matrix()[(i, k)] / scale[k]);
            }
        }
    }
    let qr = g.qr();
    let r = qr.r();
    let cond = equilibrated_condition(&r);
    if cond > CONDITION_LIMIT {
        return Err(Error::IllConditioned { what: "Taylor-Fourier normal matrix GᴴG", cond, limit: CONDITION_LIMIT });
    }
    let q = qr.q();
    let r_adj = r.adjoint();
    let mut out = BTreeMap::new();
    for h in 1..=hmax {
        let row_index = column_block_index(h - 1, 0, terms);
        let mut unit = DVector::<Complex64>::zeros(cols);
        unit[row_index] = Complex64::new(1.0, 0.0);
        let z = r_adj
            .solve_lower_triangular(&unit)
            .ok_or_else(|| Error::Degenerate("singular triangular factor".into()))?;
        let qz = &q * z;
        out.insert(h, qz.iter().map(|v| v.conj() / scale[0]).collect());
    }
    Ok(out)
}

/// SVD form of the TFT system: B = CΛDᵀ and the Gram matrix of the modulated
/// left singular blocks [E₁C … E_HC E₁*C … E_H*C].
#[derive(Debug, Clone)]
pub struct SvdDesign {
    pub cfg: ModelConfig,
    pub svd: SvdFactors,
    modulated: DMatrix<Complex64>,
    gram: Cholesky<Complex64, Dyn>,
}

impl SvdDesign {
    pub fn new(cfg: &ModelConfig) -> Result<Self> {
        let basis = build_taylor_basis(cfg)?;
        let svd = svd_taylor_basis(&basis)?;
        let n = basis.rows();
        let terms = basis.terms();
        let hmax = cfg.max_harmonic;
        let cols = 2 * hmax * terms;
        if n < cols {
            return Err(Error::InvalidConfig(format!(
                "window of {n} samples cannot resolve {cols} Taylor-Fourier unknowns"
            )));
        }
        let mut modulated = DMatrix::<Complex64>::zeros(n, cols);
        for block in 0..2 * hmax {
            let order = if block < hmax { (block + 1) as f64 } else { -((block - hmax + 1) as f64) };
            let e = modulation_diag(cfg, order);
            for k in 0..terms {
                let col = column_block_index(block, k, terms);
                for (i, ei) in e.iter().enumerate() {
                    modulated[(i, col)] = ei * svd.c[(i, k)];
                }
            }
        }
        let gram = modulated.adjoint() * &modulated;
        let eig = gram.clone().symmetric_eigenvalues();
        let cond = eig.max() / eig.min();
        if !(cond > 0.0) || cond > CONDITION_LIMIT {
            return Err(Error::IllConditioned { what: "modulated singular-vector Gram matrix", cond, limit: CONDITION_LIMIT });
        }
        let gram = Cholesky::new(gram)
            .ok_or_else(|| Error::Degenerate("Gram matrix is not positive definite".into()))?;
        Ok(Self { cfg: *cfg, svd, modulated, gram })
    }

    /// l_h = Σ_j Q_{h,j}CᵀE_j* + Σ_j Q_{h,j+H}CᵀE_j, a (K+1)×N complex matrix.
    pub fn l_matrix(&self, h: usize) -> Result<DMatrix<Complex64>> {
        let hmax = self.cfg.max_harmonic;
        if h == 0 || h > hmax {
            return Err(Error::OrderOutOfRange { h, max: hmax });
        }
        let terms = self.cfg.terms();
        let cols = self.modulated.ncols();
        let mut units = DMatrix::<Complex64>::zeros(cols, terms);
        for k in 0..terms {
            units[(column_block_index(h - 1, k, terms), k)] = Complex64::new(1.0, 0.0);
        }
        // Q is Hermitian, so its block row h is the adjoint of its block column h.
        let q_cols = self.gram.solve(&units);
        Ok((&self.modulated * q_cols).adjoint())
    }

    /// Weights d_{1,k}/λ_k of the superposition.
    pub fn weights(&self) -> Vec<f64> {
        self.svd.d_first_row().iter().zip(&self.svd.lambda).map(|(d, l)| d / l).collect()
    }
}

/// Computes l_h for one order from scratch.
pub fn compute_l_matrix(cfg: &ModelConfig, h: usize) -> Result<DMatrix<Complex64>> {
    SvdDesign::new(cfg)?.l_matrix(h)
}

/// r̄_h = Σ_k d_{1,k} / (y_k·λ_k) · l_{k,:}.
pub fn compose_filter(l_h: &DMatrix<Complex64>, svd: &SvdFactors, y: &[f64]) -> Result<Vec<Complex64>> {
    let terms = svd.lambda.len();
    if y.len() != terms || l_h.nrows() != terms {
        return Err(Error::LengthMismatch { expected: terms, got: y.len().min(l_h.nrows()) });
    }
    if let Some(bad) = y.iter().find(|v| !(**v > 0.0) || !v.is_finite()) {
        return Err(Error::InvalidArgument(format!("multiplier {bad} is not positive")));
    }
    let mut out = vec![Complex64::new(0.0, 0.0); l_h.ncols()];
    for k in 0..terms {
        let w = svd.d[(0, k)] / (y[k] * svd.lambda[k]);
        if w == 0.0 {
            continue;
        }
        for (o, l) in out.iter_mut().zip(l_h.row(k).iter()) {
            *o += l * w;
        }
    }
    Ok(out)
}

/// Full pipeline: TFT bank, SVD superposition and per-order multiplier optimization.
pub fn design_bank(cfg: &ModelConfig) -> Result<FilterBank> {
    design_bank_with(cfg, DesignSettings::default())
}

pub fn design_bank_with(cfg: &ModelConfig, settings: DesignSettings) -> Result<FilterBank> {
    let tft = tft_filter_bank_with(cfg, settings)?;
    let design = SvdDesign::new(cfg)?;
    let orders: Vec<usize> = (2..=cfg.max_harmonic).collect();

    let run = |h: usize| -> Result<(usize, Vec<Complex64>, DesignRow)> {
        let l = design.l_matrix(h)?;
        let row = optimize_for_order(&design, h, &l, &settings)?;
        let filter = compose_filter(&l, &design.svd, &row.multipliers)?;
        Ok((h, filter, row))
    };

    #[cfg(feature = "parallel")]
    let results: Vec<_> = {
        use rayon::prelude::*;
        orders.par_iter().map(|&h| run(h)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<_> = orders.iter().map(|&h| run(h)).collect();

    let mut filters = BTreeMap::new();
    filters.insert(1, tft.filters[&1].clone());
    let mut multipliers = MultiplierSet::unit(cfg, [1]);
    let mut rows = Vec::new();
    for result in results {
        let (h, filter, row) = result?;
        filters.insert(h, filter);
        multipliers.insert(h, row.multipliers.clone())?;
        rows.push(row);
    }
    Ok(FilterBank {
        cfg: *cfg,
        settings,
        kind: BankKind::SvdOptimized,
        filters,
        multipliers,
        design_report: DesignReport { rows },
    })
}

/// Builds a bank from explicit multipliers (orders without an entry use all ones).
pub fn bank_from_multipliers(cfg: &ModelConfig, multipliers: &MultiplierSet) -> Result<FilterBank> {
    let settings = DesignSettings::default();
    let tft = tft_filter_bank_with(cfg, settings)?;
    let design = SvdDesign::new(cfg)?;
    let mut filters = BTreeMap::new();
    let mut used = MultiplierSet::default();
    filters.insert(1, tft.filters[&1].clone());
    used.insert(1, vec![1.0; cfg.terms()])?;
    let mut rows = Vec::new();
    let ts = cfg.sample_period();
    for h in 2..=cfg.max_harmonic {
        let y = multipliers.get(h).map(<[f64]>::to_vec).unwrap_or_else(|| vec![1.0; cfg.terms()]);
        let l = design.l_matrix(h)?;
        let filter = compose_filter(&l, &design.svd, &y)?;
        let band = TransitionBand::new(cfg, h)?;
        let tft_gain = tft.design_report.row(h).map(|r| r.tft_max_gain).unwrap_or(f64::NAN);
        let opt_gain = max_transition_gain(&filter, cfg, &band, settings.grid_step_hz)?;
        rows.push(DesignRow {
            h,
            tft_max_gain: tft_gain,
            optimized_max_gain: opt_gain,
            reduction: 1.0 - opt_gain / tft_gain,
            multipliers: y.clone(),
            grid_step_hz: settings.grid_step_hz,
            passband_gain: crate::response::gain(&filter, ts, h as f64 * cfg.nominal_frequency_hz),
            passband_guard_active: false,
            no_improvement: false,
            no_free_multipliers: cfg.free_multiplier_indices().is_empty(),
        });
        used.insert(h, y)?;
        filters.insert(h, filter);
    }
    Ok(FilterBank {
        cfg: *cfg,
        settings,
        kind: BankKind::SvdOptimized,
        filters,
        multipliers: used,
        design_report: DesignReport { rows },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::response::gain;

    #[test]
    fn tft_bank_shape_and_passband() {
        let cfg = ModelConfig::default();
        let bank = tft_filter_bank(&cfg).unwrap();
        assert_eq!(bank.filters.len(), 13);
        for (h, filter) in &bank.filters {
            assert_eq!(filter.len(), 601);
            let g = gain(filter, cfg.sample_period(), *h as f64 * 50.0);
            assert!((g - 1.0).abs() < 1e-9, "h={h}: {g}");
        }
    }

    #[test]
    fn tft_rejects_other_harmonics() {
        let cfg = ModelConfig::default();
        let bank = tft_filter_bank(&cfg).unwrap();
        let ts = cfg.sample_period();
        for h in 2..=13 {
            for other in 1..=13 {
                if other != h {
                    assert!(gain(&bank.filters[&h], ts, other as f64 * 50.0) < 1e-10);
                }
            }
            assert!(gain(&bank.filters[&h], ts, -(h as f64) * 50.0) < 1e-10);
        }
    }

    #[test]
    fn l_matrix_shape_and_distinct_orders() {
        let cfg = ModelConfig::default();
        let design = SvdDesign::new(&cfg).unwrap();
        let l2 = design.l_matrix(2).unwrap();
        let l3 = design.l_matrix(3).unwrap();
        assert_eq!(l2.shape(), (3, 601));
        assert!((l2 - l3).camax() > 1e-3);
        assert!(design.l_matrix(14).is_err());
    }

    #[test]
    fn unit_multipliers_reproduce_tft_rows() {
        let cfg = ModelConfig::default();
        let bank = tft_filter_bank(&cfg).unwrap();
        let design = SvdDesign::new(&cfg).unwrap();
        for h in [1, 2, 7, 13] {
            let l = design.l_matrix(h).unwrap();
            let r = compose_filter(&l, &design.svd, &[1.0; 3]).unwrap();
            let diff = r.iter().zip(&bank.filters[&h]).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            assert!(diff < 1e-9, "h={h}: {diff}");
        }
    }

    #[test]
    fn even_multiplier_has_no_effect() {
        let cfg = ModelConfig::default();
        let design = SvdDesign::new(&cfg).unwrap();
        let l = design.l_matrix(2).unwrap();
        let base = compose_filter(&l, &design.svd, &[1.0, 1.0, 1.0]).unwrap();
        let bumped = compose_filter(&l, &design.svd, &[1.0, 5.0, 1.0]).unwrap();
        let diff = base.iter().zip(&bumped).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(diff <= 1e-12, "{diff}");
    }

    #[test]
    fn compose_rejects_nonpositive() {
        let cfg = ModelConfig::default();
        let design = SvdDesign::new(&cfg).unwrap();
        let l = design.l_matrix(2).unwrap();
        assert!(compose_filter(&l, &design.svd, &[1.0, 1.0, 0.0]).is_err());
        assert!(compose_filter(&l, &design.svd, &[1.0, 1.0]).is_err());
    }

    #[test]
    fn multiplier_set_invariants() {
        let mut set = MultiplierSet::default();
        assert!(set.insert(2, vec![1.0, 1.0, 2.31]).is_ok());
        assert!(set.insert(2, vec![1.0, 2.0, 2.31]).is_err());
        assert!(set.insert(2, vec![1.0, 1.0, -1.0]).is_err());
    }
}
