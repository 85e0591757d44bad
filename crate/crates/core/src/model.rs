//! Taylor-Fourier signal model: Taylor basis, harmonic modulation, and the
//! SVD of the basis together with numerical checks of its eigenstructure.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::ModelConfig;
use crate::error::{Error, Result};
use crate::linalg::{jacobi_eigen, jacobi_svd};

/// Relative threshold under which a singular value counts as zero.
pub const RANK_TOL: f64 = 1e-12;

/// N×(K+1) real matrix with entries (n·T_s)^k / k!, rows ordered n = −N_h..=N_h.
#[derive(Debug, Clone)]
pub struct TaylorBasis {
    half_window: usize,
    matrix: DMatrix<f64>,
}

impl TaylorBasis {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn rows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn terms(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn half_window(&self) -> usize {
        self.half_window
    }

    /// Entry at sample offset `n` (relative to the window centre) and order `k`.
    pub fn entry(&self, n: i64, k: usize) -> f64 {
        self.matrix[((n + self.half_window as i64) as usize, k)]
    }

    /// BᵀB accumulated over ±n pairs so that entries with odd i+j cancel exactly.
    pub fn gram(&self) -> DMatrix<f64> {
        let terms = self.terms();
        let nh = self.half_window;
        DMatrix::from_fn(terms, terms, |i, j| {
            if (i + j) % 2 == 1 {
                return 0.0;
            }
            let mut acc = self.matrix[(nh, i)] * self.matrix[(nh, j)];
            for m in 1..=nh {
                let lo = self.matrix[(nh - m, i)] * self.matrix[(nh - m, j)];
                let hi = self.matrix[(nh + m, i)] * self.matrix[(nh + m, j)];
                acc += lo + hi;
            }
            acc
        })
    }
}

/// Builds the Taylor basis for a validated configuration.
pub fn build_taylor_basis(cfg: &ModelConfig) -> Result<TaylorBasis> {
    cfg.validate()?;
    let n_rows = cfg.window_len();
    let nh = cfg.half_window();
    let terms = cfg.terms();
    let ts = cfg.sample_period();
    let mut matrix = DMatrix::<f64>::zeros(n_rows, terms);
    for row in 0..n_rows {
        let tau = (row as f64 - nh as f64) * ts;
        // 0^0 = 1
        let mut value = 1.0;
        matrix[(row, 0)] = value;
        for k in 1..terms {
            value *= tau / k as f64;
            matrix[(row, k)] = value;
        }
    }
    Ok(TaylorBasis { half_window: nh, matrix })
}

/// Diagonal of E_h: e^{j·2π·h·f0·n·T_s} for n = −N_h..=N_h.
#[derive(Debug, Clone, PartialEq)]
pub struct ModulationMatrix {
    pub h: i64,
    pub diag: Vec<Complex64>,
}

impl ModulationMatrix {
    /// E_h* equals E_{−h}.
    pub fn conjugate(&self) -> Self {
        Self { h: -self.h, diag: self.diag.iter().map(|z| z.conj()).collect() }
    }
}

/// Modulation diagonal for order `h`; negative orders give the conjugate.
pub fn build_modulation(cfg: &ModelConfig, h: i64) -> Result<ModulationMatrix> {
    cfg.validate()?;
    let max = cfg.max_harmonic;
    if h == 0 || h.unsigned_abs() as usize > max {
        return Err(Error::OrderOutOfRange { h: h.unsigned_abs() as usize, max });
    }
    Ok(ModulationMatrix { h, diag: modulation_diag(cfg, h as f64) })
}

/// e^{j·2π·f·n·T_s} for n = −N_h..=N_h at an arbitrary multiple `order` of f0.
///
/// Integer orders reduce the phase modulo one nominal cycle so the table is
/// exactly periodic.
pub(crate) fn modulation_diag(cfg: &ModelConfig, order: f64) -> Vec<Complex64> {
    let nh = cfg.half_window() as i64;
    let per_cycle = (cfg.sampling_frequency_hz / cfg.nominal_frequency_hz).round() as i64;
    let integral = order.fract() == 0.0;
    (-nh..=nh)
        .map(|n| {
            let cycles = if integral {
                ((order as i64 * n).rem_euclid(per_cycle)) as f64 / per_cycle as f64
            } else {
                order * n as f64 / per_cycle as f64
            };
            Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * cycles)
        })
        .collect()
}

/// Thin SVD of the Taylor basis, B = C·diag(Λ)·Dᵀ.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    pub c: DMatrix<f64>,
    pub lambda: Vec<f64>,
    pub d: DMatrix<f64>,
}

impl SvdFactors {
    /// First row of D, i.e. d_{1,k} for k = 1..=K+1.
    pub fn d_first_row(&self) -> Vec<f64> {
        self.d.row(0).iter().copied().collect()
    }

    pub fn reconstruct(&self) -> DMatrix<f64> {
        let mut scaled = self.c.clone();
        for (j, &l) in self.lambda.iter().enumerate() {
            scaled.column_mut(j).scale_mut(l);
        }
        scaled * self.d.transpose()
    }
}

/// SVD with singular values descending and each right singular vector signed
/// so that its largest-magnitude entry is positive.
pub fn svd_taylor_basis(basis: &TaylorBasis) -> Result<SvdFactors> {
    let svd = jacobi_svd(basis.matrix());
    let max = svd.s.first().copied().unwrap_or(0.0);
    if let Some(&min) = svd.s.last() {
        if !(min > RANK_TOL * max) {
            return Err(Error::Degenerate(format!(
                "Taylor basis is rank deficient (singular value ratio {:.3e} < {RANK_TOL:e})",
                min / max
            )));
        }
    }
    let (mut c, mut d) = (svd.u, svd.v);
    for j in 0..d.ncols() {
        let pivot = d
            .column(j)
            .iter()
            .copied()
            .max_by(|a, b| a.abs().total_cmp(&b.abs()))
            .unwrap_or(1.0);
        if pivot < 0.0 {
            d.column_mut(j).neg_mut();
            c.column_mut(j).neg_mut();
        }
    }
    Ok(SvdFactors { c, lambda: svd.s, d })
}

/// Outcome of checking the parity structure of BᵀB and the first row of D.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub window_cycles: u32,
    pub taylor_order: usize,
    pub singular_values: Vec<f64>,
    pub d_first_row: Vec<f64>,
    /// Eigenvalues of BᵀB, descending.
    pub gram_eigenvalues: Vec<f64>,
    /// Eigenvalues of BᵀB with its first row and column deleted, descending.
    pub minor_eigenvalues: Vec<f64>,
    /// (a, δ_{2a}(BᵀB), δ_{2a−1}(W₁₁), relative difference)
    pub interlacing: Vec<(usize, f64, f64, f64)>,
    /// |d_{1,i}|² from the SVD.
    pub d_sq_from_svd: Vec<f64>,
    /// |d_{1,i}|² from the eigenvalue-product identity.
    pub d_sq_from_eigenvalues: Vec<f64>,
    pub max_gram_parity_residual: f64,
    pub max_eigen_identity_error: f64,
    pub parity_ok: bool,
    pub eigen_identity_ok: bool,
    pub interlacing_ok: bool,
    pub eigen_product_ok: bool,
    pub even_entries_vanish: bool,
    pub odd_entries_nonzero: bool,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.parity_ok
            && self.eigen_identity_ok
            && self.interlacing_ok
            && self.eigen_product_ok
            && self.even_entries_vanish
            && self.odd_entries_nonzero
    }
}

pub const INTERLACING_TOL: f64 = 1e-8;
pub const EIGEN_PRODUCT_TOL: f64 = 1e-6;
pub const EVEN_ENTRY_TOL: f64 = 1e-9;
pub const ODD_ENTRY_FLOOR: f64 = 1e-6;
pub const EIGEN_IDENTITY_TOL: f64 = 1e-9;

fn relative_diff(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Runs every eigenstructure check for one configuration.
pub fn verify_appendix_structure(cfg: &ModelConfig) -> Result<VerificationReport> {
    let basis = build_taylor_basis(cfg)?;
    let svd = svd_taylor_basis(&basis)?;
    let terms = basis.terms();

    let gram = basis.gram();
    let gram_max = gram.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut parity_residual = 0.0f64;
    for i in 0..terms {
        for j in 0..terms {
            if (i + j) % 2 == 1 {
                parity_residual = parity_residual.max(gram[(i, j)].abs() / gram_max);
            }
        }
    }

    let gram_eig = jacobi_eigen(&gram).values;
    let minor_eig = if terms > 1 {
        jacobi_eigen(&gram.view((1, 1), (terms - 1, terms - 1)).into_owned()).values
    } else {
        Vec::new()
    };

    let eigen_identity_error = gram_eig
        .iter()
        .zip(&svd.lambda)
        .map(|(&e, &s)| relative_diff(e, s * s))
        .fold(0.0f64, f64::max);

    let interlacing: Vec<(usize, f64, f64, f64)> = (1..=terms / 2)
        .map(|a| {
            let big = gram_eig[2 * a - 1];
            let small = minor_eig[2 * a - 2];
            (a, big, small, relative_diff(big, small))
        })
        .collect();

    let d_row = svd.d_first_row();
    let d_sq_svd: Vec<f64> = d_row.iter().map(|d| d * d).collect();
    let d_sq_eig: Vec<f64> = (0..terms)
        .map(|i| {
            let di = gram_eig[i];
            let num: f64 = minor_eig.iter().map(|&mu| di - mu).product();
            let den: f64 = gram_eig
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &dj)| di - dj)
                .product();
            num / den
        })
        .collect();

    let eigen_product_ok = d_sq_svd
        .iter()
        .zip(&d_sq_eig)
        .all(|(a, b)| (a - b).abs() <= EIGEN_PRODUCT_TOL);
    // 1-based index i is even <=> 0-based index is odd
    let even_entries_vanish = d_row.iter().skip(1).step_by(2).all(|d| d.abs() <= EVEN_ENTRY_TOL);
    let odd_entries_nonzero = d_row.iter().step_by(2).all(|d| d.abs() > ODD_ENTRY_FLOOR);

    Ok(VerificationReport {
        window_cycles: cfg.window_cycles,
        taylor_order: cfg.taylor_order,
        singular_values: svd.lambda.clone(),
        d_first_row: d_row,
        parity_ok: parity_residual <= 1e-15,
        eigen_identity_ok: eigen_identity_error <= EIGEN_IDENTITY_TOL,
        interlacing_ok: interlacing.iter().all(|t| t.3 <= INTERLACING_TOL),
        gram_eigenvalues: gram_eig,
        minor_eigenvalues: minor_eig,
        interlacing,
        d_sq_from_svd: d_sq_svd,
        d_sq_from_eigenvalues: d_sq_eig,
        max_gram_parity_residual: parity_residual,
        max_eigen_identity_error: eigen_identity_error,
        eigen_product_ok,
        even_entries_vanish,
        odd_entries_nonzero,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> ModelConfig {
        ModelConfig::reference(3, 2)
    }

    #[test]
    fn basis_shape_and_entries() {
        let b = build_taylor_basis(&reference()).unwrap();
        assert_eq!((b.rows(), b.terms()), (601, 3));
        assert_eq!(b.entry(0, 0), 1.0);
        assert_eq!(b.entry(0, 1), 0.0);
        assert_eq!(b.entry(0, 2), 0.0);
        assert!((b.entry(1, 2) - 5e-9).abs() < 1e-24);
    }

    #[test]
    fn basis_sign_symmetry() {
        let b = build_taylor_basis(&ModelConfig::reference(7, 6)).unwrap();
        for n in 1..=b.half_window() as i64 {
            for k in 0..b.terms() {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                assert_eq!(b.entry(-n, k), sign * b.entry(n, k));
            }
        }
    }

    #[test]
    fn rejects_invalid_config() {
        assert!(build_taylor_basis(&ModelConfig::reference(2, 2)).is_err());
    }

    #[test]
    fn modulation_values() {
        let cfg = reference();
        let e1 = build_modulation(&cfg, 1).unwrap();
        let nh = cfg.half_window();
        assert_eq!(e1.diag[nh], Complex64::new(1.0, 0.0));
        let quarter = e1.diag[nh + 50];
        assert!((quarter - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        let e2 = build_modulation(&cfg, 2).unwrap();
        for (a, b) in e1.diag.iter().zip(&e2.diag) {
            assert!((a * a - b).norm() < 1e-14);
            assert!((a.norm() - 1.0).abs() < 1e-15);
        }
        let conj = build_modulation(&cfg, -1).unwrap();
        assert_eq!(conj.h, e1.conjugate().h);
        for (a, b) in conj.diag.iter().zip(&e1.conjugate().diag) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn modulation_order_range() {
        let cfg = reference();
        assert!(matches!(build_modulation(&cfg, 0), Err(Error::OrderOutOfRange { .. })));
        assert!(matches!(build_modulation(&cfg, 14), Err(Error::OrderOutOfRange { .. })));
    }

    #[test]
    fn svd_reference() {
        let svd = svd_taylor_basis(&build_taylor_basis(&reference()).unwrap()).unwrap();
        assert_eq!(svd.lambda.len(), 3);
        assert!(svd.lambda.windows(2).all(|w| w[0] > w[1]) && svd.lambda[2] > 0.0);
        assert!(svd.d[(0, 1)].abs() < 1e-9);
        assert!(svd.d[(0, 0)] > 0.0);
    }

    #[test]
    fn svd_rank_one() {
        let cfg = ModelConfig::reference(3, 0);
        let svd = svd_taylor_basis(&build_taylor_basis(&cfg).unwrap()).unwrap();
        assert!((svd.lambda[0] - 601f64.sqrt()).abs() < 1e-12);
        assert_eq!(svd.d[(0, 0)], 1.0);
        let expected = 1.0 / 601f64.sqrt();
        assert!(svd.c.iter().all(|&x| (x - expected).abs() < 1e-15));
    }

    #[test]
    fn svd_factor_invariants() {
        for (c, k) in [(1, 0), (3, 2), (4, 3), (5, 4), (6, 5), (7, 6)] {
            let basis = build_taylor_basis(&ModelConfig::reference(c, k)).unwrap();
            let svd = svd_taylor_basis(&basis).unwrap();
            let err = (svd.reconstruct() - basis.matrix()).norm() / basis.matrix().norm();
            assert!(err <= 1e-10, "c={c} K={k}: {err}");
            let ctc = svd.c.transpose() * &svd.c;
            assert!((ctc - DMatrix::identity(k + 1, k + 1)).amax() < 1e-10);
            let dtd = svd.d.transpose() * &svd.d;
            assert!((dtd - DMatrix::identity(k + 1, k + 1)).amax() < 1e-10);
        }
    }

    #[test]
    fn gram_parity_zeros() {
        let gram = build_taylor_basis(&ModelConfig::reference(7, 6)).unwrap().gram();
        for i in 0..7 {
            for j in 0..7 {
                if (i + j) % 2 == 1 {
                    assert_eq!(gram[(i, j)], 0.0);
                }
            }
        }
        assert_eq!(gram[(0, 0)], 1401.0);
    }

    #[test]
    fn verification_reference() {
        let report = verify_appendix_structure(&reference()).unwrap();
        assert!(report.passed(), "{report:#?}");
        assert_eq!(report.interlacing.len(), 1);
        assert!(report.d_sq_from_svd[1] < 1e-18);
        assert!(report.d_sq_from_eigenvalues[1].abs() < 1e-12);
    }

    #[test]
    fn verification_k0_is_vacuous() {
        let report = verify_appendix_structure(&ModelConfig::reference(1, 0)).unwrap();
        assert!(report.interlacing.is_empty());
        assert!(report.passed());
    }

    #[test]
    fn verification_k4_even_entries() {
        let report = verify_appendix_structure(&ModelConfig::reference(5, 4)).unwrap();
        assert!(report.d_sq_from_eigenvalues[1].abs() <= 1e-12);
        assert!(report.d_sq_from_eigenvalues[3].abs() <= 1e-12);
        assert!(report.interlacing_ok && report.eigen_product_ok && report.even_entries_vanish);
        // d_{1,5} is structurally nonzero but tiny with time measured in seconds
        // (LAPACK gesdd gives 2.24106245e-08).
        let d15 = report.d_first_row[4].abs();
        assert!((d15 / 2.24106245e-8 - 1.0).abs() < 1e-6, "{d15}");
        assert!(!report.odd_entries_nonzero);
    }
}
