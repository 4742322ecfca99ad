//! Reconstruction quality metrics: mean squared error, peak signal-to-noise
//! ratio, and the percentage of coefficient energy retained by truncation.
//!
//! PSNR uses `10·log10(peak² / mse)` with `peak` the largest absolute sample
//! of the reference. That choice is scale-invariant and corpus-independent;
//! comparisons between transforms cancel the convention entirely.
//!
//! By Parseval, ERP computed over coefficients equals the signal-domain
//! energy ratio `100·‖ŝ‖²/‖s‖²` for every orthonormal basis.

use thiserror::Error;

use crate::codec::SparseCoefficients;
use crate::transforms::Coefficients;

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("length mismatch: {reference} vs {test}")]
    LengthMismatch { reference: usize, test: usize },
    #[error("empty input")]
    EmptyInput,
    #[error("reference signal is identically zero")]
    ZeroReference,
    #[error("total coefficient energy is zero")]
    ZeroEnergy,
}

/// One (PSNR, ERP, MSE) measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricReport {
    pub psnr_db: f64,
    pub erp_pct: f64,
    pub mse: f64,
}

/// Bundle all three measurements for one reconstructed frame or signal.
pub fn report(
    reference: &[f64],
    test: &[f64],
    full: &Coefficients,
    kept: &SparseCoefficients,
) -> Result<MetricReport, MetricsError> {
    Ok(MetricReport {
        psnr_db: psnr(reference, test)?,
        erp_pct: energy_retained(full, kept)?,
        mse: mse(reference, test)?,
    })
}

/// Mean of squared differences.
pub fn mse(reference: &[f64], test: &[f64]) -> Result<f64, MetricsError> {
    if reference.len() != test.len() {
        return Err(MetricsError::LengthMismatch {
            reference: reference.len(),
            test: test.len(),
        });
    }
    if reference.is_empty() {
        return Err(MetricsError::EmptyInput);
    }
    let sum: f64 = reference
        .iter()
        .zip(test)
        .map(|(a, b)| {
            let d = a - b;
            d * d
        })
        .sum();
    Ok(sum / reference.len() as f64)
}

/// `10·log10(peak²/mse)` in decibels, `peak = max |reference|`.
/// Returns `+∞` when the signals are identical.
pub fn psnr(reference: &[f64], test: &[f64]) -> Result<f64, MetricsError> {
    let err = mse(reference, test)?;
    let peak = reference.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if peak == 0.0 {
        return Err(MetricsError::ZeroReference);
    }
    if err == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (peak * peak / err).log10())
}

/// `100 · Σ kept² / Σ full²`, the share of coefficient energy surviving
/// truncation.
pub fn energy_retained(full: &Coefficients, kept: &SparseCoefficients) -> Result<f64, MetricsError> {
    if full.len() != kept.n() {
        return Err(MetricsError::LengthMismatch {
            reference: full.len(),
            test: kept.n(),
        });
    }
    let total = full.energy();
    if total == 0.0 {
        return Err(MetricsError::ZeroEnergy);
    }
    if kept.kept().len() == full.len() {
        return Ok(100.0);
    }
    Ok(100.0 * kept.energy() / total)
}
