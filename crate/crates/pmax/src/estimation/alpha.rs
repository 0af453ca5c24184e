use num_traits::Float;

use crate::error::{Error, Result};
use crate::stats::{percentile, EmpiricalCdf};

/// Invert the marginal CDF `F(z) = exp(-1/z - z^{-alpha})` for the shape:
/// `alpha = ln(-ln F - 1/z) / ln(1/z)`, defined for 0 < z ≠ 1.
pub fn alpha_from_cdf<F: Float + std::fmt::Display>(z: F, f_value: F) -> Result<F> {
    if !(z > F::zero()) || !z.is_finite() {
        return Err(Error::Domain(format!("z must be a positive real, got {z}")));
    }
    if z == F::one() {
        return Err(Error::Domain("z = 1 makes the inversion denominator ln(1/z) zero".into()));
    }
    if !(f_value > F::zero() && f_value < F::one()) {
        return Err(Error::Domain(format!("F value must lie in (0, 1), got {f_value}")));
    }
    let arg = -f_value.ln() - z.recip();
    if !(arg > F::zero()) {
        return Err(Error::Domain(format!(
            "-ln F - 1/z = {arg} is not positive; logarithm undefined"
        )));
    }
    Ok(arg.ln() / z.recip().ln())
}

/// Evaluation grid for the shape estimator: `count` arithmetic points from
/// `start` up to the k-th sample percentile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// Percentile in (0, 100) bounding the grid from above.
    pub k: f64,
    /// Lower grid bound, > 1.
    pub start: f64,
    /// Number of grid points, ≥ 2.
    pub count: usize,
}

impl GridSpec {
    /// Grid with the study defaults: start 1.1, one point per sample value.
    pub fn with_defaults(k: f64, sample_size: usize) -> Self {
        Self {
            k,
            start: 1.1,
            count: sample_size,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k > 0.0 && self.k < 100.0) {
            return Err(Error::Domain(format!("percentile k must be in (0, 100), got {}", self.k)));
        }
        if !(self.start > 1.0) || !self.start.is_finite() {
            return Err(Error::Domain(format!("grid start must be > 1, got {}", self.start)));
        }
        if self.count < 2 {
            return Err(Error::Domain("grid count must be >= 2".into()));
        }
        Ok(())
    }
}

/// Grid points excluded from the estimator average, by reason.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DropCounts {
    /// Zᵢ ≤ 1 (inversion undefined at or below 1).
    pub z_not_above_one: usize,
    /// F̂(Zᵢ) = 1 (grid point at or beyond the sample maximum).
    pub cdf_one: usize,
    /// F̂(Zᵢ) = 0 (grid point below the sample minimum).
    pub cdf_zero: usize,
    /// −ln F̂(Zᵢ) − 1/Zᵢ ≤ 0 (logarithm undefined).
    pub nonpositive_log_arg: usize,
}

impl DropCounts {
    pub fn total(&self) -> usize {
        self.z_not_above_one + self.cdf_one + self.cdf_zero + self.nonpositive_log_arg
    }
}

/// Result of the grid-averaged shape estimator.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaEstimate {
    pub value: f64,
    pub n_valid: usize,
    pub drops: DropCounts,
}

impl AlphaEstimate {
    pub fn n_dropped(&self) -> usize {
        self.drops.total()
    }
}

/// Estimate the marginal shape by averaging `alpha_from_cdf` of the
/// empirical CDF over an arithmetic grid.
///
/// Grid points where the inversion is undefined — F̂ at 0 or 1, or a
/// non-positive logarithm argument — are dropped and counted, never
/// silently patched; zero surviving points is an estimation error, as is a
/// k-th percentile at or below the grid start.
pub fn estimate_alpha(sample: &[f64], grid: &GridSpec) -> Result<AlphaEstimate> {
    grid.validate()?;
    if sample.is_empty() {
        return Err(Error::Estimation("sample is empty".into()));
    }
    if sample.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::Estimation("sample values must be positive and finite".into()));
    }
    let upper = percentile(sample, grid.k)?;
    if upper <= grid.start {
        return Err(Error::Estimation(format!(
            "k-th percentile {upper} is at or below the grid start {}; no usable grid",
            grid.start
        )));
    }
    let cdf = EmpiricalCdf::from_samples(sample)?;
    let step = (upper - grid.start) / (grid.count - 1) as f64;
    let mut drops = DropCounts::default();
    let mut sum = 0.0;
    let mut n_valid = 0usize;
    for i in 0..grid.count {
        let z = grid.start + step * i as f64;
        if z <= 1.0 {
            drops.z_not_above_one += 1;
            continue;
        }
        let f = cdf.evaluate(z);
        if f >= 1.0 {
            drops.cdf_one += 1;
            continue;
        }
        if f <= 0.0 {
            drops.cdf_zero += 1;
            continue;
        }
        let arg = -f.ln() - 1.0 / z;
        if !(arg > 0.0) {
            drops.nonpositive_log_arg += 1;
            continue;
        }
        sum += arg.ln() / (1.0 / z).ln();
        n_valid += 1;
    }
    if n_valid == 0 {
        return Err(Error::Estimation(format!(
            "no valid grid points out of {}: {drops:?}",
            grid.count
        )));
    }
    Ok(AlphaEstimate {
        value: sum / n_valid as f64,
        n_valid,
        drops,
    })
}
