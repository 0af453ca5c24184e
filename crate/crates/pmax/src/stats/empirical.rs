use crate::error::{Error, Result};

/// Right-continuous empirical distribution function of a sample.
///
/// `evaluate(y)` returns `#{values ≤ y} / n`, a step function with range
/// `{0, 1/n, …, 1}`.
#[derive(Debug, Clone)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn from_samples(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("empirical CDF of an empty sample".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("empirical CDF input must be finite".into()));
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(Self { sorted })
    }

    pub fn n(&self) -> usize {
        self.sorted.len()
    }

    pub fn evaluate(&self, y: f64) -> f64 {
        let count = self.sorted.partition_point(|&v| v <= y);
        count as f64 / self.sorted.len() as f64
    }

    /// The sorted sample, non-decreasing.
    pub fn sorted_values(&self) -> &[f64] {
        &self.sorted
    }
}

/// Order-statistic percentile: the value at 1-based index `⌈k/100 · n⌉` of the
/// sorted sample, `k ∈ (0, 100)`.
pub fn percentile(values: &[f64], k: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Domain("percentile of an empty sequence".into()));
    }
    if !(0.0 < k && k < 100.0) {
        return Err(Error::Domain(format!("percentile k must be in (0,100), got {k}")));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len();
    let idx = ((k / 100.0 * n as f64).ceil() as usize).clamp(1, n);
    Ok(sorted[idx - 1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::{frechet_quantile, frechet_sample, RngStream};

    #[test]
    fn ecdf_is_rank_over_n_at_sample_points() {
        let values = [3.0, 1.0, 2.0, 2.0, 5.0];
        let cdf = EmpiricalCdf::from_samples(&values).unwrap();
        assert_eq!(cdf.evaluate(1.0), 1.0 / 5.0);
        assert_eq!(cdf.evaluate(2.0), 3.0 / 5.0);
        assert_eq!(cdf.evaluate(3.0), 4.0 / 5.0);
        assert_eq!(cdf.evaluate(5.0), 1.0);
        assert_eq!(cdf.evaluate(0.5), 0.0);
        assert_eq!(cdf.evaluate(4.0), 4.0 / 5.0);
    }

    #[test]
    fn ecdf_rejects_empty() {
        assert!(EmpiricalCdf::from_samples(&[]).is_err());
    }

    #[test]
    fn percentile_on_one_to_hundred() {
        let values: Vec<f64> = (1..=100).map(|i| i as f64).collect();
        assert_eq!(percentile(&values, 95.0).unwrap(), 95.0);
        assert_eq!(percentile(&values, 75.0).unwrap(), 75.0);
    }

    #[test]
    fn percentile_singleton() {
        assert_eq!(percentile(&[5.0], 3.0).unwrap(), 5.0);
        assert_eq!(percentile(&[5.0], 97.0).unwrap(), 5.0);
    }

    #[test]
    fn percentile_rejects_bad_input() {
        assert!(percentile(&[], 50.0).is_err());
        assert!(percentile(&[1.0], 0.0).is_err());
        assert!(percentile(&[1.0], 100.0).is_err());
    }

    #[test]
    fn frechet_sample_percentile_near_theoretical_quantile() {
        let mut rng = RngStream::new(99, 0).rng();
        let xs: Vec<f64> = (0..100_000).map(|_| frechet_sample(&mut rng)).collect();
        let p75 = percentile(&xs, 75.0).unwrap();
        let q75 = frechet_quantile(0.75f64).unwrap(); // 1/ln(4/3)
        assert!((p75 / q75 - 1.0).abs() < 0.02, "p75={p75} q75={q75}");
    }
}
