use rand::Rng;
use rand_distr::{Distribution, Exp1};
use statrs::distribution::{ContinuousCDF, Normal};

use super::{Location, SchlatherTruncation};
use crate::error::{Error, Result};
use crate::stats::{CorrelationModel, GaussianSampler};

/// `E[max{0, U}] = 1/sqrt(2π)` for standard normal U, so the spectral
/// functions are scaled by `sqrt(2π)` to get unit Fréchet margins.
const GAUSS_SCALE: f64 = 2.5066282746310002; // sqrt(2*pi)

/// Prefactored Schlather field sampler over a fixed set of locations.
///
/// One draw is `max_i ξ_i · max{0, c·U_i(x)}` where the `ξ_i = 1/Γ_i` are the
/// points of a Poisson process with intensity `ξ^{-2}dξ` (Γ_i cumulative sums
/// of unit exponentials), the `U_i` are independent Gaussian vectors with
/// correlation `ρ(h)` between locations, and `c = sqrt(2π)`.
///
/// The series is truncated once `ξ_i · B(ε) < min_x M(x)` for the running
/// maxima `M(x)`, with `B(ε) = c · Φ^{-1}(1-ε)`; exhausting `max_points`
/// before the rule fires is a truncation error carrying the achieved bound.
#[derive(Debug, Clone)]
pub struct SchlatherSampler {
    gaussian: GaussianSampler,
    trunc: SchlatherTruncation,
    bound: f64,
}

impl SchlatherSampler {
    pub fn new(
        locations: &[Location],
        corr: &CorrelationModel,
        trunc: SchlatherTruncation,
    ) -> Result<Self> {
        trunc.validate()?;
        if locations.is_empty() {
            return Err(Error::Spec("Schlather sampler needs at least one location".into()));
        }
        let m = locations.len();
        let mut matrix = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                matrix[i * m + j] = corr.rho(locations[i].distance(&locations[j]));
            }
        }
        let normal = Normal::new(0.0, 1.0).expect("standard normal");
        let bound = GAUSS_SCALE * normal.inverse_cdf(1.0 - trunc.epsilon);
        Ok(Self {
            gaussian: GaussianSampler::new(&matrix, m)?,
            trunc,
            bound,
        })
    }

    /// One field draw over the locations; unit Fréchet margins.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<f64>> {
        let m = self.gaussian.dim();
        let mut maxima = vec![0.0f64; m];
        let mut gamma = 0.0f64;
        for _ in 0..self.trunc.max_points {
            let e: f64 = Exp1.sample(rng);
            gamma += e;
            let xi = 1.0 / gamma;
            let floor = maxima.iter().cloned().fold(f64::INFINITY, f64::min);
            if floor > 0.0 && xi * self.bound < floor {
                return Ok(maxima);
            }
            let u = self.gaussian.sample(rng);
            for (mx, &ui) in maxima.iter_mut().zip(&u) {
                let contrib = xi * (GAUSS_SCALE * ui).max(0.0);
                if contrib > *mx {
                    *mx = contrib;
                }
            }
        }
        Err(Error::Truncation {
            achieved_bound: (1.0 / gamma) * self.bound,
        })
    }
}

/// One Schlather field draw over `locations` with correlation `ρ(h)`.
///
/// For repeated draws, prefer [`SchlatherSampler`].
pub fn schlather_field<R: Rng + ?Sized>(
    locations: &[Location],
    corr: &CorrelationModel,
    trunc: SchlatherTruncation,
    rng: &mut R,
) -> Result<Vec<f64>> {
    SchlatherSampler::new(locations, corr, trunc)?.sample(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::RngStream;

    fn locs(coords: &[(f64, f64)]) -> Vec<Location> {
        coords
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| Location::new(format!("l{i}"), x, y))
            .collect()
    }

    #[test]
    fn coincident_locations_give_equal_components() {
        let sampler = SchlatherSampler::new(
            &locs(&[(0.0, 0.0), (0.0, 0.0), (0.0, 0.0)]),
            &CorrelationModel::default(),
            SchlatherTruncation::default(),
        )
        .unwrap();
        let mut rng = RngStream::new(4, 0).rng();
        for _ in 0..200 {
            let v = sampler.sample(&mut rng).unwrap();
            assert!((v[0] - v[1]).abs() < 1e-9 && (v[1] - v[2]).abs() < 1e-9);
        }
    }

    #[test]
    fn single_location_margin_at_one() {
        let sampler = SchlatherSampler::new(
            &locs(&[(0.0, 0.0)]),
            &CorrelationModel::default(),
            SchlatherTruncation::default(),
        )
        .unwrap();
        let mut rng = RngStream::new(17, 0).rng();
        let n = 100_000;
        let mut below = 0usize;
        for _ in 0..n {
            if sampler.sample(&mut rng).unwrap()[0] <= 1.0 {
                below += 1;
            }
        }
        let frac = below as f64 / n as f64;
        let target = (-1.0f64).exp();
        assert!((frac - target).abs() < 0.005, "frac {frac} target {target}");
    }

    #[test]
    fn truncation_epsilon_stability() {
        // One stream per draw so both epsilon settings consume identical
        // Poisson/Gaussian sequences: 0.99-quantiles differ < 0.1%.
        let q99 = |eps: f64| {
            let sampler = SchlatherSampler::new(
                &locs(&[(0.0, 0.0), (1.0, 0.0)]),
                &CorrelationModel::default(),
                SchlatherTruncation {
                    epsilon: eps,
                    ..Default::default()
                },
            )
            .unwrap();
            let mut xs: Vec<f64> = (0..10_000u64)
                .map(|i| {
                    let mut rng = RngStream::new(77, i).rng();
                    sampler.sample(&mut rng).unwrap()[0]
                })
                .collect();
            xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
            xs[9_899]
        };
        let a = q99(1e-4);
        let b = q99(1e-6);
        assert!((a / b - 1.0).abs() < 1e-3, "q99 {a} vs {b}");
    }

    #[test]
    fn point_cap_exhaustion_reports_truncation() {
        let sampler = SchlatherSampler::new(
            &locs(&[(0.0, 0.0)]),
            &CorrelationModel::default(),
            SchlatherTruncation {
                epsilon: 1e-4,
                max_points: 2,
            },
        )
        .unwrap();
        let mut rng = RngStream::new(0, 0).rng();
        let mut saw_truncation = false;
        for _ in 0..50 {
            if let Err(Error::Truncation { achieved_bound }) = sampler.sample(&mut rng) {
                assert!(achieved_bound.is_finite());
                saw_truncation = true;
            }
        }
        assert!(saw_truncation);
    }
}
