use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

/// Jitter ladder added to the diagonal before giving up on the factorization.
/// Powered-exponential matrices on near-coincident locations are near-singular.
const JITTERS: [f64; 4] = [0.0, 1e-12, 1e-10, 1e-8];

/// Lower-triangular Cholesky factor of a symmetric PSD matrix (row-major,
/// `dim × dim`), with diagonal jitter escalation.
pub fn cholesky_with_jitter(corr: &[f64], dim: usize) -> Result<Vec<f64>> {
    if corr.len() != dim * dim {
        return Err(Error::Spec(format!(
            "correlation matrix length {} does not match dim {dim}",
            corr.len()
        )));
    }
    for i in 0..dim {
        for j in 0..i {
            if (corr[i * dim + j] - corr[j * dim + i]).abs() > 1e-12 {
                return Err(Error::Spec("correlation matrix must be symmetric".into()));
            }
        }
        if (corr[i * dim + i] - 1.0).abs() > 1e-12 {
            return Err(Error::Spec("correlation matrix must have unit diagonal".into()));
        }
    }

    let mut min_pivot_seen = f64::INFINITY;
    for &jitter in &JITTERS {
        if let Some(l) = try_cholesky(corr, dim, jitter, &mut min_pivot_seen) {
            return Ok(l);
        }
    }
    Err(Error::Numeric(format!(
        "Cholesky failed after jitter escalation up to {:.0e}; smallest pivot {min_pivot_seen:.3e}",
        JITTERS[JITTERS.len() - 1]
    )))
}

fn try_cholesky(corr: &[f64], dim: usize, jitter: f64, min_pivot: &mut f64) -> Option<Vec<f64>> {
    let mut l = vec![0.0; dim * dim];
    for i in 0..dim {
        for j in 0..=i {
            let mut s = corr[i * dim + j];
            if i == j {
                s += jitter;
            }
            for k in 0..j {
                s -= l[i * dim + k] * l[j * dim + k];
            }
            if i == j {
                *min_pivot = min_pivot.min(s);
                if s < 0.0 {
                    return None;
                }
                l[i * dim + i] = s.sqrt();
            } else {
                let d = l[j * dim + j];
                // Zero pivot with zero residual: comonotone block, column is free.
                l[i * dim + j] = if d > 0.0 {
                    s / d
                } else if s.abs() <= 1e-10 {
                    0.0
                } else {
                    return None;
                };
            }
        }
    }
    Some(l)
}

/// Prefactored sampler for zero-mean Gaussian vectors with a fixed
/// correlation matrix; standard normal marginals.
#[derive(Debug, Clone)]
pub struct GaussianSampler {
    chol: Vec<f64>,
    dim: usize,
}

impl GaussianSampler {
    pub fn new(corr: &[f64], dim: usize) -> Result<Self> {
        Ok(Self {
            chol: cholesky_with_jitter(corr, dim)?,
            dim,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let z: Vec<f64> = (0..self.dim).map(|_| StandardNormal.sample(rng)).collect();
        let mut out = vec![0.0; self.dim];
        for i in 0..self.dim {
            let mut s = 0.0;
            for k in 0..=i {
                s += self.chol[i * self.dim + k] * z[k];
            }
            out[i] = s;
        }
        out
    }
}

/// One draw of a zero-mean Gaussian vector with the given correlation matrix.
///
/// For repeated draws with the same matrix, prefer [`GaussianSampler`].
pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, corr: &[f64], dim: usize) -> Result<Vec<f64>> {
    Ok(GaussianSampler::new(corr, dim)?.sample(rng))
}
