use num_traits::Float;

use crate::error::{Error, Result};

/// Powered exponential correlation `ρ(h) = exp(-(h/c2)^ν)` with range
/// parameter `c2 > 0` and smoothness `ν ∈ (0, 2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationModel<F = f64> {
    c2: F,
    nu: F,
}

impl<F: Float> CorrelationModel<F> {
    pub fn powered_exponential(c2: F, nu: F) -> Result<Self> {
        if !(c2 > F::zero()) {
            return Err(Error::Spec("correlation range c2 must be > 0".into()));
        }
        if !(nu > F::zero() && nu <= F::from(2.0).unwrap()) {
            return Err(Error::Spec("correlation smoothness nu must be in (0, 2]".into()));
        }
        Ok(Self { c2, nu })
    }

    /// `ρ(h)` for `h ≥ 0`; negative lags are rejected by debug assertion.
    pub fn rho(&self, h: F) -> F {
        debug_assert!(h >= F::zero());
        (-(h / self.c2).powf(self.nu)).exp()
    }

    pub fn c2(&self) -> F {
        self.c2
    }

    pub fn nu(&self) -> F {
        self.nu
    }
}

impl Default for CorrelationModel<f64> {
    /// `ρ(h) = exp(-h)`, the default parametrization.
    fn default() -> Self {
        Self { c2: 1.0, nu: 1.0 }
    }
}
