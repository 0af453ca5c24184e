//! Elementary distributions, empirical CDFs, seedable random streams and
//! Gaussian vector sampling shared by the simulators and estimators.

mod correlation;
mod empirical;
mod frechet;
mod gaussian;
mod rng;

pub use correlation::CorrelationModel;
pub use empirical::{percentile, EmpiricalCdf};
pub use frechet::{frechet_cdf, frechet_quantile, frechet_sample, pmax_margin_cdf};
pub use gaussian::{cholesky_with_jitter, gaussian_vector, GaussianSampler};
pub use rng::{uniform_open01, RngStream};
