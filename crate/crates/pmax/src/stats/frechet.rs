use num_traits::Float;
use rand::Rng;

use super::uniform_open01;
use crate::error::{Error, Result};

/// Standard Fréchet distribution function `F(z) = exp(-1/z)`, `z > 0`.
pub fn frechet_cdf<F: Float>(z: F) -> Result<F> {
    if z <= F::zero() {
        return Err(Error::Domain(format!(
            "frechet_cdf requires z > 0, got {}",
            z.to_f64().unwrap_or(f64::NAN)
        )));
    }
    Ok((-z.recip()).exp())
}

/// Standard Fréchet quantile `F^{-1}(p) = -1/ln p`, `p ∈ (0, 1)`.
pub fn frechet_quantile<F: Float>(p: F) -> Result<F> {
    if p <= F::zero() || p >= F::one() {
        return Err(Error::Domain(format!(
            "frechet_quantile requires p in (0,1), got {}",
            p.to_f64().unwrap_or(f64::NAN)
        )));
    }
    Ok(-p.ln().recip())
}

/// One standard Fréchet draw by inverse transform `-1/ln U`.
pub fn frechet_sample<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    -1.0 / uniform_open01(rng).ln()
}

/// Marginal distribution function of a pMAX variable,
/// `P(Y ≤ z) = exp(-1/z - z^{-α})`, `z > 0`, `α > 0`.
pub fn pmax_margin_cdf<F: Float>(z: F, alpha: F) -> Result<F> {
    if z <= F::zero() || alpha <= F::zero() {
        return Err(Error::Domain(
            "pmax_margin_cdf requires z > 0 and alpha > 0".into(),
        ));
    }
    Ok((-z.recip() - z.powf(-alpha)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::RngStream;
    use approx::assert_relative_eq;

    #[test]
    fn cdf_reference_points() {
        assert_relative_eq!(frechet_cdf(1.0f64).unwrap(), (-1.0f64).exp(), max_relative = 1e-15);
        // median at 1/ln 2
        assert_relative_eq!(frechet_cdf(1.0 / 2.0f64.ln()).unwrap(), 0.5, max_relative = 1e-14);
        // monotone limit
        assert!(frechet_cdf(1e12f64).unwrap() > 1.0 - 1e-11);
    }

    #[test]
    fn cdf_rejects_nonpositive() {
        assert!(frechet_cdf(0.0f64).is_err());
        assert!(frechet_cdf(-3.0f64).is_err());
    }

    #[test]
    fn quantile_round_trip() {
        let mut p = 0.001f64;
        while p < 0.999 {
            let z = frechet_quantile(p).unwrap();
            assert_relative_eq!(frechet_cdf(z).unwrap(), p, max_relative = 1e-12);
            p += 0.007;
        }
    }

    #[test]
    fn works_in_f32() {
        let c: f32 = frechet_cdf(1.0f32).unwrap();
        assert!((c - (-1.0f32).exp()).abs() < 1e-6);
    }

    #[test]
    fn inverse_transform_identity() {
        // U = e^{-1} maps to a sample of exactly 1.
        let z = -1.0 / (-1.0f64).exp().ln();
        assert_relative_eq!(z, 1.0, max_relative = 1e-15);
    }

    #[test]
    fn sampler_matches_cdf_by_ks() {
        let mut rng = RngStream::new(1234, 0).rng();
        let n = 100_000usize;
        let mut xs: Vec<f64> = (0..n).map(|_| frechet_sample(&mut rng)).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut d: f64 = 0.0;
        for (i, &x) in xs.iter().enumerate() {
            let f = frechet_cdf(x).unwrap();
            d = d.max((f - i as f64 / n as f64).abs());
            d = d.max((f - (i + 1) as f64 / n as f64).abs());
        }
        // 1.36/sqrt(n) ≈ 0.0043; spec tolerance 0.01
        assert!(d < 0.01, "KS distance {d}");
    }

    #[test]
    fn fixed_stream_repeats() {
        let draw = |seed, id| {
            let mut r = RngStream::new(seed, id).rng();
            (0..32).map(|_| frechet_sample(&mut r)).collect::<Vec<_>>()
        };
        assert_eq!(draw(5, 9), draw(5, 9));
    }

    #[test]
    fn pmax_margin_matches_product_form() {
        let z = 2.5f64;
        let a = 1.5f64;
        let lhs = pmax_margin_cdf(z, a).unwrap();
        let rhs = frechet_cdf(z).unwrap() * (-z.powf(-a)).exp();
        assert_relative_eq!(lhs, rhs, max_relative = 1e-14);
    }
}
