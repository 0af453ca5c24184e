use rand::Rng;

use super::{FieldSample, Innovation, Layer, ModelSpec, ZCoupling};
use super::schlather::SchlatherSampler;
use crate::error::{Error, Result};
use crate::stats::{frechet_cdf, frechet_sample, RngStream};
use crate::fields::spec::WEIGHT_SUM_TOL;

/// Simulate `n_rows` rows of the innovation layer X̂ over the spec's
/// locations. Row-major draw order: one row at a time, locations in spec
/// order (IndependentFrechet) or one Schlather draw per row.
pub fn simulate_innovations(spec: &ModelSpec, n_rows: usize, stream: RngStream) -> Result<FieldSample> {
    spec.validate()?;
    if n_rows < 1 {
        return Err(Error::Domain("n_rows must be >= 1".into()));
    }
    let mut rng = stream.rng();
    let values = simulate_innovation_rows(spec, n_rows, &mut rng)?;
    FieldSample::new(values, spec.clone(), stream, Layer::Innovation)
}

fn simulate_innovation_rows<R: Rng + ?Sized>(
    spec: &ModelSpec,
    n_rows: usize,
    rng: &mut R,
) -> Result<Vec<Vec<f64>>> {
    let m = spec.locations.len();
    match &spec.innovation {
        Innovation::IndependentFrechet => Ok((0..n_rows)
            .map(|_| (0..m).map(|_| frechet_sample(rng)).collect())
            .collect()),
        Innovation::Schlather(corr) => {
            let sampler = SchlatherSampler::new(&spec.locations, corr, spec.truncation)?;
            (0..n_rows).map(|_| sampler.sample(rng)).collect()
        }
    }
}

/// Moving-maxima filter `X_n(x) = max_i w_i · X̂_{n-i}(x)`.
///
/// The first q rows of `innovations` are consumed as warm-up, so the output
/// has `n_rows - q` rows and is stationary from row 1. Margins stay standard
/// Fréchet because the weights sum to 1.
pub fn moving_max(innovations: &FieldSample, weights: &[f64]) -> Result<FieldSample> {
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
        return Err(Error::Spec(format!(
            "moving-max weights must sum to 1 within {WEIGHT_SUM_TOL:.0e}, got {sum}"
        )));
    }
    let q = weights.len() - 1;
    if innovations.n_time() <= q {
        return Err(Error::Spec(format!(
            "need more than q = {q} innovation rows for warm-up, got {}",
            innovations.n_time()
        )));
    }
    let rows = innovations.rows();
    let m = innovations.n_locations();
    let values: Vec<Vec<f64>> = (q..rows.len())
        .map(|t| {
            (0..m)
                .map(|j| {
                    weights
                        .iter()
                        .enumerate()
                        .filter(|(_, &w)| w > 0.0)
                        .map(|(i, &w)| w * rows[t - i][j])
                        .fold(f64::NEG_INFINITY, f64::max)
                })
                .collect()
        })
        .collect();
    FieldSample::new(values, innovations.spec().clone(), innovations.seed(), Layer::X)
}

/// Simulate the pMAX field `Y_n(x) = X_n(x) ∨ Z_n(x)^{1/α(x)}`.
///
/// The X layer is `moving_max` applied to `simulate_innovations` with q
/// warm-up rows; the Z layer is drawn after all innovation rows, one shared
/// Fréchet draw per time index (`CommonScalar`) or one per (time, location)
/// (`IndependentPerLocation`), independent of X.
pub fn simulate_pmax(spec: &ModelSpec, n_time: usize, stream: RngStream) -> Result<FieldSample> {
    spec.validate()?;
    if n_time < 1 {
        return Err(Error::Domain("n_time must be >= 1".into()));
    }
    let q = spec.order();
    let mut rng = stream.rng();
    let innovation_rows = simulate_innovation_rows(spec, n_time + q, &mut rng)?;
    let innovations = FieldSample::new(innovation_rows, spec.clone(), stream, Layer::Innovation)?;
    let x = moving_max(&innovations, &spec.temporal_weights)?;

    let m = spec.locations.len();
    let inv_alpha: Vec<f64> = spec
        .locations
        .iter()
        .map(|loc| spec.alpha.get(&loc.id).map(|a| 1.0 / a))
        .collect::<Result<_>>()?;

    let values: Vec<Vec<f64>> = x
        .rows()
        .iter()
        .map(|x_row| {
            let z_row: Vec<f64> = match spec.z_coupling {
                ZCoupling::CommonScalar => {
                    let z = frechet_sample(&mut rng);
                    vec![z; m]
                }
                ZCoupling::IndependentPerLocation => {
                    (0..m).map(|_| frechet_sample(&mut rng)).collect()
                }
            };
            x_row
                .iter()
                .zip(&z_row)
                .zip(&inv_alpha)
                .map(|((&xv, &zv), &ia)| xv.max(zv.powf(ia)))
                .collect()
        })
        .collect();
    FieldSample::new(values, spec.clone(), stream, Layer::Y)
}

/// Pairs `(Y_n(x), Y_{n+r}(x'))` for all valid n.
pub fn lagged_pairs(
    sample: &FieldSample,
    r: usize,
    x_id: &str,
    xp_id: &str,
) -> Result<Vec<(f64, f64)>> {
    if r >= sample.n_time() {
        return Err(Error::Domain(format!(
            "lag r = {r} must be smaller than n_time = {}",
            sample.n_time()
        )));
    }
    let i = sample.spec().location_index(x_id)?;
    let j = sample.spec().location_index(xp_id)?;
    let rows = sample.rows();
    Ok((0..rows.len() - r)
        .map(|n| (rows[n][i], rows[n + r][j]))
        .collect())
}

/// Map value pairs through the standard Fréchet CDF into (0,1)², the axes
/// used by the scatter figures.
pub fn frechet_transformed_pairs(pairs: &[(f64, f64)]) -> Result<Vec<(f64, f64)>> {
    pairs
        .iter()
        .map(|&(a, b)| Ok((frechet_cdf(a)?, frechet_cdf(b)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{AlphaMap, Location};
    use crate::stats::pmax_margin_cdf;

    fn spec1(alphas: &[(&str, f64)]) -> ModelSpec {
        let locations: Vec<Location> = alphas
            .iter()
            .enumerate()
            .map(|(i, &(id, _))| Location::new(id, i as f64, 0.0))
            .collect();
        let alpha: AlphaMap = alphas
            .iter()
            .map(|&(id, a)| (id.to_string(), a))
            .collect();
        ModelSpec::independent(locations, alpha)
    }

    fn ks_distance(mut xs: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let n = xs.len() as f64;
        let mut d: f64 = 0.0;
        for (i, &x) in xs.iter().enumerate() {
            let f = cdf(x);
            d = d.max((f - i as f64 / n).abs());
            d = d.max((f - (i + 1) as f64 / n).abs());
        }
        d
    }

    #[test]
    fn innovation_columns_pass_frechet_ks() {
        let spec = spec1(&[("a", 1.0), ("b", 1.0), ("c", 1.0)]);
        let sample = simulate_innovations(&spec, 10_000, RngStream::new(1, 0)).unwrap();
        for j in 0..3 {
            let d = ks_distance(sample.column(j), |x| frechet_cdf(x).unwrap());
            assert!(d < 0.02, "column {j} KS {d}");
        }
    }

    #[test]
    fn moving_max_identity_weights() {
        let spec = spec1(&[("a", 1.0)]);
        let innov = simulate_innovations(&spec, 50, RngStream::new(2, 0)).unwrap();
        let x = moving_max(&innov, &[1.0]).unwrap();
        assert_eq!(x.rows(), innov.rows());
    }

    #[test]
    fn moving_max_hand_computation() {
        // w = (2/3, 1/3), X̂_n = 1.5, X̂_{n-1} = 3 -> X_n = max(1, 1) = 1.
        let spec = spec1(&[("a", 1.0)]);
        let innov = FieldSample::new(
            vec![vec![3.0], vec![1.5]],
            spec,
            RngStream::new(0, 0),
            Layer::Innovation,
        )
        .unwrap();
        let x = moving_max(&innov, &[2.0 / 3.0, 1.0 / 3.0]).unwrap();
        assert_eq!(x.n_time(), 1);
        assert!((x.value(0, 0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn moving_max_rejects_bad_weights() {
        let spec = spec1(&[("a", 1.0)]);
        let innov = simulate_innovations(&spec, 10, RngStream::new(3, 0)).unwrap();
        assert!(moving_max(&innov, &[0.5, 0.4]).is_err());
    }

    #[test]
    fn moving_max_margin_stays_frechet() {
        let spec = spec1(&[("a", 1.0)]);
        let innov = simulate_innovations(&spec, 100_001, RngStream::new(4, 0)).unwrap();
        let x = moving_max(&innov, &[2.0 / 3.0, 1.0 / 3.0]).unwrap();
        let d = ks_distance(x.column(0), |v| frechet_cdf(v).unwrap());
        assert!(d < 0.01, "KS {d}");
    }

    #[test]
    fn pmax_margin_law() {
        let spec = spec1(&[("a", 1.5)]);
        let y = simulate_pmax(&spec, 100_000, RngStream::new(5, 0)).unwrap();
        let d = ks_distance(y.column(0), |v| pmax_margin_cdf(v, 1.5).unwrap());
        assert!(d < 0.01, "KS {d}");
    }

    #[test]
    fn pmax_is_reproducible() {
        let spec = spec1(&[("a", 0.7), ("b", 2.0)]);
        let a = simulate_pmax(&spec, 200, RngStream::new(6, 1)).unwrap();
        let b = simulate_pmax(&spec, 200, RngStream::new(6, 1)).unwrap();
        assert_eq!(a.rows(), b.rows());
    }

    #[test]
    fn pmax_dominates_x_layer() {
        // Y is the max of X and the power layer, so Y >= X entrywise.
        let spec = spec1(&[("a", 0.5)]);
        let stream = RngStream::new(7, 0);
        let q = spec.order();
        let mut rng = stream.rng();
        let innov_rows = super::simulate_innovation_rows(&spec, 100 + q, &mut rng).unwrap();
        let innov =
            FieldSample::new(innov_rows, spec.clone(), stream, Layer::Innovation).unwrap();
        let x = moving_max(&innov, &spec.temporal_weights).unwrap();
        let y = simulate_pmax(&spec, 100, stream).unwrap();
        for t in 0..100 {
            assert!(y.value(t, 0) >= x.value(t, 0) - 1e-15);
        }
    }

    #[test]
    fn common_scalar_z_shares_the_draw() {
        // With equal alphas and a location pair, high-threshold exceedances
        // driven by the common Z hit both columns together.
        let spec = spec1(&[("a", 0.5), ("b", 0.5)]);
        let y = simulate_pmax(&spec, 50_000, RngStream::new(8, 0)).unwrap();
        let mut col0 = y.column(0);
        col0.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let q99 = col0[(0.99 * 50_000.0) as usize];
        let both = y
            .rows()
            .iter()
            .filter(|row| row[0] > q99 && row[1] > q99)
            .count() as f64;
        let first = y.rows().iter().filter(|row| row[0] > q99).count() as f64;
        assert!(both / first > 0.8, "co-exceedance ratio {}", both / first);
    }

    #[test]
    fn lagged_pairs_counts_and_diagonal() {
        let spec = spec1(&[("a", 1.0)]);
        let y = simulate_pmax(&spec, 100, RngStream::new(9, 0)).unwrap();
        let pairs = lagged_pairs(&y, 10, "a", "a").unwrap();
        assert_eq!(pairs.len(), 90);
        let diag = lagged_pairs(&y, 0, "a", "a").unwrap();
        assert!(diag.iter().all(|&(u, v)| u == v));
        assert!(lagged_pairs(&y, 100, "a", "a").is_err());
        assert!(lagged_pairs(&y, 1, "a", "zz").is_err());
    }

    #[test]
    fn transformed_pairs_live_in_unit_square() {
        let spec = spec1(&[("a", 1.0)]);
        let y = simulate_pmax(&spec, 500, RngStream::new(10, 0)).unwrap();
        let pairs = lagged_pairs(&y, 1, "a", "a").unwrap();
        for (u, v) in frechet_transformed_pairs(&pairs).unwrap() {
            assert!((0.0..1.0).contains(&u) && (0.0..1.0).contains(&v));
        }
    }

    #[test]
    fn lag_two_coexceedances_match_independence() {
        // 1-dependence: at lag 2 the co-exceedance rate at u = 0.95 equals
        // the independent rate 0.05 within Monte Carlo error.
        let spec = spec1(&[("a", 2.0)]);
        let y = simulate_pmax(&spec, 200_000, RngStream::new(11, 0)).unwrap();
        let pairs = lagged_pairs(&y, 2, "a", "a").unwrap();
        let t = frechet_transformed_pairs(&pairs).unwrap();
        // Use per-coordinate empirical 0.95 quantiles via the margin CDF.
        let thr = 0.95f64;
        let margin = |v: f64| pmax_margin_cdf(-1.0 / v.ln(), 2.0).unwrap();
        let co = t
            .iter()
            .filter(|&&(u, v)| margin(u) > thr && margin(v) > thr)
            .count() as f64;
        let cond = t.iter().filter(|&&(u, _)| margin(u) > thr).count() as f64;
        let rate = co / cond;
        // independent value 0.05, 3 sigma ~ 3*sqrt(0.05*0.95/10000)
        assert!((rate - 0.05).abs() < 0.01, "rate {rate}");
    }
}
