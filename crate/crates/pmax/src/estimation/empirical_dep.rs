//! Rank-based finite-level estimators of the two dependence coefficients,
//! used to sanity-check simulated pairs against the closed forms.

use crate::error::{Error, Result};

/// Finite-level tail dependence estimate at quantile level u.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmpiricalLambda {
    pub value: f64,
    /// Number of conditioning exceedances behind the ratio.
    pub n_exceed: usize,
    /// Fewer than 20 conditioning exceedances: the ratio is noisy.
    pub low_count: bool,
}

fn ranks(values: &[f64]) -> Vec<usize> {
    // 1-based ranks; ties broken by original index (values are draws from
    // continuous laws, so ties carry no mass).
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap().then(a.cmp(&b)));
    let mut r = vec![0usize; values.len()];
    for (rank0, &idx) in order.iter().enumerate() {
        r[idx] = rank0 + 1;
    }
    r
}

/// `#{both ranks > u·n} / #{first rank > u·n}` on separately ranked
/// coordinates. Rank-based, hence invariant under strictly increasing
/// transformations of either coordinate.
pub fn empirical_lambda(pairs: &[(f64, f64)], u: f64) -> Result<EmpiricalLambda> {
    if pairs.len() < 100 {
        return Err(Error::Estimation(format!(
            "need at least 100 pairs for a tail ratio, got {}",
            pairs.len()
        )));
    }
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::Domain(format!("quantile level u must be in (0, 1), got {u}")));
    }
    let n = pairs.len();
    let firsts: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let seconds: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let r1 = ranks(&firsts);
    let r2 = ranks(&seconds);
    let cut = u * n as f64;
    let mut n_exceed = 0usize;
    let mut n_both = 0usize;
    for i in 0..n {
        if r1[i] as f64 > cut {
            n_exceed += 1;
            if r2[i] as f64 > cut {
                n_both += 1;
            }
        }
    }
    if n_exceed == 0 {
        return Err(Error::Estimation(format!(
            "no conditioning exceedances above level u = {u}"
        )));
    }
    Ok(EmpiricalLambda {
        value: n_both as f64 / n_exceed as f64,
        n_exceed,
        low_count: n_exceed < 20,
    })
}

/// Hill-type estimate of the residual dependence coefficient from the
/// structure variable `min(1/(1−F̂₁), 1/(1−F̂₂))` with rank-based marginal
/// CDFs `rank/(n+1)`, averaged over the top `tail_fraction` order
/// statistics and clamped to (0, 1].
pub fn empirical_eta(pairs: &[(f64, f64)], tail_fraction: f64) -> Result<f64> {
    if pairs.len() < 1000 {
        return Err(Error::Estimation(format!(
            "need at least 1000 pairs for a Hill fit, got {}",
            pairs.len()
        )));
    }
    if !(tail_fraction > 0.0 && tail_fraction <= 0.2) {
        return Err(Error::Domain(format!(
            "tail_fraction must be in (0, 0.2], got {tail_fraction}"
        )));
    }
    let n = pairs.len();
    let firsts: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let seconds: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let r1 = ranks(&firsts);
    let r2 = ranks(&seconds);
    let mut t: Vec<f64> = (0..n)
        .map(|i| {
            let f1 = r1[i] as f64 / (n + 1) as f64;
            let f2 = r2[i] as f64 / (n + 1) as f64;
            (1.0 / (1.0 - f1)).min(1.0 / (1.0 - f2))
        })
        .collect();
    t.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let m = ((tail_fraction * n as f64).floor() as usize).max(1);
    let pivot = t[m];
    if t[0] <= pivot {
        return Err(Error::Estimation(
            "degenerate tail: top order statistics of the structure variable are tied".into(),
        ));
    }
    let hill = t[..m].iter().map(|v| (v / pivot).ln()).sum::<f64>() / m as f64;
    if !(hill > 0.0) {
        return Err(Error::Estimation(format!("Hill estimate {hill} is not positive")));
    }
    Ok(hill.min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::{frechet_sample, RngStream};

    fn independent_pairs(n: usize, seed: u64) -> Vec<(f64, f64)> {
        let mut rng = RngStream::new(seed, 0).rng();
        (0..n)
            .map(|_| (frechet_sample(&mut rng), frechet_sample(&mut rng)))
            .collect()
    }

    #[test]
    fn comonotone_lambda_is_one() {
        let pairs: Vec<(f64, f64)> = independent_pairs(5_000, 1)
            .into_iter()
            .map(|(a, _)| (a, a))
            .collect();
        for &u in &[0.9, 0.95, 0.99] {
            assert_eq!(empirical_lambda(&pairs, u).unwrap().value, 1.0);
        }
    }

    #[test]
    fn independent_lambda_matches_finite_level_value() {
        let pairs = independent_pairs(1_000_000, 2);
        let est = empirical_lambda(&pairs, 0.99).unwrap();
        assert!((est.value - 0.01).abs() < 0.003, "lambda {}", est.value);
        assert!(!est.low_count);
    }

    #[test]
    fn lambda_is_rank_invariant() {
        let pairs = independent_pairs(10_000, 3);
        let transformed: Vec<(f64, f64)> = pairs
            .iter()
            .map(|&(a, b)| (a.ln(), b.powf(0.3)))
            .collect();
        let e1 = empirical_lambda(&pairs, 0.95).unwrap();
        let e2 = empirical_lambda(&transformed, 0.95).unwrap();
        assert_eq!(e1.value, e2.value);
    }

    #[test]
    fn lambda_input_validation() {
        let pairs = independent_pairs(50, 4);
        assert!(empirical_lambda(&pairs, 0.9).is_err());
        let pairs = independent_pairs(200, 4);
        assert!(empirical_lambda(&pairs, 1.0).is_err());
        assert!(empirical_lambda(&pairs, 0.999).unwrap().low_count);
    }

    #[test]
    fn independent_eta_is_near_half() {
        let eta = empirical_eta(&independent_pairs(100_000, 5), 0.05).unwrap();
        assert!((eta - 0.5).abs() < 0.05, "eta {eta}");
    }

    #[test]
    fn comonotone_eta_is_near_one() {
        let pairs: Vec<(f64, f64)> = independent_pairs(100_000, 6)
            .into_iter()
            .map(|(a, _)| (a, a))
            .collect();
        let eta = empirical_eta(&pairs, 0.05).unwrap();
        assert!((eta - 1.0).abs() < 0.05, "eta {eta}");
    }

    #[test]
    fn gaussian_eta_tracks_correlation() {
        // rho = 0.5 bivariate normal pairs; rank-based, so no margin
        // transform is needed.
        let mut rng = RngStream::new(7, 0).rng();
        let sampler = crate::stats::GaussianSampler::new(&[1.0, 0.5, 0.5, 1.0], 2).unwrap();
        let pairs: Vec<(f64, f64)> = (0..100_000)
            .map(|_| {
                let v = sampler.sample(&mut rng);
                (v[0], v[1])
            })
            .collect();
        let eta = empirical_eta(&pairs, 0.05).unwrap();
        assert!((eta - 0.75).abs() < 0.07, "eta {eta}");
    }

    #[test]
    fn eta_input_validation() {
        let pairs = independent_pairs(500, 8);
        assert!(empirical_eta(&pairs, 0.05).is_err());
        let pairs = independent_pairs(2_000, 8);
        assert!(empirical_eta(&pairs, 0.5).is_err());
        assert!(empirical_eta(&pairs, 0.0).is_err());
    }
}
