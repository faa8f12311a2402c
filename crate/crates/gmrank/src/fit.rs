//! Algebraic-decay exponent fits for rank-probability curves.
//!
//! An ordinary least-squares line through (ln K, ln P(K)) over a chosen
//! index window; the exponent is the negated slope, the amplitude absorbs
//! the scale, and the reported uncertainty is the standard OLS slope error.

use thiserror::Error;

use crate::gmatrix::RankVector;
use crate::ranking::RankIndex;

#[derive(Debug, Error)]
pub enum FitError {
    #[error("invalid fit range [{k_min}, {k_max}] over {n} ranks")]
    InvalidRange { k_min: usize, k_max: usize, n: usize },
    #[error("fewer than 3 usable points in range ({available} available)")]
    InsufficientData { available: usize },
}

/// Result of fitting `P(K) ~ amplitude / K^exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub amplitude: f64,
    pub stderr_exponent: f64,
    /// Inclusive index range the fit was asked for.
    pub k_range: (usize, usize),
    /// Points actually used (strictly positive probabilities in range).
    pub points_used: usize,
}

/// Fits the decay of a rank-ordered probability vector over `K` in
/// `[k_min, k_max]`. Entries that are not strictly positive are skipped;
/// at least 3 usable points are required.
pub fn fit_power_law(
    v: &RankVector,
    index: &RankIndex,
    k_min: usize,
    k_max: usize,
) -> Result<PowerLawFit, FitError> {
    let probs_by_rank: Vec<f64> = index.order().iter().map(|&n| v.probability(n)).collect();
    fit_rank_probabilities(&probs_by_rank, k_min, k_max)
}

/// Same fit over probabilities already listed in rank order
/// (`probs[0]` is P(K=1)).
pub fn fit_rank_probabilities(
    probs: &[f64],
    k_min: usize,
    k_max: usize,
) -> Result<PowerLawFit, FitError> {
    let n = probs.len();
    if k_min < 1 || k_min >= k_max || k_max > n {
        return Err(FitError::InvalidRange { k_min, k_max, n });
    }
    let points: Vec<(f64, f64)> = (k_min..=k_max)
        .filter(|&k| probs[k - 1] > 0.0)
        .map(|k| ((k as f64).ln(), probs[k - 1].ln()))
        .collect();
    if points.len() < 3 {
        return Err(FitError::InsufficientData {
            available: points.len(),
        });
    }

    let m = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / m;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points
        .iter()
        .map(|p| (p.0 - mean_x) * (p.1 - mean_y))
        .sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ssr: f64 = points
        .iter()
        .map(|p| (p.1 - (intercept + slope * p.0)).powi(2))
        .sum();
    let stderr = (ssr / (m - 2.0) / sxx).sqrt();

    Ok(PowerLawFit {
        exponent: -slope,
        amplitude: intercept.exp(),
        stderr_exponent: stderr,
        k_range: (k_min, k_max),
        points_used: points.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn power_curve(c: f64, gamma: f64, n: usize) -> Vec<f64> {
        (1..=n).map(|k| c / (k as f64).powf(gamma)).collect()
    }

    #[test]
    fn recovers_exact_exponents() {
        for gamma in [0.45, 0.6, 0.85, 1.0] {
            let probs = power_curve(0.3, gamma, 10);
            let fit = fit_rank_probabilities(&probs, 1, 10).unwrap();
            assert!(
                (fit.exponent - gamma).abs() < 1e-9,
                "gamma={gamma} got {}",
                fit.exponent
            );
            assert!(fit.stderr_exponent < 1e-12);
            assert_eq!(fit.points_used, 10);
        }
    }

    #[test]
    fn recovers_zipf_slope() {
        let probs = power_curve(1.0, 1.0, 50);
        let fit = fit_rank_probabilities(&probs, 1, 10).unwrap();
        assert!((fit.exponent - 1.0).abs() < 1e-9);
        assert!((fit.amplitude - 1.0).abs() < 1e-9);
    }

    #[test]
    fn exponent_sweep_to_numerical_precision() {
        let mut gamma = 0.1;
        while gamma <= 3.0 + 1e-12 {
            let probs = power_curve(2.5, gamma, 40);
            let fit = fit_rank_probabilities(&probs, 2, 35).unwrap();
            assert!(
                (fit.exponent - gamma).abs() < 1e-9,
                "gamma={gamma} got {}",
                fit.exponent
            );
            gamma += 0.1;
        }
    }

    #[test]
    fn exponent_invariant_under_rescaling() {
        let probs = power_curve(1.0, 0.7, 20);
        let scaled: Vec<f64> = probs.iter().map(|p| p * 1e-6).collect();
        let a = fit_rank_probabilities(&probs, 1, 20).unwrap();
        let b = fit_rank_probabilities(&scaled, 1, 20).unwrap();
        assert!((a.exponent - b.exponent).abs() < 1e-12);
        assert!((b.amplitude / a.amplitude - 1e-6).abs() < 1e-18);
    }

    #[test]
    fn rejects_bad_ranges() {
        let probs = power_curve(1.0, 1.0, 10);
        assert!(matches!(
            fit_rank_probabilities(&probs, 0, 5),
            Err(FitError::InvalidRange { .. })
        ));
        assert!(matches!(
            fit_rank_probabilities(&probs, 5, 5),
            Err(FitError::InvalidRange { .. })
        ));
        assert!(matches!(
            fit_rank_probabilities(&probs, 1, 11),
            Err(FitError::InvalidRange { .. })
        ));
    }

    #[test]
    fn too_few_points_is_an_error() {
        let probs = power_curve(1.0, 1.0, 10);
        assert!(matches!(
            fit_rank_probabilities(&probs, 1, 2),
            Err(FitError::InsufficientData { available: 2 })
        ));
        // Zeros reduce the usable point count below 3.
        let sparse = vec![0.5, 0.0, 0.0, 0.25, 0.0];
        assert!(matches!(
            fit_rank_probabilities(&sparse, 1, 5),
            Err(FitError::InsufficientData { available: 2 })
        ));
    }

    #[test]
    fn fits_through_rank_index() {
        use crate::gmatrix::RankKind;
        use crate::ranking::rank_index;
        // Shuffled storage order; the index restores the decay curve.
        let decayed = power_curve(0.2, 0.85, 10);
        let mut stored = decayed.clone();
        stored.reverse();
        let v = RankVector {
            probabilities: stored,
            kind: RankKind::PageRank,
            iterations_used: 0,
            residual: 0.0,
        };
        let idx = rank_index(&v);
        let fit = fit_power_law(&v, &idx, 1, 10).unwrap();
        assert!((fit.exponent - 0.85).abs() < 1e-9);
        assert!(fit.stderr_exponent < 1e-12);
    }
}
