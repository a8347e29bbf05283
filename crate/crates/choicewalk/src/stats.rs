//! Confidence intervals for the Monte Carlo estimates: Clopper–Pearson
//! for binomial proportions and the distribution-free sign-test interval
//! for medians. Both avoid normality assumptions, which matters at the
//! trial counts used interactively.

use statrs::distribution::{Beta, Binomial, ContinuousCDF, DiscreteCDF};

/// Two-sided Clopper–Pearson interval for a binomial proportion.
///
/// Exact in the coverage sense: the interval contains the true probability
/// with probability at least `confidence` for every true value.
pub fn clopper_pearson(hits: u64, trials: u64, confidence: f64) -> (f64, f64) {
    assert!(trials > 0, "trials must be positive");
    assert!(hits <= trials, "hits cannot exceed trials");
    assert!(
        confidence > 0.0 && confidence < 1.0,
        "confidence must be in (0, 1)"
    );
    let alpha = 1.0 - confidence;
    let lower = if hits == 0 {
        0.0
    } else {
        Beta::new(hits as f64, (trials - hits + 1) as f64)
            .expect("valid beta shape")
            .inverse_cdf(alpha / 2.0)
    };
    let upper = if hits == trials {
        1.0
    } else {
        Beta::new((hits + 1) as f64, (trials - hits) as f64)
            .expect("valid beta shape")
            .inverse_cdf(1.0 - alpha / 2.0)
    };
    (lower, upper)
}

/// 0-based order-statistic ranks `(lo, hi)` such that the interval
/// `[x_(lo), x_(hi)]` of the sorted sample covers the population median
/// with probability at least `confidence` (sign-test interval).
///
/// Picks the symmetric interval with the largest `lo` still meeting the
/// coverage; when even the full range cannot (tiny samples), returns the
/// full range.
pub fn median_ci_ranks(m: usize, confidence: f64) -> (usize, usize) {
    assert!(m > 0, "sample must be nonempty");
    assert!(
        confidence > 0.0 && confidence < 1.0,
        "confidence must be in (0, 1)"
    );
    let alpha = 1.0 - confidence;
    let bin = Binomial::new(0.5, m as u64).expect("valid binomial");
    // Largest l with Pr[B <= l - 1] <= alpha/2, B ~ Binomial(m, 1/2);
    // the interval [x_(l), x_(m+1-l)] (1-based) then has coverage
    // 1 - 2 Pr[B <= l - 1] >= confidence.
    if bin.cdf(0) > alpha / 2.0 {
        return (0, m - 1);
    }
    let (mut lo, mut hi) = (1usize, m / 2);
    while lo < hi {
        let mid = (lo + hi + 1) / 2;
        if bin.cdf((mid - 1) as u64) <= alpha / 2.0 {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    (lo - 1, m - lo)
}

/// Index of the lower median in a sorted sample: the smallest value `t`
/// with empirical CDF at least 1/2.
pub fn lower_median_index(m: usize) -> usize {
    assert!(m > 0, "sample must be nonempty");
    m.div_ceil(2) - 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clopper_pearson_edges_and_symmetry() {
        let (lo, hi) = clopper_pearson(0, 100, 0.99);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.08);
        let (lo, hi) = clopper_pearson(100, 100, 0.99);
        assert!(lo > 0.92 && lo < 1.0);
        assert_eq!(hi, 1.0);
        let (lo, hi) = clopper_pearson(50, 100, 0.99);
        assert!(lo < 0.5 && hi > 0.5);
        assert!((lo + hi - 1.0).abs() < 1e-9, "symmetric at k = n/2");
    }

    #[test]
    fn clopper_pearson_tightens_with_trials() {
        let (lo1, hi1) = clopper_pearson(500, 1000, 0.99);
        let (lo2, hi2) = clopper_pearson(50_000, 100_000, 0.99);
        assert!(hi2 - lo2 < hi1 - lo1);
        assert!(hi2 - lo2 < 0.009);
    }

    #[test]
    fn median_ranks_cover_the_center() {
        let (lo, hi) = median_ci_ranks(1000, 0.99);
        assert!(lo < 500 && hi >= 500);
        assert_eq!(lo, 1000 - 1 - hi, "symmetric interval");
        // n=1000, 99%: the sign-test interval is roughly 500 +/- 41.
        assert!(lo > 440 && lo < 480);
        // Tiny samples fall back to the full range.
        assert_eq!(median_ci_ranks(5, 0.99), (0, 4));
    }

    #[test]
    fn median_ranks_meet_the_coverage_exactly() {
        for m in [100usize, 257, 1000] {
            let (lo, hi) = median_ci_ranks(m, 0.99);
            let bin = Binomial::new(0.5, m as u64).unwrap();
            let tail = bin.cdf(lo as u64);
            assert!(2.0 * tail <= 0.01 + 1e-12);
            // One rank tighter would break the coverage.
            let tighter = bin.cdf((lo + 1) as u64);
            assert!(2.0 * tighter > 0.01);
            assert_eq!(hi, m - 1 - lo);
        }
    }

    #[test]
    fn lower_median_indices() {
        assert_eq!(lower_median_index(1), 0);
        assert_eq!(lower_median_index(2), 0);
        assert_eq!(lower_median_index(3), 1);
        assert_eq!(lower_median_index(4), 1);
        assert_eq!(lower_median_index(5), 2);
    }
}
