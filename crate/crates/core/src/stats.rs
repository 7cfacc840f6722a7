use statrs::distribution::{Beta, ContinuousCDF};

/// Two-sided Clopper-Pearson interval for `successes` out of `trials` at the
/// given confidence level (e.g. 0.99).
pub fn clopper_pearson(successes: u64, trials: u64, confidence: f64) -> (f64, f64) {
    assert!(trials > 0 && successes <= trials);
    let alpha = 1.0 - confidence;
    let k = successes as f64;
    let n = trials as f64;
    let lo = if successes == 0 {
        0.0
    } else {
        Beta::new(k, n - k + 1.0)
            .expect("positive shapes")
            .inverse_cdf(alpha / 2.0)
    };
    let hi = if successes == trials {
        1.0
    } else {
        Beta::new(k + 1.0, n - k)
            .expect("positive shapes")
            .inverse_cdf(1.0 - alpha / 2.0)
    };
    (lo.clamp(0.0, 1.0), hi.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::distribution::{Binomial, DiscreteCDF};

    #[test]
    fn boundary_cases() {
        let (lo, hi) = clopper_pearson(0, 10, 0.99);
        assert_eq!(lo, 0.0);
        // 1 - (0.005)^(1/10)
        assert!((hi - (1.0 - 0.005f64.powf(0.1))).abs() < 1e-9);
        let (lo, hi) = clopper_pearson(10, 10, 0.99);
        assert_eq!(hi, 1.0);
        assert!((lo - 0.005f64.powf(0.1)).abs() < 1e-9);
    }

    #[test]
    fn endpoints_solve_tail_equations() {
        for &(k, n) in &[(1u64, 20u64), (7, 20), (50, 100), (333, 1000)] {
            let (lo, hi) = clopper_pearson(k, n, 0.99);
            let upper_tail = 1.0 - Binomial::new(lo, n).unwrap().cdf(k - 1);
            let lower_tail = Binomial::new(hi, n).unwrap().cdf(k);
            assert!((upper_tail - 0.005).abs() < 1e-6, "{k}/{n}: {upper_tail}");
            assert!((lower_tail - 0.005).abs() < 1e-6, "{k}/{n}: {lower_tail}");
            let p = k as f64 / n as f64;
            assert!(lo <= p && p <= hi);
        }
    }
}
