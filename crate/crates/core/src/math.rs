//! Small float helpers that work without `std`.

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub(crate) fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

/// `x^m` by repeated multiplication; the same routine is used everywhere a
/// segment length is raised to the objective count, so cached and from-scratch
/// values agree bit for bit.
#[inline]
pub(crate) fn powi(x: f64, m: usize) -> f64 {
    let mut acc = 1.0;
    for _ in 0..m {
        acc *= x;
    }
    acc
}

#[inline]
pub(crate) fn norm(v: &[f64]) -> f64 {
    sqrt(v.iter().map(|x| x * x).sum())
}

#[inline]
pub(crate) fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Binomial coefficient with overflow detection.
pub(crate) fn binomial(n: usize, k: usize) -> Option<usize> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    usize::try_from(acc).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(4, 2), Some(6));
        assert_eq!(binomial(14, 2), Some(91));
        assert_eq!(binomial(5, 0), Some(1));
        assert_eq!(binomial(5, 5), Some(1));
        assert_eq!(binomial(3, 4), Some(0));
    }

    #[test]
    fn binomial_overflow_is_detected() {
        assert_eq!(binomial(200, 100), None);
    }

    #[test]
    fn powi_matches_repeated_product() {
        assert_eq!(powi(0.5, 3), 0.125);
        assert_eq!(powi(2.0, 0), 1.0);
    }
}
