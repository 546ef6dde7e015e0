//! Binomial confidence intervals and CI-aware trend checks.

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `successes` out of `n`.
pub fn wilson_interval(successes: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if successes as f64 == n { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

/// Standard error of a binomial proportion `p` over `n` trials.
pub fn binomial_sigma(p: f64, n: u64) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

/// An estimated rate with its interval.
pub trait Interval {
    fn estimate(&self) -> f64;
    fn lo(&self) -> f64;
    fn hi(&self) -> f64;
}

/// False only if some later point is significantly below an earlier one.
pub fn non_decreasing_ci<T: Interval>(points: &[T]) -> bool {
    points
        .iter()
        .enumerate()
        .all(|(i, a)| points[i + 1..].iter().all(|b| b.hi() >= a.lo()))
}

/// False only if some later point is significantly above an earlier one.
pub fn non_increasing_ci<T: Interval>(points: &[T]) -> bool {
    points
        .iter()
        .enumerate()
        .all(|(i, a)| points[i + 1..].iter().all(|b| b.lo() <= a.hi()))
}

/// `a <= b` unless `a` is significantly larger.
pub fn le_ci<T: Interval>(a: &T, b: &T) -> bool {
    a.lo() <= b.hi()
}
