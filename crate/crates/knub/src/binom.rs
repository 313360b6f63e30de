//! Exact binomial coefficients in integer arithmetic.
//!
//! Threshold comparisons in the reduction and the clique-count bound on k
//! must never be approximated; a float rounding error at large k would
//! silently corrupt the search. Everything here is exact `u128` work.

/// C(n, k), or `None` if the value overflows `u128`.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k {
        // Multiply before dividing; the running product is always an exact
        // binomial, so the division by i is exact.
        acc = acc.checked_mul((n - k + i) as u128)?;
        acc /= i as u128;
    }
    Some(acc)
}

/// C(n, k) <= cap, treating overflow as "larger than any cap".
pub fn binomial_at_most(n: u64, k: u64, cap: u128) -> bool {
    match binomial(n, k) {
        Some(v) => v <= cap,
        None => false,
    }
}

/// C(n, k) clamped into `u64`. Participation counts are `u64`, so a
/// saturated threshold compares correctly: nothing can reach it.
pub fn binomial_saturating_u64(n: u64, k: u64) -> u64 {
    match binomial(n, k) {
        Some(v) if v <= u64::MAX as u128 => v as u64,
        _ => u64::MAX,
    }
}
