//! Exact binomial coefficients.

use crate::error::{Error, Result};

/// Exact `binom(a, b)`, zero whenever `b < 0` or `a < b`.
///
/// Values that do not fit a `u64` are reported as [`Error::Overflow`].
pub fn binomial(a: i64, b: i64) -> Result<u64> {
    if b < 0 || a < b {
        return Ok(0);
    }
    // a >= b >= 0 from here on.
    let b_small = b.min(a - b) as u128;
    let a = a as u128;
    let mut acc: u128 = 1;
    for i in 0..b_small {
        // acc = binom(a, i) and binom(a, i) <= binom(a, b_small) for i <= b_small,
        // so the product only leaves u128 when the result leaves u64.
        acc = acc.checked_mul(a - i).ok_or(Error::Overflow(a as i64, b))? / (i + 1);
        if acc > u64::MAX as u128 {
            return Err(Error::Overflow(a as i64, b));
        }
    }
    Ok(acc as u64)
}

/// The size of a star in `[n]^(r)_k`, `binom(n - kr - 1, r - 1)`.
pub fn star_bound(n: u32, k: u32, r: u32) -> Result<u64> {
    let (n, k, r) = (n as i64, k as i64, r as i64);
    binomial(n - k * r - 1, r - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(binomial(4, 1).unwrap(), 4);
        assert_eq!(binomial(1, 1).unwrap(), 1);
        assert_eq!(binomial(0, 0).unwrap(), 1);
        assert_eq!(binomial(10, 3).unwrap(), 120);
        assert_eq!(binomial(64, 32).unwrap(), 1_832_624_140_942_590_534);
    }

    #[test]
    fn zero_outside_triangle() {
        assert_eq!(binomial(3, 4).unwrap(), 0);
        assert_eq!(binomial(3, -1).unwrap(), 0);
        assert_eq!(binomial(-2, 1).unwrap(), 0);
        assert_eq!(binomial(1, 2).unwrap(), 0);
    }

    #[test]
    fn pascal_step_for_the_bound() {
        // (n, k, r) = (10, 1, 3): binom(5,1) + binom(5,2) = binom(6,2)
        let lhs = binomial(5, 1).unwrap() + binomial(5, 2).unwrap();
        assert_eq!(lhs, 5 + 10);
        assert_eq!(lhs, binomial(6, 2).unwrap());
        assert_eq!(star_bound(10, 1, 3).unwrap(), 15);
        // (n, k, r) = (12, 1, 4): binom(6,2) + binom(6,3) = 15 + 20 = binom(7,3)
        assert_eq!(binomial(6, 2).unwrap() + binomial(6, 3).unwrap(), 35);
        assert_eq!(star_bound(12, 1, 4).unwrap(), 35);
    }

    #[test]
    fn overflow_is_reported() {
        assert_eq!(binomial(70, 35), Err(Error::Overflow(70, 35)));
        assert_eq!(binomial(67, 33).unwrap(), 14_226_520_737_620_288_370);
        assert!(binomial(68, 34).is_err());
        assert!(binomial(66, 1).is_ok());
        assert_eq!(binomial(200, 199).unwrap(), 200);
    }

    #[test]
    fn pascal_identity_up_to_64() {
        for a in 1..=64i64 {
            for b in 0..=a {
                let lhs = binomial(a - 1, b - 1).unwrap() + binomial(a - 1, b).unwrap();
                assert_eq!(lhs, binomial(a, b).unwrap(), "a={a} b={b}");
            }
        }
    }
}
