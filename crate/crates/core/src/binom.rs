//! Binomial coefficients with the `C(n, -1) = 0` convention.

use num_bigint::BigInt;

/// `C(n, k)` for signed `k`; zero outside `0..=n`.
pub fn binomial(n: i64, k: i64) -> u64 {
    if n < 0 || k < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial overflows u64")
}

pub fn binomial_big(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Number of full-rank `i`-subsets of `[v]`, `C(v, i) - C(v, i - 1)`;
/// zero when negative (`i > v/2`).
pub fn level_count(v: u32, i: i64) -> usize {
    let a = binomial(v as i64, i);
    let b = binomial(v as i64, i - 1);
    a.saturating_sub(b) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pascal() {
        for n in 0..40i64 {
            for k in 1..n {
                assert_eq!(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
                assert_eq!(BigInt::from(binomial(n, k)), binomial_big(n, k));
            }
        }
        assert_eq!(binomial(5, -1), 0);
        assert_eq!(binomial(5, 6), 0);
        assert_eq!(binomial(8, 2), 28);
    }

    #[test]
    fn levels() {
        let counts: Vec<usize> = (0..=4).map(|r| level_count(8, r)).collect();
        assert_eq!(counts, vec![1, 7, 20, 28, 14]);
        assert_eq!(level_count(6, 4), 0);
    }
}
