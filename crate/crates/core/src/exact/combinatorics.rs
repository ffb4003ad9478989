use num_bigint::BigInt;
use num_traits::One;

use super::ExactError;

/// `n!`.
pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// `C(n, r)`, zero when `r < 0` or `r > n`.
pub fn binomial(n: u64, r: i64) -> BigInt {
    if r < 0 || r as u64 > n {
        return BigInt::from(0);
    }
    let r = (r as u64).min(n - r as u64);
    // Each prefix product is itself a binomial coefficient, so the division is exact.
    let mut acc = BigInt::one();
    for i in 0..r {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `n! / (parts[0]! parts[1]! ...)`; the parts must sum to `n`.
pub fn multinomial(n: u64, parts: &[u64]) -> Result<BigInt, ExactError> {
    let total: u64 = parts.iter().sum();
    if total != n {
        return Err(ExactError::PartsSum { n, sum: total });
    }
    // Product of binomials C(s_i, parts[i]) over the running sums s_i.
    let mut acc = BigInt::one();
    let mut running = 0u64;
    for &part in parts {
        running += part;
        acc *= binomial(running, part as i64);
    }
    Ok(acc)
}
