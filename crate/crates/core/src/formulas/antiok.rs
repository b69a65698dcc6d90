use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::scalar::{Scalar, ScalarMode};

/// Anti-OK Corral: probability that a given player wins the match while
/// the opponent holds `n - k` wins, `n (2n-1-k)! n! / ((2n)! (n-k)!)`.
///
/// Exact mode multiplies out the factorial ratios; float mode goes through
/// log-gamma so that `n` in the tens of thousands is cheap.
pub fn antiok_exact_prob(n: u32, k: u32, mode: ScalarMode) -> Result<Scalar> {
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    if k == 0 || k > n {
        return Err(Error::param("k", format!("must satisfy 1 <= k <= n = {n}, got {k}")));
    }
    let (n64, k64) = (n as u64, k as u64);
    Ok(match mode {
        ScalarMode::Exact => {
            // n!/(n-k)! = n (n-1) ... (n-k+1);  (2n)!/(2n-1-k)! = 2n (2n-1) ... (2n-k)
            let falling = |top: u64, len: u64| (0..len).fold(BigUint::one(), |acc, i| acc * (top - i));
            let num = falling(n64, k64) * n64;
            let den = falling(2 * n64, k64 + 1);
            Scalar::Exact(BigRational::new(num.into(), den.into()))
        }
        ScalarMode::Float => {
            let (n, k) = (n as f64, k as f64);
            let ln = n.ln() + ln_gamma(2.0 * n - k) + ln_gamma(n + 1.0)
                - ln_gamma(2.0 * n + 1.0)
                - ln_gamma(n - k + 1.0);
            Scalar::Float(ln.exp())
        }
    })
}

/// Large-`n` limit `2^-(k+1)` of [`antiok_exact_prob`].
pub fn antiok_limit_pmf(k: u32) -> Result<Scalar> {
    if k == 0 {
        return Err(Error::param("k", "must be at least 1"));
    }
    Ok(Scalar::Exact(BigRational::new(
        1.into(),
        num_bigint::BigInt::from(2).pow(k + 1),
    )))
}
