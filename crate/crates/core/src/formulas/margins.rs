use num_rational::BigRational;

use super::combinatorics::{binomial, ln_binomial};
use super::{check_open_unit, complement, favourite};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

fn negbin_term(n: u32, k: u64, success: &Scalar) -> Scalar {
    let fail = complement(success);
    match (success, &fail) {
        (Scalar::Exact(s), Scalar::Exact(f)) => {
            let c = BigRational::from_integer(binomial(n as u64 + k - 1, k).into());
            Scalar::Exact(c * num_traits::pow(s.clone(), n as usize) * num_traits::pow(f.clone(), k as usize))
        }
        _ => {
            let (s, f) = (success.to_f64(), fail.to_f64());
            let ln = ln_binomial(n as u64 + k - 1, k) + n as f64 * s.ln() + k as f64 * f.ln();
            Scalar::Float(ln.exp())
        }
    }
}

/// `C(n+k-1, k) theta^n (1-theta)^k`: the chance that the player winning
/// each round with probability `theta` takes the match while the opponent
/// holds `k` wins.
pub fn win_margin_pmf_exact(n: u32, k: u32, theta: &Scalar) -> Result<Scalar> {
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    if k >= n {
        return Err(Error::param("k", format!("must satisfy 0 <= k < n = {n}, got {k}")));
    }
    check_open_unit("theta", theta)?;
    Ok(negbin_term(n, k as u64, theta))
}

/// Negative binomial main term `C(n+k-1, n-1) q^k p^n` approximating
/// `P(W = k)`, with `p` the favourite's round probability. Support is all
/// `k >= 0`.
pub fn negbin_approx_pmf(n: u32, k: u64, p: &Scalar) -> Result<Scalar> {
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    check_open_unit("p", p)?;
    // the law of W is invariant under p <-> q
    let (fav, _) = favourite(p);
    Ok(negbin_term(n, k, &fav))
}

/// `(4pq)^n`, the bound on `|P(W = k) - negbin_approx_pmf(n, k, p)|`.
pub fn approx_error_bound(n: u32, p: &Scalar) -> Result<Scalar> {
    check_open_unit("p", p)?;
    let four = Scalar::from_u64(4, p.mode());
    Ok((&(&four * p) * &complement(p)).powi(n))
}
