//! Brute-force big-integer checks of the two binomial identities behind the
//! Catalan form of `E[Z]`, and of the expansion of
//! `A_m = (p^m - q^m) / (p - q)` in powers of `-pq`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::combinatorics::{binomial, CatalanTable};
use crate::error::{Error, Result};

fn sign(k: u64) -> BigInt {
    if k % 2 == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

fn binom(n: u64, k: u64) -> BigInt {
    binomial(n, k).into()
}

/// `sum_{k=0}^m (-1)^k C(a+k, a) C(b, m-k) = (-1)^m C(a-b+m, m)`.
///
/// Returns `None` outside the hypothesis `a >= b + m`.
pub fn verify_identity_ident(a: u64, b: u64, m: u64) -> Option<bool> {
    if a < b + m {
        return None;
    }
    let lhs: BigInt = (0..=m)
        .map(|k| sign(k) * binom(a + k, a) * binom(b, m - k))
        .sum();
    let rhs = sign(m) * binom(a - b + m, m);
    Some(lhs == rhs)
}

/// `sum_{k=0}^j C(n-1+k, k) C(n-1-j, j-k) (-1)^k (n-k) = (-1)^j n C_j`
/// for `0 <= j <= n-1`.
pub fn verify_identity_lemmain(n: u64, j: u64) -> Result<bool> {
    if n == 0 || j >= n {
        return Err(Error::param("j", format!("must satisfy 0 <= j < n = {n}, got {j}")));
    }
    let table = CatalanTable::new(j as usize);
    Ok(lemmain_against(&table, n, j))
}

pub(crate) fn lemmain_against(table: &CatalanTable, n: u64, j: u64) -> bool {
    let lhs: BigInt = (0..=j)
        .map(|k| binom(n - 1 + k, k) * binom(n - 1 - j, j - k) * sign(k) * BigInt::from(n - k))
        .sum();
    match table.get(j as usize) {
        Some(c) => lhs == sign(j) * BigInt::from(n) * BigInt::from(c.clone()),
        None => false,
    }
}

/// Checks `A_m = sum_i C(m-1-i, i) (-z)^i`, `z = pq`, for one `m >= 1`.
/// Needs `p != 1/2`.
pub fn verify_a_m_expansion(p: &BigRational, m: u64) -> Result<bool> {
    let one = BigRational::one();
    let q = &one - p;
    if p <= &BigRational::zero() || p >= &one {
        return Err(Error::param("p", format!("must lie in (0, 1), got {p}")));
    }
    if p == &q {
        return Err(Error::param("p", "A_m is 0/0 at p = 1/2"));
    }
    if m == 0 {
        return Err(Error::param("m", "must be at least 1"));
    }
    let direct = (num_traits::pow(p.clone(), m as usize) - num_traits::pow(q.clone(), m as usize)) / (p - &q);
    let minus_z = -(p * &q);
    let series: BigRational = (0..=(m - 1) / 2)
        .map(|i| {
            BigRational::from_integer(binom(m - 1 - i, i)) * num_traits::pow(minus_z.clone(), i as usize)
        })
        .sum();
    Ok(direct == series)
}
