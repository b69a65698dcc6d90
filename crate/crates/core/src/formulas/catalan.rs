use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;

use super::combinatorics::CatalanTable;
use super::{check_open_unit, complement, half_of};
use crate::error::{Error, Result};
use crate::scalar::{neumaier_sum, Scalar};

/// `E[Z]` for the constant regime as `n mu sum_{j<n} C_j (pq)^j`.
pub fn expected_profit_catalan(n: u32, p: &Scalar) -> Result<Scalar> {
    let table = CatalanTable::new(n.saturating_sub(1) as usize);
    expected_profit_with_table(&table, n, p)
}

/// Same as [`expected_profit_catalan`] but reading Catalan numbers from
/// `table`, which must hold at least `n` entries.
pub fn expected_profit_with_table(table: &CatalanTable, n: u32, p: &Scalar) -> Result<Scalar> {
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    check_open_unit("p", p)?;
    if table.len() < n as usize {
        return Err(Error::param("table", format!("needs {n} Catalan numbers, has {}", table.len())));
    }
    if p < &half_of(p) {
        return Ok(-expected_profit_with_table(table, n, &complement(p))?);
    }
    let coeffs = &table.values()[..n as usize];
    Ok(match p {
        Scalar::Exact(r) => {
            let q = BigRational::from_integer(1.into()) - r;
            let mu = r - &q;
            let z = r * &q;
            // z = a / d
            let a = z.numer().clone();
            let d = z.denom().clone();
            let sum = horner_rational(coeffs, &a, &d);
            Scalar::Exact(BigRational::from_integer((n as i64).into()) * mu * sum)
        }
        Scalar::Float(x) => {
            let z = x * (1.0 - x);
            let mu = 2.0 * x - 1.0;
            let mut term = 1.0f64;
            let terms = (0..n as u64).map(|j| {
                let t = term;
                term *= z * (2 * (2 * j + 1)) as f64 / (j + 2) as f64;
                t
            });
            Scalar::Float(n as f64 * mu * neumaier_sum(terms))
        }
    })
}

/// `sum_j c_j (a/d)^j` as a reduced rational.
fn horner_rational(coeffs: &[BigUint], a: &BigInt, d: &BigInt) -> BigRational {
    // Horner in a with the d powers folded in: sum c_j a^j d^(top-j)
    let mut acc = BigInt::zero();
    let mut dpow = BigInt::from(1);
    for c in coeffs.iter().rev() {
        acc = acc * a + BigInt::from(c.clone()) * &dpow;
        dpow *= d;
    }
    let top = coeffs.len().saturating_sub(1) as u32;
    BigRational::new(acc, d.pow(top))
}

/// Partial sum `sum_{j<n} C_j 4^-j` of the Catalan generating function at
/// `z = 1/4`; increases to 2.
pub fn catalan_partial_sum_limit_check(n: u32) -> f64 {
    let mut term = 1.0f64;
    let terms = (0..n as u64).map(|j| {
        let t = term;
        term *= (2 * (2 * j + 1)) as f64 / (4 * (j + 2)) as f64;
        t
    });
    neumaier_sum(terms)
}
