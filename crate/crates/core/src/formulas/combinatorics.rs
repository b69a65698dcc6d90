use num_bigint::BigUint;
use num_traits::One;

/// `C(n, k)` by the multiplicative formula; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) after the multiplication
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, i| acc * i)
}

pub fn ln_binomial(n: u64, k: u64) -> f64 {
    statrs::function::factorial::ln_binomial(n, k)
}

/// Catalan numbers `C_0..=C_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalanTable {
    values: Vec<BigUint>,
}

impl CatalanTable {
    /// Builds `C_0..=C_m` from `C_{j+1} = C_j * 2(2j+1) / (j+2)`.
    pub fn new(m: usize) -> Self {
        let mut values = Vec::with_capacity(m + 1);
        let mut c = BigUint::one();
        values.push(c.clone());
        for j in 0..m as u64 {
            c = c * (2 * (2 * j + 1)) / (j + 2);
            values.push(c.clone());
        }
        CatalanTable { values }
    }

    /// Wraps arbitrary values, e.g. to exercise the invariant checks.
    pub fn from_values(values: Vec<BigUint>) -> Self {
        CatalanTable { values }
    }

    pub fn values(&self) -> &[BigUint] {
        &self.values
    }

    pub fn get(&self, j: usize) -> Option<&BigUint> {
        self.values.get(j)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Index of the first entry breaking `C_0 = 1` or the recurrence
    /// `C_{j+1} (j+2) = C_j 2(2j+1)`.
    pub fn first_violation(&self) -> Option<usize> {
        if self.values.first().map(|c| c.is_one()) != Some(true) {
            return Some(0);
        }
        self.values.windows(2).enumerate().find_map(|(j, w)| {
            let j = j as u64;
            (&w[1] * (j + 2) != &w[0] * (2 * (2 * j + 1))).then_some(j as usize + 1)
        })
    }
}

pub fn catalan_numbers(m: usize) -> CatalanTable {
    CatalanTable::new(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
        assert_eq!(binomial(0, 0), BigUint::from(1u32));
        assert_eq!(binomial(3, 4), BigUint::from(0u32));
        assert_eq!(binomial(60, 30), BigUint::from(118_264_581_564_861_424u64));
        assert!((ln_binomial(60, 30) - 118_264_581_564_861_424f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn catalan_prefix() {
        let t = catalan_numbers(6);
        let expect: Vec<BigUint> = [1u32, 1, 2, 5, 14, 42, 132].iter().map(|&v| v.into()).collect();
        assert_eq!(t.values(), expect.as_slice());
        assert_eq!(catalan_numbers(0).values(), &[BigUint::one()]);
    }

    #[test]
    fn catalan_matches_factorial_formula() {
        let t = catalan_numbers(60);
        for j in 0..=60u64 {
            let direct = factorial(2 * j) / (factorial(j) * factorial(j + 1));
            assert_eq!(t.values()[j as usize], direct);
        }
        assert_eq!(t.values()[10], BigUint::from(16796u32));
        assert_eq!(t.first_violation(), None);
    }

    #[test]
    fn corrupted_table_is_detected() {
        let mut v = catalan_numbers(8).values().to_vec();
        v[5] += 1u32;
        assert_eq!(CatalanTable::from_values(v).first_violation(), Some(5));
        assert_eq!(CatalanTable::from_values(vec![BigUint::from(2u32)]).first_violation(), Some(0));
    }
}
