use serde::Serialize;

use super::{check_open_unit, complement, favourite, half_of};
use crate::error::{Error, Result};
use crate::exact::MarginDistribution;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundDirection {
    /// observed <= bound
    Upper,
    /// observed >= bound
    Lower,
}

/// A one-sided bound, optionally paired with an observed value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub bound_name: String,
    pub direction: BoundDirection,
    pub bound_value: Scalar,
    pub observed_value: Option<Scalar>,
    pub satisfied: Option<bool>,
}

impl BoundReport {
    pub fn new(name: impl Into<String>, direction: BoundDirection, bound: Scalar) -> Self {
        BoundReport {
            bound_name: name.into(),
            direction,
            bound_value: bound,
            observed_value: None,
            satisfied: None,
        }
    }

    pub fn observe(mut self, observed: Scalar) -> Self {
        let ok = match self.direction {
            BoundDirection::Upper => observed <= self.bound_value,
            BoundDirection::Lower => observed >= self.bound_value,
        };
        self.satisfied = Some(ok);
        self.observed_value = Some(observed);
        self
    }
}

/// Optional-stopping bounds for the constant regime.
///
/// Always reports `E[tau] <= 2n / (1 + |mu|)` and
/// `|E[Z]| <= n |mu| / max(p, q)`; for `p = 1/2` adds
/// `E[tau] >= 2n - s` and `E[|Z|] <= s` with `s = (sqrt(8n+1) - 1) / 2`.
/// With `dist` the reports carry the observed DP values.
pub fn martingale_bounds(n: u32, p: &Scalar, dist: Option<&MarginDistribution>) -> Result<Vec<BoundReport>> {
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    check_open_unit("p", p)?;
    if let Some(d) = dist {
        if d.n() != n {
            return Err(Error::param("dist", format!("distribution has n = {}, expected {n}", d.n())));
        }
    }
    let mode = p.mode();
    let one = Scalar::one(mode);
    let two_n = Scalar::from_u64(2 * n as u64, mode);
    let abs_mu = (p - &complement(p)).abs();
    let (max_pq, _) = favourite(p);

    let mut reports = vec![
        BoundReport::new("E[tau] <= 2n/(1+|mu|)", BoundDirection::Upper, &two_n / &(&one + &abs_mu)),
        BoundReport::new(
            "|E[Z]| <= n|mu|/max(p,q)",
            BoundDirection::Upper,
            &(&Scalar::from_u64(n as u64, mode) * &abs_mu) / &max_pq,
        ),
    ];
    let fair = p == &half_of(p);
    if fair {
        let s = (((8 * n as u64 + 1) as f64).sqrt() - 1.0) / 2.0;
        reports.push(BoundReport::new(
            "E[tau] >= 2n - (sqrt(8n+1)-1)/2",
            BoundDirection::Lower,
            Scalar::Float(2.0 * n as f64 - s),
        ));
        reports.push(BoundReport::new(
            "E[|Z|] <= (sqrt(8n+1)-1)/2",
            BoundDirection::Upper,
            Scalar::Float(s),
        ));
    }
    if let Some(d) = dist {
        let e = d.expected_values();
        let mut observed = vec![e.e_tau.clone(), e.e_z.abs()];
        if fair {
            observed.push(e.e_tau);
            observed.push(e.e_abs_z);
        }
        reports = reports.into_iter().zip(observed).map(|(r, o)| r.observe(o)).collect();
    }
    Ok(reports)
}

/// Chernoff bound `(4 lambda / (lambda + 1)^2)^n` on `P(tau_X >= tau_Y)` for
/// independent `Gamma(n, 1)` and `Gamma(n, lambda)` times.
pub fn gamma_race_bound(n: u32, lambda: &Scalar) -> Result<Scalar> {
    let ok = match lambda {
        Scalar::Exact(r) => r > &num_rational::BigRational::from_integer(0.into())
            && r <= &num_rational::BigRational::from_integer(1.into()),
        Scalar::Float(x) => *x > 0.0 && *x <= 1.0,
    };
    if !ok {
        return Err(Error::param("lambda", format!("must lie in (0, 1], got {lambda}")));
    }
    let mode = lambda.mode();
    let lp1 = lambda + &Scalar::one(mode);
    let base = &(&Scalar::from_u64(4, mode) * lambda) / &(&lp1 * &lp1);
    Ok(base.powi(n))
}

/// `2 exp(-a^2 / (4 (a + m)))`, bounding `P(|eta - m| >= a)` for `eta` a
/// negative binomial with `m` successes at probability one half.
pub fn negbin_tail_bound(m: u64, a: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::param("m", "must be at least 1"));
    }
    if !(a >= 0.0) {
        return Err(Error::param("a", format!("must be >= 0, got {a}")));
    }
    Ok(2.0 * (-a * a / (4.0 * (a + m as f64))).exp())
}
