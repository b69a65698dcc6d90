//! Comparing empirical laws with exact ones, and the CLT machinery.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::MarginDistribution;
use crate::montecarlo::SimulationSummary;
use crate::scalar::neumaier_sum;

/// Probability mass function on the integers.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct DiscreteLaw(BTreeMap<i64, f64>);

impl DiscreteLaw {
    pub fn from_pairs<I: IntoIterator<Item = (i64, f64)>>(pairs: I) -> Self {
        let mut m = BTreeMap::new();
        for (k, v) in pairs {
            *m.entry(k).or_insert(0.0) += v;
        }
        DiscreteLaw(m)
    }

    pub fn get(&self, k: i64) -> f64 {
        self.0.get(&k).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.0.iter().map(|(k, v)| (*k, *v))
    }

    pub fn total(&self) -> f64 {
        neumaier_sum(self.0.values().copied())
    }

    /// Law of `Z` under an exact distribution.
    pub fn profit_law(dist: &MarginDistribution) -> Self {
        Self::from_pairs(dist.profit_pmf().into_iter().map(|(z, p)| (z, p.to_f64())))
    }

    /// Law of `W` under an exact distribution.
    pub fn opponent_wins_law(dist: &MarginDistribution) -> Self {
        Self::from_pairs(
            dist.opponent_wins_pmf()
                .into_iter()
                .enumerate()
                .map(|(k, p)| (k as i64, p.to_f64())),
        )
    }
}

/// Relative frequencies of `Z` (equivalently of winner and `W`) from a run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmpiricalLaw {
    pub support: Vec<i64>,
    pub probs: Vec<f64>,
    pub sample_size: u64,
}

impl EmpiricalLaw {
    pub fn from_summary(summary: &SimulationSummary) -> Result<Self> {
        if summary.total == 0 {
            return Err(Error::param("summary", "no samples"));
        }
        let t = summary.total as f64;
        let (support, probs) = summary
            .profit_counts()
            .into_iter()
            .map(|(z, c)| (z, c as f64 / t))
            .unzip();
        Ok(EmpiricalLaw {
            support,
            probs,
            sample_size: summary.total,
        })
    }

    pub fn law(&self) -> DiscreteLaw {
        DiscreteLaw::from_pairs(self.support.iter().copied().zip(self.probs.iter().copied()))
    }
}

/// Half the L1 distance over the union of supports.
pub fn tv_distance(a: &DiscreteLaw, b: &DiscreteLaw) -> f64 {
    let keys: std::collections::BTreeSet<i64> = a.0.keys().chain(b.0.keys()).copied().collect();
    0.5 * neumaier_sum(keys.into_iter().map(|k| (a.get(k) - b.get(k)).abs()))
}

/// TV distance between a run's (winner, W) frequencies and an exact law.
pub fn tv_to_exact(summary: &SimulationSummary, dist: &MarginDistribution) -> Result<f64> {
    if summary.n() != dist.n() {
        return Err(Error::param("n", format!("summary has n = {}, distribution n = {}", summary.n(), dist.n())));
    }
    Ok(tv_distance(&EmpiricalLaw::from_summary(summary)?.law(), &DiscreteLaw::profit_law(dist)))
}

fn check_favourite(p: f64) -> Result<()> {
    if !(0.5..1.0).contains(&p) {
        return Err(Error::param("p", format!("must lie in [1/2, 1), got {p}")));
    }
    Ok(())
}

/// `(p z - mu n) / sqrt(n q)` for each net profit `z`.
pub fn standardize_z(profits: &[i64], n: u32, p: f64) -> Result<Vec<f64>> {
    check_favourite(p)?;
    let q = 1.0 - p;
    let mu_n = (p - q) * n as f64;
    let scale = (n as f64 * q).sqrt();
    Ok(profits.iter().map(|&z| (p * z as f64 - mu_n) / scale).collect())
}

/// `(w - lambda n) / sqrt(lambda n / p)` for each loser win count `w`, with
/// `lambda = q / p`.
pub fn standardize_w(opponent_wins: &[u32], n: u32, p: f64) -> Result<Vec<f64>> {
    check_favourite(p)?;
    let lambda = (1.0 - p) / p;
    let mean = lambda * n as f64;
    let sd = (mean / p).sqrt();
    Ok(opponent_wins.iter().map(|&w| (w as f64 - mean) / sd).collect())
}

pub fn standard_normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Kolmogorov–Smirnov distance between the samples' empirical CDF and `cdf`.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::param("samples", "need at least one sample"));
    }
    if samples.iter().any(|x| x.is_nan()) {
        return Err(Error::param("samples", "NaN sample"));
    }
    let mut xs = samples.to_vec();
    xs.sort_unstable_by(f64::total_cmp);
    let n = xs.len() as f64;
    Ok(xs.iter().enumerate().fold(0.0f64, |acc, (i, &x)| {
        let f = cdf(x);
        let above = (i as f64 + 1.0) / n - f;
        let below = f - i as f64 / n;
        acc.max(above).max(below)
    }))
}

/// KS distance when the sample is given as `(value, count)` pairs.
pub fn ks_statistic_counts<F: Fn(f64) -> f64>(values: &[(f64, u64)], cdf: F) -> Result<f64> {
    let total: u64 = values.iter().map(|(_, c)| c).sum();
    if total == 0 {
        return Err(Error::param("samples", "need at least one sample"));
    }
    let mut xs: Vec<(f64, u64)> = values.iter().copied().filter(|(_, c)| *c > 0).collect();
    xs.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
    let n = total as f64;
    let mut seen = 0u64;
    let mut d = 0.0f64;
    for (x, c) in xs {
        let f = cdf(x);
        d = d.max(f - seen as f64 / n);
        seen += c;
        d = d.max(seen as f64 / n - f);
    }
    Ok(d)
}

/// Fair-game check on `E[|Z|]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HalfProfitReport {
    pub n: u32,
    pub e_abs_z: f64,
    /// `2 sqrt(n / pi)`
    pub reference: f64,
    pub ratio: f64,
    /// `(sqrt(8n+1) - 1) / 2`
    pub martingale_bound: f64,
    pub within_bound: bool,
}

/// Compares `E[|Z|]` of a fair constant game with `2 sqrt(n/pi)` and with
/// the optional-stopping upper bound.
pub fn half_profit_check(dist: &MarginDistribution) -> HalfProfitReport {
    let n = dist.n();
    let e_abs_z = dist.expected_values().e_abs_z.to_f64();
    let reference = 2.0 * (n as f64 / std::f64::consts::PI).sqrt();
    let martingale_bound = (((8 * n as u64 + 1) as f64).sqrt() - 1.0) / 2.0;
    HalfProfitReport {
        n,
        e_abs_z,
        reference,
        ratio: e_abs_z / reference,
        martingale_bound,
        within_bound: e_abs_z <= martingale_bound,
    }
}

/// `P(|Z/n - (1 - q/p)| > eps)` under an exact distribution.
pub fn concentration_probability(dist: &MarginDistribution, p: f64, eps: f64) -> f64 {
    let n = dist.n() as f64;
    let centre = 1.0 - (1.0 - p) / p;
    neumaier_sum(
        dist.profit_pmf()
            .into_iter()
            .filter(|(z, _)| (*z as f64 / n - centre).abs() > eps)
            .map(|(_, pr)| pr.to_f64()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn tv_edge_cases() {
        let a = DiscreteLaw::from_pairs([(0, 0.5), (1, 0.5)]);
        let b = DiscreteLaw::from_pairs([(2, 0.25), (3, 0.75)]);
        assert_eq!(tv_distance(&a, &a), 0.0);
        assert_eq!(tv_distance(&a, &b), 1.0);
    }

    #[test]
    fn standardization() {
        let (n, p) = (10u32, 0.6);
        let centre = (p - (1.0 - p)) * n as f64 / p;
        let z = standardize_z(&[0], n, p).unwrap()[0];
        let shift = standardize_z(&[1], n, p).unwrap()[0] - z;
        assert!(((centre * shift + z).abs()) < 1e-12);
        let fair = standardize_z(&[3, -5], 8, 0.5).unwrap();
        assert!((fair[0] - 3.0 / 16f64.sqrt()).abs() < 1e-15);
        assert!((fair[1] + 5.0 / 16f64.sqrt()).abs() < 1e-15);
        assert!(standardize_z(&[1], 3, 0.4).is_err());
    }

    #[test]
    fn ks_on_constant_samples() {
        for c in [-1.3, 0.0, 0.7] {
            let d = ks_statistic(&[c; 10], standard_normal_cdf).unwrap();
            let f = standard_normal_cdf(c);
            assert!((d - f.max(1.0 - f)).abs() < 1e-15);
        }
        assert!(ks_statistic(&[], standard_normal_cdf).is_err());
    }

    #[test]
    fn weighted_ks_matches_expanded() {
        let pairs = [(0.3, 3u64), (-1.0, 2), (2.0, 1), (0.31, 4)];
        let expanded: Vec<f64> = pairs
            .iter()
            .flat_map(|(x, c)| std::iter::repeat(*x).take(*c as usize))
            .collect();
        let a = ks_statistic(&expanded, standard_normal_cdf).unwrap();
        let b = ks_statistic_counts(&pairs, standard_normal_cdf).unwrap();
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn normal_cdf_values() {
        assert!((standard_normal_cdf(0.0) - 0.5).abs() < 1e-16);
        let v = standard_normal_cdf(1.959963984540054);
        assert!((v - 0.975).abs() < 1e-12, "{v}");
    }

    fn law() -> impl Strategy<Value = DiscreteLaw> {
        proptest::collection::vec((-5i64..5, 0.0f64..1.0), 1..8).prop_map(|v| {
            let t: f64 = v.iter().map(|(_, w)| w).sum::<f64>().max(1e-9);
            DiscreteLaw::from_pairs(v.into_iter().map(|(k, w)| (k, w / t)))
        })
    }

    proptest! {
        #[test]
        fn tv_is_a_metric(a in law(), b in law(), c in law()) {
            let ab = tv_distance(&a, &b);
            prop_assert!((ab - tv_distance(&b, &a)).abs() < 1e-15);
            prop_assert!(ab <= tv_distance(&a, &c) + tv_distance(&c, &b) + 1e-12);
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(&ab));
        }

        #[test]
        fn ks_is_invariant_under_shared_affine_maps(xs in proptest::collection::vec(-3.0f64..3.0, 1..50), s in 0.1f64..4.0, t in -2.0f64..2.0) {
            let base = ks_statistic(&xs, standard_normal_cdf).unwrap();
            let moved: Vec<f64> = xs.iter().map(|x| s * x + t).collect();
            let moved_ks = ks_statistic(&moved, |y| standard_normal_cdf((y - t) / s)).unwrap();
            prop_assert!((base - moved_ks).abs() < 1e-9);
        }
    }
}
