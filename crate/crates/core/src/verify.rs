//! Verification suites: every closed form and bound cross-checked against the
//! DP engine, the quadrature and Monte Carlo.
//!
//! Each check reports an observed value against a threshold. For exact
//! comparisons the observed value is the number of mismatches and the
//! threshold is zero.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{exact_distribution, DpOptions, MarginDistribution};
use crate::formulas::{
    antiok_exact_prob, antiok_limit_pmf, approx_error_bound, expected_profit_with_table, gamma_race_bound,
    martingale_bounds, negbin_approx_pmf, negbin_tail_bound, verify_a_m_expansion, verify_identity_ident,
    lemmain_against, CatalanTable,
};
use crate::game::{Player, Regime};
use crate::montecarlo::{
    block_rng, gamma_race_sample, negbin_direct_sample, run, SamplerKind, SimulationPlan, SimulationSummary,
};
use crate::polya::{polya_symmetric_expected_profit, polya_win_probability, zeta_total_mass, DEFAULT_TOL};
use crate::scalar::{Scalar, ScalarMode};
use crate::stats::{
    concentration_probability, half_profit_check, ks_statistic_counts, standard_normal_cdf, tv_distance, tv_to_exact,
    DiscreteLaw, EmpiricalLaw,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Identities,
    Bounds,
    Oracle,
    Clt,
    Polya,
    Antiok,
    All,
}

impl Suite {
    pub const EACH: [Suite; 6] = [
        Suite::Identities,
        Suite::Bounds,
        Suite::Oracle,
        Suite::Clt,
        Suite::Polya,
        Suite::Antiok,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Bounds => "bounds",
            Suite::Oracle => "oracle",
            Suite::Clt => "clt",
            Suite::Polya => "polya",
            Suite::Antiok => "antiok",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse {
                input: s.to_string(),
                reason: "expected identities, bounds, oracle, clt, polya, antiok or all".into(),
            })
    }
}

/// Problem sizes: `Full` runs at acceptance scale, `Quick` at a fraction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Quick,
    #[default]
    Full,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOptions {
    pub scale: Scale,
    pub seed: u64,
    /// Replaces the Catalan numbers used by the Catalan-mean and lemma
    /// checks. Only meant for testing that the suites catch bad tables.
    pub catalan: Option<CatalanTable>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            scale: Scale::Full,
            seed: 20_240_601,
            catalan: None,
        }
    }
}

impl VerifyOptions {
    fn table(&self, m: usize) -> CatalanTable {
        match &self.catalan {
            Some(t) if t.len() > m => t.clone(),
            Some(t) => {
                let mut v = t.values().to_vec();
                v.extend_from_slice(&CatalanTable::new(m).values()[t.len()..]);
                CatalanTable::from_values(v)
            }
            None => CatalanTable::new(m),
        }
    }

    fn pick<T>(&self, quick: T, full: T) -> T {
        match self.scale {
            Scale::Quick => quick,
            Scale::Full => full,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub check: String,
    pub observed: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `observed <= threshold`.
    pub fn at_most(check: impl Into<String>, observed: f64, threshold: f64) -> Self {
        Check {
            check: check.into(),
            observed,
            threshold,
            pass: observed <= threshold,
        }
    }

    /// Exact check counting mismatches.
    pub fn mismatches(check: impl Into<String>, count: usize) -> Self {
        Check::at_most(check, count as f64, 0.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub suite: Suite,
    pub scale: Scale,
    pub pass: bool,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<VerificationReport> {
    let checks = match suite {
        Suite::All => {
            let mut all = Vec::new();
            for s in Suite::EACH {
                all.extend(suite_checks(s, opts)?);
            }
            all
        }
        s => suite_checks(s, opts)?,
    };
    Ok(VerificationReport {
        suite,
        scale: opts.scale,
        pass: checks.iter().all(|c| c.pass),
        checks,
    })
}

fn suite_checks(suite: Suite, o: &VerifyOptions) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    match suite {
        Suite::Identities => {
            out.extend(identity_checks(o.pick(12, 30), o.pick(15, 40), o.pick(15, 40), o)?);
        }
        Suite::Bounds => {
            out.extend(martingale_checks(o.pick(40, 200))?);
            let ns: &[u32] = o.pick(&[5, 10, 20], &[5, 10, 20, 40, 64]);
            out.extend(negbin_checks(ns)?);
            out.extend(concentration_bound_checks(o.pick(100_000, 1_000_000), o.seed)?);
        }
        Suite::Oracle => {
            out.extend(catalan_mean_checks(o.pick(40, 200), o)?);
            let (tv, tv_pair) = o.pick((0.015, 0.02), (0.005, 0.007));
            out.extend(sampler_checks(5, o.pick(100_000, 1_000_000), o.seed, tv, tv_pair)?);
        }
        Suite::Clt => {
            let (n, samples) = o.pick((2_000, 200_000), (10_000, 1_000_000));
            out.extend(clt_checks(n, 0.6, samples, o.seed, 0.02)?);
            out.extend(fair_profit_checks(10_000)?);
            out.push(concentration_check(&[200, 2000], 0.6, 0.05)?);
        }
        Suite::Polya => {
            out.extend(polya_integral_checks()?);
            out.extend(polya_profit_checks(5, &[100, 400, 1600])?);
            out.push(polya_finite_check(2000)?);
        }
        Suite::Antiok => {
            out.extend(antiok_exact_checks(o.pick(40, 200))?);
            out.push(antiok_limit_check(10_000, 10)?);
        }
        Suite::All => unreachable!("expanded by run_suite"),
    }
    Ok(out)
}

fn exact_constant(p: &BigRational, n: u32) -> Result<MarginDistribution> {
    exact_distribution(&Regime::constant(Scalar::Exact(p.clone()), n)?, &DpOptions::exact())
}

fn float_dist(regime: &Regime) -> Result<MarginDistribution> {
    exact_distribution(regime, &DpOptions::float())
}

fn ratio(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

/// Catalan-series `E[Z]` against the exact DP for every `n <= max_n` at
/// `p` in {1/2, 3/5, 7/10, 9/10}.
pub fn catalan_mean_checks(max_n: u32, opts: &VerifyOptions) -> Result<Vec<Check>> {
    let table = opts.table(max_n as usize);
    [(1, 2), (3, 5), (7, 10), (9, 10)]
        .into_iter()
        .map(|(a, b)| {
            let p = ratio(a, b);
            let mut bad = 0;
            for n in 1..=max_n {
                let dp = exact_constant(&p, n)?.expected_values().e_z;
                if expected_profit_with_table(&table, n, &Scalar::Exact(p.clone()))? != dp {
                    bad += 1;
                }
            }
            Ok(Check::mismatches(format!("catalan mean equals DP E[Z], p={a}/{b}, n<={max_n}"), bad))
        })
        .collect()
}

/// `max_k |P(W=k) - NegBin pmf| <= (4pq)^n` on float DP values.
pub fn negbin_checks(ns: &[u32]) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for &n in ns {
        for p in [0.55, 0.65, 0.75, 0.85, 0.95] {
            let ps = Scalar::Float(p);
            let w = float_dist(&Regime::constant(ps.clone(), n)?)?.opponent_wins_pmf();
            let mut worst = 0.0f64;
            for (k, pk) in w.iter().enumerate() {
                let approx = negbin_approx_pmf(n, k as u64, &ps)?.to_f64();
                worst = worst.max((pk.to_f64() - approx).abs());
            }
            let bound = approx_error_bound(n, &ps)?.to_f64();
            out.push(Check::at_most(
                format!("negbin approximation error, n={n}, p={p}"),
                worst,
                bound + 1e-12,
            ));
        }
    }
    Ok(out)
}

/// KS distance of standardized `Z` (and of standardized `W`) from the
/// standard normal, from `samples` simulated matches.
pub fn clt_checks(n: u32, p: f64, samples: u64, seed: u64, threshold: f64) -> Result<Vec<Check>> {
    let plan = SimulationPlan::new(Regime::constant(Scalar::Float(p), n)?, samples, seed)
        .with_sampler(SamplerKind::BinomialBlock)
        .with_partitions(rayon::current_num_threads() as u32);
    let s = run(&plan)?;
    let (q, nf) = (1.0 - p, n as f64);
    let mu_n = (p - q) * nf;
    let z_scale = (nf * q).sqrt();
    let zs: Vec<(f64, u64)> = s
        .profit_counts()
        .into_iter()
        .map(|(z, c)| ((p * z as f64 - mu_n) / z_scale, c))
        .collect();
    let lambda = q / p;
    let w_sd = (lambda * nf / p).sqrt();
    let ws: Vec<(f64, u64)> = (0..n as usize)
        .map(|k| ((k as f64 - lambda * nf) / w_sd, s.p1_counts[k] + s.p2_counts[k]))
        .collect();
    Ok(vec![
        Check::at_most(
            format!("KS of (pZ - mu n)/sqrt(nq), n={n}, p={p}, {samples} matches"),
            ks_statistic_counts(&zs, standard_normal_cdf)?,
            threshold,
        ),
        Check::at_most(
            format!("KS of (W - lambda n)/sqrt(lambda n/p), n={n}, p={p}, {samples} matches"),
            ks_statistic_counts(&ws, standard_normal_cdf)?,
            threshold,
        ),
    ])
}

/// Fair game at `n`: `E|Z| / (2 sqrt(n/pi))` within 2% of 1 and `E|Z|`
/// under the optional-stopping bound.
pub fn fair_profit_checks(n: u32) -> Result<Vec<Check>> {
    let d = float_dist(&Regime::constant(Scalar::Float(0.5), n)?)?;
    let r = half_profit_check(&d);
    Ok(vec![
        Check::at_most(
            format!("|E|Z|/(2 sqrt(n/pi)) - 1|, p=1/2, n={n}"),
            (r.ratio - 1.0).abs(),
            0.02,
        ),
        Check::at_most(format!("E|Z| <= (sqrt(8n+1)-1)/2, p=1/2, n={n}"), r.e_abs_z, r.martingale_bound),
    ])
}

/// `P(|Z/n - (1 - q/p)| > eps)` decreases along `ns`.
pub fn concentration_check(ns: &[u32], p: f64, eps: f64) -> Result<Check> {
    let probs = ns
        .iter()
        .map(|&n| Ok(concentration_probability(&float_dist(&Regime::constant(Scalar::Float(p), n)?)?, p, eps)))
        .collect::<Result<Vec<f64>>>()?;
    let rises = probs.windows(2).filter(|w| w[1] >= w[0]).count();
    let last = *probs.last().unwrap_or(&0.0);
    let mut c = Check::at_most(
        format!("P(|Z/n - (1-q/p)| > {eps}) decreasing over n in {ns:?}, p={p}"),
        last,
        probs.first().copied().unwrap_or(0.0),
    );
    c.pass = rises == 0;
    Ok(c)
}

/// Both optional-stopping bounds on exact DP values for `n <= max_n`,
/// `p` in {1/2, 3/5, 7/10, 4/5, 9/10}.
pub fn martingale_checks(max_n: u32) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (a, b) in [(1, 2), (3, 5), (7, 10), (4, 5), (9, 10)] {
        let p = ratio(a, b);
        let (mut tau_bad, mut z_bad) = (0, 0);
        for n in 1..=max_n {
            let d = exact_constant(&p, n)?;
            let reports = martingale_bounds(n, &Scalar::Exact(p.clone()), Some(&d))?;
            tau_bad += usize::from(reports[0].satisfied != Some(true));
            z_bad += usize::from(reports[1].satisfied != Some(true));
        }
        out.push(Check::mismatches(format!("E[tau] <= 2n/(1+|mu|), p={a}/{b}, n<={max_n}"), tau_bad));
        out.push(Check::mismatches(format!("|E[Z]| <= n|mu|/max(p,q), p={a}/{b}, n<={max_n}"), z_bad));
    }
    Ok(out)
}

/// Gamma-race and negative binomial tail frequencies against their bounds.
pub fn concentration_bound_checks(samples: u64, seed: u64) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (i, (n, lam)) in [(5u32, ratio(1, 2)), (20, ratio(2, 3))].into_iter().enumerate() {
        let lambda = Scalar::Exact(lam.clone());
        let bound = gamma_race_bound(n, &lambda)?.to_f64();
        let mut rng = block_rng(seed, 1 << 40 | i as u64);
        let l = lambda.to_f64();
        let hits = (0..samples)
            .filter(|_| {
                let (x, y) = gamma_race_sample(n, l, &mut rng);
                x >= y
            })
            .count();
        out.push(Check::at_most(
            format!("P(tau_X >= tau_Y) <= gamma race bound, n={n}, lambda={lam}"),
            hits as f64 / samples as f64,
            bound,
        ));
    }
    let (m, a) = (100u64, 40.0);
    let mut rng = block_rng(seed, 1 << 40 | 7);
    let mut tail = 0u64;
    for _ in 0..samples {
        let eta = negbin_direct_sample(m as u32, 0.5, &mut rng)? as f64;
        tail += u64::from((eta - m as f64).abs() >= a);
    }
    out.push(Check::at_most(
        format!("P(|NegBin({m},1/2) - {m}| >= {a}) <= tail bound"),
        tail as f64 / samples as f64,
        negbin_tail_bound(m, a)?,
    ));
    Ok(out)
}

fn summary_for(regime: &Regime, sampler: SamplerKind, samples: u64, seed: u64) -> Result<SimulationSummary> {
    run(&SimulationPlan::new(regime.clone(), samples, seed)
        .with_sampler(sampler)
        .with_partitions(rayon::current_num_threads() as u32))
}

/// Every admissible sampler against the exact law at target `n`, plus
/// Poisson race against sequential.
pub fn sampler_checks(n: u32, samples: u64, seed: u64, tv_exact: f64, tv_pair: f64) -> Result<Vec<Check>> {
    let regimes = [
        Regime::constant(Scalar::Float(0.6), n)?,
        Regime::polya(1, 1, n)?,
        Regime::anti_ok_corral(n)?,
    ];
    let mut out = Vec::new();
    for regime in &regimes {
        let exact = float_dist(regime)?;
        let mut laws = Vec::new();
        for sampler in SamplerKind::admissible(regime) {
            let s = summary_for(regime, sampler, samples, seed)?;
            out.push(Check::at_most(
                format!("TV({sampler} vs exact), {regime}"),
                tv_to_exact(&s, &exact)?,
                tv_exact,
            ));
            laws.push((sampler, EmpiricalLaw::from_summary(&s)?.law()));
        }
        let find = |k| laws.iter().find(|(s, _)| *s == k).map(|(_, l)| l);
        if let (Some(a), Some(b)) = (find(SamplerKind::PoissonRace), find(SamplerKind::Sequential)) {
            out.push(Check::at_most(
                format!("TV(poisson_race vs sequential), {regime}"),
                tv_distance(a, b),
                tv_pair,
            ));
        }
    }
    Ok(out)
}

/// Limiting Pólya win probabilities, total mass and duality.
pub fn polya_integral_checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for k in [1, 2, 5] {
        let v = polya_win_probability(k, k, DEFAULT_TOL)?.value;
        out.push(Check::at_most(format!("Polya({k},{k}) limit win probability = 1/2"), (v - 0.5).abs(), 1e-10));
    }
    let v = polya_win_probability(2, 1, DEFAULT_TOL)?.value;
    out.push(Check::at_most("Polya(2,1) limit win probability = 3/4", (v - 0.75).abs(), 1e-10));
    for (a, b) in [(1, 1), (2, 1), (2, 3), (5, 5)] {
        let m = zeta_total_mass(a, b, DEFAULT_TOL)?.value;
        out.push(Check::at_most(format!("Polya({a},{b}) density mass = 1"), (m - 1.0).abs(), 1e-10));
    }
    for (a, b) in [(2, 1), (3, 5), (1, 4)] {
        let s = polya_win_probability(a, b, DEFAULT_TOL)?.value + polya_win_probability(b, a, DEFAULT_TOL)?.value;
        out.push(Check::at_most(format!("P({a},{b}) + P({b},{a}) = 1"), (s - 1.0).abs(), 2e-12));
    }
    Ok(out)
}

/// Symmetric Pólya expected profit: closed form against the exact integral
/// at `exact_n`, and against `2 sqrt(n/pi) - 1` within `0.6/sqrt(n)`.
pub fn polya_profit_checks(exact_n: u32, ns: &[u32]) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let sp = polya_symmetric_expected_profit(exact_n, DEFAULT_TOL)?;
    let same = sp.integral_exact.as_ref() == Some(&sp.closed_form);
    out.push(Check::mismatches(
        format!("Polya symmetric profit closed form = exact integral, n={exact_n}"),
        usize::from(!same),
    ));
    out.push(Check::at_most(
        format!("Polya symmetric profit closed form ~ quadrature, n={exact_n}"),
        (sp.closed_form.to_f64() - sp.integral_quadrature.value).abs(),
        1e-10,
    ));
    for &n in ns {
        let sp = polya_symmetric_expected_profit(n, DEFAULT_TOL)?;
        out.push(Check::at_most(
            format!("|closed - (2 sqrt(n/pi) - 1)| <= 0.6/sqrt(n), n={n}"),
            (sp.closed_form.to_f64() - sp.asymptotic).abs(),
            0.6 / (n as f64).sqrt(),
        ));
    }
    Ok(out)
}

/// Finite-`n` Polya(2,1) win probability against its limit 3/4.
pub fn polya_finite_check(n: u32) -> Result<Check> {
    let d = float_dist(&Regime::polya(2, 1, n)?)?;
    Ok(Check::at_most(
        format!("Polya(2,1) DP win probability near 3/4, n={n}"),
        (d.win_probability(Player::Player1).to_f64() - 0.75).abs(),
        0.02,
    ))
}

/// Closed-form anti-OK law against the exact DP for every `n <= max_n`.
pub fn antiok_exact_checks(max_n: u32) -> Result<Vec<Check>> {
    let (mut bad, mut bad_sum) = (0, 0);
    for n in 1..=max_n {
        let d = exact_distribution(&Regime::anti_ok_corral(n)?, &DpOptions::exact())?;
        let mut sum = Scalar::zero(ScalarMode::Exact);
        for k in 1..=n {
            let f = antiok_exact_prob(n, k, ScalarMode::Exact)?;
            let w = (n - k) as usize;
            bad += usize::from(d.p1_margin()[w] != f) + usize::from(d.p2_margin()[w] != f);
            sum = &sum + &f;
        }
        bad_sum += usize::from(sum.as_exact() != Some(&(BigRational::one() / BigRational::from_integer(2.into()))));
    }
    Ok(vec![
        Check::mismatches(format!("anti-OK closed form equals DP, n<={max_n}"), bad),
        Check::mismatches(format!("anti-OK doubled sum = 1, n<={max_n}"), bad_sum),
    ])
}

/// `max_{1 <= k <= kmax}` distance of the closed form from `2^-(k+1)` at
/// large `n`.
pub fn antiok_limit_check(n: u32, kmax: u32) -> Result<Check> {
    let mut worst = 0.0f64;
    for k in 1..=kmax {
        let v = antiok_exact_prob(n, k, ScalarMode::Float)?.to_f64();
        worst = worst.max((v - antiok_limit_pmf(k)?.to_f64()).abs());
    }
    Ok(Check::at_most(format!("anti-OK law near 2^-(k+1), n={n}, 1<=k<={kmax}"), worst, 1e-3))
}

/// Exhaustive big-integer identity sweeps.
pub fn identity_checks(max_abm: u64, max_lemma_n: u64, max_m: u64, opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut bad = 0;
    for a in 0..=max_abm {
        for b in 0..=max_abm {
            for m in 0..=max_abm {
                if verify_identity_ident(a, b, m) == Some(false) {
                    bad += 1;
                }
            }
        }
    }
    let mut out = vec![Check::mismatches(
        format!("alternating binomial identity, a,b,m<={max_abm}"),
        bad,
    )];
    let table = opts.table(max_lemma_n as usize);
    let bad_lemma = (1..=max_lemma_n)
        .flat_map(|n| (0..n).map(move |j| (n, j)))
        .filter(|&(n, j)| !lemmain_against(&table, n, j))
        .count();
    out.push(Check::mismatches(
        format!("Catalan convolution lemma, n<={max_lemma_n}, j<n"),
        bad_lemma,
    ));
    out.push(Check::mismatches(
        format!("Catalan table recurrence, C_0..C_{max_lemma_n}"),
        usize::from(table.first_violation().is_some()),
    ));
    for (a, b) in [(3, 5), (7, 10)] {
        let p = ratio(a, b);
        let mut bad = 0;
        for m in 1..=max_m {
            bad += usize::from(!verify_a_m_expansion(&p, m)?);
        }
        out.push(Check::mismatches(format!("A_m expansion, p={a}/{b}, m<={max_m}"), bad));
    }
    Ok(out)
}

/// Opponent-win law under the exact DP (for callers comparing against
/// approximations).
pub fn exact_w_law(regime: &Regime) -> Result<DiscreteLaw> {
    Ok(DiscreteLaw::opponent_wins_law(&float_dist(regime)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> VerifyOptions {
        VerifyOptions {
            scale: Scale::Quick,
            ..Default::default()
        }
    }

    #[test]
    fn identities_pass_quick() {
        let r = run_suite(Suite::Identities, &quick()).unwrap();
        assert!(r.pass, "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn corrupted_table_is_caught() {
        let mut v = CatalanTable::new(10).values().to_vec();
        v[4] += 1u32;
        let opts = VerifyOptions {
            catalan: Some(CatalanTable::from_values(v)),
            ..quick()
        };
        let r = run_suite(Suite::Identities, &opts).unwrap();
        assert!(!r.pass);
        assert!(r.failures().any(|c| c.check.contains("lemma")));
        let c = catalan_mean_checks(12, &opts).unwrap();
        assert!(c.iter().any(|c| !c.pass));
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::EACH.into_iter().chain([Suite::All]) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("everything".parse::<Suite>().is_err());
    }

    #[test]
    fn report_json_shape() {
        let r = VerificationReport {
            suite: Suite::Polya,
            scale: Scale::Quick,
            pass: true,
            checks: vec![Check::at_most("x", 0.5, 1.0)],
        };
        let j = serde_json::to_value(&r).unwrap();
        assert_eq!(j["checks"][0]["check"], "x");
        assert_eq!(j["checks"][0]["pass"], true);
        assert_eq!(j["suite"], "polya");
    }
}
