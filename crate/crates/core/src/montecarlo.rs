//! Reproducible Monte Carlo over match outcomes.
//!
//! Samples are cut into fixed blocks of [`BLOCK_SIZE`] matches. Block `i`
//! draws from `ChaCha8Rng::seed_from_u64(seed)` switched to stream `i`, so a
//! block's outcomes depend only on `(seed, i)`. Partitions are contiguous
//! runs of blocks handed to worker threads; since per-block tallies are
//! merged by integer addition, the summary is identical for every partition
//! count and thread count.

use std::fmt;
use std::str::FromStr;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Exp1, Geometric};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{play_match, GameOutcome, Player, Regime, RegimeKind};
use crate::polya::beta_mixture_sampler;

pub const RNG_ALGORITHM: &str = "chacha8 (rand_chacha 0.9): seed_from_u64(seed), set_stream(block)";
pub const BLOCK_SIZE: u64 = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplerKind {
    /// Round-by-round Bernoulli draws, any regime.
    Sequential,
    /// Two Poisson processes raced to `n` events, constant regime only.
    PoissonRace,
    /// Beta-distributed bias then i.i.d. rounds, Pólya regime only.
    BetaMixture,
    /// Binomial batches of rounds that cannot end the match early, constant
    /// regime only.
    BinomialBlock,
}

impl SamplerKind {
    pub fn name(self) -> &'static str {
        match self {
            SamplerKind::Sequential => "sequential",
            SamplerKind::PoissonRace => "poisson_race",
            SamplerKind::BetaMixture => "beta_mixture",
            SamplerKind::BinomialBlock => "binomial_block",
        }
    }

    pub fn supports(self, regime: &Regime) -> bool {
        match self {
            SamplerKind::Sequential => true,
            SamplerKind::PoissonRace | SamplerKind::BinomialBlock => {
                matches!(regime.kind(), RegimeKind::Constant(_))
            }
            SamplerKind::BetaMixture => matches!(regime.kind(), RegimeKind::Polya { .. }),
        }
    }

    /// Samplers able to run `regime`.
    pub fn admissible(regime: &Regime) -> Vec<SamplerKind> {
        [
            SamplerKind::Sequential,
            SamplerKind::PoissonRace,
            SamplerKind::BetaMixture,
            SamplerKind::BinomialBlock,
        ]
            .into_iter()
            .filter(|s| s.supports(regime))
            .collect()
    }
}

impl fmt::Display for SamplerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SamplerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sequential" => Ok(SamplerKind::Sequential),
            "poisson_race" | "poisson-race" => Ok(SamplerKind::PoissonRace),
            "beta_mixture" | "beta-mixture" => Ok(SamplerKind::BetaMixture),
            "binomial_block" | "binomial-block" => Ok(SamplerKind::BinomialBlock),
            _ => Err(Error::Parse {
                input: s.to_string(),
                reason: "expected sequential, poisson_race, beta_mixture or binomial_block".into(),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimulationPlan {
    pub regime: Regime,
    pub samples: u64,
    pub seed: u64,
    pub partitions: u32,
    pub sampler: SamplerKind,
}

impl SimulationPlan {
    pub fn new(regime: Regime, samples: u64, seed: u64) -> Self {
        SimulationPlan {
            regime,
            samples,
            seed,
            partitions: 1,
            sampler: SamplerKind::Sequential,
        }
    }

    pub fn with_sampler(mut self, sampler: SamplerKind) -> Self {
        self.sampler = sampler;
        self
    }

    pub fn with_partitions(mut self, partitions: u32) -> Self {
        self.partitions = partitions;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.partitions == 0 {
            return Err(Error::param("partitions", "must be at least 1"));
        }
        if !self.sampler.supports(&self.regime) {
            return Err(Error::SamplerMismatch {
                sampler: self.sampler.name().to_string(),
                regime: self.regime.name().to_string(),
            });
        }
        Ok(())
    }
}

/// Provenance carried by every summary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanMetadata {
    pub regime: Regime,
    pub samples: u64,
    pub seed: u64,
    pub sampler: SamplerKind,
    pub rng_algorithm: String,
    pub block_size: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationSummary {
    pub plan: PlanMetadata,
    pub total: u64,
    /// `p1_counts[k]`: matches won by player 1 with player 2 on `k` wins.
    pub p1_counts: Vec<u64>,
    pub p2_counts: Vec<u64>,
    pub empirical_e_z: Option<f64>,
    pub empirical_e_tau: Option<f64>,
    pub empirical_e_abs_z: Option<f64>,
}

impl SimulationSummary {
    pub fn n(&self) -> u32 {
        self.p1_counts.len() as u32
    }

    pub fn count(&self, winner: Player, opponent_wins: u32) -> u64 {
        let v = match winner {
            Player::Player1 => &self.p1_counts,
            Player::Player2 => &self.p2_counts,
        };
        v.get(opponent_wins as usize).copied().unwrap_or(0)
    }

    pub fn wins(&self, winner: Player) -> u64 {
        match winner {
            Player::Player1 => self.p1_counts.iter().sum(),
            Player::Player2 => self.p2_counts.iter().sum(),
        }
    }

    /// `(z, count)` for every net profit with a nonzero count, increasing in `z`.
    pub fn profit_counts(&self) -> Vec<(i64, u64)> {
        let n = self.n() as i64;
        let mut out: Vec<(i64, u64)> = self
            .p2_counts
            .iter()
            .enumerate()
            .map(|(k, &c)| (k as i64 - n, c))
            .chain(self.p1_counts.iter().enumerate().rev().map(|(k, &c)| (n - k as i64, c)))
            .filter(|(_, c)| *c > 0)
            .collect();
        out.sort_by_key(|(z, _)| *z);
        out
    }

    fn from_tally(plan: &SimulationPlan, tally: Tally) -> Self {
        let n = plan.regime.target() as f64;
        let total: u64 = tally.p1.iter().chain(&tally.p2).sum();
        let moments = if total == 0 {
            (None, None, None)
        } else {
            let (mut ez, mut etau, mut eabs) = (0.0, 0.0, 0.0);
            for (k, (&c1, &c2)) in tally.p1.iter().zip(&tally.p2).enumerate() {
                let margin = n - k as f64;
                ez += margin * (c1 as f64 - c2 as f64);
                eabs += margin * (c1 + c2) as f64;
                etau += (n + k as f64) * (c1 + c2) as f64;
            }
            let t = total as f64;
            (Some(ez / t), Some(etau / t), Some(eabs / t))
        };
        SimulationSummary {
            plan: PlanMetadata {
                regime: plan.regime.clone(),
                samples: plan.samples,
                seed: plan.seed,
                sampler: plan.sampler,
                rng_algorithm: RNG_ALGORITHM.to_string(),
                block_size: BLOCK_SIZE,
            },
            total,
            p1_counts: tally.p1,
            p2_counts: tally.p2,
            empirical_e_z: moments.0,
            empirical_e_tau: moments.1,
            empirical_e_abs_z: moments.2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Tally {
    p1: Vec<u64>,
    p2: Vec<u64>,
}

impl Tally {
    fn new(n: u32) -> Self {
        Tally {
            p1: vec![0; n as usize],
            p2: vec![0; n as usize],
        }
    }

    fn record(&mut self, o: GameOutcome) {
        match o.winner {
            Player::Player1 => self.p1[o.opponent_wins as usize] += 1,
            Player::Player2 => self.p2[o.opponent_wins as usize] += 1,
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (a, b) in self.p1.iter_mut().zip(other.p1) {
            *a += b;
        }
        for (a, b) in self.p2.iter_mut().zip(other.p2) {
            *a += b;
        }
        self
    }
}

/// The generator for block `block` of a run seeded with `seed`.
pub fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

/// One match with the chosen sampler. The plan must have been validated.
fn sample_one<R: RngCore>(regime: &Regime, sampler: SamplerKind, rng: &mut R) -> GameOutcome {
    match (sampler, regime.kind()) {
        (SamplerKind::Sequential, _) => play_match(regime, rng),
        (SamplerKind::PoissonRace, RegimeKind::Constant(p)) => poisson_race_sample(regime.target(), p.to_f64(), rng),
        (SamplerKind::BetaMixture, RegimeKind::Polya { n1, n2 }) => {
            beta_mixture_sampler(*n1, *n2, regime.target(), rng)
        }
        (SamplerKind::BinomialBlock, RegimeKind::Constant(p)) => binomial_block_sample(regime.target(), p.to_f64(), rng),
        _ => unreachable!("sampler/regime pairs are validated before sampling"),
    }
}

fn run_block(plan: &SimulationPlan, block: u64) -> Tally {
    let start = block * BLOCK_SIZE;
    let len = BLOCK_SIZE.min(plan.samples - start);
    let mut rng = block_rng(plan.seed, block);
    let mut tally = Tally::new(plan.regime.target());
    for _ in 0..len {
        tally.record(sample_one(&plan.regime, plan.sampler, &mut rng));
    }
    tally
}

/// Runs `plan`, spreading its partitions over the current rayon pool.
pub fn run(plan: &SimulationPlan) -> Result<SimulationSummary> {
    plan.validate()?;
    let blocks = plan.samples.div_ceil(BLOCK_SIZE);
    let parts = (plan.partitions as u64).min(blocks.max(1));
    let per_part = blocks.div_ceil(parts.max(1)).max(1);
    let n = plan.regime.target();
    let tally = (0..parts)
        .into_par_iter()
        .map(|part| {
            let lo = part * per_part;
            let hi = ((part + 1) * per_part).min(blocks);
            (lo..hi).fold(Tally::new(n), |acc, b| acc.merge(run_block(plan, b)))
        })
        .reduce(|| Tally::new(n), Tally::merge);
    Ok(SimulationSummary::from_tally(plan, tally))
}

/// Gamma variate with integer `shape` and `rate`, as a sum of exponentials.
pub fn gamma_int_sample<R: RngCore + ?Sized>(shape: u32, rate: f64, rng: &mut R) -> f64 {
    let mut rng = rng;
    let s: f64 = (0..shape).map(|_| Distribution::<f64>::sample(&Exp1, &mut rng)).sum::<f64>();
    s / rate
}

/// `(tau_X, tau_Y)` for independent `Gamma(n, 1)` and `Gamma(n, lambda)`.
pub fn gamma_race_sample<R: RngCore + ?Sized>(n: u32, lambda: f64, rng: &mut R) -> (f64, f64) {
    let x = gamma_int_sample(n, 1.0, rng);
    let y = gamma_int_sample(n, lambda, rng);
    (x, y)
}

/// Match outcome from racing a rate-1 process (player 1's wins) against a
/// rate `q/p` process (player 2's) until one records `n` events. Only the
/// two pending arrival times are kept.
pub fn poisson_race_sample<R: RngCore + ?Sized>(n: u32, p: f64, rng: &mut R) -> GameOutcome {
    let mut rng = rng;
    let lambda = (1.0 - p) / p;
    let mut next_x: f64 = Exp1.sample(&mut rng);
    let first_y: f64 = Exp1.sample(&mut rng);
    let mut next_y = first_y / lambda;
    let (mut x, mut y) = (0u32, 0u32);
    loop {
        if next_x < next_y {
            x += 1;
            if x == n {
                return GameOutcome::new(n, Player::Player1, y);
            }
            let gap: f64 = Exp1.sample(&mut rng);
            next_x += gap;
        } else {
            y += 1;
            if y == n {
                return GameOutcome::new(n, Player::Player2, x);
            }
            let gap: f64 = Exp1.sample(&mut rng);
            next_y += gap / lambda;
        }
    }
}

/// Match outcome drawn `n - max(a, b)` rounds at a time. No batch can carry
/// either player past `n`, so the result has the law of round-by-round play.
pub fn binomial_block_sample<R: RngCore + ?Sized>(n: u32, p: f64, rng: &mut R) -> GameOutcome {
    let mut rng = rng;
    let (mut a, mut b) = (0u32, 0u32);
    loop {
        let m = n - a.max(b);
        let x = Binomial::new(m as u64, p).expect("p lies in (0, 1)").sample(&mut rng) as u32;
        a += x;
        b += m - x;
        if a == n {
            return GameOutcome::new(n, Player::Player1, b);
        }
        if b == n {
            return GameOutcome::new(n, Player::Player2, a);
        }
    }
}

/// Failures before the `n`-th success of Bernoulli(`p`) trials, as a sum of
/// `n` geometric variables.
pub fn negbin_direct_sample<R: RngCore + ?Sized>(n: u32, p: f64, rng: &mut R) -> Result<u64> {
    let geo = Geometric::new(p).map_err(|e| Error::param("p", e.to_string()))?;
    let mut rng = rng;
    Ok((0..n).map(|_| geo.sample(&mut rng)).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn constant(p: f64, n: u32) -> Regime {
        Regime::constant(Scalar::Float(p), n).unwrap()
    }

    #[test]
    fn empty_plan() {
        let s = run(&SimulationPlan::new(constant(0.5, 3), 0, 1)).unwrap();
        assert_eq!(s.total, 0);
        assert_eq!(s.empirical_e_z, None);
        assert_eq!(s.p1_counts, vec![0; 3]);
    }

    #[test]
    fn mismatched_sampler() {
        let plan = SimulationPlan::new(Regime::anti_ok_corral(3).unwrap(), 10, 1)
            .with_sampler(SamplerKind::PoissonRace);
        assert!(matches!(run(&plan), Err(Error::SamplerMismatch { .. })));
        let plan = SimulationPlan::new(constant(0.5, 3), 10, 1).with_sampler(SamplerKind::BetaMixture);
        assert!(run(&plan).is_err());
        assert!(run(&SimulationPlan::new(constant(0.5, 3), 10, 1).with_partitions(0)).is_err());
    }

    #[test]
    fn partition_count_does_not_change_results() {
        let base = SimulationPlan::new(constant(0.6, 7), 3 * BLOCK_SIZE + 17, 99);
        let one = run(&base).unwrap();
        for parts in [2, 3, 8, 64] {
            assert_eq!(run(&base.clone().with_partitions(parts)).unwrap(), one);
        }
        assert_eq!(one.total, 3 * BLOCK_SIZE + 17);
    }

    #[test]
    fn moments_follow_counts() {
        let s = run(&SimulationPlan::new(Regime::polya(1, 2, 4).unwrap(), 5000, 5)).unwrap();
        let t = s.total as f64;
        let ez: f64 = s.profit_counts().iter().map(|(z, c)| *z as f64 * *c as f64).sum::<f64>() / t;
        assert!((ez - s.empirical_e_z.unwrap()).abs() < 1e-12);
        let etau: f64 = (0..4)
            .map(|k| (4 + k) as f64 * (s.p1_counts[k] + s.p2_counts[k]) as f64)
            .sum::<f64>()
            / t;
        assert!((etau - s.empirical_e_tau.unwrap()).abs() < 1e-12);
    }

    #[test]
    fn single_round_race_is_competing_exponentials() {
        let mut rng = block_rng(3, 0);
        let wins = (0..200_000)
            .filter(|_| poisson_race_sample(1, 0.7, &mut rng).winner == Player::Player1)
            .count();
        assert!((wins as f64 / 200_000.0 - 0.7).abs() < 0.005);
    }

    #[test]
    fn binomial_blocks_at_two_wins() {
        // P1 wins 2-0 w.p. p^2, 2-1 w.p. 2p^2 q
        let plan = SimulationPlan::new(constant(0.6, 2), 400_000, 11).with_sampler(SamplerKind::BinomialBlock);
        let s = run(&plan).unwrap();
        let f = |c: u64| c as f64 / 400_000.0;
        assert!((f(s.p1_counts[0]) - 0.36).abs() < 0.004);
        assert!((f(s.p1_counts[1]) - 0.288).abs() < 0.004);
        assert!((f(s.p2_counts[0]) - 0.16).abs() < 0.004);
    }

    #[test]
    fn geometric_at_one_success() {
        let mut rng = block_rng(4, 0);
        let m: f64 = (0..200_000)
            .map(|_| negbin_direct_sample(1, 0.25, &mut rng).unwrap() as f64)
            .sum::<f64>()
            / 200_000.0;
        assert!((m - 3.0).abs() < 0.05);
        assert!(negbin_direct_sample(3, 1.5, &mut rng).is_err());
    }

    #[test]
    fn summary_json_round_trip() {
        let s = run(&SimulationPlan::new(constant(0.55, 3), 100, 8)).unwrap();
        let j = serde_json::to_string(&s).unwrap();
        let back: SimulationSummary = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
        assert_eq!(serde_json::to_string(&back).unwrap(), j);
    }
}
