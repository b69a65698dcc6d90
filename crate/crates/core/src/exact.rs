//! Forward dynamic programming over match states.
//!
//! Reach probabilities are propagated one anti-diagonal `k = a + b` at a time,
//! so only `O(n)` values are alive at once. In every regime the two round
//! weights of a state sum to a quantity that depends on `k` alone, so the
//! exact engine carries integer numerators over one shared denominator per
//! diagonal and only forms reduced rationals for the absorbed mass.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{play_scripted, round_win_probability, GameState, Player, Regime};
use crate::scalar::{neumaier_sum, Scalar, ScalarMode};

pub const DEFAULT_EXACT_CAP: u32 = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DpOptions {
    pub mode: ScalarMode,
    /// Largest `n` accepted in exact mode.
    pub max_exact_n: u32,
}

impl Default for DpOptions {
    fn default() -> Self {
        DpOptions {
            mode: ScalarMode::Exact,
            max_exact_n: DEFAULT_EXACT_CAP,
        }
    }
}

impl DpOptions {
    pub fn exact() -> Self {
        Self::default()
    }

    pub fn float() -> Self {
        DpOptions {
            mode: ScalarMode::Float,
            ..Self::default()
        }
    }
}

/// Joint law of (winner, loser's win count).
///
/// `p1_margin[k]` is the probability that player 1 takes the match while
/// player 2 has `k` wins; `p2_margin` mirrors it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MarginRepr")]
pub struct MarginDistribution {
    n: u32,
    mode: ScalarMode,
    p1_margin: Vec<Scalar>,
    p2_margin: Vec<Scalar>,
}

#[derive(Deserialize)]
struct MarginRepr {
    n: u32,
    mode: ScalarMode,
    p1_margin: Vec<Scalar>,
    p2_margin: Vec<Scalar>,
}

impl TryFrom<MarginRepr> for MarginDistribution {
    type Error = Error;

    fn try_from(r: MarginRepr) -> Result<Self> {
        MarginDistribution::new(r.n, r.mode, r.p1_margin, r.p2_margin)
    }
}

/// Tolerance on total mass for float-mode distributions.
pub const FLOAT_NORMALIZATION_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Expectations {
    pub e_z: Scalar,
    pub e_abs_z: Scalar,
    pub e_tau: Scalar,
}

impl MarginDistribution {
    /// Checked constructor: lengths, signs, mode and total mass.
    pub fn new(n: u32, mode: ScalarMode, p1_margin: Vec<Scalar>, p2_margin: Vec<Scalar>) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("n", "must be at least 1"));
        }
        if p1_margin.len() != n as usize || p2_margin.len() != n as usize {
            return Err(Error::param("margins", format!("both arrays need exactly n = {n} entries")));
        }
        for v in p1_margin.iter().chain(&p2_margin) {
            if v.mode() != mode {
                return Err(Error::param("mode", format!("entry {v} does not match mode {mode}")));
            }
            let ok = match v {
                Scalar::Exact(r) => r >= &BigRational::zero(),
                Scalar::Float(x) => x.is_finite() && *x >= 0.0,
            };
            if !ok {
                return Err(Error::param("margins", format!("entry {v} is not a probability")));
            }
        }
        let dist = MarginDistribution {
            n,
            mode,
            p1_margin,
            p2_margin,
        };
        dist.check_normalized()?;
        Ok(dist)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn mode(&self) -> ScalarMode {
        self.mode
    }

    pub fn p1_margin(&self) -> &[Scalar] {
        &self.p1_margin
    }

    pub fn p2_margin(&self) -> &[Scalar] {
        &self.p2_margin
    }

    pub fn margin(&self, winner: Player) -> &[Scalar] {
        match winner {
            Player::Player1 => &self.p1_margin,
            Player::Player2 => &self.p2_margin,
        }
    }

    pub fn total(&self) -> Scalar {
        Scalar::sum(self.p1_margin.iter().chain(&self.p2_margin), self.mode)
    }

    pub fn check_normalized(&self) -> Result<()> {
        let total = self.total();
        let ok = match &total {
            Scalar::Exact(r) => r.is_one(),
            Scalar::Float(x) => (x - 1.0).abs() <= FLOAT_NORMALIZATION_TOL,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::param("margins", format!("total probability is {total}, not 1")))
        }
    }

    pub fn win_probability(&self, winner: Player) -> Scalar {
        Scalar::sum(self.margin(winner), self.mode)
    }

    /// `P(W = k)` for `k = 0..n`.
    pub fn opponent_wins_pmf(&self) -> Vec<Scalar> {
        self.p1_margin
            .iter()
            .zip(&self.p2_margin)
            .map(|(a, b)| a + b)
            .collect()
    }

    /// `(z, P(Z = z))` in increasing `z`, skipping nothing: `z` runs over
    /// `-n..=-1` then `1..=n`.
    pub fn profit_pmf(&self) -> Vec<(i64, Scalar)> {
        let n = self.n as i64;
        let mut out = Vec::with_capacity(2 * self.n as usize);
        for (k, v) in self.p2_margin.iter().enumerate() {
            out.push((k as i64 - n, v.clone()));
        }
        for (k, v) in self.p1_margin.iter().enumerate().rev() {
            out.push((n - k as i64, v.clone()));
        }
        out
    }

    /// `(t, P(tau = t))` for `t = n..2n`.
    pub fn rounds_pmf(&self) -> Vec<(u32, Scalar)> {
        self.opponent_wins_pmf()
            .into_iter()
            .enumerate()
            .map(|(k, v)| (self.n + k as u32, v))
            .collect()
    }

    pub fn expected_values(&self) -> Expectations {
        let n = self.n as u64;
        let mode = self.mode;
        let mut ez = Vec::with_capacity(self.n as usize);
        let mut eabs = Vec::with_capacity(self.n as usize);
        let mut etau = Vec::with_capacity(self.n as usize);
        for (k, (a, b)) in self.p1_margin.iter().zip(&self.p2_margin).enumerate() {
            let margin = Scalar::from_u64(n - k as u64, mode);
            let w = a + b;
            ez.push(&margin * &(a - b));
            eabs.push(&margin * &w);
            etau.push(&Scalar::from_u64(n + k as u64, mode) * &w);
        }
        Expectations {
            e_z: Scalar::sum(&ez, mode),
            e_abs_z: Scalar::sum(&eabs, mode),
            e_tau: Scalar::sum(&etau, mode),
        }
    }

    /// Demotes an exact distribution to float mode.
    pub fn to_float(&self) -> MarginDistribution {
        let conv = |v: &Vec<Scalar>| v.iter().map(|s| Scalar::Float(s.to_f64())).collect();
        MarginDistribution {
            n: self.n,
            mode: ScalarMode::Float,
            p1_margin: conv(&self.p1_margin),
            p2_margin: conv(&self.p2_margin),
        }
    }
}

pub fn expected_values(dist: &MarginDistribution) -> Expectations {
    dist.expected_values()
}

/// Full law of a regime's match by forward DP.
pub fn exact_distribution(regime: &Regime, opts: &DpOptions) -> Result<MarginDistribution> {
    let n = regime.target();
    match opts.mode {
        ScalarMode::Exact => {
            if n > opts.max_exact_n {
                return Err(Error::Capacity {
                    n,
                    cap: opts.max_exact_n,
                });
            }
            if !regime.is_rational() {
                return Err(Error::NotRational(format!("{regime} has a float parameter")));
            }
            Ok(exact_dp(regime))
        }
        ScalarMode::Float => Ok(float_dp(regime)),
    }
}

fn diagonal_bounds(k: u32, n: u32) -> (u32, u32) {
    (k.saturating_sub(n - 1), k.min(n - 1))
}

fn exact_dp(regime: &Regime) -> MarginDistribution {
    let n = regime.target();
    // numerators for a in lo..=hi on the current diagonal, over `den`
    let mut cur: Vec<BigUint> = vec![BigUint::one()];
    let mut den = BigUint::one();
    let mut p1: Vec<Option<(BigUint, BigUint)>> = vec![None; n as usize];
    let mut p2: Vec<Option<(BigUint, BigUint)>> = vec![None; n as usize];

    for k in 0..(2 * n - 1) {
        let (lo, hi) = diagonal_bounds(k, n);
        let (nlo, nhi) = diagonal_bounds(k + 1, n);
        let mut next = vec![BigUint::zero(); (nhi + 1 - nlo.min(nhi + 1)) as usize];
        let mut diag_sum: Option<BigUint> = None;
        for a in lo..=hi {
            let b = k - a;
            let r = &cur[(a - lo) as usize];
            let (w1, w2) = regime
                .round_weights(GameState::new(a, b))
                .expect("rational regime");
            let s = &w1 + &w2;
            match &diag_sum {
                None => diag_sum = Some(s),
                Some(prev) => debug_assert_eq!(prev, &s, "weights must sum per diagonal"),
            }
            if r.is_zero() {
                continue;
            }
            let win = r * &w1;
            let lose = r * &w2;
            if a + 1 == n {
                p1[b as usize] = Some((win, BigUint::zero()));
            } else {
                next[(a + 1 - nlo) as usize] += win;
            }
            if b + 1 == n {
                p2[a as usize] = Some((lose, BigUint::zero()));
            } else {
                next[(a - nlo) as usize] += lose;
            }
        }
        den *= diag_sum.expect("diagonal is never empty");
        // absorbed numerators from this step share the new denominator
        for slot in p1.iter_mut().chain(p2.iter_mut()) {
            if let Some((_, d)) = slot {
                if d.is_zero() {
                    *d = den.clone();
                }
            }
        }
        cur = next;
    }

    let finish = |v: Vec<Option<(BigUint, BigUint)>>| -> Vec<Scalar> {
        v.into_iter()
            .map(|slot| match slot {
                Some((num, d)) => Scalar::Exact(BigRational::new(num.into(), d.into())),
                None => Scalar::Exact(BigRational::zero()),
            })
            .collect()
    };
    MarginDistribution {
        n,
        mode: ScalarMode::Exact,
        p1_margin: finish(p1),
        p2_margin: finish(p2),
    }
}

fn float_dp(regime: &Regime) -> MarginDistribution {
    let n = regime.target();
    let mut p1 = vec![0.0f64; n as usize];
    let mut p2 = vec![0.0f64; n as usize];
    forward_float(regime, |_, _| {}, &mut p1, &mut p2);
    MarginDistribution {
        n,
        mode: ScalarMode::Float,
        p1_margin: p1.into_iter().map(Scalar::Float).collect(),
        p2_margin: p2.into_iter().map(Scalar::Float).collect(),
    }
}

fn forward_float<F: FnMut(GameState, f64)>(regime: &Regime, mut visit: F, p1: &mut [f64], p2: &mut [f64]) {
    let n = regime.target();
    let mut cur = vec![1.0f64];
    for k in 0..(2 * n - 1) {
        let (lo, hi) = diagonal_bounds(k, n);
        let (nlo, nhi) = diagonal_bounds(k + 1, n);
        let mut next = vec![0.0f64; (nhi + 1 - nlo.min(nhi + 1)) as usize];
        for a in lo..=hi {
            let b = k - a;
            let state = GameState::new(a, b);
            let r = cur[(a - lo) as usize];
            visit(state, r);
            let p = regime.round_prob_f64(state);
            let win = r * p;
            let lose = r * (1.0 - p);
            if a + 1 == n {
                p1[b as usize] = win;
            } else {
                next[(a + 1 - nlo) as usize] += win;
            }
            if b + 1 == n {
                p2[a as usize] = lose;
            } else {
                next[(a - nlo) as usize] += lose;
            }
        }
        cur = next;
    }
}

/// Float reach probabilities `table[a][b]` of every live state, for path
/// diagnostics. Costs `O(n^2)` memory.
pub fn reach_table(regime: &Regime) -> Vec<Vec<f64>> {
    let n = regime.target() as usize;
    let mut table = vec![vec![0.0; n]; n];
    let mut p1 = vec![0.0; n];
    let mut p2 = vec![0.0; n];
    forward_float(
        regime,
        |s, r| table[s.a as usize][s.b as usize] = r,
        &mut p1,
        &mut p2,
    );
    table
}

/// Probability of one complete sequence of round winners.
pub fn sample_path_probability(regime: &Regime, rounds: &[Player]) -> Result<Scalar> {
    play_scripted(regime, rounds)?;
    let mut state = GameState::START;
    let mut prob = Scalar::one(if regime.is_rational() {
        ScalarMode::Exact
    } else {
        ScalarMode::Float
    });
    for who in rounds {
        let p = round_win_probability(regime, state)?;
        prob = match who {
            Player::Player1 => prob * p,
            Player::Player2 => &prob * &(Scalar::one(p.mode()) - p),
        };
        state = crate::game::step(state, regime.target(), *who == Player::Player1)?;
    }
    Ok(prob)
}

/// Float-mode margin total with compensated summation.
pub fn float_total(dist: &MarginDistribution) -> f64 {
    neumaier_sum(dist.p1_margin.iter().chain(&dist.p2_margin).map(Scalar::to_f64))
}
