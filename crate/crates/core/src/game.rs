//! Regimes, match state and the round-by-round game engine.
//!
//! Player 1 always owns ball type 1. In the urn regimes the state `(a, b)`
//! determines the urn: Pólya holds `N1 + a` type-1 and `N2 + b` type-2
//! balls, anti-OK Corral has `n - a` and `n - b` balls left.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Player1,
    Player2,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::Player1 => Player::Player2,
            Player::Player2 => Player::Player1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum RegimeKind {
    /// Player 1 wins every round with the same probability `p`.
    Constant(Scalar),
    /// Draw with replacement plus one extra ball of the drawn type.
    Polya { n1: u32, n2: u32 },
    /// `n` balls of each type, drawn without replacement.
    AntiOkCorral,
}

/// A round-probability law together with the number of wins needed.
#[derive(Clone, Debug, PartialEq)]
pub struct Regime {
    kind: RegimeKind,
    target: u32,
}

fn check_target(target: u32) -> Result<()> {
    if target == 0 {
        return Err(Error::param("n", "target number of wins must be at least 1"));
    }
    Ok(())
}

impl Regime {
    pub fn constant(p: Scalar, target: u32) -> Result<Self> {
        check_target(target)?;
        let inside = match &p {
            Scalar::Exact(r) => r > &BigRational::zero() && r < &BigRational::one(),
            Scalar::Float(x) => *x > 0.0 && *x < 1.0,
        };
        if !inside {
            return Err(Error::param("p", format!("must lie strictly inside (0, 1), got {p}")));
        }
        Ok(Regime {
            kind: RegimeKind::Constant(p),
            target,
        })
    }

    pub fn polya(n1: u32, n2: u32, target: u32) -> Result<Self> {
        check_target(target)?;
        if n1 == 0 || n2 == 0 {
            return Err(Error::param("n1/n2", "the urn needs at least one ball of each type"));
        }
        Ok(Regime {
            kind: RegimeKind::Polya { n1, n2 },
            target,
        })
    }

    pub fn anti_ok_corral(target: u32) -> Result<Self> {
        check_target(target)?;
        Ok(Regime {
            kind: RegimeKind::AntiOkCorral,
            target,
        })
    }

    pub fn kind(&self) -> &RegimeKind {
        &self.kind
    }

    pub fn target(&self) -> u32 {
        self.target
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            RegimeKind::Constant(_) => "constant",
            RegimeKind::Polya { .. } => "polya",
            RegimeKind::AntiOkCorral => "antiok",
        }
    }

    /// True when every per-round probability is rational.
    pub fn is_rational(&self) -> bool {
        !matches!(self.kind, RegimeKind::Constant(Scalar::Float(_)))
    }

    /// Same regime with a different target.
    pub fn with_target(&self, target: u32) -> Result<Self> {
        check_target(target)?;
        Ok(Regime {
            kind: self.kind.clone(),
            target,
        })
    }

    fn check_live(&self, state: GameState) -> Result<()> {
        state.validate(self.target)?;
        if state.is_absorbing(self.target) {
            return Err(Error::contract(format!(
                "state ({}, {}) is absorbing for n = {}",
                state.a, state.b, self.target
            )));
        }
        Ok(())
    }

    /// Integer weights `(w1, w2)` with `P(player 1 wins) = w1 / (w1 + w2)`.
    ///
    /// `w1 + w2` depends on the round index only, which lets the exact engine
    /// keep a single denominator per anti-diagonal. Returns `None` for
    /// float-valued constant regimes.
    pub(crate) fn round_weights(&self, state: GameState) -> Option<(BigUint, BigUint)> {
        let n = self.target as u64;
        let (a, b) = (state.a as u64, state.b as u64);
        match &self.kind {
            RegimeKind::Constant(Scalar::Exact(p)) => {
                let num = p.numer().to_biguint()?;
                let den = p.denom().to_biguint()?;
                let rest = &den - &num;
                Some((num, rest))
            }
            RegimeKind::Constant(Scalar::Float(_)) => None,
            RegimeKind::Polya { n1, n2 } => Some(((*n1 as u64 + a).into(), (*n2 as u64 + b).into())),
            RegimeKind::AntiOkCorral => Some(((n - a).into(), (n - b).into())),
        }
    }

    pub(crate) fn round_prob_f64(&self, state: GameState) -> f64 {
        let n = self.target as f64;
        let (a, b) = (state.a as f64, state.b as f64);
        match &self.kind {
            RegimeKind::Constant(p) => p.to_f64(),
            RegimeKind::Polya { n1, n2 } => {
                let n1 = *n1 as f64;
                (n1 + a) / (n1 + *n2 as f64 + a + b)
            }
            RegimeKind::AntiOkCorral => (n - a) / (2.0 * n - a - b),
        }
    }

    /// `(num, den)` such that a uniform `u64` word `u` means "player 1 wins"
    /// iff `(u * den) >> 64 < num`. One word per round, bias at most
    /// `den / 2^64`.
    fn draw_odds(&self, state: GameState) -> (u128, u128) {
        const ONE: u128 = 1 << 64;
        let n = self.target as u128;
        let (a, b) = (state.a as u128, state.b as u128);
        match &self.kind {
            RegimeKind::Constant(Scalar::Exact(p)) => {
                match (p.numer().to_u64(), p.denom().to_u64()) {
                    (Some(num), Some(den)) => (num as u128, den as u128),
                    _ => (float_threshold(rational_prob(p)), ONE),
                }
            }
            RegimeKind::Constant(Scalar::Float(p)) => (float_threshold(*p), ONE),
            RegimeKind::Polya { n1, n2 } => (*n1 as u128 + a, (*n1 + *n2) as u128 + a + b),
            RegimeKind::AntiOkCorral => (n - a, 2 * n - a - b),
        }
    }
}

fn rational_prob(p: &BigRational) -> f64 {
    crate::scalar::rational_to_f64(p)
}

/// Threshold on a `u64` word with `P(u < t) = t / 2^64 ≈ p`.
pub(crate) fn float_threshold(p: f64) -> u128 {
    let p = p.clamp(0.0, 1.0);
    // 2^64 * p is exact for p a float in [0,1]; truncation keeps it <= 2^64.
    (p * 18_446_744_073_709_551_616.0) as u128
}

#[inline]
pub(crate) fn draw_round(word: u64, num: u128, den: u128) -> bool {
    ((word as u128 * den) >> 64) < num
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            RegimeKind::Constant(p) => write!(f, "constant(p={p}, n={})", self.target),
            RegimeKind::Polya { n1, n2 } => write!(f, "polya(N1={n1}, N2={n2}, n={})", self.target),
            RegimeKind::AntiOkCorral => write!(f, "antiok(n={})", self.target),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RegimeRepr {
    regime: String,
    n: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n1: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n2: Option<u32>,
}

impl Serialize for Regime {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut repr = RegimeRepr {
            regime: self.name().to_string(),
            n: self.target,
            p: None,
            n1: None,
            n2: None,
        };
        match &self.kind {
            RegimeKind::Constant(p) => repr.p = Some(p.clone()),
            RegimeKind::Polya { n1, n2 } => {
                repr.n1 = Some(*n1);
                repr.n2 = Some(*n2);
            }
            RegimeKind::AntiOkCorral => {}
        }
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Regime {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = RegimeRepr::deserialize(d)?;
        let built = match repr.regime.as_str() {
            "constant" => {
                let p = repr.p.ok_or_else(|| D::Error::missing_field("p"))?;
                Regime::constant(p, repr.n)
            }
            "polya" => Regime::polya(
                repr.n1.ok_or_else(|| D::Error::missing_field("n1"))?,
                repr.n2.ok_or_else(|| D::Error::missing_field("n2"))?,
                repr.n,
            ),
            "antiok" => Regime::anti_ok_corral(repr.n),
            other => return Err(D::Error::unknown_variant(other, &["constant", "polya", "antiok"])),
        };
        built.map_err(D::Error::custom)
    }
}

/// Wins so far: `a` for player 1, `b` for player 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct GameState {
    pub a: u32,
    pub b: u32,
}

impl GameState {
    pub const START: GameState = GameState { a: 0, b: 0 };

    pub fn new(a: u32, b: u32) -> Self {
        GameState { a, b }
    }

    pub fn round(&self) -> u32 {
        self.a + self.b
    }

    /// Win difference `a - b` after `round()` rounds.
    pub fn lead(&self) -> i64 {
        self.a as i64 - self.b as i64
    }

    /// Anti-OK Corral: remaining type-1 minus remaining type-2 balls, which
    /// is `(n - a) - (n - b) = -lead()`.
    pub fn ball_difference(&self) -> i64 {
        -self.lead()
    }

    pub fn is_absorbing(&self, target: u32) -> bool {
        self.a == target || self.b == target
    }

    pub fn validate(&self, target: u32) -> Result<()> {
        if self.a > target || self.b > target || (self.a == target && self.b == target) {
            return Err(Error::contract(format!(
                "state ({}, {}) is outside the game for n = {target}",
                self.a, self.b
            )));
        }
        Ok(())
    }

    pub fn winner(&self, target: u32) -> Option<Player> {
        if self.a == target {
            Some(Player::Player1)
        } else if self.b == target {
            Some(Player::Player2)
        } else {
            None
        }
    }
}

/// Probability that player 1 wins the next round from `state`.
pub fn round_win_probability(regime: &Regime, state: GameState) -> Result<Scalar> {
    regime.check_live(state)?;
    Ok(match regime.round_weights(state) {
        Some((w1, w2)) => Scalar::Exact(weights_to_prob(&w1, &w2)),
        None => Scalar::Float(regime.round_prob_f64(state)),
    })
}

/// Advances `state` by one round.
pub fn step(state: GameState, target: u32, player1_won_round: bool) -> Result<GameState> {
    state.validate(target)?;
    if state.is_absorbing(target) {
        return Err(Error::contract(format!(
            "cannot step absorbing state ({}, {})",
            state.a, state.b
        )));
    }
    Ok(if player1_won_round {
        GameState::new(state.a + 1, state.b)
    } else {
        GameState::new(state.a, state.b + 1)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GameOutcome {
    pub winner: Player,
    /// Rounds won by the eventual loser.
    pub opponent_wins: u32,
    pub rounds: u32,
    /// Player 1's profit: the winner collects `n - opponent_wins`.
    pub net_profit: i64,
}

impl GameOutcome {
    pub fn new(target: u32, winner: Player, opponent_wins: u32) -> Self {
        debug_assert!(opponent_wins < target);
        let margin = target as i64 - opponent_wins as i64;
        GameOutcome {
            winner,
            opponent_wins,
            rounds: target + opponent_wins,
            net_profit: match winner {
                Player::Player1 => margin,
                Player::Player2 => -margin,
            },
        }
    }

    pub fn from_absorbing(state: GameState, target: u32) -> Option<Self> {
        let winner = state.winner(target)?;
        let opp = match winner {
            Player::Player1 => state.b,
            Player::Player2 => state.a,
        };
        Some(GameOutcome::new(target, winner, opp))
    }
}

/// Plays one match, consuming exactly one `u64` from `rng` per round.
pub fn play_match<R: RngCore + ?Sized>(regime: &Regime, rng: &mut R) -> GameOutcome {
    let n = regime.target;
    let mut s = GameState::START;
    while s.a < n && s.b < n {
        let (num, den) = regime.draw_odds(s);
        if draw_round(rng.next_u64(), num, den) {
            s.a += 1;
        } else {
            s.b += 1;
        }
    }
    GameOutcome::from_absorbing(s, n).expect("loop exits on an absorbing state")
}

/// Like [`play_match`] but reports every visited state to `visit`,
/// starting with the origin.
pub fn play_match_traced<R, F>(regime: &Regime, rng: &mut R, mut visit: F) -> GameOutcome
where
    R: RngCore + ?Sized,
    F: FnMut(GameState),
{
    let n = regime.target;
    let mut s = GameState::START;
    visit(s);
    while s.a < n && s.b < n {
        let (num, den) = regime.draw_odds(s);
        if draw_round(rng.next_u64(), num, den) {
            s.a += 1;
        } else {
            s.b += 1;
        }
        visit(s);
    }
    GameOutcome::from_absorbing(s, n).expect("loop exits on an absorbing state")
}

/// Match with i.i.d. rounds won by player 1 with probability `theta`.
pub fn play_iid<R: RngCore + ?Sized>(target: u32, theta: f64, rng: &mut R) -> GameOutcome {
    let num = float_threshold(theta);
    let mut s = GameState::START;
    while s.a < target && s.b < target {
        if draw_round(rng.next_u64(), num, 1 << 64) {
            s.a += 1;
        } else {
            s.b += 1;
        }
    }
    GameOutcome::from_absorbing(s, target).expect("loop exits on an absorbing state")
}

/// Replays a fixed sequence of round winners. The sequence must end
/// exactly when the match does.
pub fn play_scripted(regime: &Regime, rounds: &[Player]) -> Result<GameOutcome> {
    let n = regime.target;
    let mut s = GameState::START;
    for (i, who) in rounds.iter().enumerate() {
        if s.is_absorbing(n) {
            return Err(Error::contract(format!(
                "sequence continues after the match ended at round {i}"
            )));
        }
        s = step(s, n, *who == Player::Player1)?;
    }
    GameOutcome::from_absorbing(s, n).ok_or_else(|| {
        Error::contract(format!(
            "sequence of {} rounds ends before anyone reaches {n} wins",
            rounds.len()
        ))
    })
}

/// Reduced rational `w1 / (w1 + w2)`.
fn weights_to_prob(w1: &BigUint, w2: &BigUint) -> BigRational {
    let den = w1 + w2;
    let g = w1.gcd(&den);
    BigRational::new_raw((w1 / &g).into(), (den / g).into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use Player::*;

    fn three_fifths(n: u32) -> Regime {
        Regime::constant(Scalar::ratio(3, 5), n).unwrap()
    }

    /// Urn contents by explicit enumeration: list every ball still inside.
    fn urn_fraction(type1: u32, type2: u32) -> Scalar {
        let balls: Vec<u8> = std::iter::repeat(1u8)
            .take(type1 as usize)
            .chain(std::iter::repeat(2u8).take(type2 as usize))
            .collect();
        let ones = balls.iter().filter(|&&t| t == 1).count();
        Scalar::ratio(ones as i64, balls.len() as i64)
    }

    #[test]
    fn per_round_probabilities() {
        assert_eq!(
            round_win_probability(&three_fifths(3), GameState::START).unwrap(),
            Scalar::ratio(3, 5)
        );
        let polya = Regime::polya(1, 1, 3).unwrap();
        let got = round_win_probability(&polya, GameState::new(2, 1)).unwrap();
        assert_eq!(got, urn_fraction(1 + 2, 1 + 1));
        assert_eq!(got, Scalar::ratio(3, 5));

        let anti = Regime::anti_ok_corral(3).unwrap();
        let got = round_win_probability(&anti, GameState::new(1, 0)).unwrap();
        assert_eq!(got, urn_fraction(3 - 1, 3));
        assert_eq!(got, Scalar::ratio(2, 5));
        assert_eq!(
            round_win_probability(&anti, GameState::START).unwrap(),
            Scalar::ratio(1, 2)
        );
        let float = Regime::constant(Scalar::Float(0.6), 3).unwrap();
        assert_eq!(round_win_probability(&float, GameState::START).unwrap(), Scalar::Float(0.6));
    }

    #[test]
    fn polya_start_matches_initial_urn() {
        for (n1, n2) in [(1, 1), (2, 5), (7, 3)] {
            let r = Regime::polya(n1, n2, 4).unwrap();
            assert_eq!(
                round_win_probability(&r, GameState::START).unwrap(),
                Scalar::ratio(n1 as i64, (n1 + n2) as i64)
            );
        }
    }

    #[test]
    fn absorbing_or_invalid_states_are_rejected() {
        let r = three_fifths(2);
        assert!(round_win_probability(&r, GameState::new(2, 0)).is_err());
        assert!(round_win_probability(&r, GameState::new(3, 0)).is_err());
        assert!(step(GameState::new(0, 2), 2, true).is_err());
        assert!(step(GameState::new(2, 2), 2, true).is_err());
    }

    #[test]
    fn invalid_regimes() {
        assert!(Regime::constant(Scalar::int(0), 3).is_err());
        assert!(Regime::constant(Scalar::int(1), 3).is_err());
        assert!(Regime::constant(Scalar::Float(1.5), 3).is_err());
        assert!(Regime::constant(Scalar::ratio(1, 2), 0).is_err());
        assert!(Regime::polya(0, 1, 3).is_err());
        assert!(Regime::anti_ok_corral(0).is_err());
    }

    #[test]
    fn stepping() {
        assert_eq!(step(GameState::START, 3, true).unwrap(), GameState::new(1, 0));
        assert_eq!(step(GameState::new(2, 1), 3, false).unwrap(), GameState::new(2, 2));
        let end = step(GameState::new(2, 1), 3, true).unwrap();
        assert_eq!(end.winner(3), Some(Player1));
    }

    #[test]
    fn scripted_replays() {
        let o = play_scripted(&three_fifths(2), &[Player1, Player2, Player1]).unwrap();
        assert_eq!(o, GameOutcome::new(2, Player1, 1));
        assert_eq!((o.net_profit, o.rounds), (1, 3));

        let anti = Regime::anti_ok_corral(2).unwrap();
        let o = play_scripted(&anti, &[Player1, Player1]).unwrap();
        assert_eq!((o.winner, o.opponent_wins, o.net_profit), (Player1, 0, 2));

        assert!(play_scripted(&three_fifths(2), &[Player1]).is_err());
        assert!(play_scripted(&three_fifths(2), &[Player1, Player1, Player2]).is_err());
    }

    #[test]
    fn single_round_game() {
        let r = three_fifths(1);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let o = play_match(&r, &mut rng);
            assert_eq!((o.rounds, o.opponent_wins, o.net_profit.abs()), (1, 0, 1));
        }
    }

    #[test]
    fn draw_odds_extremes() {
        assert!(draw_round(u64::MAX, float_threshold(1.0), 1 << 64));
        assert!(!draw_round(0, float_threshold(0.0), 1 << 64));
        // one ball of each type: lower half of the word range wins
        assert!(draw_round(u64::MAX / 2, 1, 2));
        assert!(!draw_round(u64::MAX / 2 + 1, 1, 2));
    }

    #[test]
    fn anti_ok_ends_with_only_loser_balls() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..12 {
            let r = Regime::anti_ok_corral(n).unwrap();
            for _ in 0..50 {
                let mut last = GameState::START;
                let o = play_match_traced(&r, &mut rng, |s| {
                    assert!(s.a <= n && s.b <= n);
                    last = s;
                });
                let left1 = n - last.a;
                let left2 = n - last.b;
                match o.winner {
                    Player1 => assert_eq!(left1, 0),
                    Player2 => assert_eq!(left2, 0),
                }
                // |D_k| meets the line 2n - k
                assert_eq!(last.ball_difference().unsigned_abs(), (2 * n - last.round()) as u64);
            }
        }
    }

    #[test]
    fn regime_json_round_trip() {
        for r in [
            three_fifths(4),
            Regime::constant(Scalar::Float(0.7), 9).unwrap(),
            Regime::polya(2, 3, 5).unwrap(),
            Regime::anti_ok_corral(6).unwrap(),
        ] {
            let s = serde_json::to_string(&r).unwrap();
            assert_eq!(serde_json::from_str::<Regime>(&s).unwrap(), r);
        }
        assert!(serde_json::from_str::<Regime>(r#"{"regime":"constant","n":2,"p":"3/2"}"#).is_err());
    }

    proptest::proptest! {
        #[test]
        fn outcomes_are_consistent(seed in 0u64..u64::MAX, n in 1u32..40, which in 0u8..3) {
            let r = match which {
                0 => Regime::constant(Scalar::Float(0.55), n).unwrap(),
                1 => Regime::polya(2, 3, n).unwrap(),
                _ => Regime::anti_ok_corral(n).unwrap(),
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let o = play_match(&r, &mut rng);
            proptest::prop_assert_eq!(o.rounds, n + o.opponent_wins);
            proptest::prop_assert!(o.rounds >= n && o.rounds < 2 * n);
            proptest::prop_assert!(o.net_profit.unsigned_abs() >= 1 && o.net_profit.unsigned_abs() <= n as u64);
            let mut again = ChaCha8Rng::seed_from_u64(seed);
            proptest::prop_assert_eq!(play_match(&r, &mut again), o);
        }

        #[test]
        fn one_word_per_round(seed in 0u64..1000, n in 1u32..30) {
            let r = Regime::polya(1, 1, n).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let o = play_match(&r, &mut rng);
            let mut reference = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..o.rounds {
                reference.next_u64();
            }
            proptest::prop_assert_eq!(rng.next_u64(), reference.next_u64());
        }
    }
}
