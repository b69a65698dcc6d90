//! Laws of the winner's margin in "first to n wins" matches.
//!
//! Three round-probability regimes are supported: a constant probability
//! `p`, a Pólya urn with reinforcement and an urn drained without
//! replacement (the anti-OK Corral). For each of them the crate offers
//!
//! * an exact forward DP ([`exact`]) giving the joint law of the winner and
//!   the loser's win count, in big-rational or float arithmetic;
//! * closed forms and bounds ([`formulas`], [`polya`]) checked against it;
//! * reproducible Monte Carlo samplers ([`montecarlo`]) and the statistics
//!   used to compare them with the exact laws ([`stats`]);
//! * named verification suites ([`verify`]) bundling all of the above.

pub mod error;
pub mod exact;
pub mod formulas;
pub mod game;
pub mod montecarlo;
pub mod polya;
pub mod quadrature;
pub mod scalar;
pub mod stats;
pub mod verify;

pub use error::{Error, Result};
pub use exact::{exact_distribution, DpOptions, Expectations, MarginDistribution};
pub use game::{play_match, round_win_probability, step, GameOutcome, GameState, Player, Regime, RegimeKind};
pub use scalar::{Scalar, ScalarMode};
