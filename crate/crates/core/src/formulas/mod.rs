//! Closed forms and explicit bounds for the three regimes, with exact and
//! float evaluation.
//!
//! Evaluators derived for `p >= 1/2` accept any `p` in `(0, 1)`: below one
//! half the players' roles are swapped and signs flipped where needed.

mod antiok;
mod bounds;
mod catalan;
mod combinatorics;
mod identities;
mod margins;

pub use antiok::{antiok_exact_prob, antiok_limit_pmf};
pub use bounds::{gamma_race_bound, martingale_bounds, negbin_tail_bound, BoundDirection, BoundReport};
pub use catalan::{catalan_partial_sum_limit_check, expected_profit_catalan, expected_profit_with_table};
pub use combinatorics::{binomial, catalan_numbers, factorial, ln_binomial, CatalanTable};
pub(crate) use identities::lemmain_against;
pub use identities::{verify_a_m_expansion, verify_identity_ident, verify_identity_lemmain};
pub use margins::{approx_error_bound, negbin_approx_pmf, win_margin_pmf_exact};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub(crate) fn check_open_unit(name: &'static str, p: &Scalar) -> Result<()> {
    let ok = match p {
        Scalar::Exact(r) => r > &BigRational::zero() && r < &BigRational::one(),
        Scalar::Float(x) => *x > 0.0 && *x < 1.0,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::param(name, format!("must lie strictly inside (0, 1), got {p}")))
    }
}

pub(crate) fn complement(p: &Scalar) -> Scalar {
    &Scalar::one(p.mode()) - p
}

pub(crate) fn half_of(p: &Scalar) -> Scalar {
    match p {
        Scalar::Exact(_) => Scalar::ratio(1, 2),
        Scalar::Float(_) => Scalar::Float(0.5),
    }
}

/// `(max(p, q), min(p, q))`.
pub(crate) fn favourite(p: &Scalar) -> (Scalar, Scalar) {
    let q = complement(p);
    if p >= &half_of(p) {
        (p.clone(), q)
    } else {
        (q, p.clone())
    }
}
