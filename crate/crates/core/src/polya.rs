//! Pólya-urn asymptotics.
//!
//! A Pólya urn started from `(N1, N2)` balls is an i.i.d. sequence of
//! rounds given a `Beta(N1, N2)` bias. As `n` grows, `Z / n` converges to a
//! variable `zeta` on `[-1, 1]` whose density and positive mass (player 1's
//! limiting win probability) are computed here.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::RngCore;
use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::formulas::{binomial, factorial};
use crate::game::{play_iid, GameOutcome};
use crate::montecarlo::gamma_int_sample;
use crate::quadrature::{integrate, QuadratureResult};
use crate::scalar::Scalar;

pub const DEFAULT_TOL: f64 = 1e-12;

/// Exact mode limit for [`polya_symmetric_expected_profit`].
pub const SYMMETRIC_EXACT_CAP: u32 = 512;

fn check_urn(n1: u32, n2: u32) -> Result<()> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::param("n1/n2", "the urn needs at least one ball of each type"));
    }
    Ok(())
}

/// Natural log of a big unsigned integer.
fn ln_biguint(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits < 1000 {
        return v.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (v >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ln(Gamma(N1 + N2) / (Gamma(N1) Gamma(N2)))` from the exact integer
/// `(N1+N2-1)! / ((N1-1)! (N2-1)!) = N1 C(N1+N2-1, N1)`.
fn ln_beta_prefactor(n1: u32, n2: u32) -> f64 {
    let v = binomial((n1 + n2 - 1) as u64, n1 as u64) * n1;
    ln_biguint(&v)
}

/// `(1 - t)^e` in log space, with `0 * ln 0 = 0`.
fn ln_pow_one_minus(t: f64, e: u32) -> f64 {
    if e == 0 {
        0.0
    } else {
        e as f64 * (1.0 - t).ln()
    }
}

/// Limiting density of `Z / n` in the Pólya regime.
pub fn zeta_density(n1: u32, n2: u32, x: f64) -> Result<f64> {
    check_urn(n1, n2)?;
    if !(x.abs() <= 1.0) {
        return Err(Error::param("x", format!("must lie in [-1, 1], got {x}")));
    }
    Ok(density_unchecked(ln_beta_prefactor(n1, n2), n1, n2, x))
}

fn density_unchecked(ln_pref: f64, n1: u32, n2: u32, x: f64) -> f64 {
    let t = x.abs();
    let e = if x >= 0.0 { n2 - 1 } else { n1 - 1 };
    (ln_pref + ln_pow_one_minus(t, e) - (n1 + n2) as f64 * (2.0 - t).ln()).exp()
}

/// Player 1's limiting win probability,
/// `Gamma(N1+N2)/(Gamma(N1)Gamma(N2)) int_0^1 (1-x)^(N2-1) / (2-x)^(N1+N2) dx`.
pub fn polya_win_probability(n1: u32, n2: u32, tol: f64) -> Result<QuadratureResult> {
    check_urn(n1, n2)?;
    let ln_pref = ln_beta_prefactor(n1, n2);
    integrate(|x| density_unchecked(ln_pref, n1, n2, x), 0.0, 1.0, tol)
}

/// Total mass of the limiting density, by quadrature over both halves.
pub fn zeta_total_mass(n1: u32, n2: u32, tol: f64) -> Result<QuadratureResult> {
    check_urn(n1, n2)?;
    let ln_pref = ln_beta_prefactor(n1, n2);
    let f = |x: f64| density_unchecked(ln_pref, n1, n2, x);
    let neg = integrate(f, -1.0, 0.0, tol / 2.0)?;
    let pos = integrate(f, 0.0, 1.0, tol / 2.0)?;
    Ok(QuadratureResult {
        value: neg.value + pos.value,
        error_estimate: neg.error_estimate + pos.error_estimate,
        panels: neg.panels + pos.panels,
    })
}

/// `points` evenly spaced `(x, f_zeta(x))` pairs covering `[-1, 1]`.
pub fn density_grid(n1: u32, n2: u32, points: usize) -> Result<Vec<(f64, f64)>> {
    check_urn(n1, n2)?;
    if points < 2 {
        return Err(Error::param("points", "need at least 2 grid points"));
    }
    let ln_pref = ln_beta_prefactor(n1, n2);
    Ok((0..points)
        .map(|i| {
            let x = if i + 1 == points {
                1.0
            } else {
                -1.0 + 2.0 * i as f64 / (points - 1) as f64
            };
            (x, density_unchecked(ln_pref, n1, n2, x))
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolyaAsymptotics {
    pub n1: u32,
    pub n2: u32,
    pub win_prob_p1: f64,
    pub density_grid: Option<Vec<(f64, f64)>>,
}

pub fn polya_asymptotics(n1: u32, n2: u32, grid_points: Option<usize>, tol: f64) -> Result<PolyaAsymptotics> {
    let win = polya_win_probability(n1, n2, tol)?;
    let density_grid = grid_points.map(|p| density_grid(n1, n2, p)).transpose()?;
    Ok(PolyaAsymptotics {
        n1,
        n2,
        win_prob_p1: win.value,
        density_grid,
    })
}

/// The winner's limiting expected profit for `N1 = N2 = n`, in every form
/// available.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymmetricProfit {
    pub n: u32,
    /// `((2n)! / ((n-1)!^2 2^(2n-1)) - n) / (n - 1)`; exact up to
    /// [`SYMMETRIC_EXACT_CAP`].
    pub closed_form: Scalar,
    /// `(2n)!/(n-1)!^2 * int_0^1 x (1-x)^(n-1) / (2-x)^(2n) dx` with the
    /// integral done in exact rational arithmetic.
    pub integral_exact: Option<Scalar>,
    /// The same integral by quadrature.
    pub integral_quadrature: QuadratureResult,
    /// `2 sqrt(n / pi) - 1`.
    pub asymptotic: f64,
}

/// Exact `int_0^1 x (1-x)^(n-1) (2-x)^(-2n) dx`.
///
/// With `u = 2 - x` the integrand becomes `(2-u)(u-1)^(n-1) u^(-2n)`, a
/// Laurent polynomial whose powers run from `-2n` to `-n`, so no logarithm
/// appears for `n >= 2`.
pub fn symmetric_profit_integral_exact(n: u32) -> Result<BigRational> {
    if n < 2 {
        return Err(Error::param("n", "needs n >= 2"));
    }
    let n = n as u64;
    // (u-1)^(n-1) = sum_i C(n-1, i) u^i (-1)^(n-1-i)
    let mut poly = vec![BigInt::zero(); n as usize + 1];
    for i in 0..n {
        let c = BigInt::from(binomial(n - 1, i));
        let c = if (n - 1 - i) % 2 == 0 { c } else { -c };
        // times (2 - u)
        poly[i as usize] += &c * 2;
        poly[i as usize + 1] -= c;
    }
    let two = BigRational::from_integer(2.into());
    let mut total = BigRational::zero();
    for (j, c) in poly.into_iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        // int_1^2 u^e du with e = j - 2n <= -n <= -2
        let e1 = j as i64 - 2 * n as i64 + 1;
        let pow2 = num_traits::pow(two.clone(), e1.unsigned_abs() as usize);
        let two_pow = BigRational::one() / pow2;
        let val = (two_pow - BigRational::one()) / BigRational::from_integer(e1.into());
        total += BigRational::from_integer(c) * val;
    }
    Ok(total)
}

pub fn polya_symmetric_expected_profit(n: u32, tol: f64) -> Result<SymmetricProfit> {
    if n < 2 {
        return Err(Error::param("n", "needs n >= 2"));
    }
    let nn = n as u64;
    let asymptotic = 2.0 * (n as f64 / std::f64::consts::PI).sqrt() - 1.0;
    // ln((2n)! / (n-1)!^2)
    let ln_pref = ln_gamma(2.0 * n as f64 + 1.0) - 2.0 * ln_gamma(n as f64);
    let integrand = |x: f64| {
        if x <= 0.0 || x >= 1.0 {
            return 0.0;
        }
        (ln_pref + x.ln() + (n - 1) as f64 * (1.0 - x).ln() - 2.0 * n as f64 * (2.0 - x).ln()).exp()
    };
    // the value grows like sqrt(n), so the tolerance is taken relative to it
    let integral_quadrature = integrate(integrand, 0.0, 1.0, tol * asymptotic.max(1.0))?;

    let (closed_form, integral_exact) = if n <= SYMMETRIC_EXACT_CAP {
        let fm1 = factorial(nn - 1);
        let pref = BigRational::new(factorial(2 * nn).into(), (&fm1 * &fm1).into());
        let pow = BigRational::from_integer(BigInt::from(2).pow((2 * n - 1) as u32));
        let closed = (&pref / pow - BigRational::from_integer(nn.into()))
            / BigRational::from_integer((nn - 1).into());
        let integral = pref * symmetric_profit_integral_exact(n)?;
        (Scalar::Exact(closed), Some(Scalar::Exact(integral)))
    } else {
        let ln_a = ln_pref - (2 * n - 1) as f64 * std::f64::consts::LN_2;
        (Scalar::Float((ln_a.exp() - n as f64) / (n - 1) as f64), None)
    };
    Ok(SymmetricProfit {
        n,
        closed_form,
        integral_exact,
        integral_quadrature,
        asymptotic,
    })
}

/// Pólya match through its Beta mixture: draw the bias once from
/// `Beta(N1, N2)` (ratio of integer-shape gammas), then play i.i.d. rounds.
pub fn beta_mixture_sampler<R: RngCore + ?Sized>(n1: u32, n2: u32, target: u32, rng: &mut R) -> GameOutcome {
    let g1 = gamma_int_sample(n1, 1.0, rng);
    let g2 = gamma_int_sample(n2, 1.0, rng);
    play_iid(target, g1 / (g1 + g2), rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn symmetric_urns_are_fair() {
        for n in [1, 2, 5, 13] {
            let r = polya_win_probability(n, n, 1e-12).unwrap();
            assert!((r.value - 0.5).abs() < 1e-12, "{n}: {}", r.value);
        }
    }

    #[test]
    fn two_one_urn() {
        // 2 (2-x)^-3 integrates to [(2-x)^-2]_0^1 = 1 - 1/4
        let r = polya_win_probability(2, 1, 1e-12).unwrap();
        assert!((r.value - 0.75).abs() < 1e-12);
        let r = polya_win_probability(1, 2, 1e-12).unwrap();
        assert!((r.value - 0.25).abs() < 1e-12);
    }

    #[test]
    fn density_values() {
        assert!((zeta_density(1, 1, 0.0).unwrap() - 0.25).abs() < 1e-15);
        assert!(zeta_density(1, 1, 1.5).is_err());
        assert!(zeta_density(0, 1, 0.0).is_err());
        // continuous at the origin
        let l = zeta_density(2, 3, -1e-12).unwrap();
        let r = zeta_density(2, 3, 1e-12).unwrap();
        assert!((l - r).abs() < 1e-9);
        let g = density_grid(2, 3, 401).unwrap();
        assert_eq!(g.len(), 401);
        assert_eq!((g[0].0, g[400].0), (-1.0, 1.0));
        assert!(g.iter().all(|(_, f)| *f >= 0.0));
    }

    #[test]
    fn positive_mass_is_win_probability() {
        for (a, b) in [(1, 1), (2, 3), (5, 5), (7, 2)] {
            let ln_pref = ln_beta_prefactor(a, b);
            let half = integrate(|x| density_unchecked(ln_pref, a, b, x), 0.0, 1.0, 1e-13).unwrap();
            let win = polya_win_probability(a, b, 1e-12).unwrap();
            assert!((half.value - win.value).abs() <= 2e-12);
            let mass = zeta_total_mass(a, b, 1e-12).unwrap();
            assert!((mass.value - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn exact_integral_small_n() {
        // n = 2: 4!/1!^2 * I = 1, so I = 1/24
        assert_eq!(
            symmetric_profit_integral_exact(2).unwrap(),
            BigRational::new(1.into(), 24.into())
        );
        let s = polya_symmetric_expected_profit(2, 1e-12).unwrap();
        assert_eq!(s.closed_form, Scalar::int(1));
        assert_eq!(s.integral_exact, Some(Scalar::int(1)));
        assert!(polya_symmetric_expected_profit(1, 1e-12).is_err());
    }

    #[test]
    fn forms_agree_at_moderate_n() {
        for n in [3, 5, 10, 40] {
            let s = polya_symmetric_expected_profit(n, 1e-12).unwrap();
            assert_eq!(Some(s.closed_form.clone()), s.integral_exact);
            assert!((s.integral_quadrature.value - s.closed_form.to_f64()).abs() < 1e-10);
        }
    }

    #[test]
    fn float_closed_form_beyond_cap() {
        let lo = polya_symmetric_expected_profit(SYMMETRIC_EXACT_CAP, 1e-10).unwrap();
        let hi = polya_symmetric_expected_profit(SYMMETRIC_EXACT_CAP + 1, 1e-10).unwrap();
        assert!(lo.closed_form.is_exact() && !hi.closed_form.is_exact());
        assert!((hi.closed_form.to_f64() - hi.integral_quadrature.value).abs() < 1e-8);
        assert!(hi.closed_form.to_f64() > lo.closed_form.to_f64());
    }

    #[test]
    fn degenerate_bias_gives_straight_wins() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let o = play_iid(9, 1.0, &mut rng);
        assert_eq!((o.opponent_wins, o.net_profit), (0, 9));
    }

    #[test]
    fn big_prefactor_logs() {
        let v = binomial(3000, 1500);
        assert!((ln_biguint(&v) - crate::formulas::ln_binomial(3000, 1500)).abs() < 1e-9);
    }
}
