//! Explicit bounds on the least prime containing a string of length `l`, and
//! the coupon-collector estimate of the coverage threshold.
//!
//! All logarithms are natural: `y / ln y = 57` has the root `y = 330.66`.

use std::f64::consts::{E, LN_10};

use crate::{Error, Result};

/// Constant of the simplified bound `5.7 l^2 10^l`.
pub const SIMPLE_BOUND_CONSTANT: f64 = 5.7;

/// Longest string length whose bounds are reported directly rather than as logarithms.
pub const MAX_LINEAR_LENGTH: u32 = 18;

/// Longest string length accepted by the bound and prediction functions.
pub const MAX_LENGTH: u32 = 300;

const SOLVE_MAX_ITERATIONS: usize = 1_000_000;
const SOLVE_TOLERANCE: f64 = 1e-9;

fn check_length(l: u32, min: u32) -> Result<()> {
    if l < min || l > MAX_LENGTH {
        return Err(Error::Domain(format!(
            "string length {l} outside {min}..={MAX_LENGTH}"
        )));
    }
    Ok(())
}

/// `5.7 l^2 10^l` for `1 <= l <= 18`. Use [`theorem_bound_simple_ln`] beyond.
pub fn theorem_bound_simple(l: u32) -> Result<f64> {
    if !(1..=MAX_LINEAR_LENGTH).contains(&l) {
        return Err(Error::Domain(format!(
            "l = {l} outside 1..={MAX_LINEAR_LENGTH}; use the log form"
        )));
    }
    let l = l as f64;
    Ok(SIMPLE_BOUND_CONSTANT * l * l * 10f64.powf(l))
}

/// Natural log of `5.7 l^2 10^l`.
pub fn theorem_bound_simple_ln(l: u32) -> Result<f64> {
    check_length(l, 1)?;
    let l = l as f64;
    Ok(SIMPLE_BOUND_CONSTANT.ln() + 2.0 * l.ln() + l * LN_10)
}

/// `r ln^2 r (1 + (1 + ln((r-1)/(r-2))) / ln r)`: some prime whose base-`r`
/// digits include any fixed digit satisfies `ln p / ln ln p` at most this.
pub fn theorem_bound_exact(r: u128) -> Result<f64> {
    if r < 3 {
        return Err(Error::Domain(format!("base r = {r} must be at least 3")));
    }
    let rf = r as f64;
    let ln_r = rf.ln();
    let tail = (1.0 / (r - 2) as f64).ln_1p();
    Ok(rf * ln_r * ln_r * (1.0 + (1.0 + tail) / ln_r))
}

/// Natural log of [`theorem_bound_exact`] at `r = 10^l`.
pub fn theorem_bound_exact_ln(l: u32) -> Result<f64> {
    check_length(l, 1)?;
    let ln_r = l as f64 * LN_10;
    let inv = match 10u128.checked_pow(l) {
        Some(r) => 1.0 / (r - 2) as f64,
        None => (-ln_r).exp(),
    };
    Ok(ln_r + 2.0 * ln_r.ln() + ((1.0 + inv.ln_1p()) / ln_r).ln_1p())
}

/// The root `y > e` of `y / ln y = b`.
///
/// Fixed-point iteration `y <- b ln y` from `y = b ln b`. The seed lies below
/// the root and the map is increasing and concave there, so the iterates
/// climb monotonically to it at rate `1 / ln y`.
pub fn solve_log_n(b: f64) -> Result<f64> {
    solve_with_iterations(b).map(|(y, _)| y)
}

fn solve_with_iterations(b: f64) -> Result<(f64, usize)> {
    if !b.is_finite() || b <= E {
        return Err(Error::Domain(format!(
            "y / log y = {b} has no root above e unless the target exceeds e"
        )));
    }
    let mut y = b * b.ln();
    let mut iterations = 0;
    while iterations < SOLVE_MAX_ITERATIONS {
        iterations += 1;
        let next = b * y.ln();
        let done = (next - y).abs() <= 1e-15 * next;
        y = next;
        if done {
            break;
        }
    }
    let residual = (y / y.ln() - b).abs();
    if residual > SOLVE_TOLERANCE * b {
        return Err(Error::Domain(format!(
            "y / log y = {b} did not converge (residual {residual:e})"
        )));
    }
    Ok((y, iterations))
}

/// `ln y` for the root of `y / ln y = e^ln_b`, for targets too large for `f64`.
/// Iterates `z <- ln_b + ln z` with `z = ln y`.
pub fn solve_log_n_ln(ln_b: f64) -> Result<f64> {
    if !ln_b.is_finite() || ln_b <= 1.0 {
        return Err(Error::Domain(format!(
            "log target {ln_b} must exceed 1"
        )));
    }
    let mut z = ln_b + ln_b.ln();
    for _ in 0..SOLVE_MAX_ITERATIONS {
        let next = ln_b + z.ln();
        let done = (next - z).abs() <= 1e-15 * next;
        z = next;
        if done {
            return Ok(z);
        }
    }
    Err(Error::Domain(format!("log-form solve for {ln_b} did not converge")))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouponPrediction {
    /// `10^(l-1) / ((l-1) ln 10) + 9 10^(l-1) ln(9 10^(l-1))`
    pub expected_pi: f64,
    /// Root of `N / ln N = expected_pi`.
    pub predicted_n: f64,
}

/// Coupon-collector estimate: the primes below `10^(l-1)` plus the
/// `n ln n` draws needed to see all `n = 9 10^(l-1)` strings with a nonzero
/// first digit, turned into a bound `N` by inverting `pi(N) ~ N / ln N`.
pub fn coupon_prediction(l: u32) -> Result<CouponPrediction> {
    check_length(l, 2)?;
    if l > 290 {
        return Err(Error::Domain(format!("l = {l} overflows; use coupon_prediction_ln")));
    }
    let block = 10f64.powi(l as i32 - 1);
    let universe = 9.0 * block;
    let expected_pi = block / ((l - 1) as f64 * LN_10) + universe * universe.ln();
    Ok(CouponPrediction {
        expected_pi,
        predicted_n: solve_log_n(expected_pi)?,
    })
}

/// [`coupon_prediction`] with both fields as natural logs.
pub fn coupon_prediction_ln(l: u32) -> Result<CouponPrediction> {
    check_length(l, 2)?;
    let lm1 = (l - 1) as f64;
    let ln_block = lm1 * LN_10;
    let ln_universe = 9f64.ln() + ln_block;
    let ln_expected = ln_block + (1.0 / (lm1 * LN_10) + 9.0 * ln_universe).ln();
    Ok(CouponPrediction {
        expected_pi: ln_expected,
        predicted_n: solve_log_n_ln(ln_expected)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticPrediction {
    pub predicted_n: f64,
    /// `predicted_n / (l^2 10^l)`, the constant in `N ~ k l^2 10^l`.
    pub implied_constant: f64,
}

pub fn asymptotic_prediction(l: u32) -> Result<AsymptoticPrediction> {
    let coupon = coupon_prediction(l)?;
    let lf = l as f64;
    Ok(AsymptoticPrediction {
        predicted_n: coupon.predicted_n,
        implied_constant: coupon.predicted_n / (lf * lf * 10f64.powi(l as i32)),
    })
}

/// Whether a report's real fields are plain values or natural logarithms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

/// Every bound for one string length. With [`Scale::Log`] each real field
/// holds the natural log of the quantity.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub l: u32,
    /// `10^l`, when it fits in 128 bits.
    pub r: Option<u128>,
    pub scale: Scale,
    pub bound_simple: f64,
    pub bound_exact: f64,
    /// Root of `y / ln y = bound_simple`, the `log N` of the bound.
    pub log_n: f64,
    pub coupon_pi: Option<f64>,
    pub coupon_n: Option<f64>,
}

pub fn bound_report(l: u32) -> Result<BoundReport> {
    check_length(l, 1)?;
    let r = 10u128.checked_pow(l);
    if l <= MAX_LINEAR_LENGTH {
        let bound_simple = theorem_bound_simple(l)?;
        let coupon = if l >= 2 { Some(coupon_prediction(l)?) } else { None };
        Ok(BoundReport {
            l,
            r,
            scale: Scale::Linear,
            bound_simple,
            bound_exact: theorem_bound_exact(r.expect("10^18 fits"))?,
            log_n: solve_log_n(bound_simple)?,
            coupon_pi: coupon.map(|c| c.expected_pi),
            coupon_n: coupon.map(|c| c.predicted_n),
        })
    } else {
        let bound_simple = theorem_bound_simple_ln(l)?;
        let coupon = coupon_prediction_ln(l)?;
        Ok(BoundReport {
            l,
            r,
            scale: Scale::Log,
            bound_simple,
            bound_exact: theorem_bound_exact_ln(l)?,
            log_n: solve_log_n_ln(bound_simple)?,
            coupon_pi: Some(coupon.expected_pi),
            coupon_n: Some(coupon.predicted_n),
        })
    }
}
