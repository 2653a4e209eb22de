//! Digit strings in the primes.
//!
//! Exact counting of integers whose decimal form avoids a fixed digit string,
//! the explicit least-prime bound `log p / log log p <= 5.7 l^2 10^l` with its
//! inversion, the coupon-collector estimate for the coverage threshold, and
//! runnable experiments over a segmented prime sieve: least prime containing a
//! string, the coverage threshold `M(l)`, arithmetic progressions of primes that
//! all contain a string, and relative-density tables.

pub mod bounds;
pub mod cli;
pub mod counting;
pub mod digits;
pub mod error;
pub mod experiments;
pub mod primes;

pub use error::{Error, Result};
