//! Decimal digit strings and window extraction.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// A non-empty sequence of decimal digits. Leading zeros are significant:
/// `"05"` and `"5"` are different strings.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DigitString {
    digits: Vec<u8>,
}

impl DigitString {
    pub fn from_digits(digits: Vec<u8>) -> Result<Self> {
        if digits.is_empty() {
            return Err(Error::InvalidInput("digit string is empty".into()));
        }
        if let Some(d) = digits.iter().find(|&&d| d > 9) {
            return Err(Error::InvalidInput(format!("{d} is not a decimal digit")));
        }
        Ok(Self { digits })
    }

    /// The `len`-digit rendering of `value`, zero-padded on the left.
    pub fn from_value(value: u64, len: usize) -> Result<Self> {
        if len == 0 || len > 19 {
            return Err(Error::InvalidInput(format!("window length {len} out of range 1..=19")));
        }
        if value >= 10u64.pow(len as u32) {
            return Err(Error::InvalidInput(format!("{value} does not fit in {len} digits")));
        }
        let mut digits = vec![0u8; len];
        let mut v = value;
        for slot in digits.iter_mut().rev() {
            *slot = (v % 10) as u8;
            v /= 10;
        }
        Ok(Self { digits })
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Positional value of the digits, ignoring leading zeros. `None` past 19 digits.
    pub fn value(&self) -> Option<u64> {
        if self.digits.len() > 19 {
            return None;
        }
        self.digits
            .iter()
            .try_fold(0u64, |acc, &d| acc.checked_mul(10)?.checked_add(d as u64))
    }

    pub fn has_leading_zero(&self) -> bool {
        self.digits[0] == 0
    }
}

impl FromStr for DigitString {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        parse_digit_string(text)
    }
}

impl fmt::Display for DigitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.digits {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

pub fn parse_digit_string(text: &str) -> Result<DigitString> {
    if text.is_empty() {
        return Err(Error::InvalidInput("digit string is empty".into()));
    }
    let digits = text
        .chars()
        .map(|c| match c {
            '0'..='9' => Ok(c as u8 - b'0'),
            _ => Err(Error::InvalidInput(format!("{c:?} in {text:?} is not a decimal digit"))),
        })
        .collect::<Result<Vec<u8>>>()?;
    Ok(DigitString { digits })
}

/// Most-significant-first digits of `n`. Zero renders as `[0]`.
pub fn decimal_digits(n: u128) -> Vec<u8> {
    if n == 0 {
        return vec![0];
    }
    let mut out = Vec::with_capacity(39);
    let mut v = n;
    while v > 0 {
        out.push((v % 10) as u8);
        v /= 10;
    }
    out.reverse();
    out
}

pub fn digit_count(n: u128) -> usize {
    let mut count = 1;
    let mut v = n / 10;
    while v > 0 {
        count += 1;
        v /= 10;
    }
    count
}

pub fn contains(n: u64, pattern: &DigitString) -> bool {
    let hay = decimal_digits(n as u128);
    let needle = pattern.digits();
    needle.len() <= hay.len() && hay.windows(needle.len()).any(|w| w == needle)
}

/// All contiguous length-`l` windows of the decimal digits of `n`.
pub fn windows(n: u64, l: usize) -> BTreeSet<DigitString> {
    if l == 0 {
        return BTreeSet::new();
    }
    decimal_digits(n as u128)
        .windows(l)
        .map(|w| DigitString { digits: w.to_vec() })
        .collect()
}

/// Numeric values of the length-`l` windows of `n`, least-significant window
/// first. A window `"03"` yields `3`; callers that care about leading zeros
/// compare against `10^(l-1)`.
pub fn window_values(n: u64, l: u32) -> impl Iterator<Item = u64> {
    let modulus = 10u64.checked_pow(l).unwrap_or(u64::MAX);
    let count = (digit_count(n as u128) as u32 + 1).saturating_sub(l);
    let mut rest = n;
    (0..count).map(move |_| {
        let w = rest % modulus;
        rest /= 10;
        w
    })
}
