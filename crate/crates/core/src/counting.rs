//! Counting integers whose decimal representation avoids a digit string.
//!
//! [`AvoiderCounter`] gives the exact count `R(x)` of `n` in `[1, x]` that do
//! not contain a pattern. It runs a digit DP over the states of a
//! [`PatternAutomaton`]: the digits of `x` are walked most-significant first,
//! and at each position the completions of every smaller digit are read off a
//! table of avoiding suffix counts. Shorter numbers are counted one length at
//! a time, each starting the automaton on its first nonzero digit. Leading
//! zeros never feed the automaton, so `512` does not contain `"05"`.
//!
//! The base-`r` functions evaluate the closed forms obtained by reading a
//! length-`l` string as a single digit `b` in base `r = 10^l`.

use crate::digits::{decimal_digits, DigitString};
use crate::{Error, Result};

/// Largest number of decimal digits an exact count accepts.
pub const MAX_COUNT_DIGITS: usize = 38;

/// Failure-function automaton over the digits `0..=9` that recognises the
/// first occurrence of a pattern. State `s < l` means the longest pattern
/// prefix ending here has length `s`; state `l` accepts and is absorbing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternAutomaton {
    pattern: DigitString,
    transitions: Vec<[u8; 10]>,
}

impl PatternAutomaton {
    pub fn new(pattern: &DigitString) -> Self {
        let p = pattern.digits();
        let l = p.len();
        // failure[i]: length of the longest proper border of p[..=i]
        let mut failure = vec![0usize; l];
        let mut k = 0;
        for i in 1..l {
            while k > 0 && p[i] != p[k] {
                k = failure[k - 1];
            }
            if p[i] == p[k] {
                k += 1;
            }
            failure[i] = k;
        }
        let mut transitions = vec![[0u8; 10]; l];
        for s in 0..l {
            for d in 0..10u8 {
                transitions[s][d as usize] = if p[s] == d {
                    (s + 1) as u8
                } else if s == 0 {
                    0
                } else {
                    transitions[failure[s - 1]][d as usize]
                };
            }
        }
        Self {
            pattern: pattern.clone(),
            transitions,
        }
    }

    pub fn pattern(&self) -> &DigitString {
        &self.pattern
    }

    pub fn state_count(&self) -> usize {
        self.transitions.len() + 1
    }

    pub fn accept_state(&self) -> usize {
        self.transitions.len()
    }

    pub fn transition(&self, state: usize, digit: u8) -> usize {
        if state == self.accept_state() {
            state
        } else {
            self.transitions[state][digit as usize] as usize
        }
    }

    /// Feeds the digits and reports whether the accept state was reached.
    pub fn matches_digits(&self, digits: &[u8]) -> bool {
        let accept = self.accept_state();
        let mut state = 0;
        for &d in digits {
            state = self.transition(state, d);
            if state == accept {
                return true;
            }
        }
        false
    }

    /// Equivalent to [`crate::digits::contains`], without allocating.
    pub fn matches(&self, n: u64) -> bool {
        let mut buf = [0u8; 20];
        let mut len = 0;
        let mut v = n;
        loop {
            buf[len] = (v % 10) as u8;
            len += 1;
            v /= 10;
            if v == 0 {
                break;
            }
        }
        let accept = self.accept_state();
        let mut state = 0;
        for &d in buf[..len].iter().rev() {
            state = self.transition(state, d);
            if state == accept {
                return true;
            }
        }
        false
    }
}

pub fn build_automaton(pattern: &DigitString) -> PatternAutomaton {
    PatternAutomaton::new(pattern)
}

/// An exact count of avoiders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AvoiderCount(pub u128);

impl AvoiderCount {
    pub fn value(self) -> u128 {
        self.0
    }
}

impl std::fmt::Display for AvoiderCount {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// Exact `R(x)` for one pattern, with the suffix table built once.
#[derive(Debug, Clone)]
pub struct AvoiderCounter {
    automaton: PatternAutomaton,
    /// `free[m][s]`: digit strings of length `m` that, fed from state `s`,
    /// never reach the accept state.
    free: Vec<Vec<u128>>,
}

impl AvoiderCounter {
    pub fn new(pattern: &DigitString) -> Self {
        let automaton = PatternAutomaton::new(pattern);
        let live = automaton.accept_state();
        let mut free = vec![vec![1u128; live]];
        for m in 1..MAX_COUNT_DIGITS {
            let prev = &free[m - 1];
            let row = (0..live)
                .map(|s| {
                    (0..10u8)
                        .map(|d| automaton.transition(s, d))
                        .filter(|&t| t < live)
                        .map(|t| prev[t])
                        .sum()
                })
                .collect();
            free.push(row);
        }
        Self { automaton, free }
    }

    pub fn automaton(&self) -> &PatternAutomaton {
        &self.automaton
    }

    /// Avoiders with exactly `len` digits (no leading zero).
    fn of_length(&self, len: usize) -> u128 {
        let live = self.automaton.accept_state();
        (1..10u8)
            .map(|d| self.automaton.transition(0, d))
            .filter(|&t| t < live)
            .map(|t| self.free[len - 1][t])
            .sum()
    }

    /// Number of `n` in `[1, x]` whose decimal digits avoid the pattern.
    pub fn count(&self, x: u128) -> Result<AvoiderCount> {
        if x == 0 {
            return Ok(AvoiderCount(0));
        }
        let digits = decimal_digits(x);
        let len = digits.len();
        if len > MAX_COUNT_DIGITS {
            return Err(Error::InvalidInput(format!(
                "{x} has more than {MAX_COUNT_DIGITS} digits"
            )));
        }
        let live = self.automaton.accept_state();
        let mut total: u128 = (1..len).map(|m| self.of_length(m)).sum();
        let mut state = 0;
        for (i, &top) in digits.iter().enumerate() {
            let lowest = if i == 0 { 1 } else { 0 };
            let rest = len - i - 1;
            for d in lowest..top {
                let t = self.automaton.transition(state, d);
                if t < live {
                    total += self.free[rest][t];
                }
            }
            state = self.automaton.transition(state, top);
            if state == live {
                return Ok(AvoiderCount(total));
            }
        }
        // x itself avoids the pattern
        Ok(AvoiderCount(total + 1))
    }
}

/// Exact `R(x)`. Build an [`AvoiderCounter`] instead when counting many `x`.
pub fn count_avoiders(pattern: &DigitString, x: u128) -> Result<AvoiderCount> {
    AvoiderCounter::new(pattern).count(x)
}

/// A base `r >= 3`, a forbidden base-`r` digit `b`, and the digit count `k`
/// of the `x` under discussion (`r^(k-1) <= x < r^k`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BaseRContext {
    r: u128,
    b: u128,
    k: u32,
}

impl BaseRContext {
    pub fn new(r: u128, b: u128, k: u32) -> Result<Self> {
        if r < 3 {
            return Err(Error::Domain(format!("base r = {r} must be at least 3")));
        }
        if b >= r {
            return Err(Error::Domain(format!("digit {b} is not a base-{r} digit")));
        }
        if k == 0 {
            return Err(Error::Domain("digit count k must be positive".into()));
        }
        Ok(Self { r, b, k })
    }

    /// Context for `x >= 1`, with `k = floor(log_r x) + 1`.
    pub fn for_x(r: u128, b: u128, x: u128) -> Result<Self> {
        if x == 0 {
            return Err(Error::Domain("x must be positive".into()));
        }
        Self::new(r, b, 1)?;
        let mut k = 1;
        let mut power = r;
        while power <= x {
            k += 1;
            match power.checked_mul(r) {
                Some(p) => power = p,
                None => break,
            }
        }
        Self::new(r, b, k)
    }

    /// The base `10^l` context in which a length-`l` string is the single digit `b`.
    pub fn for_pattern(pattern: &DigitString, x: u128) -> Result<Self> {
        let l = pattern.len() as u32;
        let r = 10u128
            .checked_pow(l)
            .ok_or_else(|| Error::Overflow(format!("10^{l} exceeds 128 bits")))?;
        let b = pattern
            .value()
            .ok_or_else(|| Error::Overflow(format!("pattern {pattern} exceeds 64 bits")))?;
        Self::for_x(r, b as u128, x)
    }

    pub fn r(&self) -> u128 {
        self.r
    }

    pub fn b(&self) -> u128 {
        self.b
    }

    pub fn k(&self) -> u32 {
        self.k
    }
}

fn checked_pow(base: u128, exp: u32) -> Result<u128> {
    base.checked_pow(exp)
        .ok_or_else(|| Error::Overflow(format!("{base}^{exp} exceeds 128 bits")))
}

/// Base-`r` integers with exactly `d` digits, none equal to `b`:
/// `(r-1)^d` when `b = 0`, otherwise `(r-2)(r-1)^(d-1)`.
pub fn base_r_digit_avoiders(ctx: &BaseRContext, d: u32) -> Result<AvoiderCount> {
    if d == 0 {
        return Err(Error::Domain("digit count d must be positive".into()));
    }
    let r = ctx.r;
    let value = if ctx.b == 0 {
        checked_pow(r - 1, d)?
    } else {
        checked_pow(r - 1, d - 1)?
            .checked_mul(r - 2)
            .ok_or_else(|| Error::Overflow(format!("(r-2)(r-1)^{} exceeds 128 bits", d - 1)))?
    };
    Ok(AvoiderCount(value))
}

/// `ceil((r-1)^(k+1) / (r-2))`, an integer majorant of the avoider count up to
/// any `x < r^k`.
pub fn hw_upper_bound(ctx: &BaseRContext) -> Result<AvoiderCount> {
    let numerator = checked_pow(ctx.r - 1, ctx.k + 1)?;
    Ok(AvoiderCount(numerator.div_ceil(ctx.r - 2)))
}

/// `r(r-1)/(r-2) * ((r-1)/r)^k`, an upper bound on `R(N)/N` for
/// `r^(k-1) <= N < r^k`. Evaluated in log space once `k` exceeds 300.
pub fn avoider_density_bound(ctx: &BaseRContext) -> f64 {
    let r = ctx.r as f64;
    let prefactor = r * (r - 1.0) / (r - 2.0);
    let k = ctx.k as f64;
    if ctx.k <= 300 {
        prefactor * ((r - 1.0) / r).powf(k)
    } else {
        (prefactor.ln() + k * (-1.0 / r).ln_1p()).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digits::contains;
    use proptest::prelude::*;

    fn ds(s: &str) -> DigitString {
        s.parse().unwrap()
    }

    /// Longest suffix of `p[..s] + d` that is a prefix of `p`.
    fn brute_transition(p: &[u8], s: usize, d: u8) -> usize {
        let mut text = p[..s].to_vec();
        text.push(d);
        (0..=text.len().min(p.len()))
            .rev()
            .find(|&len| text[text.len() - len..] == p[..len])
            .unwrap()
    }

    #[test]
    fn automaton_examples() {
        let a = build_automaton(&ds("9"));
        assert_eq!(a.state_count(), 2);
        assert_eq!(a.transition(0, 9), 1);
        for d in 0..9 {
            assert_eq!(a.transition(0, d), 0);
        }
        let a = build_automaton(&ds("11"));
        assert_eq!(a.transition(1, 1), 2);
        for d in [0u8, 2, 3, 9] {
            assert_eq!(a.transition(1, d), 0);
        }
        let a = build_automaton(&ds("121"));
        assert_eq!(a.transition(2, 1), 3);
        assert_eq!(a.transition(2, 2), 0);
        assert_eq!(a.transition(1, 1), 1);
    }

    #[test]
    fn automaton_matches_brute_force_suffix_prefix() {
        for pat in ["121", "9", "11", "00", "1212", "0101", "123123", "99899", "4"] {
            let s = ds(pat);
            let a = build_automaton(&s);
            for state in 0..s.len() {
                for d in 0..10 {
                    assert_eq!(
                        a.transition(state, d),
                        brute_transition(s.digits(), state, d),
                        "{pat} state {state} digit {d}"
                    );
                }
            }
            for d in 0..10 {
                assert_eq!(a.transition(a.accept_state(), d), a.accept_state());
            }
        }
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_avoiders(&ds("9"), 99).unwrap(), AvoiderCount(80));
        assert_eq!(count_avoiders(&ds("123"), 122).unwrap(), AvoiderCount(122));
        assert_eq!(count_avoiders(&ds("1"), 10).unwrap(), AvoiderCount(8));
        assert_eq!(count_avoiders(&ds("05"), 512).unwrap(), AvoiderCount(512 - 5));
        assert_eq!(count_avoiders(&ds("7"), 0).unwrap(), AvoiderCount(0));
        let big = 10u128.pow(38);
        assert!(matches!(count_avoiders(&ds("7"), big), Err(Error::InvalidInput(_))));
        assert!(count_avoiders(&ds("7"), big - 1).is_ok());
    }

    #[test]
    fn counts_match_scan_for_leading_zero_patterns() {
        for pat in ["0", "05", "000", "10", "0110"] {
            let s = ds(pat);
            let counter = AvoiderCounter::new(&s);
            let mut scan = 0u128;
            for x in 1..=20_000u64 {
                if !contains(x, &s) {
                    scan += 1;
                }
                assert_eq!(counter.count(x as u128).unwrap().0, scan, "{pat} x={x}");
            }
        }
    }

    #[test]
    fn base_r_examples() {
        let ctx = |r, b| BaseRContext::new(r, b, 1).unwrap();
        assert_eq!(base_r_digit_avoiders(&ctx(10, 9), 2).unwrap(), AvoiderCount(72));
        assert_eq!(base_r_digit_avoiders(&ctx(10, 0), 2).unwrap(), AvoiderCount(81));
        assert_eq!(base_r_digit_avoiders(&ctx(10, 0), 1).unwrap(), AvoiderCount(9));
        assert!(matches!(
            base_r_digit_avoiders(&ctx(1 << 64, 0), 3),
            Err(Error::Overflow(_))
        ));
        assert!(base_r_digit_avoiders(&ctx(10, 0), 0).is_err());
    }

    #[test]
    fn base_r_closed_forms_match_enumeration() {
        for r in 3u128..=12 {
            for b in 0..r {
                for d in 1..=4u32 {
                    let lo = r.pow(d - 1);
                    let hi = r.pow(d);
                    let brute = (lo..hi)
                        .filter(|&v| {
                            let mut x = v;
                            while x > 0 {
                                if x % r == b {
                                    return false;
                                }
                                x /= r;
                            }
                            true
                        })
                        .count() as u128;
                    let ctx = BaseRContext::new(r, b, 1).unwrap();
                    assert_eq!(base_r_digit_avoiders(&ctx, d).unwrap().0, brute);
                }
            }
        }
    }

    #[test]
    fn hw_examples() {
        let ctx = |r, k| BaseRContext::new(r, 0, k).unwrap();
        assert_eq!(hw_upper_bound(&ctx(10, 2)).unwrap(), AvoiderCount(92));
        assert_eq!(hw_upper_bound(&ctx(10, 1)).unwrap(), AvoiderCount(11));
        assert_eq!(hw_upper_bound(&ctx(3, 1)).unwrap(), AvoiderCount(4));
        assert!(matches!(hw_upper_bound(&ctx(10, 60)), Err(Error::Overflow(_))));
    }

    #[test]
    fn context_validation() {
        assert!(matches!(BaseRContext::new(2, 0, 1), Err(Error::Domain(_))));
        assert!(BaseRContext::new(10, 10, 1).is_err());
        assert!(BaseRContext::new(10, 1, 0).is_err());
        assert_eq!(BaseRContext::for_x(10, 9, 9).unwrap().k(), 1);
        assert_eq!(BaseRContext::for_x(10, 9, 10).unwrap().k(), 2);
        assert_eq!(BaseRContext::for_x(100, 9, 10_000_000).unwrap().k(), 4);
        assert_eq!(BaseRContext::for_x(3, 0, u128::MAX).unwrap().k(), 81);
        let ctx = BaseRContext::for_pattern(&ds("05"), 100).unwrap();
        assert_eq!((ctx.r(), ctx.b(), ctx.k()), (100, 5, 2));
    }

    #[test]
    fn density_bound_examples() {
        let ctx = |r, k| BaseRContext::new(r, 0, k).unwrap();
        assert!((avoider_density_bound(&ctx(10, 1)) - 10.125).abs() < 1e-12);
        assert!((avoider_density_bound(&ctx(10, 50)) - 0.057_979_971_082_351_35).abs() < 1e-12);
        assert!((avoider_density_bound(&ctx(100, 1)) - 100.010_204_081_632_65).abs() < 1e-9);
        // log-space branch agrees with the direct formula where both are finite
        let direct = 11.25 * 0.9f64.powi(301);
        assert!((avoider_density_bound(&ctx(10, 301)) / direct - 1.0).abs() < 1e-10);
        assert!(avoider_density_bound(&ctx(10, 100_000)) >= 0.0);
    }

    const CORPUS: [&str; 7] = ["9", "0", "1", "12", "00", "123", "999"];

    #[test]
    fn avoider_share_shrinks() {
        for pat in CORPUS {
            let counter = AvoiderCounter::new(&ds(pat));
            let share = |e: u32| counter.count(10u128.pow(e)).unwrap().0 as f64 / 10f64.powi(e as i32);
            for e in 2..37 {
                assert!(share(e + 1) <= share(e), "{pat} e={e}");
            }
            let weighted = |e: u32| share(e) * e as f64 * std::f64::consts::LN_10;
            if pat.len() == 1 {
                for e in 10..37 {
                    assert!(weighted(e + 1) < weighted(e), "{pat} e={e}");
                }
            }
        }
    }

    #[test]
    fn density_bound_times_log_vanishes() {
        for pat in CORPUS {
            let r = 10u128.pow(pat.len() as u32);
            let weighted = |k: u32| {
                let ctx = BaseRContext::new(r, 0, k).unwrap();
                avoider_density_bound(&ctx) * k as f64 * (r as f64).ln()
            };
            let start = 20 * r as u32;
            let samples: Vec<f64> = (0..4).map(|i| weighted(start << i)).collect();
            assert!(samples.windows(2).all(|w| w[1] < w[0]), "{pat}: {samples:?}");
            assert!(samples[3] < 1e-3, "{pat}: {samples:?}");
        }
    }

    proptest! {
        #[test]
        fn automaton_acceptance_is_containment(
            pat in prop::collection::vec(0u8..10, 1..4),
            n in 1u64..u64::MAX,
        ) {
            let s = DigitString::from_digits(pat).unwrap();
            let a = build_automaton(&s);
            prop_assert_eq!(a.matches(n), contains(n, &s));
            prop_assert_eq!(a.matches_digits(&decimal_digits(n as u128)), contains(n, &s));
        }

        #[test]
        fn count_steps_by_zero_or_one(
            pat in prop::collection::vec(0u8..10, 1..4),
            x in 2u128..10u128.pow(30),
        ) {
            let s = DigitString::from_digits(pat).unwrap();
            let c = AvoiderCounter::new(&s);
            let hi = c.count(x).unwrap().0;
            let lo = c.count(x - 1).unwrap().0;
            prop_assert!(hi >= lo && hi - lo <= 1);
            prop_assert!(hi <= x);
            prop_assert_eq!(hi - lo == 1, !c.automaton().matches_digits(&decimal_digits(x)));
        }
    }
}
