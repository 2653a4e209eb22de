//! Runnable experiments over the prime stream: least prime containing a
//! string, the coverage threshold `M(l)`, arithmetic progressions of
//! string-containing primes, and relative densities.

use std::collections::HashSet;
use std::io::{self, Write};

use crate::bounds::{solve_log_n, theorem_bound_simple};
use crate::counting::PatternAutomaton;
use crate::digits::{window_values, DigitString};
use crate::primes::SieveConfig;
use crate::{Error, Result};

/// Longest string length the coverage experiment accepts.
pub const MAX_COVERAGE_LENGTH: u32 = 6;

/// Longest progression the AP search accepts.
pub const MAX_AP_LENGTH: usize = 6;

/// Either a result, or the limit that was exhausted without finding one.
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome<T> {
    Found(T),
    NotFound { limit: u64 },
}

impl<T> Outcome<T> {
    pub fn found(self) -> Option<T> {
        match self {
            Outcome::Found(t) => Some(t),
            Outcome::NotFound { .. } => None,
        }
    }

    pub fn as_ref(&self) -> Outcome<&T> {
        match self {
            Outcome::Found(t) => Outcome::Found(t),
            Outcome::NotFound { limit } => Outcome::NotFound { limit: *limit },
        }
    }
}

pub fn least_prime_containing(
    pattern: &DigitString,
    limit: u64,
    config: &SieveConfig,
) -> Result<Outcome<u64>> {
    let automaton = PatternAutomaton::new(pattern);
    Ok(config
        .stream(limit)?
        .find(|&p| automaton.matches(p))
        .map_or(Outcome::NotFound { limit }, Outcome::Found))
}

/// Outcome of a coverage run for strings of length `l` with nonzero first digit.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageResult {
    pub l: u32,
    pub universe_size: usize,
    /// The prime at which the last uncovered string was first seen.
    pub m: u64,
    pub last_string: DigitString,
    /// First containing prime, indexed by string value minus `10^(l-1)`.
    first_prime: Vec<u64>,
}

impl CoverageResult {
    fn offset(&self) -> u64 {
        10u64.pow(self.l - 1)
    }

    pub fn first_containing(&self, s: &DigitString) -> Option<u64> {
        if s.len() != self.l as usize || s.has_leading_zero() {
            return None;
        }
        let idx = s.value()? - self.offset();
        self.first_prime.get(idx as usize).copied()
    }

    /// `(string, first prime containing it)` in ascending string order.
    pub fn iter(&self) -> impl Iterator<Item = (DigitString, u64)> + '_ {
        let offset = self.offset();
        let l = self.l as usize;
        self.first_prime.iter().enumerate().map(move |(i, &p)| {
            let s = DigitString::from_value(offset + i as u64, l).expect("value fits in l digits");
            (s, p)
        })
    }

    /// CSV with header `string,first_containing_prime`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "string,first_containing_prime")?;
        for (s, p) in self.iter() {
            writeln!(out, "{s},{p}")?;
        }
        Ok(())
    }
}

/// Streams primes up to `limit` until every length-`l` string with a nonzero
/// first digit has appeared as a window of some prime.
pub fn coverage_threshold(
    l: u32,
    limit: u64,
    config: &SieveConfig,
) -> Result<Outcome<CoverageResult>> {
    if !(1..=MAX_COVERAGE_LENGTH).contains(&l) {
        return Err(Error::InvalidInput(format!(
            "coverage length {l} outside 1..={MAX_COVERAGE_LENGTH}"
        )));
    }
    let offset = 10u64.pow(l - 1);
    let universe_size = (9 * offset) as usize;
    let mut first_prime = vec![0u64; universe_size];
    let mut remaining = universe_size;
    for p in config.stream(limit)? {
        let mut newest = None;
        for w in window_values(p, l) {
            if w < offset {
                continue;
            }
            let slot = &mut first_prime[(w - offset) as usize];
            if *slot == 0 {
                *slot = p;
                remaining -= 1;
                newest = Some(w);
            }
        }
        if remaining == 0 {
            let last = newest.expect("the final prime covered a string");
            return Ok(Outcome::Found(CoverageResult {
                l,
                universe_size,
                m: p,
                last_string: DigitString::from_value(last, l as usize)?,
                first_prime,
            }));
        }
    }
    Ok(Outcome::NotFound { limit })
}

/// `k` primes in arithmetic progression, each containing the query string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApResult {
    pub first_term: u64,
    pub difference: u64,
    pub terms: Vec<u64>,
}

impl ApResult {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// First progression in order of ascending first term, then ascending
/// difference, among primes up to `limit` containing `pattern`.
pub fn find_prime_ap(
    pattern: &DigitString,
    k: usize,
    limit: u64,
    config: &SieveConfig,
) -> Result<Outcome<ApResult>> {
    if !(3..=MAX_AP_LENGTH).contains(&k) {
        return Err(Error::InvalidInput(format!(
            "progression length {k} outside 3..={MAX_AP_LENGTH}"
        )));
    }
    let automaton = PatternAutomaton::new(pattern);
    let filtered: Vec<u64> = config
        .stream(limit)?
        .filter(|&p| automaton.matches(p))
        .collect();
    let members: HashSet<u64> = filtered.iter().copied().collect();
    let span = (k - 1) as u64;
    for (i, &a) in filtered.iter().enumerate() {
        for &b in &filtered[i + 1..] {
            let d = b - a;
            if a + span * d > limit {
                break;
            }
            if (2..k as u64).all(|j| members.contains(&(a + j * d))) {
                return Ok(Outcome::Found(ApResult {
                    first_term: a,
                    difference: d,
                    terms: (0..k as u64).map(|j| a + j * d).collect(),
                }));
            }
        }
    }
    Ok(Outcome::NotFound { limit })
}

/// Primes up to `n` split by whether they contain `pattern`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityReport {
    pub pattern: DigitString,
    pub n: u64,
    pub pi_n: u64,
    pub containing: u64,
    pub avoiding: u64,
    /// `containing / pi_n`, zero when there are no primes.
    pub density: f64,
}

impl DensityReport {
    fn new(pattern: &DigitString, n: u64, pi_n: u64, containing: u64) -> Self {
        Self {
            pattern: pattern.clone(),
            n,
            pi_n,
            containing,
            avoiding: pi_n - containing,
            density: if pi_n == 0 {
                0.0
            } else {
                containing as f64 / pi_n as f64
            },
        }
    }
}

pub fn relative_density(
    pattern: &DigitString,
    n: u64,
    config: &SieveConfig,
) -> Result<DensityReport> {
    let automaton = PatternAutomaton::new(pattern);
    let (mut pi_n, mut containing) = (0, 0);
    for p in config.stream(n)? {
        pi_n += 1;
        if automaton.matches(p) {
            containing += 1;
        }
    }
    Ok(DensityReport::new(pattern, n, pi_n, containing))
}

/// One report per `10^e`, in the order given, from a single pass of the sieve.
pub fn density_table(
    pattern: &DigitString,
    exponents: &[u32],
    config: &SieveConfig,
) -> Result<Vec<DensityReport>> {
    let Some(&max_exp) = exponents.iter().max() else {
        return Ok(Vec::new());
    };
    let bound = 10u64
        .checked_pow(max_exp)
        .ok_or_else(|| Error::InvalidInput(format!("10^{max_exp} overflows")))?;
    let mut checkpoints: Vec<u64> = exponents.iter().map(|&e| 10u64.pow(e)).collect();
    checkpoints.sort_unstable();
    checkpoints.dedup();

    let automaton = PatternAutomaton::new(pattern);
    let mut tallies = Vec::with_capacity(checkpoints.len());
    let mut next = checkpoints.iter().peekable();
    let (mut pi_n, mut containing) = (0u64, 0u64);
    for p in config.stream(bound)? {
        while let Some(&&c) = next.peek() {
            if p <= c {
                break;
            }
            tallies.push((c, pi_n, containing));
            next.next();
        }
        pi_n += 1;
        if automaton.matches(p) {
            containing += 1;
        }
    }
    for &c in next {
        tallies.push((c, pi_n, containing));
    }
    Ok(exponents
        .iter()
        .map(|&e| {
            let n = 10u64.pow(e);
            let &(_, pi, cont) = tallies.iter().find(|t| t.0 == n).expect("checkpoint tallied");
            DensityReport::new(pattern, n, pi, cont)
        })
        .collect())
}

/// One row of the coverage table: `M(l)` and the `log N` of the simplified bound.
#[derive(Debug, Clone, PartialEq)]
pub struct Table1Row {
    pub l: u32,
    pub m: Outcome<u64>,
    pub log_n: f64,
}

pub fn table1(max_l: u32, limit: u64, config: &SieveConfig) -> Result<Vec<Table1Row>> {
    if !(1..=MAX_COVERAGE_LENGTH).contains(&max_l) {
        return Err(Error::InvalidInput(format!(
            "max length {max_l} outside 1..={MAX_COVERAGE_LENGTH}"
        )));
    }
    (1..=max_l)
        .map(|l| {
            let m = match coverage_threshold(l, limit, config)? {
                Outcome::Found(c) => Outcome::Found(c.m),
                Outcome::NotFound { limit } => Outcome::NotFound { limit },
            };
            Ok(Table1Row {
                l,
                m,
                log_n: solve_log_n(theorem_bound_simple(l)?)?,
            })
        })
        .collect()
}
