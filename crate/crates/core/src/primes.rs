//! Prime enumeration and counting.
//!
//! Bulk enumeration runs a segmented sieve of Eratosthenes over odd numbers
//! only, one bit per odd resident. Segments have a fixed power-of-two width
//! chosen when the [`SieveConfig`] is built. A batch of segments may be sieved
//! on worker threads, but the stream always yields primes in ascending order
//! and the output does not depend on the worker count.
//!
//! Sieved segments can optionally be persisted to a cache directory. A cache
//! file that fails its header check is ignored and the segment is recomputed.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;
use rayon::ThreadPool;

use crate::{Error, Result};

/// Largest limit accepted by the sieve.
pub const SIEVE_CEILING: u64 = 1_000_000_000;

/// Default segment width: 2^20 integers, 64 KiB of marks.
pub const DEFAULT_SEGMENT_LOG2: u32 = 20;

const MIN_SEGMENT_LOG2: u32 = 7;
const MAX_SEGMENT_LOG2: u32 = 30;

/// One sieved window `[base, base + width)`. Bit `i` of the marks stands for
/// the odd number `base + 2i + 1` and is set when that number is composite
/// (or is 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveSegment {
    base: u64,
    width: u64,
    composite_marks: Vec<u64>,
}

impl SieveSegment {
    /// Sieves `[base, base + width)`. `base_primes` must contain every prime up
    /// to `sqrt(base + width)`.
    pub fn sieve(base: u64, width: u64, base_primes: &[u32]) -> Self {
        debug_assert!(width.is_power_of_two() && width >= 128);
        debug_assert_eq!(base % width, 0);
        let bits = width / 2;
        let mut marks = vec![0u64; (bits / 64) as usize];
        let end = base + width;
        for &p in base_primes.iter().skip_while(|&&p| p == 2) {
            let p = p as u64;
            let square = p * p;
            if square >= end {
                break;
            }
            let start = if square >= base {
                square
            } else {
                let first = base.div_ceil(p) * p;
                if first.is_multiple_of(2) {
                    first + p
                } else {
                    first
                }
            };
            let mut i = (start - base - 1) / 2;
            while i < bits {
                marks[(i >> 6) as usize] |= 1 << (i & 63);
                i += p;
            }
        }
        if base == 0 {
            marks[0] |= 1;
        }
        Self {
            base,
            width,
            composite_marks: marks,
        }
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn width(&self) -> u64 {
        self.width
    }

    pub fn end(&self) -> u64 {
        self.base + self.width
    }

    /// Primality of a resident of this segment. Panics if `n` lies outside.
    pub fn is_prime(&self, n: u64) -> bool {
        assert!(n >= self.base && n < self.end(), "{n} outside segment");
        if n == 2 {
            return true;
        }
        if n.is_multiple_of(2) {
            return false;
        }
        let i = (n - self.base - 1) / 2;
        self.composite_marks[(i >> 6) as usize] & (1 << (i & 63)) == 0
    }

    /// Odd primes of the segment in ascending order. The prime 2 is not reported.
    pub fn odd_primes(&self) -> impl Iterator<Item = u64> + '_ {
        let base = self.base;
        self.composite_marks
            .iter()
            .enumerate()
            .flat_map(move |(w, &word)| {
                let mut free = !word;
                std::iter::from_fn(move || {
                    if free == 0 {
                        return None;
                    }
                    let bit = free.trailing_zeros() as u64;
                    free &= free - 1;
                    Some(base + 2 * (w as u64 * 64 + bit) + 1)
                })
            })
    }
}

const CACHE_MAGIC: &[u8; 4] = b"SPSV";
const CACHE_VERSION: u32 = 1;
const CACHE_HEADER_LEN: usize = 4 + 4 + 8 * 4;

/// On-disk store of sieved segments, one file per segment.
///
/// Layout (little endian): magic `SPSV`, `u32` version, `u64` segment width,
/// `u64` range start, `u64` range end (exclusive), `u64` FNV-1a checksum of
/// the mark words, then the mark words as `u64`.
#[derive(Debug, Clone)]
pub struct SegmentCache {
    dir: PathBuf,
}

impl SegmentCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, base: u64, width: u64) -> PathBuf {
        self.dir
            .join(format!("w{}-b{:012}.spsv", width.trailing_zeros(), base))
    }

    pub fn load(&self, base: u64, width: u64) -> Option<SieveSegment> {
        let path = self.path(base, width);
        let bytes = fs::read(&path).ok()?;
        match decode_segment(&bytes, base, width) {
            Some(seg) => Some(seg),
            None => {
                log::warn!("ignoring corrupt sieve cache file {}", path.display());
                None
            }
        }
    }

    /// Writes through a temporary file and an atomic rename so concurrent
    /// readers never observe a partial file. Failures are logged and dropped.
    pub fn store(&self, segment: &SieveSegment) {
        let path = self.path(segment.base, segment.width);
        let tmp = self.dir.join(format!(
            ".{}.{}.tmp",
            path.file_name().and_then(|n| n.to_str()).unwrap_or("segment"),
            std::process::id()
        ));
        let write = || -> std::io::Result<()> {
            fs::create_dir_all(&self.dir)?;
            let mut file = fs::File::create(&tmp)?;
            file.write_all(&encode_segment(segment))?;
            file.sync_all()?;
            fs::rename(&tmp, &path)
        };
        if let Err(e) = write() {
            log::warn!("could not write sieve cache {}: {e}", path.display());
            let _ = fs::remove_file(&tmp);
        }
    }
}

fn fnv1a(words: &[u64]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for w in words {
        for b in w.to_le_bytes() {
            hash ^= b as u64;
            hash = hash.wrapping_mul(0x0100_0000_01b3);
        }
    }
    hash
}

fn encode_segment(segment: &SieveSegment) -> Vec<u8> {
    let mut out = Vec::with_capacity(CACHE_HEADER_LEN + segment.composite_marks.len() * 8);
    out.extend_from_slice(CACHE_MAGIC);
    out.extend_from_slice(&CACHE_VERSION.to_le_bytes());
    out.extend_from_slice(&segment.width.to_le_bytes());
    out.extend_from_slice(&segment.base.to_le_bytes());
    out.extend_from_slice(&segment.end().to_le_bytes());
    out.extend_from_slice(&fnv1a(&segment.composite_marks).to_le_bytes());
    for w in &segment.composite_marks {
        out.extend_from_slice(&w.to_le_bytes());
    }
    out
}

fn decode_segment(bytes: &[u8], base: u64, width: u64) -> Option<SieveSegment> {
    let word_count = (width / 128) as usize;
    if bytes.len() != CACHE_HEADER_LEN + word_count * 8 || &bytes[..4] != CACHE_MAGIC {
        return None;
    }
    let u64_at = |at: usize| u64::from_le_bytes(bytes[at..at + 8].try_into().unwrap());
    let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    if version != CACHE_VERSION
        || u64_at(8) != width
        || u64_at(16) != base
        || u64_at(24) != base + width
    {
        return None;
    }
    let marks: Vec<u64> = (0..word_count)
        .map(|i| u64_at(CACHE_HEADER_LEN + 8 * i))
        .collect();
    if fnv1a(&marks) != u64_at(32) {
        return None;
    }
    Some(SieveSegment {
        base,
        width,
        composite_marks: marks,
    })
}

/// Sieve parameters shared by every stream built from it.
#[derive(Clone)]
pub struct SieveConfig {
    segment_log2: u32,
    threads: usize,
    pool: Option<Arc<ThreadPool>>,
    cache: Option<SegmentCache>,
}

impl fmt::Debug for SieveConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SieveConfig")
            .field("segment_log2", &self.segment_log2)
            .field("threads", &self.threads)
            .field("cache", &self.cache)
            .finish()
    }
}

impl Default for SieveConfig {
    fn default() -> Self {
        Self {
            segment_log2: DEFAULT_SEGMENT_LOG2,
            threads: 1,
            pool: None,
            cache: None,
        }
    }
}

impl SieveConfig {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_segment_log2(mut self, log2: u32) -> Result<Self> {
        if !(MIN_SEGMENT_LOG2..=MAX_SEGMENT_LOG2).contains(&log2) {
            return Err(Error::InvalidInput(format!(
                "segment width 2^{log2} outside 2^{MIN_SEGMENT_LOG2}..=2^{MAX_SEGMENT_LOG2}"
            )));
        }
        self.segment_log2 = log2;
        Ok(self)
    }

    pub fn with_threads(mut self, threads: usize) -> Result<Self> {
        if threads == 0 {
            return Err(Error::InvalidInput("thread count must be positive".into()));
        }
        self.threads = threads;
        self.pool = if threads > 1 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Error::InvalidInput(format!("cannot start {threads} workers: {e}")))?;
            Some(Arc::new(pool))
        } else {
            None
        };
        Ok(self)
    }

    pub fn with_cache_dir(mut self, dir: impl Into<PathBuf>) -> Self {
        self.cache = Some(SegmentCache::new(dir));
        self
    }

    pub fn segment_width(&self) -> u64 {
        1 << self.segment_log2
    }

    pub fn threads(&self) -> usize {
        self.threads
    }

    /// Every prime in `[2, limit]`, ascending.
    pub fn stream(&self, limit: u64) -> Result<PrimeStream> {
        check_ceiling(limit)?;
        let width = self.segment_width();
        let last_end = (limit / width + 1) * width;
        let base_primes = small_primes(isqrt(last_end) as u32 + 1);
        Ok(PrimeStream {
            limit,
            config: self.clone(),
            base_primes: Arc::new(base_primes),
            next_base: 0,
            buffer: Vec::new(),
            pos: 0,
            two_pending: limit >= 2,
        })
    }

    pub fn prime_count(&self, x: u64) -> Result<u64> {
        Ok(self.stream(x)?.count() as u64)
    }

    fn sieve_one(&self, base: u64, base_primes: &[u32]) -> SieveSegment {
        let width = self.segment_width();
        if let Some(cache) = &self.cache {
            if let Some(seg) = cache.load(base, width) {
                return seg;
            }
            let seg = SieveSegment::sieve(base, width, base_primes);
            cache.store(&seg);
            return seg;
        }
        SieveSegment::sieve(base, width, base_primes)
    }
}

fn check_ceiling(limit: u64) -> Result<()> {
    if limit > SIEVE_CEILING {
        return Err(Error::ResourceLimit {
            limit: limit as u128,
            ceiling: SIEVE_CEILING,
        });
    }
    Ok(())
}

/// Ascending primes up to a limit, produced one segment batch at a time.
pub struct PrimeStream {
    limit: u64,
    config: SieveConfig,
    base_primes: Arc<Vec<u32>>,
    next_base: u64,
    buffer: Vec<u64>,
    pos: usize,
    two_pending: bool,
}

impl PrimeStream {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    fn refill(&mut self) -> bool {
        self.buffer.clear();
        self.pos = 0;
        while self.buffer.is_empty() {
            if self.next_base > self.limit {
                return false;
            }
            let width = self.config.segment_width();
            let batch = self.config.threads.max(1) as u64;
            let bases: Vec<u64> = (0..batch)
                .map(|i| self.next_base + i * width)
                .take_while(|&b| b <= self.limit)
                .collect();
            self.next_base += bases.len() as u64 * width;
            let primes = &self.base_primes;
            let config = &self.config;
            let segments: Vec<SieveSegment> = match &config.pool {
                Some(pool) if bases.len() > 1 => pool.install(|| {
                    bases
                        .par_iter()
                        .map(|&b| config.sieve_one(b, primes))
                        .collect()
                }),
                _ => bases.iter().map(|&b| config.sieve_one(b, primes)).collect(),
            };
            let limit = self.limit;
            for seg in &segments {
                self.buffer
                    .extend(seg.odd_primes().take_while(|&p| p <= limit));
            }
        }
        true
    }
}

impl Iterator for PrimeStream {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.two_pending {
            self.two_pending = false;
            return Some(2);
        }
        if self.pos == self.buffer.len() && !self.refill() {
            return None;
        }
        let p = self.buffer[self.pos];
        self.pos += 1;
        Some(p)
    }
}

/// Ascending primes in `[2, limit]` with the default configuration.
pub fn primes_up_to(limit: u64) -> Result<PrimeStream> {
    SieveConfig::default().stream(limit)
}

/// Exact `pi(x)` by enumeration.
pub fn prime_count(x: u64) -> Result<u64> {
    SieveConfig::default().prime_count(x)
}

/// Floor of the square root.
pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

/// Primes below `bound` by a plain sieve; used for base primes.
pub fn small_primes(bound: u32) -> Vec<u32> {
    let n = bound as usize;
    let mut composite = vec![false; n.max(2)];
    let mut out = Vec::new();
    for i in 2..n {
        if !composite[i] {
            out.push(i as u32);
            let mut j = i * i;
            while j < n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin. Bases {2, 7, 61} settle every `n < 2^32`;
/// the first twelve primes settle every 64-bit `n`.
pub fn is_prime(n: u64) -> bool {
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    if n < 41 * 41 {
        return true;
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    let witness = |a: u64| {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            return false;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                return false;
            }
        }
        true
    };
    if n < 1 << 32 {
        [2, 7, 61].iter().all(|&a| !witness(a))
    } else {
        SMALL.iter().all(|&a| !witness(a))
    }
}

/// The lower estimate `x / ln x`, which stays below `pi(x)` for `x >= 17`.
pub fn rosser_lower(x: f64) -> Result<f64> {
    if x.is_nan() || x < 17.0 {
        return Err(Error::Domain(format!(
            "x / log x bounds pi(x) from below only for x >= 17, got {x}"
        )));
    }
    Ok(x / x.ln())
}
