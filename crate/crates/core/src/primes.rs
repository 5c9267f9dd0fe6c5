//! Prime generation and the exact prime sums the estimators are built on.
//!
//! Everything downstream indexes over "all primes ≤ u" for various cutoffs u:
//! the Euler product for W(s), the truncated product forms, the Mertens
//! product t_u = Π_{p≤u} (1-1/p)^{-1} and the primorial P_u = Π_{p≤u} p.
//! Sums are streamed over segments so large cutoffs never require holding
//! every prime in memory, and accumulated with compensated summation in
//! ascending-prime order so results are reproducible to ~1e-15.

use crate::util::KahanSum;
use crate::{Error, Result};

/// Default segment span (in integers) for the segmented sieve.
pub const DEFAULT_SEGMENT_SIZE: usize = 1 << 20;

/// Largest limit for which `sieve_primes` will materialize the prime list.
/// π(10^9) ≈ 5.08e7 primes ≈ 400 MB as u64; beyond that use the streaming
/// interface.
pub const MAX_MATERIALIZED_LIMIT: u64 = 1_000_000_000;

/// Largest cutoff the streaming interface accepts.
pub const MAX_STREAM_LIMIT: u64 = 1 << 36;

/// All primes up to `limit`, materialized.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
    segment_size: usize,
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn segment_size(&self) -> usize {
        self.segment_size
    }
}

/// Simple sieve of Eratosthenes, used for base primes up to √limit.
pub(crate) fn small_sieve(limit: usize) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    let mut i = 2usize;
    while i * i <= limit {
        if !composite[i] {
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
        i += 1;
    }
    for (n, &c) in composite.iter().enumerate().skip(2) {
        if !c {
            primes.push(n as u64);
        }
    }
    primes
}

/// Stream every prime ≤ `limit` in ascending order, one segment at a time.
///
/// `f` receives each segment's primes as a slice; segments arrive in order.
pub fn for_each_prime_segment<F: FnMut(&[u64])>(
    limit: u64,
    segment_size: usize,
    mut f: F,
) -> Result<()> {
    if limit > MAX_STREAM_LIMIT {
        return Err(Error::resource(format!(
            "prime stream limit {limit} exceeds maximum {MAX_STREAM_LIMIT}"
        )));
    }
    if limit < 2 {
        return Ok(());
    }
    let seg = segment_size.max(1 << 10);
    let root = (limit as f64).sqrt() as usize + 2;
    let base = small_sieve(root);
    // Handle the base range directly so segments can start above √limit.
    let base_upto: Vec<u64> = base.iter().copied().filter(|&p| p <= limit).collect();
    f(&base_upto);
    let mut lo = root as u64 + 1;
    let mut mark = vec![false; seg];
    let mut out: Vec<u64> = Vec::with_capacity(seg / 8);
    while lo <= limit {
        let hi = (lo + seg as u64 - 1).min(limit);
        let span = (hi - lo + 1) as usize;
        mark[..span].iter_mut().for_each(|m| *m = false);
        for &p in &base {
            if p * p > hi {
                break;
            }
            let mut m = lo.div_ceil(p) * p;
            if m < p * p {
                m = p * p;
            }
            while m <= hi {
                mark[(m - lo) as usize] = true;
                m += p;
            }
        }
        out.clear();
        for (i, &c) in mark[..span].iter().enumerate() {
            if !c {
                out.push(lo + i as u64);
            }
        }
        f(&out);
        lo = hi + 1;
    }
    Ok(())
}

/// All primes ≤ `limit`, materialized, segment size `DEFAULT_SEGMENT_SIZE`.
pub fn sieve_primes(limit: u64) -> Result<PrimeTable> {
    sieve_primes_with_segment(limit, DEFAULT_SEGMENT_SIZE)
}

pub fn sieve_primes_with_segment(limit: u64, segment_size: usize) -> Result<PrimeTable> {
    if limit > MAX_MATERIALIZED_LIMIT {
        return Err(Error::resource(format!(
            "materialized sieve limit {limit} exceeds budget {MAX_MATERIALIZED_LIMIT}; \
             use the streaming interface"
        )));
    }
    let mut primes = Vec::new();
    if limit >= 2 {
        let reserve = if limit > 100 {
            (limit as f64 / (limit as f64).ln() * 1.15) as usize
        } else {
            32
        };
        primes.reserve(reserve);
        for_each_prime_segment(limit, segment_size, |seg| primes.extend_from_slice(seg))?;
    }
    Ok(PrimeTable {
        limit,
        primes,
        segment_size,
    })
}

/// log t_u = -Σ_{p≤u} log(1 - 1/p), the log of the Mertens product,
/// summed exactly over the sieve.
pub fn log_mertens(u: f64) -> Result<f64> {
    if !(u >= 2.0) {
        return Err(Error::domain(format!("log_mertens requires u >= 2, got {u}")));
    }
    let mut acc = KahanSum::new();
    for_each_prime_segment(u.floor() as u64, DEFAULT_SEGMENT_SIZE, |seg| {
        for &p in seg {
            acc.add(-(-1.0 / p as f64).ln_1p());
        }
    })?;
    Ok(acc.value())
}

/// log P_u = Σ_{p≤u} log p, i.e. Chebyshev θ(u).
pub fn log_primorial(u: f64) -> Result<f64> {
    if !(u >= 2.0) {
        return Err(Error::domain(format!(
            "log_primorial requires u >= 2, got {u}"
        )));
    }
    let mut acc = KahanSum::new();
    for_each_prime_segment(u.floor() as u64, DEFAULT_SEGMENT_SIZE, |seg| {
        for &p in seg {
            acc.add((p as f64).ln());
        }
    })?;
    Ok(acc.value())
}
