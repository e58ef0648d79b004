//! Segmented searches: exotic primes and the relaxed equation.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sieve::{
    base_primes, factor_data, prime_flags, Progression, RunOutcome, SearchCheckpoint, SegmentSieve,
    SegmentedRun, DEFAULT_SEGMENT_SIZE,
};

/// Keeps 3p, 8m + 7 and friends comfortably inside u64.
const MAX_SEARCH_BOUND: u64 = 1 << 60;

const P_FORM: Progression = Progression { step: 8, offset: 7 };
const Q_FORM: Progression = Progression { step: 6, offset: 5 };

/// A prime p = 8m + 7 with φ(q) = 4m + 4 for q = 6m + 5 = (3p − 1)/4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExoticWitness {
    pub m: u64,
    pub p: u64,
    pub q: u64,
}

impl ExoticWitness {
    pub fn from_m(m: u64) -> Self {
        ExoticWitness {
            m,
            p: P_FORM.value(m),
            q: Q_FORM.value(m),
        }
    }
}

/// Knobs shared by the segmented searches.
#[derive(Clone, Debug)]
pub struct SearchOptions<'a> {
    pub segment_size: u64,
    pub jobs: usize,
    pub checkpoint: Option<&'a Path>,
    pub stop_after: Option<usize>,
}

impl Default for SearchOptions<'_> {
    fn default() -> Self {
        SearchOptions {
            segment_size: DEFAULT_SEGMENT_SIZE,
            jobs: 1,
            checkpoint: None,
            stop_after: None,
        }
    }
}

impl<'a> SearchOptions<'a> {
    fn run(&self, search_id: String, lo: u64, hi: u64) -> SegmentedRun<'a> {
        SegmentedRun {
            search_id,
            lo,
            hi,
            segment_size: self.segment_size,
            jobs: self.jobs,
            checkpoint: self.checkpoint,
            stop_after: self.stop_after,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExoticOutcome {
    pub witnesses: Vec<ExoticWitness>,
    pub run: RunOutcome,
}

/// Exotic primes p in `[lo, hi)`.
///
/// Each segment of the p-range is sieved for primality along 8m + 7 and,
/// over the same m, for totients along 6m + 5; only m with a prime p get
/// their q factored.
pub fn exotic_prime_search<P>(
    lo: u64,
    hi: u64,
    options: &SearchOptions<'_>,
    progress: P,
) -> Result<ExoticOutcome>
where
    P: FnMut(&SearchCheckpoint),
{
    if lo < 2 {
        return Err(Error::RangeUnderflow(lo));
    }
    if lo >= hi {
        return Err(Error::InvalidArgument(format!("empty range [{lo}, {hi})")));
    }
    if hi > MAX_SEARCH_BOUND {
        return Err(Error::InvalidArgument(format!(
            "upper bound {hi} exceeds supported maximum {MAX_SEARCH_BOUND}"
        )));
    }
    // q < p, so primes up to √p serve both progressions.
    let primes = base_primes((hi - 1).isqrt() + 1);
    let search_id = format!("exotic-prime:from={lo}:to={hi}");
    let run = options.run(search_id, lo, hi);
    let outcome = run.execute(
        |a, b| {
            let m_lo = P_FORM.first_index_at_least(a);
            let m_hi = P_FORM.first_index_at_least(b);
            if m_lo >= m_hi {
                return Ok(Vec::new());
            }
            let p_prime = prime_flags(P_FORM, m_lo, m_hi, &primes);
            let (_, phi_q) = factor_data(Q_FORM, m_lo, m_hi, &primes, Some(&p_prime));
            Ok((m_lo..m_hi)
                .zip(p_prime.iter().zip(&phi_q))
                .filter(|&(m, (&is_p, &phi))| is_p && phi == 4 * m + 4)
                .map(|(m, _)| P_FORM.value(m))
                .collect())
        },
        progress,
    )?;
    let witnesses = outcome
        .hits
        .iter()
        .map(|&p| ExoticWitness::from_m((p - 7) / 8))
        .collect();
    Ok(ExoticOutcome {
        witnesses,
        run: outcome,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelaxedOutcome {
    pub solutions: Vec<u64>,
    pub run: RunOutcome,
}

/// All n ≤ `limit` with 3φ(n) = 2n + 2.
///
/// Every n is scanned, even ones; that hits are odd is left to the tests.
pub fn relaxed_search<P>(
    limit: u64,
    options: &SearchOptions<'_>,
    progress: P,
) -> Result<RelaxedOutcome>
where
    P: FnMut(&SearchCheckpoint),
{
    if limit == 0 {
        return Err(Error::InvalidArgument("limit must be at least 1".into()));
    }
    if limit >= MAX_SEARCH_BOUND {
        return Err(Error::InvalidArgument(format!(
            "limit {limit} exceeds supported maximum {MAX_SEARCH_BOUND}"
        )));
    }
    // n = 1: 3φ(1) = 3 ≠ 4, so the sieve can start at 2.
    if limit == 1 {
        let run = RunOutcome {
            hits: Vec::new(),
            completed_hi: 2,
            finished: true,
            resumed_from: None,
            segments_run: 0,
        };
        return Ok(RelaxedOutcome {
            solutions: Vec::new(),
            run,
        });
    }
    let hi = limit + 1;
    let sieve = SegmentSieve::new(hi, options.segment_size);
    let search_id = format!("relaxed:limit={limit}");
    let run = options.run(search_id, 2, hi);
    let outcome = run.execute(
        |a, b| {
            let segment = sieve.segment(a, b)?;
            Ok(segment
                .iter()
                .filter(|&(n, _, phi)| 3 * phi == 2 * n + 2)
                .map(|(n, _, _)| n)
                .collect())
        },
        progress,
    )?;
    Ok(RelaxedOutcome {
        solutions: outcome.hits.clone(),
        run: outcome,
    })
}
