//! Parallel, resumable walk over a range in fixed-size segments.
//!
//! Workers sieve disjoint segments; the coordinator merges their hits in
//! ascending segment order and is the only writer of the checkpoint file,
//! so output does not depend on the number of workers or on scheduling.

use std::path::Path;

use rayon::prelude::*;

use super::checkpoint::SearchCheckpoint;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct SegmentedRun<'a> {
    /// Canonical serialization of the search parameters.
    pub search_id: String,
    pub lo: u64,
    pub hi: u64,
    pub segment_size: u64,
    pub jobs: usize,
    pub checkpoint: Option<&'a Path>,
    /// Stop after this many segments in this invocation (simulated
    /// interruption; the checkpoint stays valid).
    pub stop_after: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutcome {
    pub hits: Vec<u64>,
    /// Everything below this bound has been searched.
    pub completed_hi: u64,
    pub finished: bool,
    /// Bound picked up from an existing checkpoint, if any.
    pub resumed_from: Option<u64>,
    pub segments_run: usize,
}

impl<'a> SegmentedRun<'a> {
    pub fn new(search_id: impl Into<String>, lo: u64, hi: u64) -> Self {
        SegmentedRun {
            search_id: search_id.into(),
            lo,
            hi,
            segment_size: super::DEFAULT_SEGMENT_SIZE,
            jobs: 1,
            checkpoint: None,
            stop_after: None,
        }
    }

    /// Runs `work(seg_lo, seg_hi)` over every segment; `work` returns the
    /// hits of its segment in ascending order. `progress` is called by the
    /// coordinator after each merged segment.
    pub fn execute<F, P>(&self, work: F, mut progress: P) -> Result<RunOutcome>
    where
        F: Fn(u64, u64) -> Result<Vec<u64>> + Sync,
        P: FnMut(&SearchCheckpoint),
    {
        if self.lo >= self.hi {
            return Err(Error::InvalidArgument(format!(
                "empty search range [{}, {})",
                self.lo, self.hi
            )));
        }
        if self.segment_size == 0 || self.jobs == 0 {
            return Err(Error::InvalidArgument(
                "segment size and job count must be positive".into(),
            ));
        }
        let mut state = SearchCheckpoint::new(self.search_id.clone(), self.lo);
        let mut resumed_from = None;
        if let Some(path) = self.checkpoint {
            if let Some(saved) = SearchCheckpoint::load(path)? {
                if saved.search_id != self.search_id {
                    return Err(Error::Checkpoint {
                        path: path.to_path_buf(),
                        reason: format!(
                            "belongs to search {:?}, not {:?}",
                            saved.search_id, self.search_id
                        ),
                    });
                }
                if saved.last_completed_hi < self.lo || saved.last_completed_hi > self.hi {
                    return Err(Error::Checkpoint {
                        path: path.to_path_buf(),
                        reason: format!(
                            "completed bound {} outside range",
                            saved.last_completed_hi
                        ),
                    });
                }
                resumed_from = Some(saved.last_completed_hi);
                state = saved;
            }
        }

        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;

        let budget = self.stop_after.unwrap_or(usize::MAX);
        let mut segments_run = 0usize;
        // A few segments per worker per round keeps everyone busy without
        // holding many results in memory.
        let round = self.jobs * 2;
        while state.last_completed_hi < self.hi && segments_run < budget {
            let take = round.min(budget - segments_run);
            let mut bounds = Vec::with_capacity(take);
            let mut start = state.last_completed_hi;
            while bounds.len() < take && start < self.hi {
                let end = self.hi.min(start.saturating_add(self.segment_size));
                bounds.push((start, end));
                start = end;
            }
            let results: Vec<Result<Vec<u64>>> =
                pool.install(|| bounds.par_iter().map(|&(a, b)| work(a, b)).collect());
            for (&(_, end), hits) in bounds.iter().zip(results) {
                let hits = hits?;
                debug_assert!(hits.windows(2).all(|w| w[0] < w[1]));
                state.hits.extend(hits);
                state.last_completed_hi = end;
                segments_run += 1;
                if let Some(path) = self.checkpoint {
                    state.store(path)?;
                }
                progress(&state);
            }
        }

        Ok(RunOutcome {
            finished: state.last_completed_hi >= self.hi,
            completed_hi: state.last_completed_hi,
            hits: state.hits,
            resumed_from,
            segments_run,
        })
    }
}
