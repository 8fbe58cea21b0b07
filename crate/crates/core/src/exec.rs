// Copyright 2026 The camac Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Deterministic fan-out of Monte Carlo trials.
//!
//! Trials are grouped into chunks of [`CHUNK_TRIALS`]. Trial `i` always draws
//! from the ChaCha stream `(seed, purpose, i)`, and chunk accumulators are
//! merged in chunk order, so the result does not depend on how many threads
//! ran the chunks.

use std::ops::Range;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const CHUNK_TRIALS: u64 = 512;

/// How chunks are executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    /// Rayon pool. Same as `Sequential` when built without `parallel`.
    #[default]
    Parallel,
}

/// Random stream for one trial.
///
/// The 256-bit key encodes `(seed, purpose)` and the ChaCha stream id is the
/// trial index, so every trial gets an independent counter-based stream.
pub fn trial_rng(seed: u64, purpose: u64, trial: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&purpose.to_le_bytes());
    key[16..24].copy_from_slice(&0x6361_6d61_635f_7070u64.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(trial);
    rng
}

fn chunk_ranges(trials: u64) -> Vec<Range<u64>> {
    (0..trials.div_ceil(CHUNK_TRIALS))
        .map(|c| c * CHUNK_TRIALS..((c + 1) * CHUNK_TRIALS).min(trials))
        .collect()
}

/// Runs `work` on every chunk of `0..trials` and returns the chunk results in
/// chunk order.
pub fn map_chunks<A, F>(trials: u64, exec: Exec, work: F) -> Vec<A>
where
    A: Send,
    F: Fn(Range<u64>) -> A + Sync + Send,
{
    let ranges = chunk_ranges(trials);
    match exec {
        Exec::Sequential => ranges.into_iter().map(work).collect(),
        Exec::Parallel => parallel_map(ranges, work),
    }
}

#[cfg(feature = "parallel")]
fn parallel_map<A, F>(ranges: Vec<Range<u64>>, work: F) -> Vec<A>
where
    A: Send,
    F: Fn(Range<u64>) -> A + Sync + Send,
{
    use rayon::prelude::*;
    ranges.into_par_iter().map(work).collect()
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<A, F>(ranges: Vec<Range<u64>>, work: F) -> Vec<A>
where
    A: Send,
    F: Fn(Range<u64>) -> A + Sync + Send,
{
    ranges.into_iter().map(work).collect()
}

/// Chunked map-reduce: `fold` accumulates one chunk, `merge` combines chunk
/// accumulators left to right.
pub fn fold_trials<A, F, M>(trials: u64, exec: Exec, fold: F, merge: M) -> A
where
    A: Send + Default,
    F: Fn(Range<u64>) -> A + Sync + Send,
    M: Fn(&mut A, &A),
{
    let parts = map_chunks(trials, exec, fold);
    let mut acc = A::default();
    for p in &parts {
        merge(&mut acc, p);
    }
    acc
}
