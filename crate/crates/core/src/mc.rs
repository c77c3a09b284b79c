//! Seeded, schedule-independent Monte-Carlo driver.
//!
//! A run of `samples` draws is split over a fixed number of ChaCha streams
//! derived from the root seed. Streams run in parallel and their running
//! statistics are merged in stream order, so results do not depend on the
//! thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const STREAMS: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: u64,
}

/// Welford accumulator with Chan's pairwise merge.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunningStats {
    count: u64,
    mean: f64,
    m2: f64,
}

impl RunningStats {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&mut self, other: &RunningStats) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = (self.count + other.count) as f64;
        let delta = other.mean - self.mean;
        self.mean += delta * other.count as f64 / n;
        self.m2 += other.m2 + delta * delta * self.count as f64 * other.count as f64 / n;
        self.count += other.count;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance; zero for fewer than two samples.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    pub fn estimate(&self) -> Estimate {
        let std_error = if self.count == 0 { 0.0 } else { (self.variance() / self.count as f64).sqrt() };
        Estimate { estimate: self.mean, std_error, samples: self.count }
    }
}

/// Rng for stream `k` of a run seeded with `seed`.
pub fn stream_rng(seed: u64, k: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k);
    rng
}

/// Draws `samples` values of `draw`, spread over [`STREAMS`] seeded streams.
pub fn sample<F>(samples: u64, seed: u64, draw: F) -> Estimate
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    let base = samples / STREAMS;
    let extra = samples % STREAMS;
    let partials: Vec<RunningStats> = (0..STREAMS)
        .into_par_iter()
        .map(|k| {
            let mut rng = stream_rng(seed, k);
            let mut stats = RunningStats::default();
            for _ in 0..base + u64::from(k < extra) {
                stats.push(draw(&mut rng));
            }
            stats
        })
        .collect();
    let mut total = RunningStats::default();
    for p in &partials {
        total.merge(p);
    }
    total.estimate()
}
