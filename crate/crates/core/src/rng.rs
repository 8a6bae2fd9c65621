//! Seedable, stream-splittable random number generation.
//!
//! A [`RngStream`] is identified by `(seed, stream_id)`. The backing
//! generator is ChaCha8, a counter-based cipher whose 64-bit stream field
//! gives 2^64 statistically independent streams per seed, and whose output
//! for a fixed `(seed, stream_id)` is identical across platforms, runs, and
//! thread schedules. Replications of an experiment each own one stream, so
//! parallel and serial execution produce bit-identical draws.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A single-owner random stream. Clone it only to replay the identical
/// sequence; concurrent tasks must use distinct streams.
#[derive(Debug, Clone)]
pub struct RngStream {
    inner: ChaCha8Rng,
    seed: u64,
    stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream_id);
        RngStream {
            inner,
            seed,
            stream_id,
        }
    }

    /// The `(seed, stream_id)` pair that reproduces this stream from scratch.
    pub fn seed_info(&self) -> (u64, u64) {
        (self.seed, self.stream_id)
    }

    /// A uniform draw in (0, 1), never exactly 0.
    pub fn uniform_open(&mut self) -> f64 {
        loop {
            let u: f64 = rand::Rng::random(&mut self.inner);
            if u > 0.0 {
                return u;
            }
        }
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }
    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }
    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.inner.fill_bytes(dest)
    }
}
