//! Counter-based 64-bit random substreams.
//!
//! Every stream is a Weyl sequence pushed through the SplitMix64 finalizer.
//! The starting point of a stream is an avalanche hash of
//! `(base_seed, stream_id)`, so draw `i` of a stream is a pure function of
//! `(base_seed, stream_id, i)` and streams can be created in any order on
//! any thread.

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A single-owner random number substream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RngStream {
    state: u64,
    stream_id: u64,
}

impl RngStream {
    pub fn new(base_seed: u64, stream_id: u64) -> Self {
        let seed = mix64(base_seed.wrapping_add(GOLDEN_GAMMA));
        let state = mix64(seed ^ mix64(stream_id.wrapping_mul(GOLDEN_GAMMA).wrapping_add(seed)));
        Self { state, stream_id }
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform draw on the open interval (0, 1), with 53 bits of resolution.
    #[inline]
    pub fn next_open01(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Skip `n` draws in constant time.
    pub fn advance(&mut self, n: u64) {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA.wrapping_mul(n));
    }
}
