//! Counter-based deterministic random streams.
//!
//! Every random decision in a run draws from a stream addressed by a split
//! path: `(purpose, node, round, ...)` below a root key. Because a stream is
//! a pure function of its path, per-node work can be evaluated in any order
//! (or on any thread) without perturbing results.
//!
//! The generator is SplitMix64 used in counter mode: output `i` of a stream is
//! `mix(key + i * GAMMA)`. Not suitable for anything security related.

use rand_core::{impls, RngCore};

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child key from `key` and a single label.
#[inline]
pub fn derive_key(key: u64, label: u64) -> u64 {
    mix64(key ^ mix64(label.wrapping_add(0x632B_E59B_D9B4_E019)).wrapping_add(GAMMA))
}

/// Derives a child key along a multi-part path.
pub fn derive_path(key: u64, path: &[u64]) -> u64 {
    path.iter().fold(key, |k, &label| derive_key(k, label))
}

/// What a stream is used for. The discriminant is the first split label, so
/// streams with different purposes never share a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u64)]
pub enum Purpose {
    Topology = 1,
    Placement = 2,
    InitialOpinions = 3,
    Threshold = 4,
    Walks = 5,
    RoundCoin = 6,
    QueryResponse = 7,
    HeartbeatLie = 8,
    RunSeed = 9,
    PointSeed = 10,
}

/// A single counter-based stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimRng {
    key: u64,
    counter: u64,
}

impl SimRng {
    pub fn from_key(key: u64) -> Self {
        Self { key, counter: 0 }
    }

    /// Uniform draw in `[0, 1)` with 53 bits of precision.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// `true` with probability `p`. `p <= 0` never fires, `p >= 1` always does.
    #[inline]
    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }

    /// Uniform index in `0..n`. `n` must be positive.
    #[inline]
    pub fn below(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        // Lemire's multiply-shift with rejection.
        let range = n as u64;
        let threshold = range.wrapping_neg() % range;
        loop {
            let m = (self.next_u64() as u128) * (range as u128);
            if (m as u64) >= threshold {
                return (m >> 64) as usize;
            }
        }
    }
}

impl RngCore for SimRng {
    #[inline]
    fn next_u64(&mut self) -> u64 {
        let z = self.key.wrapping_add(self.counter.wrapping_mul(GAMMA));
        self.counter = self.counter.wrapping_add(1);
        mix64(z)
    }

    fn next_u32(&mut self) -> u32 {
        (self.next_u64() >> 32) as u32
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        impls::fill_bytes_via_next(self, dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand_core::Error> {
        self.fill_bytes(dest);
        Ok(())
    }
}

/// Root of a tree of streams, usually one per run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamTree {
    root: u64,
}

impl StreamTree {
    pub fn new(seed: u64) -> Self {
        Self { root: mix64(seed ^ 0xD1B5_4A32_D192_ED03) }
    }

    pub fn root(&self) -> u64 {
        self.root
    }

    pub fn subtree(&self, label: u64) -> StreamTree {
        StreamTree { root: derive_key(self.root, label) }
    }

    pub fn stream(&self, purpose: Purpose, parts: &[u64]) -> SimRng {
        SimRng::from_key(derive_path(derive_key(self.root, purpose as u64), parts))
    }

    /// A 64-bit seed derived from this tree, for handing to a nested tree.
    pub fn seed(&self, purpose: Purpose, parts: &[u64]) -> u64 {
        derive_path(derive_key(self.root, purpose as u64), parts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_path_same_draws() {
        let t = StreamTree::new(7);
        let mut a = t.stream(Purpose::Walks, &[3, 9]);
        let mut b = t.stream(Purpose::Walks, &[3, 9]);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    fn first_draws(mut r: SimRng) -> Vec<u64> {
        (0..8).map(|_| r.next_u64()).collect()
    }

    #[test]
    fn distinct_paths_diverge() {
        let t = StreamTree::new(7);
        let a = first_draws(t.stream(Purpose::Walks, &[3, 9]));
        assert_ne!(a, first_draws(t.stream(Purpose::Walks, &[9, 3])));
        assert_ne!(a, first_draws(t.stream(Purpose::Threshold, &[3, 9])));
        assert_ne!(a, first_draws(StreamTree::new(8).stream(Purpose::Walks, &[3, 9])));
    }

    #[test]
    fn bernoulli_extremes() {
        let mut r = SimRng::from_key(1);
        for _ in 0..1000 {
            assert!(!r.bernoulli(0.0));
            assert!(r.bernoulli(1.0));
        }
    }

    #[test]
    fn uniform_moments() {
        let mut r = SimRng::from_key(42);
        let n = 200_000;
        let mean = (0..n).map(|_| r.next_f64()).sum::<f64>() / n as f64;
        assert!((mean - 0.5).abs() < 0.005, "mean {mean}");
        let mut counts = [0usize; 7];
        for _ in 0..70_000 {
            counts[r.below(7)] += 1;
        }
        for c in counts {
            assert!((c as f64 - 10_000.0).abs() < 400.0, "{counts:?}");
        }
    }
}
