//! Counter-based random streams.
//!
//! Output `i` of stream `(master_seed, stream_id)` is a pure function of the
//! triple, so replicate `r` can be regenerated anywhere from `stream_id = r`
//! without coordinating state between workers.

/// Identifier of the mixing construction, recorded in run manifests. Must
/// change whenever the output sequence of any stream changes.
pub const MIXER_ID: &str = "splitmix64-finalizer/counter-v1";

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// The splitmix64 output finalizer (Stafford variant 13).
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Two-word keyed mix used for per-node fields.
#[inline]
pub fn mix2(key: u64, word: u64) -> u64 {
    mix64(key ^ mix64(word.wrapping_mul(GOLDEN).wrapping_add(0x6a09_e667_f3bc_c909)))
}

/// Maps 64 random bits to the open interval `(0, 1)`: the midpoint grid
/// `(k + 1/2) 2^{-52}`, so the result is never 0 or 1 and `1 − u` is exact.
#[inline]
pub fn open01(bits: u64) -> f64 {
    ((bits >> 12) as f64 + 0.5) * (1.0 / (1u64 << 52) as f64)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RngStream {
    master_seed: u64,
    stream_id: u64,
    key: u64,
    counter: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        let key = mix64(master_seed ^ mix64(stream_id.wrapping_add(GOLDEN)));
        Self {
            master_seed,
            stream_id,
            key,
            counter: 0,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Number of 64-bit words drawn so far.
    pub fn counter(&self) -> u64 {
        self.counter
    }

    /// A child stream, independent of this one, for auxiliary draws.
    pub fn substream(&self, tag: u64) -> RngStream {
        RngStream::new(mix2(self.key, tag), self.stream_id)
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix64(self.key.wrapping_add(self.counter.wrapping_mul(GOLDEN)))
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on the open interval `(0, 1)`.
    #[inline]
    pub fn next_open01(&mut self) -> f64 {
        open01(self.next_u64())
    }

    /// Uniform integer in `0..n` (Lemire's multiply-and-reject).
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "below(0)");
        let threshold = n.wrapping_neg() % n;
        loop {
            let m = (self.next_u64() as u128) * (n as u128);
            if (m as u64) >= threshold {
                return (m >> 64) as u64;
            }
        }
    }

    /// `true` with probability `p`.
    #[inline]
    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }
}
