//! Counter-based random streams.
//!
//! Every draw is a pure function of `(seed, replicate, step, lane)`, so a
//! replicate produces the same numbers whichever worker runs it and in
//! whatever order replicates are scheduled. The mixer is the SplitMix64
//! finalizer applied to a keyed counter.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
const REPLICATE_MUL: u64 = 0xD1B5_4A32_D192_ED03;
const LANE_MUL: u64 = 0xABC9_8388_FB8F_AC03;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Identifies one independent replicate stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamKey {
    pub seed: u64,
    pub replicate: u64,
}

impl StreamKey {
    pub fn new(seed: u64, replicate: u64) -> Self {
        Self { seed, replicate }
    }

    pub fn stream(self) -> CounterRng {
        CounterRng::new(self)
    }
}

impl From<u64> for StreamKey {
    fn from(seed: u64) -> Self {
        Self::new(seed, 0)
    }
}

/// Stateless generator: `uniform(step, lane)` always returns the same value.
#[derive(Debug, Clone, Copy)]
pub struct CounterRng {
    key: u64,
}

impl CounterRng {
    pub fn new(key: StreamKey) -> Self {
        let k = mix64(key.seed ^ GOLDEN);
        let k = mix64(k ^ key.replicate.wrapping_mul(REPLICATE_MUL).wrapping_add(GOLDEN));
        Self { key: k }
    }

    #[inline]
    pub fn bits(&self, step: u64, lane: u32) -> u64 {
        let ctr = step
            .wrapping_mul(GOLDEN)
            .wrapping_add(u64::from(lane).wrapping_mul(LANE_MUL));
        mix64(self.key ^ mix64(ctr))
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    #[inline]
    pub fn uniform(&self, step: u64, lane: u32) -> f64 {
        const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
        (self.bits(step, lane) >> 11) as f64 * SCALE
    }
}
