//! Seed derivation.
//!
//! Every random draw is addressed by `(seed, domain, index)`: the seed and
//! domain pick a ChaCha key, the index picks the ChaCha stream. Work items can
//! therefore be evaluated in any order, on any thread, with identical output.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent random-number domains, so that e.g. θ draws and shot noise
/// under the same user seed never share a stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    Theta,
    Shots,
    HaarState,
    HaarUnitary,
    Init,
    Experiment,
}

impl Domain {
    fn tag(self) -> u64 {
        match self {
            Domain::Theta => 0x7468_6574_6100_0001,
            Domain::Shots => 0x7368_6f74_7300_0002,
            Domain::HaarState => 0x6861_6172_7300_0003,
            Domain::HaarUnitary => 0x6861_6172_7500_0004,
            Domain::Init => 0x696e_6974_0000_0005,
            Domain::Experiment => 0x6578_7065_7200_0006,
        }
    }
}

/// splitmix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generator for work item `index` in `domain` under `seed`.
pub fn stream_rng(seed: u64, domain: Domain, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(mix(seed ^ domain.tag()));
    rng.set_stream(index);
    rng
}

/// Derives a child seed, e.g. one per repetition of an experiment.
pub fn child_seed(seed: u64, index: u64) -> u64 {
    mix(mix(seed) ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03))
}
