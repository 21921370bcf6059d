//! Deterministic per-trial random streams.
//!
//! Every trial owns several independent generators, one per purpose, all derived
//! from `(master_seed, trial_index, stream)`. A trial's outcome therefore depends
//! only on its own index, never on scheduling or on how many trials run.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator type used throughout the simulator.
pub type SimRng = ChaCha8Rng;

/// Independent random streams consumed by one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Network = 1,
    Rewire = 2,
    Sizes = 3,
    Policy = 4,
    Shock = 5,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Child seed for trial `index` of an experiment seeded with `master`.
pub fn child_seed(master: u64, index: u64) -> u64 {
    splitmix64(splitmix64(master) ^ index.wrapping_mul(0xD6E8_FEB8_6659_FD93))
}

/// Generator for one stream of one trial.
pub fn trial_rng(master: u64, index: u64, stream: Stream) -> SimRng {
    SimRng::seed_from_u64(splitmix64(child_seed(master, index) ^ stream as u64))
}
