//! Point generators: rank-1 lattices, digital nets, Halton and IID sequences.

pub mod block;
pub mod defaults;
pub mod digital;
pub mod group;
pub mod halton;
pub mod iid;
pub mod lattice;
pub mod parse;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use block::{
    BlockMeta, Domain, Family, Ordering, PointBlock, Randomization, RandomizationKind, Warning,
};
pub use defaults::{default_generating_matrices, default_lattice_vector};
pub use digital::{digital_net_points, DigitalNet, GeneratingMatrices, NET_PRECISION};
pub use group::{digitwise_add, lattice_add, lattice_sub};
pub use halton::{halton_points, primes, radical_inverse, Halton};
pub use iid::{iid_points, IidGenerator};
pub use lattice::{lattice_points, Lattice, LatticeGenVector};
pub use parse::{
    parse_direction_numbers, parse_direction_numbers_str, parse_lattice_vector,
    parse_lattice_vector_str,
};

pub(crate) fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derive the seed of stream `index` from a base seed (SplitMix64 finalizer).
pub fn child_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
