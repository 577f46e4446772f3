//! Bundled generating data.
//!
//! * `new-joe-kuo-6.1024.txt`: Joe–Kuo direction numbers for the first 1024
//!   Sobol' dimensions.
//! * `lattice-kuo-embedded-1024.20.txt`: the first 1024 components of Kuo's
//!   embedded base-2 lattice vector, good for every `n = 2^10 ... 2^20`.

use std::sync::OnceLock;

use super::digital::GeneratingMatrices;
use super::lattice::LatticeGenVector;
use super::parse::{parse_direction_numbers_str, parse_lattice_vector_str};

pub const DIRECTION_NUMBERS_FILE: &str = "new-joe-kuo-6.1024.txt";
pub const LATTICE_VECTOR_FILE: &str = "lattice-kuo-embedded-1024.20.txt";

pub const DIRECTION_NUMBERS_TEXT: &str = include_str!("../../data/new-joe-kuo-6.1024.txt");
pub const LATTICE_VECTOR_TEXT: &str = include_str!("../../data/lattice-kuo-embedded-1024.20.txt");

pub fn default_generating_matrices() -> &'static GeneratingMatrices {
    static MATS: OnceLock<GeneratingMatrices> = OnceLock::new();
    MATS.get_or_init(|| {
        parse_direction_numbers_str(DIRECTION_NUMBERS_TEXT, None)
            .expect("bundled direction numbers parse")
    })
}

pub fn default_lattice_vector() -> &'static LatticeGenVector {
    static GEN: OnceLock<LatticeGenVector> = OnceLock::new();
    GEN.get_or_init(|| {
        parse_lattice_vector_str(LATTICE_VECTOR_TEXT).expect("bundled lattice vector parses")
    })
}
