//! Halton sequences with optional random digit shifts.

use std::sync::OnceLock;

use rand::Rng;

use super::block::{
    BlockMeta, Domain, Family, Ordering, PointBlock, Randomization, RandomizationKind,
};
use super::seeded_rng;
use crate::error::{QmcError, Result};

/// Maximum number of randomized digits per coordinate.
pub const HALTON_MAX_DIGITS: usize = 48;

const PRIME_SIEVE_LIMIT: usize = 8192;

/// The stored prime table (all primes below 8192, i.e. 1028 of them).
pub fn primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut composite = vec![false; PRIME_SIEVE_LIMIT];
        let mut out = Vec::new();
        for p in 2..PRIME_SIEVE_LIMIT {
            if !composite[p] {
                out.push(p as u32);
                let mut q = p * p;
                while q < PRIME_SIEVE_LIMIT {
                    composite[q] = true;
                    q += p;
                }
            }
        }
        out
    })
}

/// Number of base-`p` digits that still matter in double precision, capped so
/// that `p^digits` fits comfortably in a `u128`.
fn significant_digits(p: u32) -> usize {
    let bits_per_digit = (p as f64).log2();
    let by_precision = (54.0 / bits_per_digit).ceil() as usize + 1;
    let by_range = (100.0 / bits_per_digit).floor() as usize;
    by_precision.min(by_range).min(HALTON_MAX_DIGITS)
}

/// Van der Corput radical inverse of `i` in base `p`.
pub fn radical_inverse(mut i: u64, p: u32) -> f64 {
    let p = p as u128;
    let mut reversed: u128 = 0;
    let mut denom: u128 = 1;
    while i != 0 {
        let digit = (i as u128) % p;
        i = ((i as u128) / p) as u64;
        reversed = reversed * p + digit;
        denom *= p;
    }
    reversed as f64 / denom as f64
}

fn shifted_radical_inverse(mut i: u64, p: u32, shifts: &[u32]) -> f64 {
    let base = p as u128;
    let mut reversed: u128 = 0;
    let mut denom: u128 = 1;
    for &s in shifts {
        let digit = (i as u128) % base;
        i = ((i as u128) / base) as u64;
        reversed = reversed * base + (digit + s as u128) % base;
        denom *= base;
    }
    let v = reversed as f64 / denom as f64;
    if v >= 1.0 {
        1.0 - f64::EPSILON / 2.0
    } else {
        v
    }
}

#[derive(Debug, Clone)]
pub struct Halton {
    d: usize,
    randomization: Randomization,
    digit_shifts: Vec<Vec<u32>>,
}

impl Halton {
    pub fn new(d: usize, randomization: Randomization) -> Result<Self> {
        if d == 0 {
            return Err(QmcError::domain("dimension must be at least 1"));
        }
        let table = primes();
        if d > table.len() {
            return Err(QmcError::capacity(format!(
                "Halton dimension {d} exceeds the {}-entry prime table",
                table.len()
            )));
        }
        randomization.check(Family::Halton)?;
        let digit_shifts = match randomization.kind {
            RandomizationKind::DigitShift => {
                let mut rng = seeded_rng(randomization.seed);
                table[..d]
                    .iter()
                    .map(|&p| {
                        (0..significant_digits(p))
                            .map(|_| rng.random_range(0..p))
                            .collect()
                    })
                    .collect()
            }
            _ => Vec::new(),
        };
        Ok(Halton {
            d,
            randomization,
            digit_shifts,
        })
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    pub fn randomization(&self) -> Randomization {
        self.randomization
    }

    pub fn points(&self, n_start: u64, n_end: u64) -> Result<PointBlock> {
        if n_start > n_end {
            return Err(QmcError::usage(format!(
                "n_start ({n_start}) exceeds n_end ({n_end})"
            )));
        }
        let table = primes();
        let n = (n_end - n_start) as usize;
        let mut values = Vec::with_capacity(n * self.d);
        for i in n_start..n_end {
            for (k, &p) in table[..self.d].iter().enumerate() {
                let v = if self.digit_shifts.is_empty() {
                    radical_inverse(i, p)
                } else {
                    shifted_radical_inverse(i, p, &self.digit_shifts[k])
                };
                values.push(v);
            }
        }
        Ok(PointBlock::new(
            values,
            self.d,
            Domain::UnitCube,
            BlockMeta {
                family: Family::Halton,
                ordering: Ordering::Sequential,
                randomization: self.randomization,
                n_start,
                n_end,
                warnings: Vec::new(),
            },
        ))
    }
}

pub fn halton_points(
    d: usize,
    n_start: u64,
    n_end: u64,
    rand: Randomization,
) -> Result<PointBlock> {
    Halton::new(d, rand)?.points(n_start, n_end)
}
