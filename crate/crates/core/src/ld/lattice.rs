//! Rank-1 extensible lattices in base 2.
//!
//! Point `i` in natural order is `{phi_2(i) h + delta}` where `phi_2` is the
//! base-2 radical inverse. With `i < 2^m_max` we have
//! `phi_2(i) = bitrev_{m_max}(i) / 2^{m_max}`, so the unshifted coordinates are
//! computed exactly in integer arithmetic as `(bitrev(i) * h_k mod 2^m_max) / 2^m_max`.

use rand::Rng;

use super::block::{
    BlockMeta, Domain, Family, Ordering, PointBlock, Randomization, RandomizationKind, Warning,
};
use super::seeded_rng;
use crate::error::{QmcError, Result};

/// Largest supported `m_max`; keeps every coordinate exact in an `f64`.
pub const LATTICE_MAX_BITS: u32 = 53;

/// Integer generating vector `h` of a rank-1 lattice supporting up to `2^m_max` points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeGenVector {
    h: Vec<u64>,
    m_max: u32,
}

impl LatticeGenVector {
    pub fn new(h: Vec<u64>, m_max: u32) -> Result<Self> {
        if h.is_empty() {
            return Err(QmcError::domain("generating vector is empty"));
        }
        if m_max == 0 || m_max > LATTICE_MAX_BITS {
            return Err(QmcError::domain(format!(
                "m_max must lie in 1..={LATTICE_MAX_BITS}, got {m_max}"
            )));
        }
        if let Some((k, &bad)) = h.iter().enumerate().find(|(_, &v)| v >> m_max != 0) {
            return Err(QmcError::domain(format!(
                "component {} of the generating vector ({bad}) is not below 2^{m_max}",
                k + 1
            )));
        }
        Ok(LatticeGenVector { h, m_max })
    }

    pub fn h(&self) -> &[u64] {
        &self.h
    }

    pub fn m_max(&self) -> u32 {
        self.m_max
    }

    pub fn max_dimension(&self) -> usize {
        self.h.len()
    }

    /// Generator `Z_{2^k} = {2^{-k-1} h}` as a point of `[0,1)^d`.
    pub fn generator(&self, k: u32, d: usize) -> Vec<f64> {
        let denom = (k + 1) as i32;
        self.h[..d]
            .iter()
            .map(|&hk| {
                let num = hk & ((1u64 << (k + 1).min(63)) - 1);
                num as f64 * 2f64.powi(-denom)
            })
            .collect()
    }
}

/// A configured rank-1 lattice generator. Immutable once built: the random
/// shift is drawn from the seed at construction.
#[derive(Debug, Clone)]
pub struct Lattice {
    gen: LatticeGenVector,
    d: usize,
    ordering: Ordering,
    randomization: Randomization,
    shift: Vec<f64>,
}

impl Lattice {
    pub fn new(
        gen: LatticeGenVector,
        d: usize,
        ordering: Ordering,
        randomization: Randomization,
    ) -> Result<Self> {
        if d == 0 {
            return Err(QmcError::domain("dimension must be at least 1"));
        }
        if d > gen.max_dimension() {
            return Err(QmcError::capacity(format!(
                "dimension {d} exceeds the {} components of the generating vector",
                gen.max_dimension()
            )));
        }
        if !matches!(ordering, Ordering::Natural | Ordering::Linear) {
            return Err(QmcError::usage(format!(
                "lattices support natural or linear ordering, not {}",
                ordering.name()
            )));
        }
        randomization.check(Family::Lattice)?;
        let shift = match randomization.kind {
            RandomizationKind::ShiftMod1 => {
                let mut rng = seeded_rng(randomization.seed);
                (0..d).map(|_| rng.random::<f64>()).collect()
            }
            _ => vec![0.0; d],
        };
        Ok(Lattice {
            gen,
            d,
            ordering,
            randomization,
            shift,
        })
    }

    /// Use an explicit shift vector instead of a seeded one.
    pub fn with_shift(mut self, shift: Vec<f64>) -> Result<Self> {
        if shift.len() != self.d || shift.iter().any(|s| !(0.0..1.0).contains(s)) {
            return Err(QmcError::domain("shift must be a d-vector in [0,1)"));
        }
        self.randomization.kind = RandomizationKind::ShiftMod1;
        self.shift = shift;
        Ok(self)
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    pub fn ordering(&self) -> Ordering {
        self.ordering
    }

    pub fn randomization(&self) -> Randomization {
        self.randomization
    }

    pub fn gen_vector(&self) -> &LatticeGenVector {
        &self.gen
    }

    pub fn shift(&self) -> &[f64] {
        &self.shift
    }

    pub fn capacity(&self) -> u64 {
        1u64 << self.gen.m_max
    }

    /// Points `[n_start, n_end)`.
    ///
    /// Linear ordering needs `n_end` a power of two and `n_start` either 0
    /// (all `n_end` points `i/n_end`) or `n_end/2` (the odd multiples of
    /// `1/n_end` that extend the `n_end/2` lattice).
    pub fn points(&self, n_start: u64, n_end: u64) -> Result<PointBlock> {
        if n_start > n_end {
            return Err(QmcError::usage(format!(
                "n_start ({n_start}) exceeds n_end ({n_end})"
            )));
        }
        if n_end > self.capacity() {
            return Err(QmcError::capacity(format!(
                "index range [{n_start}, {n_end}) exceeds the 2^{} points this generating vector supports",
                self.gen.m_max
            )));
        }
        let n = (n_end - n_start) as usize;
        let mut values = Vec::with_capacity(n * self.d);
        match self.ordering {
            Ordering::Natural => {
                let bits = self.gen.m_max;
                let scale = 2f64.powi(-(bits as i32));
                let mask = (1u128 << bits) - 1;
                for i in n_start..n_end {
                    let j = (i.reverse_bits() >> (64 - bits)) as u128;
                    for (k, &hk) in self.gen.h[..self.d].iter().enumerate() {
                        let z = ((j * hk as u128) & mask) as f64 * scale;
                        values.push(shift_mod1(z, self.shift[k]));
                    }
                }
            }
            Ordering::Linear => {
                if n_end != 0 && !n_end.is_power_of_two() {
                    return Err(QmcError::usage(format!(
                        "linear ordering needs n_end to be a power of two, got {n_end}"
                    )));
                }
                let (first, step) = if n_start == 0 {
                    (0u64, 1u64)
                } else if n_start * 2 == n_end {
                    (1, 2)
                } else {
                    return Err(QmcError::usage(format!(
                        "linear ordering extends only from n_start = n_end/2; got [{n_start}, {n_end})"
                    )));
                };
                let bits = n_end.trailing_zeros();
                let scale = 2f64.powi(-(bits as i32));
                let mask = (1u128 << bits) - 1;
                for t in 0..n as u64 {
                    let i = (first + step * t) as u128;
                    for (k, &hk) in self.gen.h[..self.d].iter().enumerate() {
                        let z = ((i * hk as u128) & mask) as f64 * scale;
                        values.push(shift_mod1(z, self.shift[k]));
                    }
                }
            }
            _ => unreachable!("checked at construction"),
        }
        let mut warnings = Vec::new();
        if self.randomization.kind == RandomizationKind::None {
            warnings.push(Warning::OriginIncluded);
        }
        Ok(PointBlock::new(
            values,
            self.d,
            Domain::UnitCube,
            BlockMeta {
                family: Family::Lattice,
                ordering: self.ordering,
                randomization: self.randomization,
                n_start,
                n_end,
                warnings,
            },
        ))
    }
}

#[inline]
fn shift_mod1(z: f64, delta: f64) -> f64 {
    let s = z + delta;
    if s >= 1.0 {
        s - 1.0
    } else {
        s
    }
}

/// Generate lattice points `[n_start, n_end)` in dimension `d`.
pub fn lattice_points(
    gen: &LatticeGenVector,
    d: usize,
    n_start: u64,
    n_end: u64,
    ordering: Ordering,
    rand: Randomization,
) -> Result<PointBlock> {
    Lattice::new(gen.clone(), d, ordering, rand)?.points(n_start, n_end)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h13() -> LatticeGenVector {
        LatticeGenVector::new(vec![1, 3], 20).unwrap()
    }

    #[test]
    fn natural_listing_for_h13() {
        let block =
            lattice_points(&h13(), 2, 0, 8, Ordering::Natural, Randomization::none()).unwrap();
        let expected = [
            0.0, 0.0, 0.5, 0.5, 0.25, 0.75, 0.75, 0.25, 0.125, 0.375, 0.625, 0.875, 0.375, 0.125,
            0.875, 0.625,
        ];
        assert_eq!(block.values(), &expected);
        assert_eq!(block.warnings(), &[Warning::OriginIncluded]);
    }

    #[test]
    fn explicit_shift_moves_point_one() {
        let lat = Lattice::new(h13(), 2, Ordering::Natural, Randomization::none())
            .unwrap()
            .with_shift(vec![0.1, 0.2])
            .unwrap();
        let block = lat.points(1, 2).unwrap();
        assert!((block.row(0)[0] - 0.6).abs() < 1e-15);
        assert!((block.row(0)[1] - 0.7).abs() < 1e-15);
        assert!(block.warnings().is_empty());
    }

    #[test]
    fn linear_ordering_and_its_extension() {
        let lat = Lattice::new(h13(), 2, Ordering::Linear, Randomization::none()).unwrap();
        let first = lat.points(0, 4).unwrap();
        assert_eq!(
            first.values(),
            &[0.0, 0.0, 0.25, 0.75, 0.5, 0.5, 0.75, 0.25]
        );
        let ext = lat.points(4, 8).unwrap();
        assert_eq!(
            ext.values(),
            &[0.125, 0.375, 0.375, 0.125, 0.625, 0.875, 0.875, 0.625]
        );
        assert!(matches!(lat.points(2, 8), Err(QmcError::Usage(_))));
        assert!(matches!(lat.points(0, 6), Err(QmcError::Usage(_))));
    }

    #[test]
    fn capacity_and_dimension_errors() {
        let lat = Lattice::new(
            LatticeGenVector::new(vec![1, 3], 3).unwrap(),
            2,
            Ordering::Natural,
            Randomization::none(),
        )
        .unwrap();
        assert!(lat.points(0, 8).is_ok());
        assert!(matches!(lat.points(0, 9), Err(QmcError::Capacity(_))));
        assert!(matches!(
            Lattice::new(h13(), 3, Ordering::Natural, Randomization::none()),
            Err(QmcError::Capacity(_))
        ));
        assert!(matches!(
            Lattice::new(
                h13(),
                2,
                Ordering::Natural,
                Randomization::new(RandomizationKind::DigitalShift, 1)
            ),
            Err(QmcError::Usage(_))
        ));
        assert!(LatticeGenVector::new(vec![1, 9], 3).is_err());
    }

    #[test]
    fn generators_match_listing() {
        let g = h13();
        assert_eq!(g.generator(0, 2), vec![0.5, 0.5]);
        assert_eq!(g.generator(1, 2), vec![0.25, 0.75]);
        assert_eq!(g.generator(2, 2), vec![0.125, 0.375]);
    }
}
