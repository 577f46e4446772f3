use std::fmt;

use crate::error::{QmcError, Result};

/// Point family that produced a block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Lattice,
    DigitalNet,
    Halton,
    Iid,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Lattice => "lattice",
            Family::DigitalNet => "net",
            Family::Halton => "halton",
            Family::Iid => "iid",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Index ordering of a generated sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ordering {
    /// Lattice: radical-inverse (van der Corput) ordering, extensible.
    Natural,
    /// Lattice: `i / n` ordering for a fixed `n`; not extensible.
    Linear,
    /// Digital net: point `i` uses the binary digits of `i`.
    Standard,
    /// Digital net: point `i` uses the binary digits of the Gray code of `i`.
    Gray,
    /// Halton and IID sequences have a single ordering.
    Sequential,
}

impl Ordering {
    pub fn name(self) -> &'static str {
        match self {
            Ordering::Natural => "natural",
            Ordering::Linear => "linear",
            Ordering::Standard => "standard",
            Ordering::Gray => "gray",
            Ordering::Sequential => "sequential",
        }
    }

    /// Whether the first `2^m` points are a prefix of the first `2^(m+1)`.
    pub fn is_extensible(self) -> bool {
        !matches!(self, Ordering::Linear)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RandomizationKind {
    None,
    /// Uniform random shift modulo one (lattices).
    ShiftMod1,
    /// XOR with a random 32-bit word per dimension (digital nets).
    DigitalShift,
    /// Random unit lower-triangular GF(2) scramble followed by a digital shift.
    LmsWithDigitalShift,
    /// Random per-digit shifts modulo the base (Halton).
    DigitShift,
}

impl RandomizationKind {
    pub fn name(self) -> &'static str {
        match self {
            RandomizationKind::None => "none",
            RandomizationKind::ShiftMod1 => "shift",
            RandomizationKind::DigitalShift => "digital-shift",
            RandomizationKind::LmsWithDigitalShift => "lms",
            RandomizationKind::DigitShift => "digit-shift",
        }
    }

    pub fn compatible_with(self, family: Family) -> bool {
        use RandomizationKind::*;
        matches!(
            (family, self),
            (_, None)
                | (Family::Lattice, ShiftMod1)
                | (Family::DigitalNet, DigitalShift | LmsWithDigitalShift)
                | (Family::Halton, DigitShift)
        )
    }

    /// The randomization used when none is requested explicitly.
    pub fn default_for(family: Family) -> Self {
        match family {
            Family::Lattice => RandomizationKind::ShiftMod1,
            Family::DigitalNet => RandomizationKind::LmsWithDigitalShift,
            Family::Halton => RandomizationKind::DigitShift,
            Family::Iid => RandomizationKind::None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Randomization {
    pub kind: RandomizationKind,
    pub seed: u64,
}

impl Randomization {
    pub fn none() -> Self {
        Randomization {
            kind: RandomizationKind::None,
            seed: 0,
        }
    }

    pub fn new(kind: RandomizationKind, seed: u64) -> Self {
        Randomization { kind, seed }
    }

    pub(crate) fn check(self, family: Family) -> Result<()> {
        if self.kind.compatible_with(family) {
            Ok(())
        } else {
            Err(QmcError::usage(format!(
                "randomization '{}' is not available for the {} family",
                self.kind.name(),
                family
            )))
        }
    }
}

/// Domain tag carried by a block of points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    UnitCube,
    Transformed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Warning {
    /// Unrandomized lattice or net: the first point of the sequence is the origin.
    OriginIncluded,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::OriginIncluded => f.write_str(
                "randomization is off: the sequence starts at the origin, which unbounded transforms map to infinity",
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockMeta {
    pub family: Family,
    pub ordering: Ordering,
    pub randomization: Randomization,
    pub n_start: u64,
    pub n_end: u64,
    pub warnings: Vec<Warning>,
}

/// An `n x d` row-major array of points plus the data needed to regenerate it.
#[derive(Debug, Clone, PartialEq)]
pub struct PointBlock {
    values: Vec<f64>,
    n: usize,
    d: usize,
    pub domain: Domain,
    pub meta: BlockMeta,
}

impl PointBlock {
    pub fn new(values: Vec<f64>, d: usize, domain: Domain, meta: BlockMeta) -> Self {
        assert!(d > 0, "point blocks need at least one dimension");
        assert_eq!(values.len() % d, 0, "value count must be a multiple of d");
        let n = values.len() / d;
        PointBlock {
            values,
            n,
            d,
            domain,
            meta,
        }
    }

    /// A unit-cube block built from raw rows, e.g. loaded from a file.
    pub fn from_rows(values: Vec<f64>, d: usize) -> Self {
        let n = (values.len() / d.max(1)) as u64;
        PointBlock::new(
            values,
            d,
            Domain::UnitCube,
            BlockMeta {
                family: Family::Iid,
                ordering: Ordering::Sequential,
                randomization: Randomization::none(),
                n_start: 0,
                n_end: n,
                warnings: Vec::new(),
            },
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.d..(i + 1) * self.d]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.values.chunks_exact(self.d)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn warnings(&self) -> &[Warning] {
        &self.meta.warnings
    }

    /// Rows `[start, end)` of this block as a new block with adjusted index range.
    pub fn slice(&self, start: usize, end: usize) -> PointBlock {
        let mut meta = self.meta.clone();
        meta.n_start = self.meta.n_start + start as u64;
        meta.n_end = self.meta.n_start + end as u64;
        PointBlock {
            values: self.values[start * self.d..end * self.d].to_vec(),
            n: end - start,
            d: self.d,
            domain: self.domain,
            meta,
        }
    }
}
