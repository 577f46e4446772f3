//! Base-2 digital nets (Sobol' sequences) with 32-digit generating matrices.

use rand::Rng;

use super::block::{
    BlockMeta, Domain, Family, Ordering, PointBlock, Randomization, RandomizationKind, Warning,
};
use super::seeded_rng;
use crate::error::{QmcError, Result};

/// Output precision of digital-net coordinates, in bits.
pub const NET_PRECISION: u32 = 32;

const TAIL_BITS: u32 = 53 - NET_PRECISION;
const POINT_SCALE: f64 = 1.0 / (1u64 << 53) as f64;

/// Per-dimension generating-matrix columns. Column `j` of a dimension is a
/// 32-bit word whose most significant bit is the first output digit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratingMatrices {
    columns: Vec<Vec<u32>>,
    m_max: u32,
}

impl GeneratingMatrices {
    pub fn new(columns: Vec<Vec<u32>>, m_max: u32) -> Result<Self> {
        if m_max == 0 || m_max > NET_PRECISION {
            return Err(QmcError::domain(format!(
                "m_max must lie in 1..={NET_PRECISION}, got {m_max}"
            )));
        }
        if columns.is_empty() {
            return Err(QmcError::domain("no dimensions in generating matrices"));
        }
        for (k, cols) in columns.iter().enumerate() {
            if cols.len() != m_max as usize {
                return Err(QmcError::domain(format!(
                    "dimension {} has {} columns, expected {m_max}",
                    k + 1,
                    cols.len()
                )));
            }
            if cols[0] >> 31 != 1 {
                return Err(QmcError::domain(format!(
                    "dimension {}: first column must have its top bit set",
                    k + 1
                )));
            }
            if cols.contains(&0) {
                return Err(QmcError::domain(format!(
                    "dimension {} has a zero column",
                    k + 1
                )));
            }
        }
        Ok(GeneratingMatrices { columns, m_max })
    }

    pub fn m_max(&self) -> u32 {
        self.m_max
    }

    pub fn max_dimension(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self, dim: usize) -> &[u32] {
        &self.columns[dim]
    }

    /// Keep only the first `d` dimensions.
    pub fn truncated(&self, d: usize) -> Result<Self> {
        if d == 0 || d > self.columns.len() {
            return Err(QmcError::capacity(format!(
                "requested {d} dimensions, generating matrices provide {}",
                self.columns.len()
            )));
        }
        Ok(GeneratingMatrices {
            columns: self.columns[..d].to_vec(),
            m_max: self.m_max,
        })
    }
}

/// Left-multiply a generating matrix (given by its columns) by a unit
/// lower-triangular GF(2) matrix. `rows[r]` holds row `r` with digit `s`
/// stored at bit `31 - s`.
fn left_multiply(rows: &[u32; 32], columns: &[u32]) -> Vec<u32> {
    columns
        .iter()
        .map(|&c| {
            rows.iter().enumerate().fold(0u32, |acc, (r, &row)| {
                acc | (((row & c).count_ones() & 1) << (31 - r))
            })
        })
        .collect()
}

fn random_lower_triangular<R: Rng>(rng: &mut R) -> [u32; 32] {
    let mut rows = [0u32; 32];
    for (r, row) in rows.iter_mut().enumerate() {
        let diag = 1u32 << (31 - r);
        // digits strictly before r, i.e. bits above the diagonal bit
        let above = if r == 0 { 0 } else { !0u32 << (32 - r) };
        *row = (rng.random::<u32>() & above) | diag;
    }
    rows
}

/// A configured digital-net generator. Scrambled columns and shifts are drawn
/// from the seed at construction; generation is pure afterwards.
#[derive(Debug, Clone)]
pub struct DigitalNet {
    columns: Vec<Vec<u32>>,
    m_max: u32,
    d: usize,
    ordering: Ordering,
    randomization: Randomization,
    shift: Vec<u32>,
    // Digits 33..53 of a seeded shift. The matrices have no digits there, so
    // these are pure shift digits; they keep randomized points off the boundary.
    tail: Vec<u64>,
}

impl DigitalNet {
    pub fn new(
        mats: &GeneratingMatrices,
        d: usize,
        ordering: Ordering,
        randomization: Randomization,
    ) -> Result<Self> {
        if d == 0 {
            return Err(QmcError::domain("dimension must be at least 1"));
        }
        if d > mats.max_dimension() {
            return Err(QmcError::capacity(format!(
                "dimension {d} exceeds the {} dimensions of the generating matrices",
                mats.max_dimension()
            )));
        }
        if !matches!(ordering, Ordering::Standard | Ordering::Gray) {
            return Err(QmcError::usage(format!(
                "digital nets support standard or gray ordering, not {}",
                ordering.name()
            )));
        }
        randomization.check(Family::DigitalNet)?;
        let mut rng = seeded_rng(randomization.seed);
        let columns: Vec<Vec<u32>> = match randomization.kind {
            RandomizationKind::LmsWithDigitalShift => (0..d)
                .map(|k| left_multiply(&random_lower_triangular(&mut rng), mats.columns(k)))
                .collect(),
            _ => (0..d).map(|k| mats.columns(k).to_vec()).collect(),
        };
        let (shift, tail) = match randomization.kind {
            RandomizationKind::DigitalShift | RandomizationKind::LmsWithDigitalShift => {
                let shift = (0..d).map(|_| rng.random::<u32>()).collect();
                let tail = (0..d)
                    .map(|_| rng.random::<u64>() >> (64 - TAIL_BITS))
                    .collect();
                (shift, tail)
            }
            _ => (vec![0; d], vec![0; d]),
        };
        Ok(DigitalNet {
            columns,
            m_max: mats.m_max(),
            d,
            ordering,
            randomization,
            shift,
            tail,
        })
    }

    /// Use an explicit digital shift (one 32-bit word per dimension).
    pub fn with_shift(mut self, shift: Vec<u32>) -> Result<Self> {
        if shift.len() != self.d {
            return Err(QmcError::domain("shift must have one word per dimension"));
        }
        if self.randomization.kind == RandomizationKind::None {
            self.randomization.kind = RandomizationKind::DigitalShift;
        }
        self.shift = shift;
        self.tail = vec![0; self.d];
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

    pub fn capacity(&self) -> u64 {
        1u64 << self.m_max
    }

    /// The (possibly scrambled) generating columns in use for dimension `k`.
    pub fn columns(&self, k: usize) -> &[u32] {
        &self.columns[k]
    }

    /// 32-bit output words of point `i` (before conversion to `[0,1)`).
    pub fn word(&self, i: u64, k: usize) -> u32 {
        let idx = match self.ordering {
            Ordering::Gray => i ^ (i >> 1),
            _ => i,
        };
        let cols = &self.columns[k];
        let mut bits = idx;
        let mut acc = self.shift[k];
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            acc ^= cols[j];
            bits &= bits - 1;
        }
        acc
    }

    pub fn points(&self, n_start: u64, n_end: u64) -> Result<PointBlock> {
        if n_start > n_end {
            return Err(QmcError::usage(format!(
                "n_start ({n_start}) exceeds n_end ({n_end})"
            )));
        }
        if n_end > self.capacity() {
            return Err(QmcError::capacity(format!(
                "requested points up to index {n_end}, but {}-bit digital nets repeat after 2^{} points",
                NET_PRECISION, self.m_max
            )));
        }
        let n = (n_end - n_start) as usize;
        let mut values = Vec::with_capacity(n * self.d);
        for i in n_start..n_end {
            for k in 0..self.d {
                values.push(
                    ((self.word(i, k) as u64) << TAIL_BITS | self.tail[k]) as f64 * POINT_SCALE,
                );
            }
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
                family: Family::DigitalNet,
                ordering: self.ordering,
                randomization: self.randomization,
                n_start,
                n_end,
                warnings,
            },
        ))
    }
}

pub fn digital_net_points(
    mats: &GeneratingMatrices,
    d: usize,
    n_start: u64,
    n_end: u64,
    ordering: Ordering,
    rand: Randomization,
) -> Result<PointBlock> {
    DigitalNet::new(mats, d, ordering, rand)?.points(n_start, n_end)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ld::defaults::default_generating_matrices;

    #[test]
    fn sobol_generators_from_the_listing() {
        let mats = default_generating_matrices();
        let block =
            digital_net_points(mats, 2, 0, 8, Ordering::Standard, Randomization::none()).unwrap();
        assert_eq!(block.row(0), &[0.0, 0.0]);
        assert_eq!(block.row(1), &[0.5, 0.5]);
        assert_eq!(block.row(2), &[0.25, 0.75]);
        assert_eq!(block.row(4), &[0.125, 0.625]);
        assert_eq!(block.row(6), &[0.375, 0.375]);
    }

    #[test]
    fn gray_order_is_a_permutation_of_standard() {
        let mats = default_generating_matrices();
        let std =
            digital_net_points(mats, 3, 0, 64, Ordering::Standard, Randomization::none()).unwrap();
        let gray =
            digital_net_points(mats, 3, 0, 64, Ordering::Gray, Randomization::none()).unwrap();
        let mut a: Vec<Vec<u64>> = std
            .rows()
            .map(|r| r.iter().map(|v| v.to_bits()).collect())
            .collect();
        let mut b: Vec<Vec<u64>> = gray
            .rows()
            .map(|r| r.iter().map(|v| v.to_bits()).collect())
            .collect();
        assert_ne!(a, b);
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn lms_keeps_unit_diagonal_and_nonzero_columns() {
        let mats = default_generating_matrices();
        let net = DigitalNet::new(
            mats,
            5,
            Ordering::Standard,
            Randomization::new(RandomizationKind::LmsWithDigitalShift, 42),
        )
        .unwrap();
        for k in 0..5 {
            let cols = net.columns(k);
            assert_eq!(cols[0] >> 31, 1);
            assert!(cols.iter().all(|&c| c != 0));
            // the leading digit of each column is unchanged by a unit lower-triangular factor
            for (c, orig) in cols.iter().zip(mats.columns(k)) {
                assert_eq!(c.leading_zeros(), orig.leading_zeros());
            }
        }
    }

    #[test]
    fn capacity_is_enforced() {
        let mats = default_generating_matrices();
        let net = DigitalNet::new(mats, 2, Ordering::Standard, Randomization::none()).unwrap();
        assert!(matches!(
            net.points(0, (1u64 << 32) + 1),
            Err(QmcError::Capacity(_))
        ));
        let small = GeneratingMatrices::new(vec![vec![1 << 31, 1 << 30]], 2).unwrap();
        assert!(
            digital_net_points(&small, 1, 0, 4, Ordering::Standard, Randomization::none()).is_ok()
        );
        assert!(matches!(
            digital_net_points(&small, 1, 0, 5, Ordering::Standard, Randomization::none()),
            Err(QmcError::Capacity(_))
        ));
    }

    #[test]
    fn rejects_malformed_matrices() {
        assert!(GeneratingMatrices::new(vec![vec![1 << 30]], 1).is_err());
        assert!(GeneratingMatrices::new(vec![vec![1 << 31, 0]], 2).is_err());
        assert!(GeneratingMatrices::new(vec![vec![1 << 31]], 2).is_err());
    }
}
