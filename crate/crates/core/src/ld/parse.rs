//! Readers for generating data: Joe–Kuo direction numbers and lattice vectors.

use std::fs;
use std::path::Path;

use super::digital::{GeneratingMatrices, NET_PRECISION};
use super::lattice::{LatticeGenVector, LATTICE_MAX_BITS};
use crate::error::{QmcError, Result};

/// `m_max` assumed for lattice vector files without a `# m_max=K` line.
pub const DEFAULT_LATTICE_M_MAX: u32 = 32;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| QmcError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Parse a Joe–Kuo direction-number file, keeping at most `max_dim`
/// dimensions (`None` keeps all of them).
pub fn parse_direction_numbers(path: &Path, max_dim: Option<usize>) -> Result<GeneratingMatrices> {
    parse_direction_numbers_str(&read(path)?, max_dim)
}

/// Direction numbers `m_1..m_32` of one dimension from its primitive
/// polynomial (degree `s`, interior coefficients `a`) and initial values.
pub fn direction_numbers(s: usize, a: u32, initial: &[u32]) -> Vec<u32> {
    let mut m: Vec<u32> = initial.to_vec();
    for k in s..NET_PRECISION as usize {
        let mut next = m[k - s] ^ (m[k - s] << s);
        for i in 1..s {
            if (a >> (s - 1 - i)) & 1 == 1 {
                next ^= m[k - i] << i;
            }
        }
        m.push(next);
    }
    m.truncate(NET_PRECISION as usize);
    m
}

/// Generating-matrix columns (`v_k = m_k 2^{32-k}`) from direction numbers.
fn columns_from_direction_numbers(m: &[u32]) -> Vec<u32> {
    m.iter()
        .enumerate()
        .map(|(k, &mk)| mk << (NET_PRECISION as usize - 1 - k))
        .collect()
}

pub fn parse_direction_numbers_str(
    text: &str,
    max_dim: Option<usize>,
) -> Result<GeneratingMatrices> {
    let limit = max_dim.unwrap_or(usize::MAX);
    if limit == 0 {
        return Err(QmcError::domain("at least one dimension is required"));
    }
    let mut columns = vec![columns_from_direction_numbers(&[1; NET_PRECISION as usize])];
    let mut lines = text.lines().enumerate();
    // header
    if lines.next().is_none() {
        return Err(QmcError::parse(1, "empty direction-number file"));
    }
    let mut expected_dim = 2usize;
    for (idx, line) in lines {
        if columns.len() >= limit {
            break;
        }
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<u64> = trimmed
            .split_whitespace()
            .map(|f| {
                f.parse::<u64>().map_err(|_| {
                    QmcError::parse(lineno, format!("'{f}' is not a non-negative integer"))
                })
            })
            .collect::<Result<_>>()?;
        if fields.len() < 4 {
            return Err(QmcError::parse(lineno, "expected at least 'd s a m_1'"));
        }
        let (d, s, a) = (fields[0] as usize, fields[1] as usize, fields[2]);
        if d != expected_dim {
            return Err(QmcError::parse(
                lineno,
                format!("dimension {d} out of sequence, expected {expected_dim}"),
            ));
        }
        if s == 0 || s >= NET_PRECISION as usize {
            return Err(QmcError::parse(
                lineno,
                format!("unsupported polynomial degree {s}"),
            ));
        }
        if fields.len() != 3 + s {
            return Err(QmcError::parse(
                lineno,
                format!(
                    "degree {s} needs {s} initial direction numbers, found {}",
                    fields.len() - 3
                ),
            ));
        }
        if a >> (s - 1) != 0 {
            return Err(QmcError::parse(
                lineno,
                format!("coefficient {a} too wide for degree {s}"),
            ));
        }
        let initial: Vec<u32> = fields[3..].iter().map(|&m| m as u32).collect();
        for (k, &mk) in initial.iter().enumerate() {
            if mk % 2 == 0 || (mk as u64) >= 1u64 << (k + 1) {
                return Err(QmcError::parse(
                    lineno,
                    format!("m_{} = {mk} must be odd and below 2^{}", k + 1, k + 1),
                ));
            }
        }
        let m = direction_numbers(s, a as u32, &initial);
        columns.push(columns_from_direction_numbers(&m));
        expected_dim += 1;
    }
    if let Some(want) = max_dim {
        if columns.len() < want {
            return Err(QmcError::capacity(format!(
                "requested {want} dimensions, file provides {}",
                columns.len()
            )));
        }
    }
    GeneratingMatrices::new(columns, NET_PRECISION)
}

/// Parse a lattice generating vector: one integer per line with an optional
/// `# m_max=K` comment line. Other `#` lines are ignored.
pub fn parse_lattice_vector(path: &Path) -> Result<LatticeGenVector> {
    parse_lattice_vector_str(&read(path)?)
}

pub fn parse_lattice_vector_str(text: &str) -> Result<LatticeGenVector> {
    let mut m_max: Option<u32> = None;
    let mut h = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            let body: String = comment.chars().filter(|c| !c.is_whitespace()).collect();
            if let Some(v) = body.strip_prefix("m_max=") {
                let k = v
                    .parse::<u32>()
                    .map_err(|_| QmcError::parse(lineno, format!("bad m_max value '{v}'")))?;
                if k == 0 || k > LATTICE_MAX_BITS {
                    return Err(QmcError::parse(
                        lineno,
                        format!("m_max={k} outside 1..={LATTICE_MAX_BITS}"),
                    ));
                }
                m_max = Some(k);
            }
            continue;
        }
        let v = trimmed.parse::<u64>().map_err(|_| {
            QmcError::parse(lineno, format!("'{trimmed}' is not a non-negative integer"))
        })?;
        h.push(v);
    }
    if h.is_empty() {
        return Err(QmcError::parse(
            1,
            "lattice vector file contains no components",
        ));
    }
    let m_max = m_max.unwrap_or(DEFAULT_LATTICE_M_MAX);
    LatticeGenVector::new(h, m_max).map_err(|e| QmcError::parse(0, e.to_string()))
}
