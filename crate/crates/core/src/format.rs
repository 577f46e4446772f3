//! Round-trip numeric text: 17 significant digits for every `f64`.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{QmcError, Result};
use crate::ld::PointBlock;

/// `x` with 17 significant digits, enough to recover it exactly.
/// Non-finite values print as `nan`, `inf` or `-inf`.
pub fn fmt17(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.16e}")
    }
}

/// As [`fmt17`], but `null` for non-finite values.
pub fn json_number(x: f64) -> String {
    if x.is_finite() {
        fmt17(x)
    } else {
        "null".into()
    }
}

pub fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Write a block as CSV: header `x1,...,xd`, then one row per point.
pub fn write_points_csv<W: Write>(mut out: W, block: &PointBlock) -> std::io::Result<()> {
    write_csv_header(&mut out, block.d())?;
    write_points_rows(out, block)
}

pub fn write_csv_header<W: Write>(mut out: W, d: usize) -> std::io::Result<()> {
    let header: Vec<String> = (1..=d).map(|k| format!("x{k}")).collect();
    writeln!(out, "{}", header.join(","))
}

/// The rows of [`write_points_csv`] without the header, for chunked output.
pub fn write_points_rows<W: Write>(mut out: W, block: &PointBlock) -> std::io::Result<()> {
    let mut line = String::new();
    for row in block.rows() {
        line.clear();
        for (k, &v) in row.iter().enumerate() {
            if k > 0 {
                line.push(',');
            }
            line.push_str(&fmt17(v));
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

pub fn points_csv(block: &PointBlock) -> String {
    let mut buf = Vec::new();
    write_points_csv(&mut buf, block).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("CSV output is ASCII")
}

/// Parse a point CSV. A first line that does not parse as numbers is a
/// header; a header with no rows gives an empty block of its width.
pub fn parse_points_csv(text: &str) -> Result<PointBlock> {
    let mut values = Vec::new();
    let mut d: Option<usize> = None;
    let mut first = true;
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        let row = fields
            .iter()
            .map(|f| f.parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>();
        let is_header = first && row.is_err();
        first = false;
        let row = match row {
            Ok(row) => row,
            Err(_) if is_header => {
                d = Some(fields.len());
                continue;
            }
            Err(_) => {
                return Err(QmcError::parse(
                    lineno,
                    format!("'{trimmed}' is not a row of numbers"),
                ))
            }
        };
        match d {
            Some(k) if k != row.len() => {
                return Err(QmcError::parse(
                    lineno,
                    format!("row has {} values, expected {k}", row.len()),
                ))
            }
            _ => d = Some(row.len()),
        }
        values.extend(row);
    }
    let d = d.ok_or_else(|| QmcError::parse(1, "empty point file"))?;
    Ok(PointBlock::from_rows(values, d))
}

pub fn read_points_csv(path: &Path) -> Result<PointBlock> {
    let text = fs::read_to_string(path).map_err(|source| QmcError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_points_csv(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 123456789.123456789, 0.0] {
            assert_eq!(fmt17(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt17(0.5), "5.0000000000000000e-1");
        assert_eq!(json_number(f64::NAN), "null");
    }

    #[test]
    fn csv_round_trip() {
        let b = PointBlock::from_rows(vec![0.1, 0.2, 1.0 / 3.0, 0.75], 2);
        let back = parse_points_csv(&points_csv(&b)).unwrap();
        assert_eq!(back.values(), b.values());
        assert_eq!(back.d(), 2);
    }

    #[test]
    fn header_only_keeps_dimension() {
        let b = parse_points_csv("x1,x2,x3\n").unwrap();
        assert_eq!((b.n(), b.d()), (0, 3));
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(matches!(
            parse_points_csv("x1,x2\n0.1,0.2\n0.3\n"),
            Err(QmcError::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn json_escapes() {
        assert_eq!(json_string("a\"b\\c"), "\"a\\\"b\\\\c\"");
    }
}
