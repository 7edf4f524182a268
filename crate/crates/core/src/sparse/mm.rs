//! Matrix Market exchange format, `coordinate real` flavour.
//!
//! Symmetric files store one triangle and are expanded on read. `general`
//! files are accepted when their entries are exactly symmetric.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use super::SparseSymMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    Symmetric,
    General,
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_header(line: &str, lineno: usize) -> Result<Symmetry> {
    let tokens: Vec<String> = line.split_whitespace().map(str::to_ascii_lowercase).collect();
    if tokens.first().map(String::as_str) != Some("%%matrixmarket") {
        return Err(parse_error(lineno, "missing %%MatrixMarket banner"));
    }
    if tokens.len() != 5 {
        return Err(parse_error(lineno, "banner must have five fields"));
    }
    if tokens[1] != "matrix" {
        return Err(Error::UnsupportedFormat(format!("object `{}`", tokens[1])));
    }
    if tokens[2] != "coordinate" {
        return Err(Error::UnsupportedFormat(format!("storage `{}`", tokens[2])));
    }
    if tokens[3] != "real" {
        return Err(Error::UnsupportedFormat(format!("field `{}`", tokens[3])));
    }
    match tokens[4].as_str() {
        "symmetric" => Ok(Symmetry::Symmetric),
        "general" => Ok(Symmetry::General),
        other => Err(Error::UnsupportedFormat(format!("symmetry `{other}`"))),
    }
}

/// Parses a Matrix Market stream into an expanded symmetric CSR matrix.
pub fn parse_matrix_market<R: BufRead>(reader: R) -> Result<SparseSymMatrix> {
    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (lineno, banner) = lines
        .next()
        .ok_or_else(|| parse_error(1, "empty input"))?;
    let symmetry = parse_header(&banner?, lineno)?;

    let mut size: Option<(usize, usize)> = None;
    let mut triplets = Vec::new();
    let mut expected = 0usize;
    let mut n = 0usize;

    for (lineno, line) in lines {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        match size {
            None => {
                if fields.len() != 3 {
                    return Err(parse_error(lineno, "size line must be `rows cols entries`"));
                }
                let dims: Vec<usize> = fields
                    .iter()
                    .map(|f| f.parse().map_err(|_| parse_error(lineno, format!("bad integer `{f}`"))))
                    .collect::<Result<_>>()?;
                if dims[0] != dims[1] {
                    return Err(Error::InvalidMatrix(format!(
                        "matrix is not square ({} x {})",
                        dims[0], dims[1]
                    )));
                }
                n = dims[0];
                expected = dims[2];
                size = Some((dims[0], dims[1]));
                triplets.reserve(2 * expected);
            }
            Some(_) => {
                if fields.len() != 3 {
                    return Err(parse_error(lineno, "entry line must be `row col value`"));
                }
                let row: usize = fields[0]
                    .parse()
                    .map_err(|_| parse_error(lineno, format!("bad row index `{}`", fields[0])))?;
                let col: usize = fields[1]
                    .parse()
                    .map_err(|_| parse_error(lineno, format!("bad column index `{}`", fields[1])))?;
                let value: f64 = fields[2]
                    .parse()
                    .map_err(|_| parse_error(lineno, format!("bad value `{}`", fields[2])))?;
                if row == 0 || col == 0 || row > n || col > n {
                    return Err(parse_error(
                        lineno,
                        format!("index ({row}, {col}) out of range for order {n}"),
                    ));
                }
                let (i, j) = (row - 1, col - 1);
                triplets.push((i, j, value));
                if symmetry == Symmetry::Symmetric && i != j {
                    triplets.push((j, i, value));
                }
            }
        }
    }

    if size.is_none() {
        return Err(parse_error(1, "missing size line"));
    }
    let stored = match symmetry {
        Symmetry::Symmetric => triplets.iter().filter(|t| t.0 >= t.1).count(),
        Symmetry::General => triplets.len(),
    };
    if stored != expected {
        return Err(Error::InvalidMatrix(format!(
            "size line announces {expected} entries, found {stored}"
        )));
    }
    SparseSymMatrix::from_triplets(n, &triplets)
}

/// Convenience wrapper for in-memory text.
pub fn parse_matrix_market_str(text: &str) -> Result<SparseSymMatrix> {
    parse_matrix_market(text.as_bytes())
}

pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<SparseSymMatrix> {
    let file = File::open(path)?;
    parse_matrix_market(BufReader::new(file))
}

/// Writes the lower triangle in `coordinate real symmetric` form with
/// round-trippable values.
pub fn write_matrix_market<W: Write>(matrix: &SparseSymMatrix, mut out: W) -> Result<()> {
    let lower: Vec<_> = matrix.lower_triangle().collect();
    writeln!(out, "%%MatrixMarket matrix coordinate real symmetric")?;
    writeln!(out, "{} {} {}", matrix.n(), matrix.n(), lower.len())?;
    for (i, j, v) in lower {
        writeln!(out, "{} {} {:.17e}", i + 1, j + 1, v)?;
    }
    Ok(())
}
