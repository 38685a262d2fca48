//! Matrix Market (`.mtx`) reading and writing.
//!
//! Reads `coordinate` and `array` layouts with `real`, `integer` or `pattern`
//! fields and `general` or `symmetric` structure. Symmetric files are expanded
//! to full storage; pattern entries become `1.0`. Writes use 17 significant
//! digits so values round-trip exactly.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::{CsrMatrix, DenseMatrix, ObservationMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Layout {
    Coordinate,
    Array,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Field {
    Real,
    Integer,
    Pattern,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
}

pub fn load_matrix_market(path: impl AsRef<Path>) -> Result<ObservationMatrix> {
    let path = path.as_ref();
    let file = File::open(path)?;
    read_matrix_market(BufReader::new(file), path)
}

/// Parses Matrix Market text from `reader`; `origin` is used in error messages.
pub fn read_matrix_market<R: BufRead>(reader: R, origin: impl AsRef<Path>) -> Result<ObservationMatrix> {
    let origin = origin.as_ref().to_path_buf();
    let parse_err = |line: usize, msg: String| Error::Parse { path: origin.clone(), line, msg };

    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (line_no, header) = match lines.next() {
        Some((n, l)) => (n, l?),
        None => return Err(parse_err(1, "empty file".into())),
    };
    let (layout, field, symmetry) = parse_header(&header).map_err(|e| match e {
        HeaderError::Unsupported(msg) => Error::UnsupportedFormat(msg),
        HeaderError::Malformed(msg) => parse_err(line_no, msg),
    })?;

    // skip comments and blank lines up to the size line
    let mut content = lines.filter_map(|(n, l)| match l {
        Ok(l) => {
            let t = l.trim();
            if t.is_empty() || t.starts_with('%') {
                None
            } else {
                Some(Ok((n, t.to_string())))
            }
        }
        Err(e) => Some(Err(e)),
    });

    let (size_line, size) = match content.next() {
        Some(r) => r?,
        None => return Err(parse_err(line_no, "missing size line".into())),
    };
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| parse_err(size_line, format!("bad size line: {e}")))?;

    match layout {
        Layout::Coordinate => {
            let [rows, cols, nnz] = dims[..] else {
                return Err(parse_err(size_line, "coordinate size line needs rows cols nnz".into()));
            };
            if symmetry == Symmetry::Symmetric && rows != cols {
                return Err(parse_err(size_line, "symmetric matrix must be square".into()));
            }
            let mut triplets = Vec::with_capacity(nnz * if symmetry == Symmetry::Symmetric { 2 } else { 1 });
            let mut seen = 0usize;
            let mut first_line_of = std::collections::HashMap::new();
            for item in content {
                let (n, l) = item?;
                seen += 1;
                if seen > nnz {
                    return Err(parse_err(n, format!("more than the declared {nnz} entries")));
                }
                let mut tok = l.split_whitespace();
                let mut index = |what: &str, bound: usize| -> Result<usize> {
                    let t = tok.next().ok_or_else(|| parse_err(n, format!("missing {what} index")))?;
                    let i: usize = t.parse().map_err(|_| parse_err(n, format!("bad {what} index {t:?}")))?;
                    if i == 0 || i > bound {
                        return Err(parse_err(n, format!("{what} index {i} out of range 1..={bound}")));
                    }
                    Ok(i - 1)
                };
                let r = index("row", rows)?;
                let c = index("column", cols)?;
                let v = match field {
                    Field::Pattern => 1.0,
                    _ => parse_value(tok.next(), n, &parse_err)?,
                };
                let key = if symmetry == Symmetry::Symmetric { (r.max(c), r.min(c)) } else { (r, c) };
                if let Some(prev) = first_line_of.insert(key, n) {
                    return Err(parse_err(
                        n,
                        format!("duplicate entry ({}, {}) first given on line {prev}", r + 1, c + 1),
                    ));
                }
                triplets.push((r, c, v));
                if symmetry == Symmetry::Symmetric && r != c {
                    triplets.push((c, r, v));
                }
            }
            if seen != nnz {
                return Err(parse_err(size_line, format!("declared {nnz} entries, found {seen}")));
            }
            let m = CsrMatrix::from_triplets(rows, cols, triplets)
                .map_err(|(r, c)| parse_err(size_line, format!("duplicate entry ({}, {})", r + 1, c + 1)))?;
            Ok(ObservationMatrix::Sparse(m))
        }
        Layout::Array => {
            let [rows, cols] = dims[..] else {
                return Err(parse_err(size_line, "array size line needs rows cols".into()));
            };
            if symmetry == Symmetry::Symmetric && rows != cols {
                return Err(parse_err(size_line, "symmetric matrix must be square".into()));
            }
            // column-major order; symmetric files list only the lower triangle
            let slots: Vec<(usize, usize)> = (0..cols)
                .flat_map(|j| {
                    let start = if symmetry == Symmetry::Symmetric { j } else { 0 };
                    (start..rows).map(move |i| (i, j))
                })
                .collect();
            let mut m = DenseMatrix::zeros(rows, cols);
            let mut k = 0usize;
            for item in content {
                let (n, l) = item?;
                for t in l.split_whitespace() {
                    let Some(&(i, j)) = slots.get(k) else {
                        return Err(parse_err(n, format!("more than the expected {} values", slots.len())));
                    };
                    let v = parse_value(Some(t), n, &parse_err)?;
                    m.set(i, j, v);
                    if symmetry == Symmetry::Symmetric {
                        m.set(j, i, v);
                    }
                    k += 1;
                }
            }
            if k != slots.len() {
                return Err(parse_err(size_line, format!("expected {} values, found {k}", slots.len())));
            }
            Ok(ObservationMatrix::Dense(m))
        }
    }
}

fn parse_value<F: Fn(usize, String) -> Error>(tok: Option<&str>, line: usize, err: &F) -> Result<f64> {
    let t = tok.ok_or_else(|| err(line, "missing value".into()))?;
    t.parse::<f64>().map_err(|_| err(line, format!("bad value {t:?}")))
}

enum HeaderError {
    Unsupported(String),
    Malformed(String),
}

fn parse_header(line: &str) -> std::result::Result<(Layout, Field, Symmetry), HeaderError> {
    let tok: Vec<String> = line.split_whitespace().map(str::to_ascii_lowercase).collect();
    if tok.len() != 5 || tok[0] != "%%matrixmarket" || tok[1] != "matrix" {
        return Err(HeaderError::Malformed(format!("bad header {line:?}")));
    }
    let layout = match tok[2].as_str() {
        "coordinate" => Layout::Coordinate,
        "array" => Layout::Array,
        other => return Err(HeaderError::Malformed(format!("unknown layout {other:?}"))),
    };
    let field = match tok[3].as_str() {
        "real" | "double" => Field::Real,
        "integer" => Field::Integer,
        "pattern" => Field::Pattern,
        "complex" => return Err(HeaderError::Unsupported("complex field".into())),
        other => return Err(HeaderError::Malformed(format!("unknown field {other:?}"))),
    };
    let symmetry = match tok[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "skew-symmetric" | "hermitian" => return Err(HeaderError::Unsupported(format!("{} structure", tok[4]))),
        other => return Err(HeaderError::Malformed(format!("unknown structure {other:?}"))),
    };
    if layout == Layout::Array && field == Field::Pattern {
        return Err(HeaderError::Malformed("pattern field requires coordinate layout".into()));
    }
    Ok((layout, field, symmetry))
}

/// Writes a dense matrix in `array real general` layout.
pub fn write_array(path: impl AsRef<Path>, m: &DenseMatrix) -> Result<()> {
    let mut w = BufWriter::new(File::create(path.as_ref())?);
    write_array_to(&mut w, m)?;
    w.flush()?;
    Ok(())
}

pub fn write_array_to<W: Write>(w: &mut W, m: &DenseMatrix) -> Result<()> {
    writeln!(w, "%%MatrixMarket matrix array real general")?;
    writeln!(w, "{} {}", m.rows(), m.cols())?;
    for &x in m.as_slice() {
        writeln!(w, "{}", fmt_g17(x))?;
    }
    Ok(())
}

/// Writes a sparse matrix in `coordinate real general` layout.
pub fn write_coordinate(path: impl AsRef<Path>, m: &CsrMatrix) -> Result<()> {
    let mut w = BufWriter::new(File::create(path.as_ref())?);
    writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
    writeln!(w, "{} {} {}", m.rows(), m.cols(), m.nnz())?;
    for (r, c, v) in m.triplets() {
        writeln!(w, "{} {} {}", r + 1, c + 1, fmt_g17(v))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_matrix(path: impl AsRef<Path>, m: &ObservationMatrix) -> Result<()> {
    match m {
        ObservationMatrix::Dense(d) => write_array(path, d),
        ObservationMatrix::Sparse(s) => write_coordinate(path, s),
    }
}

/// 17 significant digits in scientific notation.
pub fn fmt_g17(x: f64) -> String {
    format!("{x:.16e}")
}
