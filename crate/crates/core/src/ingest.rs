//! Loading datasets from delimited text and raw binary files.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::stream::Samples;
use crate::word::BitWidth;

/// Dense row-major matrix of reals.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Matrix {
    pub nrows: usize,
    pub ncols: usize,
    pub data: Vec<f64>,
}

impl Matrix {
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        // chunks_exact(0) panics; an empty matrix has no rows either way.
        self.data.chunks_exact(self.ncols.max(1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Delimiter {
    Char(char),
    /// Any run of whitespace.
    Whitespace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DelimitedOptions {
    pub delimiter: Delimiter,
    /// Drop the first field of every row (e.g. a class label).
    pub skip_label: bool,
    /// Skip the first non-blank line.
    pub has_header: bool,
}

impl Default for DelimitedOptions {
    fn default() -> Self {
        DelimitedOptions {
            delimiter: Delimiter::Char(','),
            skip_label: false,
            has_header: false,
        }
    }
}

pub fn parse_delimited(text: &str, opts: &DelimitedOptions) -> Result<Matrix> {
    let mut m = Matrix::default();
    let mut header_pending = opts.has_header;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if header_pending {
            header_pending = false;
            continue;
        }
        let fields: Vec<&str> = match opts.delimiter {
            Delimiter::Whitespace => line.split_whitespace().collect(),
            Delimiter::Char(c) => line.split(c).map(str::trim).collect(),
        };
        let fields = if opts.skip_label {
            &fields[1.min(fields.len())..]
        } else {
            &fields[..]
        };
        if m.nrows == 0 {
            m.ncols = fields.len();
            if m.ncols == 0 {
                return Err(Error::Parse {
                    line: lineno + 1,
                    reason: "row has no values".into(),
                });
            }
        } else if fields.len() != m.ncols {
            return Err(Error::Parse {
                line: lineno + 1,
                reason: format!("expected {} fields, found {}", m.ncols, fields.len()),
            });
        }
        for f in fields {
            let v: f64 = f.parse().map_err(|_| Error::Parse {
                line: lineno + 1,
                reason: format!("not a number: {f:?}"),
            })?;
            m.data.push(v);
        }
        m.nrows += 1;
    }
    Ok(m)
}

pub fn load_delimited(path: impl AsRef<Path>, opts: &DelimitedOptions) -> Result<Matrix> {
    let text = fs::read_to_string(path)?;
    parse_delimited(&text, opts)
}

/// Interprets little-endian bytes as a `T x ncols` sample matrix.
pub fn parse_raw(bytes: &[u8], width: BitWidth, ncols: usize) -> Result<Samples> {
    if ncols == 0 {
        return Err(Error::Shape("column count must be at least 1".into()));
    }
    let row = ncols * width.bytes();
    if bytes.len() % row != 0 {
        return Err(Error::Shape(format!(
            "{} bytes is not a whole number of {ncols}-column {}-bit samples",
            bytes.len(),
            width.bits()
        )));
    }
    Samples::from_le_bytes(bytes, width)
}

pub fn load_raw(path: impl AsRef<Path>, width: BitWidth, ncols: usize) -> Result<Samples> {
    parse_raw(&fs::read(path)?, width, ncols)
}

/// Joins univariate series end to end, bridging each junction with
/// `n_interp` linearly interpolated values. Empty series are skipped.
pub fn concat_with_interpolation(series: &[Vec<f64>], n_interp: usize) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for s in series.iter().filter(|s| !s.is_empty()) {
        if let Some(&a) = out.last() {
            let b = s[0];
            let steps = (n_interp + 1) as f64;
            out.extend((1..=n_interp).map(|k| a + (b - a) * k as f64 / steps));
        }
        out.extend_from_slice(s);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_with_label_column() {
        let text = "1,0.5,0.25\n2,1.5,1.25\n\n1,2.5,2.25\n";
        let m = parse_delimited(
            text,
            &DelimitedOptions {
                skip_label: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!((m.nrows, m.ncols), (3, 2));
        assert_eq!(m.row(2), &[2.5, 2.25]);
    }

    #[test]
    fn whitespace_and_header() {
        let text = "a b\n  1.0   2.0\n3 4\n";
        let m = parse_delimited(
            text,
            &DelimitedOptions {
                delimiter: Delimiter::Whitespace,
                has_header: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(m.data, vec![1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn ragged_and_bad_fields_report_lines() {
        let err = parse_delimited("1,2\n3\n", &DelimitedOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_delimited("1,2\n3,x\n", &DelimitedOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn empty_text_is_empty_matrix() {
        let m = parse_delimited("", &DelimitedOptions::default()).unwrap();
        assert_eq!(m.nrows, 0);
        assert_eq!(m.rows().count(), 0);
    }

    #[test]
    fn raw_u16_shape() {
        let bytes: Vec<u8> = (0..24u8).collect();
        let s = parse_raw(&bytes, BitWidth::W16, 3).unwrap();
        assert_eq!(s.len(), 12);
        assert_eq!(
            s,
            Samples::U16((0..12).map(|i| u16::from_le_bytes([2 * i, 2 * i + 1])).collect())
        );
        assert!(parse_raw(&bytes[..22], BitWidth::W16, 3).is_err());
        assert!(parse_raw(&[], BitWidth::W8, 3).unwrap().is_empty());
    }

    #[test]
    fn interpolation_bridges() {
        assert_eq!(
            concat_with_interpolation(&[vec![0.0], vec![6.0]], 5),
            vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0]
        );
        assert_eq!(concat_with_interpolation(&[vec![1.0, 2.0]], 5), vec![1.0, 2.0]);
        let series: Vec<Vec<f64>> = (0..4).map(|i| vec![i as f64; 10]).collect();
        assert_eq!(concat_with_interpolation(&series, 5).len(), 4 * 10 + 5 * 3);
    }

    #[test]
    fn junctions_are_monotone() {
        let out = concat_with_interpolation(&[vec![3.0, 10.0], vec![-4.0, 0.0]], 5);
        let bridge = &out[1..8];
        assert!(bridge.windows(2).all(|w| w[1] <= w[0]));
    }
}
