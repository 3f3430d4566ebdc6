//! Turning files on disk into integer sample matrices.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use sprintz::ingest::{self, concat_with_interpolation, DelimitedOptions, Delimiter, Matrix};
use sprintz::{quantize, BitWidth, QuantParams, Samples};

/// Samples interpolated across each junction when concatenating series.
pub const JUNCTION_SAMPLES: usize = 5;

#[derive(Debug, Clone)]
pub struct Dataset {
    pub name: String,
    pub ncols: usize,
    pub samples: Samples,
    /// Present when the data was quantized from reals.
    pub quant: Option<QuantParams>,
}

impl Dataset {
    pub fn width(&self) -> BitWidth {
        self.samples.width()
    }

    pub fn raw_bytes(&self) -> Vec<u8> {
        self.samples.to_le_bytes()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LoadOptions {
    pub width: BitWidth,
    /// Columns of raw binary files.
    pub ncols: usize,
    /// Overrides the delimiter implied by the file extension.
    pub delimiter: Option<Delimiter>,
    pub skip_label: bool,
    pub has_header: bool,
    /// Treat each text row as a separate univariate series and join them.
    pub rows_are_series: bool,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions {
            width: BitWidth::W8,
            ncols: 1,
            delimiter: None,
            skip_label: false,
            has_header: false,
            rows_are_series: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileKind {
    Raw(Option<BitWidth>),
    Text(Delimiter),
}

pub fn classify(path: &Path) -> Option<FileKind> {
    let ext = path.extension()?.to_str()?.to_ascii_lowercase();
    Some(match ext.as_str() {
        "u8" => FileKind::Raw(Some(BitWidth::W8)),
        "u16" => FileKind::Raw(Some(BitWidth::W16)),
        "bin" | "raw" => FileKind::Raw(None),
        "csv" => FileKind::Text(Delimiter::Char(',')),
        "tsv" => FileKind::Text(Delimiter::Char('\t')),
        "txt" | "dat" => FileKind::Text(Delimiter::Whitespace),
        _ => return None,
    })
}

/// Quantizes reals to samples of `width`.
pub fn quantize_samples(values: &[f64], width: BitWidth) -> Result<(Samples, QuantParams)> {
    let (q, params) = quantize(values, width)?;
    let samples = match width {
        BitWidth::W8 => Samples::U8(q.into_iter().map(|v| v as u8).collect()),
        BitWidth::W16 => Samples::U16(q),
    };
    Ok((samples, params))
}

/// Reals from a text file: either the matrix as-is or its rows joined into
/// one series.
pub fn load_text(path: &Path, delimiter: Delimiter, opts: &LoadOptions) -> Result<(Vec<f64>, usize)> {
    let m: Matrix = ingest::load_delimited(
        path,
        &DelimitedOptions {
            delimiter: opts.delimiter.unwrap_or(delimiter),
            skip_label: opts.skip_label,
            has_header: opts.has_header,
        },
    )
    .with_context(|| format!("loading {}", path.display()))?;
    if opts.rows_are_series {
        let series: Vec<Vec<f64>> = m.rows().map(<[f64]>::to_vec).collect();
        Ok((concat_with_interpolation(&series, JUNCTION_SAMPLES), 1))
    } else {
        Ok((m.data, m.ncols.max(1)))
    }
}

pub fn load_file(path: &Path, opts: &LoadOptions) -> Result<Dataset> {
    let Some(kind) = classify(path) else {
        bail!("unrecognized file type: {}", path.display());
    };
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    match kind {
        FileKind::Raw(width) => {
            let width = width.unwrap_or(opts.width);
            let samples = ingest::load_raw(path, width, opts.ncols)
                .with_context(|| format!("loading {}", path.display()))?;
            Ok(Dataset {
                name,
                ncols: opts.ncols,
                samples,
                quant: None,
            })
        }
        FileKind::Text(delim) => {
            let (values, ncols) = load_text(path, delim, opts)?;
            let (samples, params) = quantize_samples(&values, opts.width)?;
            Ok(Dataset {
                name,
                ncols,
                samples,
                quant: Some(params),
            })
        }
    }
}

/// Loads every recognized file in `dir`, sorted by name.
pub fn load_dir(dir: &Path, opts: &LoadOptions) -> Result<Vec<Dataset>> {
    let mut paths: Vec<_> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && classify(p).is_some())
        .filter(|p| {
            !p.file_name()
                .is_some_and(|n| n.to_string_lossy().starts_with('.'))
        })
        .collect();
    paths.sort();
    paths.iter().map(|p| load_file(p, opts)).collect()
}
