//! Compression and decompression speed on incompressible data.

use std::hint::black_box;
use std::time::{Duration, Instant};

use anyhow::{bail, Result};
use serde::Serialize;
use sprintz::{compress_samples, decompress_samples, BitWidth};

use crate::datagen;
use crate::variant::Variant;

#[derive(Debug, Clone)]
pub struct ThroughputOptions {
    pub sweep_ncols: Vec<usize>,
    pub widths: Vec<BitWidth>,
    pub variants: Vec<Variant>,
    /// Values generated per configuration (rounded down to whole samples).
    pub nvalues: usize,
    pub reps: usize,
    pub seed: u64,
}

impl Default for ThroughputOptions {
    fn default() -> Self {
        ThroughputOptions {
            sweep_ncols: vec![1, 2, 4, 8, 16, 32, 64],
            widths: vec![BitWidth::W8, BitWidth::W16],
            variants: Variant::ALL.to_vec(),
            nvalues: 1 << 22,
            reps: 10,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ThroughputRow {
    pub codec: String,
    pub w: u32,
    pub ncols: usize,
    pub ratio: f64,
    pub compress_mbps: f64,
    pub decompress_mbps: f64,
}

/// Smallest of `reps` timings of `f`.
pub fn best_of<T>(reps: usize, mut f: impl FnMut() -> T) -> (Duration, T) {
    let mut best = Duration::MAX;
    let mut last = None;
    for _ in 0..reps.max(1) {
        let start = Instant::now();
        let out = black_box(f());
        best = best.min(start.elapsed());
        last = Some(out);
    }
    (best, last.unwrap())
}

fn mbps(bytes: usize, t: Duration) -> f64 {
    bytes as f64 / t.as_secs_f64().max(1e-12) / 1e6
}

/// Times one configuration. Fails if the round trip is not exact.
pub fn measure(
    variant: Variant,
    width: BitWidth,
    ncols: usize,
    nvalues: usize,
    reps: usize,
    seed: u64,
) -> Result<ThroughputRow> {
    let nvalues = nvalues / ncols * ncols;
    let data = datagen::uniform(seed, nvalues, width);
    let raw_len = nvalues * width.bytes();
    let config = variant.config(width, ncols);

    let (tc, compressed) = best_of(reps, || compress_samples(&data, &config));
    let compressed = compressed?;
    let (td, restored) = best_of(reps, || decompress_samples(&compressed));
    let (_, restored) = restored?;
    if restored != data {
        bail!("{variant} round trip failed at w={} D={ncols}", width.bits());
    }
    Ok(ThroughputRow {
        codec: variant.name().to_string(),
        w: width.bits(),
        ncols,
        ratio: raw_len as f64 / compressed.len() as f64,
        compress_mbps: mbps(raw_len, tc),
        decompress_mbps: mbps(raw_len, td),
    })
}

pub fn run(opts: &ThroughputOptions) -> Result<Vec<ThroughputRow>> {
    let mut rows = Vec::new();
    for &variant in &opts.variants {
        for &width in &opts.widths {
            for &d in &opts.sweep_ncols {
                rows.push(measure(variant, width, d, opts.nvalues, opts.reps, opts.seed)?);
            }
        }
    }
    Ok(rows)
}
