//! Lossy conversion of real-valued series to `w`-bit integers.
//!
//! Values are offset and scaled so that the dataset minimum maps to 0 and the
//! maximum to `2^w - 1`, then floored.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::BitWidth;

/// Affine map used to quantize a dataset; stored alongside compressed data
/// so values can be approximately restored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantParams {
    pub min: f64,
    pub max: f64,
    pub bits: u32,
}

impl QuantParams {
    pub fn levels(&self) -> f64 {
        ((1u64 << self.bits) - 1) as f64
    }

    /// Width of one quantization bin, zero for constant data.
    pub fn step(&self) -> f64 {
        (self.max - self.min) / self.levels()
    }

    pub fn is_degenerate(&self) -> bool {
        self.max <= self.min
    }
}

/// How a code is mapped back to a real value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Reconstruction {
    /// Exact inverse of the forward map: `min + q * step`. Endpoints invert
    /// exactly; the error is biased, uniform on `[0, step)`.
    #[default]
    Floor,
    /// Bin centre `min + (q + 1/2) * step`, clamped to `max`. Unbiased inside
    /// each bin.
    Midpoint,
}

pub fn quantize(values: &[f64], width: BitWidth) -> Result<(Vec<u16>, QuantParams)> {
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    let (min, max) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let params = if values.is_empty() {
        QuantParams {
            min: 0.0,
            max: 0.0,
            bits: width.bits(),
        }
    } else {
        QuantParams {
            min,
            max,
            bits: width.bits(),
        }
    };
    Ok((quantize_with(values, &params), params))
}

/// Quantizes with a fixed map; values outside `[min, max]` are clamped.
pub fn quantize_with(values: &[f64], params: &QuantParams) -> Vec<u16> {
    if params.is_degenerate() {
        return vec![0; values.len()];
    }
    let top = params.levels();
    let scale = top / (params.max - params.min);
    values
        .iter()
        .map(|&v| {
            if v >= params.max {
                top as u16
            } else {
                ((v - params.min) * scale).floor().clamp(0.0, top) as u16
            }
        })
        .collect()
}

pub fn dequantize(codes: &[u16], params: &QuantParams, recon: Reconstruction) -> Vec<f64> {
    if params.is_degenerate() {
        return vec![params.min; codes.len()];
    }
    let step = params.step();
    let offset = match recon {
        Reconstruction::Floor => 0.0,
        Reconstruction::Midpoint => 0.5,
    };
    codes
        .iter()
        .map(|&q| {
            if q as f64 >= params.levels() {
                params.max
            } else {
                (params.min + (q as f64 + offset) * step).min(params.max)
            }
        })
        .collect()
}

/// Mean squared error normalized by the (population) variance of `original`.
pub fn quantization_nmse(original: &[f64], reconstructed: &[f64]) -> f64 {
    assert_eq!(original.len(), reconstructed.len());
    if original.is_empty() {
        return 0.0;
    }
    let n = original.len() as f64;
    let mean = original.iter().sum::<f64>() / n;
    let var = original.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let mse = original
        .iter()
        .zip(reconstructed)
        .map(|(a, b)| (a - b).powi(2))
        .sum::<f64>()
        / n;
    if var == 0.0 {
        if mse == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        mse / var
    }
}
