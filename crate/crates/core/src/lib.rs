//! Lossless compression for multivariate integer time series.
//!
//! Samples are processed in blocks of eight. Each block is predicted by an
//! online forecaster (delta coding or FIRE, a learned one-coefficient
//! autoregressive model), the residuals are zigzag coded and bit packed with
//! a per-column width, blocks with all-zero residuals are run-length encoded,
//! and the packed bytes may optionally be Huffman coded.
//!
//! ```
//! use sprintz::{compress, decompress, BitWidth, CodecConfig, ForecasterKind};
//!
//! let data: Vec<u16> = (0..1000u16).map(|i| i.wrapping_mul(3)).collect();
//! let config = CodecConfig::new(BitWidth::W16, 2).with_forecaster(ForecasterKind::Fire);
//! let bytes = compress(&data, &config).unwrap();
//! let (_, restored) = decompress::<u16>(&bytes).unwrap();
//! assert_eq!(restored, data);
//! ```

#![forbid(unsafe_code)]

pub mod bits;
pub mod block;
pub mod config;
pub mod entropy;
pub mod error;
pub mod forecast;
pub mod ingest;
pub mod pack;
pub mod quantize;
pub mod stream;
pub mod word;
pub mod zigzag;

pub use config::CodecConfig;
pub use error::{Error, Result};
pub use forecast::{AnyForecaster, DeltaForecaster, FireForecaster, FireState, Forecaster, ForecasterKind};
pub use pack::{BlockHeader, Layout, BLOCK_ROWS};
pub use quantize::{dequantize, quantization_nmse, quantize, QuantParams, Reconstruction};
pub use stream::{
    compress, compress_samples, decompress, decompress_samples, peek_header, Samples, StreamHeader,
};
pub use word::{BitWidth, Word};
