//! Online sample predictors.
//!
//! A forecaster sees one block of [`BLOCK_ROWS`](crate::pack::BLOCK_ROWS)
//! samples at a time. The encoder and decoder drive it with identical inputs,
//! so its state evolves identically on both sides.

mod delta;
mod fire;

pub use delta::{delta_predict, DeltaForecaster};
pub use fire::{FireForecaster, FireState, DEFAULT_LEARN_SHIFT, MAX_LEARN_SHIFT};

use std::fmt::Debug;

use crate::word::Word;

/// Which predictor a stream uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ForecasterKind {
    Delta,
    Fire,
}

/// Block-at-a-time predictor. Slices are row-major `8 x D`; `prev` is the
/// sample preceding the block (zeros before the first block).
pub trait Forecaster<W: Word>: Debug + Clone {
    fn ncols(&self) -> usize;

    /// Writes the wrapped residuals `block - prediction` and trains on the block.
    fn encode_block(&mut self, prev: &[W], block: &[W], residuals: &mut [W]);

    /// Inverse of [`encode_block`](Self::encode_block); trains identically.
    fn decode_block(&mut self, prev: &[W], residuals: &[W], block: &mut [W]);

    /// Decodes a block whose residuals are all zero, i.e. one block of a run.
    fn decode_zero_block(&mut self, prev: &[W], block: &mut [W]);
}

/// Runtime-selected forecaster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyForecaster<W: Word> {
    Delta(DeltaForecaster),
    Fire(FireForecaster<W>),
}

impl<W: Word> AnyForecaster<W> {
    pub fn new(kind: ForecasterKind, ncols: usize, learn_shift: u8) -> Self {
        match kind {
            ForecasterKind::Delta => AnyForecaster::Delta(DeltaForecaster::new(ncols)),
            ForecasterKind::Fire => AnyForecaster::Fire(FireForecaster::new(ncols, learn_shift)),
        }
    }
}

impl<W: Word> Forecaster<W> for AnyForecaster<W> {
    fn ncols(&self) -> usize {
        match self {
            AnyForecaster::Delta(f) => Forecaster::<W>::ncols(f),
            AnyForecaster::Fire(f) => f.ncols(),
        }
    }

    #[inline]
    fn encode_block(&mut self, prev: &[W], block: &[W], residuals: &mut [W]) {
        match self {
            AnyForecaster::Delta(f) => f.encode_block(prev, block, residuals),
            AnyForecaster::Fire(f) => f.encode_block(prev, block, residuals),
        }
    }

    #[inline]
    fn decode_block(&mut self, prev: &[W], residuals: &[W], block: &mut [W]) {
        match self {
            AnyForecaster::Delta(f) => f.decode_block(prev, residuals, block),
            AnyForecaster::Fire(f) => f.decode_block(prev, residuals, block),
        }
    }

    #[inline]
    fn decode_zero_block(&mut self, prev: &[W], block: &mut [W]) {
        match self {
            AnyForecaster::Delta(f) => f.decode_zero_block(prev, block),
            AnyForecaster::Fire(f) => f.decode_zero_block(prev, block),
        }
    }
}
