//! Single-block encode and decode: forecast, zigzag, choose per-column
//! widths, bit pack.

use crate::error::Result;
use crate::forecast::Forecaster;
use crate::pack::{self, Layout, BLOCK_ROWS};
use crate::word::Word;
use crate::zigzag::{unzigzag, zigzag};

#[derive(Debug, Clone)]
pub struct BlockEncoder<W: Word, F: Forecaster<W>> {
    forecaster: F,
    prev: Vec<W>,
    layout: Layout,
    residuals: Vec<W>,
    ors: Vec<u32>,
}

impl<W: Word, F: Forecaster<W>> BlockEncoder<W, F> {
    pub fn new(forecaster: F) -> Self {
        let d = forecaster.ncols();
        BlockEncoder {
            forecaster,
            prev: vec![W::default(); d],
            layout: Layout::select(d, W::WIDTH),
            residuals: vec![W::default(); BLOCK_ROWS * d],
            ors: vec![0; d],
        }
    }

    pub fn forecaster(&self) -> &F {
        &self.forecaster
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    /// Encodes one `8 x D` block. Writes the normalized widths into `nbits`
    /// and appends the packed payload. Returns `false` when every residual is
    /// zero (all widths zero, nothing appended).
    pub fn encode_block(&mut self, block: &[W], nbits: &mut [u8], payload: &mut Vec<u8>) -> bool {
        let d = self.prev.len();
        debug_assert_eq!(block.len(), BLOCK_ROWS * d);
        self.forecaster
            .encode_block(&self.prev, block, &mut self.residuals);
        self.prev.copy_from_slice(&block[(BLOCK_ROWS - 1) * d..]);

        self.ors.fill(0);
        for row in self.residuals.chunks_exact_mut(d) {
            for (r, or) in row.iter_mut().zip(self.ors.iter_mut()) {
                *r = zigzag(*r);
                *or |= r.to_u32();
            }
        }
        let mut nonzero = false;
        for (n, &or) in nbits.iter_mut().zip(&self.ors) {
            *n = pack::width_of_or(or, W::WIDTH);
            nonzero |= *n != 0;
        }
        if nonzero {
            pack::pack_block(&self.residuals, nbits, self.layout, payload);
        }
        nonzero
    }
}

#[derive(Debug, Clone)]
pub struct BlockDecoder<W: Word, F: Forecaster<W>> {
    forecaster: F,
    prev: Vec<W>,
    layout: Layout,
    residuals: Vec<W>,
}

impl<W: Word, F: Forecaster<W>> BlockDecoder<W, F> {
    pub fn new(forecaster: F) -> Self {
        let d = forecaster.ncols();
        BlockDecoder {
            forecaster,
            prev: vec![W::default(); d],
            layout: Layout::select(d, W::WIDTH),
            residuals: vec![W::default(); BLOCK_ROWS * d],
        }
    }

    pub fn forecaster(&self) -> &F {
        &self.forecaster
    }

    /// Decodes one packed block into `out` (`8 x D`). Returns payload bytes used.
    pub fn decode_block(&mut self, nbits: &[u8], payload: &[u8], out: &mut [W]) -> Result<usize> {
        let used = pack::unpack_block(nbits, payload, self.layout, &mut self.residuals)?;
        for r in self.residuals.iter_mut() {
            *r = unzigzag(*r);
        }
        self.forecaster.decode_block(&self.prev, &self.residuals, out);
        let d = self.prev.len();
        self.prev.copy_from_slice(&out[(BLOCK_ROWS - 1) * d..]);
        Ok(used)
    }

    /// Appends `nblocks` blocks of zero-residual samples to `out`.
    pub fn decode_run(&mut self, nblocks: usize, out: &mut Vec<W>) {
        let d = self.prev.len();
        let block_len = BLOCK_ROWS * d;
        for _ in 0..nblocks {
            let start = out.len();
            out.resize(start + block_len, W::default());
            let block = &mut out[start..];
            self.forecaster.decode_zero_block(&self.prev, block);
            self.prev.copy_from_slice(&block[(BLOCK_ROWS - 1) * d..]);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forecast::{AnyForecaster, DeltaForecaster, ForecasterKind};
    use crate::pack::payload_len;

    #[test]
    fn constant_block_equal_to_prev_is_empty() {
        let mut enc = BlockEncoder::<u8, _>::new(DeltaForecaster::new(3));
        let mut nbits = [9u8; 3];
        let mut payload = Vec::new();
        assert!(!enc.encode_block(&[0u8; 24], &mut nbits, &mut payload));
        assert_eq!(nbits, [0, 0, 0]);
        assert!(payload.is_empty());
    }

    #[test]
    fn figure_one_style_block() {
        // Two 8-bit columns, delta coded from a zero previous sample.
        let col0: [i32; 8] = [3, 11, 9, 13, 10, 6, 8, 12];
        let col1: [i32; 8] = [50, 51, 51, 52, 52, 52, 53, 53];
        let block: Vec<u8> = (0..8).flat_map(|i| [col0[i] as u8, col1[i] as u8]).collect();
        let mut enc = BlockEncoder::<u8, _>::new(DeltaForecaster::new(2));
        let mut nbits = [0u8; 2];
        let mut payload = Vec::new();
        assert!(enc.encode_block(&block, &mut nbits, &mut payload));
        // col0 deltas 3,8,-2,4,-3,-4,2,4 -> zigzag 6,16,3,8,5,7,4,8 -> max 16 -> 5 bits
        // col1 deltas 50,1,0,1,0,0,1,0 -> zigzag max 100 -> 7 bits -> bumped to 8
        assert_eq!(nbits, [5, 8]);
        assert_eq!(payload.len(), payload_len(&nbits, Layout::ColumnMajor));

        let mut dec = BlockDecoder::<u8, _>::new(DeltaForecaster::new(2));
        let mut out = vec![0u8; 16];
        assert_eq!(dec.decode_block(&nbits, &payload, &mut out).unwrap(), 13);
        assert_eq!(out, block);
    }

    #[test]
    fn run_decoding_trains_fire_like_the_encoder() {
        let kind = ForecasterKind::Fire;
        let mut enc = BlockEncoder::<u16, _>::new(AnyForecaster::new(kind, 1, 1));
        let mut dec = BlockDecoder::<u16, _>::new(AnyForecaster::new(kind, 1, 1));
        let ramp: Vec<u16> = (0..8 * 64).map(|i| (i * 3) as u16).collect();
        let mut nbits = [0u8];
        let mut out = Vec::new();
        for block in ramp.chunks_exact(8) {
            let mut payload = Vec::new();
            if enc.encode_block(block, &mut nbits, &mut payload) {
                let start = out.len();
                out.resize(start + 8, 0);
                dec.decode_block(&nbits, &payload, &mut out[start..]).unwrap();
            } else {
                dec.decode_run(1, &mut out);
            }
            assert_eq!(enc.forecaster(), dec.forecaster());
        }
        assert_eq!(out, ramp);
    }
}
