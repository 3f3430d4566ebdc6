use super::Forecaster;
use crate::word::Word;

/// Predicts each sample as the previous one.
#[inline]
pub fn delta_predict<W: Word>(prev: &[W], out: &mut [W]) {
    out.copy_from_slice(prev);
}

/// Delta coding. Stateless apart from the previous sample, which the block
/// codec supplies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeltaForecaster {
    ncols: usize,
}

impl DeltaForecaster {
    pub fn new(ncols: usize) -> Self {
        DeltaForecaster { ncols }
    }
}

impl<W: Word> Forecaster<W> for DeltaForecaster {
    fn ncols(&self) -> usize {
        self.ncols
    }

    fn encode_block(&mut self, prev: &[W], block: &[W], residuals: &mut [W]) {
        let d = self.ncols;
        let (first, rest) = residuals.split_at_mut(d);
        for ((r, &x), &p) in first.iter_mut().zip(&block[..d]).zip(prev) {
            *r = x.wrapping_sub(p);
        }
        for ((r, &x), &p) in rest.iter_mut().zip(&block[d..]).zip(block) {
            *r = x.wrapping_sub(p);
        }
    }

    fn decode_block(&mut self, prev: &[W], residuals: &[W], block: &mut [W]) {
        let d = self.ncols;
        for ((x, &r), &p) in block[..d].iter_mut().zip(&residuals[..d]).zip(prev) {
            *x = r.wrapping_add(p);
        }
        for i in d..block.len() {
            block[i] = residuals[i].wrapping_add(block[i - d]);
        }
    }

    fn decode_zero_block(&mut self, prev: &[W], block: &mut [W]) {
        for row in block.chunks_exact_mut(self.ncols) {
            row.copy_from_slice(prev);
        }
    }
}
