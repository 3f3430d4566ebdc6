//! Fast integer regression: predicts each column's next delta as
//! `alpha * previous_delta`, learning `alpha` online with sign-of-error
//! (L1) gradient steps.
//!
//! `alpha` is fixed point with scale `2^w` and is derived from a wider
//! accumulator as `accumulator >> learn_shift`, which gives an effective
//! learning rate of `2^-learn_shift`. Per block:
//!
//! - `alpha` is computed once, at the start of the block;
//! - gradients are taken at rows 1, 3, 5 and 7 only, summed, and averaged by
//!   an arithmetic shift right by 2;
//! - the accumulator is updated once, saturating so that `alpha` stays in
//!   `[-2^w, 2^w]`.

use std::marker::PhantomData;

use super::Forecaster;
use crate::pack::BLOCK_ROWS;
use crate::word::Word;

/// Learning rate 1/2.
pub const DEFAULT_LEARN_SHIFT: u8 = 1;
pub const MAX_LEARN_SHIFT: u8 = 24;

/// log2 of the number of gradient samples per block.
const GRADIENT_AVG_SHIFT: u32 = 2;

/// Learned per-column state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FireState {
    pub learn_shift: u8,
    /// Scaled coefficients; `alpha = accumulator >> learn_shift`.
    pub accumulators: Vec<i64>,
    /// Most recent delta per column, as a signed `w`-bit value.
    pub deltas: Vec<i32>,
}

impl FireState {
    pub fn new(ncols: usize, learn_shift: u8) -> Self {
        assert!(
            learn_shift <= MAX_LEARN_SHIFT,
            "learn_shift {learn_shift} too large"
        );
        FireState {
            learn_shift,
            accumulators: vec![0; ncols],
            deltas: vec![0; ncols],
        }
    }

    /// Accumulator bounds keeping `accumulator >> learn_shift` in `[-2^w, 2^w]`.
    pub fn accumulator_bounds(width_bits: u32, learn_shift: u8) -> (i64, i64) {
        let one = 1i64 << width_bits;
        let lo = -(one << learn_shift);
        let hi = ((one + 1) << learn_shift) - 1;
        (lo, hi)
    }

    #[inline]
    pub fn alpha(&self, col: usize) -> i64 {
        self.accumulators[col] >> self.learn_shift
    }
}

/// `prev + ((alpha * delta) >> w)`, wrapping modulo `2^w`.
#[inline]
pub fn fire_predict_one<W: Word>(prev: W, alpha: i64, delta: i32) -> W {
    let delta_hat = (alpha * delta as i64) >> W::BITS;
    prev.wrapping_add(W::from_signed_truncating(delta_hat as i32))
}

#[inline]
fn sign(v: i32) -> i64 {
    v.signum() as i64
}

#[derive(Debug, Clone)]
pub struct FireForecaster<W: Word> {
    state: FireState,
    training: bool,
    alphas: Vec<i64>,
    gradients: Vec<i64>,
    _word: PhantomData<W>,
}

impl<W: Word> PartialEq for FireForecaster<W> {
    fn eq(&self, other: &Self) -> bool {
        self.state == other.state && self.training == other.training
    }
}

impl<W: Word> Eq for FireForecaster<W> {}

impl<W: Word> FireForecaster<W> {
    pub fn new(ncols: usize, learn_shift: u8) -> Self {
        FireForecaster {
            state: FireState::new(ncols, learn_shift),
            training: true,
            alphas: vec![0; ncols],
            gradients: vec![0; ncols],
            _word: PhantomData,
        }
    }

    /// With training disabled and zero accumulators this is delta coding.
    pub fn with_training(mut self, training: bool) -> Self {
        self.training = training;
        self
    }

    pub fn state(&self) -> &FireState {
        &self.state
    }

    /// Replaces the learned state, e.g. to resume or to test from a known point.
    pub fn set_state(&mut self, state: FireState) {
        assert_eq!(state.accumulators.len(), self.alphas.len());
        assert_eq!(state.deltas.len(), self.alphas.len());
        self.state = state;
    }

    pub fn ncols(&self) -> usize {
        self.alphas.len()
    }

    /// Latches `alpha` for every column and clears the gradient sums.
    pub fn begin_block(&mut self) {
        for (j, a) in self.alphas.iter_mut().enumerate() {
            *a = self.state.alpha(j);
        }
        self.gradients.fill(0);
    }

    /// Predicts the next sample from `prev` using the latched coefficients.
    pub fn predict(&self, prev: &[W], out: &mut [W]) {
        for j in 0..out.len() {
            out[j] = fire_predict_one(prev[j], self.alphas[j], self.state.deltas[j]);
        }
    }

    /// Trains on the sample at `row` within the current block. `residual` is
    /// the wrapped prediction error `cur - predicted`.
    pub fn train(&mut self, row: usize, prev: &[W], cur: &[W], residual: &[W]) {
        for j in 0..cur.len() {
            self.step(j, row, prev[j], cur[j], residual[j]);
        }
    }

    /// Applies the averaged gradient step with saturation.
    pub fn end_block(&mut self) {
        if !self.training {
            return;
        }
        let (lo, hi) = FireState::accumulator_bounds(W::BITS, self.state.learn_shift);
        for (acc, &g) in self.state.accumulators.iter_mut().zip(&self.gradients) {
            *acc = (*acc - (g >> GRADIENT_AVG_SHIFT)).clamp(lo, hi);
        }
    }

    #[inline]
    fn step(&mut self, j: usize, row: usize, prev: W, cur: W, residual: W) {
        if self.training && row % 2 == 1 {
            // gradient = -sign(err) * delta_{i-1}
            self.gradients[j] -= sign(residual.to_signed()) * self.state.deltas[j] as i64;
        }
        self.state.deltas[j] = cur.wrapping_sub(prev).to_signed();
    }
}

impl<W: Word> Forecaster<W> for FireForecaster<W> {
    fn ncols(&self) -> usize {
        self.alphas.len()
    }

    fn encode_block(&mut self, prev: &[W], block: &[W], residuals: &mut [W]) {
        let d = self.alphas.len();
        self.begin_block();
        for row in 0..BLOCK_ROWS {
            for j in 0..d {
                let p = if row == 0 {
                    prev[j]
                } else {
                    block[(row - 1) * d + j]
                };
                let x = block[row * d + j];
                let predicted = fire_predict_one(p, self.alphas[j], self.state.deltas[j]);
                let r = x.wrapping_sub(predicted);
                residuals[row * d + j] = r;
                self.step(j, row, p, x, r);
            }
        }
        self.end_block();
    }

    fn decode_block(&mut self, prev: &[W], residuals: &[W], block: &mut [W]) {
        let d = self.alphas.len();
        self.begin_block();
        for row in 0..BLOCK_ROWS {
            for j in 0..d {
                let p = if row == 0 {
                    prev[j]
                } else {
                    block[(row - 1) * d + j]
                };
                let r = residuals[row * d + j];
                let x = fire_predict_one(p, self.alphas[j], self.state.deltas[j]).wrapping_add(r);
                block[row * d + j] = x;
                self.step(j, row, p, x, r);
            }
        }
        self.end_block();
    }

    fn decode_zero_block(&mut self, prev: &[W], block: &mut [W]) {
        let d = self.alphas.len();
        self.begin_block();
        for row in 0..BLOCK_ROWS {
            for j in 0..d {
                let p = if row == 0 {
                    prev[j]
                } else {
                    block[(row - 1) * d + j]
                };
                let x = fire_predict_one(p, self.alphas[j], self.state.deltas[j]);
                block[row * d + j] = x;
                self.step(j, row, p, x, W::default());
            }
        }
        self.end_block();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forecast::DeltaForecaster;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_accumulators_predict_previous_sample() {
        let mut f = FireForecaster::<u8>::new(3, DEFAULT_LEARN_SHIFT);
        f.set_state(FireState {
            learn_shift: 1,
            accumulators: vec![0; 3],
            deltas: vec![5, -7, 100],
        });
        f.begin_block();
        let mut out = [0u8; 3];
        f.predict(&[10, 20, 30], &mut out);
        assert_eq!(out, [10, 20, 30]);
    }

    #[test]
    fn unit_alpha_extrapolates_linearly() {
        // alpha = 2^w is the real coefficient 1.0: double-delta coding.
        for d in [-128i32, -3, 0, 9, 127] {
            let mut f = FireForecaster::<u8>::new(1, 1);
            f.set_state(FireState {
                learn_shift: 1,
                accumulators: vec![256 << 1],
                deltas: vec![d],
            });
            f.begin_block();
            let mut out = [0u8];
            f.predict(&[100], &mut out);
            assert_eq!(out[0], (100 + d) as u8);
        }
        let mut f = FireForecaster::<u16>::new(1, 3);
        f.set_state(FireState {
            learn_shift: 3,
            accumulators: vec![65536 << 3],
            deltas: vec![-1234],
        });
        f.begin_block();
        let mut out = [0u16];
        f.predict(&[5000], &mut out);
        assert_eq!(out[0], 5000 - 1234);
    }

    #[test]
    fn zero_error_leaves_accumulators_unchanged() {
        let mut f = FireForecaster::<u16>::new(2, 1);
        f.set_state(FireState {
            learn_shift: 1,
            accumulators: vec![300, -40],
            deltas: vec![0, 0],
        });
        // A block matching predictions exactly yields zero residuals.
        let prev = [1000u16, 2000];
        let mut block = vec![0u16; 16];
        f.clone().decode_zero_block(&prev, &mut block);
        let mut res = vec![0u16; 16];
        f.encode_block(&prev, &block, &mut res);
        assert!(res.iter().all(|&r| r == 0));
        assert_eq!(f.state().accumulators, vec![300, -40]);
    }

    #[test]
    fn extremes_do_not_overflow() {
        for (bits, ls) in [(8u32, 0u8), (8, 1), (8, 24), (16, 0), (16, 1), (16, 24)] {
            let (lo, hi) = FireState::accumulator_bounds(bits, ls);
            assert_eq!(lo >> ls, -(1i64 << bits));
            assert_eq!(hi >> ls, 1i64 << bits);
            let dmin = -(1i64 << (bits - 1));
            let dmax = (1i64 << (bits - 1)) - 1;
            for alpha in [lo >> ls, hi >> ls] {
                for delta in [dmin, dmax] {
                    let p = alpha as i128 * delta as i128;
                    assert!(p.abs() <= 1i128 << (2 * bits - 1));
                    let q = (alpha * delta) >> bits;
                    assert!(q >= dmin && q <= -dmin);
                }
            }
        }
    }

    #[test]
    fn accumulator_saturates() {
        let mut f = FireForecaster::<u8>::new(1, 1);
        // Steep ramp with huge deltas drives alpha up; it must stop at 2^w.
        let mut x = 0u8;
        let mut prev = [0u8];
        let mut res = [0u8; 8];
        for _ in 0..10_000 {
            let mut block = [0u8; 8];
            for v in block.iter_mut() {
                x = x.wrapping_add(127);
                *v = x;
            }
            f.encode_block(&prev, &block, &mut res);
            prev = [block[7]];
            assert!(f.state().alpha(0).abs() <= 256);
        }
    }

    /// Straight-line transcription of the per-sample algorithm with the
    /// per-block modifications, in wide arithmetic.
    fn reference_block(
        acc: &mut [i64],
        deltas: &mut [i32],
        ls: u8,
        w: u32,
        prev: &[i64],
        block: &[i64],
    ) -> Vec<i64> {
        let d = acc.len();
        let modulus = 1i64 << w;
        let wrap_signed = |v: i64| {
            let v = v.rem_euclid(modulus);
            if v >= modulus / 2 {
                v - modulus
            } else {
                v
            }
        };
        let alphas: Vec<i64> = acc.iter().map(|a| a.div_euclid(1 << ls)).collect();
        let mut grad_sum = vec![0i64; d];
        let mut out = Vec::new();
        for row in 0..8 {
            for j in 0..d {
                let p = if row == 0 {
                    prev[j]
                } else {
                    block[(row - 1) * d + j]
                };
                let x = block[row * d + j];
                let delta_hat = (alphas[j] * deltas[j] as i64).div_euclid(modulus);
                let pred = (p + delta_hat).rem_euclid(modulus);
                let err = wrap_signed(x - pred);
                out.push(err.rem_euclid(modulus));
                if row % 2 == 1 {
                    grad_sum[j] += -err.signum() * deltas[j] as i64;
                }
                deltas[j] = wrap_signed(x - p) as i32;
            }
        }
        let (lo, hi) = FireState::accumulator_bounds(w, ls);
        for j in 0..d {
            let avg = grad_sum[j].div_euclid(4);
            acc[j] = (acc[j] - avg).clamp(lo, hi);
        }
        out
    }

    fn check_against_reference<W: Word>(seed: u64, trials: usize) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = W::BITS;
        for _ in 0..trials {
            let d = rng.random_range(1..6);
            let ls = rng.random_range(0..4u8);
            let (lo, hi) = FireState::accumulator_bounds(w, ls);
            let mut acc: Vec<i64> = (0..d).map(|_| rng.random_range(lo..=hi)).collect();
            let half = 1i32 << (w - 1);
            let mut deltas: Vec<i32> = (0..d).map(|_| rng.random_range(-half..half)).collect();
            let mut f = FireForecaster::<W>::new(d, ls);
            f.set_state(FireState {
                learn_shift: ls,
                accumulators: acc.clone(),
                deltas: deltas.clone(),
            });
            let mask = (1u32 << w) - 1;
            let prev: Vec<W> = (0..d)
                .map(|_| W::from_u32_truncating(rng.random::<u32>() & mask))
                .collect();
            // Smooth-ish block so predictions are sometimes exact.
            let mut block: Vec<u32> = Vec::with_capacity(8 * d);
            for row in 0..8 {
                for j in 0..d {
                    let base = if row == 0 {
                        prev[j].to_u32()
                    } else {
                        block[(row - 1) * d + j]
                    };
                    let step = rng.random_range(-3i32..=3);
                    block.push(base.wrapping_add(step as u32) & mask);
                }
            }
            let block_w: Vec<W> = block.iter().map(|&v| W::from_u32_truncating(v)).collect();
            let mut res = vec![W::default(); 8 * d];
            f.encode_block(&prev, &block_w, &mut res);

            let prev_i: Vec<i64> = prev.iter().map(|v| v.to_u32() as i64).collect();
            let block_i: Vec<i64> = block.iter().map(|&v| v as i64).collect();
            let expect = reference_block(&mut acc, &mut deltas, ls, w, &prev_i, &block_i);
            let got: Vec<i64> = res.iter().map(|v| v.to_u32() as i64).collect();
            assert_eq!(got, expect);
            assert_eq!(f.state().accumulators, acc);
            assert_eq!(f.state().deltas, deltas);
        }
    }

    #[test]
    fn matches_scalar_reference_8() {
        check_against_reference::<u8>(1, 20_000);
    }

    #[test]
    fn matches_scalar_reference_16() {
        check_against_reference::<u16>(2, 20_000);
    }

    #[test]
    fn averaged_update_is_sum_shifted_by_two() {
        // Deltas of 10 with residuals +,+,-,0 at odd rows.
        let mut f = FireForecaster::<u8>::new(1, 1);
        f.begin_block();
        let prev = [0u8];
        let rows: [u8; 8] = [10, 20, 30, 40, 50, 60, 70, 80];
        let residual_signs: [i32; 8] = [0, 1, 0, 1, 0, -1, 0, 0];
        let mut p = prev;
        for row in 0..8 {
            let cur = [rows[row]];
            let r = [residual_signs[row] as u8];
            f.train(row, &p, &cur, &r);
            p = cur;
        }
        f.end_block();
        // row 1 sees delta 10 (+), row 3 delta 10 (+), row 5 delta 10 (-), row 7 (0)
        let grads: i64 = -10 - 10 + 10;
        assert_eq!(f.state().accumulators[0], -(grads >> 2));
    }

    #[test]
    fn learns_a_ramp_faster_than_delta() {
        let slope = 8u8;
        let blocks = 96;
        let samples: Vec<u8> = (0..blocks * 8).map(|i| (i as u32 * slope as u32) as u8).collect();
        let mut fire = FireForecaster::<u8>::new(1, DEFAULT_LEARN_SHIFT);
        let mut delta = DeltaForecaster::new(1);
        let mut prev = [0u8];
        let (mut fire_err, mut delta_err) = (0i64, 0i64);
        let mut acc_trace = Vec::new();
        let mut res = [0u8; 8];
        for (b, block) in samples.chunks_exact(8).enumerate() {
            fire.encode_block(&prev, block, &mut res);
            let f_sum: i64 = res.iter().map(|r| r.to_signed().abs() as i64).sum();
            Forecaster::<u8>::encode_block(&mut delta, &prev, block, &mut res);
            let d_sum: i64 = res.iter().map(|r| r.to_signed().abs() as i64).sum();
            if b >= 32 {
                fire_err += f_sum;
                delta_err += d_sum;
            }
            acc_trace.push(fire.state().accumulators[0]);
            prev = [block[7]];
        }
        assert!(acc_trace[..32].windows(2).all(|w| w[1] > w[0]));
        assert!(fire_err < delta_err, "fire {fire_err} delta {delta_err}");
    }

    #[test]
    fn effective_rate_is_half_by_default() {
        // One accumulator step of g moves alpha by g >> 1.
        let s = FireState {
            learn_shift: DEFAULT_LEARN_SHIFT,
            accumulators: vec![64],
            deltas: vec![0],
        };
        assert_eq!(s.alpha(0), 32);
    }
}
