//! Inputs for the criterion benchmarks in `benches/`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sprintz::Word;

/// Uniformly random samples: every block is packed at full width.
pub fn uniform<W: Word>(seed: u64, n: usize) -> Vec<W> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| W::from_u32_truncating(rng.random())).collect()
}

/// Slowly wandering columns, the case the forecasters are built for.
pub fn smooth<W: Word>(seed: u64, n: usize, ncols: usize) -> Vec<W> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = vec![0u32; ncols];
    let mut step: Vec<i32> = (0..ncols).map(|_| rng.random_range(-40..40)).collect();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        for (x, s) in cur.iter_mut().zip(&mut step) {
            *s += rng.random_range(-2..=2);
            *x = x.wrapping_add_signed(*s);
            out.push(W::from_u32_truncating(*x));
        }
    }
    out.truncate(n - n % ncols);
    out
}
