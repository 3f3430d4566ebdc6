//! Seeded synthetic data.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use sprintz::{BitWidth, Samples};

/// Uniformly random samples: the incompressible case.
pub fn uniform(seed: u64, nvalues: usize, width: BitWidth) -> Samples {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match width {
        BitWidth::W8 => Samples::U8((0..nvalues).map(|_| rng.random()).collect()),
        BitWidth::W16 => Samples::U16((0..nvalues).map(|_| rng.random()).collect()),
    }
}

/// 16-bit random walk with drift plus small observation noise, generated
/// directly in sample units and wrapped modulo 2^16. Drift is 50 to 500
/// units per sample in either direction.
pub fn drifting_walk(seed: u64, len: usize) -> Vec<u16> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let drift = rng.random_range(50.0..500.0) * if rng.random() { 1.0 } else { -1.0 };
    let step = Normal::new(0.0, 2.0).unwrap();
    let noise = Normal::new(0.0, 1.0).unwrap();
    let mut x = 0.0f64;
    (0..len)
        .map(|_| {
            x += drift + step.sample(&mut rng);
            (x + noise.sample(&mut rng)).round().rem_euclid(65536.0) as u16
        })
        .collect()
}

/// Unit-variance sinusoid.
pub fn sinusoid(len: usize, period: f64) -> Vec<f64> {
    let amp = std::f64::consts::SQRT_2;
    (0..len)
        .map(|i| amp * (std::f64::consts::TAU * i as f64 / period).sin())
        .collect()
}

/// Gaussian random walk.
pub fn random_walk(seed: u64, len: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let step = Normal::new(0.0, 1.0).unwrap();
    let mut x = 0.0;
    (0..len)
        .map(|_| {
            x += step.sample(&mut rng);
            x
        })
        .collect()
}
