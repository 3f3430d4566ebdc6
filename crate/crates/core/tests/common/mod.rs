#![allow(dead_code)]

use rand::Rng;
use sprintz::pack::{Layout, BLOCK_ROWS};

/// Bit-at-a-time LSB-first packer, written directly from the layout rules.
pub fn naive_pack(errs: &[u32], nbits: &[u8], layout: Layout) -> Vec<u8> {
    let d = nbits.len();
    let mut bits: Vec<bool> = Vec::new();
    let push = |v: u32, n: u8, bits: &mut Vec<bool>| {
        for b in 0..n {
            bits.push((v >> b) & 1 == 1);
        }
    };
    match layout {
        Layout::ColumnMajor => {
            for j in 0..d {
                for i in 0..BLOCK_ROWS {
                    push(errs[i * d + j], nbits[j], &mut bits);
                }
            }
        }
        Layout::RowMajor => {
            for i in 0..BLOCK_ROWS {
                for j in 0..d {
                    push(errs[i * d + j], nbits[j], &mut bits);
                }
                while bits.len() % 8 != 0 {
                    bits.push(false);
                }
            }
        }
    }
    let mut out = vec![0u8; bits.len().div_ceil(8)];
    for (k, &b) in bits.iter().enumerate() {
        if b {
            out[k / 8] |= 1 << (k % 8);
        }
    }
    out
}

pub fn naive_unpack(payload: &[u8], nbits: &[u8], layout: Layout) -> Vec<u32> {
    let d = nbits.len();
    let bit = |k: usize| (payload[k / 8] >> (k % 8)) & 1;
    let mut out = vec![0u32; BLOCK_ROWS * d];
    let mut pos = 0usize;
    match layout {
        Layout::ColumnMajor => {
            for j in 0..d {
                for i in 0..BLOCK_ROWS {
                    for b in 0..nbits[j] {
                        out[i * d + j] |= (bit(pos) as u32) << b;
                        pos += 1;
                    }
                }
            }
        }
        Layout::RowMajor => {
            for i in 0..BLOCK_ROWS {
                for j in 0..d {
                    for b in 0..nbits[j] {
                        out[i * d + j] |= (bit(pos) as u32) << b;
                        pos += 1;
                    }
                }
                pos = pos.div_ceil(8) * 8;
            }
        }
    }
    out
}

/// A random normalized width in `0..=w`, never `w - 1`.
pub fn random_width(rng: &mut impl Rng, w: u32) -> u8 {
    loop {
        let n = rng.random_range(0..=w);
        if n != w - 1 {
            return n as u8;
        }
    }
}

/// Random row-major data mixing smooth, constant, and noisy stretches.
pub fn random_series(rng: &mut impl Rng, nsamples: usize, ncols: usize, w: u32) -> Vec<u32> {
    let mask = ((1u64 << w) - 1) as u32;
    let mut out = Vec::with_capacity(nsamples * ncols);
    let mut cur: Vec<u32> = (0..ncols).map(|_| rng.next_u32() & mask).collect();
    let mut mode = 0;
    for t in 0..nsamples {
        if t % 16 == 0 {
            mode = rng.random_range(0..4);
        }
        for v in cur.iter_mut() {
            *v = match mode {
                0 => *v,
                1 => v.wrapping_add(rng.random_range(0..3)) & mask,
                2 => v.wrapping_add(rng.random_range(0..64)).wrapping_sub(32) & mask,
                _ => rng.next_u32() & mask,
            };
        }
        out.extend_from_slice(&cur);
    }
    out
}
