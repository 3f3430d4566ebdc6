mod common;

use common::{naive_pack, naive_unpack, random_width};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sprintz::pack::{pack_block, payload_len, unpack_block, Layout, BLOCK_ROWS};
use sprintz::{BitWidth, Word};

fn random_block<W: Word>(rng: &mut impl Rng, nbits: &[u8]) -> Vec<W> {
    let d = nbits.len();
    (0..BLOCK_ROWS * d)
        .map(|k| {
            let nb = nbits[k % d] as u32;
            let v = if nb == 0 {
                0
            } else {
                rng.next_u32() & (((1u64 << nb) - 1) as u32)
            };
            W::from_u32_truncating(v)
        })
        .collect()
}

fn check_layout<W: Word>(layout: Layout, seed: u64, trials: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_cols = match (layout, W::WIDTH) {
        (Layout::ColumnMajor, BitWidth::W8) => 4,
        (Layout::ColumnMajor, BitWidth::W16) => 2,
        (Layout::RowMajor, _) => 80,
    };
    let min_cols = match (layout, W::WIDTH) {
        (Layout::ColumnMajor, _) => 1,
        (Layout::RowMajor, BitWidth::W8) => 5,
        (Layout::RowMajor, BitWidth::W16) => 3,
    };
    let mut mismatches = 0;
    for _ in 0..trials {
        let d = rng.random_range(min_cols..=max_cols);
        assert_eq!(Layout::select(d, W::WIDTH), layout);
        let nbits: Vec<u8> = (0..d).map(|_| random_width(&mut rng, W::BITS)).collect();
        let block = random_block::<W>(&mut rng, &nbits);
        let as_u32: Vec<u32> = block.iter().map(|v| v.to_u32()).collect();

        let mut fast = Vec::new();
        pack_block(&block, &nbits, layout, &mut fast);
        let slow = naive_pack(&as_u32, &nbits, layout);
        assert_eq!(fast.len(), payload_len(&nbits, layout));
        if fast != slow {
            mismatches += 1;
        }

        let mut out = vec![W::default(); block.len()];
        let used = unpack_block(&nbits, &fast, layout, &mut out).unwrap();
        assert_eq!(used, fast.len());
        if out != block || naive_unpack(&fast, &nbits, layout) != as_u32 {
            mismatches += 1;
        }
    }
    assert_eq!(mismatches, 0);
}

#[test]
fn column_major_matches_reference() {
    check_layout::<u8>(Layout::ColumnMajor, 1, 10_000);
    check_layout::<u16>(Layout::ColumnMajor, 2, 10_000);
}

#[test]
fn row_major_matches_reference() {
    check_layout::<u8>(Layout::RowMajor, 3, 10_000);
    check_layout::<u16>(Layout::RowMajor, 4, 10_000);
}

#[test]
fn four_column_example() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let nbits = [3u8, 1, 8, 2];
    let block = random_block::<u8>(&mut rng, &nbits);
    let mut packed = Vec::new();
    pack_block(&block, &nbits, Layout::ColumnMajor, &mut packed);
    assert_eq!(packed.len(), 14);
    let mut out = [0u8; 32];
    unpack_block(&nbits, &packed, Layout::ColumnMajor, &mut out).unwrap();
    assert_eq!(&out[..], &block[..]);
}

#[test]
fn nine_column_example() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let nbits = [5u8, 3, 4, 4, 4, 4, 4, 4, 4];
    let block = random_block::<u8>(&mut rng, &nbits);
    let mut packed = Vec::new();
    pack_block(&block, &nbits, Layout::RowMajor, &mut packed);
    assert_eq!(packed.len(), 40);
    let as_u32: Vec<u32> = block.iter().map(|&v| v as u32).collect();
    assert_eq!(naive_unpack(&packed, &nbits, Layout::RowMajor), as_u32);
}

#[test]
fn row_major_columns_sit_at_fixed_offsets() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let nbits = [5u8, 0, 16, 3, 9, 16, 2];
    let block = random_block::<u16>(&mut rng, &nbits);
    let mut packed = Vec::new();
    pack_block(&block, &nbits, Layout::RowMajor, &mut packed);
    let row_bytes = packed.len() / BLOCK_ROWS;
    for i in 0..BLOCK_ROWS {
        let row = &packed[i * row_bytes..(i + 1) * row_bytes];
        let mut offset = 0usize;
        for (j, &nb) in nbits.iter().enumerate() {
            let mut v = 0u32;
            for b in 0..nb as usize {
                let k = offset + b;
                v |= (((row[k / 8] >> (k % 8)) & 1) as u32) << b;
            }
            assert_eq!(v, block[i * nbits.len() + j] as u32);
            offset += nb as usize;
        }
    }
}

#[test]
fn random_payloads_never_read_out_of_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..20_000 {
        let d = rng.random_range(1..40);
        let w = if rng.random() { BitWidth::W8 } else { BitWidth::W16 };
        let layout = Layout::select(d, w);
        let nbits: Vec<u8> = (0..d).map(|_| random_width(&mut rng, w.bits())).collect();
        let need = payload_len(&nbits, layout);
        // Sometimes the exact length, sometimes short, sometimes long.
        let len = match rng.random_range(0..3) {
            0 => need,
            1 => rng.random_range(0..=need),
            _ => need + rng.random_range(0..8),
        };
        let mut payload = vec![0u8; len];
        rng.fill_bytes(&mut payload);
        let res = match w {
            BitWidth::W8 => unpack_block(&nbits, &payload, layout, &mut vec![0u8; 8 * d]),
            BitWidth::W16 => unpack_block(&nbits, &payload, layout, &mut vec![0u16; 8 * d]),
        };
        assert_eq!(res.is_ok(), len >= need);
    }
}
