//! Block headers and bit packing of zigzagged residuals.
//!
//! A block is [`BLOCK_ROWS`] rows of `D` columns. Each column gets a packed
//! width `nbits[j]`, the number of significant bits in the OR of its eight
//! values, with `w - 1` bumped to `w` so the header field fits in `log2(w)`
//! bits. Narrow samples (`D * w <= 32`) are packed column-major; wider ones
//! row-major with each row padded to a byte boundary.

use crate::bits::{BitReader, BitWriter};
use crate::error::{Error, Result};
use crate::word::{BitWidth, Word};

/// Samples per block.
pub const BLOCK_ROWS: usize = 8;

/// Samples at or below this many bits are packed column-major.
pub const COLUMN_MAJOR_MAX_SAMPLE_BITS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    /// Each column's eight values are contiguous; a column occupies exactly
    /// `nbits[j]` bytes.
    ColumnMajor,
    /// Each row's `D` values are contiguous and zero-padded to a whole byte.
    RowMajor,
}

impl Layout {
    pub fn select(ncols: usize, width: BitWidth) -> Layout {
        if ncols.saturating_mul(width.bits() as usize) <= COLUMN_MAJOR_MAX_SAMPLE_BITS {
            Layout::ColumnMajor
        } else {
            Layout::RowMajor
        }
    }
}

/// Bumps `w - 1` to `w`; other widths are unchanged.
#[inline]
pub fn normalize_width(n: u32, width: BitWidth) -> u8 {
    let w = width.bits();
    if n == w - 1 {
        w as u8
    } else {
        n as u8
    }
}

/// Packed width for a column given the OR of all its zigzagged values.
#[inline]
pub fn width_of_or(or: u32, width: BitWidth) -> u8 {
    let w = width.bits();
    // `or` has at most w significant bits, so this is w minus a w-bit clz.
    let clz = or.leading_zeros() - (32 - w);
    normalize_width(w - clz, width)
}

/// Packed width for one column of a block.
pub fn required_bits<W: Word>(column: &[W; BLOCK_ROWS]) -> u8 {
    let or = column.iter().fold(0u32, |acc, v| acc | v.to_u32());
    width_of_or(or, W::WIDTH)
}

/// Serialized header field for a normalized width.
#[inline]
pub fn header_code(nbits: u8, width: BitWidth) -> u32 {
    let w = width.bits();
    debug_assert!(nbits as u32 <= w && nbits as u32 != w - 1);
    if nbits as u32 == w {
        w - 1
    } else {
        nbits as u32
    }
}

#[inline]
pub fn width_from_code(code: u32, width: BitWidth) -> u8 {
    let w = width.bits();
    if code == w - 1 {
        w as u8
    } else {
        code as u8
    }
}

/// Per-column packed widths of one block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockHeader {
    nbits: Vec<u8>,
}

impl BlockHeader {
    pub fn zeros(ncols: usize) -> Self {
        BlockHeader {
            nbits: vec![0; ncols],
        }
    }

    /// Builds a header from widths, normalizing `w - 1` to `w`.
    pub fn new(nbits: &[u8], width: BitWidth) -> Result<Self> {
        let nbits = nbits
            .iter()
            .map(|&n| {
                if n as u32 > width.bits() {
                    Err(Error::InvalidConfig(format!(
                        "packed width {n} exceeds {}",
                        width.bits()
                    )))
                } else {
                    Ok(normalize_width(n as u32, width))
                }
            })
            .collect::<Result<_>>()?;
        Ok(BlockHeader { nbits })
    }

    pub fn nbits(&self) -> &[u8] {
        &self.nbits
    }

    pub fn nbits_mut(&mut self) -> &mut [u8] {
        &mut self.nbits
    }

    /// All-zero headers mark run-length records.
    pub fn is_zero(&self) -> bool {
        self.nbits.iter().all(|&n| n == 0)
    }

    pub fn payload_len(&self, layout: Layout) -> usize {
        payload_len(&self.nbits, layout)
    }
}

/// Payload bytes implied by a header under a layout.
pub fn payload_len(nbits: &[u8], layout: Layout) -> usize {
    let total: usize = nbits.iter().map(|&n| n as usize).sum();
    match layout {
        Layout::ColumnMajor => total,
        Layout::RowMajor => BLOCK_ROWS * total.div_ceil(8),
    }
}

/// Bytes occupied by `count` headers of `ncols` fields, padded to a byte.
pub fn headers_len(count: usize, ncols: usize, width: BitWidth) -> usize {
    (count * ncols * width.header_field_bits() as usize).div_ceil(8)
}

/// Packs a group of headers back to back, then pads to a byte boundary.
pub fn write_headers<'a>(headers: impl IntoIterator<Item = &'a [u8]>, width: BitWidth, out: &mut Vec<u8>) {
    let field = width.header_field_bits();
    let mut w = BitWriter::new();
    for h in headers {
        for &n in h {
            w.write(header_code(n, width), field);
        }
    }
    w.finish_into(out);
}

/// Reads `count` headers of `ncols` fields each into `out` (length
/// `count * ncols`). Returns the bytes consumed, including padding.
pub fn read_headers(
    data: &[u8],
    count: usize,
    ncols: usize,
    width: BitWidth,
    out: &mut [u8],
) -> Result<usize> {
    let len = headers_len(count, ncols, width);
    if data.len() < len {
        return Err(Error::corrupt(data.len(), "header group truncated"));
    }
    let field = width.header_field_bits();
    let mut r = BitReader::new(&data[..len]);
    for slot in out[..count * ncols].iter_mut() {
        *slot = width_from_code(r.read(field)?, width);
    }
    Ok(len)
}

/// Packs an `8 x D` row-major block of zigzagged residuals column-major.
pub fn pack_column_major<W: Word>(errs: &[W], nbits: &[u8], out: &mut Vec<u8>) {
    let ncols = nbits.len();
    debug_assert_eq!(errs.len(), BLOCK_ROWS * ncols);
    for (j, &nb) in nbits.iter().enumerate() {
        if nb == 0 {
            continue;
        }
        let mut acc: u128 = 0;
        for i in 0..BLOCK_ROWS {
            let v = errs[i * ncols + j].to_u32();
            debug_assert!(v >> nb == 0, "value {v} wider than {nb} bits");
            acc |= (v as u128) << (i * nb as usize);
        }
        out.extend_from_slice(&acc.to_le_bytes()[..nb as usize]);
    }
}

/// Packs an `8 x D` row-major block of zigzagged residuals row-major.
pub fn pack_row_major<W: Word>(errs: &[W], nbits: &[u8], out: &mut Vec<u8>) {
    let ncols = nbits.len();
    debug_assert_eq!(errs.len(), BLOCK_ROWS * ncols);
    let row_bytes = payload_len(nbits, Layout::RowMajor) / BLOCK_ROWS;
    if row_bytes == 0 {
        return;
    }
    let mut w = BitWriter::with_capacity(row_bytes * BLOCK_ROWS);
    for row in errs.chunks_exact(ncols) {
        for (&v, &nb) in row.iter().zip(nbits) {
            debug_assert!(v.to_u32() >> nb == 0);
            w.write(v.to_u32(), nb as u32);
        }
        w.align();
    }
    w.finish_into(out);
}

pub fn pack_block<W: Word>(errs: &[W], nbits: &[u8], layout: Layout, out: &mut Vec<u8>) {
    match layout {
        Layout::ColumnMajor => pack_column_major(errs, nbits, out),
        Layout::RowMajor => pack_row_major(errs, nbits, out),
    }
}

/// Unpacks one block's payload into `out` (`8 x D`, row-major). Returns the
/// number of payload bytes consumed.
pub fn unpack_block<W: Word>(nbits: &[u8], payload: &[u8], layout: Layout, out: &mut [W]) -> Result<usize> {
    let ncols = nbits.len();
    debug_assert_eq!(out.len(), BLOCK_ROWS * ncols);
    let len = payload_len(nbits, layout);
    if payload.len() < len {
        return Err(Error::corrupt(
            payload.len(),
            format!("block payload truncated: need {len} bytes"),
        ));
    }
    let payload = &payload[..len];
    match layout {
        Layout::ColumnMajor => {
            let mut off = 0;
            for (j, &nb) in nbits.iter().enumerate() {
                let nb = nb as usize;
                if nb == 0 {
                    for i in 0..BLOCK_ROWS {
                        out[i * ncols + j] = W::default();
                    }
                    continue;
                }
                let mut buf = [0u8; 16];
                buf[..nb].copy_from_slice(&payload[off..off + nb]);
                off += nb;
                let acc = u128::from_le_bytes(buf);
                let mask = (1u128 << nb) - 1;
                for i in 0..BLOCK_ROWS {
                    out[i * ncols + j] = W::from_u32_truncating(((acc >> (i * nb)) & mask) as u32);
                }
            }
        }
        Layout::RowMajor => {
            if len == 0 {
                out.fill(W::default());
                return Ok(0);
            }
            // The length check above guarantees every field lies inside `payload`.
            let mut pos = 0usize;
            for row in out.chunks_exact_mut(ncols) {
                for (v, &nb) in row.iter_mut().zip(nbits) {
                    let window = load_u32_le(payload, pos >> 3) >> (pos & 7);
                    *v = W::from_u32_truncating(window & ((1u32 << nb) - 1));
                    pos += nb as usize;
                }
                pos = pos.next_multiple_of(8);
            }
        }
    }
    Ok(len)
}

/// Four bytes starting at `at`, zero-filled past the end.
#[inline]
fn load_u32_le(bytes: &[u8], at: usize) -> u32 {
    match bytes.get(at..at + 4) {
        Some(b) => u32::from_le_bytes([b[0], b[1], b[2], b[3]]),
        None => {
            let mut buf = [0u8; 4];
            let tail = bytes.get(at..).unwrap_or(&[]);
            buf[..tail.len()].copy_from_slice(tail);
            u32::from_le_bytes(buf)
        }
    }
}
