//! Zigzag mapping between signed and unsigned integers of equal width:
//! `0, -1, 1, -2, 2, ...` maps to `0, 1, 2, 3, 4, ...`.

use crate::word::Word;

#[inline]
pub fn zigzag_encode_i8(v: i8) -> u8 {
    ((v << 1) ^ (v >> 7)) as u8
}

#[inline]
pub fn zigzag_decode_u8(u: u8) -> i8 {
    ((u >> 1) as i8) ^ -((u & 1) as i8)
}

#[inline]
pub fn zigzag_encode_i16(v: i16) -> u16 {
    ((v << 1) ^ (v >> 15)) as u16
}

#[inline]
pub fn zigzag_decode_u16(u: u16) -> i16 {
    ((u >> 1) as i16) ^ -((u & 1) as i16)
}

/// Zigzag-encodes a wrapped residual, treating it as a signed `W::BITS`-bit value.
#[inline]
pub fn zigzag<W: Word>(residual: W) -> W {
    let s = residual.to_signed();
    W::from_u32_truncating(((s << 1) ^ (s >> 31)) as u32)
}

/// Inverse of [`zigzag`].
#[inline]
pub fn unzigzag<W: Word>(code: W) -> W {
    let u = code.to_u32();
    W::from_u32_truncating((u >> 1) ^ (u & 1).wrapping_neg())
}
