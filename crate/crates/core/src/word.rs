//! Sample element types.
//!
//! The codec operates on unsigned `w`-bit integers with `w` either 8 or 16.
//! All arithmetic on samples (prediction, residuals) wraps modulo `2^w`, so
//! every residual is itself a `w`-bit value.

use std::fmt::Debug;

/// Bits per stored element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BitWidth {
    W8,
    W16,
}

impl BitWidth {
    pub fn from_bits(bits: u32) -> Option<Self> {
        match bits {
            8 => Some(BitWidth::W8),
            16 => Some(BitWidth::W16),
            _ => None,
        }
    }

    #[inline]
    pub const fn bits(self) -> u32 {
        match self {
            BitWidth::W8 => 8,
            BitWidth::W16 => 16,
        }
    }

    #[inline]
    pub const fn bytes(self) -> usize {
        self.bits() as usize / 8
    }

    /// Width of one serialized block-header field, `log2(w)`.
    #[inline]
    pub const fn header_field_bits(self) -> u32 {
        match self {
            BitWidth::W8 => 3,
            BitWidth::W16 => 4,
        }
    }
}

/// An unsigned sample element (`u8` or `u16`).
pub trait Word: Copy + Default + Eq + Debug + Send + Sync + 'static {
    const WIDTH: BitWidth;
    const BITS: u32 = Self::WIDTH.bits();

    fn to_u32(self) -> u32;
    /// Keeps the low `BITS` bits of `v`.
    fn from_u32_truncating(v: u32) -> Self;
    fn wrapping_add(self, rhs: Self) -> Self;
    fn wrapping_sub(self, rhs: Self) -> Self;
    /// Two's-complement reinterpretation as a signed `BITS`-bit value.
    fn to_signed(self) -> i32;

    fn read_le(bytes: &[u8]) -> Self;
    fn write_le(self, out: &mut Vec<u8>);

    #[inline]
    fn from_signed_truncating(v: i32) -> Self {
        Self::from_u32_truncating(v as u32)
    }
}

impl Word for u8 {
    const WIDTH: BitWidth = BitWidth::W8;

    #[inline]
    fn to_u32(self) -> u32 {
        self as u32
    }
    #[inline]
    fn from_u32_truncating(v: u32) -> Self {
        v as u8
    }
    #[inline]
    fn wrapping_add(self, rhs: Self) -> Self {
        u8::wrapping_add(self, rhs)
    }
    #[inline]
    fn wrapping_sub(self, rhs: Self) -> Self {
        u8::wrapping_sub(self, rhs)
    }
    #[inline]
    fn to_signed(self) -> i32 {
        self as i8 as i32
    }
    #[inline]
    fn read_le(bytes: &[u8]) -> Self {
        bytes[0]
    }
    #[inline]
    fn write_le(self, out: &mut Vec<u8>) {
        out.push(self);
    }
}

impl Word for u16 {
    const WIDTH: BitWidth = BitWidth::W16;

    #[inline]
    fn to_u32(self) -> u32 {
        self as u32
    }
    #[inline]
    fn from_u32_truncating(v: u32) -> Self {
        v as u16
    }
    #[inline]
    fn wrapping_add(self, rhs: Self) -> Self {
        u16::wrapping_add(self, rhs)
    }
    #[inline]
    fn wrapping_sub(self, rhs: Self) -> Self {
        u16::wrapping_sub(self, rhs)
    }
    #[inline]
    fn to_signed(self) -> i32 {
        self as i16 as i32
    }
    #[inline]
    fn read_le(bytes: &[u8]) -> Self {
        u16::from_le_bytes([bytes[0], bytes[1]])
    }
    #[inline]
    fn write_le(self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.to_le_bytes());
    }
}
