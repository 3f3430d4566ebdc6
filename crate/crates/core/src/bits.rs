//! LSB-first bit streams. The first bit written lands in bit 0 of the first byte.

use crate::error::{Error, Result};

#[derive(Debug, Default)]
pub struct BitWriter {
    out: Vec<u8>,
    acc: u64,
    nbits: u32,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bytes: usize) -> Self {
        BitWriter {
            out: Vec::with_capacity(bytes),
            ..Self::default()
        }
    }

    /// Appends the low `n` bits of `value`. `n` must be at most 32.
    #[inline]
    pub fn write(&mut self, value: u32, n: u32) {
        debug_assert!(n <= 32);
        debug_assert!(n == 32 || value >> n == 0, "value {value} wider than {n} bits");
        if n == 0 {
            return;
        }
        self.acc |= (value as u64) << self.nbits;
        self.nbits += n;
        while self.nbits >= 8 {
            self.out.push(self.acc as u8);
            self.acc >>= 8;
            self.nbits -= 8;
        }
    }

    /// Pads with zero bits to the next byte boundary.
    #[inline]
    pub fn align(&mut self) {
        if self.nbits > 0 {
            self.out.push(self.acc as u8);
            self.acc = 0;
            self.nbits = 0;
        }
    }

    pub fn bits_written(&self) -> usize {
        self.out.len() * 8 + self.nbits as usize
    }

    pub fn finish(mut self) -> Vec<u8> {
        self.align();
        self.out
    }

    /// Flushes into an existing buffer, padding the final byte.
    pub fn finish_into(mut self, dst: &mut Vec<u8>) {
        self.align();
        dst.extend_from_slice(&self.out);
    }
}

#[derive(Debug, Clone)]
pub struct BitReader<'a> {
    data: &'a [u8],
    pos: usize,
    acc: u64,
    nbits: u32,
}

impl<'a> BitReader<'a> {
    pub fn new(data: &'a [u8]) -> Self {
        BitReader {
            data,
            pos: 0,
            acc: 0,
            nbits: 0,
        }
    }

    #[inline]
    fn refill(&mut self) {
        while self.nbits <= 56 && self.pos < self.data.len() {
            self.acc |= (self.data[self.pos] as u64) << self.nbits;
            self.pos += 1;
            self.nbits += 8;
        }
    }

    /// Reads `n <= 32` bits, failing if the input is exhausted.
    #[inline]
    pub fn read(&mut self, n: u32) -> Result<u32> {
        debug_assert!(n <= 32);
        if n == 0 {
            return Ok(0);
        }
        if self.nbits < n {
            self.refill();
            if self.nbits < n {
                return Err(Error::corrupt(self.byte_pos(), "bitstream truncated"));
            }
        }
        let v = (self.acc & ((1u64 << n) - 1)) as u32;
        self.acc >>= n;
        self.nbits -= n;
        Ok(v)
    }

    /// Returns up to `n` upcoming bits without consuming them, zero-filled
    /// past the end of input, along with how many of them are real.
    #[inline]
    pub fn peek(&mut self, n: u32) -> (u32, u32) {
        debug_assert!(n <= 32);
        if self.nbits < n {
            self.refill();
        }
        let avail = self.nbits.min(n);
        ((self.acc & ((1u64 << n) - 1)) as u32, avail)
    }

    #[inline]
    pub fn consume(&mut self, n: u32) {
        debug_assert!(n <= self.nbits);
        self.acc >>= n;
        self.nbits -= n;
    }

    /// Discards the bits remaining in the current partial byte.
    pub fn align(&mut self) {
        let drop = self.nbits % 8;
        self.acc >>= drop;
        self.nbits -= drop;
    }

    /// Index of the first byte not yet fully consumed.
    pub fn byte_pos(&self) -> usize {
        self.pos - (self.nbits / 8) as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lsb_first_order() {
        let mut w = BitWriter::new();
        w.write(1, 1);
        w.write(0, 1);
        w.write(0b11, 2);
        w.write(0xf, 4);
        w.write(0x1ff, 9);
        let bytes = w.finish();
        assert_eq!(bytes, vec![0b1111_1101, 0xff, 0x01]);

        let mut r = BitReader::new(&bytes);
        assert_eq!(r.read(1).unwrap(), 1);
        assert_eq!(r.read(1).unwrap(), 0);
        assert_eq!(r.read(2).unwrap(), 3);
        assert_eq!(r.read(4).unwrap(), 0xf);
        assert_eq!(r.read(9).unwrap(), 0x1ff);
        r.align();
        assert_eq!(r.byte_pos(), 3);
        assert!(r.read(1).is_err());
    }

    #[test]
    fn align_pads_with_zeros() {
        let mut w = BitWriter::new();
        w.write(0b101, 3);
        w.align();
        w.write(0xab, 8);
        assert_eq!(w.bits_written(), 16);
        assert_eq!(w.finish(), vec![0b101, 0xab]);
    }

    #[test]
    fn wide_values() {
        let mut w = BitWriter::new();
        for i in 0..100u32 {
            w.write(i.wrapping_mul(0x9e37_79b9), 32);
            w.write(i & 0x7, 3);
        }
        let bytes = w.finish();
        let mut r = BitReader::new(&bytes);
        for i in 0..100u32 {
            assert_eq!(r.read(32).unwrap(), i.wrapping_mul(0x9e37_79b9));
            assert_eq!(r.read(3).unwrap(), i & 0x7);
        }
    }
}
