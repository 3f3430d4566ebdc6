use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::bits::{BitReader, BitWriter};
use crate::error::{Error, Result};

pub const MAX_CODE_LEN: u8 = 15;

pub fn histogram(bytes: &[u8]) -> [u64; 256] {
    let mut h = [0u64; 256];
    for &b in bytes {
        h[b as usize] += 1;
    }
    h
}

/// Shannon entropy of a histogram in bits per symbol.
pub fn entropy_bits(hist: &[u64; 256]) -> f64 {
    let total: u64 = hist.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let total = total as f64;
    hist.iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum()
}

/// Canonical prefix code over byte symbols. Codes are assigned in order of
/// (length, symbol), so the lengths alone determine the table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HuffmanTable {
    lengths: [u8; 256],
    // Codes bit-reversed so they can be emitted LSB-first.
    codes: [u16; 256],
}

impl HuffmanTable {
    /// Builds a length-limited Huffman code for `hist`.
    pub fn build(hist: &[u64; 256]) -> Result<Self> {
        let lengths = code_lengths(hist)?;
        Self::from_lengths(lengths)
    }

    pub fn from_lengths(lengths: [u8; 256]) -> Result<Self> {
        if lengths.iter().any(|&l| l > MAX_CODE_LEN) {
            return Err(Error::corrupt(0, "code length exceeds limit"));
        }
        let kraft: u64 = lengths
            .iter()
            .filter(|&&l| l > 0)
            .map(|&l| 1u64 << (MAX_CODE_LEN - l))
            .sum();
        if kraft == 0 {
            return Err(Error::EmptyHistogram);
        }
        if kraft > 1 << MAX_CODE_LEN {
            return Err(Error::corrupt(0, "code lengths violate the Kraft inequality"));
        }

        let mut bl_count = [0u16; MAX_CODE_LEN as usize + 1];
        for &l in &lengths {
            if l > 0 {
                bl_count[l as usize] += 1;
            }
        }
        let mut next = [0u16; MAX_CODE_LEN as usize + 2];
        let mut code = 0u16;
        for len in 1..=MAX_CODE_LEN as usize {
            code = (code + bl_count[len - 1]) << 1;
            next[len] = code;
        }
        let mut codes = [0u16; 256];
        for (sym, &l) in lengths.iter().enumerate() {
            if l > 0 {
                let c = next[l as usize];
                next[l as usize] += 1;
                codes[sym] = c.reverse_bits() >> (16 - l);
            }
        }
        Ok(HuffmanTable { lengths, codes })
    }

    pub fn lengths(&self) -> &[u8; 256] {
        &self.lengths
    }

    pub fn max_len(&self) -> u8 {
        self.lengths.iter().copied().max().unwrap_or(0)
    }

    /// Total encoded size in bits for data with histogram `hist`.
    pub fn encoded_bits(&self, hist: &[u64; 256]) -> u64 {
        hist.iter().zip(&self.lengths).map(|(&c, &l)| c * l as u64).sum()
    }

    /// Mean code length in bits per symbol, weighted by `hist`.
    pub fn mean_code_len(&self, hist: &[u64; 256]) -> f64 {
        let total: u64 = hist.iter().sum();
        self.encoded_bits(hist) as f64 / total as f64
    }

    pub fn encode(&self, data: &[u8], out: &mut BitWriter) -> Result<()> {
        for &b in data {
            let l = self.lengths[b as usize];
            if l == 0 {
                return Err(Error::MissingSymbol(b));
            }
            out.write(self.codes[b as usize] as u32, l as u32);
        }
        Ok(())
    }

    /// Encodes to a byte vector padded with zero bits.
    pub fn encode_to_vec(&self, data: &[u8]) -> Result<Vec<u8>> {
        let mut w = BitWriter::with_capacity(data.len());
        self.encode(data, &mut w)?;
        Ok(w.finish())
    }

    /// Decodes exactly `n` symbols. Fails if `data` runs out, holds an
    /// unassigned code, or has whole bytes left over.
    pub fn decode(&self, data: &[u8], n: usize) -> Result<Vec<u8>> {
        let lut = self.lookup_table();
        let max = self.max_len() as u32;
        let mut r = BitReader::new(data);
        let mut out = Vec::with_capacity(n);
        let mut consumed_bits = 0usize;
        for _ in 0..n {
            let (bits, avail) = r.peek(max);
            let (sym, len) = lut[bits as usize];
            if len == 0 {
                return Err(Error::corrupt(r.byte_pos(), "invalid Huffman code"));
            }
            if len as u32 > avail {
                return Err(Error::corrupt(data.len(), "Huffman bitstream truncated"));
            }
            r.consume(len as u32);
            consumed_bits += len as usize;
            out.push(sym);
        }
        if consumed_bits.div_ceil(8) != data.len() {
            return Err(Error::corrupt(
                consumed_bits.div_ceil(8),
                "trailing bytes after Huffman bitstream",
            ));
        }
        Ok(out)
    }

    fn lookup_table(&self) -> Vec<(u8, u8)> {
        let max = self.max_len() as usize;
        let mut lut = vec![(0u8, 0u8); 1 << max];
        for sym in 0..256 {
            let l = self.lengths[sym] as usize;
            if l == 0 {
                continue;
            }
            let code = self.codes[sym] as usize;
            for fill in 0..1usize << (max - l) {
                lut[code | (fill << l)] = (sym as u8, l as u8);
            }
        }
        lut
    }
}

/// Optimal code lengths with lengths above [`MAX_CODE_LEN`] rebalanced.
fn code_lengths(hist: &[u64; 256]) -> Result<[u8; 256]> {
    let symbols: Vec<usize> = (0..256).filter(|&s| hist[s] > 0).collect();
    let mut lengths = [0u8; 256];
    match symbols.len() {
        0 => return Err(Error::EmptyHistogram),
        1 => {
            lengths[symbols[0]] = 1;
            return Ok(lengths);
        }
        _ => {}
    }

    // Nodes 0..n are leaves; internal nodes are appended. Ties break on node
    // index so construction is deterministic.
    let mut parent: Vec<usize> = vec![usize::MAX; symbols.len()];
    let mut heap: BinaryHeap<Reverse<(u64, usize)>> = symbols
        .iter()
        .enumerate()
        .map(|(i, &s)| Reverse((hist[s], i)))
        .collect();
    while heap.len() > 1 {
        let Reverse((ca, a)) = heap.pop().unwrap();
        let Reverse((cb, b)) = heap.pop().unwrap();
        let id = parent.len();
        parent.push(usize::MAX);
        parent[a] = id;
        parent[b] = id;
        heap.push(Reverse((ca + cb, id)));
    }
    // Parents always have larger indices, so walk down from the root.
    let mut depth = vec![0u32; parent.len()];
    for i in (0..parent.len() - 1).rev() {
        depth[i] = depth[parent[i]] + 1;
    }
    let mut overflow = false;
    for (i, &s) in symbols.iter().enumerate() {
        let d = depth[i];
        overflow |= d > MAX_CODE_LEN as u32;
        lengths[s] = d.min(MAX_CODE_LEN as u32) as u8;
    }
    if overflow {
        limit_lengths(&mut lengths, hist);
    }
    Ok(lengths)
}

/// Restores the Kraft inequality after clamping lengths to the limit by
/// lengthening the least frequent of the longest still-extendable codes.
fn limit_lengths(lengths: &mut [u8; 256], hist: &[u64; 256]) {
    let unit = |l: u8| 1i64 << (MAX_CODE_LEN - l);
    let mut excess: i64 =
        lengths.iter().filter(|&&l| l > 0).map(|&l| unit(l)).sum::<i64>() - (1 << MAX_CODE_LEN);
    while excess > 0 {
        let pick = (0..256)
            .filter(|&s| lengths[s] > 0 && lengths[s] < MAX_CODE_LEN)
            .max_by_key(|&s| (lengths[s], Reverse(hist[s]), s))
            .expect("a 15-bit limit always admits 256 symbols");
        excess -= unit(lengths[pick] + 1);
        lengths[pick] += 1;
    }
}
