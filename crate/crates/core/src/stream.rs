//! Self-describing compressed stream.
//!
//! ```text
//! "SPRZ" | version u8 | flags u8 | group u8 | learn_shift u8 | ncols u16 LE
//!        | nsamples u64 LE | body | tail | crc32 u32 LE
//! ```
//!
//! `flags` bit 0 selects FIRE over delta, bit 1 enables the entropy stage,
//! bit 2 selects 16-bit samples. The body is a sequence of header groups,
//! each holding exactly `group` slots: the slots' block headers packed back
//! to back and padded to a byte, followed by the slots' payloads in order. A
//! slot with an all-zero header is a run record whose payload is a u16 LE
//! count of consecutive all-zero-residual blocks; the final group is filled
//! out with zero-count run records. With the entropy flag set, the body is
//! stored through [`crate::entropy::compress_body`]. The tail holds the
//! trailing `nsamples % 8` samples verbatim. The CRC covers every preceding
//! byte.

use crate::block::{BlockDecoder, BlockEncoder};
use crate::config::CodecConfig;
use crate::entropy;
use crate::error::{Error, Result};
use crate::forecast::{AnyForecaster, Forecaster, ForecasterKind, MAX_LEARN_SHIFT};
use crate::pack::{self, BLOCK_ROWS};
use crate::word::{BitWidth, Word};

pub const MAGIC: [u8; 4] = *b"SPRZ";
pub const FORMAT_VERSION: u8 = 1;
pub const HEADER_LEN: usize = 18;
pub const CHECKSUM_LEN: usize = 4;

/// Longest run a single run record can describe.
pub const MAX_RUN_BLOCKS: usize = u16::MAX as usize;

const FLAG_FIRE: u8 = 1 << 0;
const FLAG_ENTROPY: u8 = 1 << 1;
const FLAG_WIDE: u8 = 1 << 2;

// Upper bound on output preallocated from an untrusted sample count.
const MAX_PREALLOC: usize = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamHeader {
    pub version: u8,
    pub config: CodecConfig,
    pub nsamples: u64,
}

impl StreamHeader {
    pub fn new(config: CodecConfig, nsamples: u64) -> Self {
        StreamHeader {
            version: FORMAT_VERSION,
            config,
            nsamples,
        }
    }

    pub fn write(&self, out: &mut Vec<u8>) {
        let c = &self.config;
        let mut flags = 0;
        if c.forecaster == ForecasterKind::Fire {
            flags |= FLAG_FIRE;
        }
        if c.entropy {
            flags |= FLAG_ENTROPY;
        }
        if c.width == BitWidth::W16 {
            flags |= FLAG_WIDE;
        }
        out.extend_from_slice(&MAGIC);
        out.push(self.version);
        out.push(flags);
        out.push(c.group_size);
        out.push(c.learn_shift);
        out.extend_from_slice(&(c.ncols as u16).to_le_bytes());
        out.extend_from_slice(&self.nsamples.to_le_bytes());
    }

    pub fn parse(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEADER_LEN {
            return Err(Error::corrupt(bytes.len(), "stream header truncated"));
        }
        if bytes[..4] != MAGIC {
            return Err(Error::corrupt(0, "bad magic"));
        }
        let version = bytes[4];
        if version != FORMAT_VERSION {
            return Err(Error::corrupt(4, format!("unsupported format version {version}")));
        }
        let flags = bytes[5];
        if flags & !(FLAG_FIRE | FLAG_ENTROPY | FLAG_WIDE) != 0 {
            return Err(Error::corrupt(5, format!("unknown flag bits {flags:#04x}")));
        }
        let group_size = bytes[6];
        if group_size == 0 {
            return Err(Error::corrupt(6, "zero header group size"));
        }
        let learn_shift = bytes[7];
        if learn_shift > MAX_LEARN_SHIFT {
            return Err(Error::corrupt(
                7,
                format!("learn shift {learn_shift} out of range"),
            ));
        }
        let ncols = u16::from_le_bytes([bytes[8], bytes[9]]) as usize;
        if ncols == 0 {
            return Err(Error::corrupt(8, "zero columns"));
        }
        let nsamples = u64::from_le_bytes(bytes[10..18].try_into().unwrap());
        let config = CodecConfig {
            width: if flags & FLAG_WIDE != 0 {
                BitWidth::W16
            } else {
                BitWidth::W8
            },
            ncols,
            forecaster: if flags & FLAG_FIRE != 0 {
                ForecasterKind::Fire
            } else {
                ForecasterKind::Delta
            },
            entropy: flags & FLAG_ENTROPY != 0,
            group_size,
            learn_shift,
        };
        Ok(StreamHeader {
            version,
            config,
            nsamples,
        })
    }

    /// Size of the decompressed samples in bytes.
    pub fn raw_len(&self) -> Option<u64> {
        self.nsamples
            .checked_mul(self.config.ncols as u64)?
            .checked_mul(self.config.width.bytes() as u64)
    }
}

/// Accumulates slots into header groups.
struct GroupWriter<'a> {
    out: &'a mut Vec<u8>,
    width: BitWidth,
    ncols: usize,
    group_size: usize,
    headers: Vec<u8>,
    payloads: Vec<u8>,
    slots: usize,
}

impl<'a> GroupWriter<'a> {
    fn new(out: &'a mut Vec<u8>, width: BitWidth, ncols: usize, group_size: usize) -> Self {
        GroupWriter {
            out,
            width,
            ncols,
            group_size,
            headers: Vec::with_capacity(group_size * ncols),
            payloads: Vec::new(),
            slots: 0,
        }
    }

    fn push_run(&mut self, nblocks: usize) {
        debug_assert!(nblocks <= MAX_RUN_BLOCKS);
        self.headers.resize(self.headers.len() + self.ncols, 0);
        self.payloads.extend_from_slice(&(nblocks as u16).to_le_bytes());
        self.end_slot();
    }

    /// Pushes a block whose payload has already been appended to `payloads`.
    fn end_slot(&mut self) {
        self.slots += 1;
        if self.slots == self.group_size {
            self.flush();
        }
    }

    fn flush(&mut self) {
        pack::write_headers(self.headers.chunks_exact(self.ncols), self.width, self.out);
        self.out.extend_from_slice(&self.payloads);
        self.headers.clear();
        self.payloads.clear();
        self.slots = 0;
    }

    fn finish(mut self) {
        while self.slots != 0 {
            self.push_run(0);
        }
    }
}

/// Encodes all full blocks of `data` (row-major, `ncols` wide) into header
/// groups, without stream header, tail, or entropy coding.
pub fn encode_body<W: Word, F: Forecaster<W>>(data: &[W], group_size: usize, forecaster: F) -> Vec<u8> {
    let d = forecaster.ncols();
    let block_len = BLOCK_ROWS * d;
    let nblocks = data.len() / block_len;
    let mut out = Vec::with_capacity(nblocks * block_len * W::WIDTH.bytes() / 2 + 16);
    let mut groups = GroupWriter::new(&mut out, W::WIDTH, d, group_size);
    let mut enc = BlockEncoder::new(forecaster);
    let mut nbits = vec![0u8; d];
    let mut run = 0usize;

    for block in data.chunks_exact(block_len) {
        if enc.encode_block(block, &mut nbits, &mut groups.payloads) {
            if run > 0 {
                // The block's payload went in first; move it behind the run record.
                let payload_start = groups.payloads.len() - pack::payload_len(&nbits, enc.layout());
                let payload = groups.payloads.split_off(payload_start);
                groups.push_run(run);
                run = 0;
                groups.payloads.extend_from_slice(&payload);
            }
            groups.headers.extend_from_slice(&nbits);
            groups.end_slot();
        } else {
            run += 1;
            if run == MAX_RUN_BLOCKS {
                groups.push_run(run);
                run = 0;
            }
        }
    }
    if run > 0 {
        groups.push_run(run);
    }
    groups.finish();
    out
}

/// Decodes `nblocks` blocks from a body produced by [`encode_body`],
/// appending samples to `out`. `base` is added to reported error offsets.
pub fn decode_body<W: Word, F: Forecaster<W>>(
    body: &[u8],
    nblocks: usize,
    group_size: usize,
    forecaster: F,
    base: usize,
    out: &mut Vec<W>,
) -> Result<()> {
    let d = forecaster.ncols();
    let block_len = BLOCK_ROWS * d;
    let mut dec = BlockDecoder::new(forecaster);
    let mut headers = vec![0u8; group_size * d];
    let mut pos = 0usize;
    let mut done = 0usize;

    while done < nblocks {
        let used = pack::read_headers(&body[pos..], group_size, d, W::WIDTH, &mut headers)
            .map_err(|e| shift_offset(e, base + pos))?;
        pos += used;
        for nbits in headers.chunks_exact(d) {
            let slot_pos = base + pos;
            if nbits.iter().all(|&n| n == 0) {
                let Some(count) = body.get(pos..pos + 2) else {
                    return Err(Error::corrupt(slot_pos, "run record truncated"));
                };
                let count = u16::from_le_bytes([count[0], count[1]]) as usize;
                pos += 2;
                if done == nblocks {
                    if count != 0 {
                        return Err(Error::corrupt(slot_pos, "run past end of stream"));
                    }
                    continue;
                }
                if count == 0 || count > nblocks - done {
                    return Err(Error::corrupt(slot_pos, format!("invalid run length {count}")));
                }
                dec.decode_run(count, out);
                done += count;
            } else {
                if done == nblocks {
                    return Err(Error::corrupt(slot_pos, "block past end of stream"));
                }
                let start = out.len();
                out.resize(start + block_len, W::default());
                let used = dec
                    .decode_block(nbits, &body[pos..], &mut out[start..])
                    .map_err(|e| shift_offset(e, slot_pos))?;
                pos += used;
                done += 1;
            }
        }
    }
    if pos != body.len() {
        return Err(Error::corrupt(
            base + pos,
            "trailing bytes after last header group",
        ));
    }
    Ok(())
}

fn shift_offset(e: Error, by: usize) -> Error {
    match e {
        Error::Corrupt { offset, reason } => Error::Corrupt {
            offset: offset + by,
            reason,
        },
        other => other,
    }
}

/// Compresses `data`, a row-major `nsamples x config.ncols` matrix.
pub fn compress<W: Word>(data: &[W], config: &CodecConfig) -> Result<Vec<u8>> {
    config.validate()?;
    if config.width != W::WIDTH {
        return Err(Error::InvalidConfig(format!(
            "config width {} does not match {}-bit samples",
            config.width.bits(),
            W::BITS
        )));
    }
    let d = config.ncols;
    if data.len() % d != 0 {
        return Err(Error::Shape(format!(
            "{} values is not a multiple of {d} columns",
            data.len()
        )));
    }
    let nsamples = (data.len() / d) as u64;
    let full = data.len() - data.len() % (BLOCK_ROWS * d);
    let forecaster = AnyForecaster::<W>::new(config.forecaster, d, config.learn_shift);
    let body = encode_body(&data[..full], config.group_size as usize, forecaster);

    let mut out = Vec::with_capacity(HEADER_LEN + body.len() + CHECKSUM_LEN);
    StreamHeader::new(*config, nsamples).write(&mut out);
    if config.entropy {
        entropy::compress_body_into(&body, &mut out);
    } else {
        out.extend_from_slice(&body);
    }
    for &v in &data[full..] {
        v.write_le(&mut out);
    }
    let crc = crc32fast::hash(&out);
    out.extend_from_slice(&crc.to_le_bytes());
    Ok(out)
}

/// Checks framing and checksum; returns the header and the body and tail slices.
fn split_stream(bytes: &[u8]) -> Result<(StreamHeader, &[u8], &[u8])> {
    let header = StreamHeader::parse(bytes)?;
    if bytes.len() < HEADER_LEN + CHECKSUM_LEN {
        return Err(Error::corrupt(bytes.len(), "stream truncated"));
    }
    let (content, crc) = bytes.split_at(bytes.len() - CHECKSUM_LEN);
    let stored = u32::from_le_bytes(crc.try_into().unwrap());
    let computed = crc32fast::hash(content);
    if stored != computed {
        return Err(Error::Checksum { stored, computed });
    }
    let c = &header.config;
    let tail_len = (header.nsamples % BLOCK_ROWS as u64) as usize * c.ncols * c.width.bytes();
    if content.len() < HEADER_LEN + tail_len {
        return Err(Error::corrupt(
            content.len(),
            "stream shorter than its verbatim tail",
        ));
    }
    let (rest, tail) = content.split_at(content.len() - tail_len);
    Ok((header, &rest[HEADER_LEN..], tail))
}

/// Reads only the stream header.
pub fn peek_header(bytes: &[u8]) -> Result<StreamHeader> {
    StreamHeader::parse(bytes)
}

/// Decompresses a stream of `W`-width samples.
pub fn decompress<W: Word>(bytes: &[u8]) -> Result<(StreamHeader, Vec<W>)> {
    let (header, body, tail) = split_stream(bytes)?;
    let c = header.config;
    if c.width != W::WIDTH {
        return Err(Error::InvalidConfig(format!(
            "stream holds {}-bit samples, not {}-bit",
            c.width.bits(),
            W::BITS
        )));
    }
    let d = c.ncols;
    let nblocks = usize::try_from(header.nsamples / BLOCK_ROWS as u64)
        .map_err(|_| Error::corrupt(10, "sample count too large"))?;
    let total = header
        .raw_len()
        .and_then(|n| usize::try_from(n / c.width.bytes() as u64).ok())
        .ok_or_else(|| Error::corrupt(10, "sample count too large"))?;
    let mut out = Vec::with_capacity(total.min(MAX_PREALLOC));

    let decoded_body;
    let (body, base) = if c.entropy {
        decoded_body = entropy::decompress_body(body).map_err(|e| shift_offset(e, HEADER_LEN))?;
        (&decoded_body[..], 0)
    } else {
        (body, HEADER_LEN)
    };
    let forecaster = AnyForecaster::<W>::new(c.forecaster, d, c.learn_shift);
    decode_body(body, nblocks, c.group_size as usize, forecaster, base, &mut out)?;

    out.extend(tail.chunks_exact(W::WIDTH.bytes()).map(W::read_le));
    debug_assert_eq!(out.len(), total);
    Ok((header, out))
}

/// Samples of either width, as stored in a stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Samples {
    U8(Vec<u8>),
    U16(Vec<u16>),
}

impl Samples {
    pub fn len(&self) -> usize {
        match self {
            Samples::U8(v) => v.len(),
            Samples::U16(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Little-endian raw bytes.
    pub fn to_le_bytes(&self) -> Vec<u8> {
        match self {
            Samples::U8(v) => v.clone(),
            Samples::U16(v) => v.iter().flat_map(|x| x.to_le_bytes()).collect(),
        }
    }

    /// Interprets little-endian raw bytes as samples of `width`.
    pub fn from_le_bytes(bytes: &[u8], width: BitWidth) -> Result<Self> {
        match width {
            BitWidth::W8 => Ok(Samples::U8(bytes.to_vec())),
            BitWidth::W16 => {
                if bytes.len() % 2 != 0 {
                    return Err(Error::Shape(format!(
                        "{} bytes is not a whole number of 16-bit samples",
                        bytes.len()
                    )));
                }
                Ok(Samples::U16(
                    bytes
                        .chunks_exact(2)
                        .map(|b| u16::from_le_bytes([b[0], b[1]]))
                        .collect(),
                ))
            }
        }
    }

    pub fn width(&self) -> BitWidth {
        match self {
            Samples::U8(_) => BitWidth::W8,
            Samples::U16(_) => BitWidth::W16,
        }
    }
}

/// Compresses samples of whichever width they hold.
pub fn compress_samples(samples: &Samples, config: &CodecConfig) -> Result<Vec<u8>> {
    match samples {
        Samples::U8(v) => compress(v, config),
        Samples::U16(v) => compress(v, config),
    }
}

/// Decompresses a stream of either width.
pub fn decompress_samples(bytes: &[u8]) -> Result<(StreamHeader, Samples)> {
    let header = StreamHeader::parse(bytes)?;
    match header.config.width {
        BitWidth::W8 => decompress::<u8>(bytes).map(|(h, v)| (h, Samples::U8(v))),
        BitWidth::W16 => decompress::<u16>(bytes).map(|(h, v)| (h, Samples::U16(v))),
    }
}
