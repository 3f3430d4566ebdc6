//! Framing for the entropy stage.
//!
//! The body is cut into frames of at most [`MAX_FRAME_LEN`] bytes, each
//! stored as
//!
//! ```text
//! raw_len u16 LE | stored_len u16 LE | mode u8 | stored_len bytes
//! ```
//!
//! Mode 0 stores the frame verbatim. Mode 1 stores a 128-byte table of 256
//! 4-bit code lengths (symbol `2k` in the low nibble of byte `k`) followed by
//! the LSB-first Huffman bitstream. Mode 1 is used only when it is strictly
//! smaller than the raw frame.

use super::huffman::{histogram, HuffmanTable};
use crate::error::{Error, Result};

pub const MAX_FRAME_LEN: usize = u16::MAX as usize;
pub const FRAME_HEADER_LEN: usize = 5;
pub const TABLE_LEN: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum FrameMode {
    Raw = 0,
    Huffman = 1,
}

pub fn compress_body(body: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(body.len() + body.len() / MAX_FRAME_LEN * FRAME_HEADER_LEN + 8);
    compress_body_into(body, &mut out);
    out
}

pub fn compress_body_into(body: &[u8], out: &mut Vec<u8>) {
    for frame in body.chunks(MAX_FRAME_LEN) {
        write_frame(frame, out);
    }
}

fn write_frame(frame: &[u8], out: &mut Vec<u8>) {
    let hist = histogram(frame);
    let table = HuffmanTable::build(&hist).expect("frames are never empty");
    let coded_len = table.encoded_bits(&hist).div_ceil(8) as usize;
    out.extend_from_slice(&(frame.len() as u16).to_le_bytes());
    if TABLE_LEN + coded_len >= frame.len() {
        out.extend_from_slice(&(frame.len() as u16).to_le_bytes());
        out.push(FrameMode::Raw as u8);
        out.extend_from_slice(frame);
        return;
    }
    out.extend_from_slice(&((TABLE_LEN + coded_len) as u16).to_le_bytes());
    out.push(FrameMode::Huffman as u8);
    let lengths = table.lengths();
    out.extend(lengths.chunks_exact(2).map(|p| p[0] | (p[1] << 4)));
    let start = out.len();
    let coded = table
        .encode_to_vec(frame)
        .expect("table covers every symbol in its frame");
    debug_assert_eq!(coded.len(), coded_len);
    out.extend_from_slice(&coded);
    debug_assert_eq!(out.len() - start, coded_len);
}

pub fn decompress_body(framed: &[u8]) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(framed.len() * 2);
    let mut pos = 0;
    while pos < framed.len() {
        let Some(hdr) = framed.get(pos..pos + FRAME_HEADER_LEN) else {
            return Err(Error::corrupt(pos, "frame header truncated"));
        };
        let raw_len = u16::from_le_bytes([hdr[0], hdr[1]]) as usize;
        let stored_len = u16::from_le_bytes([hdr[2], hdr[3]]) as usize;
        let mode = hdr[4];
        let data_pos = pos + FRAME_HEADER_LEN;
        let Some(data) = framed.get(data_pos..data_pos + stored_len) else {
            return Err(Error::corrupt(pos, "frame data truncated"));
        };
        if raw_len == 0 {
            return Err(Error::corrupt(pos, "empty frame"));
        }
        match mode {
            0 => {
                if stored_len != raw_len {
                    return Err(Error::corrupt(pos + 2, "raw frame length mismatch"));
                }
                out.extend_from_slice(data);
            }
            1 => {
                if stored_len < TABLE_LEN {
                    return Err(Error::corrupt(pos + 2, "Huffman frame shorter than its table"));
                }
                let mut lengths = [0u8; 256];
                for (k, &b) in data[..TABLE_LEN].iter().enumerate() {
                    lengths[2 * k] = b & 0x0f;
                    lengths[2 * k + 1] = b >> 4;
                }
                let table = HuffmanTable::from_lengths(lengths)
                    .map_err(|_| Error::corrupt(data_pos, "invalid code length table"))?;
                let decoded = table.decode(&data[TABLE_LEN..], raw_len).map_err(|e| match e {
                    Error::Corrupt { offset, reason } => {
                        Error::corrupt(data_pos + TABLE_LEN + offset, reason)
                    }
                    other => other,
                })?;
                out.extend_from_slice(&decoded);
            }
            m => return Err(Error::corrupt(pos + 4, format!("unknown frame mode {m}"))),
        }
        pos = data_pos + stored_len;
    }
    Ok(out)
}
