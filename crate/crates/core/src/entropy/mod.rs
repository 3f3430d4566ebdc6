//! Byte-oriented canonical Huffman coding of packed bodies.

mod frame;
mod huffman;

pub use frame::{
    compress_body, compress_body_into, decompress_body, FrameMode, FRAME_HEADER_LEN, MAX_FRAME_LEN, TABLE_LEN,
};
pub use huffman::{entropy_bits, histogram, HuffmanTable, MAX_CODE_LEN};
