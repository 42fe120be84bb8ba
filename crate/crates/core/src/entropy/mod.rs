//! Differential DC coding, run/size AC symbols, canonical Huffman coding and
//! the `EDC1` container.
//!
//! Layout (multi-byte integers little-endian, payload bits MSB-first):
//!
//! ```text
//! "EDC1" | version u8 | block_size u8 | scheme u8 | quality u8
//! | width u16 | height u16 | mean_r f32 | mean_g f32 | mean_b f32
//! | sigma f32 | canny_low f32 | canny_high f32
//! | min_edge_pixels u16 | blocks_x u16 | blocks_y u16
//! | classification bitmap, ceil(blocks/8) bytes, MSB-first, zero-padded
//! | 4 tables (DC luma, AC luma, DC chroma, AC chroma), each 16 counts + symbols
//! | 3 plane payloads (Y, Cb, Cr), each u32 byte length + bits, 1-filled
//! ```
//!
//! Per block the payload holds the DC delta from the previous block of the
//! same plane (first block predicted from 0) as a size category plus
//! amplitude bits. Edge blocks follow with `(run << 4) | size` AC symbols,
//! `0xF0` for sixteen zeros and `0x00` as end-of-block when trailing zeros
//! remain. Non-edge blocks carry no AC symbols.

pub mod bits;
pub mod huffman;

use bits::{BitReader, BitWriter};
use huffman::{Decoder, Encoder, HuffmanTable, SymbolFault, TableFault};

use crate::quant::{Quality, QuantizedBlock};
use crate::scheme::{ClassificationMap, Scheme};
use crate::transform::BlockSize;

pub const MAGIC: &[u8; 4] = b"EDC1";
pub const VERSION: u8 = 1;
/// Bytes before the classification bitmap.
pub const HEADER_LEN: usize = 42;

const EOB: u8 = 0x00;
const ZRL: u8 = 0xF0;
const MAX_DC_SIZE: u32 = 16;
const MAX_AC_SIZE: u32 = 15;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EncodeError {
    #[error("plane {plane} has {found} blocks, header grid needs {expected}")]
    BlockCount {
        plane: usize,
        expected: usize,
        found: usize,
    },
    #[error("plane {plane} block {block} has the wrong block size")]
    BlockSize { plane: usize, block: usize },
    #[error(
        "classification map is {found_x}x{found_y} blocks, header says {expected_x}x{expected_y}"
    )]
    MapMismatch {
        expected_x: usize,
        expected_y: usize,
        found_x: usize,
        found_y: usize,
    },
    #[error("header block grid {blocks_x}x{blocks_y} does not cover {width}x{height} at N={n}")]
    HeaderGrid {
        width: u16,
        height: u16,
        n: usize,
        blocks_x: u16,
        blocks_y: u16,
    },
    #[error("plane {plane} block {block} is non-edge but carries AC coefficients")]
    AcInNonEdgeBlock { plane: usize, block: usize },
    #[error("value {value} needs {size} amplitude bits, limit is {limit}")]
    AmplitudeTooLarge { value: i64, size: u32, limit: u32 },
    #[error("symbol {symbol:#04x} has no Huffman code")]
    MissingCode { symbol: u8 },
}

/// Bitstream decode failures. Offsets are in bits from the start of the stream.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecodeError {
    #[error("bad magic")]
    BadMagic,
    #[error("unsupported version {0}")]
    UnsupportedVersion(u8),
    #[error("truncated stream at bit {bit_offset}")]
    Truncated { bit_offset: usize },
    #[error("invalid header field {field} at bit {bit_offset}")]
    InvalidHeader {
        field: &'static str,
        bit_offset: usize,
    },
    #[error("invalid Huffman table {table} at bit {bit_offset}: {fault:?}")]
    InvalidTable {
        table: usize,
        fault: TableFault,
        bit_offset: usize,
    },
    #[error("invalid Huffman code at bit {bit_offset}")]
    InvalidCode { bit_offset: usize },
    #[error("invalid symbol {symbol:#04x} at bit {bit_offset}")]
    InvalidSymbol { symbol: u8, bit_offset: usize },
    #[error("run past block end at bit {bit_offset}")]
    RunPastBlockEnd { bit_offset: usize },
    #[error("DC value out of range at bit {bit_offset}")]
    DcOverflow { bit_offset: usize },
    #[error("bad plane padding at bit {bit_offset}")]
    BadPadding { bit_offset: usize },
    #[error("{count} trailing bytes at bit {bit_offset}")]
    TrailingBytes { count: usize, bit_offset: usize },
}

impl DecodeError {
    /// Bit position of the failure, when it has one.
    pub fn bit_offset(&self) -> Option<usize> {
        match *self {
            DecodeError::BadMagic | DecodeError::UnsupportedVersion(_) => Some(0),
            DecodeError::Truncated { bit_offset }
            | DecodeError::InvalidHeader { bit_offset, .. }
            | DecodeError::InvalidTable { bit_offset, .. }
            | DecodeError::InvalidCode { bit_offset }
            | DecodeError::InvalidSymbol { bit_offset, .. }
            | DecodeError::RunPastBlockEnd { bit_offset }
            | DecodeError::DcOverflow { bit_offset }
            | DecodeError::BadPadding { bit_offset }
            | DecodeError::TrailingBytes { bit_offset, .. } => Some(bit_offset),
        }
    }
}

/// Fixed-size stream header.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Header {
    pub block_size: BlockSize,
    pub scheme: Scheme,
    pub quality: Quality,
    pub width: u16,
    pub height: u16,
    pub mean_r: f32,
    pub mean_g: f32,
    pub mean_b: f32,
    pub sigma: f32,
    pub canny_low: f32,
    pub canny_high: f32,
    pub min_edge_pixels: u16,
    pub blocks_x: u16,
    pub blocks_y: u16,
}

impl Header {
    pub fn block_count(&self) -> usize {
        usize::from(self.blocks_x) * usize::from(self.blocks_y)
    }

    pub fn pixel_count(&self) -> usize {
        usize::from(self.width) * usize::from(self.height)
    }

    pub fn means(&self) -> [f64; 3] {
        [self.mean_r, self.mean_g, self.mean_b].map(f64::from)
    }

    fn grid_consistent(&self) -> bool {
        let n = self.block_size.get();
        self.width > 0
            && self.height > 0
            && usize::from(self.blocks_x) == usize::from(self.width).div_ceil(n)
            && usize::from(self.blocks_y) == usize::from(self.height).div_ceil(n)
    }

    fn write_to(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(MAGIC);
        out.push(VERSION);
        out.push(self.block_size.get() as u8);
        out.push(self.scheme.tag());
        out.push(self.quality.get());
        out.extend_from_slice(&self.width.to_le_bytes());
        out.extend_from_slice(&self.height.to_le_bytes());
        for v in [
            self.mean_r,
            self.mean_g,
            self.mean_b,
            self.sigma,
            self.canny_low,
            self.canny_high,
        ] {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out.extend_from_slice(&self.min_edge_pixels.to_le_bytes());
        out.extend_from_slice(&self.blocks_x.to_le_bytes());
        out.extend_from_slice(&self.blocks_y.to_le_bytes());
    }

    fn read_from(bytes: &[u8]) -> Result<Self, DecodeError> {
        if bytes.len() < MAGIC.len() || &bytes[..4] != MAGIC {
            return Err(DecodeError::BadMagic);
        }
        if bytes.len() < HEADER_LEN {
            return Err(DecodeError::Truncated {
                bit_offset: bytes.len() * 8,
            });
        }
        if bytes[4] != VERSION {
            return Err(DecodeError::UnsupportedVersion(bytes[4]));
        }
        let bad = |field, byte: usize| DecodeError::InvalidHeader {
            field,
            bit_offset: byte * 8,
        };
        let u16_at = |i: usize| u16::from_le_bytes([bytes[i], bytes[i + 1]]);
        let f32_at =
            |i: usize| f32::from_le_bytes([bytes[i], bytes[i + 1], bytes[i + 2], bytes[i + 3]]);
        let block_size = BlockSize::from_edge(usize::from(bytes[5])).ok_or(bad("block_size", 5))?;
        let scheme = Scheme::from_tag(bytes[6]).ok_or(bad("scheme", 6))?;
        let quality = Quality::new(i64::from(bytes[7])).map_err(|_| bad("quality", 7))?;
        let header = Header {
            block_size,
            scheme,
            quality,
            width: u16_at(8),
            height: u16_at(10),
            mean_r: f32_at(12),
            mean_g: f32_at(16),
            mean_b: f32_at(20),
            sigma: f32_at(24),
            canny_low: f32_at(28),
            canny_high: f32_at(32),
            min_edge_pixels: u16_at(36),
            blocks_x: u16_at(38),
            blocks_y: u16_at(40),
        };
        if header.width == 0 {
            return Err(bad("width", 8));
        }
        if header.height == 0 {
            return Err(bad("height", 10));
        }
        for (i, m) in [header.mean_r, header.mean_g, header.mean_b]
            .into_iter()
            .enumerate()
        {
            if !(0.0..=255.0).contains(&m) {
                return Err(bad("mean", 12 + 4 * i));
            }
        }
        if !header.grid_consistent() {
            return Err(bad("blocks", 38));
        }
        Ok(header)
    }
}

/// A serialized stream together with its parsed header.
#[derive(Debug, Clone, PartialEq)]
pub struct CompressedImage {
    header: Header,
    bytes: Vec<u8>,
}

impl CompressedImage {
    /// Wraps raw bytes after checking the header only.
    pub fn from_bytes(bytes: Vec<u8>) -> Result<Self, DecodeError> {
        let header = Header::read_from(&bytes)?;
        Ok(Self { header, bytes })
    }

    pub fn header(&self) -> &Header {
        &self.header
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }

    /// Total serialized size in bits.
    pub fn bit_len(&self) -> usize {
        self.bytes.len() * 8
    }

    pub fn bpp(&self) -> f64 {
        self.bit_len() as f64 / self.header.pixel_count() as f64
    }

    pub fn cr(&self) -> f64 {
        24.0 / self.bpp()
    }
}

/// Everything recovered from a stream.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodedStream {
    pub header: Header,
    pub map: ClassificationMap,
    /// Y, Cb, Cr block sequences, row-major.
    pub planes: [Vec<QuantizedBlock>; 3],
}

#[inline]
fn magnitude_size(v: i64) -> u32 {
    64 - v.unsigned_abs().leading_zeros()
}

/// Amplitude bits for `v` in `size` bits: negatives are stored as `v - 1`.
#[inline]
fn amplitude_bits(v: i64, size: u32) -> u32 {
    if v >= 0 {
        v as u32
    } else {
        ((v - 1) & ((1i64 << size) - 1)) as u32
    }
}

#[inline]
fn extend(bits: u32, size: u32) -> i64 {
    if size == 0 {
        return 0;
    }
    let b = i64::from(bits);
    if b < 1i64 << (size - 1) {
        b - (1i64 << size) + 1
    } else {
        b
    }
}

/// Size category and amplitude bits of one value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Coded {
    symbol: u8,
    extra: u32,
    extra_len: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Token {
    Dc(Coded),
    Ac(Coded),
}

fn tokenize_plane(
    plane: usize,
    blocks: &[QuantizedBlock],
    map: &ClassificationMap,
    out: &mut Vec<Token>,
) -> Result<(), EncodeError> {
    let mut prev = 0i64;
    for (b, qb) in blocks.iter().enumerate() {
        let dc = i64::from(qb.dc());
        let delta = dc - prev;
        prev = dc;
        let size = magnitude_size(delta);
        if size > MAX_DC_SIZE {
            return Err(EncodeError::AmplitudeTooLarge {
                value: delta,
                size,
                limit: MAX_DC_SIZE,
            });
        }
        out.push(Token::Dc(Coded {
            symbol: size as u8,
            extra: amplitude_bits(delta, size),
            extra_len: size,
        }));

        let ac = qb.ac();
        if !map.is_edge(b) {
            if ac.iter().any(|&v| v != 0) {
                return Err(EncodeError::AcInNonEdgeBlock { plane, block: b });
            }
            continue;
        }
        let mut run = 0u32;
        for &v in ac {
            if v == 0 {
                run += 1;
                continue;
            }
            while run > 15 {
                out.push(Token::Ac(Coded {
                    symbol: ZRL,
                    extra: 0,
                    extra_len: 0,
                }));
                run -= 16;
            }
            let v = i64::from(v);
            let size = magnitude_size(v);
            if size > MAX_AC_SIZE {
                return Err(EncodeError::AmplitudeTooLarge {
                    value: v,
                    size,
                    limit: MAX_AC_SIZE,
                });
            }
            out.push(Token::Ac(Coded {
                symbol: ((run << 4) | size) as u8,
                extra: amplitude_bits(v, size),
                extra_len: size,
            }));
            run = 0;
        }
        if run > 0 {
            out.push(Token::Ac(Coded {
                symbol: EOB,
                extra: 0,
                extra_len: 0,
            }));
        }
    }
    Ok(())
}

/// Serializes quantized, zigzagged and retained blocks into a stream.
pub fn encode(
    planes: &[Vec<QuantizedBlock>; 3],
    map: &ClassificationMap,
    header: &Header,
) -> Result<CompressedImage, EncodeError> {
    if !header.grid_consistent() {
        return Err(EncodeError::HeaderGrid {
            width: header.width,
            height: header.height,
            n: header.block_size.get(),
            blocks_x: header.blocks_x,
            blocks_y: header.blocks_y,
        });
    }
    let (bx, by) = (usize::from(header.blocks_x), usize::from(header.blocks_y));
    if map.blocks_x() != bx || map.blocks_y() != by {
        return Err(EncodeError::MapMismatch {
            expected_x: bx,
            expected_y: by,
            found_x: map.blocks_x(),
            found_y: map.blocks_y(),
        });
    }
    let expected = header.block_count();
    let mut tokens: [Vec<Token>; 3] = Default::default();
    for (p, blocks) in planes.iter().enumerate() {
        if blocks.len() != expected {
            return Err(EncodeError::BlockCount {
                plane: p,
                expected,
                found: blocks.len(),
            });
        }
        if let Some(b) = blocks.iter().position(|qb| qb.size != header.block_size) {
            return Err(EncodeError::BlockSize { plane: p, block: b });
        }
        tokenize_plane(p, blocks, map, &mut tokens[p])?;
    }

    // histograms: [dc luma, ac luma, dc chroma, ac chroma]
    let mut hist = [[0u64; 256]; 4];
    for (p, plane_tokens) in tokens.iter().enumerate() {
        let base = if p == 0 { 0 } else { 2 };
        for t in plane_tokens {
            match t {
                Token::Dc(c) => hist[base][usize::from(c.symbol)] += 1,
                Token::Ac(c) => hist[base + 1][usize::from(c.symbol)] += 1,
            }
        }
    }
    let tables: Vec<HuffmanTable> = hist.iter().map(HuffmanTable::from_histogram).collect();
    let encoders: Vec<Encoder> = tables.iter().map(Encoder::new).collect();

    let mut out = Vec::new();
    header.write_to(&mut out);
    debug_assert_eq!(out.len(), HEADER_LEN);
    let mut bitmap = BitWriter::new();
    for &bit in map.bits() {
        bitmap.put(u32::from(bit), 1);
    }
    let pad = (8 - bitmap.bit_len() % 8) % 8;
    bitmap.put(0, pad as u32);
    out.extend(bitmap.finish());
    for t in &tables {
        t.write_to(&mut out);
    }
    for (p, plane_tokens) in tokens.iter().enumerate() {
        let base = if p == 0 { 0 } else { 2 };
        let mut w = BitWriter::new();
        for t in plane_tokens {
            let (enc, c) = match t {
                Token::Dc(c) => (&encoders[base], c),
                Token::Ac(c) => (&encoders[base + 1], c),
            };
            if !enc.emit(&mut w, c.symbol) {
                return Err(EncodeError::MissingCode { symbol: c.symbol });
            }
            w.put(c.extra, c.extra_len);
        }
        let payload = w.finish();
        out.extend_from_slice(&(payload.len() as u32).to_le_bytes());
        out.extend_from_slice(&payload);
    }
    Ok(CompressedImage {
        header: *header,
        bytes: out,
    })
}

struct PlaneDecoder<'a> {
    dc: &'a Decoder,
    ac: &'a Decoder,
    reader: BitReader<'a>,
    base_bits: usize,
}

impl PlaneDecoder<'_> {
    fn offset(&self) -> usize {
        self.base_bits + self.reader.position()
    }

    fn symbol(&mut self, ac: bool) -> Result<u8, DecodeError> {
        let at = self.offset();
        let table = if ac { self.ac } else { self.dc };
        table.decode(&mut self.reader).map_err(|f| match f {
            SymbolFault::Truncated => DecodeError::Truncated { bit_offset: at },
            SymbolFault::InvalidCode => DecodeError::InvalidCode { bit_offset: at },
        })
    }

    fn amplitude(&mut self, size: u32) -> Result<i64, DecodeError> {
        let at = self.offset();
        let bits = self
            .reader
            .bits(size)
            .ok_or(DecodeError::Truncated { bit_offset: at })?;
        Ok(extend(bits, size))
    }

    fn block(
        &mut self,
        size: BlockSize,
        is_edge: bool,
        prev_dc: &mut i32,
    ) -> Result<QuantizedBlock, DecodeError> {
        let mut qb = QuantizedBlock::zeros(size);
        let at = self.offset();
        let s = self.symbol(false)?;
        if u32::from(s) > MAX_DC_SIZE {
            return Err(DecodeError::InvalidSymbol {
                symbol: s,
                bit_offset: at,
            });
        }
        let delta = self.amplitude(u32::from(s))?;
        let dc = i64::from(*prev_dc) + delta;
        *prev_dc = i32::try_from(dc).map_err(|_| DecodeError::DcOverflow { bit_offset: at })?;
        qb.values[0] = *prev_dc;
        if !is_edge {
            return Ok(qb);
        }
        let area = size.area();
        let mut pos = 1;
        while pos < area {
            let at = self.offset();
            let sym = self.symbol(true)?;
            let run = usize::from(sym >> 4);
            let sz = u32::from(sym & 0x0F);
            if sz == 0 {
                match sym {
                    EOB => break,
                    ZRL => {
                        pos += 16;
                        if pos >= area {
                            return Err(DecodeError::RunPastBlockEnd { bit_offset: at });
                        }
                        continue;
                    }
                    _ => {
                        return Err(DecodeError::InvalidSymbol {
                            symbol: sym,
                            bit_offset: at,
                        })
                    }
                }
            }
            pos += run;
            if pos >= area {
                return Err(DecodeError::RunPastBlockEnd { bit_offset: at });
            }
            // size <= 15 so the value always fits
            qb.values[pos] = self.amplitude(sz)? as i32;
            pos += 1;
        }
        Ok(qb)
    }
}

/// Parses a complete stream.
pub fn decode(bytes: &[u8]) -> Result<DecodedStream, DecodeError> {
    let header = Header::read_from(bytes)?;
    let blocks = header.block_count();
    let truncated = |at: usize| DecodeError::Truncated { bit_offset: at * 8 };

    let mut pos = HEADER_LEN;
    let bitmap_len = blocks.div_ceil(8);
    let bitmap = bytes
        .get(pos..pos + bitmap_len)
        .ok_or(truncated(bytes.len()))?;
    let mut r = BitReader::new(bitmap);
    let bits: Vec<bool> = (0..blocks).map(|_| r.bit() == Some(1)).collect();
    if r.bits(r.remaining() as u32) != Some(0) {
        return Err(DecodeError::InvalidHeader {
            field: "bitmap padding",
            bit_offset: pos * 8 + blocks,
        });
    }
    let map = ClassificationMap::from_bits(
        usize::from(header.blocks_x),
        usize::from(header.blocks_y),
        bits,
    );
    pos += bitmap_len;

    let mut decoders = Vec::with_capacity(4);
    for table in 0..4 {
        let (t, used) = HuffmanTable::read_from(&bytes[pos..]).ok_or(truncated(bytes.len()))?;
        t.validate().map_err(|fault| DecodeError::InvalidTable {
            table,
            fault,
            bit_offset: pos * 8,
        })?;
        decoders.push(Decoder::new(&t));
        pos += used;
    }

    let mut planes: [Vec<QuantizedBlock>; 3] = Default::default();
    for (p, plane) in planes.iter_mut().enumerate() {
        let len_bytes: [u8; 4] = bytes
            .get(pos..pos + 4)
            .ok_or(truncated(bytes.len()))?
            .try_into()
            .expect("slice of four");
        let len = u32::from_le_bytes(len_bytes) as usize;
        pos += 4;
        let payload = bytes
            .get(pos..pos.saturating_add(len))
            .ok_or(truncated(bytes.len()))?;
        // every block costs at least one bit
        if blocks > payload.len() * 8 {
            return Err(truncated(pos + payload.len()));
        }
        let base = if p == 0 { 0 } else { 2 };
        let mut pd = PlaneDecoder {
            dc: &decoders[base],
            ac: &decoders[base + 1],
            reader: BitReader::new(payload),
            base_bits: pos * 8,
        };
        let mut prev = 0i32;
        plane.reserve_exact(blocks);
        for b in 0..blocks {
            plane.push(pd.block(header.block_size, map.is_edge(b), &mut prev)?);
        }
        let rest = pd.reader.remaining();
        let at = pd.offset();
        if rest >= 8 || pd.reader.bits(rest as u32) != Some((1u32 << rest) - 1) {
            return Err(DecodeError::BadPadding { bit_offset: at });
        }
        pos += len;
    }
    if pos != bytes.len() {
        return Err(DecodeError::TrailingBytes {
            count: bytes.len() - pos,
            bit_offset: pos * 8,
        });
    }
    Ok(DecodedStream {
        header,
        map,
        planes,
    })
}
