//! MSB-first bit packing.

/// Accumulates bits most-significant first.
#[derive(Debug, Default)]
pub struct BitWriter {
    bytes: Vec<u8>,
    acc: u64,
    nbits: u32,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends the low `len` bits of `value`, high bit first. `len <= 32`.
    #[inline]
    pub fn put(&mut self, value: u32, len: u32) {
        debug_assert!(len <= 32);
        if len == 0 {
            return;
        }
        let mask = if len == 32 {
            u32::MAX
        } else {
            (1u32 << len) - 1
        };
        self.acc = (self.acc << len) | u64::from(value & mask);
        self.nbits += len;
        while self.nbits >= 8 {
            self.nbits -= 8;
            self.bytes.push((self.acc >> self.nbits) as u8);
        }
        self.acc &= (1u64 << self.nbits) - 1;
    }

    pub fn bit_len(&self) -> usize {
        self.bytes.len() * 8 + self.nbits as usize
    }

    /// Pads the final partial byte with 1 bits and returns the buffer.
    pub fn finish(mut self) -> Vec<u8> {
        if self.nbits > 0 {
            let pad = 8 - self.nbits;
            self.put((1 << pad) - 1, pad);
        }
        self.bytes
    }
}

/// Reads bits most-significant first from a byte slice.
#[derive(Debug, Clone)]
pub struct BitReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    /// Current offset in bits from the start of the slice.
    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn remaining(&self) -> usize {
        self.bytes.len() * 8 - self.pos
    }

    #[inline]
    pub fn bit(&mut self) -> Option<u32> {
        let byte = *self.bytes.get(self.pos / 8)?;
        let b = (byte >> (7 - (self.pos % 8))) & 1;
        self.pos += 1;
        Some(u32::from(b))
    }

    /// Reads `len <= 32` bits as an unsigned value.
    pub fn bits(&mut self, len: u32) -> Option<u32> {
        if len as usize > self.remaining() {
            return None;
        }
        let mut v = 0u32;
        for _ in 0..len {
            v = (v << 1) | self.bit()?;
        }
        Some(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn msb_first_with_one_fill() {
        let mut w = BitWriter::new();
        w.put(0b101, 3);
        assert_eq!(w.bit_len(), 3);
        assert_eq!(w.finish(), vec![0b1011_1111]);
    }

    #[test]
    fn crosses_byte_boundary() {
        let mut w = BitWriter::new();
        w.put(0xABC, 12);
        w.put(0, 4);
        assert_eq!(w.finish(), vec![0xAB, 0xC0]);
    }

    proptest! {
        #[test]
        fn read_back(fields in proptest::collection::vec((any::<u32>(), 0u32..=32), 0..50)) {
            let mut w = BitWriter::new();
            for &(v, len) in &fields {
                w.put(v, len);
            }
            let bytes = w.finish();
            let mut r = BitReader::new(&bytes);
            for &(v, len) in &fields {
                let mask = if len == 32 { u32::MAX } else { (1u32 << len) - 1 };
                prop_assert_eq!(r.bits(len), Some(v & mask));
            }
            prop_assert!(r.remaining() < 8);
        }
    }
}
