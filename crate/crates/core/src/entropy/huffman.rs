//! Canonical Huffman tables over a byte alphabet, built from symbol counts
//! with the JPEG code-size procedure and its length limiting to 16 bits.

use super::bits::{BitReader, BitWriter};

pub const MAX_CODE_LEN: usize = 16;

/// Canonical table: how many codes of each length 1..=16, then the symbols
/// in code order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct HuffmanTable {
    pub counts: [u8; MAX_CODE_LEN],
    pub symbols: Vec<u8>,
}

/// Why a table read from a stream is unusable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFault {
    CountMismatch,
    KraftViolated,
    DuplicateSymbol,
}

/// Why a symbol could not be decoded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolFault {
    Truncated,
    InvalidCode,
}

impl HuffmanTable {
    /// Builds an optimal length-limited table for the given symbol counts.
    ///
    /// Symbols with a zero count get no code. An all-zero histogram yields
    /// an empty table.
    pub fn from_histogram(freq: &[u64; 256]) -> Self {
        // Slot 256 is a reserved symbol with count 1, which guarantees no
        // real symbol is assigned the all-ones code.
        let mut f = [0u64; 257];
        f[..256].copy_from_slice(freq);
        f[256] = 1;
        let mut code_size = [0usize; 257];
        let mut others = [usize::MAX; 257];

        loop {
            let mut c1 = None;
            let mut v = u64::MAX;
            for (i, &fi) in f.iter().enumerate() {
                if fi > 0 && fi <= v {
                    v = fi;
                    c1 = Some(i);
                }
            }
            let Some(mut c1) = c1 else { break };
            let mut c2 = None;
            v = u64::MAX;
            for (i, &fi) in f.iter().enumerate() {
                if fi > 0 && fi <= v && i != c1 {
                    v = fi;
                    c2 = Some(i);
                }
            }
            let Some(mut c2) = c2 else { break };

            f[c1] += f[c2];
            f[c2] = 0;
            code_size[c1] += 1;
            while others[c1] != usize::MAX {
                c1 = others[c1];
                code_size[c1] += 1;
            }
            others[c1] = c2;
            code_size[c2] += 1;
            while others[c2] != usize::MAX {
                c2 = others[c2];
                code_size[c2] += 1;
            }
        }

        let mut bits = [0usize; 258];
        for &cs in &code_size {
            if cs > 0 {
                bits[cs] += 1;
            }
        }
        if bits.iter().sum::<usize>() <= 1 {
            // only the reserved symbol
            return Self::default();
        }

        // Fold codes longer than 16 bits back in, pairwise.
        for i in (MAX_CODE_LEN + 1..bits.len()).rev() {
            while bits[i] > 0 {
                let mut j = i - 2;
                while bits[j] == 0 {
                    j -= 1;
                }
                bits[i] -= 2;
                bits[i - 1] += 1;
                bits[j + 1] += 2;
                bits[j] -= 1;
            }
        }
        // Drop the reserved symbol's code from the longest length.
        let mut i = MAX_CODE_LEN;
        while bits[i] == 0 {
            i -= 1;
        }
        bits[i] -= 1;

        let mut counts = [0u8; MAX_CODE_LEN];
        for (len, c) in counts.iter_mut().enumerate() {
            *c = bits[len + 1] as u8;
        }
        let mut symbols = Vec::new();
        for len in 1..=code_size.iter().copied().max().unwrap_or(0) {
            for (sym, &cs) in code_size[..256].iter().enumerate() {
                if cs == len {
                    symbols.push(sym as u8);
                }
            }
        }
        Self { counts, symbols }
    }

    /// Checks the count/symbol agreement and the Kraft inequality.
    pub fn validate(&self) -> Result<(), TableFault> {
        let total: usize = self.counts.iter().map(|&c| usize::from(c)).sum();
        if total != self.symbols.len() {
            return Err(TableFault::CountMismatch);
        }
        let kraft: u64 = self
            .counts
            .iter()
            .enumerate()
            .map(|(i, &c)| u64::from(c) << (MAX_CODE_LEN - 1 - i))
            .sum();
        if kraft > 1 << MAX_CODE_LEN {
            return Err(TableFault::KraftViolated);
        }
        let mut seen = [false; 256];
        for &s in &self.symbols {
            if std::mem::replace(&mut seen[usize::from(s)], true) {
                return Err(TableFault::DuplicateSymbol);
            }
        }
        Ok(())
    }

    /// Code lengths in symbol order, as `(symbol, length)` pairs.
    pub fn lengths(&self) -> impl Iterator<Item = (u8, usize)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .flat_map(|(i, &c)| std::iter::repeat_n(i + 1, usize::from(c)))
            .zip(&self.symbols)
            .map(|(len, &s)| (s, len))
    }

    pub fn serialized_len(&self) -> usize {
        MAX_CODE_LEN + self.symbols.len()
    }

    pub fn write_to(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.counts);
        out.extend_from_slice(&self.symbols);
    }

    /// Reads a table from the front of `bytes`, returning it and the bytes consumed.
    pub fn read_from(bytes: &[u8]) -> Option<(Self, usize)> {
        let counts: [u8; MAX_CODE_LEN] = bytes.get(..MAX_CODE_LEN)?.try_into().ok()?;
        let total: usize = counts.iter().map(|&c| usize::from(c)).sum();
        let symbols = bytes.get(MAX_CODE_LEN..MAX_CODE_LEN + total)?.to_vec();
        Some((Self { counts, symbols }, MAX_CODE_LEN + total))
    }
}

/// Symbol -> `(code, length)` lookup.
#[derive(Debug, Clone)]
pub struct Encoder {
    codes: [(u16, u8); 256],
}

impl Encoder {
    pub fn new(table: &HuffmanTable) -> Self {
        let mut codes = [(0u16, 0u8); 256];
        let mut code = 0u32;
        let mut k = 0;
        for (i, &count) in table.counts.iter().enumerate() {
            for _ in 0..count {
                codes[usize::from(table.symbols[k])] = (code as u16, (i + 1) as u8);
                code += 1;
                k += 1;
            }
            code <<= 1;
        }
        Self { codes }
    }

    /// `None` if the symbol has no code.
    #[inline]
    pub fn code(&self, symbol: u8) -> Option<(u16, u8)> {
        let c = self.codes[usize::from(symbol)];
        (c.1 > 0).then_some(c)
    }

    #[inline]
    pub fn emit(&self, w: &mut BitWriter, symbol: u8) -> bool {
        match self.code(symbol) {
            Some((code, len)) => {
                w.put(u32::from(code), u32::from(len));
                true
            }
            None => false,
        }
    }
}

/// Canonical decoder using per-length first/last code bounds.
#[derive(Debug, Clone)]
pub struct Decoder {
    min_code: [i32; MAX_CODE_LEN + 1],
    max_code: [i32; MAX_CODE_LEN + 1],
    val_ptr: [usize; MAX_CODE_LEN + 1],
    symbols: Vec<u8>,
}

impl Decoder {
    /// The table must have passed [`HuffmanTable::validate`].
    pub fn new(table: &HuffmanTable) -> Self {
        let mut min_code = [0i32; MAX_CODE_LEN + 1];
        let mut max_code = [-1i32; MAX_CODE_LEN + 1];
        let mut val_ptr = [0usize; MAX_CODE_LEN + 1];
        let mut code = 0i32;
        let mut k = 0usize;
        for len in 1..=MAX_CODE_LEN {
            let count = i32::from(table.counts[len - 1]);
            if count > 0 {
                val_ptr[len] = k;
                min_code[len] = code;
                code += count;
                max_code[len] = code - 1;
                k += count as usize;
            }
            code <<= 1;
        }
        Self {
            min_code,
            max_code,
            val_ptr,
            symbols: table.symbols.clone(),
        }
    }

    pub fn decode(&self, r: &mut BitReader<'_>) -> Result<u8, SymbolFault> {
        let mut code = 0i32;
        for len in 1..=MAX_CODE_LEN {
            code = (code << 1) | r.bit().ok_or(SymbolFault::Truncated)? as i32;
            if code <= self.max_code[len] {
                let idx = self.val_ptr[len] + (code - self.min_code[len]) as usize;
                return self
                    .symbols
                    .get(idx)
                    .copied()
                    .ok_or(SymbolFault::InvalidCode);
            }
        }
        Err(SymbolFault::InvalidCode)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn hist(pairs: &[(u8, u64)]) -> [u64; 256] {
        let mut h = [0u64; 256];
        for &(s, c) in pairs {
            h[usize::from(s)] = c;
        }
        h
    }

    fn kraft(t: &HuffmanTable) -> f64 {
        t.lengths().map(|(_, l)| 0.5f64.powi(l as i32)).sum()
    }

    #[test]
    fn empty_histogram_gives_empty_table() {
        let t = HuffmanTable::from_histogram(&[0; 256]);
        assert!(t.symbols.is_empty());
        assert_eq!(t.counts, [0; 16]);
        t.validate().unwrap();
    }

    #[test]
    fn single_symbol_gets_one_bit() {
        let t = HuffmanTable::from_histogram(&hist(&[(0, 7)]));
        assert_eq!(t.symbols, vec![0]);
        assert_eq!(t.counts[0], 1);
        assert_eq!(Encoder::new(&t).code(0), Some((0, 1)));
    }

    #[test]
    fn frequent_symbols_get_shorter_codes() {
        let t = HuffmanTable::from_histogram(&hist(&[(1, 100), (2, 50), (3, 10), (4, 1)]));
        let lens: Vec<(u8, usize)> = t.lengths().collect();
        let len_of = |s| lens.iter().find(|(x, _)| *x == s).unwrap().1;
        assert!(len_of(1) <= len_of(2) && len_of(2) <= len_of(3) && len_of(3) <= len_of(4));
        assert!(kraft(&t) < 1.0);
    }

    #[test]
    fn length_limit_holds_for_fibonacci_counts() {
        // Fibonacci weights force an unconstrained depth far beyond 16
        let mut h = [0u64; 256];
        let (mut a, mut b) = (1u64, 1u64);
        for slot in h.iter_mut().take(40) {
            *slot = a;
            (a, b) = (b, a + b);
        }
        let t = HuffmanTable::from_histogram(&h);
        t.validate().unwrap();
        assert_eq!(t.symbols.len(), 40);
        assert!(t.lengths().all(|(_, l)| l <= 16));
        assert!(kraft(&t) <= 1.0);
    }

    #[test]
    fn corrupt_tables_are_rejected() {
        let mut t = HuffmanTable::from_histogram(&hist(&[(1, 3), (2, 5), (9, 1)]));
        t.symbols.push(4);
        assert_eq!(t.validate(), Err(TableFault::CountMismatch));
        let over = HuffmanTable {
            counts: [3, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
            symbols: vec![1, 2, 3],
        };
        assert_eq!(over.validate(), Err(TableFault::KraftViolated));
        let dup = HuffmanTable {
            counts: [2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
            symbols: vec![1, 1],
        };
        assert_eq!(dup.validate(), Err(TableFault::DuplicateSymbol));
    }

    #[test]
    fn deterministic() {
        let h = hist(&[(3, 9), (7, 9), (1, 2), (200, 9)]);
        assert_eq!(
            HuffmanTable::from_histogram(&h),
            HuffmanTable::from_histogram(&h)
        );
    }

    proptest! {
        #[test]
        fn roundtrip_symbols(counts in proptest::collection::vec(0u64..1000, 256), seq_seed in any::<u64>()) {
            let mut h = [0u64; 256];
            h.copy_from_slice(&counts);
            let t = HuffmanTable::from_histogram(&h);
            t.validate().unwrap();
            prop_assert!(t.lengths().all(|(_, l)| l <= 16));
            let used: Vec<u8> = (0..=255u8).filter(|&s| h[usize::from(s)] > 0).collect();
            prop_assert_eq!(t.symbols.len(), used.len());
            if used.is_empty() {
                return Ok(());
            }
            let mut s = seq_seed;
            let seq: Vec<u8> = (0..200).map(|_| {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1);
                used[(s >> 33) as usize % used.len()]
            }).collect();
            let enc = Encoder::new(&t);
            let mut w = BitWriter::new();
            for &sym in &seq {
                prop_assert!(enc.emit(&mut w, sym));
            }
            let bytes = w.finish();
            let dec = Decoder::new(&t);
            let mut r = BitReader::new(&bytes);
            for &sym in &seq {
                prop_assert_eq!(dec.decode(&mut r), Ok(sym));
            }
            let mut buf = Vec::new();
            t.write_to(&mut buf);
            prop_assert_eq!(HuffmanTable::read_from(&buf), Some((t.clone(), t.serialized_len())));
        }
    }
}
