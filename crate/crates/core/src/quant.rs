//! Q-matrix construction and uniform (de)quantization.

use std::fmt;

use crate::transform::{BlockSize, CoeffBlock};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuantError {
    #[error("quality must be in 1..=100, got {0}")]
    QualityOutOfRange(i64),
}

/// JPEG Annex K luminance table, raster order.
pub const ANNEX_K_LUMA: [u16; 64] = [
    16, 11, 10, 16, 24, 40, 51, 61, //
    12, 12, 14, 19, 26, 58, 60, 55, //
    14, 13, 16, 24, 40, 57, 69, 56, //
    14, 17, 22, 29, 51, 87, 80, 62, //
    18, 22, 37, 56, 68, 109, 103, 77, //
    24, 35, 55, 64, 81, 104, 113, 92, //
    49, 64, 78, 87, 103, 121, 120, 101, //
    72, 92, 95, 98, 112, 100, 103, 99,
];

/// JPEG Annex K chrominance table, raster order.
pub const ANNEX_K_CHROMA: [u16; 64] = [
    17, 18, 24, 47, 99, 99, 99, 99, //
    18, 21, 26, 66, 99, 99, 99, 99, //
    24, 26, 56, 99, 99, 99, 99, 99, //
    47, 66, 99, 99, 99, 99, 99, 99, //
    99, 99, 99, 99, 99, 99, 99, 99, //
    99, 99, 99, 99, 99, 99, 99, 99, //
    99, 99, 99, 99, 99, 99, 99, 99, //
    99, 99, 99, 99, 99, 99, 99, 99,
];

/// Quality setting in `1..=100`; 50 leaves the base tables unscaled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Quality(u8);

impl Quality {
    pub fn new(q: i64) -> Result<Self, QuantError> {
        if (1..=100).contains(&q) {
            Ok(Self(q as u8))
        } else {
            Err(QuantError::QualityOutOfRange(q))
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }

    /// IJG percentage scale factor.
    pub fn scale(self) -> u32 {
        let q = u32::from(self.0);
        if q < 50 {
            5000 / q
        } else {
            200 - 2 * q
        }
    }
}

impl Default for Quality {
    fn default() -> Self {
        Self(50)
    }
}

impl fmt::Display for Quality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Which base table a plane uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PlaneClass {
    Luma,
    Chroma,
}

impl PlaneClass {
    /// Class of plane index 0 (Y), 1 (Cb), 2 (Cr).
    pub fn of_plane(index: usize) -> Self {
        if index == 0 {
            PlaneClass::Luma
        } else {
            PlaneClass::Chroma
        }
    }
}

/// Per-frequency step sizes, raster order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantMatrix {
    pub size: BlockSize,
    pub class: PlaneClass,
    entries: Vec<u16>,
}

impl QuantMatrix {
    pub fn entries(&self) -> &[u16] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u16 {
        self.entries[i * self.size.get() + j]
    }
}

/// Annex K table for `class`, scaled by `quality` and replicated up to `size`.
pub fn base_qmatrix(size: BlockSize, class: PlaneClass, quality: Quality) -> QuantMatrix {
    let base = match class {
        PlaneClass::Luma => &ANNEX_K_LUMA,
        PlaneClass::Chroma => &ANNEX_K_CHROMA,
    };
    let s = quality.scale();
    let scaled: Vec<u16> = base
        .iter()
        .map(|&e| ((u32::from(e) * s + 50) / 100).clamp(1, 255) as u16)
        .collect();
    let n = size.get();
    let rep = n / 8;
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            entries.push(scaled[(i / rep) * 8 + j / rep]);
        }
    }
    QuantMatrix {
        size,
        class,
        entries,
    }
}

/// Integer coefficients of one block, zigzag order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuantizedBlock {
    pub size: BlockSize,
    pub values: Vec<i32>,
}

impl QuantizedBlock {
    pub fn zeros(size: BlockSize) -> Self {
        Self {
            size,
            values: vec![0; size.area()],
        }
    }

    pub fn dc(&self) -> i32 {
        self.values[0]
    }

    pub fn ac(&self) -> &[i32] {
        &self.values[1..]
    }

    pub fn nonzero_ac(&self) -> usize {
        self.ac().iter().filter(|&&v| v != 0).count()
    }
}

/// `round(c / q)` (half away from zero), reordered into zigzag order.
///
/// Panics if sizes disagree.
pub fn quantize(c: &CoeffBlock, q: &QuantMatrix) -> QuantizedBlock {
    assert_eq!(c.size, q.size, "coefficient and Q-matrix sizes differ");
    let raster: Vec<i32> = c
        .coeffs
        .iter()
        .zip(&q.entries)
        .map(|(&v, &step)| (v / f64::from(step)).round() as i32)
        .collect();
    QuantizedBlock {
        size: c.size,
        values: c.size.zigzag().scan(&raster),
    }
}

/// `value * step`, back in raster order.
pub fn dequantize(qb: &QuantizedBlock, q: &QuantMatrix) -> CoeffBlock {
    assert_eq!(qb.size, q.size, "block and Q-matrix sizes differ");
    let raster = qb.size.zigzag().unscan(&qb.values);
    CoeffBlock {
        size: qb.size,
        coeffs: raster
            .iter()
            .zip(&q.entries)
            .map(|(&v, &step)| f64::from(v) * f64::from(step))
            .collect(),
    }
}
