//! Edge/non-edge block classification and AC-coefficient retention.
//!
//! Non-edge blocks are reduced to their DC coefficient. Edge blocks keep the
//! first `ceil(rho * k)` of their `k` non-zero AC coefficients in zigzag
//! order, where `rho` is fixed by the [`Scheme`].

use std::fmt;
use std::str::FromStr;

use crate::edgedetect::EdgeMap;
use crate::quant::QuantizedBlock;
use crate::transform::BlockGrid;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SchemeError {
    #[error("edge map is {edge_w}x{edge_h} but the block grid covers {grid_w}x{grid_h}")]
    DimensionMismatch {
        edge_w: usize,
        edge_h: usize,
        grid_w: usize,
        grid_h: usize,
    },
    #[error("min_edge_pixels must be at least 1")]
    ZeroMinEdgePixels,
    #[error("unknown scheme {0:?}, expected m1, m2 or m3")]
    UnknownScheme(String),
}

/// AC retention scheme for edge blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum Scheme {
    /// Every AC coefficient.
    #[default]
    M1,
    /// First 70% of the non-zero AC coefficients.
    M2,
    /// First 50% of the non-zero AC coefficients.
    M3,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::M1, Scheme::M2, Scheme::M3];

    /// Retained share of non-zero AC coefficients, in percent.
    pub const fn retention_percent(self) -> usize {
        match self {
            Scheme::M1 => 100,
            Scheme::M2 => 70,
            Scheme::M3 => 50,
        }
    }

    pub fn retention(self) -> f64 {
        self.retention_percent() as f64 / 100.0
    }

    /// Number of non-zero AC values kept out of `k`: `ceil(rho * k)`.
    pub const fn kept(self, k: usize) -> usize {
        (self.retention_percent() * k).div_ceil(100)
    }

    /// Bitstream tag: 1, 2 or 3.
    pub const fn tag(self) -> u8 {
        match self {
            Scheme::M1 => 1,
            Scheme::M2 => 2,
            Scheme::M3 => 3,
        }
    }

    pub const fn from_tag(tag: u8) -> Option<Self> {
        match tag {
            1 => Some(Scheme::M1),
            2 => Some(Scheme::M2),
            3 => Some(Scheme::M3),
            _ => None,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m{}", self.tag())
    }
}

impl FromStr for Scheme {
    type Err = SchemeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "m1" | "m-1" | "1" => Ok(Scheme::M1),
            "m2" | "m-2" | "2" => Ok(Scheme::M2),
            "m3" | "m-3" | "3" => Ok(Scheme::M3),
            _ => Err(SchemeError::UnknownScheme(s.to_owned())),
        }
    }
}

/// One bit per block (`true` = edge block), row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClassificationMap {
    blocks_x: usize,
    blocks_y: usize,
    bits: Vec<bool>,
}

impl ClassificationMap {
    pub fn uniform(blocks_x: usize, blocks_y: usize, is_edge: bool) -> Self {
        Self {
            blocks_x,
            blocks_y,
            bits: vec![is_edge; blocks_x * blocks_y],
        }
    }

    pub fn from_bits(blocks_x: usize, blocks_y: usize, bits: Vec<bool>) -> Self {
        assert_eq!(bits.len(), blocks_x * blocks_y);
        Self {
            blocks_x,
            blocks_y,
            bits,
        }
    }

    pub fn blocks_x(&self) -> usize {
        self.blocks_x
    }

    pub fn blocks_y(&self) -> usize {
        self.blocks_y
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn is_edge(&self, index: usize) -> bool {
        self.bits[index]
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Share of edge blocks in percent.
    pub fn edge_percent(&self) -> f64 {
        if self.bits.is_empty() {
            0.0
        } else {
            100.0 * self.edge_count() as f64 / self.bits.len() as f64
        }
    }
}

/// Marks a block as edge when its unpadded area holds at least
/// `min_edge_pixels` edge pixels.
pub fn classify(
    edges: &EdgeMap,
    grid: &BlockGrid,
    min_edge_pixels: usize,
) -> Result<ClassificationMap, SchemeError> {
    if edges.width() != grid.true_width || edges.height() != grid.true_height {
        return Err(SchemeError::DimensionMismatch {
            edge_w: edges.width(),
            edge_h: edges.height(),
            grid_w: grid.true_width,
            grid_h: grid.true_height,
        });
    }
    if min_edge_pixels == 0 {
        return Err(SchemeError::ZeroMinEdgePixels);
    }
    let n = grid.block_size.get();
    let mut counts = vec![0usize; grid.block_count()];
    for y in 0..edges.height() {
        for x in 0..edges.width() {
            if edges.get(x, y) {
                counts[(y / n) * grid.blocks_x + x / n] += 1;
            }
        }
    }
    Ok(ClassificationMap {
        blocks_x: grid.blocks_x,
        blocks_y: grid.blocks_y,
        bits: counts.into_iter().map(|c| c >= min_edge_pixels).collect(),
    })
}

/// Applies the retention rule to one zigzag-ordered block.
pub fn retain(qb: &QuantizedBlock, is_edge: bool, scheme: Scheme) -> QuantizedBlock {
    let mut out = qb.clone();
    if !is_edge {
        out.values[1..].iter_mut().for_each(|v| *v = 0);
        return out;
    }
    let keep = scheme.kept(qb.nonzero_ac());
    let mut seen = 0;
    for v in out.values[1..].iter_mut().filter(|v| **v != 0) {
        seen += 1;
        if seen > keep {
            *v = 0;
        }
    }
    out
}
