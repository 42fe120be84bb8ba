//! Block partitioning, orthonormal 2D DCT, and zigzag ordering.

use std::fmt;
use std::sync::OnceLock;

use crate::plane::Plane;

/// Supported square block edge lengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BlockSize {
    B8,
    B16,
    B32,
}

impl BlockSize {
    pub const ALL: [BlockSize; 3] = [BlockSize::B8, BlockSize::B16, BlockSize::B32];

    #[inline]
    pub const fn get(self) -> usize {
        match self {
            BlockSize::B8 => 8,
            BlockSize::B16 => 16,
            BlockSize::B32 => 32,
        }
    }

    /// Number of samples per block.
    #[inline]
    pub const fn area(self) -> usize {
        self.get() * self.get()
    }

    pub fn from_edge(n: usize) -> Option<Self> {
        match n {
            8 => Some(BlockSize::B8),
            16 => Some(BlockSize::B16),
            32 => Some(BlockSize::B32),
            _ => None,
        }
    }

    const fn slot(self) -> usize {
        match self {
            BlockSize::B8 => 0,
            BlockSize::B16 => 1,
            BlockSize::B32 => 2,
        }
    }

    /// Cached orthonormal DCT basis for this size.
    pub fn basis(self) -> &'static DctBasis {
        static CACHE: [OnceLock<DctBasis>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
        CACHE[self.slot()].get_or_init(|| DctBasis::new(self.get()))
    }

    /// Cached zigzag permutation for this size.
    pub fn zigzag(self) -> &'static ZigZag {
        static CACHE: [OnceLock<ZigZag>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
        CACHE[self.slot()].get_or_init(|| zigzag(self.get()))
    }
}

impl fmt::Display for BlockSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.get())
    }
}

/// Geometry of a plane cut into `N x N` blocks after edge-replication padding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockGrid {
    pub block_size: BlockSize,
    pub true_width: usize,
    pub true_height: usize,
    pub padded_width: usize,
    pub padded_height: usize,
    pub blocks_x: usize,
    pub blocks_y: usize,
}

impl BlockGrid {
    pub fn new(true_width: usize, true_height: usize, block_size: BlockSize) -> Self {
        let n = block_size.get();
        let blocks_x = true_width.div_ceil(n);
        let blocks_y = true_height.div_ceil(n);
        Self {
            block_size,
            true_width,
            true_height,
            padded_width: blocks_x * n,
            padded_height: blocks_y * n,
            blocks_x,
            blocks_y,
        }
    }

    pub fn block_count(&self) -> usize {
        self.blocks_x * self.blocks_y
    }
}

/// Pads `p` by edge replication and cuts it into row-major blocks, each
/// stored row-major.
pub fn partition(p: &Plane, block_size: BlockSize) -> (BlockGrid, Vec<Vec<f64>>) {
    let grid = BlockGrid::new(p.width(), p.height(), block_size);
    let n = block_size.get();
    let mut blocks = Vec::with_capacity(grid.block_count());
    for by in 0..grid.blocks_y {
        for bx in 0..grid.blocks_x {
            let mut block = Vec::with_capacity(n * n);
            for r in 0..n {
                let y = (by * n + r).min(p.height() - 1);
                for c in 0..n {
                    let x = (bx * n + c).min(p.width() - 1);
                    block.push(p.get(x, y));
                }
            }
            blocks.push(block);
        }
    }
    (grid, blocks)
}

/// Inverse of [`partition`]: places the blocks and crops to the true size.
///
/// Panics if the block count or lengths disagree with `grid`.
pub fn reassemble(grid: &BlockGrid, blocks: &[Vec<f64>]) -> Plane {
    let n = grid.block_size.get();
    assert_eq!(blocks.len(), grid.block_count(), "block count mismatch");
    let mut out = Plane::filled(grid.true_width, grid.true_height, 0.0);
    for (idx, block) in blocks.iter().enumerate() {
        assert_eq!(block.len(), n * n, "block length mismatch");
        let (bx, by) = (idx % grid.blocks_x, idx / grid.blocks_x);
        for r in 0..n {
            let y = by * n + r;
            if y >= grid.true_height {
                break;
            }
            for c in 0..n {
                let x = bx * n + c;
                if x >= grid.true_width {
                    break;
                }
                out.set(x, y, block[r * n + c]);
            }
        }
    }
    out
}

/// Precomputed 1D basis: `rows[k * n + x] = s(k) * cos((2x + 1) k pi / 2n)`
/// with `s(0) = sqrt(1/n)` and `s(k) = sqrt(2/n)` otherwise.
#[derive(Debug, Clone)]
pub struct DctBasis {
    n: usize,
    rows: Vec<f64>,
}

impl DctBasis {
    pub fn new(n: usize) -> Self {
        let nf = n as f64;
        let mut rows = Vec::with_capacity(n * n);
        for k in 0..n {
            let c = if k == 0 {
                std::f64::consts::FRAC_1_SQRT_2
            } else {
                1.0
            };
            let scale = c * (2.0 / nf).sqrt();
            for x in 0..n {
                let arg = (2 * x + 1) as f64 * k as f64 * std::f64::consts::PI / (2.0 * nf);
                rows.push(scale * arg.cos());
            }
        }
        Self { n, rows }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn at(&self, k: usize, x: usize) -> f64 {
        self.rows[k * self.n + x]
    }
}

/// DCT coefficients of one block, raster order over frequency `(i, j)` where
/// `i` pairs with the row index.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffBlock {
    pub size: BlockSize,
    pub coeffs: Vec<f64>,
}

impl CoeffBlock {
    pub fn zeros(size: BlockSize) -> Self {
        Self {
            size,
            coeffs: vec![0.0; size.area()],
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.coeffs[i * self.size.get() + j]
    }

    pub fn dc(&self) -> f64 {
        self.coeffs[0]
    }
}

/// Forward 2D DCT of a row-major block.
///
/// Panics if `block.len() != size.area()`.
pub fn dct2(block: &[f64], size: BlockSize) -> CoeffBlock {
    let n = size.get();
    assert_eq!(block.len(), n * n, "block length does not match block size");
    let b = size.basis();
    // rows first: tmp[i][c] = sum_r B[i][r] X[r][c]
    let mut tmp = vec![0.0; n * n];
    for i in 0..n {
        for r in 0..n {
            let w = b.at(i, r);
            let src = &block[r * n..(r + 1) * n];
            let dst = &mut tmp[i * n..(i + 1) * n];
            for (d, s) in dst.iter_mut().zip(src) {
                *d += w * s;
            }
        }
    }
    // then columns: out[i][j] = sum_c tmp[i][c] B[j][c]
    let mut coeffs = vec![0.0; n * n];
    for i in 0..n {
        let row = &tmp[i * n..(i + 1) * n];
        for j in 0..n {
            let basis_row = &b.rows[j * n..(j + 1) * n];
            coeffs[i * n + j] = row.iter().zip(basis_row).map(|(a, w)| a * w).sum();
        }
    }
    CoeffBlock { size, coeffs }
}

/// Inverse 2D DCT back to a row-major block.
pub fn idct2(coeffs: &CoeffBlock) -> Vec<f64> {
    let n = coeffs.size.get();
    let b = coeffs.size.basis();
    let c = &coeffs.coeffs;
    // tmp[r][j] = sum_i B[i][r] C[i][j]
    let mut tmp = vec![0.0; n * n];
    for i in 0..n {
        let src = &c[i * n..(i + 1) * n];
        for r in 0..n {
            let w = b.at(i, r);
            let dst = &mut tmp[r * n..(r + 1) * n];
            for (d, s) in dst.iter_mut().zip(src) {
                *d += w * s;
            }
        }
    }
    // out[r][col] = sum_j tmp[r][j] B[j][col]
    let mut out = vec![0.0; n * n];
    for r in 0..n {
        let row = &tmp[r * n..(r + 1) * n];
        let dst = &mut out[r * n..(r + 1) * n];
        for (j, &t) in row.iter().enumerate() {
            let basis_row = &b.rows[j * n..(j + 1) * n];
            for (d, w) in dst.iter_mut().zip(basis_row) {
                *d += t * w;
            }
        }
    }
    out
}

/// Zigzag scan of an `n x n` block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZigZag {
    n: usize,
    /// `order[k]` is the raster index visited at zigzag position `k`.
    order: Vec<usize>,
    /// `position[raster]` is the zigzag position of a raster index.
    position: Vec<usize>,
}

impl ZigZag {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn position(&self) -> &[usize] {
        &self.position
    }

    /// Reorders raster-ordered values into zigzag order.
    pub fn scan<T: Copy>(&self, raster: &[T]) -> Vec<T> {
        self.order.iter().map(|&r| raster[r]).collect()
    }

    /// Reorders zigzag-ordered values back into raster order.
    pub fn unscan<T: Copy>(&self, zigzagged: &[T]) -> Vec<T> {
        self.position.iter().map(|&k| zigzagged[k]).collect()
    }
}

/// Anti-diagonal traversal starting `(0,0), (0,1), (1,0), (2,0), (1,1), (0,2)`,
/// coordinates given as `(row, col)`.
pub fn zigzag(n: usize) -> ZigZag {
    assert!(n >= 1);
    let mut order = Vec::with_capacity(n * n);
    for s in 0..(2 * n - 1) {
        let lo = s.saturating_sub(n - 1);
        let hi = s.min(n - 1);
        if s % 2 == 0 {
            // moving up and to the right: row decreases
            for row in (lo..=hi).rev() {
                order.push(row * n + (s - row));
            }
        } else {
            for row in lo..=hi {
                order.push(row * n + (s - row));
            }
        }
    }
    let mut position = vec![0; n * n];
    for (k, &r) in order.iter().enumerate() {
        position[r] = k;
    }
    ZigZag { n, order, position }
}
