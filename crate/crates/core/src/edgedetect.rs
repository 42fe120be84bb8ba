//! Canny edge detection: Gaussian smoothing, Sobel gradient, non-maximum
//! suppression along a 4-sector quantized direction, and two-threshold
//! hysteresis with 8-connectivity.

use std::collections::VecDeque;

use crate::plane::Plane;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EdgeError {
    #[error("invalid Canny parameters: {0}")]
    InvalidParams(String),
    #[error("gradient needs a plane of at least 3x3, got {width}x{height}")]
    PlaneTooSmall { width: usize, height: usize },
}

/// Smoothing scale and hysteresis thresholds.
///
/// `low` and `high` are fractions of the largest magnitude left after
/// non-maximum suppression.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CannyParams {
    sigma: f64,
    low: f64,
    high: f64,
}

impl CannyParams {
    pub fn new(sigma: f64, low: f64, high: f64) -> Result<Self, EdgeError> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(EdgeError::InvalidParams(format!(
                "sigma must be > 0, got {sigma}"
            )));
        }
        if !(low > 0.0 && low < high && high <= 1.0) {
            return Err(EdgeError::InvalidParams(format!(
                "thresholds must satisfy 0 < low < high <= 1, got low={low} high={high}"
            )));
        }
        Ok(Self { sigma, low, high })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn low(&self) -> f64 {
        self.low
    }

    pub fn high(&self) -> f64 {
        self.high
    }
}

impl Default for CannyParams {
    fn default() -> Self {
        Self {
            sigma: 1.4,
            low: 0.1,
            high: 0.3,
        }
    }
}

/// One boolean per pixel, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeMap {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl EdgeMap {
    pub fn empty(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            bits: vec![false; width * height],
        }
    }

    pub fn from_bits(width: usize, height: usize, bits: Vec<bool>) -> Self {
        assert_eq!(bits.len(), width * height);
        Self {
            width,
            height,
            bits,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        self.bits[y * self.width + x] = value;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

/// Normalized 1D Gaussian of radius `ceil(3 * sigma)`.
pub fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let radius = (3.0 * sigma).ceil() as isize;
    let denom = 2.0 * sigma * sigma;
    let mut k: Vec<f64> = (-radius..=radius)
        .map(|i| (-((i * i) as f64) / denom).exp())
        .collect();
    let sum: f64 = k.iter().sum();
    k.iter_mut().for_each(|w| *w /= sum);
    k
}

/// Separable Gaussian blur with edge replication.
///
/// Panics if `sigma <= 0`.
pub fn gaussian_smooth(p: &Plane, sigma: f64) -> Plane {
    assert!(sigma > 0.0, "sigma must be positive");
    let k = gaussian_kernel(sigma);
    let r = (k.len() / 2) as isize;
    let (w, h) = (p.width(), p.height());
    let horizontal = Plane::from_fn(w, h, |x, y| {
        k.iter()
            .enumerate()
            .map(|(i, wt)| wt * p.get_clamped(x as isize + i as isize - r, y as isize))
            .sum()
    });
    Plane::from_fn(w, h, |x, y| {
        k.iter()
            .enumerate()
            .map(|(i, wt)| wt * horizontal.get_clamped(x as isize, y as isize + i as isize - r))
            .sum()
    })
}

/// Sobel responses. `gx` grows to the right, `gy` grows downward.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradient {
    pub gx: Plane,
    pub gy: Plane,
    pub mag: Plane,
    /// `atan2(gy, gx)` in radians.
    pub dir: Plane,
}

pub fn gradient(p: &Plane) -> Result<Gradient, EdgeError> {
    let (w, h) = (p.width(), p.height());
    if w < 3 || h < 3 {
        return Err(EdgeError::PlaneTooSmall {
            width: w,
            height: h,
        });
    }
    let s =
        |x: usize, y: usize, dx: isize, dy: isize| p.get_clamped(x as isize + dx, y as isize + dy);
    let gx = Plane::from_fn(w, h, |x, y| {
        (s(x, y, 1, -1) + 2.0 * s(x, y, 1, 0) + s(x, y, 1, 1))
            - (s(x, y, -1, -1) + 2.0 * s(x, y, -1, 0) + s(x, y, -1, 1))
    });
    let gy = Plane::from_fn(w, h, |x, y| {
        (s(x, y, -1, 1) + 2.0 * s(x, y, 0, 1) + s(x, y, 1, 1))
            - (s(x, y, -1, -1) + 2.0 * s(x, y, 0, -1) + s(x, y, 1, -1))
    });
    let mag = Plane::from_fn(w, h, |x, y| gx.get(x, y).hypot(gy.get(x, y)));
    let dir = Plane::from_fn(w, h, |x, y| gy.get(x, y).atan2(gx.get(x, y)));
    Ok(Gradient { gx, gy, mag, dir })
}

/// Unit step `(dx, dy)` along the gradient direction quantized to
/// 0, 45, 90 or 135 degrees.
#[inline]
pub fn quantized_step(dir: f64) -> (isize, isize) {
    let mut deg = dir.to_degrees() % 180.0;
    if deg < 0.0 {
        deg += 180.0;
    }
    if !(22.5..157.5).contains(&deg) {
        (1, 0)
    } else if deg < 67.5 {
        (1, 1)
    } else if deg < 112.5 {
        (0, 1)
    } else {
        (-1, 1)
    }
}

/// Intermediate results of [`canny_trace`].
#[derive(Debug, Clone)]
pub struct CannyTrace {
    pub edges: EdgeMap,
    /// Gradient magnitude after non-maximum suppression (zero where suppressed).
    pub suppressed: Plane,
    pub gradient: Gradient,
    /// `low * M`; candidates must exceed it.
    pub weak_threshold: f64,
    /// `high * M`; seeds must reach it.
    pub strong_threshold: f64,
}

fn non_max_suppression(g: &Gradient) -> Plane {
    let (w, h) = (g.mag.width(), g.mag.height());
    let mag_at = |x: isize, y: isize| {
        if x < 0 || y < 0 || x >= w as isize || y >= h as isize {
            0.0
        } else {
            g.mag.get(x as usize, y as usize)
        }
    };
    Plane::from_fn(w, h, |x, y| {
        let m = g.mag.get(x, y);
        if m == 0.0 {
            return 0.0;
        }
        let (dx, dy) = quantized_step(g.dir.get(x, y));
        let (xi, yi) = (x as isize, y as isize);
        let behind = mag_at(xi - dx, yi - dy);
        let ahead = mag_at(xi + dx, yi + dy);
        // A tie is resolved toward the pixel behind, so a symmetric ridge
        // yields exactly one survivor.
        if m > behind && m >= ahead {
            m
        } else {
            0.0
        }
    })
}

fn hysteresis(suppressed: &Plane, weak: f64, strong: f64) -> EdgeMap {
    let (w, h) = (suppressed.width(), suppressed.height());
    let mut edges = EdgeMap::empty(w, h);
    let candidate = |x: usize, y: usize| suppressed.get(x, y) > weak;
    let mut queue = VecDeque::new();
    for y in 0..h {
        for x in 0..w {
            let m = suppressed.get(x, y);
            if m > weak && m >= strong && !edges.get(x, y) {
                edges.set(x, y, true);
                queue.push_back((x, y));
                while let Some((cx, cy)) = queue.pop_front() {
                    for ny in cy.saturating_sub(1)..=(cy + 1).min(h - 1) {
                        for nx in cx.saturating_sub(1)..=(cx + 1).min(w - 1) {
                            if !edges.get(nx, ny) && candidate(nx, ny) {
                                edges.set(nx, ny, true);
                                queue.push_back((nx, ny));
                            }
                        }
                    }
                }
            }
        }
    }
    edges
}

/// Runs the full detector and keeps the intermediate planes.
///
/// Planes smaller than 3x3 have no defined gradient and yield `None`.
pub fn canny_trace(p: &Plane, params: &CannyParams) -> Option<CannyTrace> {
    if p.width() < 3 || p.height() < 3 {
        return None;
    }
    // Subtracting the minimum first makes the result exactly invariant to
    // global offsets whenever the shifted samples are representable.
    let floor = p.min();
    let shifted = p.offset(-floor);
    let smooth = gaussian_smooth(&shifted, params.sigma);
    let gradient = gradient(&smooth).expect("size checked above");
    let suppressed = non_max_suppression(&gradient);
    let peak = suppressed.max().max(0.0);
    let weak_threshold = params.low * peak;
    let strong_threshold = params.high * peak;
    let edges = if peak > 0.0 {
        hysteresis(&suppressed, weak_threshold, strong_threshold)
    } else {
        EdgeMap::empty(p.width(), p.height())
    };
    Some(CannyTrace {
        edges,
        suppressed,
        gradient,
        weak_threshold,
        strong_threshold,
    })
}

/// Canny edge map of `p`. Planes smaller than 3x3 produce an empty map.
pub fn canny(p: &Plane, params: &CannyParams) -> EdgeMap {
    canny_trace(p, params)
        .map(|t| t.edges)
        .unwrap_or_else(|| EdgeMap::empty(p.width(), p.height()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn step(w: usize, h: usize, at: usize) -> Plane {
        Plane::from_fn(w, h, |x, _| if x < at { 0.0 } else { 255.0 })
    }

    #[test]
    fn params_validation() {
        assert!(CannyParams::new(1.0, 0.1, 0.3).is_ok());
        assert!(CannyParams::new(0.0, 0.1, 0.3).is_err());
        assert!(CannyParams::new(1.0, 0.3, 0.3).is_err());
        assert!(CannyParams::new(1.0, 0.0, 0.3).is_err());
        assert!(CannyParams::new(1.0, 0.1, 1.1).is_err());
    }

    #[test]
    fn kernel_is_normalized() {
        for sigma in [0.5, 1.0, 1.4, 2.7] {
            let k = gaussian_kernel(sigma);
            assert_eq!(k.len(), 2 * (3.0 * sigma).ceil() as usize + 1);
            assert!((k.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn smoothing_preserves_constants() {
        let p = Plane::filled(9, 7, 42.5);
        let s = gaussian_smooth(&p, 1.4);
        assert!(s.samples().iter().all(|v| (v - 42.5).abs() < 1e-12));
    }

    #[test]
    fn impulse_response_is_kernel_outer_product() {
        let mut p = Plane::filled(21, 21, 0.0);
        p.set(10, 10, 1.0);
        let s = gaussian_smooth(&p, 1.0);
        // sigma = 1 gives radius 3; normalize the sampled Gaussian by hand
        let norm: f64 = (-3..=3)
            .map(|i: i32| (-(f64::from(i * i)) / 2.0).exp())
            .sum();
        let c = 1.0 / norm;
        assert!((s.get(10, 10) - c * c).abs() < 1e-15);
        let off = (-0.5f64).exp() / norm;
        assert!((s.get(11, 10) - c * off).abs() < 1e-15);
    }

    #[test]
    fn smoothing_commutes_with_offset() {
        let p = Plane::from_fn(12, 10, |x, y| ((x * 7 + y * 13) % 17) as f64);
        let a = gaussian_smooth(&p.offset(50.0), 1.4);
        let b = gaussian_smooth(&p, 1.4).offset(50.0);
        for (u, v) in a.samples().iter().zip(b.samples()) {
            assert!((u - v).abs() < 1e-10);
        }
    }

    #[test]
    fn gradient_of_constant_is_zero() {
        let g = gradient(&Plane::filled(5, 5, 9.0)).unwrap();
        assert!(g.mag.samples().iter().all(|&m| m == 0.0));
    }

    #[test]
    fn gradient_rejects_tiny_plane() {
        assert_eq!(
            gradient(&Plane::filled(2, 5, 0.0)),
            Err(EdgeError::PlaneTooSmall {
                width: 2,
                height: 5
            })
        );
    }

    #[test]
    fn sobel_on_vertical_step() {
        let g = gradient(&step(10, 8, 5)).unwrap();
        for y in 0..8 {
            for x in 0..10 {
                let expected = if x == 4 || x == 5 { 4.0 * 255.0 } else { 0.0 };
                assert_eq!(g.gx.get(x, y), expected, "gx at ({x},{y})");
                assert_eq!(g.gy.get(x, y), 0.0);
            }
        }
    }

    #[test]
    fn transpose_swaps_gradient_axes() {
        let p = Plane::from_fn(7, 6, |x, y| ((x * x + 3 * y) % 11) as f64);
        let g = gradient(&p).unwrap();
        let gt = gradient(&p.transpose()).unwrap();
        assert_eq!(gt.gx, g.gy.transpose());
        assert_eq!(gt.gy, g.gx.transpose());
    }

    #[test]
    fn direction_sectors() {
        use std::f64::consts::PI;
        assert_eq!(quantized_step(0.0), (1, 0));
        assert_eq!(quantized_step(PI), (1, 0));
        assert_eq!(quantized_step(PI / 4.0), (1, 1));
        assert_eq!(quantized_step(-3.0 * PI / 4.0), (1, 1));
        assert_eq!(quantized_step(PI / 2.0), (0, 1));
        assert_eq!(quantized_step(3.0 * PI / 4.0), (-1, 1));
    }

    #[test]
    fn constant_plane_has_no_edges() {
        let e = canny(&Plane::filled(16, 16, 100.0), &CannyParams::default());
        assert_eq!(e.count(), 0);
    }

    #[test]
    fn tiny_plane_has_no_edges() {
        let e = canny(&Plane::filled(2, 2, 1.0), &CannyParams::default());
        assert_eq!((e.width(), e.height(), e.count()), (2, 2, 0));
    }

    #[test]
    fn vertical_step_gives_single_line() {
        let params = CannyParams::new(1.0, 0.1, 0.3).unwrap();
        let e = canny(&step(64, 64, 32), &params);
        for y in 2..62 {
            let cols: Vec<usize> = (2..62).filter(|&x| e.get(x, y)).collect();
            assert_eq!(cols.len(), 1, "row {y}: {cols:?}");
            assert!(cols[0] == 31 || cols[0] == 32);
        }
    }

    proptest! {
        #[test]
        fn offset_invariance(
            vals in proptest::collection::vec(0u16..1024, 20 * 18),
            offset in -300i32..300,
        ) {
            // dyadic samples keep the shifted plane exactly representable
            let p = Plane::from_fn(20, 18, |x, y| f64::from(vals[y * 20 + x]) / 4.0);
            let params = CannyParams::default();
            prop_assert_eq!(canny(&p, &params), canny(&p.offset(f64::from(offset)), &params));
        }

        #[test]
        fn hysteresis_and_suppression_are_sound(
            vals in proptest::collection::vec(0u8..=255, 24 * 24),
        ) {
            let p = Plane::from_fn(24, 24, |x, y| f64::from(vals[y * 24 + x]));
            let t = canny_trace(&p, &CannyParams::new(1.0, 0.1, 0.3).unwrap()).unwrap();
            let (w, h) = (24usize, 24usize);
            // every edge pixel reaches a strong pixel through edge pixels
            let mut reached = vec![false; w * h];
            let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
            for y in 0..h { for x in 0..w {
                if t.edges.get(x, y) && t.suppressed.get(x, y) >= t.strong_threshold {
                    reached[y * w + x] = true;
                    queue.push_back((x, y));
                }
            }}
            while let Some((x, y)) = queue.pop_front() {
                for ny in y.saturating_sub(1)..=(y + 1).min(h - 1) {
                    for nx in x.saturating_sub(1)..=(x + 1).min(w - 1) {
                        if t.edges.get(nx, ny) && !reached[ny * w + nx] {
                            reached[ny * w + nx] = true;
                            queue.push_back((nx, ny));
                        }
                    }
                }
            }
            for y in 0..h { for x in 0..w {
                if t.edges.get(x, y) {
                    prop_assert!(reached[y * w + x]);
                    prop_assert!(t.suppressed.get(x, y) > t.weak_threshold);
                    let m = t.gradient.mag.get(x, y);
                    let (dx, dy) = quantized_step(t.gradient.dir.get(x, y));
                    let at = |dx: isize, dy: isize| {
                        let (nx, ny) = (x as isize + dx, y as isize + dy);
                        if nx < 0 || ny < 0 || nx >= w as isize || ny >= h as isize { 0.0 }
                        else { t.gradient.mag.get(nx as usize, ny as usize) }
                    };
                    prop_assert!(!(at(dx, dy) > m && at(-dx, -dy) > m));
                }
            }}
        }
    }
}
