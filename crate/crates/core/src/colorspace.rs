//! Channel-mean removal and RGB <-> YCbCr conversion.
//!
//! The forward transform subtracts the per-channel means of the whole image
//! and applies a linear map with no level shift and no chroma offset. The
//! means travel as side information so the inverse can restore them.

use crate::imageio::RgbImage;
use crate::plane::Plane;

/// Rows map mean-removed `(R, G, B)` to `(Y, Cb, Cr)`.
pub const FORWARD: [[f64; 3]; 3] = [
    [0.299, 0.587, 0.114],
    [-0.16875, -0.33126, 0.5],
    [0.5, -0.41869, -0.08131],
];

/// Rows map `(Y, Cb, Cr)` back to mean-removed `(R, G, B)`.
pub const INVERSE: [[f64; 3]; 3] = [
    [1.0, 0.0, 1.402],
    [1.0, -0.34413, -0.71414],
    [1.0, 1.772, 0.0],
];

/// Three decorrelated planes plus the RGB channel means removed before conversion.
#[derive(Debug, Clone, PartialEq)]
pub struct YcbcrImage {
    pub y: Plane,
    pub cb: Plane,
    pub cr: Plane,
    pub mean_r: f64,
    pub mean_g: f64,
    pub mean_b: f64,
}

impl YcbcrImage {
    pub fn width(&self) -> usize {
        self.y.width()
    }

    pub fn height(&self) -> usize {
        self.y.height()
    }

    pub fn means(&self) -> [f64; 3] {
        [self.mean_r, self.mean_g, self.mean_b]
    }

    pub fn planes(&self) -> [&Plane; 3] {
        [&self.y, &self.cb, &self.cr]
    }
}

#[inline]
fn apply(m: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

/// Exact arithmetic means of the R, G and B channels.
pub fn channel_means(img: &RgbImage) -> [f64; 3] {
    let mut sums = [0u64; 3];
    for p in img.pixels() {
        for c in 0..3 {
            sums[c] += u64::from(p[c]);
        }
    }
    let n = img.pixel_count() as f64;
    sums.map(|s| s as f64 / n)
}

/// Converts with the image's own channel means removed.
pub fn forward(img: &RgbImage) -> YcbcrImage {
    forward_with_means(img, channel_means(img))
}

/// Converts after subtracting the given means instead of the image's own.
///
/// Used to bring a reconstruction into the same YCbCr frame as its original.
pub fn forward_with_means(img: &RgbImage, means: [f64; 3]) -> YcbcrImage {
    let n = img.pixel_count();
    let mut y = Vec::with_capacity(n);
    let mut cb = Vec::with_capacity(n);
    let mut cr = Vec::with_capacity(n);
    for p in img.pixels() {
        let v = [
            f64::from(p[0]) - means[0],
            f64::from(p[1]) - means[1],
            f64::from(p[2]) - means[2],
        ];
        let out = apply(&FORWARD, v);
        y.push(out[0]);
        cb.push(out[1]);
        cr.push(out[2]);
    }
    let (w, h) = (img.width(), img.height());
    YcbcrImage {
        y: Plane::from_samples(w, h, y),
        cb: Plane::from_samples(w, h, cb),
        cr: Plane::from_samples(w, h, cr),
        mean_r: means[0],
        mean_g: means[1],
        mean_b: means[2],
    }
}

/// Round half away from zero, then clamp to a byte.
#[inline]
fn to_byte(v: f64) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}

/// Converts back to RGB, restoring the means, rounding and clamping.
///
/// Panics if the planes do not share dimensions.
pub fn inverse(img: &YcbcrImage) -> RgbImage {
    let (w, h) = (img.width(), img.height());
    assert!(
        img.cb.width() == w && img.cb.height() == h && img.cr.width() == w && img.cr.height() == h,
        "YCbCr planes must share dimensions"
    );
    let means = img.means();
    let mut data = Vec::with_capacity(3 * w * h);
    let ys = img.y.samples().iter();
    let cbs = img.cb.samples().iter();
    let crs = img.cr.samples().iter();
    for ((&y, &cb), &cr) in ys.zip(cbs).zip(crs) {
        let rgb = apply(&INVERSE, [y, cb, cr]);
        for c in 0..3 {
            data.push(to_byte(rgb[c] + means[c]));
        }
    }
    RgbImage::new(w, h, data).expect("dimensions come from a valid plane")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-9
    }

    #[test]
    fn uniform_gray_is_all_zero() {
        let img = RgbImage::from_fn(5, 3, |_, _| [77, 77, 77]);
        let ycc = forward(&img);
        assert_eq!(ycc.means(), [77.0; 3]);
        for p in ycc.planes() {
            assert!(p.samples().iter().all(|&v| v == 0.0));
        }
        assert_eq!(inverse(&ycc), img);
    }

    #[test]
    fn red_unit_vector() {
        // mean-removed (100, 0, 0) by hand: 0.299*100, -0.16875*100, 0.5*100
        let img = RgbImage::from_fn(1, 1, |_, _| [100, 0, 0]);
        let ycc = forward_with_means(&img, [0.0; 3]);
        assert!(close(ycc.y.get(0, 0), 29.9));
        assert!(close(ycc.cb.get(0, 0), -16.875));
        assert!(close(ycc.cr.get(0, 0), 50.0));
    }

    #[test]
    fn two_pixel_mean_removal() {
        let img = RgbImage::new(2, 1, vec![0, 0, 0, 200, 0, 0]).unwrap();
        let ycc = forward(&img);
        assert_eq!(ycc.mean_r, 100.0);
        assert!(close(ycc.y.get(0, 0), -29.9));
        assert!(close(ycc.y.get(1, 0), 29.9));
    }

    #[test]
    fn inverse_of_pure_cr() {
        let ycc = YcbcrImage {
            y: Plane::filled(1, 1, 0.0),
            cb: Plane::filled(1, 1, 0.0),
            cr: Plane::filled(1, 1, 100.0),
            mean_r: 0.0,
            mean_g: 0.0,
            mean_b: 0.0,
        };
        // R = 140.2, G = -71.414 -> 0, B = 0
        assert_eq!(inverse(&ycc).pixel(0, 0), [140, 0, 0]);
    }

    #[test]
    fn rgb_cube_corners_roundtrip_within_one() {
        // corners of the mean-removed cube bound the residual of the truncated pair
        let corners: Vec<[u8; 3]> = (0..8u8)
            .map(|i| [(i & 1) * 255, ((i >> 1) & 1) * 255, ((i >> 2) & 1) * 255])
            .collect();
        let img = RgbImage::from_fn(8, 1, |x, _| corners[x]);
        let back = inverse(&forward(&img));
        for (a, b) in img.data().iter().zip(back.data()) {
            assert!((i16::from(*a) - i16::from(*b)).abs() <= 1);
        }
    }

    proptest! {
        #[test]
        fn luma_is_zero_mean(data in proptest::collection::vec(any::<u8>(), 3 * 48)) {
            let img = RgbImage::new(8, 6, data).unwrap();
            let ycc = forward(&img);
            prop_assert!(ycc.y.mean().abs() <= 1e-9 * 255.0);
        }

        #[test]
        fn gray_has_no_chroma(data in proptest::collection::vec(any::<u8>(), 40)) {
            let img = RgbImage::from_fn(8, 5, |x, y| { let v = data[y * 8 + x]; [v, v, v] });
            let ycc = forward(&img);
            for p in [&ycc.cb, &ycc.cr] {
                prop_assert!(p.samples().iter().all(|v| v.abs() <= 1e-4 * 255.0));
            }
        }

        #[test]
        fn roundtrip_within_one(data in proptest::collection::vec(any::<u8>(), 3 * 35)) {
            let img = RgbImage::new(7, 5, data).unwrap();
            let back = inverse(&forward(&img));
            for (a, b) in img.data().iter().zip(back.data()) {
                prop_assert!((i16::from(*a) - i16::from(*b)).abs() <= 1);
            }
        }
    }
}
