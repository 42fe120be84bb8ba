//! MSE, YCbCr PSNR, bits per pixel and compression ratio.

use crate::colorspace::{self, YcbcrImage};
use crate::entropy::CompressedImage;
use crate::imageio::RgbImage;
use crate::plane::Plane;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MetricsError {
    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
}

/// Bits per pixel of an uncompressed 8-bit RGB source.
pub const SOURCE_BPP: f64 = 24.0;

const PEAK: f64 = 255.0;

pub fn mse(a: &Plane, b: &Plane) -> Result<f64, MetricsError> {
    if a.width() != b.width() || a.height() != b.height() {
        return Err(MetricsError::DimensionMismatch(
            a.width(),
            a.height(),
            b.width(),
            b.height(),
        ));
    }
    let n = a.samples().len();
    if n == 0 {
        return Ok(0.0);
    }
    let sum: f64 = a
        .samples()
        .iter()
        .zip(b.samples())
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    Ok(sum / n as f64)
}

/// `10 log10(3 * 255^2 / (MSE_Y + MSE_Cb + MSE_Cr))`; infinite for identical planes.
pub fn psnr_from_mse(total_mse: f64) -> f64 {
    if total_mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (PEAK * PEAK * 3.0 / total_mse).log10()
    }
}

/// Per-plane MSEs of two YCbCr images.
pub fn plane_mses(orig: &YcbcrImage, recon: &YcbcrImage) -> Result<[f64; 3], MetricsError> {
    Ok([
        mse(&orig.y, &recon.y)?,
        mse(&orig.cb, &recon.cb)?,
        mse(&orig.cr, &recon.cr)?,
    ])
}

/// YCbCr PSNR. Both images are expected to carry the same means.
pub fn psnr(orig: &YcbcrImage, recon: &YcbcrImage) -> Result<f64, MetricsError> {
    Ok(psnr_from_mse(plane_mses(orig, recon)?.iter().sum()))
}

fn check_dims(a: &RgbImage, b: &RgbImage) -> Result<(), MetricsError> {
    if a.width() != b.width() || a.height() != b.height() {
        return Err(MetricsError::DimensionMismatch(
            a.width(),
            a.height(),
            b.width(),
            b.height(),
        ));
    }
    Ok(())
}

/// Converts both RGB images with the original's means and compares in YCbCr.
pub fn ycbcr_mses(orig: &RgbImage, recon: &RgbImage) -> Result<[f64; 3], MetricsError> {
    check_dims(orig, recon)?;
    let means = colorspace::channel_means(orig);
    plane_mses(
        &colorspace::forward_with_means(orig, means),
        &colorspace::forward_with_means(recon, means),
    )
}

/// Conventional PSNR over all RGB samples, for context only.
pub fn rgb_psnr(orig: &RgbImage, recon: &RgbImage) -> Result<f64, MetricsError> {
    check_dims(orig, recon)?;
    let sum: f64 = orig
        .data()
        .iter()
        .zip(recon.data())
        .map(|(&a, &b)| {
            let d = f64::from(a) - f64::from(b);
            d * d
        })
        .sum();
    let m = sum / orig.data().len() as f64;
    Ok(if m == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (PEAK * PEAK / m).log10()
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rate {
    pub bpp: f64,
    pub cr: f64,
}

/// Rate of `bits` spread over `pixels`.
pub fn rate_from_bits(bits: usize, pixels: usize) -> Rate {
    let bpp = bits as f64 / pixels as f64;
    Rate {
        bpp,
        cr: SOURCE_BPP / bpp,
    }
}

pub fn rate(cs: &CompressedImage) -> Rate {
    rate_from_bits(cs.bit_len(), cs.header().pixel_count())
}

/// Compression ratio from a bits-per-pixel figure.
pub fn cr_from_bpp(bpp: f64) -> f64 {
    SOURCE_BPP / bpp
}

/// Rate and quality of one coded image.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QualityReport {
    pub psnr_db: f64,
    pub bpp: f64,
    pub cr: f64,
    pub mse_y: f64,
    pub mse_cb: f64,
    pub mse_cr: f64,
    pub compressed_bits: usize,
    pub pixels: usize,
}

impl QualityReport {
    pub fn measure(
        orig: &RgbImage,
        recon: &RgbImage,
        compressed_bits: usize,
    ) -> Result<Self, MetricsError> {
        let [mse_y, mse_cb, mse_cr] = ycbcr_mses(orig, recon)?;
        let pixels = orig.pixel_count();
        let Rate { bpp, cr } = rate_from_bits(compressed_bits, pixels);
        Ok(Self {
            psnr_db: psnr_from_mse(mse_y + mse_cb + mse_cr),
            bpp,
            cr,
            mse_y,
            mse_cb,
            mse_cr,
            compressed_bits,
            pixels,
        })
    }
}

/// Renders a PSNR value, using `inf` for lossless reconstructions.
pub fn format_db(v: f64) -> String {
    if v.is_infinite() {
        "inf".to_owned()
    } else {
        format!("{v:.4}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn planes3(v: f64, w: usize, h: usize) -> YcbcrImage {
        YcbcrImage {
            y: Plane::filled(w, h, v),
            cb: Plane::filled(w, h, v),
            cr: Plane::filled(w, h, v),
            mean_r: 0.0,
            mean_g: 0.0,
            mean_b: 0.0,
        }
    }

    #[test]
    fn mse_cases() {
        let a = Plane::filled(3, 2, 5.0);
        assert_eq!(mse(&a, &a).unwrap(), 0.0);
        assert_eq!(mse(&a, &a.offset(1.0)).unwrap(), 1.0);
        let b = Plane::from_samples(2, 1, vec![0.0, 0.0]);
        let c = Plane::from_samples(2, 1, vec![3.0, 4.0]);
        assert_eq!(mse(&b, &c).unwrap(), 12.5);
        assert!(mse(&a, &b).is_err());
    }

    #[test]
    fn psnr_cases() {
        let a = planes3(0.0, 4, 4);
        assert_eq!(psnr(&a, &a).unwrap(), f64::INFINITY);
        assert_eq!(format_db(psnr(&a, &a).unwrap()), "inf");
        // each plane off by 1: total MSE 3 -> 10 log10(65025)
        let b = planes3(1.0, 4, 4);
        assert!((psnr(&a, &b).unwrap() - 48.130_803_608_679_1).abs() < 1e-9);
        assert_eq!(psnr_from_mse(255.0 * 255.0 * 3.0), 0.0);
    }

    #[test]
    fn psnr_symmetric_and_translation_invariant() {
        let a = YcbcrImage {
            y: Plane::from_fn(4, 3, |x, y| (x + 2 * y) as f64),
            ..planes3(0.0, 4, 3)
        };
        let b = YcbcrImage {
            cb: Plane::from_fn(4, 3, |x, y| (x * y) as f64 - 1.0),
            ..planes3(0.5, 4, 3)
        };
        let shift = |img: &YcbcrImage| YcbcrImage {
            y: img.y.offset(7.0),
            cb: img.cb.offset(7.0),
            cr: img.cr.offset(7.0),
            ..img.clone()
        };
        let ab = psnr(&a, &b).unwrap();
        assert_eq!(ab, psnr(&b, &a).unwrap());
        assert!((ab - psnr(&shift(&a), &shift(&b)).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn table_one_compression_ratios() {
        // (bpp, CR) as printed for M-1 at N = 8
        assert!((cr_from_bpp(1.2555) - 19.1163).abs() < 0.01);
        assert!((cr_from_bpp(0.6220) - 38.5837).abs() < 0.01);
        assert_eq!(cr_from_bpp(24.0), 1.0);
    }

    #[test]
    fn report_invariants() {
        let a = RgbImage::from_fn(5, 4, |x, y| [x as u8 * 40, y as u8 * 50, 7]);
        let b = RgbImage::from_fn(5, 4, |x, y| [x as u8 * 40 + 1, y as u8 * 50, 9]);
        let r = QualityReport::measure(&a, &b, 777).unwrap();
        assert!((r.cr * r.bpp - 24.0).abs() <= 24.0 * 1e-9);
        assert!((r.bpp * r.pixels as f64 - 777.0).abs() <= 777.0 * 1e-9);
        assert!(r.psnr_db.is_finite());
        assert_eq!(
            QualityReport::measure(&a, &a, 8).unwrap().psnr_db,
            f64::INFINITY
        );
    }
}
