//! End-to-end encoder and decoder.
//!
//! Encoding: mean removal and YCbCr conversion, Canny on Y, block
//! classification shared by all three planes, per-block DCT, quantization
//! against the luma or chroma matrix, AC retention, entropy coding.
//! Decoding runs the same stages in reverse and rounds only at the very end.

use std::fmt;
use std::str::FromStr;

use crate::colorspace::{self, YcbcrImage};
use crate::edgedetect::{self, CannyParams, EdgeMap};
use crate::entropy::{self, CompressedImage, DecodedStream, Header};
use crate::error::{Error, Result};
use crate::imageio::RgbImage;
use crate::plane::Plane;
use crate::quant::{self, PlaneClass, Quality, QuantMatrix, QuantizedBlock};
use crate::scheme::{self, ClassificationMap, Scheme};
use crate::transform::{self, BlockGrid, BlockSize};

/// Overrides the edge detector's block classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ForceClassification {
    #[default]
    Auto,
    AllEdge,
    AllNonEdge,
}

impl FromStr for ForceClassification {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Self::Auto),
            "all-edge" => Ok(Self::AllEdge),
            "all-nonedge" => Ok(Self::AllNonEdge),
            _ => Err(Error::Config(format!(
                "unknown classification {s:?}, expected auto, all-edge or all-nonedge"
            ))),
        }
    }
}

impl fmt::Display for ForceClassification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Auto => "auto",
            Self::AllEdge => "all-edge",
            Self::AllNonEdge => "all-nonedge",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EncodeConfig {
    pub block_size: BlockSize,
    pub scheme: Scheme,
    pub quality: Quality,
    pub canny: CannyParams,
    pub min_edge_pixels: u16,
    pub force: ForceClassification,
}

impl Default for EncodeConfig {
    fn default() -> Self {
        Self {
            block_size: BlockSize::B8,
            scheme: Scheme::M3,
            quality: Quality::default(),
            canny: CannyParams::default(),
            min_edge_pixels: 1,
            force: ForceClassification::Auto,
        }
    }
}

impl EncodeConfig {
    pub fn with_block_size(mut self, block_size: BlockSize) -> Self {
        self.block_size = block_size;
        self
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_quality(mut self, quality: Quality) -> Self {
        self.quality = quality;
        self
    }

    pub fn with_force(mut self, force: ForceClassification) -> Self {
        self.force = force;
        self
    }
}

/// Output of [`encode_image`] with the intermediate state kept for inspection.
#[derive(Debug, Clone)]
pub struct Encoded {
    pub stream: CompressedImage,
    pub grid: BlockGrid,
    pub map: ClassificationMap,
    pub edges: EdgeMap,
    /// Retained zigzag blocks for Y, Cb, Cr.
    pub planes: [Vec<QuantizedBlock>; 3],
}

/// Quantization matrices for Y, Cb and Cr.
pub fn plane_matrices(size: BlockSize, quality: Quality) -> [QuantMatrix; 3] {
    let luma = quant::base_qmatrix(size, PlaneClass::Luma, quality);
    let chroma = quant::base_qmatrix(size, PlaneClass::Chroma, quality);
    [luma, chroma.clone(), chroma]
}

/// DCT and quantization of every block of a plane, before retention.
pub fn quantize_plane(p: &Plane, q: &QuantMatrix) -> (BlockGrid, Vec<QuantizedBlock>) {
    let (grid, blocks) = transform::partition(p, q.size);
    let quantized = blocks
        .iter()
        .map(|b| quant::quantize(&transform::dct2(b, q.size), q))
        .collect();
    (grid, quantized)
}

/// Dequantization, inverse DCT and cropping of one plane.
pub fn reconstruct_plane(grid: &BlockGrid, blocks: &[QuantizedBlock], q: &QuantMatrix) -> Plane {
    let pixels: Vec<Vec<f64>> = blocks
        .iter()
        .map(|qb| transform::idct2(&quant::dequantize(qb, q)))
        .collect();
    transform::reassemble(grid, &pixels)
}

pub fn encode_image(img: &RgbImage, cfg: &EncodeConfig) -> Result<Encoded> {
    let (w, h) = (img.width(), img.height());
    let width = u16::try_from(w).map_err(|_| Error::Config(format!("width {w} exceeds 65535")))?;
    let height =
        u16::try_from(h).map_err(|_| Error::Config(format!("height {h} exceeds 65535")))?;
    if cfg.min_edge_pixels == 0 {
        return Err(scheme::SchemeError::ZeroMinEdgePixels.into());
    }

    let ycc = colorspace::forward(img);
    let grid = BlockGrid::new(w, h, cfg.block_size);
    let edges = match cfg.force {
        ForceClassification::Auto => edgedetect::canny(&ycc.y, &cfg.canny),
        _ => EdgeMap::empty(w, h),
    };
    let map = match cfg.force {
        ForceClassification::Auto => {
            scheme::classify(&edges, &grid, usize::from(cfg.min_edge_pixels))?
        }
        ForceClassification::AllEdge => {
            ClassificationMap::uniform(grid.blocks_x, grid.blocks_y, true)
        }
        ForceClassification::AllNonEdge => {
            ClassificationMap::uniform(grid.blocks_x, grid.blocks_y, false)
        }
    };

    let matrices = plane_matrices(cfg.block_size, cfg.quality);
    let mut planes: [Vec<QuantizedBlock>; 3] = Default::default();
    for (i, plane) in ycc.planes().into_iter().enumerate() {
        let (_, blocks) = quantize_plane(plane, &matrices[i]);
        planes[i] = blocks
            .iter()
            .enumerate()
            .map(|(b, qb)| scheme::retain(qb, map.is_edge(b), cfg.scheme))
            .collect();
    }

    let header = Header {
        block_size: cfg.block_size,
        scheme: cfg.scheme,
        quality: cfg.quality,
        width,
        height,
        mean_r: ycc.mean_r as f32,
        mean_g: ycc.mean_g as f32,
        mean_b: ycc.mean_b as f32,
        sigma: cfg.canny.sigma() as f32,
        canny_low: cfg.canny.low() as f32,
        canny_high: cfg.canny.high() as f32,
        min_edge_pixels: cfg.min_edge_pixels,
        blocks_x: grid.blocks_x as u16,
        blocks_y: grid.blocks_y as u16,
    };
    let stream = entropy::encode(&planes, &map, &header)?;
    Ok(Encoded {
        stream,
        grid,
        map,
        edges,
        planes,
    })
}

#[derive(Debug, Clone)]
pub struct Decoded {
    pub rgb: RgbImage,
    /// Reconstruction before the inverse color transform, unrounded.
    pub ycbcr: YcbcrImage,
    pub header: Header,
    pub map: ClassificationMap,
}

/// Reconstructs YCbCr planes from decoded stream contents.
pub fn reconstruct(stream: &DecodedStream) -> YcbcrImage {
    let h = &stream.header;
    let grid = BlockGrid::new(usize::from(h.width), usize::from(h.height), h.block_size);
    let matrices = plane_matrices(h.block_size, h.quality);
    let [y, cb, cr] = [0, 1, 2].map(|i| reconstruct_plane(&grid, &stream.planes[i], &matrices[i]));
    let [mean_r, mean_g, mean_b] = h.means();
    YcbcrImage {
        y,
        cb,
        cr,
        mean_r,
        mean_g,
        mean_b,
    }
}

pub fn decode_image(bytes: &[u8]) -> Result<Decoded> {
    let stream = entropy::decode(bytes)?;
    let ycbcr = reconstruct(&stream);
    Ok(Decoded {
        rgb: colorspace::inverse(&ycbcr),
        ycbcr,
        header: stream.header,
        map: stream.map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::QualityReport;

    fn gradient_image(w: usize, h: usize) -> RgbImage {
        RgbImage::from_fn(w, h, |x, y| {
            let bump = if (x / 5 + y / 7) % 2 == 0 { 40 } else { 0 };
            [(x * 3 + bump) as u8, (y * 4) as u8, ((x + y) * 2) as u8]
        })
    }

    #[test]
    fn uniform_gray_codes_no_edges() {
        let img = RgbImage::from_fn(64, 64, |_, _| [90, 90, 90]);
        let cfg = EncodeConfig::default().with_scheme(Scheme::M1);
        let enc = encode_image(&img, &cfg).unwrap();
        assert_eq!(enc.map.edge_count(), 0);
        // header, 8-byte bitmap, two one-symbol DC tables, three 8-byte payloads
        let expected_bytes = entropy::HEADER_LEN + 8 + 4 * 16 + 2 + 3 * (4 + 8);
        assert_eq!(enc.stream.as_bytes().len(), expected_bytes);
        let dec = decode_image(enc.stream.as_bytes()).unwrap();
        assert_eq!(dec.rgb, img);
    }

    #[test]
    fn roundtrip_sanity() {
        let img = gradient_image(37, 29);
        for size in BlockSize::ALL {
            let enc = encode_image(&img, &EncodeConfig::default().with_block_size(size)).unwrap();
            let dec = decode_image(enc.stream.as_bytes()).unwrap();
            assert_eq!((dec.rgb.width(), dec.rgb.height()), (37, 29));
            assert_eq!(dec.map, enc.map);
            let r = QualityReport::measure(&img, &dec.rgb, enc.stream.bit_len()).unwrap();
            assert!(r.psnr_db.is_finite() && r.bpp > 0.0);
        }
    }

    #[test]
    fn near_lossless_setting() {
        let img = gradient_image(48, 40);
        let cfg = EncodeConfig::default()
            .with_scheme(Scheme::M1)
            .with_force(ForceClassification::AllEdge)
            .with_quality(Quality::new(100).unwrap());
        let enc = encode_image(&img, &cfg).unwrap();
        let dec = decode_image(enc.stream.as_bytes()).unwrap();
        let r = QualityReport::measure(&img, &dec.rgb, enc.stream.bit_len()).unwrap();
        assert!(r.psnr_db > 50.0, "{}", r.psnr_db);
    }

    #[test]
    fn tiny_image() {
        let img = RgbImage::from_fn(1, 1, |_, _| [200, 10, 30]);
        let enc = encode_image(&img, &EncodeConfig::default()).unwrap();
        assert_eq!(decode_image(enc.stream.as_bytes()).unwrap().rgb, img);
    }

    #[test]
    fn force_parse() {
        for f in [
            ForceClassification::Auto,
            ForceClassification::AllEdge,
            ForceClassification::AllNonEdge,
        ] {
            assert_eq!(f.to_string().parse::<ForceClassification>().unwrap(), f);
        }
        assert!("some".parse::<ForceClassification>().is_err());
    }
}
