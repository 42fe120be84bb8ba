//! Edge-adaptive block-DCT color image codec.
//!
//! The pipeline removes the per-channel means of an RGB image, converts it to
//! YCbCr, classifies fixed-size blocks as edge or non-edge using a Canny edge
//! map of the luma plane, and codes every block with an orthonormal 2D DCT
//! followed by Q-matrix quantization. Non-edge blocks keep only their DC
//! coefficient; edge blocks keep all, 70% or 50% of their non-zero AC
//! coefficients depending on the [`Scheme`]. The result is entropy coded with
//! differential DC, JPEG-style run/size symbols and per-image canonical
//! Huffman tables into a self-describing bitstream.
//!
//! ```no_run
//! use edgedct::{codec, imageio, EncodeConfig};
//!
//! let bytes = std::fs::read("input.ppm").unwrap();
//! let img = imageio::read_ppm(&bytes).unwrap();
//! let encoded = codec::encode_image(&img, &EncodeConfig::default()).unwrap();
//! let decoded = codec::decode_image(encoded.stream.as_bytes()).unwrap();
//! println!("{} bpp", encoded.stream.bpp());
//! # let _ = decoded;
//! ```

pub mod bench;
pub mod codec;
pub mod colorspace;
pub mod edgedetect;
pub mod entropy;
mod error;
pub mod imageio;
pub mod metrics;
mod plane;
pub mod quant;
pub mod scheme;
pub mod transform;

pub use codec::{EncodeConfig, ForceClassification};
pub use colorspace::YcbcrImage;
pub use edgedetect::{CannyParams, EdgeMap};
pub use entropy::{CompressedImage, Header};
pub use error::{Error, Result};
pub use imageio::RgbImage;
pub use plane::Plane;
pub use quant::{PlaneClass, Quality, QuantMatrix, QuantizedBlock};
pub use scheme::{ClassificationMap, Scheme};
pub use transform::{BlockGrid, BlockSize, CoeffBlock};
