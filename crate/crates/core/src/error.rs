use crate::edgedetect::EdgeError;
use crate::entropy::{DecodeError, EncodeError};
use crate::imageio::PpmError;
use crate::metrics::MetricsError;
use crate::quant::QuantError;
use crate::scheme::SchemeError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Any failure surfaced by the codec pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Ppm(#[from] PpmError),
    #[error(transparent)]
    Edge(#[from] EdgeError),
    #[error(transparent)]
    Quant(#[from] QuantError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}
