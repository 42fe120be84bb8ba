//! Rate/quality sweep over an image corpus, emitting one CSV row per
//! (image, block size, scheme) plus per-(block size, scheme) averages.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::codec::{self, EncodeConfig};
use crate::error::{Error, Result};
use crate::imageio::{self, RgbImage};
use crate::metrics::{self, QualityReport};
use crate::scheme::Scheme;
use crate::transform::BlockSize;

/// Label used for the image column of average rows.
pub const AVERAGE_LABEL: &str = "Average";

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub image: String,
    pub block_size: BlockSize,
    pub scheme: Scheme,
    pub bpp: f64,
    pub psnr_db: f64,
    pub cr: f64,
    pub edge_block_pct: f64,
    pub rgb_psnr_db: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BenchReport {
    /// Sorted by image name, block size, scheme.
    pub rows: Vec<BenchRow>,
    /// One per (block size, scheme) combination with at least one row.
    pub averages: Vec<BenchRow>,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    image: &'a str,
    #[serde(rename = "N")]
    n: usize,
    scheme: String,
    bpp: f64,
    psnr_db: f64,
    cr: f64,
    edge_block_pct: f64,
    rgb_psnr_db: f64,
}

/// Reads every `*.ppm` in `dir`, sorted by file name. Unreadable files are
/// logged and skipped.
pub fn load_corpus(dir: &Path) -> Result<Vec<(String, RgbImage)>> {
    let entries = std::fs::read_dir(dir).map_err(|source| Error::Io {
        path: dir.display().to_string(),
        source,
    })?;
    let mut paths: Vec<_> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e.eq_ignore_ascii_case("ppm")))
        .collect();
    paths.sort();
    let mut images = Vec::with_capacity(paths.len());
    for path in paths {
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        match std::fs::read(&path) {
            Ok(bytes) => match imageio::read_ppm(&bytes) {
                Ok(img) => images.push((name, img)),
                Err(e) => log::warn!("skipping {}: {e}", path.display()),
            },
            Err(e) => log::warn!("skipping {}: {e}", path.display()),
        }
    }
    Ok(images)
}

/// Encodes, decodes and measures one configuration.
pub fn measure(name: &str, img: &RgbImage, cfg: &EncodeConfig) -> Result<BenchRow> {
    let enc = codec::encode_image(img, cfg)?;
    let dec = codec::decode_image(enc.stream.as_bytes())?;
    let report = QualityReport::measure(img, &dec.rgb, enc.stream.bit_len())?;
    Ok(BenchRow {
        image: name.to_owned(),
        block_size: cfg.block_size,
        scheme: cfg.scheme,
        bpp: report.bpp,
        psnr_db: report.psnr_db,
        cr: report.cr,
        edge_block_pct: enc.map.edge_percent(),
        rgb_psnr_db: metrics::rgb_psnr(img, &dec.rgb)?,
    })
}

/// Runs the sweep. Work is spread over threads; the output order does not
/// depend on scheduling.
pub fn run(
    images: &[(String, RgbImage)],
    block_sizes: &[BlockSize],
    schemes: &[Scheme],
    base: &EncodeConfig,
) -> BenchReport {
    let jobs: Vec<(usize, BlockSize, Scheme)> = (0..images.len())
        .flat_map(|i| {
            block_sizes
                .iter()
                .flat_map(move |&n| schemes.iter().map(move |&s| (i, n, s)))
        })
        .collect();
    let mut rows: Vec<BenchRow> = jobs
        .par_iter()
        .filter_map(|&(i, n, s)| {
            let (name, img) = &images[i];
            let cfg = base.with_block_size(n).with_scheme(s);
            match measure(name, img, &cfg) {
                Ok(row) => Some(row),
                Err(e) => {
                    log::warn!("{name} N={n} {s}: {e}");
                    None
                }
            }
        })
        .collect();
    rows.sort_by(|a, b| {
        (a.image.as_str(), a.block_size, a.scheme).cmp(&(b.image.as_str(), b.block_size, b.scheme))
    });
    let averages = averages(&rows);
    BenchReport { rows, averages }
}

/// Arithmetic means per (block size, scheme). The average `cr` is
/// `24 / mean(bpp)` so every row satisfies `cr * bpp = 24`.
pub fn averages(rows: &[BenchRow]) -> Vec<BenchRow> {
    let mut keys: Vec<(BlockSize, Scheme)> =
        rows.iter().map(|r| (r.block_size, r.scheme)).collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .map(|(n, s)| {
            let group: Vec<&BenchRow> = rows
                .iter()
                .filter(|r| r.block_size == n && r.scheme == s)
                .collect();
            let mean = |f: fn(&BenchRow) -> f64| {
                group.iter().map(|r| f(r)).sum::<f64>() / group.len() as f64
            };
            let bpp = mean(|r| r.bpp);
            BenchRow {
                image: AVERAGE_LABEL.to_owned(),
                block_size: n,
                scheme: s,
                bpp,
                psnr_db: mean(|r| r.psnr_db),
                cr: metrics::cr_from_bpp(bpp),
                edge_block_pct: mean(|r| r.edge_block_pct),
                rgb_psnr_db: mean(|r| r.rgb_psnr_db),
            }
        })
        .collect()
}

/// Writes data rows, then average rows, with a header line.
pub fn write_csv<W: Write>(report: &BenchReport, out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    for r in report.rows.iter().chain(&report.averages) {
        w.serialize(CsvRow {
            image: &r.image,
            n: r.block_size.get(),
            scheme: r.scheme.to_string(),
            bpp: r.bpp,
            psnr_db: r.psnr_db,
            cr: r.cr,
            edge_block_pct: r.edge_block_pct,
            rgb_psnr_db: r.rgb_psnr_db,
        })?;
    }
    w.flush()?;
    Ok(())
}
