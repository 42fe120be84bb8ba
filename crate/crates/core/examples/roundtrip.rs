// Compress a PPM, decompress it, and report rate and quality.
//
// cargo run --release --example roundtrip -- [input.ppm] [output.ppm]

use std::error::Error;
use std::path::{Path, PathBuf};

use edgedct::codec::{self, EncodeConfig};
use edgedct::imageio;
use edgedct::metrics::{self, QualityReport};

const DEFAULT_INPUT: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/coffee.ppm");

pub fn roundtrip(input: &Path, output: &Path) -> Result<QualityReport, Box<dyn Error>> {
    let img = imageio::read_ppm(&std::fs::read(input)?)?;
    let cfg = EncodeConfig::default();
    let enc = codec::encode_image(&img, &cfg)?;
    let dec = codec::decode_image(enc.stream.as_bytes())?;
    std::fs::write(output, imageio::write_ppm(&dec.rgb))?;

    let report = QualityReport::measure(&img, &dec.rgb, enc.stream.bit_len())?;
    println!(
        "{}x{} N={} {}",
        img.width(),
        img.height(),
        cfg.block_size,
        cfg.scheme
    );
    println!("  stream     {} bytes", enc.stream.as_bytes().len());
    println!("  edge       {:.1}% of blocks", enc.map.edge_percent());
    println!("  rate       {:.4} bpp, CR {:.2}", report.bpp, report.cr);
    println!(
        "  psnr       {} dB (Y/Cb/Cr average)",
        metrics::format_db(report.psnr_db)
    );
    println!(
        "  rgb psnr   {} dB",
        metrics::format_db(metrics::rgb_psnr(&img, &dec.rgb)?)
    );
    println!("  wrote      {}", output.display());
    Ok(report)
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let out = std::env::temp_dir().join("edgedct_roundtrip.ppm");
    roundtrip(Path::new(DEFAULT_INPUT), &out)?;
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    let mut args = std::env::args_os().skip(1).map(PathBuf::from);
    let input = args.next().unwrap_or_else(|| DEFAULT_INPUT.into());
    let output = args
        .next()
        .unwrap_or_else(|| std::env::temp_dir().join("edgedct_roundtrip.ppm"));
    roundtrip(&input, &output)?;
    Ok(())
}
