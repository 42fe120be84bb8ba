// Rate/distortion curve over the quality factor at a fixed block size and
// scheme.
//
// cargo run --release --example quality_sweep -- [input.ppm] [8|16|32] [m1|m2|m3]

use std::error::Error;
use std::path::Path;

use edgedct::codec::{self, EncodeConfig};
use edgedct::imageio;
use edgedct::metrics::{self, QualityReport};
use edgedct::{BlockSize, Quality, Scheme};

const DEFAULT_INPUT: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/rocket.ppm");

pub fn sweep(
    input: &Path,
    size: BlockSize,
    scheme: Scheme,
) -> Result<Vec<(u8, QualityReport)>, Box<dyn Error>> {
    let img = imageio::read_ppm(&std::fs::read(input)?)?;
    let mut points = Vec::new();
    println!("N={size} {scheme}");
    for q in [5, 10, 25, 50, 75, 90, 95, 100] {
        let cfg = EncodeConfig::default()
            .with_block_size(size)
            .with_scheme(scheme)
            .with_quality(Quality::new(q)?);
        let enc = codec::encode_image(&img, &cfg)?;
        let dec = codec::decode_image(enc.stream.as_bytes())?;
        let r = QualityReport::measure(&img, &dec.rgb, enc.stream.bit_len())?;
        println!(
            "  q={q:<3} {:>7.4} bpp {:>8} dB  CR {:>7.2}",
            r.bpp,
            metrics::format_db(r.psnr_db),
            r.cr
        );
        points.push((q as u8, r));
    }
    Ok(points)
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    sweep(Path::new(DEFAULT_INPUT), BlockSize::B8, Scheme::M1)?;
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let input = args.first().map_or(DEFAULT_INPUT, String::as_str);
    let size = match args.get(1) {
        Some(n) => BlockSize::from_edge(n.parse()?).ok_or("block size must be 8, 16 or 32")?,
        None => BlockSize::B8,
    };
    let scheme = args.get(2).map_or(Ok(Scheme::M1), |s| s.parse())?;
    sweep(Path::new(input), size, scheme)?;
    Ok(())
}
