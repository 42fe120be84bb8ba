// Compare the three AC retention schemes on one image at every block size.
//
// cargo run --release --example scheme_compare -- [input.ppm]

use std::error::Error;
use std::path::Path;

use edgedct::bench;
use edgedct::codec::EncodeConfig;
use edgedct::imageio;
use edgedct::metrics;
use edgedct::{BlockSize, Scheme};

const DEFAULT_INPUT: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/chelsea.ppm");

pub fn compare(input: &Path) -> Result<(), Box<dyn Error>> {
    let img = imageio::read_ppm(&std::fs::read(input)?)?;
    let name = input.file_stem().unwrap_or_default().to_string_lossy();
    println!("{name} ({}x{})", img.width(), img.height());
    println!(
        "{:>3} {:>6} {:>8} {:>9} {:>8} {:>7}",
        "N", "scheme", "bpp", "psnr_db", "cr", "edge%"
    );
    for size in BlockSize::ALL {
        let mut m1_cr = None;
        for s in Scheme::ALL {
            let cfg = EncodeConfig::default().with_block_size(size).with_scheme(s);
            let row = bench::measure(&name, &img, &cfg)?;
            let gain = m1_cr.map_or(String::new(), |c: f64| format!("  x{:.2}", row.cr / c));
            m1_cr.get_or_insert(row.cr);
            println!(
                "{:>3} {:>6} {:>8.4} {:>9} {:>8.2} {:>7.1}{gain}",
                size.get(),
                s.to_string(),
                row.bpp,
                metrics::format_db(row.psnr_db),
                row.cr,
                row.edge_block_pct
            );
        }
    }
    Ok(())
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    compare(Path::new(DEFAULT_INPUT))
}

fn main() -> Result<(), Box<dyn Error>> {
    let input = std::env::args()
        .nth(1)
        .unwrap_or_else(|| DEFAULT_INPUT.to_owned());
    compare(Path::new(&input))
}
