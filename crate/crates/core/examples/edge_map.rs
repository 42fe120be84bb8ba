// Run Canny on the luma plane and save the edge mask and the block
// classification as PPMs.
//
// cargo run --release --example edge_map -- [input.ppm] [sigma low high]

use std::error::Error;
use std::path::Path;

use edgedct::colorspace;
use edgedct::edgedetect::{self, CannyParams};
use edgedct::imageio::{self, RgbImage};
use edgedct::scheme;
use edgedct::transform::{BlockGrid, BlockSize};

const DEFAULT_INPUT: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/astronaut.ppm");

pub fn edge_map(input: &Path, params: &CannyParams, out_dir: &Path) -> Result<(), Box<dyn Error>> {
    let img = imageio::read_ppm(&std::fs::read(input)?)?;
    let y = colorspace::forward(&img).y;
    let trace = edgedetect::canny_trace(&y, params).ok_or("image too small for edge detection")?;
    let edges = &trace.edges;
    println!(
        "sigma={} low={} high={}: {} edge pixels ({:.2}%), thresholds {:.1}/{:.1}",
        params.sigma(),
        params.low(),
        params.high(),
        edges.count(),
        100.0 * edges.count() as f64 / (img.pixel_count()) as f64,
        trace.weak_threshold,
        trace.strong_threshold,
    );

    let mask = RgbImage::from_fn(img.width(), img.height(), |x, y| {
        if edges.get(x, y) {
            [255; 3]
        } else {
            [0; 3]
        }
    });
    std::fs::write(out_dir.join("edges.ppm"), imageio::write_ppm(&mask))?;

    for size in BlockSize::ALL {
        let grid = BlockGrid::new(img.width(), img.height(), size);
        let map = scheme::classify(edges, &grid, 1)?;
        println!(
            "  N={size:<2} {:>5} blocks, {:5.1}% edge",
            map.len(),
            map.edge_percent()
        );
        if size == BlockSize::B8 {
            // non-edge blocks dimmed
            let n = size.get();
            let overlay = RgbImage::from_fn(img.width(), img.height(), |x, y| {
                let p = img.pixel(x, y);
                if map.is_edge((y / n) * grid.blocks_x + x / n) {
                    p
                } else {
                    p.map(|c| c / 4)
                }
            });
            std::fs::write(out_dir.join("blocks8.ppm"), imageio::write_ppm(&overlay))?;
        }
    }
    println!("  wrote edges.ppm and blocks8.ppm to {}", out_dir.display());
    Ok(())
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    edge_map(
        Path::new(DEFAULT_INPUT),
        &CannyParams::default(),
        &std::env::temp_dir(),
    )
}

fn main() -> Result<(), Box<dyn Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let input = args.first().map_or(DEFAULT_INPUT, String::as_str);
    let params = match &args[1.min(args.len())..] {
        [s, l, h] => CannyParams::new(s.parse()?, l.parse()?, h.parse()?)?,
        _ => CannyParams::default(),
    };
    edge_map(Path::new(input), &params, &std::env::temp_dir())
}
