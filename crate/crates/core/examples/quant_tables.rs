// Print the luma and chroma quantization matrices for a quality factor.
//
// cargo run --example quant_tables -- [quality] [8|16|32]

use std::error::Error;

use edgedct::quant::{self, PlaneClass, Quality};
use edgedct::transform::BlockSize;

pub fn print_tables(quality: Quality, size: BlockSize) {
    println!(
        "quality {} (scale {}%), N={size}",
        quality.get(),
        quality.scale()
    );
    for class in [PlaneClass::Luma, PlaneClass::Chroma] {
        let q = quant::base_qmatrix(size, class, quality);
        println!("{class:?}");
        let n = size.get();
        // large blocks print only the top-left 8x8 corner
        for i in 0..n.min(8) {
            let row: String = (0..n.min(8))
                .map(|j| format!("{:4}", q.get(i, j)))
                .collect();
            println!("{row}");
        }
    }
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    print_tables(Quality::default(), BlockSize::B8);
    print_tables(Quality::new(90)?, BlockSize::B16);
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let quality = Quality::new(args.first().map_or(Ok(50), |s| s.parse())?)?;
    let size = match args.get(1) {
        Some(n) => BlockSize::from_edge(n.parse()?).ok_or("block size must be 8, 16 or 32")?,
        None => BlockSize::B8,
    };
    print_tables(quality, size);
    Ok(())
}
