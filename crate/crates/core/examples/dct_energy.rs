// Block DCT on a real image: energy compaction along the zigzag scan and what
// quantization leaves behind.

use std::error::Error;

use edgedct::colorspace;
use edgedct::imageio;
use edgedct::quant::{self, PlaneClass, Quality};
use edgedct::transform::{self, BlockSize};

const INPUT: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/astronaut.ppm");

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let img = imageio::read_ppm(&std::fs::read(INPUT)?)?;
    let y = colorspace::forward(&img).y;
    for size in BlockSize::ALL {
        let (_, blocks) = transform::partition(&y, size);
        let zz = size.zigzag();
        let area = size.area();
        // cumulative energy share of the first k zigzag coefficients
        let mut energy = vec![0.0f64; area];
        let q = quant::base_qmatrix(size, PlaneClass::Luma, Quality::default());
        let mut nonzero = 0usize;
        for b in &blocks {
            let c = transform::dct2(b, size);
            for (k, &idx) in zz.order().iter().enumerate() {
                energy[k] += c.coeffs[idx] * c.coeffs[idx];
            }
            nonzero += quant::quantize(&c, &q).nonzero_ac();
        }
        let total: f64 = energy.iter().sum();
        let share = |k: usize| energy[..k].iter().sum::<f64>() / total;
        println!(
            "N={size:<2} {:>5} blocks  DC {:5.1}%  first 10 {:5.1}%  first {} {:5.1}%  non-zero AC after q50: {:.1}/block",
            blocks.len(),
            100.0 * share(1),
            100.0 * share(10),
            area / 4,
            100.0 * share(area / 4),
            nonzero as f64 / blocks.len() as f64
        );
    }

    let ramp: Vec<f64> = (0..64).map(|i| (i % 8) as f64 * 16.0 - 56.0).collect();
    let c = transform::dct2(&ramp, BlockSize::B8);
    println!("horizontal ramp, first row of coefficients:");
    println!(
        "  {}",
        (0..8)
            .map(|j| format!("{:8.2}", c.get(0, j)))
            .collect::<String>()
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
