// Sweep block sizes and schemes over a directory of PPMs and print a
// bpp / PSNR / CR table with per-configuration averages.
//
// cargo run --release --example corpus_bench -- [image_dir] [out.csv]

use std::error::Error;
use std::path::{Path, PathBuf};

use edgedct::bench::{self, BenchReport};
use edgedct::codec::EncodeConfig;
use edgedct::metrics;
use edgedct::{BlockSize, Scheme};

const DEFAULT_DIR: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data");

pub fn print_table(report: &BenchReport) {
    for size in BlockSize::ALL {
        println!("N={size}");
        println!(
            "  {:<12}{}",
            "image",
            Scheme::ALL
                .map(|s| format!("{:>27}", format!("{s}: bpp / psnr / cr")))
                .concat()
        );
        for r in report
            .rows
            .iter()
            .chain(&report.averages)
            .filter(|r| r.block_size == size && r.scheme == Scheme::M1)
        {
            let cells: String = Scheme::ALL
                .iter()
                .filter_map(|&s| {
                    report
                        .rows
                        .iter()
                        .chain(&report.averages)
                        .find(|o| o.image == r.image && o.block_size == size && o.scheme == s)
                })
                .map(|o| {
                    format!(
                        "{:>9.4} {:>8} {:>8.2}",
                        o.bpp,
                        metrics::format_db(o.psnr_db),
                        o.cr
                    )
                })
                .collect();
            println!("  {:<12}{cells}", r.image);
        }
    }
}

pub fn bench_dir(dir: &Path, csv: Option<&Path>) -> Result<BenchReport, Box<dyn Error>> {
    let corpus = bench::load_corpus(dir)?;
    let report = bench::run(
        &corpus,
        &BlockSize::ALL,
        &Scheme::ALL,
        &EncodeConfig::default(),
    );
    print_table(&report);
    if let Some(path) = csv {
        bench::write_csv(&report, std::fs::File::create(path)?)?;
        println!("wrote {}", path.display());
    }
    Ok(report)
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    bench_dir(Path::new(DEFAULT_DIR), None)?;
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    let mut args = std::env::args_os().skip(1).map(PathBuf::from);
    let dir = args.next().unwrap_or_else(|| DEFAULT_DIR.into());
    let csv = args.next();
    bench_dir(&dir, csv.as_deref())?;
    Ok(())
}
