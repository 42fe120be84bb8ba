use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use edgedct::bench;
use edgedct::codec::{self, EncodeConfig, ForceClassification};
use edgedct::imageio;
use edgedct::metrics::{self, QualityReport};
use edgedct::{BlockSize, CannyParams, CompressedImage, Error, Quality, Scheme};

const EXIT_USAGE: u8 = 1;
const EXIT_IO: u8 = 2;
const EXIT_BITSTREAM: u8 = 3;

#[derive(Parser)]
#[command(
    name = "edc",
    version,
    about = "Edge-adaptive block-DCT color image codec"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compress a binary PPM into an EDC1 stream.
    Encode {
        input: PathBuf,
        output: PathBuf,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Decompress an EDC1 stream into a binary PPM.
    Decode { input: PathBuf, output: PathBuf },
    /// Compare two PPMs in YCbCr space.
    Metrics {
        original: PathBuf,
        reconstructed: PathBuf,
        /// Stream whose size is used to report bpp and CR.
        #[arg(long)]
        compressed: Option<PathBuf>,
    },
    /// Sweep block sizes and schemes over a directory of PPMs and write CSV.
    Bench {
        #[arg(long)]
        images: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_delimiter = ',', value_parser = parse_block_size, default_value = "8,16,32")]
        block_sizes: Vec<BlockSize>,
        #[arg(long, value_delimiter = ',', default_value = "m1,m2,m3")]
        schemes: Vec<Scheme>,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
}

#[derive(Args)]
struct ConfigArgs {
    #[arg(long, value_parser = parse_block_size, default_value = "8")]
    block_size: BlockSize,
    #[arg(long, default_value = "m3")]
    scheme: Scheme,
    #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u8).range(1..=100))]
    quality: u8,
    #[arg(long, default_value_t = 1.4)]
    sigma: f64,
    #[arg(long, default_value_t = 0.1)]
    canny_low: f64,
    #[arg(long, default_value_t = 0.3)]
    canny_high: f64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    min_edge_pixels: u16,
    #[arg(long, default_value = "auto")]
    force_classification: ForceClassification,
}

fn parse_block_size(s: &str) -> Result<BlockSize, String> {
    s.parse::<usize>()
        .ok()
        .and_then(BlockSize::from_edge)
        .ok_or_else(|| format!("block size must be 8, 16 or 32, got {s:?}"))
}

impl ConfigArgs {
    fn build(&self) -> Result<EncodeConfig, Error> {
        Ok(EncodeConfig {
            block_size: self.block_size,
            scheme: self.scheme,
            quality: Quality::new(i64::from(self.quality))?,
            canny: CannyParams::new(self.sigma, self.canny_low, self.canny_high)?,
            min_edge_pixels: self.min_edge_pixels,
            force: self.force_classification,
        })
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Error> {
    std::fs::read(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), Error> {
    std::fs::write(path, bytes).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Decode(_) => EXIT_BITSTREAM,
        Error::Config(_) | Error::Edge(_) | Error::Quant(_) | Error::Scheme(_) => EXIT_USAGE,
        Error::Ppm(_) | Error::Io { .. } | Error::Encode(_) | Error::Metrics(_) => EXIT_IO,
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Encode { input, output, cfg } => {
            let cfg = cfg.build()?;
            let img = imageio::read_ppm(&read(&input)?)?;
            let enc = codec::encode_image(&img, &cfg)?;
            write(&output, enc.stream.as_bytes())?;
            let rate = metrics::rate(&enc.stream);
            println!(
                "bpp={:.6} cr={:.6} edge_block_pct={:.4} bits={} blocks={}",
                rate.bpp,
                rate.cr,
                enc.map.edge_percent(),
                enc.stream.bit_len(),
                enc.map.len()
            );
        }
        Command::Decode { input, output } => {
            let dec = codec::decode_image(&read(&input)?)?;
            write(&output, &imageio::write_ppm(&dec.rgb))?;
        }
        Command::Metrics {
            original,
            reconstructed,
            compressed,
        } => {
            let orig = imageio::read_ppm(&read(&original)?)?;
            let recon = imageio::read_ppm(&read(&reconstructed)?)?;
            let bits = match &compressed {
                Some(p) => CompressedImage::from_bytes(read(p)?)?.bit_len(),
                None => 0,
            };
            let r = QualityReport::measure(&orig, &recon, bits)?;
            let mut line = format!(
                "psnr_db={} mse_y={:.6} mse_cb={:.6} mse_cr={:.6} rgb_psnr_db={}",
                metrics::format_db(r.psnr_db),
                r.mse_y,
                r.mse_cb,
                r.mse_cr,
                metrics::format_db(metrics::rgb_psnr(&orig, &recon)?)
            );
            if compressed.is_some() {
                line.push_str(&format!(" bpp={:.6} cr={:.6}", r.bpp, r.cr));
            }
            println!("{line}");
        }
        Command::Bench {
            images,
            out,
            block_sizes,
            schemes,
            cfg,
        } => {
            let cfg = cfg.build()?;
            let corpus = bench::load_corpus(&images)?;
            let report = bench::run(&corpus, &block_sizes, &schemes, &cfg);
            let mut buf = Vec::new();
            bench::write_csv(&report, &mut buf).map_err(|e| Error::Io {
                path: out.display().to_string(),
                source: std::io::Error::other(e),
            })?;
            write(&out, &buf)?;
            eprintln!(
                "{} images, {} rows written to {}",
                corpus.len(),
                report.rows.len(),
                out.display()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
