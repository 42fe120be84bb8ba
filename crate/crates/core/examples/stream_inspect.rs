// Break a compressed stream down into header, classification bitmap, Huffman
// tables and plane payloads.
//
// cargo run --release --example stream_inspect -- [stream.edc]

use std::error::Error;

use edgedct::codec::{self, EncodeConfig};
use edgedct::entropy::huffman::HuffmanTable;
use edgedct::entropy::{self, HEADER_LEN};
use edgedct::imageio;

const DEFAULT_INPUT: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/coffee.ppm");

pub fn inspect(bytes: &[u8]) -> Result<(), Box<dyn Error>> {
    let stream = entropy::decode(bytes)?;
    let h = &stream.header;
    println!(
        "{}x{} N={} {} q={} grid {}x{}, means {:.2}/{:.2}/{:.2}",
        h.width,
        h.height,
        h.block_size,
        h.scheme,
        h.quality.get(),
        h.blocks_x,
        h.blocks_y,
        h.mean_r,
        h.mean_g,
        h.mean_b
    );
    println!("  header    {HEADER_LEN:>7} bytes");
    let bitmap = h.block_count().div_ceil(8);
    println!(
        "  bitmap    {bitmap:>7} bytes, {} edge blocks",
        stream.map.edge_count()
    );
    let mut at = HEADER_LEN + bitmap;
    for name in ["DC luma", "AC luma", "DC chroma", "AC chroma"] {
        let (table, used) = HuffmanTable::read_from(&bytes[at..]).ok_or("bad table")?;
        let longest = table.lengths().map(|(_, len)| len).max().unwrap_or(0);
        println!(
            "  {name:<9} {used:>7} bytes, {:>3} symbols, longest code {longest}",
            table.symbols.len()
        );
        at += used;
    }
    for (name, blocks) in ["Y", "Cb", "Cr"].iter().zip(&stream.planes) {
        let len = u32::from_le_bytes(bytes[at..at + 4].try_into()?) as usize;
        let ac: usize = blocks.iter().map(|b| b.nonzero_ac()).sum();
        println!("  {name:<9} {:>7} bytes, {ac} non-zero AC", len + 4);
        at += 4 + len;
    }
    println!(
        "  total     {:>7} bytes, {:.4} bpp",
        bytes.len(),
        8.0 * bytes.len() as f64 / h.pixel_count() as f64
    );
    Ok(())
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let img = imageio::read_ppm(&std::fs::read(DEFAULT_INPUT)?)?;
    let enc = codec::encode_image(&img, &EncodeConfig::default())?;
    inspect(enc.stream.as_bytes())
}

fn main() -> Result<(), Box<dyn Error>> {
    match std::env::args().nth(1) {
        Some(path) => inspect(&std::fs::read(path)?),
        None => run_example(),
    }
}
