use edgedct::codec::{self, EncodeConfig, ForceClassification};
use edgedct::entropy::{self, DecodeError};
use edgedct::metrics::QualityReport;
use edgedct::{BlockSize, Quality, RgbImage, Scheme};
use proptest::prelude::*;

fn arb_image() -> impl Strategy<Value = RgbImage> {
    (1usize..40, 1usize..40).prop_flat_map(|(w, h)| {
        proptest::collection::vec(any::<u8>(), 3 * w * h)
            .prop_map(move |data| RgbImage::new(w, h, data).unwrap())
    })
}

fn arb_config() -> impl Strategy<Value = EncodeConfig> {
    (0usize..3, 0usize..3, 1i64..=100, 0usize..3).prop_map(|(n, s, q, f)| {
        EncodeConfig::default()
            .with_block_size(BlockSize::ALL[n])
            .with_scheme(Scheme::ALL[s])
            .with_quality(Quality::new(q).unwrap())
            .with_force(
                [
                    ForceClassification::Auto,
                    ForceClassification::AllEdge,
                    ForceClassification::AllNonEdge,
                ][f],
            )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn any_image_roundtrips(img in arb_image(), cfg in arb_config()) {
        let enc = codec::encode_image(&img, &cfg).unwrap();
        let dec = codec::decode_image(enc.stream.as_bytes()).unwrap();
        prop_assert_eq!((dec.rgb.width(), dec.rgb.height()), (img.width(), img.height()));
        prop_assert_eq!(&dec.map, &enc.map);
        prop_assert_eq!(dec.header.scheme, cfg.scheme);
        let again = codec::encode_image(&img, &cfg).unwrap();
        prop_assert_eq!(again.stream.as_bytes(), enc.stream.as_bytes());
    }

    #[test]
    fn every_prefix_is_rejected(img in arb_image()) {
        let enc = codec::encode_image(&img, &EncodeConfig::default()).unwrap();
        let bytes = enc.stream.as_bytes();
        for len in 0..bytes.len() {
            prop_assert!(entropy::decode(&bytes[..len]).is_err(), "prefix {} accepted", len);
        }
        let mut longer = bytes.to_vec();
        longer.push(0);
        let trailing = matches!(entropy::decode(&longer), Err(DecodeError::TrailingBytes { .. }));
        prop_assert!(trailing);
    }
}

#[test]
fn all_edge_m1_beats_dc_only() {
    let img = RgbImage::from_fn(64, 48, |x, y| {
        [
            (x * 4) as u8,
            ((x + 2 * y) * 2) as u8,
            if (x + y) % 9 < 4 { 220 } else { 30 },
        ]
    });
    let measure = |force| {
        let cfg = EncodeConfig::default()
            .with_scheme(Scheme::M1)
            .with_force(force);
        let enc = codec::encode_image(&img, &cfg).unwrap();
        let dec = codec::decode_image(enc.stream.as_bytes()).unwrap();
        QualityReport::measure(&img, &dec.rgb, enc.stream.bit_len()).unwrap()
    };
    let full = measure(ForceClassification::AllEdge);
    let dc = measure(ForceClassification::AllNonEdge);
    assert!(full.psnr_db > dc.psnr_db);
    assert!(full.bpp > dc.bpp);
}

#[test]
fn header_records_settings() {
    let img = RgbImage::from_fn(70, 17, |x, y| [x as u8, y as u8, 9]);
    let cfg = EncodeConfig::default()
        .with_block_size(BlockSize::B32)
        .with_quality(Quality::new(77).unwrap());
    let enc = codec::encode_image(&img, &cfg).unwrap();
    let h = enc.stream.header();
    assert_eq!((h.width, h.height), (70, 17));
    assert_eq!((h.blocks_x, h.blocks_y), (3, 1));
    assert_eq!(h.quality.get(), 77);
    assert_eq!(h.block_size, BlockSize::B32);
    assert!((f64::from(h.sigma) - 1.4).abs() < 1e-6);
}
