#![allow(dead_code)]

macro_rules! example_test {
    ($module:ident, $file:literal) => {
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));

            #[test]
            fn runs() {
                run_example().expect(concat!($file, " should run"));
            }
        }
    };
}

example_test!(roundtrip, "roundtrip.rs");
example_test!(edge_map, "edge_map.rs");
example_test!(scheme_compare, "scheme_compare.rs");
example_test!(quality_sweep, "quality_sweep.rs");
example_test!(dct_energy, "dct_energy.rs");
example_test!(quant_tables, "quant_tables.rs");
example_test!(stream_inspect, "stream_inspect.rs");
example_test!(corpus_bench, "corpus_bench.rs");
