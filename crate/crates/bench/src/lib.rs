//! Benchmarks live in `benches/`; run them with `cargo bench -p cue_moments_bench`.
