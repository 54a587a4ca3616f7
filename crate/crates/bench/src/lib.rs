//! Benchmarks for the heat-trace pipeline live in `benches/`.
