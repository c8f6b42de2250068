//! Criterion benchmarks for the `sfc-core` pipeline; see `benches/`.
