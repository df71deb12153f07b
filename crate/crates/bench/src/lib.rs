//! Criterion benchmarks for `bisim-core`; see `benches/`.
