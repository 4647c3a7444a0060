//! Criterion benchmarks for `sctk-core`; see `benches/`.
