//! Criterion benchmarks for `rscn-core`; see `benches/`.
