//! Criterion benchmarks for the metric and degradation kernels live in
//! `benches/`.
