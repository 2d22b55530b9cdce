//! Criterion benchmarks for the qil kernels live in `benches/`.
