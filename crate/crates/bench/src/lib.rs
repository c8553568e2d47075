//! Criterion benchmarks for the evaluators live under `benches/`.
