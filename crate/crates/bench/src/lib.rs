//! Benchmarks for quatcm-core live in `benches/`.
