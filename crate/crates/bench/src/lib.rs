//! Criterion benchmarks for thurston-core live in benches/.
