//! Benchmark-only crate; see `benches/llv.rs`.
