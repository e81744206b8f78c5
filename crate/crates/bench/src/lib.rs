//! Benchmark-only crate; see `benches/kernels.rs` for the suite.
//!
//! Run with `cargo bench -p spinlab-bench`.
