//! Criterion benchmarks for the kernel, search, corpus and qubit layer.
//! Run with `cargo bench -p symlog-bench`.
