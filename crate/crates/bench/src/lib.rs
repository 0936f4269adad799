//! Benchmarks only; run them with `cargo bench -p kbound-bench`.
