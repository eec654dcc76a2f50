//! No library code; this crate exists to host the criterion benchmarks.
