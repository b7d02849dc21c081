//! Criterion benchmarks for the homology pipeline and the polygon group.
