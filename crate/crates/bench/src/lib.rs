//! Criterion benchmarks for spectral estimation, Fock-state Wigner grids and
//! tomographic reconstruction. Run them with `cargo bench -p qoptics-bench`.
