//! Shared fixtures for the criterion benchmarks.

use lsgen_core::gen::random_aig;
use lsgen_core::opt::strash;
use lsgen_core::Circuit;

/// A mid-size seeded AIG with a live cone, suitable for repeated runs.
pub fn bench_aig(seed: u64, pis: usize, ands: usize) -> Circuit {
    strash(&random_aig(seed, pis, ands, pis / 2)).unwrap()
}
