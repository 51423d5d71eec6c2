//! Shared fixtures for the benchmarks.

use freqcube_core::cubes::FreqParams;

pub fn latin(q: usize, n: usize) -> FreqParams {
    FreqParams::new(q, n, 1, vec![1; q]).expect("valid latin parameters")
}
