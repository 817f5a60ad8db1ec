//! Fixtures shared by the criterion benches.

use qwr_core::catalog::{steane, surface};
use qwr_core::{BinMatrix, BitVec, CssCode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Dense random matrix with a fixed seed.
pub fn random_matrix(rows: usize, cols: usize, seed: u64) -> BinMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = BinMatrix::zeros(0, cols);
    for _ in 0..rows {
        let bits: Vec<u8> = (0..cols).map(|_| u8::from(rng.random_bool(0.5))).collect();
        m.push_row(&BitVec::from_bits(&bits));
    }
    m
}

/// Named codes used across benches, smallest first.
pub fn codes() -> Vec<(&'static str, CssCode)> {
    vec![("steane", steane()), ("surface3", surface(3).unwrap()), ("surface4", surface(4).unwrap())]
}
