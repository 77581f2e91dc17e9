//! Inputs shared by the benchmarks in `benches/` and checked by the tests.

use isoindex_core::poly::IntPoly;
use isoindex_core::{IntMatrix, PeriodicSequence};

/// Alternating `5, -3, 5, -3, ...` with the given period.
pub fn alternating_sequence(period: usize) -> PeriodicSequence {
    PeriodicSequence::new((1..=period).map(|n| if n % 2 == 0 { -3 } else { 5 }).collect()).unwrap()
}

/// `sigma^1 - sigma^2 + 2 sigma^3` written over two periods.
pub fn mixed_sequence() -> PeriodicSequence {
    PeriodicSequence::new(vec![1, -1, 7, -1, 1, 5, 1, -1, 7, -1, 1, 5]).unwrap()
}

/// Deterministic dense `n x n` matrix with entries in `-5..=5`.
pub fn dense_matrix(n: usize) -> IntMatrix {
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| ((i * 7 + j * 13 + i * j) % 11) as i64 - 5).collect())
        .collect();
    IntMatrix::from_rows(&rows).unwrap()
}

/// Companion matrix of `Phi_12 Phi_8 Phi_5 Phi_1`, degree 13.
pub fn cyclotomic_companion() -> IntMatrix {
    // constant term first
    let factors: [&[i64]; 4] = [&[1, 0, -1, 0, 1], &[1, 0, 0, 0, 1], &[1, 1, 1, 1, 1], &[-1, 1]];
    let p = factors
        .iter()
        .fold(IntPoly::one(), |acc, f| acc.mul(&IntPoly::from_i64(f)));
    IntMatrix::companion(&p)
}
