//! Fixtures shared by the criterion benches.

use randdiag_core::{haar_unitary, random_normal_matrix, ComplexDense, RngState};

pub const SIZES: [usize; 3] = [64, 128, 256];

/// Haar unitary of size `n`, fixed per size.
pub fn unitary_fixture(n: usize) -> ComplexDense {
    haar_unitary(n, &mut RngState::new(n as u64)).expect("n >= 1")
}

/// Random normal matrix of size `n`, fixed per size.
pub fn normal_fixture(n: usize) -> ComplexDense {
    random_normal_matrix(n, &mut RngState::new(1000 + n as u64))
        .expect("n >= 1")
        .0
}

/// `(A + A^*) / 2` of a normal fixture.
pub fn hermitian_fixture(n: usize) -> ComplexDense {
    normal_fixture(n).hermitian_split().expect("square").0
}
