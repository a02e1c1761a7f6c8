//! Seeded random sampling for every experiment in the crate.
//!
//! The bit source is ChaCha12 (`rand_chacha::ChaCha12Rng`) seeded through
//! `seed_from_u64`. It is fixed: changing it changes every stored experiment.
//! Normals come from the Marsaglia polar method, which yields draws in pairs;
//! the second draw of each pair is cached in the state.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::householder::{self, make_reflector};
use crate::matrix::{ComplexDense, C64};

/// Deterministic random stream. Not shareable across threads; give each worker its own.
#[derive(Clone, Debug)]
pub struct RngState {
    seed: u64,
    bits: ChaCha12Rng,
    spare_normal: Option<f64>,
}

impl RngState {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            bits: ChaCha12Rng::seed_from_u64(seed),
            spare_normal: None,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn next_u64(&mut self) -> u64 {
        self.bits.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `0..bound` by rejection, so there is no modulo bias.
    pub fn uniform_index(&mut self, bound: usize) -> usize {
        assert!(bound > 0, "empty range");
        let bound = bound as u64;
        let zone = u64::MAX - u64::MAX % bound;
        loop {
            let x = self.next_u64();
            if x < zone {
                return (x % bound) as usize;
            }
        }
    }

    /// One `N(0, 1)` draw.
    pub fn std_normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.uniform() - 1.0;
            let v = 2.0 * self.uniform() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let factor = (-2.0 * s.ln() / s).sqrt();
                self.spare_normal = Some(v * factor);
                return u * factor;
            }
        }
    }

    /// Standard complex Gaussian: independent real and imaginary parts with variance 1/2.
    pub fn complex_gaussian(&mut self) -> C64 {
        let re = self.std_normal();
        let im = self.std_normal();
        C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }

    pub fn complex_gaussian_matrix(&mut self, rows: usize, cols: usize) -> ComplexDense {
        ComplexDense::from_fn(rows, cols, |_, _| self.complex_gaussian())
    }

    /// Uniformly random permutation of `0..n` (Fisher-Yates).
    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut p: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = self.uniform_index(i + 1);
            p.swap(i, j);
        }
        p
    }
}

/// Haar-distributed `n x n` unitary: QR of a complex Gaussian matrix with the
/// column phases fixed so that `R` has a positive diagonal.
pub fn haar_unitary(n: usize, state: &mut RngState) -> Result<ComplexDense> {
    if n == 0 {
        return Err(Error::invalid("haar_unitary: n must be at least 1"));
    }
    let mut a = state.complex_gaussian_matrix(n, n);
    let mut reflectors = Vec::with_capacity(n);
    let mut r_diag = Vec::with_capacity(n);
    let mut work = Vec::new();
    for k in 0..n {
        let mut v: Vec<C64> = (k..n).map(|i| a[(i, k)]).collect();
        let r = make_reflector(&mut v);
        householder::apply_left(&mut a, &v, r.tau.conj(), k, k + 1, n, &mut work);
        r_diag.push(r.beta);
        reflectors.push((v, r.tau));
    }
    let mut q = householder::accumulate(n, &reflectors, 0);
    // The reflectors leave R with a real diagonal, so its phases are signs.
    for (k, &beta) in r_diag.iter().enumerate() {
        if beta < 0.0 {
            q.scale_col(k, C64::new(-1.0, 0.0));
        }
    }
    Ok(q)
}

/// GUE matrix scaled so that `E[trace(M^2)] = trace_sq_target`.
///
/// Diagonal entries are real `N(0, s2)`, strictly upper entries complex with
/// real and imaginary parts `N(0, s2/2)`, mirrored conjugate below, where
/// `s2 = target / n^2`.
pub fn gue(n: usize, trace_sq_target: f64, state: &mut RngState) -> Result<ComplexDense> {
    if n == 0 {
        return Err(Error::invalid("gue: n must be at least 1"));
    }
    if !(trace_sq_target > 0.0 && trace_sq_target.is_finite()) {
        return Err(Error::invalid(format!(
            "gue: trace_sq_target must be positive and finite, got {trace_sq_target}"
        )));
    }
    let sigma = (trace_sq_target / (n * n) as f64).sqrt();
    let off = sigma * std::f64::consts::FRAC_1_SQRT_2;
    let mut m = ComplexDense::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = C64::new(sigma * state.std_normal(), 0.0);
        for j in i + 1..n {
            let re = off * state.std_normal();
            let im = off * state.std_normal();
            m[(i, j)] = C64::new(re, im);
            m[(j, i)] = C64::new(re, -im);
        }
    }
    Ok(m)
}

/// SplitMix64 finalizer; stable across builds, unlike `std::hash`.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-trial seed `master ^ hash(label, n, run)`.
pub fn derive_seed(master: u64, label: &str, n: usize, run: usize) -> u64 {
    let mut h = 0xCBF2_9CE4_8422_2325u64;
    for b in label.bytes() {
        h = mix64(h ^ u64::from(b));
    }
    h = mix64(h ^ n as u64);
    h = mix64(h ^ run as u64);
    master ^ h
}
