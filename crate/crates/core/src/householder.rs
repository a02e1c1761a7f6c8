//! Complex Householder reflectors `H = I - tau * v * v^*` with `v[0] = 1`.
//!
//! `H^*` maps `(alpha, x)` to `(beta, 0, ..., 0)` with `beta` real, as in LAPACK's
//! `zlarfg`. `H` is not Hermitian when `tau` is complex, so the left and right
//! application helpers take the conjugation explicitly.

use crate::matrix::{axpy, dotc, ComplexDense, C64, ONE, ZERO};

pub(crate) struct Reflector {
    pub tau: C64,
    pub beta: f64,
}

/// Overwrites `x` with the reflector vector (`x[0] = 1`) and returns `tau`, `beta`.
pub(crate) fn make_reflector(x: &mut [C64]) -> Reflector {
    let alpha = x[0];
    let tail_sq: f64 = x[1..].iter().map(|z| z.norm_sqr()).sum();
    if tail_sq == 0.0 && alpha.im == 0.0 {
        x[0] = ONE;
        return Reflector {
            tau: ZERO,
            beta: alpha.re,
        };
    }
    let norm = (alpha.norm_sqr() + tail_sq).sqrt();
    let beta = if alpha.re >= 0.0 { -norm } else { norm };
    let tau = C64::new((beta - alpha.re) / beta, -alpha.im / beta);
    let scale = ONE / (alpha - beta);
    for z in &mut x[1..] {
        *z *= scale;
    }
    x[0] = ONE;
    Reflector { tau, beta }
}

/// `A[r0.., c0..c1] = (I - t v v^*) A[r0.., c0..c1]`; pass `t = conj(tau)` to apply `H^*`.
pub(crate) fn apply_left(
    a: &mut ComplexDense,
    v: &[C64],
    t: C64,
    r0: usize,
    c0: usize,
    c1: usize,
    work: &mut Vec<C64>,
) {
    if t == ZERO || c0 >= c1 {
        return;
    }
    work.clear();
    work.resize(c1 - c0, ZERO);
    for (i, &vi) in v.iter().enumerate() {
        let row = &a.row(r0 + i)[c0..c1];
        axpy(vi.conj(), row, work);
    }
    for (i, &vi) in v.iter().enumerate() {
        let coef = -t * vi;
        let row = &mut a.row_mut(r0 + i)[c0..c1];
        axpy(coef, work, row);
    }
}

/// `A[r0..r1, c0..] = A[r0..r1, c0..] (I - t v v^*)`; `t = tau` applies `H`.
pub(crate) fn apply_right(
    a: &mut ComplexDense,
    v: &[C64],
    t: C64,
    r0: usize,
    r1: usize,
    c0: usize,
) {
    if t == ZERO {
        return;
    }
    let m = v.len();
    for i in r0..r1 {
        let row = &mut a.row_mut(i)[c0..c0 + m];
        // s = row . v
        let s = row.iter().zip(v).fold(ZERO, |acc, (x, y)| acc + x * y);
        let coef = -t * s;
        for (x, vj) in row.iter_mut().zip(v) {
            *x += coef * vj.conj();
        }
    }
}

/// Accumulates `Q = H_0 H_1 ... H_{k-1}` where reflector `j` acts on indices
/// `offset + j ..` and is stored as `(v, tau)`.
pub(crate) fn accumulate(n: usize, reflectors: &[(Vec<C64>, C64)], offset: usize) -> ComplexDense {
    let mut q = ComplexDense::identity(n);
    let mut work = Vec::new();
    for (j, (v, tau)) in reflectors.iter().enumerate().rev() {
        let start = offset + j;
        apply_left(&mut q, v, *tau, start, start, n, &mut work);
    }
    q
}

/// `conj(x) . y` re-exported for the reductions.
#[inline]
pub(crate) fn inner(x: &[C64], y: &[C64]) -> C64 {
    dotc(x, y)
}
