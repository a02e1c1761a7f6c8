//! Complex Schur decomposition: Householder reduction to upper Hessenberg form
//! followed by single-shift implicit QR with Wilkinson shifts.

use crate::error::{Error, Result};
use crate::householder::{self, make_reflector};
use crate::matrix::{ComplexDense, C64, ZERO};

/// Total QR sweeps allowed, as a multiple of `n`.
const SWEEPS_PER_ROW: usize = 30;

/// Stalled sweeps on one window before an exceptional shift is used.
const EXCEPTIONAL_EVERY: usize = 10;

/// `A = U T U^*` with `U` unitary and `T` upper triangular.
#[derive(Clone, Debug)]
pub struct SchurDecomposition {
    pub u: ComplexDense,
    pub t: ComplexDense,
}

impl SchurDecomposition {
    /// `||A - U T U^*||_F`.
    pub fn reconstruction_residual(&self, a: &ComplexDense) -> Result<f64> {
        let rebuilt = self.u.matmul(&self.t)?.matmul(&self.u.adjoint())?;
        Ok(a.sub(&rebuilt)?.frobenius_norm())
    }

    pub fn eigenvalues(&self) -> Vec<C64> {
        self.t.diag()
    }
}

/// Unitary `Q` and upper Hessenberg `Hs` with `A = Q Hs Q^*`.
pub fn hessenberg(a: &ComplexDense) -> Result<(ComplexDense, ComplexDense)> {
    let n = a.square_dim("hessenberg")?;
    let mut h = a.clone();
    let mut reflectors: Vec<(Vec<C64>, C64)> = Vec::new();
    let mut work = Vec::new();
    for k in 0..n.saturating_sub(2) {
        let mut v: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        if v[1..].iter().all(|z| *z == ZERO) {
            // Column already reduced; an identity reflector keeps Q = I here.
            reflectors.push((v, ZERO));
            continue;
        }
        let r = make_reflector(&mut v);
        householder::apply_left(&mut h, &v, r.tau.conj(), k + 1, k, n, &mut work);
        householder::apply_right(&mut h, &v, r.tau, 0, n, k + 1);
        h[(k + 1, k)] = C64::new(r.beta, 0.0);
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
        reflectors.push((v, r.tau));
    }
    let q = householder::accumulate(n, &reflectors, 1);
    Ok((q, h))
}

/// Givens rotation `G = [c, s; -conj(s), c]` with `G [f; g] = [r; 0]`.
#[inline]
fn givens(f: C64, g: C64) -> (f64, C64) {
    if g == ZERO {
        return (1.0, ZERO);
    }
    if f == ZERO {
        return (0.0, g.conj() / g.norm());
    }
    let fa = f.norm();
    let rho = fa.hypot(g.norm());
    let c = fa / rho;
    let s = (f / fa) * g.conj() / rho;
    (c, s)
}

/// Eigenvalue of `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let p = (a - d) * 0.5;
    let bc = b * c;
    let disc = (p * p + bc).sqrt();
    let (plus, minus) = (p + disc, p - disc);
    let den = if plus.norm() >= minus.norm() {
        plus
    } else {
        minus
    };
    if den == ZERO {
        d
    } else {
        d - bc / den
    }
}

/// Complex Schur decomposition of a square matrix.
pub fn schur(a: &ComplexDense) -> Result<SchurDecomposition> {
    let n = a.square_dim("schur")?;
    if !a.frobenius_norm().is_finite() {
        return Err(Error::invalid("schur: input has non-finite entries"));
    }
    let (q, mut h) = hessenberg(a)?;
    // Rows of `w` are columns of U, so column rotations of U touch contiguous memory.
    let mut w = q.transpose();
    if n < 2 {
        return Ok(SchurDecomposition { u: q, t: h });
    }

    let eps = f64::EPSILON;
    let tiny = f64::MIN_POSITIVE * (n as f64 / eps);
    let max_sweeps = SWEEPS_PER_ROW * n;
    let mut total_sweeps = 0;
    let mut hi = n - 1;
    let mut stalled = 0;

    while hi > 0 {
        // Find the start of the unreduced block ending at `hi`.
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let tst = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if sub <= tiny || sub <= eps * tst {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            stalled = 0;
            continue;
        }
        if total_sweeps == max_sweeps {
            return Err(Error::NoConvergence {
                op: "schur",
                index: hi,
                iterations: total_sweeps,
            });
        }
        total_sweeps += 1;
        stalled += 1;

        let shift = if stalled % EXCEPTIONAL_EVERY == 0 {
            h[(hi, hi)] + 0.75 * h[(hi, hi - 1)].re.abs()
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };

        qr_sweep(&mut h, &mut w, lo, hi, shift);
    }

    // Everything below the diagonal is now an exact zero except untouched
    // deflated entries, which were zeroed above; clear for good measure.
    for i in 1..n {
        for j in 0..i {
            h[(i, j)] = ZERO;
        }
    }
    Ok(SchurDecomposition {
        u: w.transpose(),
        t: h,
    })
}

/// One implicit single-shift QR sweep on the active block `lo..=hi`.
fn qr_sweep(h: &mut ComplexDense, w: &mut ComplexDense, lo: usize, hi: usize, shift: C64) {
    let n = h.rows();
    for k in lo..hi {
        let (f, g) = if k == lo {
            (h[(lo, lo)] - shift, h[(lo + 1, lo)])
        } else {
            (h[(k, k - 1)], h[(k + 1, k - 1)])
        };
        let (c, s) = givens(f, g);

        // Rows k, k+1 from the left: G H.
        let col0 = if k == lo { k } else { k - 1 };
        {
            let cols = h.cols();
            let data = h.as_mut_slice();
            let (top, bottom) = data.split_at_mut((k + 1) * cols);
            let rk = &mut top[k * cols + col0..k * cols + n];
            let rk1 = &mut bottom[col0..n];
            for (x, y) in rk.iter_mut().zip(rk1.iter_mut()) {
                let (xv, yv) = (*x, *y);
                *x = xv * c + s * yv;
                *y = -s.conj() * xv + yv * c;
            }
        }
        if k > lo {
            h[(k + 1, k - 1)] = ZERO;
        }

        // Columns k, k+1 from the right: H G^*.
        let row_end = (k + 2).min(hi) + 1;
        for i in 0..row_end {
            let x = h[(i, k)];
            let y = h[(i, k + 1)];
            h[(i, k)] = x * c + s.conj() * y;
            h[(i, k + 1)] = -s * x + y * c;
        }

        // U <- U G^*, i.e. rows k, k+1 of W.
        let cols = w.cols();
        let data = w.as_mut_slice();
        let (top, bottom) = data.split_at_mut((k + 1) * cols);
        let wk = &mut top[k * cols..(k + 1) * cols];
        let wk1 = &mut bottom[..cols];
        for (x, y) in wk.iter_mut().zip(wk1.iter_mut()) {
            let (xv, yv) = (*x, *y);
            *x = xv * c + s.conj() * yv;
            *y = -s * xv + yv * c;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{haar_unitary, RngState};

    fn check(a: &ComplexDense, dec: &SchurDecomposition) {
        let n = a.rows() as f64;
        let fro = a.frobenius_norm();
        assert!(dec.reconstruction_residual(a).unwrap() <= 1e-12 * n * fro);
        assert!(dec.u.unitarity_residual().unwrap() <= 1e-13 * n);
        for i in 0..a.rows() {
            for j in 0..i {
                assert_eq!(dec.t[(i, j)], ZERO);
            }
        }
    }

    #[test]
    fn hessenberg_small_cases() {
        let a = ComplexDense::from_rows(&[
            [C64::new(1.0, 2.0), C64::new(0.5, 0.0)],
            [C64::new(-3.0, 1.0), C64::new(4.0, -1.0)],
        ]);
        let (q, hs) = hessenberg(&a).unwrap();
        assert_eq!(q, ComplexDense::identity(2));
        assert_eq!(hs, a);

        let upper = ComplexDense::from_fn(4, 4, |i, j| {
            if i <= j {
                C64::new((i + 2 * j) as f64, 1.0)
            } else {
                ZERO
            }
        });
        let (q, hs) = hessenberg(&upper).unwrap();
        assert_eq!(q, ComplexDense::identity(4));
        assert_eq!(hs, upper);
    }

    #[test]
    fn hessenberg_random() {
        let mut rng = RngState::new(8);
        let a = rng.complex_gaussian_matrix(8, 8);
        let (q, hs) = hessenberg(&a).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                if i > j + 1 {
                    assert_eq!(hs[(i, j)], ZERO);
                }
            }
        }
        let rebuilt = q.matmul(&hs).unwrap().matmul(&q.adjoint()).unwrap();
        assert!(a.sub(&rebuilt).unwrap().frobenius_norm() <= 1e-13 * 8.0 * a.frobenius_norm());
        assert!(q.unitarity_residual().unwrap() <= 1e-13 * 8.0);
        assert!(hessenberg(&ComplexDense::zeros(2, 3)).is_err());
    }

    #[test]
    fn diagonal_input_is_its_own_schur_form() {
        let d = [C64::new(1.0, 1.0), C64::new(-2.0, 0.0), C64::new(0.0, 3.0)];
        let a = ComplexDense::from_diag(&d);
        let dec = schur(&a).unwrap();
        check(&a, &dec);
        assert_eq!(dec.t.offdiag_norm().unwrap(), 0.0);
        let mut got = dec.eigenvalues();
        let mut want = d.to_vec();
        got.sort_by(|x, y| x.re.total_cmp(&y.re));
        want.sort_by(|x, y| x.re.total_cmp(&y.re));
        assert_eq!(got, want);
    }

    #[test]
    fn rotation_generator() {
        let a = ComplexDense::from_real_rows(&[[0.0, 1.0], [-1.0, 0.0]]);
        let dec = schur(&a).unwrap();
        check(&a, &dec);
        let mut ev = dec.eigenvalues();
        ev.sort_by(|x, y| x.im.total_cmp(&y.im));
        assert!((ev[0] - C64::new(0.0, -1.0)).norm() <= 1e-14);
        assert!((ev[1] - C64::new(0.0, 1.0)).norm() <= 1e-14);
    }

    #[test]
    fn general_and_normal_inputs() {
        let mut rng = RngState::new(21);
        for n in [3, 10, 40] {
            let a = rng.complex_gaussian_matrix(n, n);
            let dec = schur(&a).unwrap();
            check(&a, &dec);
            let tr: C64 = dec.eigenvalues().iter().sum();
            assert!((tr - a.trace()).norm() <= 1e-12 * a.frobenius_norm());

            let u = haar_unitary(n, &mut rng).unwrap();
            let dec = schur(&u).unwrap();
            check(&u, &dec);
            assert!(dec.t.offdiag_norm().unwrap() <= 1e-11 * u.frobenius_norm());
        }
    }

    #[test]
    fn rejects_rectangular() {
        assert!(matches!(
            schur(&ComplexDense::zeros(3, 2)),
            Err(Error::NotSquare { .. })
        ));
    }
}
