//! Spectral decomposition of complex Hermitian matrices.
//!
//! Householder reduction to a real tridiagonal matrix (off-diagonals made
//! nonnegative by a diagonal phase scaling), implicit-shift QL with a Wilkinson
//! shift on that tridiagonal, and accumulation of the real rotations into the
//! complex basis.

use crate::error::{Error, Result};
use crate::householder::{self, inner, make_reflector};
use crate::matrix::{ComplexDense, C64, ONE, ZERO};

/// QL sweeps allowed per eigenvalue before giving up.
const MAX_SWEEPS: usize = 30;

/// Inputs further than this (relative, Frobenius) from Hermitian are rejected.
const HERMITIAN_TOL: f64 = 1e-12;

/// Eigenvalues in nondecreasing order and the unitary whose columns are the
/// matching eigenvectors.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: ComplexDense,
}

impl EigenDecomposition {
    /// `||M V - V diag(values)||_F`.
    pub fn residual(&self, m: &ComplexDense) -> Result<f64> {
        let mv = m.matmul(&self.vectors)?;
        let mut vd = self.vectors.clone();
        for (j, &l) in self.values.iter().enumerate() {
            vd.scale_col(j, C64::new(l, 0.0));
        }
        Ok(mv.sub(&vd)?.frobenius_norm())
    }
}

/// Real symmetric tridiagonal form `M = Q T Q^*`.
#[derive(Clone, Debug)]
pub struct Tridiagonal {
    pub q: ComplexDense,
    /// Diagonal of `T`.
    pub d: Vec<f64>,
    /// Sub/super-diagonal of `T`, all entries nonnegative.
    pub e: Vec<f64>,
}

impl Tridiagonal {
    pub fn to_dense(&self) -> ComplexDense {
        let n = self.d.len();
        let mut t = ComplexDense::zeros(n, n);
        for (i, &di) in self.d.iter().enumerate() {
            t[(i, i)] = C64::new(di, 0.0);
        }
        for (i, &ei) in self.e.iter().enumerate() {
            t[(i + 1, i)] = C64::new(ei, 0.0);
            t[(i, i + 1)] = C64::new(ei, 0.0);
        }
        t
    }
}

fn symmetrized(m: &ComplexDense, op: &'static str) -> Result<ComplexDense> {
    let n = m.square_dim(op)?;
    let norm = m.frobenius_norm();
    if !norm.is_finite() {
        return Err(Error::invalid(format!(
            "{op}: input has non-finite entries"
        )));
    }
    let defect = m.hermitian_defect()?;
    if defect > HERMITIAN_TOL * norm {
        return Err(Error::invalid(format!(
            "{op}: input is not Hermitian (||M - M^*||_F = {defect:.3e}, ||M||_F = {norm:.3e})"
        )));
    }
    let mut h = ComplexDense::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            h[(i, j)] = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
        }
    }
    Ok(h)
}

/// Householder tridiagonalization of a Hermitian matrix.
pub fn tridiagonalize(m: &ComplexDense) -> Result<Tridiagonal> {
    let a = symmetrized(m, "tridiagonalize")?;
    Ok(tridiagonalize_hermitian(a))
}

fn tridiagonalize_hermitian(mut a: ComplexDense) -> Tridiagonal {
    let n = a.rows();
    let mut reflectors: Vec<(Vec<C64>, C64)> = Vec::with_capacity(n.saturating_sub(1));
    let mut sub = Vec::with_capacity(n.saturating_sub(1));
    let mut x = Vec::with_capacity(n);

    for k in 0..n.saturating_sub(1) {
        let m = n - k - 1;
        let mut v: Vec<C64> = (k + 1..n).map(|i| a[(i, k)]).collect();
        let r = make_reflector(&mut v);
        sub.push(r.beta);
        a[(k + 1, k)] = C64::new(r.beta, 0.0);
        a[(k, k + 1)] = C64::new(r.beta, 0.0);
        for i in k + 2..n {
            a[(i, k)] = ZERO;
            a[(k, i)] = ZERO;
        }

        if r.tau != ZERO {
            // x = tau * A22 v
            x.clear();
            for i in 0..m {
                let row = &a.row(k + 1 + i)[k + 1..];
                let s = row.iter().zip(&v).fold(ZERO, |acc, (p, q)| acc + p * q);
                x.push(r.tau * s);
            }
            // w = x - tau/2 (x^* v) v
            let alpha = -0.5 * r.tau * inner(&x, &v);
            for (xi, vi) in x.iter_mut().zip(&v) {
                *xi += alpha * vi;
            }
            // A22 -= v w^* + w v^*
            for i in 0..m {
                let (vi, wi) = (v[i], x[i]);
                let row = &mut a.row_mut(k + 1 + i)[k + 1..];
                for ((aij, vj), wj) in row.iter_mut().zip(&v).zip(&x) {
                    *aij -= vi * wj.conj() + wi * vj.conj();
                }
            }
        }
        reflectors.push((v, r.tau));
    }

    let d: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    let mut q = householder::accumulate(n, &reflectors, 1);

    // Scale so the off-diagonal becomes nonnegative: T' = P^* T P with
    // p_{k+1} = p_k * sign(t_k).
    let mut e = Vec::with_capacity(sub.len());
    let mut phase = ONE;
    for (k, &t) in sub.iter().enumerate() {
        if t < 0.0 {
            phase = -phase;
        }
        e.push(t.abs());
        if phase != ONE {
            q.scale_col(k + 1, phase);
        }
    }
    Tridiagonal { q, d, e }
}

/// Implicit QL on a symmetric tridiagonal; `zt` rows are rotated alongside
/// (row `j` of `zt` is column `j` of the accumulated orthogonal matrix).
fn tridiagonal_ql(d: &mut [f64], e_in: &[f64], zt: &mut [Vec<f64>]) -> Result<()> {
    let n = d.len();
    if n < 2 {
        return Ok(());
    }
    let eps = f64::EPSILON;
    let mut e = e_in.to_vec();
    e.push(0.0);

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            if sweeps == MAX_SWEEPS {
                return Err(Error::NoConvergence {
                    op: "eigh",
                    index: l,
                    iterations: sweeps,
                });
            }
            sweeps += 1;

            // Wilkinson shift from the leading 2x2 of the unreduced block.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;

                let (lo, hi) = zt.split_at_mut(i + 1);
                let (zi, zi1) = (&mut lo[i], &mut hi[0]);
                for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                    let f = *b;
                    *b = s * *a + c * f;
                    *a = c * *a - s * f;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input is symmetrized as `(M + M^*)/2` first. Eigenvalues come back in
/// ascending order; each eigenvector is scaled so that its largest-modulus
/// entry is real and positive.
pub fn eigh(m: &ComplexDense) -> Result<EigenDecomposition> {
    let a = symmetrized(m, "eigh")?;
    let n = a.rows();
    let Tridiagonal { q, mut d, e } = tridiagonalize_hermitian(a);

    let mut zt: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row = vec![0.0; n];
            row[i] = 1.0;
            row
        })
        .collect();
    tridiagonal_ql(&mut d, &e, &mut zt)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let values: Vec<f64> = order.iter().map(|&i| d[i]).collect();

    // Row c of `vt` is eigenvector c: vt[c][r] = sum_k q[r][k] * z[k][order[c]].
    let mut vt = ComplexDense::zeros(n, n);
    for (c, &src) in order.iter().enumerate() {
        let z = &zt[src];
        let out = vt.row_mut(c);
        for (r, o) in out.iter_mut().enumerate() {
            let qrow = q.row(r);
            let (mut re, mut im) = (0.0, 0.0);
            for (qk, &zk) in qrow.iter().zip(z) {
                re += qk.re * zk;
                im += qk.im * zk;
            }
            *o = C64::new(re, im);
        }
        normalize_phase(out);
    }
    Ok(EigenDecomposition {
        values,
        vectors: vt.transpose(),
    })
}

/// Rotates `v` so its first largest-modulus entry is real positive.
pub(crate) fn normalize_phase(v: &mut [C64]) {
    let mut best = 0;
    let mut best_abs = -1.0;
    for (i, z) in v.iter().enumerate() {
        let a = z.norm_sqr();
        if a > best_abs {
            best_abs = a;
            best = i;
        }
    }
    if best_abs <= 0.0 {
        return;
    }
    let pivot = v[best];
    let phase = pivot.conj() / pivot.norm();
    for z in v.iter_mut() {
        *z *= phase;
    }
    v[best] = C64::new(v[best].norm(), 0.0);
}
