//! Randomized diagonalization of normal matrices.
//!
//! A normal `A` splits as `A = H + S` with `H` Hermitian, `S` skew-Hermitian
//! and `HS = SH`. The pair `H`, `iS` is a commuting family of Hermitian
//! matrices, so a unitary that diagonalizes the single Hermitian matrix
//! `mu_h * H + mu_s * iS` for independent standard-normal `mu_h`, `mu_s`
//! diagonalizes both of them, and hence `A`, almost surely.

use crate::eigh::eigh;
use crate::error::{Error, Result};
use crate::matrix::{ComplexDense, C64};
use crate::rng::RngState;

/// Output of [`rand_diag`] / [`fixed_comb_diag`].
#[derive(Clone, Debug)]
pub struct RandDiagResult {
    /// Unitary whose columns (approximately) diagonalize the input.
    pub u: ComplexDense,
    pub mu_h: f64,
    pub mu_s: f64,
    /// Ascending eigenvalues of `mu_h * H + mu_s * iS`.
    pub eigenvalues_of_combination: Vec<f64>,
}

impl RandDiagResult {
    /// Smallest gap between consecutive eigenvalues of the combination.
    /// Small gaps are where the computed eigenvectors are least reliable.
    pub fn min_gap(&self) -> Option<f64> {
        self.eigenvalues_of_combination
            .windows(2)
            .map(|w| w[1] - w[0])
            .min_by(f64::total_cmp)
    }
}

/// Post-run diagnostics. Costs two matrix products, so it is not part of [`rand_diag`].
#[derive(Clone, Copy, Debug)]
pub struct Diagnostics {
    /// `||A A^* - A^* A||_F`.
    pub normality_residual: f64,
    /// `normality_residual / ||A||_F^2`.
    pub relative_normality_residual: f64,
    pub min_gap: Option<f64>,
}

impl Diagnostics {
    /// Relative normality residual above which the input should not be
    /// considered normal.
    pub const NORMALITY_TOL: f64 = 1e-12;

    pub fn is_normal(&self) -> bool {
        self.relative_normality_residual <= Self::NORMALITY_TOL
    }
}

pub fn diagnose(a: &ComplexDense, result: &RandDiagResult) -> Result<Diagnostics> {
    let normality_residual = a.normality_residual()?;
    let fro = a.frobenius_norm();
    let relative_normality_residual = if fro > 0.0 {
        normality_residual / (fro * fro)
    } else {
        0.0
    };
    Ok(Diagnostics {
        normality_residual,
        relative_normality_residual,
        min_gap: result.min_gap(),
    })
}

/// `mu_h * H + mu_s * iS`, symmetrized once so the result is exactly Hermitian.
pub fn combination(a: &ComplexDense, mu_h: f64, mu_s: f64) -> Result<ComplexDense> {
    let (h, s) = a.hermitian_split()?;
    let n = a.rows();
    let i_mu_s = C64::new(0.0, mu_s);
    let raw = ComplexDense::from_fn(n, n, |i, j| h[(i, j)] * mu_h + s[(i, j)] * i_mu_s);
    let mut out = raw.clone();
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = (raw[(i, j)] + raw[(j, i)].conj()) * 0.5;
        }
    }
    Ok(out)
}

/// Diagonalizes `A` through a random real combination of its Hermitian and
/// skew-Hermitian parts. Draws `mu_h` then `mu_s` from `state`.
///
/// Inputs that are not normal are still processed; the result then carries
/// whatever off-diagonal error follows (see [`diagnose`]).
pub fn rand_diag(a: &ComplexDense, state: &mut RngState) -> Result<RandDiagResult> {
    a.square_dim("rand_diag")?;
    let mu_h = state.std_normal();
    let mu_s = state.std_normal();
    fixed_comb_diag(a, mu_h, mu_s)
}

/// Same as [`rand_diag`] with caller-chosen coefficients. Fails on matrices
/// built so that the combination vanishes; kept to demonstrate why the
/// coefficients must be random.
pub fn fixed_comb_diag(a: &ComplexDense, mu_h: f64, mu_s: f64) -> Result<RandDiagResult> {
    a.square_dim("fixed_comb_diag")?;
    let c = combination(a, mu_h, mu_s)?;
    let dec = eigh(&c)?;
    Ok(RandDiagResult {
        u: dec.vectors,
        mu_h,
        mu_s,
        eigenvalues_of_combination: dec.values,
    })
}

/// Diagonal of `U^* A U`, i.e. the eigenvalue estimates read off a diagonalizing unitary.
pub fn diag_of(a: &ComplexDense, u: &ComplexDense) -> Result<Vec<C64>> {
    let n = u.square_dim("diag_of")?;
    if a.rows() != n || a.cols() != n {
        return Err(Error::DimensionMismatch {
            op: "diag_of",
            left_rows: a.rows(),
            left_cols: a.cols(),
            right_rows: n,
            right_cols: n,
        });
    }
    let au = a.matmul(u)?;
    Ok((0..n)
        .map(|k| {
            (0..n).fold(C64::new(0.0, 0.0), |acc, i| {
                acc + u[(i, k)].conj() * au[(i, k)]
            })
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::offdiag_error;
    use crate::rng::haar_unitary;

    #[test]
    fn diagonal_input() {
        let a = ComplexDense::from_diag(&[C64::new(1.0, 2.0), C64::new(3.0, -1.0)]);
        let mut rng = RngState::new(1);
        let r = rand_diag(&a, &mut rng).unwrap();
        assert!(offdiag_error(&a, &r.u).unwrap() <= 1e-15 * a.frobenius_norm());
        for i in 0..2 {
            let nonzero = (0..2).filter(|&j| r.u[(i, j)].norm() > 1e-15).count();
            assert_eq!(nonzero, 1);
        }
    }

    #[test]
    fn rotation_generator() {
        let a = ComplexDense::from_real_rows(&[[0.0, 1.0], [-1.0, 0.0]]);
        let mut rng = RngState::new(2);
        let r = rand_diag(&a, &mut rng).unwrap();
        let mut d = diag_of(&a, &r.u).unwrap();
        d.sort_by(|x, y| x.im.total_cmp(&y.im));
        assert!((d[0] - C64::new(0.0, -1.0)).norm() <= 1e-14);
        assert!((d[1] - C64::new(0.0, 1.0)).norm() <= 1e-14);
    }

    #[test]
    fn fixed_coefficients_are_deterministic() {
        let mut rng = RngState::new(3);
        let a = haar_unitary(12, &mut rng).unwrap();
        let r1 = fixed_comb_diag(&a, 0.3, -1.1).unwrap();
        let r2 = fixed_comb_diag(&a, 0.3, -1.1).unwrap();
        assert_eq!(r1.u, r2.u);
        assert_eq!((r1.mu_h, r1.mu_s), (0.3, -1.1));
    }

    #[test]
    fn hermitian_input_with_pure_real_coefficient() {
        let mut rng = RngState::new(4);
        let g = rng.complex_gaussian_matrix(7, 7);
        let a = g.add(&g.adjoint()).unwrap();
        let r = fixed_comb_diag(&a, 1.0, 0.0).unwrap();
        let e = eigh(&a).unwrap();
        assert!(r.u.max_abs_diff(&e.vectors) <= 1e-12);
    }

    #[test]
    fn coefficients_are_recorded_as_drawn() {
        let a = ComplexDense::identity(3);
        let mut rng = RngState::new(99);
        let r = rand_diag(&a, &mut rng).unwrap();
        let mut replay = RngState::new(99);
        assert_eq!(r.mu_h, replay.std_normal());
        assert_eq!(r.mu_s, replay.std_normal());
    }

    #[test]
    fn diag_of_examples() {
        let mut rng = RngState::new(5);
        let a = rng.complex_gaussian_matrix(4, 4);
        assert_eq!(diag_of(&a, &ComplexDense::identity(4)).unwrap(), a.diag());

        let d = [C64::new(1.0, 0.0), C64::new(2.0, 0.0), C64::new(3.0, 1.0)];
        let p = ComplexDense::from_real_rows(&[[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]]);
        let got = diag_of(&ComplexDense::from_diag(&d), &p).unwrap();
        assert_eq!(got, vec![d[2], d[0], d[1]]);

        let u = haar_unitary(4, &mut rng).unwrap();
        let naive = ComplexDense::from_fn(4, 4, |i, j| {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..4 {
                for l in 0..4 {
                    acc += u[(k, i)].conj() * a[(k, l)] * u[(l, j)];
                }
            }
            acc
        });
        let fast = diag_of(&a, &u).unwrap();
        for (k, z) in fast.iter().enumerate() {
            assert!((z - naive[(k, k)]).norm() <= 1e-14 * a.frobenius_norm());
        }
        assert!(diag_of(&a, &ComplexDense::identity(3)).is_err());
    }

    #[test]
    fn rejects_rectangular() {
        let mut rng = RngState::new(6);
        assert!(rand_diag(&ComplexDense::zeros(2, 3), &mut rng).is_err());
    }
}
