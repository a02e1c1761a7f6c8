//! Test-matrix families: random normal matrices with known spectra, the
//! fixed-coefficient counterexample, and Floquet unitaries of a random
//! nearest-neighbour spin chain.

use crate::eigh::eigh;
use crate::error::{Error, Result};
use crate::matrix::{ComplexDense, C64};
use crate::rng::{gue, haar_unitary, RngState};

/// `A = U D U^*` with `U` Haar and `D` diagonal of standard complex Gaussians.
/// Returns `A` and `diag(D)`.
pub fn random_normal_matrix(n: usize, state: &mut RngState) -> Result<(ComplexDense, Vec<C64>)> {
    if n == 0 {
        return Err(Error::invalid("random_normal_matrix: n must be at least 1"));
    }
    let mut u = haar_unitary(n, state)?;
    let spectrum: Vec<C64> = (0..n).map(|_| state.complex_gaussian()).collect();
    let u_adj = u.adjoint();
    for (j, &d) in spectrum.iter().enumerate() {
        u.scale_col(j, d);
    }
    Ok((u.matmul(&u_adj)?, spectrum))
}

/// `U0 diag(beta + i alpha, 0) U0^*`: the matrix for which the fixed
/// combination `alpha * H + beta * iS` vanishes identically.
pub fn counterexample_matrix(alpha: f64, beta: f64, u0: &ComplexDense) -> Result<ComplexDense> {
    if u0.rows() != 2 || u0.cols() != 2 {
        return Err(Error::invalid(format!(
            "counterexample_matrix: u0 must be 2x2, got {}x{}",
            u0.rows(),
            u0.cols()
        )));
    }
    let residual = u0.unitarity_residual()?;
    if residual > 1e-12 {
        return Err(Error::invalid(format!(
            "counterexample_matrix: u0 is not unitary (residual {residual:.3e})"
        )));
    }
    if u0.offdiag_norm()? <= 0.1 {
        return Err(Error::invalid(
            "counterexample_matrix: u0 must be a nontrivial rotation (off-diagonal norm above 0.1)",
        ));
    }
    let d = ComplexDense::from_diag(&[C64::new(beta, alpha), C64::new(0.0, 0.0)]);
    u0.matmul(&d)?.matmul(&u0.adjoint())
}

/// Real rotation `[[cos t, -sin t], [sin t, cos t]]`.
pub fn rotation(theta: f64) -> ComplexDense {
    let (s, c) = theta.sin_cos();
    ComplexDense::from_real_rows(&[[c, -s], [s, c]])
}

/// `exp(iM)` for Hermitian `M`, through its eigendecomposition.
pub fn unitary_exp_i(m: &ComplexDense) -> Result<ComplexDense> {
    let dec = eigh(m)?;
    let mut scaled = dec.vectors.clone();
    for (j, &l) in dec.values.iter().enumerate() {
        scaled.scale_col(j, C64::from_polar(1.0, l));
    }
    scaled.matmul(&dec.vectors.adjoint())
}

/// Parameters of the spin-chain Floquet unitary on `num_states` two-level sites.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThermalModelSpec {
    pub num_states: usize,
    /// Order in which the bond gates are multiplied: entry `j` is the
    /// 1-based left site of the `j`-th factor. A permutation of `1..num_states`.
    pub site_order: Vec<usize>,
}

impl ThermalModelSpec {
    /// Bonds multiplied left to right as `1, 2, ..., L-1`.
    pub fn identity_order(num_states: usize) -> Result<Self> {
        Self::new(num_states, (1..num_states.max(1)).collect())
    }

    /// Uniformly random bond order drawn from `state`.
    pub fn random_order(num_states: usize, state: &mut RngState) -> Result<Self> {
        check_sites(num_states)?;
        let order = state
            .permutation(num_states - 1)
            .into_iter()
            .map(|b| b + 1)
            .collect();
        Self::new(num_states, order)
    }

    pub fn new(num_states: usize, site_order: Vec<usize>) -> Result<Self> {
        check_sites(num_states)?;
        let mut seen = vec![false; num_states];
        let valid = site_order.len() == num_states - 1
            && site_order.iter().all(|&b| {
                let fresh = (1..num_states).contains(&b) && !seen[b];
                if fresh {
                    seen[b] = true;
                }
                fresh
            });
        if !valid {
            return Err(Error::invalid(format!(
                "thermal model: site order {site_order:?} is not a permutation of 1..={}",
                num_states - 1
            )));
        }
        Ok(Self {
            num_states,
            site_order,
        })
    }

    pub fn dim(&self) -> usize {
        1 << self.num_states
    }
}

fn check_sites(num_states: usize) -> Result<()> {
    if !(2..=20).contains(&num_states) {
        return Err(Error::invalid(format!(
            "thermal model: need 2 <= L <= 20 sites, got {num_states}"
        )));
    }
    Ok(())
}

/// `I_{2^(b-1)} (x) gate (x) I_{2^(L-b-1)}` for a two-site gate on sites `b, b+1`.
pub fn bond_operator(num_states: usize, bond: usize, gate: &ComplexDense) -> ComplexDense {
    let left = ComplexDense::identity(1 << (bond - 1));
    let right = ComplexDense::identity(1 << (num_states - bond - 1));
    left.kron(gate).kron(&right)
}

/// `U_F = U_int U_0` with `U_0 = d_1 (x) ... (x) d_L` (Haar 2x2 factors) and
/// `U_int` the ordered product of bond gates `exp(i M_b)`, `M_b` drawn from
/// the 4x4 GUE with `E[trace(M^2)] = 2`.
///
/// Draw order from `state`: `d_1..d_L`, then `M_1..M_{L-1}` by bond index.
pub fn thermal_unitary(spec: &ThermalModelSpec, state: &mut RngState) -> Result<ComplexDense> {
    let spec = ThermalModelSpec::new(spec.num_states, spec.site_order.clone())?;
    let l = spec.num_states;

    let mut u0 = haar_unitary(2, state)?;
    for _ in 1..l {
        u0 = u0.kron(&haar_unitary(2, state)?);
    }

    let gates = (1..l)
        .map(|_| gue(4, 2.0, state).and_then(|m| unitary_exp_i(&m)))
        .collect::<Result<Vec<_>>>()?;

    let mut u_int: Option<ComplexDense> = None;
    for &bond in &spec.site_order {
        let factor = bond_operator(l, bond, &gates[bond - 1]);
        u_int = Some(match u_int {
            None => factor,
            Some(acc) => acc.matmul(&factor)?,
        });
    }
    let u_int = u_int.expect("at least one bond for L >= 2");
    u_int.matmul(&u0)
}
