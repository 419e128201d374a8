//! Normal versus symmetric ordering of photon-number powers and the
//! zero-delay intensity correlation g²(0).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::phase_space::fock::annihilation;
use crate::phase_space::{FockVector, GaussianState, PhotonDistribution, WignerGrid};

/// Photon-number moments in symmetric and normal form.
///
/// `Sym(n) = n + 1/2` and `Sym(n²) = n² + n + 1/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderingMoments {
    pub sym_n: f64,
    pub sym_n2: f64,
    pub n: f64,
    pub n2: f64,
}

impl OrderingMoments {
    pub fn from_symmetric(sym_n: f64, sym_n2: f64) -> Result<Self> {
        if !(sym_n >= 0.5 - 1e-12) {
            return Err(Error::param(
                "sym_n",
                format!("must be at least 1/2, got {sym_n}"),
            ));
        }
        let n = sym_n - 0.5;
        Ok(Self {
            sym_n,
            sym_n2,
            n,
            n2: sym_n2 - n - 0.5,
        })
    }

    pub fn from_normal(n: f64, n2: f64) -> Result<Self> {
        Self::from_symmetric(n + 0.5, n2 + n + 0.5)
    }
}

/// Symmetric moments of a single-mode Gaussian state: `⟨X² + P²⟩` and
/// `⟨(X² + P²)²⟩` of the Wigner density, the latter by Isserlis
/// factorization including the mean.
pub fn sym_moments_gaussian(state: &GaussianState) -> Result<OrderingMoments> {
    let (m, v) = (state.mean(), state.cov());
    let (a, b) = (m[0], m[1]);
    let (vxx, vpp, vxp) = (v[(0, 0)], v[(1, 1)], v[(0, 1)]);
    let x2 = a * a + vxx;
    let p2 = b * b + vpp;
    let x4 = a.powi(4) + 6.0 * a * a * vxx + 3.0 * vxx * vxx;
    let p4 = b.powi(4) + 6.0 * b * b * vpp + 3.0 * vpp * vpp;
    let x2p2 = x2 * p2 + 2.0 * vxp * vxp + 4.0 * a * b * vxp;
    OrderingMoments::from_symmetric(x2 + p2, x4 + 2.0 * x2p2 + p4)
}

/// Symmetric moments by numerical integration of a Wigner grid.
pub fn sym_moments_from_wigner(grid: &WignerGrid) -> Result<OrderingMoments> {
    let norm = grid.integral();
    let s1 = grid.integrate(|x, p| x * x + p * p) / norm;
    let s2 = grid.integrate(|x, p| (x * x + p * p).powi(2)) / norm;
    OrderingMoments::from_symmetric(s1, s2)
}

/// Symmetric moments of a Fock vector from truncated ladder matrices.
///
/// `Sym(n²)` averages the six orderings of `a a a† a†`. The vector is padded
/// by two photon numbers so the truncation edge never enters.
pub fn sym_moments_fock(state: &FockVector) -> Result<OrderingMoments> {
    let (sym_n, sym_n2, _, _) = fock_operator_moments(state);
    OrderingMoments::from_symmetric(sym_n, sym_n2)
}

/// `(⟨Sym n⟩, ⟨Sym n²⟩, ⟨n⟩, ⟨n²⟩)` by explicit operator products.
pub fn fock_operator_moments(state: &FockVector) -> (f64, f64, f64, f64) {
    let dim = state.amps().len() + 2;
    let mut psi = DVector::<Complex64>::zeros(dim);
    for (i, c) in state.amps().iter().enumerate() {
        psi[i] = *c;
    }
    let a = annihilation(dim);
    let ad = a.adjoint();
    let expect = |op: &DMatrix<Complex64>| (psi.adjoint() * op * &psi)[(0, 0)].re;
    let n_op = &ad * &a;
    let sym_n = (&n_op + &a * &ad) * Complex64::new(0.5, 0.0);
    let orderings = [
        &a * &a * &ad * &ad,
        &a * &ad * &a * &ad,
        &a * &ad * &ad * &a,
        &ad * &a * &a * &ad,
        &ad * &a * &ad * &a,
        &ad * &ad * &a * &a,
    ];
    let sym_n2 = orderings
        .iter()
        .fold(DMatrix::zeros(dim, dim), |acc, m| acc + m)
        / Complex64::new(6.0, 0.0);
    (
        expect(&sym_n),
        expect(&sym_n2),
        expect(&n_op),
        expect(&(&n_op * &n_op)),
    )
}

/// `g²(0) = (Sym n² - 2 Sym n + 1/2) / (Sym n - 1/2)²`, which equals
/// `(⟨n²⟩ - ⟨n⟩)/⟨n⟩²`. The vacuum has no defined value.
pub fn g2_zero(m: &OrderingMoments) -> Result<f64> {
    let n = m.sym_n - 0.5;
    if n <= 1e-12 {
        return Err(Error::UndefinedForVacuum);
    }
    Ok((m.sym_n2 - 2.0 * m.sym_n + 0.5) / (n * n))
}

/// `Σ n(n-1) p_n / (Σ n p_n)²` from a photon distribution.
pub fn g2_zero_distribution(pd: &PhotonDistribution) -> Result<f64> {
    let n = pd.mean();
    if n <= 0.0 {
        return Err(Error::ZeroMeanPhotonNumber);
    }
    Ok(pd.second_factorial_moment() / (n * n))
}

pub fn g2_zero_fock(state: &FockVector) -> Result<f64> {
    g2_zero_distribution(&PhotonDistribution::new(state.probabilities())?)
}

/// `⟨n²⟩/⟨n⟩²` without normal ordering; exceeds g²(0) by `1/⟨n⟩`.
pub fn unordered_ratio(pd: &PhotonDistribution) -> Result<f64> {
    let n = pd.mean();
    if n <= 0.0 {
        return Err(Error::ZeroMeanPhotonNumber);
    }
    let n2: f64 = pd
        .probs()
        .iter()
        .enumerate()
        .map(|(k, p)| (k * k) as f64 * p)
        .sum();
    Ok(n2 / (n * n))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyOrdering {
    pub normal: f64,
    pub symmetric: f64,
    pub antinormal: f64,
}

/// Mean of `a†a`, `(a†a + aa†)/2` and `aa†` in the number state `|n⟩`.
pub fn ordering_energy_table(n: u64) -> EnergyOrdering {
    let n = n as f64;
    EnergyOrdering {
        normal: n,
        symmetric: n + 0.5,
        antinormal: n + 1.0,
    }
}
