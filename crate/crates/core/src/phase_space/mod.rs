//! Single-mode states in Gaussian and Fock form and their phase-space
//! representations.

pub mod fock;
mod state;
mod wigner;

use std::f64::consts::PI;

use nalgebra::{Matrix2, SymmetricEigen, Vector2};
use num_complex::Complex64;

pub use state::{
    make_state, make_state_truncated, FockVector, GaussianState, PhotonDistribution, State,
    StateSpec, DEFAULT_TRUNCATION,
};
pub use wigner::{
    fock_husimi_point, fock_wigner_point, marginal, to_husimi, wigner, wigner_point, Axis,
    Marginal, WignerGrid,
};

use crate::error::{Error, Result};

/// Shift the state by `β` in phase space.
pub fn displace(state: &State, beta: Complex64) -> Result<State> {
    Ok(match state {
        State::Gaussian(g) => State::Gaussian(g.displaced(beta)),
        State::Fock(f) => State::Fock(fock::displace_fock(f, beta)?),
    })
}

/// Photon-number distribution, cut off once less than `1e-12` of the
/// probability remains beyond the last entry.
///
/// Gaussian states are supported when they are pure (any displacement and
/// squeezing) or displaced thermal; other mixed Gaussian states return
/// [`Error::Unsupported`].
pub fn photon_distribution(state: &State) -> Result<PhotonDistribution> {
    match state {
        State::Fock(f) => PhotonDistribution::new(f.probabilities()),
        State::Gaussian(g) => gaussian_photon_distribution(g),
    }
}

fn truncate_tail(mut probs: Vec<f64>) -> Result<PhotonDistribution> {
    let total: f64 = probs.iter().sum();
    let tail = (1.0 - total).max(0.0);
    for p in probs.iter_mut() {
        *p /= total;
    }
    PhotonDistribution::with_tail(probs, tail)
}

fn gaussian_photon_distribution(g: &GaussianState) -> Result<PhotonDistribution> {
    let cov = g.cov();
    let isotropic = (cov[(0, 0)] - cov[(1, 1)]).abs() <= 1e-14 && cov[(0, 1)].abs() <= 1e-14;
    if isotropic {
        let nbar = (2.0 * cov[(0, 0)] - 0.5).max(0.0);
        let mu = g.alpha().norm_sqr();
        if nbar <= 1e-14 {
            return truncate_tail(poisson(mu));
        }
        return truncate_tail(displaced_thermal(nbar, mu));
    }
    if g.is_pure() {
        let f = fock::gaussian_to_fock(g)?;
        return PhotonDistribution::with_tail(f.probabilities(), 0.0);
    }
    Err(Error::Unsupported(
        "photon statistics of a mixed, non-isotropic Gaussian state".into(),
    ))
}

const CUTOFF: f64 = 1e-12;
const MAX_PHOTONS: usize = 1 << 16;

fn poisson(mu: f64) -> Vec<f64> {
    let mut probs = Vec::new();
    let mut p = (-mu).exp();
    let mut acc = 0.0;
    let mut n = 0usize;
    // Work in logs when e^{-μ} underflows.
    let ln_p = |n: usize| -mu + n as f64 * mu.ln() - crate::numeric::ln_factorial(n);
    loop {
        let v = if p > 0.0 { p } else { ln_p(n).exp() };
        probs.push(v);
        acc += v;
        if (n as f64 > mu && 1.0 - acc < CUTOFF) || n >= MAX_PHOTONS {
            break;
        }
        n += 1;
        p = if p > 0.0 { p * mu / n as f64 } else { 0.0 };
    }
    probs
}

/// `p_n = nbarⁿ/(1+nbar)^{n+1} e^{-μ/(1+nbar)} L_n(-μ/(nbar(1+nbar)))`.
fn displaced_thermal(nbar: f64, mu: f64) -> Vec<f64> {
    let y = mu / (nbar * (1.0 + nbar));
    let base = -(1.0 + nbar).ln() - mu / (1.0 + nbar);
    let q = (nbar / (1.0 + nbar)).ln();
    let mut probs = Vec::new();
    let mut acc = 0.0;
    // ln L_n(-y) through ratios r_n = L_n / L_{n-1}, all positive.
    let mut ln_l = 0.0;
    let mut ratio_prev = 1.0;
    let mut n = 0usize;
    loop {
        if n == 1 {
            ratio_prev = 1.0 + y;
            ln_l = ratio_prev.ln();
        } else if n >= 2 {
            let k = (n - 1) as f64;
            let r = ((2.0 * k + 1.0 + y) - k / ratio_prev) / (k + 1.0);
            ln_l += r.ln();
            ratio_prev = r;
        }
        let p = (base + n as f64 * q + ln_l).exp();
        probs.push(p);
        acc += p;
        if (n as f64 > nbar + mu && 1.0 - acc < CUTOFF) || n >= MAX_PHOTONS {
            break;
        }
        n += 1;
    }
    probs
}

/// Glauber-Sudarshan P function of a Gaussian state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PFunction {
    /// Proper Gaussian with covariance `cov - I/4`; a zero covariance is the
    /// δ-distribution of a coherent state.
    Gaussian {
        mean: Vector2<f64>,
        cov: Matrix2<f64>,
    },
    /// `cov - I/4` has a negative eigenvalue: P is not a density.
    Nonclassical { min_eigenvalue: f64 },
}

impl PFunction {
    pub fn is_delta(&self) -> bool {
        matches!(self, PFunction::Gaussian { cov, .. } if cov.abs().max() <= 1e-12)
    }

    pub fn is_classical(&self) -> bool {
        matches!(self, PFunction::Gaussian { .. })
    }
}

pub fn gaussian_p_function(state: &GaussianState) -> PFunction {
    let cov = state.cov() - Matrix2::identity() * 0.25;
    let min = SymmetricEigen::new(cov).eigenvalues.min();
    if min < -1e-12 {
        PFunction::Nonclassical {
            min_eigenvalue: min,
        }
    } else {
        let cov = if cov.abs().max() <= 1e-12 {
            Matrix2::zeros()
        } else {
            cov
        };
        PFunction::Gaussian {
            mean: state.mean(),
            cov,
        }
    }
}

/// `W(0,0) = (2/π) Σ (-1)ⁿ p_n`.
pub fn parity_wigner_origin(pd: &PhotonDistribution) -> Result<f64> {
    if pd.tail() > 1e-8 {
        return Err(Error::HeavyTail { tail: pd.tail() });
    }
    let alt: f64 = pd
        .probs()
        .iter()
        .enumerate()
        .map(|(n, p)| if n % 2 == 0 { *p } else { -*p })
        .sum();
    Ok(2.0 / PI * alt)
}
