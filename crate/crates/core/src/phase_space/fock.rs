//! Fock-basis helpers: coherent and squeezed amplitudes, displacement
//! matrix elements and truncated ladder operators.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::state::{FockVector, GaussianState};
use crate::error::{Error, Result};
use crate::numeric::{ln_factorial, norm_sqr, normalized_laguerre};

/// `e^{-|α|²/2} αⁿ/√n!` for `n = 0..=n_max`.
pub fn coherent_amplitudes(alpha: Complex64, n_max: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut term = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    out.push(term);
    for n in 1..=n_max {
        term *= alpha / (n as f64).sqrt();
        out.push(term);
    }
    out
}

/// Poisson mass beyond `n_max` for mean `mu`, summed term by term.
pub fn poisson_tail(mu: f64, n_max: usize) -> f64 {
    if mu == 0.0 {
        return 0.0;
    }
    let ln_p = |n: usize| -mu + n as f64 * mu.ln() - ln_factorial(n);
    let mut total = 0.0;
    let mut n = n_max + 1;
    loop {
        let p = ln_p(n).exp();
        total += p;
        if n as f64 > mu && p < 1e-18 * total.max(1e-300) {
            break;
        }
        if n > n_max + 100_000 {
            break;
        }
        n += 1;
    }
    total
}

/// Squeezed-vacuum amplitudes `S(ξ)|0⟩`, `ξ = r e^{iχ}`, which squeezes the
/// quadrature `X cos(χ/2) + P sin(χ/2)` to variance `e^{-2r}/4`:
/// `c_{2k} = (-e^{iχ} tanh r)^k √((2k)!) / (2^k k! √cosh r)`.
pub fn squeezed_vacuum_amplitudes(r: f64, chi: f64, n_max: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n_max + 1];
    let t = -Complex64::from_polar(r.tanh(), chi);
    let mut c = Complex64::new(1.0 / r.cosh().sqrt(), 0.0);
    let mut k = 0usize;
    while 2 * k <= n_max {
        out[2 * k] = c;
        // ratio c_{2k+2}/c_{2k} = t √((2k+1)(2k+2)) / (2(k+1))
        let kf = k as f64;
        c *= t * ((2.0 * kf + 1.0) * (2.0 * kf + 2.0)).sqrt() / (2.0 * (kf + 1.0));
        k += 1;
    }
    out
}

/// Apply `D(β)` to the amplitudes, returning photon numbers `0..=n_out`.
///
/// Matrix elements use the normalized Laguerre functions `l_n^{(d)}(|β|²)`:
/// `⟨n+d|D|n⟩ = e^{idθ} l_n^{(d)}` and `⟨n|D|n+d⟩ = (-1)^d e^{-idθ} l_n^{(d)}`.
pub fn displace_amplitudes(amps: &[Complex64], beta: Complex64, n_out: usize) -> Vec<Complex64> {
    let n_in = amps.len() - 1;
    let x = beta.norm_sqr();
    let theta = beta.arg();
    let mut out = vec![Complex64::new(0.0, 0.0); n_out + 1];
    let d_max = n_out.max(n_in);
    for d in 0..=d_max {
        // Entries below or on the diagonal: m = n + d.
        let count = (n_in + 1).min((n_out + 1).saturating_sub(d));
        let count_above = if d == 0 {
            0
        } else {
            (n_out + 1).min((n_in + 1).saturating_sub(d))
        };
        let need = count.max(count_above);
        if need == 0 {
            continue;
        }
        let ls = normalized_laguerre(d, x, need);
        let down = Complex64::from_polar(1.0, d as f64 * theta);
        for n in 0..count {
            out[n + d] += down * ls[n] * amps[n];
        }
        if d > 0 {
            let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
            let up = Complex64::from_polar(sign, -(d as f64) * theta);
            for m in 0..count_above {
                out[m] += up * ls[m] * amps[m + d];
            }
        }
    }
    out
}

/// Displace a Fock vector, keeping photon numbers up to
/// `max(N, DEFAULT_TRUNCATION)` and failing if more than `1e-8` of the norm
/// leaks past that cutoff.
pub fn displace_fock(state: &FockVector, beta: Complex64) -> Result<FockVector> {
    let n_out = state.truncation().max(super::state::DEFAULT_TRUNCATION);
    let out = displace_amplitudes(state.amps(), beta, n_out);
    let tail = (1.0 - norm_sqr(&out)).max(0.0);
    if tail > 1e-8 {
        return Err(Error::TruncationOverflow {
            tail,
            cutoff: n_out,
        });
    }
    FockVector::normalized(out)
}

/// Fock expansion of a pure Gaussian state `D(α) S(ξ) |0⟩`.
///
/// The cutoff grows until less than `1e-12` of the norm lies beyond it.
pub fn gaussian_to_fock(state: &GaussianState) -> Result<FockVector> {
    if !state.is_pure() {
        return Err(Error::Unsupported(
            "Fock expansion of a mixed Gaussian state".into(),
        ));
    }
    let cov = state.cov();
    let eig = nalgebra::SymmetricEigen::new(cov);
    let i_min = if eig.eigenvalues[0] <= eig.eigenvalues[1] {
        0
    } else {
        1
    };
    let v_min = eig.eigenvalues[i_min].max(1e-300);
    let r = -0.5 * (4.0 * v_min).ln();
    let dir = eig.eigenvectors.column(i_min);
    let phi = dir[1].atan2(dir[0]);
    let alpha = state.alpha();
    let mut n = 32usize;
    loop {
        let sq = squeezed_vacuum_amplitudes(r, 2.0 * phi, n);
        let out = if alpha.norm_sqr() > 0.0 {
            displace_amplitudes(&sq, alpha, n)
        } else {
            sq
        };
        let tail = (1.0 - norm_sqr(&out)).max(0.0);
        if tail < 1e-12 {
            return FockVector::normalized(out);
        }
        if n >= 4096 {
            return Err(Error::TruncationOverflow { tail, cutoff: n });
        }
        n *= 2;
    }
}

/// Truncated annihilation operator on photon numbers `0..dim`.
pub fn annihilation(dim: usize) -> DMatrix<Complex64> {
    let mut a = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    a
}

/// Truncated quadratures `(X, P)` built from [`annihilation`].
pub fn quadrature_operators(dim: usize) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
    let a = annihilation(dim);
    let ad = a.adjoint();
    let x = (&a + &ad) * Complex64::new(0.5, 0.0);
    let p = (&a - &ad) * Complex64::new(0.0, -0.5);
    (x, p)
}
