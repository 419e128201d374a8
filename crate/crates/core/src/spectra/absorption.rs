use std::f64::consts::TAU;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::series::ComplexTimeSeries;
use crate::error::{Error, Result};

/// Perturbative excitation rate of a two-level absorber with transition
/// frequency `omega0` (rad/s) and coherence decay `gamma` (1/s):
///
/// `R = dipole2 · Re ∫₀^T e^{-Γτ} e^{iΔτ} G1(τ) dτ`,  `Δ = ω0 - 2π ν_c`,
///
/// where `G1(τ) = ⟨ε*(t) ε(t+τ)⟩` is the record's autocorrelation with `1/N`
/// normalization. The sign of the exponent places the resonance at
/// `ω0 = 2π ν_c + 2πδ` with `δ` the detuning of [`field_spectrum`], so that for
/// `Γ → 0` the rate equals `dipole2 · S(ν_c + Δ/2π) / 2`. For `Γ` far above the
/// field bandwidth `R → dipole2 ⟨I⟩ / Γ`.
///
/// [`field_spectrum`]: super::field_spectrum
pub fn absorption_rate(
    series: &ComplexTimeSeries,
    omega0: f64,
    gamma: f64,
    dipole2: f64,
) -> Result<f64> {
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::param(
            "gamma",
            format!("must be finite and >= 0, got {gamma}"),
        ));
    }
    let n = series.len();
    let dt = series.dt();
    let m = 2 * n;
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    buf[..n].copy_from_slice(series.samples());
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(m).process(&mut buf);
    for v in buf.iter_mut() {
        *v = Complex64::new(v.norm_sqr(), 0.0);
    }
    planner.plan_fft_inverse(m).process(&mut buf);
    let detuning = omega0 - TAU * series.carrier_freq();
    let norm = 1.0 / (m as f64 * n as f64);
    let mut acc = 0.0;
    for (k, r) in buf[..n].iter().enumerate() {
        let tau = k as f64 * dt;
        let w = if k == 0 || k + 1 == n { 0.5 } else { 1.0 };
        let phase = Complex64::from_polar((-gamma * tau).exp(), detuning * tau);
        acc += w * (r * norm * phase).re;
    }
    Ok(dipole2 * acc * dt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::{field_spectrum, synthesize_field, NoiseModel};

    #[test]
    fn zero_field_does_not_absorb() {
        let s = ComplexTimeSeries::new(vec![Complex64::new(0.0, 0.0); 100], 1e-3, 0.0).unwrap();
        assert_eq!(absorption_rate(&s, 0.0, 1.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn broad_absorber_sees_mean_intensity() {
        let s = ComplexTimeSeries::new(vec![Complex64::new(1.5, 0.0); 2000], 1e-3, 0.0).unwrap();
        let gamma = 500.0;
        let r = absorption_rate(&s, 0.0, gamma, 2.0).unwrap();
        assert!(
            (r * gamma / (2.0 * 2.25) - 1.0).abs() < 0.05,
            "{}",
            r * gamma / 4.5
        );
    }

    #[test]
    fn narrow_absorber_follows_spectrum() {
        let s = synthesize_field(&NoiseModel::E3 { gamma: 1.0 }, 100.0, 0.01, 0).unwrap();
        let sd = field_spectrum(&s).unwrap();
        let ratios: Vec<f64> = [0usize, 3, 9]
            .iter()
            .map(|&offset| {
                let i = sd.len() / 2 + offset;
                let omega0 = TAU * sd.freqs()[i];
                absorption_rate(&s, omega0, 0.0, 1.0).unwrap() / sd.values()[i]
            })
            .collect();
        for r in &ratios {
            assert!((r / ratios[0] - 1.0).abs() < 1e-9);
            assert!((r - 0.5).abs() < 1e-9);
        }
    }

    #[test]
    fn negative_gamma_is_rejected() {
        let s = ComplexTimeSeries::new(vec![Complex64::new(1.0, 0.0); 10], 1e-3, 0.0).unwrap();
        assert!(absorption_rate(&s, 0.0, -1.0, 1.0).is_err());
    }
}
