//! Lineshapes from amplitude and phase noise under Gaussian phase statistics.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::series::{CorrelationFunction, CorrelationKind, SpectralDensity, SpectralKind};
use crate::error::{Error, Result};

/// `⟨x^{2n}⟩ = (2n-1)!! var^n` for a zero-mean Gaussian variable.
pub fn gaussian_even_moment(n: u32, var: f64) -> f64 {
    let double_fact: f64 = (1..=n).map(|k| (2 * k - 1) as f64).product();
    double_fact * var.powi(n as i32)
}

/// Power-law tails used to close the phase-noise integral outside the grid.
struct Tails {
    /// `(f_1, S_1, slope)` at the low end, if the first bin carries power.
    low: Option<(f64, f64, f64)>,
    /// `(f_N, S_N, slope)` at the high end when the density decays faster
    /// than `1/f`; otherwise the grid is treated as band-limited.
    high: Option<(f64, f64, f64)>,
}

fn slope(f0: f64, s0: f64, f1: f64, s1: f64) -> f64 {
    (s1 / s0).ln() / (f1 / f0).ln()
}

fn tails(phase_sd: &SpectralDensity) -> Result<Tails> {
    if phase_sd.kind() != SpectralKind::Phase {
        return Err(Error::param(
            "phase_sd",
            "expected a phase spectral density",
        ));
    }
    let f = phase_sd.freqs();
    let s = phase_sd.values();
    // Positive-frequency bins only; an f = 0 bin contributes nothing.
    let start = f.iter().position(|&v| v > 0.0).unwrap_or(f.len());
    let (f, s) = (&f[start..], &s[start..]);
    let mut out = Tails {
        low: None,
        high: None,
    };
    if f.len() < 2 {
        return Ok(out);
    }
    if s[0] > 0.0 && s[1] > 0.0 {
        let k = slope(f[0], s[0], f[1], s[1]);
        // (1 - cos Ωτ) ~ Ω² near zero, so the integral converges only for
        // densities shallower than Ω^{-3}.
        if k <= -3.0 + 1e-9 {
            return Err(Error::DivergentPhaseIntegral { slope: k });
        }
        if start == 0 {
            out.low = Some((f[0], s[0], k));
        }
    }
    let n = f.len();
    if s[n - 1] > 0.0 && s[n - 2] > 0.0 {
        let k = slope(f[n - 2], s[n - 2], f[n - 1], s[n - 1]);
        if k < -1.0 - 1e-9 {
            out.high = Some((f[n - 1], s[n - 1], k));
        }
    }
    Ok(out)
}

/// `∫ c (f/f_a)^k f^p df` over `[a, b]`, with `c` the density at `f_a`.
fn power_integral(c: f64, fa: f64, k: f64, p: f64, a: f64, b: f64) -> f64 {
    let e = k + p + 1.0;
    let scale = c * fa.powf(-k);
    if e.abs() < 1e-12 {
        scale * (b / a).ln()
    } else if b.is_infinite() {
        -scale * a.powf(e) / e
    } else {
        scale * (b.powf(e) - a.powf(e)) / e
    }
}

impl Tails {
    /// Contribution of both tails to `∫ S_φ (1 - cos 2πfτ) df`.
    fn contribution(&self, tau: f64) -> f64 {
        let a2 = 2.0 * PI * PI * tau * tau;
        let mut total = 0.0;
        if let Some((f1, s1, k)) = self.low {
            // Small-angle form on (0, f_1].
            let e = k + 3.0;
            total += a2 * s1 * f1.powi(3) / e;
        }
        if let Some((fh, sh, k)) = self.high {
            // 1 - cos is replaced by min(2π²f²τ², 1): quadratic below the
            // first oscillation, its mean value above it.
            let fc = if tau > 0.0 {
                1.0 / (2f64.sqrt() * PI * tau)
            } else {
                f64::INFINITY
            };
            if fh >= fc {
                total += power_integral(sh, fh, k, 0.0, fh, f64::INFINITY);
            } else {
                total += a2 * power_integral(sh, fh, k, 2.0, fh, fc);
                if fc.is_finite() {
                    total += power_integral(sh, fh, k, 0.0, fc, f64::INFINITY);
                }
            }
        }
        total
    }
}

/// Phase coherence `⟨e^{iΔφ(τ)}⟩ = exp(-∫ S_φ(f) (1 - cos 2πfτ) df)` for
/// Gaussian phase noise with one-sided density `S_φ` (rad²/Hz).
///
/// The integral uses the trapezoidal rule on the stored grid plus power-law
/// tails below the first and above the last bin. A low-frequency end steeper
/// than `f^{-3}` makes the integral diverge and is reported as an error.
pub fn coherence_factor(phase_sd: &SpectralDensity, tau: f64) -> Result<f64> {
    let t = tails(phase_sd)?;
    if tau == 0.0 {
        return Ok(1.0);
    }
    let f = phase_sd.freqs();
    let s = phase_sd.values();
    let integrand = |i: usize| s[i] * (1.0 - (2.0 * PI * f[i] * tau).cos());
    let mut total = 0.0;
    for i in 1..f.len() {
        total += 0.5 * (f[i] - f[i - 1]) * (integrand(i) + integrand(i - 1));
    }
    total += t.contribution(tau.abs());
    Ok((-total).exp())
}

/// Field lineshape `S_E(ν_c + δ) = 2 ∫₀^∞ ⟨A(t)A(t+τ)⟩ C(τ) cos(2πδτ) dτ` with
/// `C(τ)` the phase coherence of [`coherence_factor`].
///
/// Grids must be commensurate: the amplitude correlation is sampled at
/// `τ_k = k dτ` (only `τ ≥ 0` is used, the correlation being even), the phase
/// density at multiples of `df`, with `1/(df dτ)` an integer `M` and the
/// highest frequency below `1/(2dτ)`. The coherence at every lag then comes
/// from one length-`M` FFT. The output grid has spacing `1/(4 τ_max)` and
/// spans the lag grid's Nyquist band. Negative lobes from truncating the lag
/// integral are clipped to zero.
pub fn lineshape_from_noise(
    amp_corr: &CorrelationFunction,
    phase_sd: &SpectralDensity,
    carrier: f64,
) -> Result<SpectralDensity> {
    if amp_corr.kind() != CorrelationKind::Amplitude {
        return Err(Error::param(
            "amp_corr",
            "expected an amplitude correlation",
        ));
    }
    let tails = tails(phase_sd)?;
    let z = amp_corr
        .zero_index()
        .ok_or_else(|| Error::GridMismatch("amplitude correlation has no zero lag".into()))?;
    let lags = &amp_corr.lags()[z..];
    let g: Vec<f64> = amp_corr.values()[z..].iter().map(|v| v.re).collect();
    if lags.len() < 2 {
        return Err(Error::GridMismatch(
            "need at least two non-negative lags".into(),
        ));
    }
    let dtau = lags[1] - lags[0];
    if lags
        .iter()
        .enumerate()
        .any(|(k, t)| (t - k as f64 * dtau).abs() > 1e-9 * dtau * (k as f64).max(1.0))
    {
        return Err(Error::GridMismatch("lags must be uniform from zero".into()));
    }

    let f = phase_sd.freqs();
    let s = phase_sd.values();
    let df = if f.len() > 1 { f[1] - f[0] } else { f[0] };
    let idx: Vec<f64> = f.iter().map(|v| v / df).collect();
    if df <= 0.0 || idx.iter().any(|j| (j - j.round()).abs() > 1e-6) {
        return Err(Error::GridMismatch(
            "phase density must sit on multiples of a uniform df".into(),
        ));
    }
    let m_real = 1.0 / (df * dtau);
    let m = m_real.round() as usize;
    if (m_real - m as f64).abs() > 1e-6 * m_real {
        return Err(Error::GridMismatch(format!(
            "1/(df dτ) = {m_real} is not an integer"
        )));
    }
    let j_max = idx.last().unwrap().round() as usize;
    if 2 * j_max >= m {
        return Err(Error::GridMismatch(format!(
            "highest phase-noise frequency {} Hz exceeds the lag-grid Nyquist {} Hz",
            f[f.len() - 1],
            0.5 / dtau
        )));
    }

    // Trapezoid weights on the frequency grid, then Σ w_j S_j cos(2π j k / M).
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    let mut flat = 0.0;
    for (i, (&j, &v)) in idx.iter().zip(s).enumerate() {
        let w = if i == 0 || i + 1 == s.len() {
            0.5 * df
        } else {
            df
        };
        buf[j.round() as usize] += Complex64::new(w * v, 0.0);
        flat += w * v;
    }
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    let coherence: Vec<f64> = lags
        .iter()
        .enumerate()
        .map(|(k, &tau)| {
            if k == 0 {
                return 1.0;
            }
            let integral = flat - buf[k % m].re + tails.contribution(tau);
            (-integral).exp()
        })
        .collect();

    // S(δ_q) = 2 dτ Re Σ_k w_k g_k C_k e^{i2π q k / M'}
    let k_len = lags.len();
    let m_out = 4 * (k_len - 1);
    let mut out = vec![Complex64::new(0.0, 0.0); m_out];
    for k in 0..k_len {
        let w = if k == 0 || k + 1 == k_len { 0.5 } else { 1.0 };
        out[k % m_out] += Complex64::new(w * g[k] * coherence[k], 0.0);
    }
    FftPlanner::new().plan_fft_inverse(m_out).process(&mut out);
    let half = (m_out / 2) as i64;
    let (freqs, values) = (-half..half)
        .map(|q| {
            let v = 2.0 * dtau * out[q.rem_euclid(m_out as i64) as usize].re;
            (carrier + q as f64 / (m_out as f64 * dtau), v.max(0.0))
        })
        .unzip();
    SpectralDensity::new(freqs, values, SpectralKind::Field)
}

/// Closed-form Lorentzian of a constant-amplitude field with white frequency
/// noise `S_ν0`: `A² (S_ν0/2) / (δ² + (π S_ν0/2)²)`, which integrates to `A²`.
pub fn white_fm_lorentzian(delta: f64, amplitude: f64, s_nu0: f64) -> f64 {
    let h = 0.5 * PI * s_nu0;
    amplitude * amplitude * (0.5 * s_nu0) / (delta * delta + h * h)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WhiteFmLinewidth {
    pub hwhm: f64,
    pub fwhm: f64,
    /// Frequency above which the phase noise carries `1/π²` rad² and only
    /// shapes the wings of the line.
    pub cutoff_fc: f64,
    pub residual_phase_var: f64,
    /// Set when `S_ν0 = 0`: the width vanishes and the cutoff recipe has no
    /// meaning, though the residual-variance formula still returns `1/π²`.
    pub degenerate: bool,
}

/// Linewidth figures for white frequency noise of one-sided density `s_nu0`.
pub fn white_fm_linewidth(s_nu0: f64) -> Result<WhiteFmLinewidth> {
    if !(s_nu0 >= 0.0 && s_nu0.is_finite()) {
        return Err(Error::param(
            "s_nu0",
            format!("must be finite and >= 0, got {s_nu0}"),
        ));
    }
    Ok(WhiteFmLinewidth {
        hwhm: 0.5 * PI * s_nu0,
        fwhm: PI * s_nu0,
        cutoff_fc: PI * PI * s_nu0,
        residual_phase_var: 1.0 / (PI * PI),
        degenerate: s_nu0 == 0.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzianFit {
    pub center: f64,
    pub fwhm: f64,
    pub peak: f64,
}

/// Fit `peak / (1 + ((ν - center)/hwhm)²)` to the bins above `0.1 × peak`.
///
/// `1/S` is quadratic in `ν` for a Lorentzian; the quadratic is fitted by
/// least squares with weights `S²`, which equalizes the relative noise of the
/// bins.
pub fn fit_lorentzian(sd: &SpectralDensity) -> Result<LorentzianFit> {
    let (ip, peak) = sd.peak();
    if !(peak > 0.0) {
        return Err(Error::InsufficientData(
            "spectrum has no positive bin".into(),
        ));
    }
    let f0 = sd.freqs()[ip];
    let mut ata = nalgebra::Matrix3::<f64>::zeros();
    let mut atb = nalgebra::Vector3::<f64>::zeros();
    let mut count = 0;
    for (&f, &v) in sd.freqs().iter().zip(sd.values()) {
        if v < 0.1 * peak {
            continue;
        }
        let x = f - f0;
        let row = nalgebra::Vector3::new(1.0, x, x * x);
        let w = v * v;
        ata += w * row * row.transpose();
        atb += w * row * (1.0 / v);
        count += 1;
    }
    if count < 3 {
        return Err(Error::InsufficientData(format!(
            "only {count} bins above 10% of peak"
        )));
    }
    let coef = ata
        .lu()
        .solve(&atb)
        .ok_or_else(|| Error::InsufficientData("singular Lorentzian fit".into()))?;
    let (a, b, c) = (coef[0], coef[1], coef[2]);
    if !(c > 0.0) {
        return Err(Error::InsufficientData(
            "fitted curvature is not positive".into(),
        ));
    }
    let shift = -b / (2.0 * c);
    let gamma2 = a / c - shift * shift;
    if !(gamma2 > 0.0) {
        return Err(Error::InsufficientData(
            "fitted width is not positive".into(),
        ));
    }
    Ok(LorentzianFit {
        center: f0 + shift,
        fwhm: 2.0 * gamma2.sqrt(),
        peak: 1.0 / (c * gamma2),
    })
}
