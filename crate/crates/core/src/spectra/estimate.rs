//! Finite-record estimators: field spectra, fluctuation spectral densities
//! and correlation functions.

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::series::{
    ComplexTimeSeries, CorrelationFunction, CorrelationKind, SpectralDensity, SpectralKind,
};
use crate::error::{Error, Result};

fn fft_forward(buf: &mut [Complex64]) {
    FftPlanner::new().plan_fft_forward(buf.len()).process(buf);
}

fn fft_inverse(buf: &mut [Complex64]) {
    FftPlanner::new().plan_fft_inverse(buf.len()).process(buf);
}

/// Raw lag sums `Σ_n y*_n y_{n+k}` for `k = 0..N`, via a zero-padded FFT.
fn lag_sums(y: &[Complex64]) -> Vec<Complex64> {
    let n = y.len();
    let m = 2 * n;
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    buf[..n].copy_from_slice(y);
    fft_forward(&mut buf);
    for v in buf.iter_mut() {
        *v = Complex64::new(v.norm_sqr(), 0.0);
    }
    fft_inverse(&mut buf);
    buf.truncate(n);
    let scale = 1.0 / m as f64;
    buf.iter().map(|v| v * scale).collect()
}

/// Detuning grid `m / (M dt)` for `m = -M/2 .. M/2 - 1`, with the matching FFT
/// bin for each entry.
fn centered_bins(m: usize, dt: f64) -> impl Iterator<Item = (f64, usize)> {
    let half = (m / 2) as i64;
    (-half..(m as i64 - half))
        .map(move |k| (k as f64 / (m as f64 * dt), k.rem_euclid(m as i64) as usize))
}

fn check_min_len(series: &ComplexTimeSeries, min: usize) -> Result<()> {
    if series.len() < min {
        Err(Error::TooShort {
            len: series.len(),
            min,
        })
    } else {
        Ok(())
    }
}

/// Field spectrum by the Wiener-Khinchin route.
///
/// The autocorrelation `R(k) = (1/N) Σ ε*_n ε_{n+k}` of the record is
/// Fourier transformed over all lags `|k| < N`:
/// `S(ν_c + δ) = dt Σ_k R(k) e^{i2πδ k dt}`, evaluated on the detuning grid of
/// spacing `1/(2N dt)`. On that grid the transform coincides with
/// [`periodogram`]. Frequencies are absolute (`carrier_freq + δ`).
pub fn field_spectrum(series: &ComplexTimeSeries) -> Result<SpectralDensity> {
    check_min_len(series, 4)?;
    let n = series.len();
    let m = 2 * n;
    let dt = series.dt();
    let sums = lag_sums(series.samples());
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    for (k, s) in sums.iter().enumerate() {
        let r = s / n as f64;
        buf[k] = r;
        if k > 0 {
            buf[m - k] = r.conj();
        }
    }
    fft_inverse(&mut buf);
    let (freqs, values) = centered_bins(m, dt)
        .map(|(d, idx)| (series.carrier_freq() + d, (dt * buf[idx].re).max(0.0)))
        .unzip();
    SpectralDensity::new(freqs, values, SpectralKind::Field)
}

/// Normalized periodogram `dt |Σ ε_n e^{i2πδ n dt}|² / N` on the same grid as
/// [`field_spectrum`].
pub fn periodogram(series: &ComplexTimeSeries) -> Result<SpectralDensity> {
    check_min_len(series, 4)?;
    let n = series.len();
    let m = 2 * n;
    let dt = series.dt();
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    buf[..n].copy_from_slice(series.samples());
    fft_inverse(&mut buf);
    let (freqs, values) = centered_bins(m, dt)
        .map(|(d, idx)| {
            (
                series.carrier_freq() + d,
                dt * buf[idx].norm_sqr() / n as f64,
            )
        })
        .unzip();
    SpectralDensity::new(freqs, values, SpectralKind::Field)
}

/// One-sided density of a real sequence with its mean removed, on the grid
/// `f_m = m/(N dt)`, `m = 0..=N/2`. `Σ S df` equals the sample variance.
fn one_sided(x: &[f64], dt: f64) -> (Vec<f64>, Vec<f64>) {
    let n = x.len();
    let mean = x.iter().sum::<f64>() / n as f64;
    let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v - mean, 0.0)).collect();
    fft_forward(&mut buf);
    let half = n / 2;
    let df = 1.0 / (n as f64 * dt);
    (0..=half)
        .map(|m| {
            let edge = m == 0 || (n % 2 == 0 && m == half);
            let w = if edge { 1.0 } else { 2.0 };
            (m as f64 * df, w * dt * buf[m].norm_sqr() / n as f64)
        })
        .unzip()
}

/// One-sided spectral density of intensity, amplitude, phase or frequency
/// fluctuations.
///
/// Each is the transform of the autocorrelation of the mean-removed quantity,
/// computed as the equivalent periodogram. The phase is unwrapped and its
/// end-to-end drift removed (the record is made periodic), so a random-walk
/// phase does not leak a spurious `1/f²` term. The frequency density is the
/// spectral derivative of the phase density, `S_ν(f) = f² S_φ(f)`.
pub fn spectral_density(series: &ComplexTimeSeries, kind: SpectralKind) -> Result<SpectralDensity> {
    check_min_len(series, 4)?;
    let dt = series.dt();
    let (freqs, values) = match kind {
        SpectralKind::Field => {
            return Err(Error::param(
                "kind",
                "use field_spectrum for the field spectrum",
            ))
        }
        SpectralKind::Intensity => one_sided(&series.intensity(), dt),
        SpectralKind::Amplitude => one_sided(&series.amplitude(), dt),
        SpectralKind::Phase | SpectralKind::Frequency => {
            let phase = series.phase()?;
            let n = phase.len();
            let drift = (phase[n - 1] - phase[0]) / (n - 1) as f64;
            let bridge: Vec<f64> = phase
                .iter()
                .enumerate()
                .map(|(i, p)| p - phase[0] - drift * i as f64)
                .collect();
            let (f, s) = one_sided(&bridge, dt);
            if kind == SpectralKind::Frequency {
                let s = f.iter().zip(&s).map(|(f, s)| f * f * s).collect();
                (f, s)
            } else {
                (f, s)
            }
        }
    };
    SpectralDensity::new(freqs, values, kind)
}

/// Finite-record correlation function on the symmetric lag grid
/// `k dt`, `|k| ≤ ⌊max_lag/dt⌋`.
///
/// Lag `k` is averaged over its `N - |k|` overlapping sample pairs. The
/// amplitude and phase kinds use `|ε|` and the unwrapped phase.
pub fn correlation(
    series: &ComplexTimeSeries,
    kind: CorrelationKind,
    max_lag: f64,
) -> Result<CorrelationFunction> {
    let n = series.len();
    let dt = series.dt();
    if !(max_lag >= 0.0) || max_lag >= series.duration() / 4.0 {
        return Err(Error::GridMismatch(format!(
            "max_lag {max_lag} s must be non-negative and below a quarter of the {} s record",
            series.duration()
        )));
    }
    let k_max = (max_lag / dt + 1e-9).floor() as usize;
    let y: Vec<Complex64> = match kind {
        CorrelationKind::G1 => series.samples().to_vec(),
        CorrelationKind::G2Intensity => series
            .intensity()
            .into_iter()
            .map(|v| Complex64::new(v, 0.0))
            .collect(),
        CorrelationKind::G2TwoPhoton => series.samples().iter().map(|c| c * c).collect(),
        CorrelationKind::Amplitude => series
            .amplitude()
            .into_iter()
            .map(|v| Complex64::new(v, 0.0))
            .collect(),
        CorrelationKind::Phase => series
            .phase()?
            .into_iter()
            .map(|v| Complex64::new(v, 0.0))
            .collect(),
    };
    let sums = lag_sums(&y);
    let positive: Vec<Complex64> = (0..=k_max)
        .map(|k| {
            let c = sums[k] / (n - k) as f64;
            match kind {
                // ⟨y*(t+τ) y(t)⟩ with y = ε² is the conjugate of the lag sum.
                CorrelationKind::G2TwoPhoton => c.conj(),
                CorrelationKind::G1 => c,
                _ => Complex64::new(c.re, 0.0),
            }
        })
        .collect();
    let mut lags = Vec::with_capacity(2 * k_max + 1);
    let mut values = Vec::with_capacity(2 * k_max + 1);
    for k in (1..=k_max).rev() {
        lags.push(-(k as f64) * dt);
        values.push(positive[k].conj());
    }
    for (k, v) in positive.iter().enumerate() {
        lags.push(k as f64 * dt);
        // The zero lag of an autocorrelation is real; drop rounding residue.
        values.push(if k == 0 {
            Complex64::new(v.re, 0.0)
        } else {
            *v
        });
    }
    CorrelationFunction::new(lags, values, kind)
}

/// Amplitude correlation `√((G2_I(τ) - ⟨I⟩²)/2)` from the intensity
/// correlation, valid for a real Gaussian amplitude.
///
/// Radicands down to `-1e-12 ⟨I⟩²` are treated as rounding and clamped to
/// zero; anything more negative means the input is not Gaussian-consistent.
pub fn amplitude_corr_from_intensity(
    g2i: &CorrelationFunction,
    mean_intensity: f64,
) -> Result<CorrelationFunction> {
    if g2i.kind() != CorrelationKind::G2Intensity {
        return Err(Error::param("g2i", "expected an intensity correlation"));
    }
    let i2 = mean_intensity * mean_intensity;
    let tol = 1e-12 * i2.max(f64::MIN_POSITIVE);
    let mut out = Vec::with_capacity(g2i.values().len());
    for (lag, v) in g2i.lags().iter().zip(g2i.values()) {
        let radicand = (v.re - i2) / 2.0;
        if radicand < -tol {
            return Err(Error::NotGaussianConsistent {
                lag: *lag,
                radicand,
            });
        }
        out.push(radicand.max(0.0).sqrt());
    }
    CorrelationFunction::from_real(g2i.lags().to_vec(), &out, CorrelationKind::Amplitude)
}
