use std::f64::consts::TAU;

use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};

use super::series::ComplexTimeSeries;
use crate::error::{Error, Result};
use crate::rng::stream;

/// Stochastic or deterministic model of the slowly varying field `ε(t)`.
///
/// Frequency-noise levels are one-sided white densities `S_ν0` in Hz²/Hz; the
/// synthesized phase is a Gaussian random walk with per-sample frequency
/// variance `S_ν0 / (2 dt)`, which gives a Lorentzian line of FWHM `π S_ν0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseModel {
    /// Noiseless carrier `ε = A`.
    Constant { amplitude: f64 },
    /// Constant amplitude with white frequency noise.
    WhiteFm { amplitude: f64, s_nu0: f64 },
    /// Amplitude `mean + δA(t)` with white one-sided density `s_a0`, constant phase.
    DeltaAmplitude { mean: f64, s_a0: f64 },
    /// Real Gaussian amplitude with exponential correlation
    /// `⟨δA δA(τ)⟩ = rms² e^{-|τ|/corr_time}` plus white frequency noise.
    GaussianAmplitude {
        mean: f64,
        rms: f64,
        corr_time: f64,
        s_nu0: f64,
    },
    /// Circular complex Gaussian (chaotic, thermal-like) field with
    /// `⟨|ε|²⟩ = mean_intensity` and `G1(τ) ∝ e^{-|τ|/coherence_time}`.
    Chaotic {
        mean_intensity: f64,
        coherence_time: f64,
    },
    /// `e^{Γt} θ(-t)`
    E1 { gamma: f64 },
    /// `e^{-Γt} θ(t)`
    E2 { gamma: f64 },
    /// `E1 + E2 = e^{-Γ|t|}`, equal to 2 at `t = 0`.
    E3 { gamma: f64 },
}

impl NoiseModel {
    pub fn tag(&self) -> &'static str {
        match self {
            NoiseModel::Constant { .. } => "constant",
            NoiseModel::WhiteFm { .. } => "white-fm",
            NoiseModel::DeltaAmplitude { .. } => "delta-amplitude",
            NoiseModel::GaussianAmplitude { .. } => "gaussian-amplitude",
            NoiseModel::Chaotic { .. } => "chaotic",
            NoiseModel::E1 { .. } => "e1",
            NoiseModel::E2 { .. } => "e2",
            NoiseModel::E3 { .. } => "e3",
        }
    }

    pub fn is_deterministic(&self) -> bool {
        matches!(
            self,
            NoiseModel::Constant { .. }
                | NoiseModel::E1 { .. }
                | NoiseModel::E2 { .. }
                | NoiseModel::E3 { .. }
        )
    }

    fn validate(&self) -> Result<()> {
        let nonneg = |name: &'static str, v: f64| {
            if v >= 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::param(
                    name,
                    format!("must be finite and >= 0, got {v}"),
                ))
            }
        };
        let positive = |name: &'static str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::param(
                    name,
                    format!("must be finite and > 0, got {v}"),
                ))
            }
        };
        match *self {
            NoiseModel::Constant { amplitude } => nonneg("amplitude", amplitude.abs()),
            NoiseModel::WhiteFm { amplitude, s_nu0 } => {
                nonneg("amplitude", amplitude.abs())?;
                nonneg("s_nu0", s_nu0)
            }
            NoiseModel::DeltaAmplitude { mean, s_a0 } => {
                nonneg("mean", mean.abs())?;
                nonneg("s_a0", s_a0)
            }
            NoiseModel::GaussianAmplitude {
                mean,
                rms,
                corr_time,
                s_nu0,
            } => {
                nonneg("mean", mean.abs())?;
                nonneg("rms", rms)?;
                positive("corr_time", corr_time)?;
                nonneg("s_nu0", s_nu0)
            }
            NoiseModel::Chaotic {
                mean_intensity,
                coherence_time,
            } => {
                nonneg("mean_intensity", mean_intensity)?;
                positive("coherence_time", coherence_time)
            }
            NoiseModel::E1 { gamma } | NoiseModel::E2 { gamma } | NoiseModel::E3 { gamma } => {
                positive("gamma", gamma)
            }
        }
    }
}

/// Synthesize one realization of `model` with seed stream `(seed, 0)`.
pub fn synthesize_field(
    model: &NoiseModel,
    duration: f64,
    dt: f64,
    seed: u64,
) -> Result<ComplexTimeSeries> {
    synthesize_member(model, duration, dt, seed, 0)
}

/// Synthesize ensemble member `member`, drawing from stream `(seed, member)`.
///
/// Deterministic models ignore the seed. The pulse models `E1/E2/E3` are
/// centred: the grid starts at `-⌊N/2⌋ dt` so that `t = 0` is a sample.
pub fn synthesize_member(
    model: &NoiseModel,
    duration: f64,
    dt: f64,
    seed: u64,
    member: u64,
) -> Result<ComplexTimeSeries> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::param("dt", format!("must be positive, got {dt}")));
    }
    if !(duration > 0.0 && duration.is_finite()) {
        return Err(Error::param(
            "duration",
            format!("must be positive, got {duration}"),
        ));
    }
    if duration < 100.0 * dt * (1.0 - 1e-12) {
        return Err(Error::param("duration", "must cover at least 100 samples"));
    }
    model.validate()?;
    let n = (duration / dt).round() as usize;
    let mut rng = stream(seed, member);
    let mut normal = move || -> f64 { StandardNormal.sample(&mut rng) };

    let pulse_start = -((n / 2) as f64) * dt;
    let (samples, t0) = match *model {
        NoiseModel::Constant { amplitude } => (vec![Complex64::new(amplitude, 0.0); n], 0.0),
        NoiseModel::WhiteFm { amplitude, s_nu0 } => {
            let phase = white_fm_phase(n, dt, s_nu0, &mut normal);
            (
                phase
                    .iter()
                    .map(|&p| Complex64::from_polar(amplitude, p))
                    .collect(),
                0.0,
            )
        }
        NoiseModel::DeltaAmplitude { mean, s_a0 } => {
            let sd = (s_a0 / (2.0 * dt)).sqrt();
            (
                (0..n)
                    .map(|_| Complex64::new(mean + sd * normal(), 0.0))
                    .collect(),
                0.0,
            )
        }
        NoiseModel::GaussianAmplitude {
            mean,
            rms,
            corr_time,
            s_nu0,
        } => {
            let amp = ou_process(n, dt, corr_time, rms, &mut normal);
            let phase = white_fm_phase(n, dt, s_nu0, &mut normal);
            (
                amp.iter()
                    .zip(&phase)
                    .map(|(&a, &p)| Complex64::from_polar(mean + a, p))
                    .collect(),
                0.0,
            )
        }
        NoiseModel::Chaotic {
            mean_intensity,
            coherence_time,
        } => {
            let sd = (mean_intensity / 2.0).sqrt();
            let re = ou_process(n, dt, coherence_time, sd, &mut normal);
            let im = ou_process(n, dt, coherence_time, sd, &mut normal);
            (
                re.iter()
                    .zip(&im)
                    .map(|(&a, &b)| Complex64::new(a, b))
                    .collect(),
                0.0,
            )
        }
        NoiseModel::E1 { gamma } => (
            pulse(n, dt, pulse_start, |t| {
                if t <= 0.0 {
                    (gamma * t).exp()
                } else {
                    0.0
                }
            }),
            pulse_start,
        ),
        NoiseModel::E2 { gamma } => (
            pulse(n, dt, pulse_start, |t| {
                if t >= 0.0 {
                    (-gamma * t).exp()
                } else {
                    0.0
                }
            }),
            pulse_start,
        ),
        NoiseModel::E3 { gamma } => (
            pulse(n, dt, pulse_start, |t| {
                let e1 = if t <= 0.0 { (gamma * t).exp() } else { 0.0 };
                let e2 = if t >= 0.0 { (-gamma * t).exp() } else { 0.0 };
                e1 + e2
            }),
            pulse_start,
        ),
    };
    ComplexTimeSeries::with_start(samples, dt, t0, 0.0)
}

fn pulse(n: usize, dt: f64, t0: f64, f: impl Fn(f64) -> f64) -> Vec<Complex64> {
    (0..n)
        .map(|i| {
            // Snap to the exact grid so that t = 0 is hit without rounding.
            let k = i as i64 - (-t0 / dt).round() as i64;
            Complex64::new(f(k as f64 * dt), 0.0)
        })
        .collect()
}

fn white_fm_phase(n: usize, dt: f64, s_nu0: f64, normal: &mut impl FnMut() -> f64) -> Vec<f64> {
    let step_sd = TAU * (s_nu0 / (2.0 * dt)).sqrt() * dt;
    let mut phase = Vec::with_capacity(n);
    let mut p = 0.0;
    for _ in 0..n {
        phase.push(p);
        if step_sd > 0.0 {
            p += step_sd * normal();
        }
    }
    phase
}

/// Stationary Ornstein-Uhlenbeck sequence, exact on the grid.
fn ou_process(n: usize, dt: f64, tau: f64, sd: f64, normal: &mut impl FnMut() -> f64) -> Vec<f64> {
    let rho = (-dt / tau).exp();
    let kick = sd * (1.0 - rho * rho).sqrt();
    let mut x = sd * normal();
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(x);
        x = rho * x + kick * normal();
    }
    out
}
