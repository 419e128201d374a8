use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::unwrap;

/// Uniformly sampled slowly varying field amplitude `ε(t)`.
///
/// The full optical field is `E(t) = ε(t) e^{-iω_c t}` with
/// `ω_c = 2π carrier_freq`. Sample `n` sits at `t0 + n dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexTimeSeries {
    samples: Vec<Complex64>,
    dt: f64,
    t0: f64,
    carrier_freq: f64,
}

impl ComplexTimeSeries {
    pub fn new(samples: Vec<Complex64>, dt: f64, carrier_freq: f64) -> Result<Self> {
        Self::with_start(samples, dt, 0.0, carrier_freq)
    }

    pub fn with_start(
        samples: Vec<Complex64>,
        dt: f64,
        t0: f64,
        carrier_freq: f64,
    ) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::TooShort {
                len: samples.len(),
                min: 2,
            });
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::param(
                "dt",
                format!("must be positive and finite, got {dt}"),
            ));
        }
        if !t0.is_finite() || !carrier_freq.is_finite() {
            return Err(Error::param("t0/carrier_freq", "must be finite"));
        }
        if let Some(i) = samples
            .iter()
            .position(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(Error::param(
                "samples",
                format!("non-finite value at index {i}"),
            ));
        }
        Ok(Self {
            samples,
            dt,
            t0,
            carrier_freq,
        })
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn carrier_freq(&self) -> f64 {
        self.carrier_freq
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Record length `N dt`.
    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 * self.dt
    }

    pub fn time(&self, n: usize) -> f64 {
        self.t0 + n as f64 * self.dt
    }

    pub fn intensity(&self) -> Vec<f64> {
        self.samples.iter().map(|c| c.norm_sqr()).collect()
    }

    pub fn amplitude(&self) -> Vec<f64> {
        self.samples.iter().map(|c| c.norm()).collect()
    }

    /// Continuous phase `φ(t)`, unwrapped sample to sample.
    ///
    /// Fails on zero-amplitude samples and on jumps larger than π/2 between
    /// neighbouring samples, which indicate an under-sampled phase.
    pub fn phase(&self) -> Result<Vec<f64>> {
        let mut raw = Vec::with_capacity(self.samples.len());
        for (i, c) in self.samples.iter().enumerate() {
            if c.norm_sqr() == 0.0 {
                return Err(Error::PhaseUndefined { index: i });
            }
            raw.push(c.arg());
        }
        let phase = unwrap(&raw);
        for (i, w) in phase.windows(2).enumerate() {
            let jump = (w[1] - w[0]).abs();
            if jump > std::f64::consts::FRAC_PI_2 {
                return Err(Error::UnderSampledPhase { index: i + 1, jump });
            }
        }
        Ok(phase)
    }

    /// Instantaneous frequency excursion `ν = φ̇/2π` by forward differences;
    /// one sample shorter than the record.
    pub fn frequency(&self) -> Result<Vec<f64>> {
        let phase = self.phase()?;
        let scale = 1.0 / (std::f64::consts::TAU * self.dt);
        Ok(phase.windows(2).map(|w| (w[1] - w[0]) * scale).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpectralKind {
    Field,
    Intensity,
    Amplitude,
    Phase,
    Frequency,
}

impl SpectralKind {
    pub fn name(self) -> &'static str {
        match self {
            SpectralKind::Field => "field",
            SpectralKind::Intensity => "intensity",
            SpectralKind::Amplitude => "amplitude",
            SpectralKind::Phase => "phase",
            SpectralKind::Frequency => "frequency",
        }
    }
}

/// Spectral density on an ascending frequency grid in Hz.
///
/// Field spectra live on absolute optical frequencies around the carrier and
/// carry units of field² per Hz. The four fluctuation kinds are one-sided
/// densities over `f ≥ 0`, normalized so that `Σ S(f) df` equals the
/// variance of the fluctuating quantity.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDensity {
    freqs: Vec<f64>,
    values: Vec<f64>,
    kind: SpectralKind,
}

impl SpectralDensity {
    pub fn new(freqs: Vec<f64>, values: Vec<f64>, kind: SpectralKind) -> Result<Self> {
        if freqs.len() != values.len() {
            return Err(Error::GridMismatch(format!(
                "{} frequencies but {} values",
                freqs.len(),
                values.len()
            )));
        }
        if freqs.is_empty() {
            return Err(Error::TooShort { len: 0, min: 1 });
        }
        if freqs.windows(2).any(|w| !(w[1] > w[0])) || freqs.iter().any(|f| !f.is_finite()) {
            return Err(Error::param(
                "freqs",
                "must be finite and strictly ascending",
            ));
        }
        if let Some(i) = values.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::param(
                "values",
                format!(
                    "must be finite and non-negative, got {} at index {i}",
                    values[i]
                ),
            ));
        }
        Ok(Self {
            freqs,
            values,
            kind,
        })
    }

    pub fn freqs(&self) -> &[f64] {
        &self.freqs
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn kind(&self) -> SpectralKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs.is_empty()
    }

    /// Index and value of the largest bin.
    pub fn peak(&self) -> (usize, f64) {
        self.values
            .iter()
            .copied()
            .enumerate()
            .fold(
                (0, f64::NEG_INFINITY),
                |acc, (i, v)| if v > acc.1 { (i, v) } else { acc },
            )
    }

    /// Trapezoidal integral over the stored grid.
    pub fn total_power(&self) -> f64 {
        crate::numeric::trapz_xy(&self.freqs, &self.values)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CorrelationKind {
    /// `⟨ε*(t) ε(t+τ)⟩`
    G1,
    /// `⟨I(t) I(t+τ)⟩`
    G2Intensity,
    /// `⟨ε*²(t+τ) ε²(t)⟩`, the two-photon correlation.
    G2TwoPhoton,
    /// `⟨A(t) A(t+τ)⟩`
    Amplitude,
    /// `⟨φ(t) φ(t+τ)⟩`
    Phase,
}

/// Correlation function on a lag grid in seconds.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationFunction {
    lags: Vec<f64>,
    values: Vec<Complex64>,
    kind: CorrelationKind,
}

impl CorrelationFunction {
    pub fn new(lags: Vec<f64>, values: Vec<Complex64>, kind: CorrelationKind) -> Result<Self> {
        if lags.len() != values.len() {
            return Err(Error::GridMismatch(format!(
                "{} lags but {} values",
                lags.len(),
                values.len()
            )));
        }
        if lags.is_empty() {
            return Err(Error::TooShort { len: 0, min: 1 });
        }
        if lags.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::param("lags", "must be strictly ascending"));
        }
        if values
            .iter()
            .any(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(Error::param("values", "must be finite"));
        }
        Ok(Self { lags, values, kind })
    }

    /// Build a real-valued correlation.
    pub fn from_real(lags: Vec<f64>, values: &[f64], kind: CorrelationKind) -> Result<Self> {
        Self::new(
            lags,
            values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
            kind,
        )
    }

    pub fn lags(&self) -> &[f64] {
        &self.lags
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn kind(&self) -> CorrelationKind {
        self.kind
    }

    /// Index of the zero lag, if present on the grid.
    pub fn zero_index(&self) -> Option<usize> {
        let scale = self
            .lags
            .iter()
            .fold(0.0_f64, |m, t| m.max(t.abs()))
            .max(f64::MIN_POSITIVE);
        self.lags.iter().position(|t| t.abs() <= 1e-12 * scale)
    }
}
