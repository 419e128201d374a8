use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;

use super::fock;
use crate::error::{Error, Result};

/// Default Fock-space cutoff: photon numbers `0..=64`.
pub const DEFAULT_TRUNCATION: usize = 64;

/// Single-mode Gaussian state in quadrature form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState {
    mean: Vector2<f64>,
    cov: Matrix2<f64>,
}

impl GaussianState {
    pub fn new(mean: Vector2<f64>, cov: Matrix2<f64>) -> Result<Self> {
        if mean.iter().chain(cov.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidState("non-finite mean or covariance".into()));
        }
        let scale = cov.abs().max().max(1.0);
        if (cov[(0, 1)] - cov[(1, 0)]).abs() > 1e-12 * scale {
            return Err(Error::InvalidState("covariance is not symmetric".into()));
        }
        let det = cov.determinant();
        if !(cov[(0, 0)] > 0.0 && det > 0.0) {
            return Err(Error::InvalidState(
                "covariance is not positive definite".into(),
            ));
        }
        if det < 1.0 / 16.0 - 1e-12 {
            return Err(Error::InvalidState(format!(
                "det(cov) = {det} violates the uncertainty bound 1/16"
            )));
        }
        let sym = 0.5 * (cov[(0, 1)] + cov[(1, 0)]);
        let cov = Matrix2::new(cov[(0, 0)], sym, sym, cov[(1, 1)]);
        Ok(Self { mean, cov })
    }

    pub fn vacuum() -> Self {
        Self {
            mean: Vector2::zeros(),
            cov: Matrix2::identity() * 0.25,
        }
    }

    pub fn coherent(alpha: Complex64) -> Self {
        Self {
            mean: Vector2::new(alpha.re, alpha.im),
            cov: Matrix2::identity() * 0.25,
        }
    }

    pub fn thermal(nbar: f64) -> Result<Self> {
        if !(nbar >= 0.0 && nbar.is_finite()) {
            return Err(Error::param(
                "nbar",
                format!("must be finite and >= 0, got {nbar}"),
            ));
        }
        Ok(Self {
            mean: Vector2::zeros(),
            cov: Matrix2::identity() * (0.5 * nbar + 0.25),
        })
    }

    /// Squeezed vacuum with `⟨X²⟩ = ε/4`, `⟨P²⟩ = 1/(4ε)`.
    pub fn squeezed_vacuum(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::param(
                "epsilon",
                format!("must be finite and > 0, got {epsilon}"),
            ));
        }
        Ok(Self {
            mean: Vector2::zeros(),
            cov: Matrix2::new(0.25 * epsilon, 0.0, 0.0, 0.25 / epsilon),
        })
    }

    pub fn mean(&self) -> Vector2<f64> {
        self.mean
    }

    pub fn cov(&self) -> Matrix2<f64> {
        self.cov
    }

    /// Coherent amplitude `α = X₀ + iP₀`.
    pub fn alpha(&self) -> Complex64 {
        Complex64::new(self.mean[0], self.mean[1])
    }

    pub fn is_pure(&self) -> bool {
        (self.cov.determinant() - 1.0 / 16.0).abs() <= 1e-12
    }

    /// `⟨n⟩ = ⟨X²⟩ + ⟨P²⟩ - 1/2`.
    pub fn mean_photon_number(&self) -> f64 {
        self.cov.trace() + self.mean.norm_squared() - 0.5
    }

    /// Mean of `X(θ) = X cos θ + P sin θ`.
    pub fn rotated_mean(&self, theta: f64) -> f64 {
        self.mean[0] * theta.cos() + self.mean[1] * theta.sin()
    }

    /// Variance of `X(θ) = X cos θ + P sin θ`.
    pub fn rotated_variance(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        c * c * self.cov[(0, 0)] + 2.0 * s * c * self.cov[(0, 1)] + s * s * self.cov[(1, 1)]
    }

    pub(crate) fn displaced(&self, beta: Complex64) -> Self {
        Self {
            mean: self.mean + Vector2::new(beta.re, beta.im),
            cov: self.cov,
        }
    }
}

/// Truncated photon-number amplitudes `c_0 … c_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amps: Vec<Complex64>,
}

impl FockVector {
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidState("empty amplitude vector".into()));
        }
        if amps.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::InvalidState("non-finite amplitude".into()));
        }
        let norm = crate::numeric::norm_sqr(&amps);
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!(
                "amplitudes have norm² {norm}, expected 1"
            )));
        }
        Ok(Self { amps })
    }

    /// Normalize and wrap arbitrary non-zero amplitudes.
    pub fn normalized(amps: Vec<Complex64>) -> Result<Self> {
        let norm = crate::numeric::norm_sqr(&amps).sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidState(
                "amplitudes have zero or non-finite norm".into(),
            ));
        }
        Self::new(amps.into_iter().map(|c| c / norm).collect())
    }

    pub fn number(n: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); n + 1];
        amps[n] = Complex64::new(1.0, 0.0);
        Self { amps }
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    /// Highest stored photon number `N`.
    pub fn truncation(&self) -> usize {
        self.amps.len() - 1
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|c| c.norm_sqr()).collect()
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .map(|(n, c)| n as f64 * c.norm_sqr())
            .sum()
    }

    /// `⟨a⟩` and `⟨a²⟩`, evaluated exactly from the amplitudes.
    pub fn ladder_moments(&self) -> (Complex64, Complex64) {
        let c = &self.amps;
        let a1 = (0..c.len().saturating_sub(1))
            .map(|n| c[n].conj() * c[n + 1] * ((n + 1) as f64).sqrt())
            .sum();
        let a2 = (0..c.len().saturating_sub(2))
            .map(|n| c[n].conj() * c[n + 2] * (((n + 1) * (n + 2)) as f64).sqrt())
            .sum();
        (a1, a2)
    }

    /// Quadrature means and covariance from the exact ladder moments.
    pub fn quadrature_moments(&self) -> (Vector2<f64>, Matrix2<f64>) {
        let (a1, a2) = self.ladder_moments();
        let n = self.mean_photon_number();
        let x2 = (2.0 * a2.re + 2.0 * n + 1.0) / 4.0;
        let p2 = (-2.0 * a2.re + 2.0 * n + 1.0) / 4.0;
        let xp = a2.im / 2.0;
        let mean = Vector2::new(a1.re, a1.im);
        let cov = Matrix2::new(
            x2 - mean[0] * mean[0],
            xp - mean[0] * mean[1],
            xp - mean[0] * mean[1],
            p2 - mean[1] * mean[1],
        );
        (mean, cov)
    }
}

/// Photon-number probabilities `p_0 … p_N`, plus the mass that was cut off
/// beyond `N` before renormalization.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonDistribution {
    probs: Vec<f64>,
    tail: f64,
}

impl PhotonDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        Self::with_tail(probs, 0.0)
    }

    pub fn with_tail(probs: Vec<f64>, tail: f64) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidState("empty photon distribution".into()));
        }
        if probs.iter().any(|p| !(*p >= 0.0 && *p <= 1.0 + 1e-12)) {
            return Err(Error::InvalidState(
                "probabilities must lie in [0, 1]".into(),
            ));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!("probabilities sum to {total}")));
        }
        Ok(Self { probs, tail })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn tail(&self) -> f64 {
        self.tail
    }

    pub fn mean(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(n, p)| n as f64 * p)
            .sum()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.probs
            .iter()
            .enumerate()
            .map(|(n, p)| (n as f64 - m).powi(2) * p)
            .sum()
    }

    /// Factorial moment `⟨n(n-1)⟩`.
    pub fn second_factorial_moment(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(n, p)| (n * n.saturating_sub(1)) as f64 * p)
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum State {
    Gaussian(GaussianState),
    Fock(FockVector),
}

impl State {
    pub fn as_gaussian(&self) -> Option<&GaussianState> {
        match self {
            State::Gaussian(g) => Some(g),
            State::Fock(_) => None,
        }
    }

    pub fn as_fock(&self) -> Option<&FockVector> {
        match self {
            State::Fock(f) => Some(f),
            State::Gaussian(_) => None,
        }
    }

    /// Quadrature means and covariance.
    pub fn quadrature_moments(&self) -> (Vector2<f64>, Matrix2<f64>) {
        match self {
            State::Gaussian(g) => (g.mean(), g.cov()),
            State::Fock(f) => f.quadrature_moments(),
        }
    }
}

impl From<GaussianState> for State {
    fn from(g: GaussianState) -> Self {
        State::Gaussian(g)
    }
}

impl From<FockVector> for State {
    fn from(f: FockVector) -> Self {
        State::Fock(f)
    }
}

/// Named state families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateSpec {
    Vacuum,
    Coherent(Complex64),
    Thermal(f64),
    SqueezedVacuum(f64),
    Fock(usize),
    /// `(|α⟩ ± |-α⟩)` normalized; `even` selects the plus sign.
    Cat {
        alpha: Complex64,
        even: bool,
    },
    /// `(|0⟩ + ε|k⟩)` normalized, `k ∈ {1, 2}`.
    Admixture {
        epsilon: f64,
        k: usize,
    },
}

impl StateSpec {
    pub fn is_gaussian(&self) -> bool {
        matches!(
            self,
            StateSpec::Vacuum
                | StateSpec::Coherent(_)
                | StateSpec::Thermal(_)
                | StateSpec::SqueezedVacuum(_)
        )
    }
}

fn fmt_complex(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else {
        format!("{},{}", c.re, c.im)
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpec::Vacuum => write!(f, "vacuum"),
            StateSpec::Coherent(a) => write!(f, "coherent:{}", fmt_complex(*a)),
            StateSpec::Thermal(n) => write!(f, "thermal:{n}"),
            StateSpec::SqueezedVacuum(e) => write!(f, "squeezed:{e}"),
            StateSpec::Fock(n) => write!(f, "fock:{n}"),
            StateSpec::Cat { alpha, even } => {
                write!(f, "cat:{}", fmt_complex(*alpha))?;
                if !even {
                    write!(f, ",odd")?;
                }
                Ok(())
            }
            StateSpec::Admixture { epsilon, k } => write!(f, "admix{k}:{epsilon}"),
        }
    }
}

impl FromStr for StateSpec {
    type Err = Error;

    /// Parses `vacuum`, `coherent:RE[,IM]`, `thermal:NBAR`, `squeezed:EPS`,
    /// `fock:N`, `cat:RE[,IM][,odd|,even]`, `admix1:EPS`, `admix2:EPS`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unrecognized state spec `{s}`"));
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number `{t}` in `{s}`")))
        };
        let (head, rest) = match s.split_once(':') {
            Some((h, r)) => (h.trim(), Some(r)),
            None => (s.trim(), None),
        };
        let args: Vec<&str> = rest
            .map(|r| r.split(',').map(str::trim).collect())
            .unwrap_or_default();
        let complex = |args: &[&str]| -> Result<Complex64> {
            match args {
                [re] => Ok(Complex64::new(num(re)?, 0.0)),
                [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
                _ => Err(bad()),
            }
        };
        let spec = match (head, args.as_slice()) {
            ("vacuum", []) => StateSpec::Vacuum,
            ("coherent", a) => StateSpec::Coherent(complex(a)?),
            ("thermal", [n]) => StateSpec::Thermal(num(n)?),
            ("squeezed", [e]) => StateSpec::SqueezedVacuum(num(e)?),
            ("fock", [n]) => StateSpec::Fock(n.parse().map_err(|_| bad())?),
            ("cat", a) => {
                let (even, a) = match a.last() {
                    Some(&"odd") => (false, &a[..a.len() - 1]),
                    Some(&"even") => (true, &a[..a.len() - 1]),
                    _ => (true, a),
                };
                StateSpec::Cat {
                    alpha: complex(a)?,
                    even,
                }
            }
            ("admix1", [e]) => StateSpec::Admixture {
                epsilon: num(e)?,
                k: 1,
            },
            ("admix2", [e]) => StateSpec::Admixture {
                epsilon: num(e)?,
                k: 2,
            },
            _ => return Err(bad()),
        };
        Ok(spec)
    }
}

/// Build a state with the default truncation.
pub fn make_state(spec: &StateSpec) -> Result<State> {
    make_state_truncated(spec, DEFAULT_TRUNCATION)
}

/// Build a state; non-Gaussian families use photon numbers `0..=truncation`.
pub fn make_state_truncated(spec: &StateSpec, truncation: usize) -> Result<State> {
    Ok(match *spec {
        StateSpec::Vacuum => GaussianState::vacuum().into(),
        StateSpec::Coherent(a) => {
            if !(a.re.is_finite() && a.im.is_finite()) {
                return Err(Error::param("alpha", "must be finite"));
            }
            GaussianState::coherent(a).into()
        }
        StateSpec::Thermal(n) => GaussianState::thermal(n)?.into(),
        StateSpec::SqueezedVacuum(e) => GaussianState::squeezed_vacuum(e)?.into(),
        StateSpec::Fock(n) => FockVector::number(n).into(),
        StateSpec::Cat { alpha, even } => {
            let tail = fock::poisson_tail(alpha.norm_sqr(), truncation);
            if tail > 1e-10 {
                return Err(Error::TruncationOverflow {
                    tail,
                    cutoff: truncation,
                });
            }
            let plus = fock::coherent_amplitudes(alpha, truncation);
            let minus = fock::coherent_amplitudes(-alpha, truncation);
            let sign = if even { 1.0 } else { -1.0 };
            let amps: Vec<Complex64> = plus.iter().zip(&minus).map(|(p, m)| p + sign * m).collect();
            if crate::numeric::norm_sqr(&amps) == 0.0 {
                return Err(Error::InvalidState(
                    "odd cat with α = 0 has no amplitude".into(),
                ));
            }
            FockVector::normalized(amps)?.into()
        }
        StateSpec::Admixture { epsilon, k } => {
            if !(k == 1 || k == 2) {
                return Err(Error::param("k", "admixture is defined for |1⟩ and |2⟩"));
            }
            if !epsilon.is_finite() {
                return Err(Error::param("epsilon", "must be finite"));
            }
            let mut amps = vec![Complex64::new(0.0, 0.0); k + 1];
            amps[0] = Complex64::new(1.0, 0.0);
            amps[k] = Complex64::new(epsilon, 0.0);
            FockVector::normalized(amps)?.into()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_constructors() {
        let v = GaussianState::vacuum();
        assert_eq!(v.cov(), Matrix2::identity() * 0.25);
        assert_eq!(v.mean(), Vector2::zeros());
        let t = GaussianState::thermal(2.0).unwrap();
        assert_eq!(t.cov()[(0, 0)], 1.25);
        let s = GaussianState::squeezed_vacuum(0.5).unwrap();
        assert_eq!(s.cov(), Matrix2::new(0.125, 0.0, 0.0, 0.5));
        assert!(s.is_pure());
        assert!(GaussianState::thermal(-0.1).is_err());
        assert!(GaussianState::squeezed_vacuum(0.0).is_err());
        assert!(GaussianState::new(Vector2::zeros(), Matrix2::identity() * 0.2).is_err());
        assert!(GaussianState::new(Vector2::zeros(), Matrix2::new(0.3, 0.1, 0.0, 0.3)).is_err());
    }

    #[test]
    fn rotated_quadratures() {
        let s = GaussianState::squeezed_vacuum(0.25).unwrap();
        assert!((s.rotated_variance(0.0) - 1.0 / 16.0).abs() < 1e-15);
        assert!((s.rotated_variance(std::f64::consts::FRAC_PI_2) - 1.0).abs() < 1e-15);
        let c = GaussianState::coherent(Complex64::new(1.0, 2.0));
        assert!((c.rotated_mean(std::f64::consts::FRAC_PI_2) - 2.0).abs() < 1e-15);
        assert!((c.mean_photon_number() - 5.0).abs() < 1e-15);
    }

    #[test]
    fn spec_round_trip() {
        for s in [
            "vacuum",
            "coherent:1,1",
            "coherent:2",
            "thermal:1.5",
            "squeezed:0.25",
            "fock:3",
            "cat:2",
            "cat:2,odd",
            "admix2:0.05",
        ] {
            let spec: StateSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("cat".parse::<StateSpec>().is_err());
        assert!("fock:x".parse::<StateSpec>().is_err());
        assert!("nope:1".parse::<StateSpec>().is_err());
    }

    #[test]
    fn even_cat_normalization() {
        let st = make_state(&StateSpec::Cat {
            alpha: Complex64::new(2.0, 0.0),
            even: true,
        })
        .unwrap();
        let f = st.as_fock().unwrap();
        assert!((crate::numeric::norm_sqr(f.amps()) - 1.0).abs() < 1e-10);
        // c_0 = 2 e^{-2} / √(2(1 + e^{-8})) for the even cat at α = 2.
        let want = 2.0 * (-2.0f64).exp() / (2.0 * (1.0 + (-8.0f64).exp())).sqrt();
        assert!((f.amps()[0].re - want).abs() < 1e-12);
        assert!(f.amps().iter().skip(1).step_by(2).all(|c| c.norm() < 1e-15));
    }

    #[test]
    fn oversized_cat_is_rejected() {
        let spec = StateSpec::Cat {
            alpha: Complex64::new(7.0, 0.0),
            even: true,
        };
        assert!(matches!(
            make_state(&spec),
            Err(Error::TruncationOverflow { .. })
        ));
        assert!(make_state_truncated(&spec, 120).is_ok());
    }

    #[test]
    fn admixture_moments() {
        let eps = 0.05;
        let f = make_state(&StateSpec::Admixture { epsilon: eps, k: 1 }).unwrap();
        let (mean, cov) = f.quadrature_moments();
        assert!((mean[0] - eps / (1.0 + eps * eps)).abs() < 1e-15);
        assert!((cov[(0, 0)] - 0.25).abs() < 2.0 * eps * eps);
        let f = make_state(&StateSpec::Admixture { epsilon: eps, k: 2 }).unwrap();
        let (mean, cov) = f.quadrature_moments();
        assert_eq!(mean[0], 0.0);
        let lead = (1.0 + 2.0 * 2f64.sqrt() * eps) / 4.0;
        assert!((cov[(0, 0)] - lead).abs() < 2.0 * eps * eps);
    }

    #[test]
    fn photon_distribution_moments() {
        let pd = PhotonDistribution::new(vec![0.25, 0.5, 0.25]).unwrap();
        assert_eq!(pd.mean(), 1.0);
        assert_eq!(pd.variance(), 0.5);
        assert_eq!(pd.second_factorial_moment(), 0.5);
        assert!(PhotonDistribution::new(vec![0.5, 0.4]).is_err());
    }
}
