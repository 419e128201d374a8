use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, Matrix2, Vector2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::multimode::two_mode::TwoModeGaussianState;
use crate::phase_space::GaussianState;

const TOL: f64 = 1e-12;

/// Output mode `c = α1 a + α2 b + α3 a† + α4 b†`.
pub type Coefficients = [Complex64; 4];

/// Linear two-mode transformation, one coefficient row per output mode.
#[derive(Debug, Clone, PartialEq)]
pub struct BogoliubovMap {
    outputs: Vec<Coefficients>,
}

fn bracket(c: &Coefficients, d: &Coefficients) -> (Complex64, Complex64) {
    // [c, d†] and [c, d] for c, d linear in (a, b, a†, b†).
    let dagger = c[0] * d[0].conj() + c[1] * d[1].conj() - c[2] * d[2].conj() - c[3] * d[3].conj();
    let plain = c[0] * d[2] - c[2] * d[0] + c[1] * d[3] - c[3] * d[1];
    (dagger, plain)
}

impl BogoliubovMap {
    /// One or two output modes; each must satisfy `[c, c†] = 1` and distinct
    /// outputs must commute with each other and with their adjoints.
    pub fn new(outputs: Vec<Coefficients>) -> Result<Self> {
        if outputs.is_empty() || outputs.len() > 2 {
            return Err(Error::InvalidMap(format!(
                "expected 1 or 2 output modes, got {}",
                outputs.len()
            )));
        }
        for (k, c) in outputs.iter().enumerate() {
            if c.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::InvalidMap(format!(
                    "output {k} has non-finite coefficients"
                )));
            }
            let (norm, _) = bracket(c, c);
            if (norm.re - 1.0).abs() > TOL {
                return Err(Error::InvalidMap(format!(
                    "output {k} is not a valid field operator: [c, c†] = {}",
                    norm.re
                )));
            }
        }
        if let [c, d] = outputs.as_slice() {
            let (dagger, plain) = bracket(c, d);
            if dagger.norm() > TOL || plain.norm() > TOL {
                return Err(Error::InvalidMap(format!(
                    "outputs do not commute: [c, d†] = {dagger}, [c, d] = {plain}"
                )));
            }
        }
        Ok(Self { outputs })
    }

    pub fn outputs(&self) -> &[Coefficients] {
        &self.outputs
    }

    /// Left-hand side of the commutator condition for each output,
    /// `|α1|² + |α2|² - |α3|² - |α4|²`.
    pub fn commutator_norms(&self) -> Vec<f64> {
        self.outputs.iter().map(|c| bracket(c, c).0.re).collect()
    }

    /// Real map from `(X_a, P_a, X_b, P_b)` to the output quadratures.
    ///
    /// A coefficient `u` on an annihilator rotates `(X, P)` by `arg u` and
    /// scales by `|u|`; on a creator the same action follows the
    /// conjugation `(X, P) → (X, -P)`.
    pub fn quadrature_matrix(&self) -> DMatrix<f64> {
        let mut s = DMatrix::zeros(2 * self.outputs.len(), 4);
        for (k, c) in self.outputs.iter().enumerate() {
            for (j, u) in c.iter().enumerate() {
                let mode = j % 2;
                let conj = if j >= 2 { -1.0 } else { 1.0 };
                s[(2 * k, 2 * mode)] += u.re;
                s[(2 * k, 2 * mode + 1)] += -u.im * conj;
                s[(2 * k + 1, 2 * mode)] += u.im;
                s[(2 * k + 1, 2 * mode + 1)] += u.re * conj;
            }
        }
        s
    }

    /// Complex-conjugated coefficients. Applying it twice gives back the
    /// original map.
    pub(crate) fn conjugated(&self) -> Self {
        Self {
            outputs: self.outputs.iter().map(|c| c.map(|z| z.conj())).collect(),
        }
    }
}

/// Named single-output channels, acting on signal `a` with ancilla `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    /// `c = √η a + √(1-η) b`, η in `[0, 1]`.
    Attenuation,
    /// Phase-insensitive gain `c = √G a + √(G-1) b†`, `G ≥ 1`.
    Amplification,
    /// Degenerate gain `c = √G a + √(G-1) a†`, `G ≥ 1`.
    PhaseSensitive,
    /// `c = √G a† + √(G+1) b`, `G > 0`.
    PhaseConjugation,
    /// Heterodyne measurement followed by preparation of a coherent state
    /// with gain `G`. Not a linear map; only its noise figure is available.
    ElectronicRepeater,
    /// `c = √η a + √(1-η) a`, which is not a field operator for
    /// `0 < η < 1`. Kept so that the rejection can be demonstrated.
    NaiveAttenuation,
}

impl ChannelKind {
    pub const ALL: [ChannelKind; 5] = [
        Self::Attenuation,
        Self::Amplification,
        Self::PhaseSensitive,
        Self::PhaseConjugation,
        Self::ElectronicRepeater,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Attenuation => "attenuation",
            Self::Amplification => "amplification",
            Self::PhaseSensitive => "phase-sensitive",
            Self::PhaseConjugation => "phase-conjugation",
            Self::ElectronicRepeater => "electronic-repeater",
            Self::NaiveAttenuation => "naive-attenuation",
        }
    }

    fn check(self, param: f64) -> Result<()> {
        let ok = match self {
            Self::Attenuation | Self::NaiveAttenuation => (0.0..=1.0).contains(&param),
            Self::Amplification | Self::PhaseSensitive => param >= 1.0 && param.is_finite(),
            Self::PhaseConjugation | Self::ElectronicRepeater => param > 0.0 && param.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            let range = match self {
                Self::Attenuation | Self::NaiveAttenuation => "[0, 1]",
                Self::Amplification | Self::PhaseSensitive => "[1, ∞)",
                _ => "(0, ∞)",
            };
            Err(Error::param(
                "param",
                format!(
                    "{} requires a parameter in {range}, got {param}",
                    self.name()
                ),
            ))
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChannelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Self::Attenuation,
            Self::Amplification,
            Self::PhaseSensitive,
            Self::PhaseConjugation,
            Self::ElectronicRepeater,
            Self::NaiveAttenuation,
        ]
        .into_iter()
        .find(|k| k.name() == s)
        .ok_or_else(|| Error::Parse(format!("unknown channel '{s}'")))
    }
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn make_channel(kind: ChannelKind, param: f64) -> Result<BogoliubovMap> {
    kind.check(param)?;
    let z = re(0.0);
    let row =
        match kind {
            ChannelKind::Attenuation => [re(param.sqrt()), re((1.0 - param).sqrt()), z, z],
            ChannelKind::Amplification => [re(param.sqrt()), z, z, re((param - 1.0).sqrt())],
            ChannelKind::PhaseSensitive => [re(param.sqrt()), z, re((param - 1.0).sqrt()), z],
            ChannelKind::PhaseConjugation => [z, re((param + 1.0).sqrt()), re(param.sqrt()), z],
            ChannelKind::NaiveAttenuation => [re(param.sqrt() + (1.0 - param).sqrt()), z, z, z],
            ChannelKind::ElectronicRepeater => return Err(Error::Unsupported(
                "the electronic repeater is a measure-and-prepare process, not a linear mode map"
                    .into(),
            )),
        };
    BogoliubovMap::new(vec![row])
}

/// Single output mode of a one-output map acting on a two-mode input.
pub fn apply_channel(map: &BogoliubovMap, state: &TwoModeGaussianState) -> Result<GaussianState> {
    if map.outputs.len() != 1 {
        return Err(Error::InvalidMap(
            "apply_channel expects a single-output map".into(),
        ));
    }
    let s = map.quadrature_matrix();
    let m = &s * DMatrix::from_column_slice(4, 1, state.mean().as_slice());
    let c = &s * DMatrix::from_column_slice(4, 4, state.cov().as_slice()) * s.transpose();
    GaussianState::new(
        Vector2::new(m[0], m[1]),
        Matrix2::new(c[(0, 0)], c[(0, 1)], c[(1, 0)], c[(1, 1)]),
    )
}

/// Channel acting on `signal` with the ancilla in vacuum.
pub fn apply_channel_to_mode(map: &BogoliubovMap, signal: &GaussianState) -> Result<GaussianState> {
    apply_channel(
        map,
        &TwoModeGaussianState::product(signal, &GaussianState::vacuum()),
    )
}

/// Both outputs of a two-output map.
pub fn apply_two_mode_map(
    map: &BogoliubovMap,
    state: &TwoModeGaussianState,
) -> Result<TwoModeGaussianState> {
    if map.outputs.len() != 2 {
        return Err(Error::InvalidMap("expected a two-output map".into()));
    }
    let s = map.quadrature_matrix();
    let s4 = nalgebra::Matrix4::from_iterator(s.iter().copied());
    TwoModeGaussianState::new(s4 * state.mean(), s4 * state.cov() * s4.transpose())
}

/// Ratio of output to input signal-to-noise ratio in the amplitude
/// quadrature, for a coherent input and vacuum ancilla.
pub fn noise_figure(kind: ChannelKind, param: f64) -> Result<f64> {
    kind.check(param)?;
    let g = param;
    Ok(match kind {
        ChannelKind::Attenuation => g,
        ChannelKind::Amplification => g / (2.0 * g - 1.0),
        ChannelKind::PhaseSensitive => 1.0,
        ChannelKind::PhaseConjugation | ChannelKind::ElectronicRepeater => g / (2.0 * g + 1.0),
        ChannelKind::NaiveAttenuation => return make_channel(kind, param).map(|_| g),
    })
}

fn snr(mean: f64, var: f64) -> f64 {
    mean * mean / var
}

/// Noise figure obtained by propagating a coherent state `X0 = 1` through
/// the channel and comparing amplitude-quadrature signal-to-noise ratios.
pub fn noise_figure_numeric(kind: ChannelKind, param: f64) -> Result<f64> {
    kind.check(param)?;
    let input = GaussianState::coherent(re(1.0));
    let snr_in = snr(input.mean()[0], input.cov()[(0, 0)]);
    let (mean, var) = match kind {
        ChannelKind::ElectronicRepeater => {
            // Heterodyne detection adds a vacuum unit to each quadrature;
            // the re-prepared coherent state adds another after the gain.
            let g = param.sqrt();
            (
                g * input.mean()[0],
                param * (input.cov()[(0, 0)] + 0.25) + 0.25,
            )
        }
        _ => {
            let out = apply_channel_to_mode(&make_channel(kind, param)?, &input)?;
            (out.mean()[0], out.cov()[(0, 0)])
        }
    };
    Ok(snr(mean, var) / snr_in)
}

/// Mode matrix of a two-output map built from a beam splitter, for
/// cross-checking the general machinery.
pub fn beam_splitter_map(bs: &crate::multimode::BeamSplitter) -> Result<BogoliubovMap> {
    let u = bs.mode_matrix();
    let z = re(0.0);
    BogoliubovMap::new(vec![[u[0][0], u[0][1], z, z], [u[1][0], u[1][1], z, z]])
}
