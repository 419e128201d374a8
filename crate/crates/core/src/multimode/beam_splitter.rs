use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::multimode::two_mode::TwoModeGaussianState;

const TOL: f64 = 1e-12;

/// Phase convention for the reflection coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BeamSplitterKind {
    /// Real transmission, both reflections `i|r|`.
    Symmetric,
    /// Real coefficients, reflections `+|r|` and `-|r|`.
    Asymmetric,
}

impl fmt::Display for BeamSplitterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Symmetric => "symmetric",
            Self::Asymmetric => "asymmetric",
        })
    }
}

impl FromStr for BeamSplitterKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "symmetric" => Ok(Self::Symmetric),
            "asymmetric" => Ok(Self::Asymmetric),
            _ => Err(Error::Parse(format!("unknown beam-splitter kind '{s}'"))),
        }
    }
}

/// Lossless two-port splitter acting as
/// `out1 = t1 in1 + r1 in2`, `out2 = r2 in1 + t2 in2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSplitter {
    pub t1: Complex64,
    pub t2: Complex64,
    pub r1: Complex64,
    pub r2: Complex64,
    /// Reflection phases, kept separately so that they stay defined when
    /// `|r| = 0`.
    rho: (f64, f64),
}

/// Residuals of the two Stokes relations and of the phase identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StokesResiduals {
    /// `|r1|² + t1* t2 - 1`
    pub norm: f64,
    /// `|r1* t1 + t1* r2|`
    pub cross: f64,
    /// Distance of `ρ1 + ρ2` from `π` modulo `2π`.
    pub phase: f64,
}

impl StokesResiduals {
    pub fn max(&self) -> f64 {
        self.norm.abs().max(self.cross).max(self.phase)
    }
}

fn wrap(phi: f64) -> f64 {
    (phi + PI).rem_euclid(2.0 * PI) - PI
}

impl BeamSplitter {
    /// Splitter with real transmission `√T` and reflection phases `ρ1`,
    /// `ρ2 = π - ρ1`.
    pub fn from_phases(transmittance: f64, rho1: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&transmittance) {
            return Err(Error::InvalidBeamSplitter(format!(
                "transmittance {transmittance} outside [0, 1]"
            )));
        }
        if !rho1.is_finite() {
            return Err(Error::InvalidBeamSplitter(
                "reflection phase must be finite".into(),
            ));
        }
        let t = Complex64::new(transmittance.sqrt(), 0.0);
        let r = (1.0 - transmittance).sqrt();
        let rho2 = PI - rho1;
        let bs = Self {
            t1: t,
            t2: t,
            r1: Complex64::from_polar(r, rho1),
            r2: Complex64::from_polar(r, rho2),
            rho: (rho1, rho2),
        };
        bs.validate()?;
        Ok(bs)
    }

    /// Reflection phases `(ρ1, ρ2)`.
    pub fn reflection_phases(&self) -> (f64, f64) {
        self.rho
    }

    pub fn stokes_residuals(&self) -> StokesResiduals {
        StokesResiduals {
            norm: self.r1.norm_sqr() + (self.t1.conj() * self.t2).re - 1.0,
            cross: (self.r1.conj() * self.t1 + self.t1.conj() * self.r2).norm(),
            phase: wrap(self.rho.0 + self.rho.1 - PI).abs(),
        }
    }

    /// Checks unitarity and the Stokes relations to `1e-12`.
    pub fn validate(&self) -> Result<()> {
        let u = [[self.t1, self.r1], [self.r2, self.t2]];
        let rows = [
            u[0][0].norm_sqr() + u[0][1].norm_sqr(),
            u[1][0].norm_sqr() + u[1][1].norm_sqr(),
        ];
        let orth = (u[0][0] * u[1][0].conj() + u[0][1] * u[1][1].conj()).norm();
        if rows.iter().any(|r| (r - 1.0).abs() > TOL) || orth > TOL {
            return Err(Error::InvalidBeamSplitter(format!(
                "not unitary: row norms {rows:?}, overlap {orth:e}"
            )));
        }
        let res = self.stokes_residuals();
        if res.max() > TOL {
            return Err(Error::InvalidBeamSplitter(format!(
                "Stokes relations violated: {res:?}"
            )));
        }
        Ok(())
    }

    /// Complex mode matrix `[[t1, r1], [r2, t2]]`.
    pub fn mode_matrix(&self) -> [[Complex64; 2]; 2] {
        [[self.t1, self.r1], [self.r2, self.t2]]
    }

    /// Induced orthogonal-symplectic map on `(X_a, P_a, X_b, P_b)`.
    pub fn quadrature_matrix(&self) -> Matrix4<f64> {
        let u = self.mode_matrix();
        let mut s = Matrix4::zeros();
        for (i, row) in u.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                s[(2 * i, 2 * j)] = c.re;
                s[(2 * i, 2 * j + 1)] = -c.im;
                s[(2 * i + 1, 2 * j)] = c.im;
                s[(2 * i + 1, 2 * j + 1)] = c.re;
            }
        }
        s
    }

    /// Classical field amplitudes at the two outputs.
    pub fn split(&self, in1: Complex64, in2: Complex64) -> (Complex64, Complex64) {
        (self.t1 * in1 + self.r1 * in2, self.r2 * in1 + self.t2 * in2)
    }

    /// Send conjugated outputs back through the splitter.
    ///
    /// Running the fields backwards uses the transposed mode matrix. For a
    /// valid splitter, splitting `E` from port 1, conjugating both outputs
    /// and recombining returns `(E*, 0)`.
    pub fn time_reversal_round_trip(&self, field: Complex64) -> (Complex64, Complex64) {
        let (o1, o2) = self.split(field, Complex64::new(0.0, 0.0));
        let (c1, c2) = (o1.conj(), o2.conj());
        (self.t1 * c1 + self.r2 * c2, self.r1 * c1 + self.t2 * c2)
    }
}

/// Construct a splitter of the given phase convention and power
/// transmittance.
pub fn make_beam_splitter(kind: BeamSplitterKind, transmittance: f64) -> Result<BeamSplitter> {
    match kind {
        BeamSplitterKind::Symmetric => BeamSplitter::from_phases(transmittance, PI / 2.0),
        BeamSplitterKind::Asymmetric => BeamSplitter::from_phases(transmittance, 0.0),
    }
}

pub fn apply_beam_splitter(
    bs: &BeamSplitter,
    state: &TwoModeGaussianState,
) -> Result<TwoModeGaussianState> {
    bs.validate()?;
    state.transformed(&bs.quadrature_matrix())
}
