use nalgebra::{Matrix2, Matrix4, Vector2, Vector4};

use crate::error::{Error, Result};
use crate::phase_space::GaussianState;

/// Joint Gaussian state of two modes in the quadrature order
/// `(X_a, P_a, X_b, P_b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeGaussianState {
    mean: Vector4<f64>,
    cov: Matrix4<f64>,
}

impl TwoModeGaussianState {
    /// Validates symmetry, positive definiteness and the single-mode
    /// uncertainty bound `det ≥ 1/16` of each reduced state.
    pub fn new(mean: Vector4<f64>, cov: Matrix4<f64>) -> Result<Self> {
        if mean.iter().chain(cov.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidState("non-finite moments".into()));
        }
        let scale = cov.amax().max(1.0);
        if (cov - cov.transpose()).amax() > 1e-12 * scale {
            return Err(Error::InvalidState("covariance is not symmetric".into()));
        }
        let cov = (cov + cov.transpose()) * 0.5;
        if cov.cholesky().is_none() {
            return Err(Error::InvalidState(
                "covariance is not positive definite".into(),
            ));
        }
        for m in 0..2 {
            let block = cov.fixed_view::<2, 2>(2 * m, 2 * m);
            let det = block.determinant();
            if det < 1.0 / 16.0 - 1e-12 {
                return Err(Error::InvalidState(format!(
                    "mode {m} violates the uncertainty bound: det = {det}"
                )));
            }
        }
        Ok(Self { mean, cov })
    }

    /// Uncorrelated product of two single-mode states.
    pub fn product(a: &GaussianState, b: &GaussianState) -> Self {
        let mut mean = Vector4::zeros();
        let mut cov = Matrix4::zeros();
        for (k, s) in [a, b].into_iter().enumerate() {
            mean.fixed_rows_mut::<2>(2 * k).copy_from(&s.mean());
            cov.fixed_view_mut::<2, 2>(2 * k, 2 * k).copy_from(&s.cov());
        }
        Self { mean, cov }
    }

    pub fn vacuum() -> Self {
        Self::product(&GaussianState::vacuum(), &GaussianState::vacuum())
    }

    pub fn mean(&self) -> Vector4<f64> {
        self.mean
    }

    pub fn cov(&self) -> Matrix4<f64> {
        self.cov
    }

    /// Reduced single-mode state of mode `index` (0 or 1).
    pub fn mode(&self, index: usize) -> Result<GaussianState> {
        if index > 1 {
            return Err(Error::param("index", "a two-mode state has modes 0 and 1"));
        }
        let k = 2 * index;
        let mean = Vector2::new(self.mean[k], self.mean[k + 1]);
        let cov: Matrix2<f64> = self.cov.fixed_view::<2, 2>(k, k).into_owned();
        GaussianState::new(mean, cov)
    }

    /// Variance of the linear combination `c · (X_a, P_a, X_b, P_b)`.
    pub fn variance_of(&self, c: [f64; 4]) -> f64 {
        let v = Vector4::from(c);
        (v.transpose() * self.cov * v)[(0, 0)]
    }

    /// Covariance of two linear combinations.
    pub fn covariance_of(&self, c: [f64; 4], d: [f64; 4]) -> f64 {
        (Vector4::from(c).transpose() * self.cov * Vector4::from(d))[(0, 0)]
    }

    /// Pearson correlation of two linear combinations.
    pub fn correlation_of(&self, c: [f64; 4], d: [f64; 4]) -> f64 {
        self.covariance_of(c, d) / (self.variance_of(c) * self.variance_of(d)).sqrt()
    }

    /// `⟨Sym(n̂)⟩ = ⟨X²⟩ + ⟨P²⟩` of each mode, mean included.
    pub fn sym_photon_numbers(&self) -> [f64; 2] {
        let m = |k: usize| self.cov[(k, k)] + self.mean[k] * self.mean[k];
        [m(0) + m(1), m(2) + m(3)]
    }

    /// Apply a real linear quadrature map.
    pub(crate) fn transformed(&self, s: &Matrix4<f64>) -> Result<Self> {
        Self::new(s * self.mean, s * self.cov * s.transpose())
    }
}
