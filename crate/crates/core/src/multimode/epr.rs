use nalgebra::{DMatrix, Matrix4, Vector4};
use num_complex::Complex64;

use crate::error::Result;
use crate::multimode::beam_splitter::{apply_beam_splitter, make_beam_splitter, BeamSplitterKind};
use crate::multimode::two_mode::TwoModeGaussianState;
use crate::phase_space::fock::annihilation;

type Op = DMatrix<Complex64>;

/// Commutators of the 50:50 splitter outputs, evaluated on truncated ladder
/// matrices. Each entry is the largest deviation from the exact value,
/// measured on the interior of the truncated two-mode space where the
/// truncation cannot be seen.
#[derive(Debug, Clone, PartialEq)]
pub struct EprCommutatorReport {
    pub dim: usize,
    /// `[X₃, P₃] - i/2` and `[X₄, P₄] - i/2`.
    pub singles: [f64; 2],
    /// `[X₃, P₄]` and `[X₄, P₃]`.
    pub cross: [f64; 2],
    /// `[X₃, X₄]`, which vanishes identically.
    pub xx: f64,
    /// `[X₃ + X₄, P₃ - P₄]`.
    pub combined: f64,
}

impl EprCommutatorReport {
    pub fn max_residual(&self) -> f64 {
        self.singles
            .iter()
            .chain(&self.cross)
            .fold(self.xx.max(self.combined), |m, v| m.max(*v))
    }
}

fn kron(a: &Op, b: &Op) -> Op {
    a.kronecker(b)
}

fn commutator(a: &Op, b: &Op) -> Op {
    a * b - b * a
}

/// Largest entry of `op - expected·I` restricted to number states with at
/// most `dim - 2` photons in each mode.
fn interior_residual(op: &Op, expected: Complex64, dim: usize) -> f64 {
    let keep: Vec<usize> = (0..dim * dim)
        .filter(|k| k / dim < dim - 1 && k % dim < dim - 1)
        .collect();
    let mut worst = 0.0f64;
    for &r in &keep {
        for &c in &keep {
            let target = if r == c {
                expected
            } else {
                Complex64::new(0.0, 0.0)
            };
            worst = worst.max((op[(r, c)] - target).norm());
        }
    }
    worst
}

/// Build the output quadratures of a symmetric 50:50 splitter from
/// truncated single-mode ladder matrices and evaluate the commutators.
pub fn epr_commutator_check(dim: usize) -> EprCommutatorReport {
    let dim = dim.max(3);
    let bs = make_beam_splitter(BeamSplitterKind::Symmetric, 0.5).expect("valid splitter");
    let a = annihilation(dim);
    let id = Op::identity(dim, dim);
    let a1 = kron(&a, &id);
    let a2 = kron(&id, &a);
    let u = bs.mode_matrix();
    let a3 = &a1 * u[0][0] + &a2 * u[0][1];
    let a4 = &a1 * u[1][0] + &a2 * u[1][1];
    let half = Complex64::new(0.5, 0.0);
    let half_i = Complex64::new(0.0, -0.5);
    let x = |m: &Op| (m + m.adjoint()) * half;
    let p = |m: &Op| (m - m.adjoint()) * half_i;
    let (x3, p3, x4, p4) = (x(&a3), p(&a3), x(&a4), p(&a4));
    let i2 = Complex64::new(0.0, 0.5);
    let zero = Complex64::new(0.0, 0.0);
    EprCommutatorReport {
        dim,
        singles: [
            interior_residual(&commutator(&x3, &p3), i2, dim),
            interior_residual(&commutator(&x4, &p4), i2, dim),
        ],
        cross: [
            interior_residual(&commutator(&x3, &p4), zero, dim),
            interior_residual(&commutator(&x4, &p3), zero, dim),
        ],
        xx: interior_residual(&commutator(&x3, &x4), zero, dim),
        combined: interior_residual(&commutator(&(&x3 + &x4), &(&p3 - &p4)), zero, dim),
    }
}

/// Orthogonally squeezed inputs on an asymmetric 50:50 splitter.
///
/// Input 1 is squeezed in `P` and input 2 in `X`, both with variance
/// `ε/4`. The outputs then satisfy `Var(X₃ + X₄) = Var(P₃ - P₄) = ε/2`.
pub fn epr_pair(epsilon: f64) -> Result<TwoModeGaussianState> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(crate::error::Error::param("epsilon", "must be positive"));
    }
    let cov = Matrix4::from_diagonal(&Vector4::new(
        0.25 / epsilon,
        0.25 * epsilon,
        0.25 * epsilon,
        0.25 / epsilon,
    ));
    let input = TwoModeGaussianState::new(Vector4::zeros(), cov)?;
    apply_beam_splitter(
        &make_beam_splitter(BeamSplitterKind::Asymmetric, 0.5)?,
        &input,
    )
}

/// `(Var(X₃ + X₄), Var(P₃ - P₄))`.
pub fn epr_variances(state: &TwoModeGaussianState) -> (f64, f64) {
    (
        state.variance_of([1.0, 0.0, 1.0, 0.0]),
        state.variance_of([0.0, 1.0, 0.0, -1.0]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase_space::GaussianState;

    #[test]
    fn commutators_on_the_interior() {
        let r = epr_commutator_check(12);
        assert!(r.max_residual() < 1e-10, "{r:?}");
    }

    #[test]
    fn twin_squeezed_inputs() {
        for eps in [0.2, 0.1, 0.05] {
            let (vx, vp) = epr_variances(&epr_pair(eps).unwrap());
            assert!((vx - eps / 2.0).abs() < 1e-15 && (vp - eps / 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn coherent_inputs_stay_uncorrelated() {
        let input = TwoModeGaussianState::product(
            &GaussianState::coherent(Complex64::new(3.0, 1.0)),
            &GaussianState::coherent(Complex64::new(-1.0, 2.0)),
        );
        let out = apply_beam_splitter(
            &make_beam_splitter(BeamSplitterKind::Symmetric, 0.5).unwrap(),
            &input,
        )
        .unwrap();
        assert!(
            out.correlation_of([1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0])
                .abs()
                < 1e-12
        );
    }
}
