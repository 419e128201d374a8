use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};

use nalgebra::{DMatrix, Matrix4, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::multimode::two_mode::TwoModeGaussianState;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Largest admissible phase error in either delay condition, rad.
pub const PHASE_TOLERANCE: f64 = 1e-6;

/// Carrier amplitude together with the correlated upper and lower
/// sidebands, modes ordered `(upper, lower)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SidebandState {
    pub carrier_x0: f64,
    pub epsilon: f64,
    pub modes: TwoModeGaussianState,
}

/// Two-mode squeezed sidebands around a real carrier `X0`.
///
/// `X₊ + X₋` and `P₊ - P₋` have variance `ε/2`, the orthogonal combinations
/// `1/(2ε)`. Each sideband on its own is thermal-like with variance
/// `(ε + 1/ε)/8`.
pub fn sideband_state(carrier_x0: f64, epsilon: f64) -> Result<SidebandState> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::param(
            "epsilon",
            format!("must lie in (0, 1], got {epsilon}"),
        ));
    }
    if !carrier_x0.is_finite() {
        return Err(Error::param("carrier_x0", "must be finite"));
    }
    let single = (epsilon + 1.0 / epsilon) / 8.0;
    let cx = (epsilon - 1.0 / epsilon) / 8.0;
    let mut cov = Matrix4::from_diagonal_element(single);
    cov[(0, 2)] = cx;
    cov[(2, 0)] = cx;
    cov[(1, 3)] = -cx;
    cov[(3, 1)] = -cx;
    Ok(SidebandState {
        carrier_x0,
        epsilon,
        modes: TwoModeGaussianState::new(Vector4::zeros(), cov)?,
    })
}

impl SidebandState {
    /// Free evolution by `Ωt` in the carrier frame: the upper sideband
    /// rotates forward, the lower one backward.
    pub fn rotated(&self, omega_t: f64) -> Result<Self> {
        let (s, c) = omega_t.sin_cos();
        #[rustfmt::skip]
        let m = Matrix4::new(
            c, -s, 0.0, 0.0,
            s,  c, 0.0, 0.0,
            0.0, 0.0, c,  s,
            0.0, 0.0, -s, c,
        );
        Ok(Self {
            modes: self.modes.transformed(&m)?,
            ..self.clone()
        })
    }
}

/// Arm length satisfying `ΩL/c = π/2` and `ω0 L/c = π/2 + 2πm`.
///
/// Returns `(L, m)`. The integer `m` is chosen by rounding; the pair is
/// rejected if either condition is then missed by more than
/// [`PHASE_TOLERANCE`].
pub fn solve_arm_length(omega0: f64, big_omega: f64) -> Result<(f64, i64)> {
    if !(omega0 > 0.0 && big_omega > 0.0 && omega0.is_finite() && big_omega.is_finite()) {
        return Err(Error::param(
            "frequencies",
            "ω0 and Ω must be positive and finite",
        ));
    }
    let m = ((omega0 / big_omega - 1.0) / 4.0).round().max(0.0);
    let length = (FRAC_PI_2 + 2.0 * PI * m) * SPEED_OF_LIGHT / omega0;
    check_phases(length, omega0, big_omega)?;
    Ok((length, m as i64))
}

fn check_phases(length: f64, omega0: f64, big_omega: f64) -> Result<()> {
    let side = big_omega * length / SPEED_OF_LIGHT - FRAC_PI_2;
    let carrier = (omega0 * length / SPEED_OF_LIGHT - FRAC_PI_2).rem_euclid(2.0 * PI);
    let carrier = carrier.min(2.0 * PI - carrier);
    let residual = side.abs().max(carrier);
    if residual > PHASE_TOLERANCE {
        return Err(Error::IncompatiblePhaseConditions { residual });
    }
    Ok(())
}

/// Variances produced by the sideband-separating interferometer.
#[derive(Debug, Clone, PartialEq)]
pub struct InterferometerReport {
    pub length: f64,
    /// Round-trip delay phases `(φ₊, φ0, φ₋)`.
    pub phases: (f64, f64, f64),
    /// Carrier amplitudes at the two outputs.
    pub carriers: (Complex64, Complex64),
    /// Sideband modes `(upper, lower)` leaving output 1.
    pub out1: TwoModeGaussianState,
    /// Sideband modes `(upper, lower)` leaving output 2.
    pub out2: TwoModeGaussianState,
    /// `(label, variance, shot-noise benchmark)` rows.
    pub rows: Vec<(String, f64, f64)>,
}

impl InterferometerReport {
    pub fn variance(&self, label: &str) -> Option<f64> {
        self.rows.iter().find(|r| r.0 == label).map(|r| r.1)
    }
}

/// Mode amplitudes of one output as coefficients on the inputs
/// `(a₊, a₋, v₊, v₋)`: signal sidebands and the vacuum entering the
/// second port.
fn output_rows(phases: [f64; 2]) -> [[Complex64; 4]; 4] {
    let i = Complex64::i();
    let one = Complex64::new(1.0, 0.0);
    let z = Complex64::new(0.0, 0.0);
    let e: Vec<Complex64> = phases
        .iter()
        .map(|&p| Complex64::from_polar(1.0, p))
        .collect();
    let o1 = |s: usize| ((one - e[s]) * 0.5, i * (one + e[s]) * 0.5);
    let o2 = |s: usize| (i * (one + e[s]) * 0.5, (e[s] - one) * 0.5);
    let (a1p, v1p) = o1(0);
    let (a1m, v1m) = o1(1);
    let (a2p, v2p) = o2(0);
    let (a2m, v2m) = o2(1);
    [
        [a1p, z, v1p, z],
        [z, a1m, z, v1m],
        [a2p, z, v2p, z],
        [z, a2m, z, v2m],
    ]
}

/// Quadrature row of `X^θ(Σ u_j a_j)` over the inputs' `(X_j, P_j)`.
fn quadrature_row(u: &[Complex64; 4], theta: f64) -> Vec<f64> {
    let rot = Complex64::from_polar(1.0, -theta);
    u.iter()
        .flat_map(|c| {
            let w = c * rot;
            [w.re, -w.im]
        })
        .collect()
}

fn full_row(u: &[Complex64; 4]) -> [Vec<f64>; 2] {
    let x = quadrature_row(u, 0.0);
    let p = quadrature_row(u, FRAC_PI_2);
    [x, p]
}

/// Propagate carrier and sidebands through the two-splitter delay line.
///
/// Each frequency component picks up `φ = (ω0 + sΩ)L/c`. With both delay
/// conditions met, the upper sideband leaves port 1 and the lower sideband
/// port 2, each accompanied by vacuum from the unused input. Signals are
/// the sideband quadratures in phase with the common input carrier
/// reference `θ = -π/4`; the difference signal recombines the two outputs.
pub fn unbalanced_interferometer(
    state: &SidebandState,
    length: f64,
    omega0: f64,
    big_omega: f64,
) -> Result<InterferometerReport> {
    check_phases(length, omega0, big_omega)?;
    let phi0 = (omega0 * length / SPEED_OF_LIGHT).rem_euclid(2.0 * PI);
    let delta = big_omega * length / SPEED_OF_LIGHT;
    let phases = [phi0 + delta, phi0 - delta];
    let rows = output_rows(phases);

    // Inputs (a₊, a₋, v₊, v₋): sideband block then two vacua.
    let mut cov = DMatrix::<f64>::identity(8, 8) * 0.25;
    let sc = state.modes.cov();
    for r in 0..4 {
        for c in 0..4 {
            cov[(r, c)] = sc[(r, c)];
        }
    }

    let e0 = Complex64::from_polar(1.0, phi0);
    let one = Complex64::new(1.0, 0.0);
    let c1 = (one - e0) * 0.5 * state.carrier_x0;
    let c2 = Complex64::i() * (one + e0) * 0.5 * state.carrier_x0;

    let var = |row: &[f64]| {
        let v = DMatrix::from_row_slice(1, 8, row);
        (&v * &cov * v.transpose())[(0, 0)]
    };
    let pair_state = |a: &[Complex64; 4], b: &[Complex64; 4]| -> Result<TwoModeGaussianState> {
        let [ax, ap] = full_row(a);
        let [bx, bp] = full_row(b);
        let m = DMatrix::from_row_slice(4, 8, &[ax, ap, bx, bp].concat());
        let c = &m * &cov * m.transpose();
        TwoModeGaussianState::new(Vector4::zeros(), Matrix4::from_iterator(c.iter().copied()))
    };

    let theta = -FRAC_PI_4;
    let q: Vec<Vec<f64>> = rows.iter().map(|u| quadrature_row(u, theta)).collect();
    let combine = |a: &[f64], b: &[f64], sign: f64| -> Vec<f64> {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x + sign * y) / SQRT_2)
            .collect()
    };
    let s1 = combine(&q[0], &q[1], 1.0);
    let s2 = combine(&q[2], &q[3], 1.0);
    let diff = combine(&s1, &s2, -1.0);

    let bench = 0.25;
    let rows_out = vec![
        ("out1_upper".to_string(), var(&q[0]), bench),
        ("out2_lower".to_string(), var(&q[3]), bench),
        ("out1_signal".to_string(), var(&s1), bench),
        ("out2_signal".to_string(), var(&s2), bench),
        ("difference".to_string(), var(&diff), bench),
    ];
    Ok(InterferometerReport {
        length,
        phases: (phases[0], phi0, phases[1]),
        carriers: (c1, c2),
        out1: pair_state(&rows[0], &rows[1])?,
        out2: pair_state(&rows[2], &rows[3])?,
        rows: rows_out,
    })
}
