//! Small numerical kernels shared across modules.

use num_complex::Complex64;

/// Trapezoidal rule on a uniform grid.
pub fn trapz(y: &[f64], dx: f64) -> f64 {
    match y.len() {
        0 | 1 => 0.0,
        n => dx * (y.iter().sum::<f64>() - 0.5 * (y[0] + y[n - 1])),
    }
}

/// Trapezoidal rule on an arbitrary ascending grid.
pub fn trapz_xy(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1]))
        .sum()
}

/// `ln n!` for small and moderate `n`.
pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Natural log of the Gamma function for positive integer-plus-one arguments,
/// `ln Γ(d + 1) = ln d!`.
pub(crate) fn ln_gamma_int(d: usize) -> f64 {
    ln_factorial(d)
}

/// Normalized associated Laguerre functions
/// `l_n(x) = sqrt(n!/(n+d)!) x^{d/2} e^{-x/2} L_n^{(d)}(x)` for `n = 0..count`.
///
/// These stay O(1) for large `n` and `x`, so they are used for Fock-basis
/// Wigner functions and displacement matrix elements instead of the raw
/// polynomials.
pub fn normalized_laguerre(d: usize, x: f64, count: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    let df = d as f64;
    let l0 = if x == 0.0 {
        if d == 0 {
            1.0
        } else {
            0.0
        }
    } else {
        (0.5 * df * x.ln() - 0.5 * x - 0.5 * ln_gamma_int(d)).exp()
    };
    out.push(l0);
    if count == 1 {
        return out;
    }
    let l1 = l0 * (1.0 + df - x) / (1.0 + df).sqrt();
    out.push(l1);
    for n in 2..count {
        let nf = n as f64;
        let a = (2.0 * nf - 1.0 + df - x) / (nf * (nf + df)).sqrt();
        let b = ((nf - 1.0) * (nf + df - 1.0) / (nf * (nf + df))).sqrt();
        let next = a * out[n - 1] - b * out[n - 2];
        out.push(next);
    }
    out
}

/// Sample-to-sample nearest-branch phase unwrapping.
pub fn unwrap(phases: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(phases.len());
    let mut offset = 0.0;
    let two_pi = std::f64::consts::TAU;
    for (i, &p) in phases.iter().enumerate() {
        if i > 0 {
            let d = p - phases[i - 1];
            offset -= two_pi * (d / two_pi).round();
        }
        out.push(p + offset);
    }
    out
}

/// Squared norm of a complex vector.
pub fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum()
}

/// Linear interpolation on a uniform grid starting at `x0` with spacing `dx`.
/// Returns 0 outside the grid.
pub fn interp_uniform(y: &[f64], x0: f64, dx: f64, x: f64) -> f64 {
    let u = (x - x0) / dx;
    if !(u >= 0.0) || u > (y.len() - 1) as f64 {
        return 0.0;
    }
    let i = (u.floor() as usize).min(y.len().saturating_sub(2));
    let f = u - i as f64;
    if y.len() == 1 {
        return y[0];
    }
    y[i] * (1.0 - f) + y[i + 1] * f
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Raw associated Laguerre polynomial by the three-term recurrence.
    fn laguerre(n: usize, d: usize, x: f64) -> f64 {
        let a = d as f64;
        let (mut l0, mut l1) = (1.0, 1.0 + a - x);
        if n == 0 {
            return l0;
        }
        for k in 1..n {
            let k = k as f64;
            let l2 = ((2.0 * k + 1.0 + a - x) * l1 - (k + a) * l0) / (k + 1.0);
            l0 = l1;
            l1 = l2;
        }
        l1
    }

    #[test]
    fn normalized_laguerre_matches_raw_polynomials() {
        for d in 0..5 {
            for &x in &[0.0, 0.3, 1.7, 6.0] {
                let ls = normalized_laguerre(d, x, 8);
                for (n, l) in ls.iter().enumerate() {
                    let scale = (ln_factorial(n) - ln_factorial(n + d)).exp().sqrt()
                        * x.powf(d as f64 / 2.0)
                        * (-x / 2.0).exp();
                    let want = scale * laguerre(n, d, x);
                    assert!((l - want).abs() < 1e-12, "d={d} x={x} n={n}: {l} vs {want}");
                }
            }
        }
    }

    #[test]
    fn normalized_laguerre_bounded_at_high_order() {
        let ls = normalized_laguerre(3, 150.0, 200);
        assert!(ls.iter().all(|v| v.is_finite() && v.abs() <= 1.0));
    }

    #[test]
    fn trapezoid_rules_agree() {
        let x: Vec<f64> = (0..101).map(|i| i as f64 * 0.01).collect();
        let y: Vec<f64> = x.iter().map(|v| v * v).collect();
        assert!((trapz(&y, 0.01) - trapz_xy(&x, &y)).abs() < 1e-14);
        assert!((trapz(&y, 0.01) - 1.0 / 3.0).abs() < 1e-4);
    }

    #[test]
    fn unwrap_removes_branch_jumps() {
        let truth: Vec<f64> = (0..50).map(|i| 0.4 * i as f64).collect();
        let wrapped: Vec<f64> = truth
            .iter()
            .map(|p| {
                (p + std::f64::consts::PI).rem_euclid(std::f64::consts::TAU) - std::f64::consts::PI
            })
            .collect();
        let un = unwrap(&wrapped);
        for (a, b) in un.iter().zip(&truth) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn interpolation_is_zero_outside() {
        let y = [0.0, 1.0, 4.0];
        assert_eq!(interp_uniform(&y, 0.0, 1.0, -0.1), 0.0);
        assert_eq!(interp_uniform(&y, 0.0, 1.0, 2.1), 0.0);
        assert!((interp_uniform(&y, 0.0, 1.0, 1.5) - 2.5).abs() < 1e-15);
        assert!((interp_uniform(&y, 0.0, 1.0, 2.0) - 4.0).abs() < 1e-15);
    }
}
