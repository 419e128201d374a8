//! Wigner and Husimi functions on rectangular phase-space grids, and their
//! Radon projections.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;

use super::state::{FockVector, State};
use crate::error::{Error, Result};
use crate::numeric::ln_gamma_int;

/// Uniform axis helpers.
pub struct Axis;

impl Axis {
    /// `n` points evenly spread over `[-half_width, half_width]`.
    pub fn symmetric(half_width: f64, n: usize) -> Vec<f64> {
        Self::linspace(-half_width, half_width, n)
    }

    pub fn linspace(start: f64, stop: f64, n: usize) -> Vec<f64> {
        match n {
            0 => Vec::new(),
            1 => vec![start],
            _ => {
                let step = (stop - start) / (n - 1) as f64;
                (0..n).map(|i| start + i as f64 * step).collect()
            }
        }
    }
}

fn check_axis(name: &'static str, axis: &[f64]) -> Result<f64> {
    if axis.len() < 2 {
        return Err(Error::param(name, "needs at least two points"));
    }
    let step = axis[1] - axis[0];
    if !(step > 0.0) {
        return Err(Error::param(name, "must be ascending"));
    }
    let uniform = axis
        .iter()
        .enumerate()
        .all(|(i, v)| (v - (axis[0] + i as f64 * step)).abs() <= 1e-9 * step.max(v.abs()));
    if !uniform {
        return Err(Error::param(name, "must be uniform"));
    }
    Ok(step)
}

/// Phase-space density sampled on a uniform `x × p` grid.
///
/// `values[i * p.len() + j]` holds the density at `(x[i], p[j])`.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    x: Vec<f64>,
    p: Vec<f64>,
    values: Vec<f64>,
}

impl WignerGrid {
    pub fn new(x: Vec<f64>, p: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        check_axis("x_axis", &x)?;
        check_axis("p_axis", &p)?;
        if values.len() != x.len() * p.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for a {}x{} grid",
                values.len(),
                x.len(),
                p.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::param("values", "must be finite"));
        }
        Ok(Self { x, p, values })
    }

    fn from_fn(x: &[f64], p: &[f64], f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let mut values = Vec::with_capacity(x.len() * p.len());
        for &xi in x {
            for &pj in p {
                values.push(f(xi, pj));
            }
        }
        Self::new(x.to_vec(), p.to_vec(), values)
    }

    pub fn x_axis(&self) -> &[f64] {
        &self.x
    }

    pub fn p_axis(&self) -> &[f64] {
        &self.p
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dx(&self) -> f64 {
        self.x[1] - self.x[0]
    }

    pub fn dp(&self) -> f64 {
        self.p[1] - self.p[0]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.p.len() + j]
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Bilinear interpolation; zero outside the grid.
    pub fn value_at(&self, x: f64, p: f64) -> f64 {
        let u = (x - self.x[0]) / self.dx();
        let v = (p - self.p[0]) / self.dp();
        let (nx, np) = (self.x.len(), self.p.len());
        if !(u >= -1e-9 && v >= -1e-9 && u <= (nx - 1) as f64 + 1e-9 && v <= (np - 1) as f64 + 1e-9)
        {
            return 0.0;
        }
        let i = (u.floor().max(0.0) as usize).min(nx - 2);
        let j = (v.floor().max(0.0) as usize).min(np - 2);
        let fu = (u - i as f64).clamp(0.0, 1.0);
        let fv = (v - j as f64).clamp(0.0, 1.0);
        (1.0 - fu) * ((1.0 - fv) * self.get(i, j) + fv * self.get(i, j + 1))
            + fu * ((1.0 - fv) * self.get(i + 1, j) + fv * self.get(i + 1, j + 1))
    }

    /// Trapezoidal `∬ f(x,p) W dX dP`.
    pub fn integrate(&self, f: impl Fn(f64, f64) -> f64) -> f64 {
        let (nx, np) = (self.x.len(), self.p.len());
        let w = |k: usize, n: usize| if k == 0 || k + 1 == n { 0.5 } else { 1.0 };
        let mut total = 0.0;
        for i in 0..nx {
            for j in 0..np {
                total += w(i, nx) * w(j, np) * f(self.x[i], self.p[j]) * self.get(i, j);
            }
        }
        total * self.dx() * self.dp()
    }

    pub fn integral(&self) -> f64 {
        self.integrate(|_, _| 1.0)
    }

    /// Mean and covariance of the quadratures by moment integration.
    pub fn moments(&self) -> (Vector2<f64>, Matrix2<f64>) {
        let norm = self.integral();
        let mx = self.integrate(|x, _| x) / norm;
        let mp = self.integrate(|_, p| p) / norm;
        let vxx = self.integrate(|x, _| (x - mx).powi(2)) / norm;
        let vpp = self.integrate(|_, p| (p - mp).powi(2)) / norm;
        let vxp = self.integrate(|x, p| (x - mx) * (p - mp)) / norm;
        (Vector2::new(mx, mp), Matrix2::new(vxx, vxp, vxp, vpp))
    }

    /// Copy with all values multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            x: self.x.clone(),
            p: self.p.clone(),
            values: self.values.iter().map(|v| v * s).collect(),
        }
    }

    /// Convolve with the vacuum Wigner function (covariance `I/4`), which
    /// maps a Wigner function to the Husimi Q function.
    pub fn vacuum_convolved(&self) -> Self {
        let kernel = |d: f64| (2.0 / PI).sqrt() * (-2.0 * d * d).exp();
        let smooth = |len: usize, step: f64, get: &dyn Fn(usize) -> f64| -> Vec<f64> {
            let reach = (4.0 / step).ceil() as i64;
            let k: Vec<f64> = (-reach..=reach)
                .map(|o| kernel(o as f64 * step) * step)
                .collect();
            (0..len as i64)
                .map(|i| {
                    (-reach..=reach)
                        .filter_map(|o| {
                            let j = i + o;
                            (j >= 0 && j < len as i64)
                                .then(|| k[(o + reach) as usize] * get(j as usize))
                        })
                        .sum()
                })
                .collect()
        };
        let (nx, np) = (self.x.len(), self.p.len());
        let mut tmp = vec![0.0; nx * np];
        for i in 0..nx {
            let row = smooth(np, self.dp(), &|j| self.get(i, j));
            tmp[i * np..(i + 1) * np].copy_from_slice(&row);
        }
        let mut out = vec![0.0; nx * np];
        for j in 0..np {
            let col = smooth(nx, self.dx(), &|i| tmp[i * np + j]);
            for i in 0..nx {
                out[i * np + j] = col[i];
            }
        }
        Self {
            x: self.x.clone(),
            p: self.p.clone(),
            values: out,
        }
    }
}

fn gaussian_density(mean: Vector2<f64>, cov: Matrix2<f64>) -> impl Fn(f64, f64) -> f64 {
    let det = cov.determinant();
    let inv = cov.try_inverse().unwrap_or_else(Matrix2::zeros);
    let norm = 1.0 / (2.0 * PI * det.sqrt());
    move |x, p| {
        let d = Vector2::new(x - mean[0], p - mean[1]);
        norm * (-0.5 * (d.transpose() * inv * d)[(0, 0)]).exp()
    }
}

/// Wigner function of a Fock vector at one phase-space point.
///
/// Uses `W_{|m⟩⟨n|}(α) = (2/π)(-1)^n e^{-i(m-n)θ} l_n^{(m-n)}(4|α|²)` for
/// `m ≥ n`, with `l` the normalized Laguerre functions.
pub fn fock_wigner_point(state: &FockVector, x: f64, p: f64) -> f64 {
    FockKernel::new(state).at(x, p)
}

/// Point-independent parts of the Fock-basis Wigner sum, so that a grid
/// evaluation only runs the Laguerre recurrences.
struct FockKernel {
    /// `(-1)^n c_{n+d} c_n*` for each diagonal `d`.
    pairs: Vec<Vec<Complex64>>,
    /// Recurrence factors `1/√(n(n+d))` and `√((n-1)(n+d-1)/(n(n+d)))`.
    inv: Vec<Vec<f64>>,
    back: Vec<Vec<f64>>,
}

impl FockKernel {
    fn new(state: &FockVector) -> Self {
        let c = state.amps();
        // Amplitudes below 1e-16 change no product c_m c_n* at double
        // precision, and the work grows with the square of the highest index.
        let last = c.iter().rposition(|v| v.norm_sqr() > 1e-32).unwrap_or(0);
        let mut pairs = Vec::with_capacity(last + 1);
        let mut inv = Vec::with_capacity(last + 1);
        let mut back = Vec::with_capacity(last + 1);
        for d in 0..=last {
            let df = d as f64;
            pairs.push(
                (0..=last - d)
                    .map(|n| {
                        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                        c[n + d] * c[n].conj() * sign
                    })
                    .collect(),
            );
            inv.push(
                (0..=last - d)
                    .map(|n| {
                        if n == 0 {
                            0.0
                        } else {
                            1.0 / (n as f64 * (n as f64 + df)).sqrt()
                        }
                    })
                    .collect(),
            );
            back.push(
                (0..=last - d)
                    .map(|n| {
                        let nf = n as f64;
                        if n < 2 {
                            0.0
                        } else {
                            ((nf - 1.0) * (nf + df - 1.0) / (nf * (nf + df))).sqrt()
                        }
                    })
                    .collect(),
            );
        }
        Self { pairs, inv, back }
    }

    /// Same sum as [`normalized_laguerre`] would give, with `l_0` for
    /// successive diagonals built as `l_0(d) = l_0(d-1) √(r/d)`.
    fn at(&self, x: f64, p: f64) -> f64 {
        let alpha = Complex64::new(x, p);
        let r = 4.0 * alpha.norm_sqr();
        let step = Complex64::from_polar(1.0, -alpha.arg());
        let mut rot = Complex64::new(1.0, 0.0);
        let mut head = (-0.5 * r).exp();
        let mut total = 0.0;
        for (d, pairs) in self.pairs.iter().enumerate() {
            if d > 0 {
                head *= (r / d as f64).sqrt();
                rot *= step;
            }
            if head == 0.0 && r > 0.0 {
                // Fall back to logarithms while the Gaussian factor underflows.
                head = (0.5 * d as f64 * r.ln() - 0.5 * r - 0.5 * ln_gamma_int(d)).exp();
            }
            let (inv, back) = (&self.inv[d], &self.back[d]);
            let df = d as f64;
            let (mut prev, mut cur) = (0.0, head);
            let mut acc = pairs[0] * cur;
            for n in 1..pairs.len() {
                let nf = n as f64;
                let next = (2.0 * nf - 1.0 + df - r) * inv[n] * cur - back[n] * prev;
                prev = cur;
                cur = next;
                acc += pairs[n] * cur;
            }
            let term = (rot * acc).re;
            total += if d == 0 { term } else { 2.0 * term };
        }
        2.0 / PI * total
    }
}

/// Wigner function at one point.
pub fn wigner_point(state: &State, x: f64, p: f64) -> f64 {
    match state {
        State::Gaussian(g) => gaussian_density(g.mean(), g.cov())(x, p),
        State::Fock(f) => fock_wigner_point(f, x, p),
    }
}

fn check_normalized(grid: WignerGrid) -> Result<WignerGrid> {
    let integral = grid.integral();
    if (integral - 1.0).abs() > 1e-3 {
        return Err(Error::AxesTooNarrow { integral });
    }
    Ok(grid)
}

/// Wigner function on the grid `x_axis × p_axis`.
///
/// Fails when the grid does not hold the state, detected by a normalization
/// error above `1e-3`.
pub fn wigner(state: &State, x_axis: &[f64], p_axis: &[f64]) -> Result<WignerGrid> {
    let grid = match state {
        State::Gaussian(g) => {
            WignerGrid::from_fn(x_axis, p_axis, gaussian_density(g.mean(), g.cov()))?
        }
        State::Fock(f) => {
            let kernel = FockKernel::new(f);
            WignerGrid::from_fn(x_axis, p_axis, |x, p| kernel.at(x, p))?
        }
    };
    check_normalized(grid)
}

/// Husimi `Q(α) = |⟨α|ψ⟩|²/π` of a Fock vector.
pub fn fock_husimi_point(state: &FockVector, x: f64, p: f64) -> f64 {
    let a = Complex64::new(x, -p);
    let mut term = Complex64::new((-0.5 * (x * x + p * p)).exp(), 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for (n, c) in state.amps().iter().enumerate() {
        if n > 0 {
            term *= a / (n as f64).sqrt();
        }
        acc += c * term;
    }
    acc.norm_sqr() / PI
}

/// Husimi Q function on the grid: a Gaussian of covariance `cov + I/4` for
/// Gaussian states, the coherent-state overlap for Fock vectors.
pub fn to_husimi(state: &State, x_axis: &[f64], p_axis: &[f64]) -> Result<WignerGrid> {
    let grid = match state {
        State::Gaussian(g) => WignerGrid::from_fn(
            x_axis,
            p_axis,
            gaussian_density(g.mean(), g.cov() + Matrix2::identity() * 0.25),
        )?,
        State::Fock(f) => WignerGrid::from_fn(x_axis, p_axis, |x, p| fock_husimi_point(f, x, p))?,
    };
    check_normalized(grid)
}

/// Distribution of the rotated quadrature `X(θ) = X cos θ + P sin θ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Marginal {
    pub theta: f64,
    pub x: Vec<f64>,
    pub density: Vec<f64>,
}

impl Marginal {
    pub fn step(&self) -> f64 {
        self.x[1] - self.x[0]
    }

    pub fn integral(&self) -> f64 {
        crate::numeric::trapz(&self.density, self.step())
    }

    pub fn moments(&self) -> (f64, f64) {
        let h = self.step();
        let norm = self.integral();
        let w: Vec<f64> = self
            .x
            .iter()
            .zip(&self.density)
            .map(|(x, d)| x * d)
            .collect();
        let mean = crate::numeric::trapz(&w, h) / norm;
        let w2: Vec<f64> = self
            .x
            .iter()
            .zip(&self.density)
            .map(|(x, d)| (x - mean).powi(2) * d)
            .collect();
        (mean, crate::numeric::trapz(&w2, h) / norm)
    }
}

/// Radon projection of the grid along direction `theta`.
///
/// The line through `s (cos θ, sin θ)` perpendicular to that direction is
/// integrated with the trapezoidal rule, sampling the grid by bilinear
/// interpolation at the grid's finer spacing.
/// Cubic B-spline interpolant of a grid, with the density taken as zero
/// beyond the edges.
///
/// Fourth-order accurate, so it follows interference fringes closely enough
/// that line integrals through them keep their sign.
struct Spline<'a> {
    grid: &'a WignerGrid,
    coef: Vec<f64>,
}

impl<'a> Spline<'a> {
    fn new(grid: &'a WignerGrid) -> Self {
        let (nx, np) = (grid.x.len(), grid.p.len());
        let mut coef = grid.values.clone();
        let mut line = Vec::new();
        for i in 0..nx {
            line.clear();
            line.extend_from_slice(&coef[i * np..(i + 1) * np]);
            spline_prefilter(&mut line);
            coef[i * np..(i + 1) * np].copy_from_slice(&line);
        }
        for j in 0..np {
            line.clear();
            line.extend((0..nx).map(|i| coef[i * np + j]));
            spline_prefilter(&mut line);
            for (i, v) in line.iter().enumerate() {
                coef[i * np + j] = *v;
            }
        }
        Self { grid, coef }
    }

    fn value_at(&self, x: f64, p: f64) -> f64 {
        let g = self.grid;
        let (nx, np) = (g.x.len() as isize, g.p.len() as isize);
        let u = (x - g.x[0]) / g.dx();
        let v = (p - g.p[0]) / g.dp();
        if !(u > -1.0 && v > -1.0 && u < nx as f64 && v < np as f64) {
            return 0.0;
        }
        let (i, j) = (u.floor() as isize, v.floor() as isize);
        let wu = bspline_weights(u - i as f64);
        let wv = bspline_weights(v - j as f64);
        let mut total = 0.0;
        for (a, wa) in wu.iter().enumerate() {
            let ia = i + a as isize - 1;
            if ia < 0 || ia >= nx {
                continue;
            }
            for (b, wb) in wv.iter().enumerate() {
                let jb = j + b as isize - 1;
                if jb >= 0 && jb < np {
                    total += wa * wb * self.coef[(ia * np + jb) as usize];
                }
            }
        }
        total
    }
}

/// Solve `(c[k-1] + 4 c[k] + c[k+1]) / 6 = f[k]` in place, with `c = 0`
/// outside the line.
fn spline_prefilter(f: &mut [f64]) {
    let n = f.len();
    let mut diag = vec![4.0 / 6.0; n];
    let off = 1.0 / 6.0;
    for k in 1..n {
        let m = off / diag[k - 1];
        diag[k] -= m * off;
        f[k] -= m * f[k - 1];
    }
    f[n - 1] /= diag[n - 1];
    for k in (0..n - 1).rev() {
        f[k] = (f[k] - off * f[k + 1]) / diag[k];
    }
}

/// Cubic B-spline weights of the nodes at offsets -1, 0, 1, 2 from the cell
/// start, for fractional position `t` in the cell.
fn bspline_weights(t: f64) -> [f64; 4] {
    let s = 1.0 - t;
    [
        s * s * s / 6.0,
        (3.0 * t * t * t - 6.0 * t * t + 4.0) / 6.0,
        (-3.0 * t * t * t + 3.0 * t * t + 3.0 * t + 1.0) / 6.0,
        t * t * t / 6.0,
    ]
}

pub fn marginal(grid: &WignerGrid, theta: f64) -> Result<Marginal> {
    let integral = grid.integral();
    if (integral - 1.0).abs() > 1e-3 {
        return Err(Error::Unnormalized { integral });
    }
    let h = grid.dx().min(grid.dp());
    let xs = grid.x_axis();
    let ps = grid.p_axis();
    let xm = xs[0].abs().max(xs[xs.len() - 1].abs());
    let pm = ps[0].abs().max(ps[ps.len() - 1].abs());
    let s_max = ((xm.max(pm)) / h + 1e-9).floor() as i64;
    let t_max = ((xm * xm + pm * pm).sqrt() / h).ceil() as i64;
    let (sn, cs) = theta.sin_cos();
    let spline = Spline::new(grid);
    let mut x = Vec::with_capacity((2 * s_max + 1) as usize);
    let mut density = Vec::with_capacity(x.capacity());
    for k in -s_max..=s_max {
        let s = k as f64 * h;
        let mut acc = 0.0;
        for j in -t_max..=t_max {
            let t = j as f64 * h;
            let w = if j.abs() == t_max { 0.5 } else { 1.0 };
            acc += w * spline.value_at(s * cs - t * sn, s * sn + t * cs);
        }
        x.push(s);
        density.push(acc * h);
    }
    Ok(Marginal { theta, x, density })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase_space::fock::coherent_amplitudes;
    use crate::phase_space::state::{make_state, GaussianState, StateSpec};

    fn axis() -> Vec<f64> {
        Axis::symmetric(5.0, 201)
    }

    /// Oracle: the Fock-basis sum evaluated with freshly computed Laguerre
    /// functions at every point.
    fn laguerre_oracle(f: &FockVector, x: f64, p: f64) -> f64 {
        let c = f.amps();
        let last = c.len() - 1;
        let alpha = Complex64::new(x, p);
        let (r, theta) = (4.0 * alpha.norm_sqr(), alpha.arg());
        let mut total = 0.0;
        for d in 0..=last {
            let ls = crate::numeric::normalized_laguerre(d, r, last - d + 1);
            let acc: Complex64 = (0..=last - d)
                .map(|n| c[n + d] * c[n].conj() * if n % 2 == 0 { ls[n] } else { -ls[n] })
                .sum();
            let term = (Complex64::from_polar(1.0, -(d as f64) * theta) * acc).re;
            total += if d == 0 { term } else { 2.0 * term };
        }
        2.0 / PI * total
    }

    #[test]
    fn fock_kernel_matches_laguerre_sum() {
        let specs = [
            StateSpec::Fock(3),
            StateSpec::Cat {
                alpha: Complex64::new(2.0, 0.5),
                even: false,
            },
        ];
        for spec in specs {
            let State::Fock(f) = make_state(&spec).unwrap() else {
                panic!("expected a Fock vector")
            };
            for &(x, p) in &[
                (0.0, 0.0),
                (0.3, -1.2),
                (2.1, 0.4),
                (-4.0, 3.0),
                (25.0, -20.0),
            ] {
                let (got, want) = (fock_wigner_point(&f, x, p), laguerre_oracle(&f, x, p));
                assert!(
                    (got - want).abs() < 1e-12,
                    "{spec:?} at ({x}, {p}): {got} vs {want}"
                );
            }
        }
    }

    /// Oracle: W(α) = (2/π) Σ_k (-1)^k |(D(-α)ψ)_k|², the displaced parity.
    fn parity_oracle(f: &FockVector, x: f64, p: f64) -> f64 {
        let d =
            crate::phase_space::fock::displace_amplitudes(f.amps(), Complex64::new(-x, -p), 120);
        2.0 / PI
            * d.iter()
                .enumerate()
                .map(|(k, c)| {
                    if k % 2 == 0 {
                        c.norm_sqr()
                    } else {
                        -c.norm_sqr()
                    }
                })
                .sum::<f64>()
    }

    #[test]
    fn closed_forms_at_origin() {
        let vac = make_state(&StateSpec::Vacuum).unwrap();
        assert!((wigner_point(&vac, 0.0, 0.0) - 2.0 / PI).abs() < 1e-15);
        let f1 = make_state(&StateSpec::Fock(1)).unwrap();
        assert!((wigner_point(&f1, 0.0, 0.0) + 2.0 / PI).abs() < 1e-15);
        let th = make_state(&StateSpec::Thermal(1.0)).unwrap();
        assert!((wigner_point(&th, 0.0, 0.0) - 1.0 / (1.5 * PI)).abs() < 1e-15);
    }

    #[test]
    fn fock_series_matches_displaced_parity() {
        let cat = make_state(&StateSpec::Cat {
            alpha: Complex64::new(2.0, 0.0),
            even: true,
        })
        .unwrap();
        let f = cat.as_fock().unwrap();
        for &(x, p) in &[(0.0, 0.0), (2.0, 0.0), (0.3, 0.4), (-1.1, 0.9), (0.0, 0.39)] {
            let a = fock_wigner_point(f, x, p);
            let b = parity_oracle(f, x, p);
            assert!((a - b).abs() < 1e-10, "({x},{p}): {a} vs {b}");
        }
        let mixed = FockVector::normalized(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.3, 0.5),
            Complex64::new(0.0, -0.2),
        ])
        .unwrap();
        for &(x, p) in &[(0.2, -0.7), (1.0, 1.0)] {
            assert!((fock_wigner_point(&mixed, x, p) - parity_oracle(&mixed, x, p)).abs() < 1e-12);
        }
    }

    #[test]
    fn fock_one_closed_form() {
        // W_1 = (2/π)(4|α|² - 1) e^{-2|α|²}
        let f = FockVector::number(1);
        for &(x, p) in &[(0.5, 0.0), (0.3, -0.8), (1.5, 1.0)] {
            let r2 = x * x + p * p;
            let want = 2.0 / PI * (4.0 * r2 - 1.0) * (-2.0 * r2).exp();
            assert!((fock_wigner_point(&f, x, p) - want).abs() < 1e-14);
        }
    }

    #[test]
    fn coherent_fock_and_gaussian_agree() {
        let alpha = Complex64::new(1.0, 1.0);
        let fv = FockVector::normalized(coherent_amplitudes(alpha, 60)).unwrap();
        let g = GaussianState::coherent(alpha);
        for &(x, p) in &[(1.0, 1.0), (0.5, 1.3), (0.0, 0.0)] {
            let a = fock_wigner_point(&fv, x, p);
            let b = gaussian_density(g.mean(), g.cov())(x, p);
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn grids_are_normalized() {
        for spec in [
            StateSpec::Vacuum,
            StateSpec::Fock(1),
            StateSpec::Thermal(1.0),
            StateSpec::Cat {
                alpha: Complex64::new(2.0, 0.0),
                even: true,
            },
        ] {
            let st = make_state(&spec).unwrap();
            let g = wigner(&st, &axis(), &axis()).unwrap();
            assert!((g.integral() - 1.0).abs() < 1e-6, "{spec}");
        }
        let narrow = Axis::symmetric(0.5, 21);
        let st = make_state(&StateSpec::Vacuum).unwrap();
        assert!(matches!(
            wigner(&st, &narrow, &narrow),
            Err(Error::AxesTooNarrow { .. })
        ));
    }

    #[test]
    fn vacuum_marginals_are_rotation_invariant() {
        let g = wigner(&make_state(&StateSpec::Vacuum).unwrap(), &axis(), &axis()).unwrap();
        for theta in [0.0, 0.3, 1.0, 2.5] {
            let m = marginal(&g, theta).unwrap();
            let (mean, var) = m.moments();
            assert!(mean.abs() < 1e-6);
            assert!((var - 0.25).abs() < 1e-3, "θ={theta}: {var}");
            assert!((m.integral() - 1.0).abs() < 2e-3);
        }
    }

    #[test]
    fn cat_marginals() {
        let st = make_state(&StateSpec::Cat {
            alpha: Complex64::new(2.0, 0.0),
            even: true,
        })
        .unwrap();
        let g = wigner(&st, &axis(), &axis()).unwrap();
        let mx = marginal(&g, 0.0).unwrap();
        let mp = marginal(&g, PI / 2.0).unwrap();
        // Oracle: |ψ(p)|² ∝ e^{-2p²} cos²(2αp) for the even cat, normalized
        // by its trapezoidal sum.
        let raw: Vec<f64> =
            mp.x.iter()
                .map(|p| (-2.0 * p * p).exp() * (4.0 * p).cos().powi(2))
                .collect();
        let norm = crate::numeric::trapz(&raw, mp.step());
        for (d, r) in mp.density.iter().zip(&raw) {
            assert!((d - r / norm).abs() < 1e-6);
        }
        let maxima = (1..mp.density.len() - 1)
            .filter(|&i| {
                mp.density[i] > mp.density[i - 1]
                    && mp.density[i] > mp.density[i + 1]
                    && mp.density[i] > 1e-3
            })
            .count();
        assert!(maxima >= 3);
        let peak =
            mx.x[mx
                .density
                .iter()
                .enumerate()
                .fold(0, |b, (i, v)| if *v > mx.density[b] { i } else { b })];
        assert!((peak.abs() - 2.0).abs() < 0.06);
        assert!(mx.density[mx.x.len() / 2] < 1e-3);
    }

    #[test]
    fn husimi_values() {
        let vac = make_state(&StateSpec::Vacuum).unwrap();
        let q = to_husimi(&vac, &axis(), &axis()).unwrap();
        assert!((q.get(100, 100) - 1.0 / PI).abs() < 1e-12);
        let f1 = make_state(&StateSpec::Fock(1)).unwrap();
        let q1 = to_husimi(&f1, &axis(), &axis()).unwrap();
        assert!(q1.get(100, 100).abs() < 1e-15);
        assert!(q1.min() >= 0.0);
        let coh = make_state(&StateSpec::Coherent(Complex64::new(1.0, -0.5))).unwrap();
        let qc = to_husimi(&coh, &axis(), &axis()).unwrap();
        let (imax, _) =
            qc.values().iter().enumerate().fold(
                (0, f64::MIN),
                |b, (i, v)| if *v > b.1 { (i, *v) } else { b },
            );
        let (i, j) = (imax / 201, imax % 201);
        assert!((qc.x_axis()[i] - 1.0).abs() < 1e-9 && (qc.p_axis()[j] + 0.5).abs() < 1e-9);
    }

    #[test]
    fn husimi_is_vacuum_convolved_wigner() {
        for spec in [
            StateSpec::Fock(1),
            StateSpec::Cat {
                alpha: Complex64::new(2.0, 0.0),
                even: true,
            },
            StateSpec::SqueezedVacuum(0.5),
        ] {
            let st = make_state(&spec).unwrap();
            let ax = Axis::symmetric(6.0, 241);
            let w = wigner(&st, &ax, &ax).unwrap();
            let q = to_husimi(&st, &ax, &ax).unwrap();
            let conv = w.vacuum_convolved();
            let diff = q
                .values()
                .iter()
                .zip(conv.values())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(diff < 2e-3, "{spec}: {diff}");
        }
    }
}
