use nalgebra::Matrix2;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::phase_space::{
    fock_husimi_point, marginal, photon_distribution, wigner, Axis, FockVector, State,
};
use crate::rng::{chunks, stream};

/// Homodyne outcomes at one local-oscillator phase.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSamples {
    pub theta: f64,
    pub values: Vec<f64>,
}

impl QuadratureSamples {
    pub fn new(theta: f64, values: Vec<f64>) -> Result<Self> {
        if !theta.is_finite() || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::param("samples", "angle and values must be finite"));
        }
        Ok(Self { theta, values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (self.values.len() - 1) as f64
    }
}

fn check_shots(shots: usize) -> Result<()> {
    if shots == 0 {
        Err(Error::param("shots", "must be at least 1"))
    } else {
        Ok(())
    }
}

/// Draw `shots` values, chunk `c` coming from stream `(seed, base + c)`.
fn chunked<T: Send>(
    shots: usize,
    seed: u64,
    base: u64,
    draw: impl Fn(&mut rand_chacha::ChaCha8Rng) -> T + Sync,
) -> Vec<T> {
    let pieces: Vec<(u64, std::ops::Range<usize>)> = chunks(shots).collect();
    pieces
        .into_par_iter()
        .map(|(c, range)| {
            let mut rng = stream(seed, base + c);
            range.map(|_| draw(&mut rng)).collect::<Vec<T>>()
        })
        .flatten()
        .collect()
}

fn inverse_cdf(cdf: &[f64], u: f64) -> usize {
    cdf.partition_point(|&c| c <= u).min(cdf.len() - 1)
}

fn cumulative(weights: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut acc = 0.0;
    let mut cdf: Vec<f64> = weights
        .map(|w| {
            acc += w.max(0.0);
            acc
        })
        .collect();
    let total = acc;
    for c in cdf.iter_mut() {
        *c /= total;
    }
    cdf
}

/// Photon counts drawn from the state's photon-number distribution.
pub fn sample_direct(state: &State, shots: usize, seed: u64) -> Result<Vec<u64>> {
    check_shots(shots)?;
    let pd = photon_distribution(state)?;
    let cdf = cumulative(pd.probs().iter().copied());
    Ok(chunked(shots, seed, 0, |rng| {
        inverse_cdf(&cdf, rng.random::<f64>()) as u64
    }))
}

/// Sampling grid for a Fock vector: the spread beyond vacuum, which for a
/// cat is the distance of its components from the mean, plus six standard
/// deviations of a single vacuum-like component. `extra_var` widens that
/// component, as for the Q function.
///
/// Interference fringes narrow as the components move apart, so the step
/// shrinks with that distance. Between 201 and 1201 points per axis.
fn fock_axis(f: &FockVector, extra_var: f64) -> Vec<f64> {
    let (mean, cov) = f.quadrature_moments();
    let offset = (cov[(0, 0)].max(cov[(1, 1)]) - 0.25).max(0.0).sqrt();
    let half = mean.abs().max() + offset + 6.0 * (0.25 + extra_var).sqrt();
    let step = 0.04 / offset.max(1.0);
    let n = ((2.0 * half / step).ceil() as usize + 1).clamp(201, 1201);
    Axis::symmetric(half, n)
}

/// Ideal strong-local-oscillator homodyne samples of `X(θ)`.
///
/// Gaussian states are sampled exactly. Fock vectors are sampled from the
/// Radon projection of their Wigner grid by inverse CDF, uniformly within
/// each projection bin.
pub fn sample_homodyne(
    state: &State,
    theta: f64,
    shots: usize,
    seed: u64,
) -> Result<QuadratureSamples> {
    let sampler = HomodyneSampler::new(state)?;
    sampler.sample(theta, shots, seed, 0)
}

/// Homodyne scan over several angles; angle `a` uses the streams
/// `(seed, a·2³² + chunk)`.
pub fn sample_homodyne_scan(
    state: &State,
    angles: &[f64],
    shots: usize,
    seed: u64,
) -> Result<Vec<QuadratureSamples>> {
    let sampler = HomodyneSampler::new(state)?;
    angles
        .iter()
        .enumerate()
        .map(|(a, &theta)| sampler.sample(theta, shots, seed, (a as u64) << 32))
        .collect()
}

enum HomodyneSampler {
    Gaussian { mean: [f64; 2], cov: Matrix2<f64> },
    Grid(crate::phase_space::WignerGrid),
}

impl HomodyneSampler {
    fn new(state: &State) -> Result<Self> {
        Ok(match state {
            State::Gaussian(g) => Self::Gaussian {
                mean: [g.mean()[0], g.mean()[1]],
                cov: g.cov(),
            },
            State::Fock(f) => {
                let ax = fock_axis(f, 0.0);
                Self::Grid(wigner(state, &ax, &ax)?)
            }
        })
    }

    fn sample(&self, theta: f64, shots: usize, seed: u64, base: u64) -> Result<QuadratureSamples> {
        check_shots(shots)?;
        let values = match self {
            Self::Gaussian { mean, cov } => {
                let (s, c) = theta.sin_cos();
                let mu = mean[0] * c + mean[1] * s;
                let var = c * c * cov[(0, 0)] + 2.0 * s * c * cov[(0, 1)] + s * s * cov[(1, 1)];
                let sd = var.sqrt();
                chunked(shots, seed, base, |rng| {
                    let z: f64 = StandardNormal.sample(rng);
                    mu + sd * z
                })
            }
            Self::Grid(grid) => {
                let m = marginal(grid, theta)?;
                if let Some((i, v)) = m.density.iter().enumerate().find(|(_, v)| **v < -1e-6) {
                    return Err(Error::NegativeMarginal {
                        x: m.x[i],
                        value: *v,
                    });
                }
                let h = m.step();
                let cdf = cumulative(m.density.iter().copied());
                chunked(shots, seed, base, |rng| {
                    let k = inverse_cdf(&cdf, rng.random::<f64>());
                    m.x[k] + h * (rng.random::<f64>() - 0.5)
                })
            }
        };
        QuadratureSamples::new(theta, values)
    }
}

/// Heterodyne `(X, P)` pairs drawn from the Husimi Q density.
///
/// Samples are not rescaled: their covariance is the state covariance plus
/// `I/4`. Fock vectors are sampled cell by cell from a Q grid with uniform
/// jitter inside each cell.
pub fn sample_heterodyne(state: &State, shots: usize, seed: u64) -> Result<Vec<[f64; 2]>> {
    check_shots(shots)?;
    match state {
        State::Gaussian(g) => {
            let cov = g.cov() + Matrix2::identity() * 0.25;
            let l = cov
                .cholesky()
                .ok_or_else(|| Error::InvalidState("covariance not positive definite".into()))?
                .l();
            let mean = g.mean();
            Ok(chunked(shots, seed, 0, |rng| {
                let z0: f64 = StandardNormal.sample(rng);
                let z1: f64 = StandardNormal.sample(rng);
                [
                    mean[0] + l[(0, 0)] * z0,
                    mean[1] + l[(1, 0)] * z0 + l[(1, 1)] * z1,
                ]
            }))
        }
        State::Fock(f) => {
            let ax = fock_axis(f, 0.25);
            let h = ax[1] - ax[0];
            let n = ax.len();
            let mut q = Vec::with_capacity(n * n);
            for &x in &ax {
                for &p in &ax {
                    q.push(fock_husimi_point(f, x, p));
                }
            }
            let cdf = cumulative(q.into_iter());
            Ok(chunked(shots, seed, 0, |rng| {
                let k = inverse_cdf(&cdf, rng.random::<f64>());
                let (i, j) = (k / n, k % n);
                [
                    ax[i] + h * (rng.random::<f64>() - 0.5),
                    ax[j] + h * (rng.random::<f64>() - 0.5),
                ]
            }))
        }
    }
}

/// Sample covariance of heterodyne pairs.
pub fn pair_covariance(samples: &[[f64; 2]]) -> ([f64; 2], Matrix2<f64>) {
    let n = samples.len() as f64;
    let mx = samples.iter().map(|s| s[0]).sum::<f64>() / n;
    let mp = samples.iter().map(|s| s[1]).sum::<f64>() / n;
    let mut c = Matrix2::zeros();
    for s in samples {
        let d = [s[0] - mx, s[1] - mp];
        c[(0, 0)] += d[0] * d[0];
        c[(0, 1)] += d[0] * d[1];
        c[(1, 1)] += d[1] * d[1];
    }
    c[(1, 0)] = c[(0, 1)];
    ([mx, mp], c / (n - 1.0))
}
