use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, Matrix2, Vector2};
use rayon::prelude::*;

use crate::detection::sampling::QuadratureSamples;
use crate::error::{Error, Result};
use crate::numeric::interp_uniform;
use crate::phase_space::{Axis, State, WignerGrid};

/// Minimum number of distinct local-oscillator phases.
pub const MIN_ANGLES: usize = 8;
/// Default noise threshold of the adaptive band limit, in units of the
/// sampling noise `1/√N` of the empirical characteristic function.
pub const DEFAULT_SNR: f64 = 3.0;
/// Default number of back-projection angles per measured angle.
pub const DEFAULT_OVERSAMPLING: usize = 8;
/// Minimum number of samples at each phase.
pub const MIN_SAMPLES_PER_ANGLE: usize = 1000;

/// Homodyne scans covering the half circle `[0, π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TomographyDataset {
    scans: Vec<QuadratureSamples>,
}

impl TomographyDataset {
    /// Scans are sorted by angle. At least eight distinct angles in `[0, π)`
    /// are required, each with at least 1000 samples.
    pub fn new(mut scans: Vec<QuadratureSamples>) -> Result<Self> {
        if let Some(s) = scans.iter().find(|s| !(0.0..PI).contains(&s.theta)) {
            return Err(Error::InsufficientData(format!(
                "angle {} outside [0, π)",
                s.theta
            )));
        }
        scans.sort_by(|a, b| a.theta.total_cmp(&b.theta));
        let mut distinct = scans.iter().map(|s| s.theta).collect::<Vec<_>>();
        distinct.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        if distinct.len() < MIN_ANGLES || distinct.len() != scans.len() {
            return Err(Error::InsufficientData(format!(
                "need at least {MIN_ANGLES} distinct angles, one scan each; got {} scans at {} angles",
                scans.len(),
                distinct.len()
            )));
        }
        if let Some(s) = scans.iter().find(|s| s.len() < MIN_SAMPLES_PER_ANGLE) {
            return Err(Error::InsufficientData(format!(
                "angle {} has {} samples, need {MIN_SAMPLES_PER_ANGLE}",
                s.theta,
                s.len()
            )));
        }
        Ok(Self { scans })
    }

    pub fn scans(&self) -> &[QuadratureSamples] {
        &self.scans
    }

    /// Mean and covariance of `(X, P)` fitted by least squares to the
    /// per-angle sample moments, using `<X_θ> = cosθ <X> + sinθ <P>` and
    /// `Var X_θ = cos²θ Vxx + sin²θ Vpp + 2 sinθ cosθ Vxp`.
    ///
    /// This avoids integrating the reconstructed grid, whose second moments
    /// pick up back-projection streaks far from the state.
    pub fn quadrature_moments(&self) -> Result<(Vector2<f64>, Matrix2<f64>)> {
        let n = self.scans.len();
        let first = DMatrix::from_fn(n, 2, |k, j| {
            let t = self.scans[k].theta;
            if j == 0 {
                t.cos()
            } else {
                t.sin()
            }
        });
        let second = DMatrix::from_fn(n, 3, |k, j| {
            let (s, c) = self.scans[k].theta.sin_cos();
            [c * c, s * s, 2.0 * s * c][j]
        });
        let means = DVector::from_iterator(n, self.scans.iter().map(QuadratureSamples::mean));
        let vars = DVector::from_iterator(n, self.scans.iter().map(QuadratureSamples::variance));
        let fit = |a: DMatrix<f64>, b: DVector<f64>| {
            a.svd(true, true)
                .solve(&b, 1e-12)
                .map_err(|e| Error::InsufficientData(format!("moment fit failed: {e}")))
        };
        let m = fit(first, means)?;
        let v = fit(second, vars)?;
        Ok((
            Vector2::new(m[0], m[1]),
            Matrix2::new(v[0], v[2], v[2], v[1]),
        ))
    }

    /// Angular quadrature weights: half the gap to each neighbour, wrapping
    /// around at `π`. They sum to `π`.
    fn angle_weights(&self) -> Vec<f64> {
        let n = self.scans.len();
        (0..n)
            .map(|k| {
                let prev = if k == 0 {
                    self.scans[n - 1].theta - PI
                } else {
                    self.scans[k - 1].theta
                };
                let next = if k == n - 1 {
                    self.scans[0].theta + PI
                } else {
                    self.scans[k + 1].theta
                };
                0.5 * (next - prev)
            })
            .collect()
    }
}

/// Band limit of the ramp filter, chosen separately for each scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Band {
    /// The highest frequency at which the scan's empirical characteristic
    /// function still stands `snr / √N` above zero. Frequencies beyond it
    /// carry only sampling noise.
    Adaptive { snr: f64 },
    /// A fixed fraction of the histogram Nyquist frequency `π/h`.
    NyquistFraction(f64),
}

impl Default for Band {
    fn default() -> Self {
        Band::Adaptive { snr: DEFAULT_SNR }
    }
}

impl Band {
    fn validate(self) -> Result<()> {
        match self {
            Band::Adaptive { snr } if !(snr > 0.0 && snr.is_finite()) => {
                Err(Error::param("snr", "must be positive"))
            }
            Band::NyquistFraction(f) if !(f > 0.0 && f <= 1.0) => {
                Err(Error::param("band", "must lie in (0, 1]"))
            }
            _ => Ok(()),
        }
    }
}

/// Last frequency below Nyquist where `|χ(k)|`, the characteristic
/// function of the binned samples, reaches `threshold`.
///
/// The last crossing rather than the first is taken because the
/// characteristic function of a non-Gaussian state can pass through zero
/// well inside its band.
fn adaptive_band(density: &[f64], h: f64, offset: f64, threshold: f64) -> f64 {
    const STEPS: usize = 512;
    let dk = PI / h / STEPS as f64;
    let occupied: Vec<(f64, f64)> = density
        .iter()
        .enumerate()
        .filter(|(_, d)| **d != 0.0)
        .map(|(i, d)| (offset + i as f64 * h, d * h))
        .collect();
    let last = (1..=STEPS)
        .rev()
        .find(|&j| {
            let k = j as f64 * dk;
            let (re, im) = occupied.iter().fold((0.0, 0.0), |(re, im), &(x, w)| {
                let (sn, cs) = (k * x).sin_cos();
                (re + w * cs, im + w * sn)
            });
            re.hypot(im) >= threshold
        })
        .unwrap_or(1);
    last as f64 * dk
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionConfig {
    pub x_axis: Vec<f64>,
    pub p_axis: Vec<f64>,
    /// How the ramp filter is band limited.
    pub band: Band,
    /// Back-projection angles per measured angle. Values above one fill
    /// each gap by interpolating the filtered projections linearly in
    /// angle at fixed quadrature value, which suppresses streaks from
    /// strongly squeezed states at small angle counts.
    pub angular_oversampling: usize,
}

impl Default for ReconstructionConfig {
    fn default() -> Self {
        let ax = Axis::symmetric(3.0, 121);
        Self {
            x_axis: ax.clone(),
            p_axis: ax,
            band: Band::default(),
            angular_oversampling: DEFAULT_OVERSAMPLING,
        }
    }
}

impl ReconstructionConfig {
    /// Grid of `n` points per axis covering five standard deviations of
    /// `state` on each side of its mean, that is the bounding box of its 5σ
    /// ellipse.
    ///
    /// Back-projection noise spreads evenly over the grid, so a grid fitted
    /// to the state keeps the integrated error down.
    pub fn for_state(state: &State, n: usize) -> Self {
        let (mean, cov) = state.quadrature_moments();
        let axis = |k: usize| {
            let half = 5.0 * cov[(k, k)].sqrt();
            Axis::linspace(mean[k] - half, mean[k] + half, n)
        };
        Self {
            x_axis: axis(0),
            p_axis: axis(1),
            ..Default::default()
        }
    }
}

/// Reconstructed Wigner function and the factor applied to normalize it.
#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub grid: WignerGrid,
    /// Multiplier applied to the raw back-projection so that it integrates to
    /// one; values far from 1 indicate a poorly chosen grid or filter.
    pub scale: f64,
}

/// Band-limited ramp kernel `(1/2π) ∫_{-K}^{K} |k| e^{iks} dk`.
fn ramp_kernel(s: f64, k: f64) -> f64 {
    let ks = k * s;
    if ks.abs() < 1e-4 {
        // Series to fourth order keeps full precision near the origin.
        return k * k / (2.0 * PI) * (1.0 - ks * ks / 4.0 + ks.powi(4) / 72.0);
    }
    (k * ks.sin() / s + (ks.cos() - 1.0) / (s * s)) / PI
}

/// Freedman–Diaconis bin width `2 IQR n^{-1/3}`.
fn bin_width(values: &[f64]) -> Result<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let q = |f: f64| {
        let pos = f * (v.len() - 1) as f64;
        let i = pos.floor() as usize;
        let j = (i + 1).min(v.len() - 1);
        v[i] + (pos - i as f64) * (v[j] - v[i])
    };
    let iqr = q(0.75) - q(0.25);
    if iqr <= 0.0 {
        return Err(Error::InsufficientData(
            "quadrature samples have zero spread".into(),
        ));
    }
    Ok(2.0 * iqr * (v.len() as f64).powf(-1.0 / 3.0))
}

/// Filtered projection on bins centred at multiples of the bin width.
struct Filtered {
    h: f64,
    offset: f64,
    q: Vec<f64>,
}

fn filter_scan(scan: &QuadratureSamples, radius: f64, band: Band) -> Result<Filtered> {
    let h = bin_width(&scan.values)?;
    let extent = radius.max(scan.values.iter().fold(0.0f64, |m, v| m.max(v.abs())));
    let half = (extent / h).ceil() as i64 + 1;
    let nb = (2 * half + 1) as usize;
    let mut density = vec![0.0; nb];
    let norm = 1.0 / (scan.len() as f64 * h);
    for &v in &scan.values {
        let k = ((v / h).round() as i64 + half) as usize;
        density[k] += norm;
    }
    let offset = -(half as f64) * h;
    let kc = match band {
        Band::Adaptive { snr } => {
            adaptive_band(&density, h, offset, snr / (scan.len() as f64).sqrt())
        }
        Band::NyquistFraction(f) => f * PI / h,
    };
    let kernel: Vec<f64> = (0..nb).map(|d| h * ramp_kernel(d as f64 * h, kc)).collect();
    let q = (0..nb)
        .map(|i| {
            density
                .iter()
                .enumerate()
                .filter(|(_, d)| **d != 0.0)
                .map(|(j, d)| kernel[i.abs_diff(j)] * d)
                .sum()
        })
        .collect();
    Ok(Filtered {
        h,
        offset: -(half as f64) * h,
        q,
    })
}

/// One back-projection direction, blending the filtered projections of two
/// neighbouring scans.
struct View {
    sin: f64,
    cos: f64,
    weight: f64,
    lo: usize,
    hi: usize,
    t: f64,
    wrap: bool,
    /// Offsets that move the neighbours' projections onto this view's
    /// centre, so that a displaced state is blended without smearing.
    shift_lo: f64,
    shift_hi: f64,
}

fn views(data: &TomographyDataset, m: usize) -> Result<Vec<View>> {
    if m == 0 {
        return Err(Error::param("angular_oversampling", "must be at least 1"));
    }
    let scans = data.scans();
    let n = scans.len();
    if m == 1 {
        return Ok(data
            .angle_weights()
            .into_iter()
            .enumerate()
            .map(|(k, weight)| {
                let (sin, cos) = scans[k].theta.sin_cos();
                View {
                    sin,
                    cos,
                    weight,
                    lo: k,
                    hi: k,
                    t: 0.0,
                    wrap: false,
                    shift_lo: 0.0,
                    shift_hi: 0.0,
                }
            })
            .collect());
    }
    let (mean, _) = data.quadrature_moments()?;
    let centre = |phi: f64| mean[0] * phi.cos() + mean[1] * phi.sin();
    let mut out = Vec::with_capacity(n * m);
    for k in 0..n {
        let wrap = k == n - 1;
        let hi = if wrap { 0 } else { k + 1 };
        let next = if wrap {
            scans[0].theta + PI
        } else {
            scans[hi].theta
        };
        let gap = next - scans[k].theta;
        for j in 0..m {
            let t = j as f64 / m as f64;
            let phi = scans[k].theta + t * gap;
            let (sin, cos) = phi.sin_cos();
            out.push(View {
                sin,
                cos,
                weight: gap / m as f64,
                lo: k,
                hi,
                t,
                wrap,
                shift_lo: centre(scans[k].theta) - centre(phi),
                shift_hi: centre(next) - centre(phi),
            });
        }
    }
    Ok(out)
}

/// Filtered back-projection of homodyne scans onto a Wigner grid.
pub fn reconstruct_wigner(
    data: &TomographyDataset,
    config: &ReconstructionConfig,
) -> Result<Reconstruction> {
    config.band.validate()?;
    let (xs, ps) = (&config.x_axis, &config.p_axis);
    if xs.len() < 2 || ps.len() < 2 {
        return Err(Error::param("axes", "need at least two points per axis"));
    }
    let xm = xs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let pm = ps.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    // Histograms extend past the grid corners so that the kernel sees the
    // empty region beyond the data rather than a truncated edge.
    let radius = 1.5 * xm.hypot(pm);
    let filtered = data
        .scans
        .par_iter()
        .map(|s| filter_scan(s, radius, config.band))
        .collect::<Result<Vec<_>>>()?;
    let views = views(data, config.angular_oversampling)?;
    let values: Vec<f64> = xs
        .par_iter()
        .flat_map_iter(|&x| {
            let (filtered, views) = (&filtered, &views);
            ps.iter().map(move |&p| {
                views
                    .iter()
                    .map(|v| {
                        let s = x * v.cos + p * v.sin;
                        let (a, b) = (&filtered[v.lo], &filtered[v.hi]);
                        let qa = interp_uniform(&a.q, a.offset, a.h, s + v.shift_lo);
                        if v.t == 0.0 {
                            return v.weight * qa;
                        }
                        // The projection at θ + π is the mirror image of the one at θ.
                        let sb = if v.wrap {
                            -(s + v.shift_hi)
                        } else {
                            s + v.shift_hi
                        };
                        v.weight
                            * ((1.0 - v.t) * qa + v.t * interp_uniform(&b.q, b.offset, b.h, sb))
                    })
                    .sum::<f64>()
                    / (2.0 * PI)
            })
        })
        .collect();
    let raw = WignerGrid::new(xs.clone(), ps.clone(), values)?;
    let integral = raw.integral();
    if !(integral > 0.0) {
        return Err(Error::Unnormalized { integral });
    }
    let scale = 1.0 / integral;
    Ok(Reconstruction {
        grid: raw.scaled(scale),
        scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detection::sampling::sample_homodyne_scan;
    use num_complex::Complex64;

    use crate::phase_space::{make_state, wigner, State, StateSpec};

    fn angles(n: usize) -> Vec<f64> {
        (0..n).map(|k| k as f64 * PI / n as f64).collect()
    }

    fn l1(a: &WignerGrid, b: &WignerGrid) -> f64 {
        a.values()
            .iter()
            .zip(b.values())
            .map(|(x, y)| (x - y).abs())
            .sum::<f64>()
            * a.dx()
            * a.dp()
    }

    fn reconstruct(
        state: &State,
        n_angles: usize,
        shots: usize,
        half: f64,
    ) -> (Reconstruction, WignerGrid) {
        let scans = sample_homodyne_scan(state, &angles(n_angles), shots, 17).unwrap();
        let ds = TomographyDataset::new(scans).unwrap();
        let ax = Axis::symmetric(half, 61);
        let cfg = ReconstructionConfig {
            x_axis: ax.clone(),
            p_axis: ax.clone(),
            ..Default::default()
        };
        let rec = reconstruct_wigner(&ds, &cfg).unwrap();
        let exact = wigner(state, &ax, &ax).unwrap();
        (rec, exact)
    }

    #[test]
    fn kernel_series_matches_closed_form() {
        let k: f64 = 7.0;
        for s in [1e-3, 2e-3] {
            let closed = (k * (k * s).sin() / s + ((k * s).cos() - 1.0) / (s * s)) / PI;
            let series =
                k * k / (2.0 * PI) * (1.0 - (k * s).powi(2) / 4.0 + (k * s).powi(4) / 72.0);
            assert!((closed - series).abs() < 1e-6 * closed);
        }
    }

    #[test]
    fn vacuum_reconstruction() {
        let (rec, exact) = reconstruct(&make_state(&StateSpec::Vacuum).unwrap(), 16, 20_000, 2.5);
        let maxdev = rec
            .grid
            .values()
            .iter()
            .zip(exact.values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(maxdev < 0.05 * 2.0 / PI, "max deviation {maxdev}");
        assert!(
            l1(&rec.grid, &exact) < 0.1,
            "L1 = {}",
            l1(&rec.grid, &exact)
        );
        assert!((rec.scale - 1.0).abs() < 0.2);
    }

    #[test]
    fn single_photon_dips_negative() {
        let (rec, exact) = reconstruct(&make_state(&StateSpec::Fock(1)).unwrap(), 16, 50_000, 3.0);
        assert!(rec.grid.value_at(0.0, 0.0) < -0.3);
        // The band limit blurs the ring; the error stays moderate.
        assert!(l1(&rec.grid, &exact) < 0.4);
    }

    #[test]
    fn squeezed_covariance_recovery() {
        let st = make_state(&StateSpec::SqueezedVacuum(0.25)).unwrap();
        for seed in 0..4 {
            let data = TomographyDataset::new(
                sample_homodyne_scan(&st, &angles(16), 10_000, seed).unwrap(),
            )
            .unwrap();
            let (mean, cov) = data.quadrature_moments().unwrap();
            assert!(mean.amax() < 0.02, "{mean}");
            assert!((cov[(0, 0)] * 16.0 - 1.0).abs() < 0.1, "{cov}");
            assert!((cov[(1, 1)] - 1.0).abs() < 0.1, "{cov}");
            assert!(cov[(0, 1)].abs() < 0.02, "{cov}");

            // Grid moments: the band limit blurs the narrow quadrature, so
            // its variance comes out consistently high by 10 to 20 percent.
            let rec =
                reconstruct_wigner(&data, &ReconstructionConfig::for_state(&st, 201)).unwrap();
            let (_, grid_cov) = rec.grid.moments();
            assert!((grid_cov[(1, 1)] - 1.0).abs() < 0.1, "{grid_cov}");
            assert!((grid_cov[(0, 0)] * 16.0 - 1.0).abs() < 0.25, "{grid_cov}");
        }
    }

    #[test]
    fn oversampling_removes_streaks() {
        for (spec, plain_floor) in [
            (StateSpec::SqueezedVacuum(0.25), 0.2),
            (StateSpec::Coherent(Complex64::new(2.0, -1.0)), 0.0),
        ] {
            let st = make_state(&spec).unwrap();
            let data =
                TomographyDataset::new(sample_homodyne_scan(&st, &angles(16), 10_000, 17).unwrap())
                    .unwrap();
            let cfg = ReconstructionConfig::for_state(&st, 201);
            let exact = wigner(&st, &cfg.x_axis, &cfg.p_axis).unwrap();
            let err = |m: usize| {
                let rec = reconstruct_wigner(
                    &data,
                    &ReconstructionConfig {
                        angular_oversampling: m,
                        ..cfg.clone()
                    },
                );
                l1(&rec.unwrap().grid, &exact)
            };
            let (plain, over) = (err(1), err(DEFAULT_OVERSAMPLING));
            assert!(plain > plain_floor, "{spec:?}: plain {plain}");
            assert!(
                over < 0.1 && over < plain,
                "{spec:?}: oversampled {over}, plain {plain}"
            );
        }
        let st = make_state(&StateSpec::Vacuum).unwrap();
        let data = TomographyDataset::new(sample_homodyne_scan(&st, &angles(16), 1000, 0).unwrap())
            .unwrap();
        let cfg = ReconstructionConfig {
            angular_oversampling: 0,
            ..Default::default()
        };
        assert!(reconstruct_wigner(&data, &cfg).is_err());
    }

    #[test]
    fn adaptive_band_resolves_single_photon() {
        // With 10k shots the histogram bins are wide enough that a fixed
        // fraction of their Nyquist frequency blurs away the negative dip.
        let st = make_state(&StateSpec::Fock(1)).unwrap();
        let data =
            TomographyDataset::new(sample_homodyne_scan(&st, &angles(16), 10_000, 3).unwrap())
                .unwrap();
        let cfg = ReconstructionConfig::for_state(&st, 121);
        let origin = |band| {
            let rec = reconstruct_wigner(
                &data,
                &ReconstructionConfig {
                    band,
                    ..cfg.clone()
                },
            )
            .unwrap();
            rec.grid.value_at(0.0, 0.0)
        };
        let adaptive = origin(Band::default());
        assert!(adaptive < -0.5, "adaptive W(0,0) = {adaptive}");
        assert!(origin(Band::NyquistFraction(0.15)) > -0.2);
        for band in [Band::Adaptive { snr: 0.0 }, Band::NyquistFraction(1.5)] {
            assert!(reconstruct_wigner(
                &data,
                &ReconstructionConfig {
                    band,
                    ..cfg.clone()
                }
            )
            .is_err());
        }
    }

    #[test]
    fn dataset_validation() {
        let s = |t: f64, n: usize| QuadratureSamples::new(t, vec![0.1; n]).unwrap();
        assert!(TomographyDataset::new((0..7).map(|k| s(k as f64 * 0.4, 1000)).collect()).is_err());
        assert!(TomographyDataset::new((0..8).map(|k| s(k as f64 * 0.3, 999)).collect()).is_err());
        assert!(TomographyDataset::new((0..8).map(|k| s(k as f64 * 0.5, 1000)).collect()).is_err());
        assert!(TomographyDataset::new((0..8).map(|k| s(k as f64 * 0.3, 1000)).collect()).is_ok());
    }
}
