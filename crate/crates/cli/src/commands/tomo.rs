use std::f64::consts::PI;

use qoptics::detection::{
    sample_homodyne_scan, Band, DEFAULT_OVERSAMPLING, DEFAULT_SNR, MIN_ANGLES,
    MIN_SAMPLES_PER_ANGLE,
};
use qoptics::io::{fmt_f64, homodyne_table, wigner_table, Table};
use qoptics::{reconstruct_wigner, wigner, ReconstructionConfig, TomographyDataset};
use serde::{Deserialize, Serialize};

use super::wigner::parse_state;
use crate::config::Run;
use crate::error::CliError;
use crate::output::Output;

#[derive(Debug, clap::Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct Flags {
    /// State to measure, e.g. vacuum, coherent:1,1, squeezed:0.25 or fock:1.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    state: Option<String>,
    /// Number of equally spaced phases in [0, π).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    angles: Option<usize>,
    /// Samples per phase.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    shots: Option<usize>,
    /// Reconstruction grid points per axis.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    points: Option<usize>,
    /// Adaptive band limit: keep frequencies where the characteristic
    /// function of a scan exceeds this many multiples of 1/√shots.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    snr: Option<f64>,
    /// Fixed band limit as a fraction of the histogram Nyquist frequency,
    /// replacing the adaptive one.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    cutoff: Option<f64>,
    /// Back-projection angles per measured angle.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    oversampling: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct Params {
    state: String,
    angles: usize,
    shots: usize,
    points: usize,
    snr: f64,
    cutoff: Option<f64>,
    oversampling: usize,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            state: "vacuum".into(),
            angles: 16,
            shots: 10_000,
            points: 201,
            snr: DEFAULT_SNR,
            cutoff: None,
            oversampling: DEFAULT_OVERSAMPLING,
        }
    }
}

pub fn run(p: &Params, run: &Run, out: &mut Output) -> Result<(), CliError> {
    if p.angles < MIN_ANGLES {
        return Err(CliError::Config(format!(
            "angles must be at least {MIN_ANGLES}, got {}",
            p.angles
        )));
    }
    if p.shots < MIN_SAMPLES_PER_ANGLE {
        return Err(CliError::Config(format!(
            "shots must be at least {MIN_SAMPLES_PER_ANGLE}, got {}",
            p.shots
        )));
    }
    let band = match p.cutoff {
        Some(f) if !(f > 0.0 && f <= 1.0) => {
            return Err(CliError::Config(format!(
                "cutoff must lie in (0, 1], got {f}"
            )));
        }
        Some(f) => Band::NyquistFraction(f),
        None if !(p.snr > 0.0 && p.snr.is_finite()) => {
            return Err(CliError::Config(format!(
                "snr must be positive, got {}",
                p.snr
            )));
        }
        None => Band::Adaptive { snr: p.snr },
    };
    if p.oversampling == 0 {
        return Err(CliError::Config("oversampling must be at least 1".into()));
    }
    let state = parse_state(&p.state)?;
    let angles: Vec<f64> = (0..p.angles)
        .map(|k| k as f64 * PI / p.angles as f64)
        .collect();
    let scans = sample_homodyne_scan(&state, &angles, p.shots, run.seed)?;
    out.write("samples", homodyne_table(&scans))?;

    let data = TomographyDataset::new(scans)?;
    let config = ReconstructionConfig {
        band,
        angular_oversampling: p.oversampling,
        ..ReconstructionConfig::for_state(&state, p.points)
    };
    let rec = reconstruct_wigner(&data, &config)?;
    out.write("reconstruction", wigner_table(&rec.grid))?;

    let exact = wigner(&state, &config.x_axis, &config.p_axis)?;
    let l1: f64 = rec
        .grid
        .values()
        .iter()
        .zip(exact.values())
        .map(|(a, b)| (a - b).abs())
        .sum::<f64>()
        * rec.grid.dx()
        * rec.grid.dp();
    let (_, true_cov) = state.quadrature_moments();
    let (_, fit_cov) = data.quadrature_moments()?;
    let (_, grid_cov) = rec.grid.moments();

    let mut report = Table::new(&["metric", "value", "benchmark"]);
    let mut row =
        |name: &str, v: f64, b: f64| report.push(vec![name.into(), fmt_f64(v), fmt_f64(b)]);
    row("l1_error", l1, 0.0);
    row("normalization_scale", rec.scale, 1.0);
    row(
        "w_origin",
        rec.grid.value_at(0.0, 0.0),
        exact.value_at(0.0, 0.0),
    );
    for (name, (i, j)) in [("var_x", (0, 0)), ("var_p", (1, 1)), ("cov_xp", (0, 1))] {
        row(&format!("fit_{name}"), fit_cov[(i, j)], true_cov[(i, j)]);
        row(&format!("grid_{name}"), grid_cov[(i, j)], true_cov[(i, j)]);
    }
    out.write("report", report)?;

    if state.as_gaussian().is_some() {
        out.check("l1_error", l1, "<= 0.1", l1 <= 0.1);
        // Off-diagonal error is measured against the geometric-mean spread.
        let scale = (true_cov[(0, 0)] * true_cov[(1, 1)]).sqrt();
        for (name, (i, j), denom) in [
            ("var_x", (0, 0), true_cov[(0, 0)]),
            ("var_p", (1, 1), true_cov[(1, 1)]),
            ("cov_xp", (0, 1), scale),
        ] {
            let rel = (fit_cov[(i, j)] - true_cov[(i, j)]).abs() / denom;
            out.check(
                &format!("covariance_{name}"),
                rel,
                "relative error <= 0.1",
                rel <= 0.1,
            );
        }
    }
    Ok(())
}
