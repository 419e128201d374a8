use std::f64::consts::PI;

use qoptics::io::{fmt_f64, series_table, spectrum_table, Table};
use qoptics::spectra::synthesize_member;
use qoptics::{
    correlation, field_spectrum, spectral_density, synthesize_field, CorrelationKind, NoiseModel,
    SpectralDensity, SpectralKind,
};
use serde::{Deserialize, Serialize};

use crate::config::Run;
use crate::error::CliError;
use crate::output::Output;

#[derive(Debug, clap::Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct Flags {
    /// constant, white-fm, delta-amplitude, gaussian-amplitude, chaotic, e1, e2 or e3.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    model: Option<String>,
    /// Mean field amplitude.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    amplitude: Option<f64>,
    /// White frequency-noise level S_ν(0) in Hz²/Hz.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    snu0: Option<f64>,
    /// White amplitude-noise level for delta-amplitude.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    sa0: Option<f64>,
    /// Amplitude rms for gaussian-amplitude.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    rms: Option<f64>,
    /// Amplitude correlation time for gaussian-amplitude, in seconds.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    corr_time: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    mean_intensity: Option<f64>,
    /// Coherence time of the chaotic field, in seconds.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    coherence_time: Option<f64>,
    /// Decay rate of the e1, e2 and e3 pulses, in 1/s.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma: Option<f64>,
    /// Record length in seconds.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    seconds: Option<f64>,
    /// Sample spacing in seconds.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    dt: Option<f64>,
    /// Records averaged before the white-fm linewidth fit.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    ensemble: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct Params {
    model: String,
    amplitude: f64,
    snu0: f64,
    sa0: f64,
    rms: f64,
    corr_time: f64,
    mean_intensity: f64,
    coherence_time: f64,
    gamma: f64,
    seconds: f64,
    dt: f64,
    ensemble: u64,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            model: "white-fm".into(),
            amplitude: 1.0,
            snu0: 5.0,
            sa0: 1e-3,
            rms: 0.1,
            corr_time: 1e-3,
            mean_intensity: 1.0,
            coherence_time: 1e-2,
            gamma: 1.0,
            seconds: 10.0,
            dt: 1e-4,
            ensemble: 100,
        }
    }
}

impl Params {
    fn model(&self) -> Result<NoiseModel, CliError> {
        let p = self;
        Ok(match p.model.as_str() {
            "constant" => NoiseModel::Constant { amplitude: p.amplitude },
            "white-fm" => NoiseModel::WhiteFm { amplitude: p.amplitude, s_nu0: p.snu0 },
            "delta-amplitude" => NoiseModel::DeltaAmplitude { mean: p.amplitude, s_a0: p.sa0 },
            "gaussian-amplitude" => {
                NoiseModel::GaussianAmplitude { mean: p.amplitude, rms: p.rms, corr_time: p.corr_time, s_nu0: p.snu0 }
            }
            "chaotic" => NoiseModel::Chaotic { mean_intensity: p.mean_intensity, coherence_time: p.coherence_time },
            "e1" => NoiseModel::E1 { gamma: p.gamma },
            "e2" => NoiseModel::E2 { gamma: p.gamma },
            "e3" => NoiseModel::E3 { gamma: p.gamma },
            other => {
                return Err(CliError::Config(format!(
                    "unknown model `{other}`; expected constant, white-fm, delta-amplitude, gaussian-amplitude, chaotic, e1, e2 or e3"
                )))
            }
        })
    }
}

const KINDS: [SpectralKind; 5] = [
    SpectralKind::Field,
    SpectralKind::Intensity,
    SpectralKind::Amplitude,
    SpectralKind::Phase,
    SpectralKind::Frequency,
];

pub fn run(p: &Params, run: &Run, out: &mut Output) -> Result<(), CliError> {
    let model = p.model()?;
    let series = synthesize_field(&model, p.seconds, p.dt, run.seed)?;
    out.write("series", series_table(&series))?;

    let mut summary = Table::new(&["kind", "status", "total_power"]);
    let mut intensity = None;
    for kind in KINDS {
        let sd = match kind {
            SpectralKind::Field => field_spectrum(&series),
            _ => spectral_density(&series, kind),
        };
        match sd {
            Ok(sd) => {
                summary.push(vec![
                    kind.name().into(),
                    "ok".into(),
                    fmt_f64(sd.total_power()),
                ]);
                out.write(&format!("spectrum_{}", kind.name()), spectrum_table(&sd))?;
                if kind == SpectralKind::Intensity {
                    intensity = Some(sd);
                }
            }
            // Some densities do not exist for some fields, such as the
            // phase of a pulse that is exactly zero on half the record.
            Err(e) => summary.push(vec![
                kind.name().into(),
                format!("skipped: {e}").replace(',', ";"),
                String::new(),
            ]),
        }
    }
    out.write("spectra", summary)?;

    match model {
        NoiseModel::WhiteFm { s_nu0, .. } => linewidth(p, &model, s_nu0, run.seed, out)?,
        NoiseModel::E1 { gamma } | NoiseModel::E2 { gamma } | NoiseModel::E3 { gamma } => {
            pulse_comparison(p, gamma, run.seed, out)?
        }
        NoiseModel::Constant { .. } => {
            let peak = intensity
                .map(|sd| sd.values().iter().fold(0.0f64, |m, v| m.max(v.abs())))
                .unwrap_or(f64::NAN);
            out.check("intensity_density_zero", peak, "== 0", peak == 0.0);
        }
        _ => {}
    }
    Ok(())
}

fn linewidth(
    p: &Params,
    model: &NoiseModel,
    s_nu0: f64,
    seed: u64,
    out: &mut Output,
) -> Result<(), CliError> {
    if p.ensemble == 0 {
        return Err(CliError::Config("ensemble must be at least 1".into()));
    }
    let mut freqs = Vec::new();
    let mut acc: Vec<f64> = Vec::new();
    for member in 0..p.ensemble {
        let sd = field_spectrum(&synthesize_member(model, p.seconds, p.dt, seed, member)?)?;
        if acc.is_empty() {
            freqs = sd.freqs().to_vec();
            acc = vec![0.0; sd.len()];
        }
        for (a, v) in acc.iter_mut().zip(sd.values()) {
            *a += v / p.ensemble as f64;
        }
    }
    let mean = SpectralDensity::new(freqs, acc, SpectralKind::Field)?;
    out.write("spectrum_field_mean", spectrum_table(&mean))?;
    let fit = qoptics::spectra::fit_lorentzian(&mean)?;
    let predicted = PI * s_nu0;
    let ratio = fit.fwhm / predicted;
    let mut t = Table::new(&["fwhm_fit_hz", "fwhm_predicted_hz", "ratio", "center_hz"]);
    t.push_floats(&[fit.fwhm, predicted, ratio, fit.center]);
    out.write("linewidth", t)?;
    out.check(
        "linewidth_ratio",
        ratio,
        "in [0.9, 1.1]",
        (0.9..=1.1).contains(&ratio),
    );
    Ok(())
}

/// Spectra and two-photon correlations of the three pulse shapes, compared
/// pairwise relative to the largest peak.
fn pulse_comparison(p: &Params, gamma: f64, seed: u64, out: &mut Output) -> Result<(), CliError> {
    let models = [
        NoiseModel::E1 { gamma },
        NoiseModel::E2 { gamma },
        NoiseModel::E3 { gamma },
    ];
    let series = models
        .iter()
        .map(|m| synthesize_field(m, p.seconds, p.dt, seed))
        .collect::<Result<Vec<_>, _>>()?;
    let spectra = series
        .iter()
        .map(field_spectrum)
        .collect::<Result<Vec<_>, _>>()?;
    let max_lag = (5.0 / gamma).min(0.2 * p.seconds);
    let g2 = series
        .iter()
        .map(|s| correlation(s, CorrelationKind::G2TwoPhoton, max_lag))
        .collect::<Result<Vec<_>, _>>()?;
    let s_peak = spectra.iter().map(|s| s.peak().1).fold(0.0, f64::max);
    let g_peak = g2
        .iter()
        .flat_map(|f| f.values().iter().map(|v| v.norm()))
        .fold(0.0, f64::max);

    let mut t = Table::new(&["pair", "max_spectrum_diff", "max_g2tp_diff"]);
    let (mut worst_spectrum, mut best_g2) = (0.0f64, 0.0f64);
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        let ds = spectra[a]
            .values()
            .iter()
            .zip(spectra[b].values())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        let dg = g2[a]
            .values()
            .iter()
            .zip(g2[b].values())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        worst_spectrum = worst_spectrum.max(ds / s_peak);
        best_g2 = best_g2.max(dg / g_peak);
        t.push(vec![
            format!("e{}-e{}", a + 1, b + 1),
            fmt_f64(ds / s_peak),
            fmt_f64(dg / g_peak),
        ]);
    }
    out.write("pulse_comparison", t)?;
    out.check(
        "pulse_spectra_agree",
        worst_spectrum,
        "<= 0.01 of peak",
        worst_spectrum <= 0.01,
    );
    out.check(
        "pulse_g2tp_differ",
        best_g2,
        "> 0.10 of peak",
        best_g2 > 0.10,
    );
    Ok(())
}
