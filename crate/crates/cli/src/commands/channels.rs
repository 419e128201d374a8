use std::f64::consts::PI;

use qoptics::io::{fmt_f64, Table};
use qoptics::multimode::{epr_pair, epr_variances};
use qoptics::{
    epr_commutator_check, noise_figure, noise_figure_numeric, sideband_state, solve_arm_length,
    unbalanced_interferometer, ChannelKind,
};
use serde::{Deserialize, Serialize};

use crate::config::Run;
use crate::error::CliError;
use crate::output::Output;

#[derive(Debug, clap::Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct Flags {
    /// Smallest gain of the sweep; attenuation uses η = 1/G.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    g_min: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    g_max: Option<f64>,
    /// Number of gains, spaced evenly.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    steps: Option<usize>,
    /// Squeezing of the EPR inputs and of the sideband state.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    epsilon: Option<f64>,
    /// Carrier amplitude of the sideband state.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    carrier_x0: Option<f64>,
    /// Optical carrier frequency in Hz.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    carrier_hz: Option<f64>,
    /// Sideband offset frequency in Hz.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    sideband_hz: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct Params {
    g_min: f64,
    g_max: f64,
    steps: usize,
    epsilon: f64,
    carrier_x0: f64,
    carrier_hz: f64,
    sideband_hz: f64,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            g_min: 1.0,
            g_max: 10.0,
            steps: 10,
            epsilon: 0.1,
            carrier_x0: 1.0,
            carrier_hz: 3e14,
            sideband_hz: 1e7,
        }
    }
}

fn gains(p: &Params) -> Result<Vec<f64>, CliError> {
    if !(p.g_min >= 1.0 && p.g_max >= p.g_min && p.g_max.is_finite()) {
        return Err(CliError::Config(format!(
            "need 1 <= g-min <= g-max, got {} and {}",
            p.g_min, p.g_max
        )));
    }
    if p.steps == 0 || (p.steps == 1 && p.g_max != p.g_min) {
        return Err(CliError::Config(
            "steps must be at least 2 unless g-min equals g-max".into(),
        ));
    }
    let span = p.g_max - p.g_min;
    Ok((0..p.steps)
        .map(|k| p.g_min + span * k as f64 / (p.steps.max(2) - 1) as f64)
        .collect())
}

pub fn run(p: &Params, _run: &Run, out: &mut Output) -> Result<(), CliError> {
    let gains = gains(p)?;
    let mut sweep = Table::new(&["kind", "param", "nf_closed", "nf_numeric"]);
    let (mut worst, mut alias) = (0.0f64, 0.0f64);
    for &g in &gains {
        for kind in ChannelKind::ALL {
            let param = if kind == ChannelKind::Attenuation {
                1.0 / g
            } else {
                g
            };
            let (closed, numeric) = (
                noise_figure(kind, param)?,
                noise_figure_numeric(kind, param)?,
            );
            worst = worst.max((closed - numeric).abs());
            sweep.push(vec![
                kind.name().into(),
                fmt_f64(param),
                fmt_f64(closed),
                fmt_f64(numeric),
            ]);
        }
        let conj = noise_figure(ChannelKind::PhaseConjugation, g)?;
        alias = alias.max((conj - noise_figure(ChannelKind::ElectronicRepeater, g)?).abs());
    }
    out.write("channels", sweep)?;
    out.check("nf_closed_vs_numeric", worst, "<= 1e-10", worst <= 1e-10);
    out.check(
        "repeater_equals_phase_conjugation",
        alias,
        "== 0",
        alias == 0.0,
    );

    epr_report(p.epsilon, 10, out)?;

    let (w0, wm) = (2.0 * PI * p.carrier_hz, 2.0 * PI * p.sideband_hz);
    let (length, order) = solve_arm_length(w0, wm)?;
    let report =
        unbalanced_interferometer(&sideband_state(p.carrier_x0, p.epsilon)?, length, w0, wm)?;
    let mut t = Table::new(&["output", "variance", "benchmark"]);
    for (label, v, b) in &report.rows {
        t.push(vec![label.clone(), fmt_f64(*v), fmt_f64(*b)]);
    }
    t.metadata.insert("arm_length_m".into(), fmt_f64(length));
    t.metadata.insert("carrier_order".into(), order.to_string());
    out.write("interferometer", t)?;
    if p.epsilon < 1.0 {
        let separated =
            ["out1_upper", "out2_lower"].map(|l| report.variance(l).unwrap_or(f64::NAN));
        let least = separated[0].min(separated[1]);
        out.check(
            "separated_outputs_above_vacuum",
            least,
            "> 0.25",
            least > 0.25,
        );
        let diff = report.variance("difference").unwrap_or(f64::NAN);
        out.check("difference_below_vacuum", diff, "< 0.25", diff < 0.25);
    }
    Ok(())
}

/// EPR variances for orthogonally squeezed inputs and the truncated-space
/// commutator check.
pub(crate) fn epr_report(epsilon: f64, dim: usize, out: &mut Output) -> Result<(), CliError> {
    let (vx, vp) = epr_variances(&epr_pair(epsilon)?);
    let comm = epr_commutator_check(dim);
    let mut t = Table::new(&["quantity", "value", "benchmark"]);
    t.push(vec![
        "var_x3_plus_x4".into(),
        fmt_f64(vx),
        fmt_f64(epsilon / 2.0),
    ]);
    t.push(vec![
        "var_p3_minus_p4".into(),
        fmt_f64(vp),
        fmt_f64(epsilon / 2.0),
    ]);
    t.push(vec![
        "commutator_residual".into(),
        fmt_f64(comm.max_residual()),
        fmt_f64(0.0),
    ]);
    out.write("epr", t)?;
    let dev = (vx - epsilon / 2.0).abs().max((vp - epsilon / 2.0).abs());
    out.check(
        "epr_variances",
        dev,
        "<= 1e-12 from epsilon/2",
        dev <= 1e-12,
    );
    out.check(
        "epr_commutators",
        comm.max_residual(),
        "<= 1e-10",
        comm.max_residual() <= 1e-10,
    );
    Ok(())
}
