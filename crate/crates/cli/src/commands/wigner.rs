use qoptics::io::{distribution_table, fmt_f64, wigner_table, Table};
use qoptics::{
    marginal, parity_wigner_origin, photon_distribution, to_husimi, wigner, wigner_point, Axis,
    State, StateSpec,
};
use serde::{Deserialize, Serialize};

use crate::config::Run;
use crate::error::CliError;
use crate::output::Output;

#[derive(Debug, clap::Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct Flags {
    /// State, e.g. vacuum, coherent:1,1, thermal:1, squeezed:0.25, fock:1, cat:2, admix1:0.05.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    state: Option<String>,
    /// Grid points per axis.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    points: Option<usize>,
    /// Grid half-width; defaults to five standard deviations beyond the mean.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    half_width: Option<f64>,
    /// Marginal angles in degrees, comma separated.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    marginals: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct Params {
    state: String,
    points: usize,
    half_width: Option<f64>,
    marginals: Vec<f64>,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            state: "vacuum".into(),
            points: 201,
            half_width: None,
            marginals: Vec::new(),
        }
    }
}

pub(crate) fn parse_state(spec: &str) -> Result<State, CliError> {
    Ok(qoptics::make_state(&spec.parse::<StateSpec>()?)?)
}

/// Grid half-width that holds the state with a five-vacuum-σ margin.
///
/// Gaussian states get `|mean| + 5σ` with `σ` the widest quadrature spread.
/// For other states the spread beyond vacuum mostly measures how far apart
/// the components sit, as for a cat, so the margin is added to that offset
/// instead of being scaled with it. This keeps the grid fine enough to
/// resolve interference fringes.
pub(crate) fn auto_half_width(state: &State) -> f64 {
    let (mean, cov) = state.quadrature_moments();
    let widest = cov.symmetric_eigenvalues().max();
    if state.as_gaussian().is_some() {
        mean.amax() + 5.0 * widest.sqrt()
    } else {
        mean.amax() + (widest - 0.25).max(0.0).sqrt() + 2.5
    }
}

/// Angle label without a decimal point where possible, e.g. `90` or `22.5`.
fn angle_label(deg: f64) -> String {
    format!("{deg}").replace('-', "m")
}

pub fn run(p: &Params, _run: &Run, out: &mut Output) -> Result<(), CliError> {
    let state = parse_state(&p.state)?;
    if p.points < 3 {
        return Err(CliError::Config("points must be at least 3".into()));
    }
    let half = p.half_width.unwrap_or_else(|| auto_half_width(&state));
    if !(half > 0.0 && half.is_finite()) {
        return Err(CliError::Config(format!(
            "half-width must be positive, got {half}"
        )));
    }
    let ax = Axis::symmetric(half, p.points);
    let w = wigner(&state, &ax, &ax)?;
    let q = to_husimi(&state, &ax, &ax)?;
    out.write("wigner", wigner_table(&w))?;
    out.write("husimi", wigner_table(&q))?;

    let mut worst_marginal = 0.0f64;
    for &deg in &p.marginals {
        let m = marginal(&w, deg.to_radians())?;
        let mut t = Table::new(&["x", "density"]);
        for (x, d) in m.x.iter().zip(&m.density) {
            t.push_floats(&[*x, *d]);
        }
        t.metadata.insert("theta_deg".into(), fmt_f64(deg));
        out.write(&format!("marginal_{}", angle_label(deg)), t)?;
        worst_marginal = worst_marginal.min(m.density.iter().copied().fold(0.0, f64::min));
    }

    let w0 = wigner_point(&state, 0.0, 0.0);
    let mut report = Table::new(&["quantity", "value"]);
    let mut row = |name: &str, v: f64| report.push(vec![name.into(), fmt_f64(v)]);
    row("w_origin", w0);
    row("w_min", w.min());
    row("w_max", w.max());
    row("w_integral", w.integral());
    row("q_min", q.min());
    row("q_integral", q.integral());
    let parity = match photon_distribution(&state) {
        Ok(pd) => {
            out.write("distribution", distribution_table(&pd))?;
            let parity = parity_wigner_origin(&pd)?;
            row("parity_origin", parity);
            Some(parity)
        }
        // Mixed non-thermal Gaussians have no number-basis expansion here.
        Err(qoptics::Error::Unsupported(_)) => None,
        Err(e) => return Err(e.into()),
    };
    out.write("report", report)?;

    let norm = (w.integral() - 1.0).abs();
    out.check("wigner_normalization", norm, "<= 1e-3", norm <= 1e-3);
    out.check("husimi_non_negative", q.min(), ">= -1e-9", q.min() >= -1e-9);
    if !p.marginals.is_empty() {
        out.check(
            "marginals_non_negative",
            worst_marginal,
            ">= -1e-6",
            worst_marginal >= -1e-6,
        );
    }
    if let Some(parity) = parity {
        let d = (parity - w0).abs();
        out.check("parity_identity", d, "<= 1e-4", d <= 1e-4);
    }
    Ok(())
}
