use qoptics::io::{fmt_f64, Table};
use qoptics::ordering::{g2_zero_distribution, sym_moments_fock};
use qoptics::{
    g2_zero, make_state, photon_distribution, sym_moments_gaussian, Error, State, StateSpec,
};
use serde::{Deserialize, Serialize};

use crate::config::Run;
use crate::error::CliError;
use crate::output::Output;

#[derive(Debug, clap::Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct Flags {
    /// State to tabulate, repeatable. Replaces the default coherent, thermal
    /// and squeezed rows.
    #[arg(long)]
    #[serde(skip_serializing_if = "Vec::is_empty")]
    state: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct Params {
    states: Vec<String>,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            states: ["coherent:1", "thermal:1", "squeezed:0.5"]
                .map(String::from)
                .to_vec(),
        }
    }
}

/// The `--state` flag replaces the default list.
pub fn flags_json(flags: &Flags) -> serde_json::Value {
    if flags.state.is_empty() {
        serde_json::json!({})
    } else {
        serde_json::json!({ "states": flags.state })
    }
}

/// Family name and its single numeric parameter.
fn label(spec: &StateSpec) -> (&'static str, f64) {
    match *spec {
        StateSpec::Vacuum => ("vacuum", 0.0),
        StateSpec::Coherent(a) => ("coherent", a.norm()),
        StateSpec::Thermal(n) => ("thermal", n),
        StateSpec::SqueezedVacuum(e) => ("squeezed", e),
        StateSpec::Fock(n) => ("fock", n as f64),
        StateSpec::Cat { alpha, even: true } => ("cat-even", alpha.norm()),
        StateSpec::Cat { alpha, even: false } => ("cat-odd", alpha.norm()),
        StateSpec::Admixture { epsilon, k: 1 } => ("admix1", epsilon),
        StateSpec::Admixture { epsilon, .. } => ("admix2", epsilon),
    }
}

fn undefined(e: &Error) -> bool {
    matches!(e, Error::UndefinedForVacuum | Error::ZeroMeanPhotonNumber)
}

pub fn run(p: &Params, _run: &Run, out: &mut Output) -> Result<(), CliError> {
    if p.states.is_empty() {
        return Err(CliError::Config(
            "states must list at least one state".into(),
        ));
    }
    let mut t = Table::new(&["state", "param", "sym_n", "g2", "g2_fock"]);
    for text in &p.states {
        let spec: StateSpec = text.parse()?;
        let state = make_state(&spec)?;
        let moments = match &state {
            State::Gaussian(g) => sym_moments_gaussian(g)?,
            State::Fock(f) => sym_moments_fock(f)?,
        };
        // Number-basis oracle, which also covers mixed thermal states.
        let oracle = g2_zero_distribution(&photon_distribution(&state)?);
        let g2 = g2_zero(&moments);
        let (family, param) = label(&spec);
        let cell = |r: &Result<f64, Error>| {
            r.as_ref()
                .map(|v| fmt_f64(*v))
                .unwrap_or_else(|_| "undefined".into())
        };
        t.push(vec![
            family.into(),
            fmt_f64(param),
            fmt_f64(moments.sym_n),
            cell(&g2),
            cell(&oracle),
        ]);
        match (g2, oracle) {
            (Ok(a), Ok(b)) => {
                let d = (a - b).abs();
                out.check(&format!("g2_vs_fock:{text}"), d, "<= 1e-6", d <= 1e-6);
            }
            (Err(e), _) | (_, Err(e)) if undefined(&e) => {
                out.check(
                    &format!("g2_defined:{text}"),
                    moments.sym_n - 0.5,
                    "mean photon number > 0",
                    false,
                );
            }
            (Err(e), _) | (_, Err(e)) => return Err(e.into()),
        }
    }
    out.write("g2", t)?;
    Ok(())
}
