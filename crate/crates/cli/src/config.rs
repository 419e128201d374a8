//! Resolution of command-line flags and the optional JSON config file into
//! one concrete run configuration.
//!
//! Flags and file share the same keys. A flag given on the command line wins
//! over the file, and anything left unset falls back to the defaults below.

use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;

use clap::ValueEnum;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Flags shared by every subcommand.
#[derive(Debug, clap::Args, Serialize)]
pub struct CommonArgs {
    /// Seed for every random draw of the run.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Output directory, created if missing.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    /// Report failed numerical checks but exit with status 0.
    #[arg(long)]
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub lenient: bool,
    /// JSON document with the same keys as the flags.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

/// Settings common to every run, after merging.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Run {
    pub seed: u64,
    pub out: PathBuf,
    pub format: Format,
    pub lenient: bool,
}

impl Default for Run {
    fn default() -> Self {
        Self {
            seed: 0,
            out: PathBuf::from("qoptics-out"),
            format: Format::Csv,
            lenient: false,
        }
    }
}

fn object(v: Value, what: &str) -> Result<Map<String, Value>, CliError> {
    match v {
        Value::Object(m) => Ok(m),
        _ => Err(CliError::Config(format!("{what} must be a JSON object"))),
    }
}

fn keys<T: Serialize + Default>() -> BTreeSet<String> {
    match serde_json::to_value(T::default()) {
        Ok(Value::Object(m)) => m.into_iter().map(|(k, _)| k).collect(),
        _ => BTreeSet::new(),
    }
}

/// A fully resolved run: shared settings, typed parameters, and the JSON
/// form embedded in every output file.
pub struct Resolved<P> {
    pub run: Run,
    pub params: P,
    /// Everything needed to repeat the run. The output directory is left
    /// out so that the same run written to two places gives equal files.
    pub embedded: Value,
}

pub fn resolve<P>(
    command: &str,
    common: &CommonArgs,
    flags: &impl Serialize,
) -> Result<Resolved<P>, CliError>
where
    P: Serialize + DeserializeOwned + Default,
{
    let mut merged = match &common.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| {
                CliError::Config(format!("cannot read config {}: {e}", path.display()))
            })?;
            let v: Value = serde_json::from_str(&text).map_err(|e| {
                CliError::Config(format!("config {} is not valid JSON: {e}", path.display()))
            })?;
            object(v, "config file")?
        }
        None => Map::new(),
    };
    if let Some(c) = merged.remove("command") {
        if c.as_str() != Some(command) {
            return Err(CliError::Config(format!(
                "config file is for command {c}, not `{command}`"
            )));
        }
    }
    for overlay in [serde_json::to_value(common), serde_json::to_value(flags)] {
        let overlay = overlay.map_err(|e| CliError::Config(e.to_string()))?;
        merged.extend(object(overlay, "flags")?);
    }

    let run_keys = keys::<Run>();
    let param_keys = keys::<P>();
    if let Some(bad) = merged
        .keys()
        .find(|k| !run_keys.contains(*k) && !param_keys.contains(*k))
    {
        let known: Vec<_> = param_keys
            .iter()
            .chain(&run_keys)
            .map(String::as_str)
            .collect();
        return Err(CliError::Config(format!(
            "unknown key `{bad}` for `{command}`; expected one of {}",
            known.join(", ")
        )));
    }
    let merged = Value::Object(merged);
    let run: Run =
        serde_json::from_value(merged.clone()).map_err(|e| CliError::Config(e.to_string()))?;
    let params: P = serde_json::from_value(merged)
        .map_err(|e| CliError::Config(format!("`{command}`: {e}")))?;

    let mut embedded = Map::new();
    embedded.insert("command".into(), command.into());
    embedded.insert("seed".into(), run.seed.into());
    embedded.insert(
        "format".into(),
        serde_json::to_value(run.format).expect("format serializes"),
    );
    embedded.insert("lenient".into(), run.lenient.into());
    embedded.extend(object(
        serde_json::to_value(&params).map_err(|e| CliError::Config(e.to_string()))?,
        "params",
    )?);
    Ok(Resolved {
        run,
        params,
        embedded: Value::Object(embedded),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Debug, Default, Serialize, Deserialize, PartialEq)]
    #[serde(default)]
    struct P {
        shots: usize,
        state: String,
    }

    #[derive(Serialize)]
    struct Flags {
        #[serde(skip_serializing_if = "Option::is_none")]
        shots: Option<usize>,
    }

    fn common(config: Option<PathBuf>) -> CommonArgs {
        CommonArgs {
            seed: Some(4),
            out: None,
            format: None,
            lenient: false,
            config,
        }
    }

    #[test]
    fn flags_override_file() {
        let dir = std::env::temp_dir().join(format!("qoptics-config-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("c.json");
        fs::write(
            &path,
            r#"{"command": "x", "shots": 5, "state": "vacuum", "seed": 9}"#,
        )
        .unwrap();
        let r: Resolved<P> =
            resolve("x", &common(Some(path.clone())), &Flags { shots: Some(7) }).unwrap();
        assert_eq!(
            r.params,
            P {
                shots: 7,
                state: "vacuum".into()
            }
        );
        assert_eq!(r.run.seed, 4);
        assert!(r.embedded.get("out").is_none());

        fs::write(&path, r#"{"shots": 5, "colour": 1}"#).unwrap();
        let err = resolve::<P>("x", &common(Some(path.clone())), &Flags { shots: None })
            .err()
            .unwrap();
        assert!(err.to_string().contains("colour"));
        fs::write(&path, r#"{"command": "y"}"#).unwrap();
        assert!(resolve::<P>("x", &common(Some(path)), &Flags { shots: None }).is_err());
        fs::remove_dir_all(dir).unwrap();
    }
}
