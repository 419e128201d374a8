//! Table writing and the pass/fail check log.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use qoptics::io::{fmt_f64, Table};
use serde_json::{json, Map, Value};

use crate::config::{Format, Resolved};
use crate::error::CliError;

/// Writes every table of a run into one directory, stamping each with the
/// resolved configuration.
pub struct Output {
    dir: PathBuf,
    format: Format,
    config: String,
    seed: u64,
    command: String,
    checks: Vec<Check>,
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub target: String,
    pub pass: bool,
}

impl Output {
    pub fn new<P>(command: &str, resolved: &Resolved<P>) -> Result<Self, CliError> {
        fs::create_dir_all(&resolved.run.out)?;
        Ok(Self {
            dir: resolved.run.out.clone(),
            format: resolved.run.format,
            config: resolved.embedded.to_string(),
            seed: resolved.run.seed,
            command: command.to_string(),
            checks: Vec::new(),
        })
    }

    pub fn write(&self, name: &str, mut table: Table) -> Result<(), CliError> {
        table
            .metadata
            .insert("command".into(), self.command.clone());
        table.metadata.insert("config".into(), self.config.clone());
        table.metadata.insert("seed".into(), self.seed.to_string());
        table
            .metadata
            .insert("version".into(), env!("CARGO_PKG_VERSION").into());
        let path = self.dir.join(format!("{name}.{}", self.format.extension()));
        let mut w = BufWriter::new(File::create(&path)?);
        match self.format {
            Format::Csv => table.write_csv(&mut w)?,
            Format::Json => {
                serde_json::to_writer_pretty(&mut w, &table_json(&table))
                    .map_err(std::io::Error::from)?;
                writeln!(w)?;
            }
        }
        w.flush()?;
        println!("wrote {}", path.display());
        Ok(())
    }

    /// Record a check. `pass` is decided by the caller.
    pub fn check(&mut self, name: &str, value: f64, target: impl Into<String>, pass: bool) {
        // Names may embed state specs such as `coherent:1,1`.
        let name = name.replace(',', ";");
        self.checks.push(Check {
            name,
            value,
            target: target.into().replace(',', ";"),
            pass,
        });
    }

    /// Write `checks` and turn failures into an error unless the run is
    /// lenient.
    pub fn finish(self, lenient: bool) -> Result<(), CliError> {
        let mut t = Table::new(&["check", "value", "target", "pass"]);
        for c in &self.checks {
            t.push(vec![
                c.name.clone(),
                fmt_f64(c.value),
                c.target.clone(),
                c.pass.to_string(),
            ]);
            println!(
                "{}: {} ({:.6e} {})",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.value,
                c.target
            );
        }
        self.write("checks", t)?;
        let failed: Vec<&str> = self
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.as_str())
            .collect();
        if failed.is_empty() || lenient {
            Ok(())
        } else {
            Err(CliError::Numeric(format!(
                "checks failed: {}",
                failed.join(", ")
            )))
        }
    }
}

/// JSON mirror of a table: numeric cells become numbers, others stay
/// strings.
fn table_json(t: &Table) -> Value {
    let cell = |s: &String| match s.parse::<f64>() {
        Ok(v) if v.is_finite() => json!(v),
        _ => json!(s),
    };
    let metadata: Map<String, Value> = t
        .metadata
        .iter()
        .map(|(k, v)| {
            // The embedded config is itself JSON; keep it structured.
            let v = serde_json::from_str::<Value>(v)
                .ok()
                .filter(Value::is_object)
                .unwrap_or_else(|| json!(v));
            (k.clone(), v)
        })
        .collect();
    json!({
        "metadata": metadata,
        "columns": t.columns,
        "rows": t.rows.iter().map(|r| r.iter().map(cell).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}
