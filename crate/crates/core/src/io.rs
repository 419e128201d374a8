//! Plain CSV tables with `#`-prefixed metadata lines.
//!
//! Floats are written in `{:.16e}` form, which round-trips every `f64`
//! exactly and keeps reruns byte-identical.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use num_complex::Complex64;

use crate::detection::{QuadratureSamples, TomographyDataset};
use crate::error::{Error, Result};
use crate::phase_space::{PhotonDistribution, WignerGrid};
use crate::spectra::{ComplexTimeSeries, SpectralDensity};

/// Canonical text form of a float.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// A header row plus string cells.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub metadata: BTreeMap<String, String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|s| s.to_string()).collect(),
            ..Default::default()
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn push_floats(&mut self, row: &[f64]) {
        self.push(row.iter().map(|&v| fmt_f64(v)).collect());
    }

    /// Writes metadata as `# key: value` lines, then the header and rows.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        for (k, v) in &self.metadata {
            writeln!(w, "# {k}: {v}")?;
        }
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("tables hold UTF-8")
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut table = Table::default();
        let mut header = None;
        for (lineno, line) in r.lines().enumerate() {
            let line = line?;
            let line = line.trim_end();
            if let Some(meta) = line.strip_prefix('#') {
                if let Some((k, v)) = meta.split_once(':') {
                    table
                        .metadata
                        .insert(k.trim().to_string(), v.trim().to_string());
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let cells: Vec<String> = line.split(',').map(|s| s.trim().to_string()).collect();
            match header {
                None => header = Some(cells),
                Some(ref h) => {
                    if cells.len() != h.len() {
                        return Err(Error::Parse(format!(
                            "line {}: expected {} fields, found {}",
                            lineno + 1,
                            h.len(),
                            cells.len()
                        )));
                    }
                    table.rows.push(cells);
                }
            }
        }
        table.columns = header.ok_or_else(|| Error::Parse("missing header row".into()))?;
        Ok(table)
    }

    fn column(&self, name: &str) -> Result<usize> {
        self.columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::Parse(format!("missing column '{name}'")))
    }

    /// Parse a column as floats.
    pub fn floats(&self, name: &str) -> Result<Vec<f64>> {
        let k = self.column(name)?;
        self.rows.iter().map(|r| parse_f64(&r[k])).collect()
    }

    fn expect_columns(&self, names: &[&str]) -> Result<()> {
        if self
            .columns
            .iter()
            .map(String::as_str)
            .eq(names.iter().copied())
        {
            Ok(())
        } else {
            Err(Error::Parse(format!(
                "expected columns {names:?}, found {:?}",
                self.columns
            )))
        }
    }
}

pub fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("not a number: '{s}'")))
}

/// `t,re,im`
pub fn series_table(series: &ComplexTimeSeries) -> Table {
    let mut t = Table::new(&["t", "re", "im"]);
    t.metadata.insert("dt".into(), fmt_f64(series.dt()));
    t.metadata
        .insert("carrier_freq".into(), fmt_f64(series.carrier_freq()));
    for (n, z) in series.samples().iter().enumerate() {
        t.push_floats(&[series.time(n), z.re, z.im]);
    }
    t
}

pub fn series_from_table(t: &Table) -> Result<ComplexTimeSeries> {
    t.expect_columns(&["t", "re", "im"])?;
    let times = t.floats("t")?;
    if times.len() < 2 {
        return Err(Error::TooShort {
            len: times.len(),
            min: 2,
        });
    }
    let dt = match t.metadata.get("dt") {
        Some(v) => parse_f64(v)?,
        None => times[1] - times[0],
    };
    let carrier = t
        .metadata
        .get("carrier_freq")
        .map(|v| parse_f64(v))
        .transpose()?
        .unwrap_or(0.0);
    let samples = t
        .floats("re")?
        .into_iter()
        .zip(t.floats("im")?)
        .map(|(a, b)| Complex64::new(a, b))
        .collect();
    ComplexTimeSeries::with_start(samples, dt, times[0], carrier)
}

/// `freq_hz,value`
pub fn spectrum_table(sd: &SpectralDensity) -> Table {
    let mut t = Table::new(&["freq_hz", "value"]);
    t.metadata.insert("kind".into(), sd.kind().name().into());
    for (f, v) in sd.freqs().iter().zip(sd.values()) {
        t.push_floats(&[*f, *v]);
    }
    t
}

/// Matrix layout: header `x\p,p0,p1,…`, then one row per `x`.
pub fn wigner_table(grid: &WignerGrid) -> Table {
    let mut columns = vec!["x\\p".to_string()];
    columns.extend(grid.p_axis().iter().map(|&p| fmt_f64(p)));
    let mut t = Table {
        columns,
        ..Default::default()
    };
    let np = grid.p_axis().len();
    for (i, &x) in grid.x_axis().iter().enumerate() {
        let mut row = vec![fmt_f64(x)];
        row.extend(
            grid.values()[i * np..(i + 1) * np]
                .iter()
                .map(|&v| fmt_f64(v)),
        );
        t.push(row);
    }
    t
}

pub fn wigner_from_table(t: &Table) -> Result<WignerGrid> {
    if t.columns.first().map(String::as_str) != Some("x\\p") {
        return Err(Error::Parse(
            "Wigner matrix must start with an 'x\\p' header cell".into(),
        ));
    }
    let p = t.columns[1..]
        .iter()
        .map(|s| parse_f64(s))
        .collect::<Result<Vec<_>>>()?;
    let mut x = Vec::with_capacity(t.rows.len());
    let mut values = Vec::with_capacity(t.rows.len() * p.len());
    for row in &t.rows {
        x.push(parse_f64(&row[0])?);
        for cell in &row[1..] {
            values.push(parse_f64(cell)?);
        }
    }
    WignerGrid::new(x, p, values)
}

/// `n,prob`
pub fn distribution_table(pd: &PhotonDistribution) -> Table {
    let mut t = Table::new(&["n", "prob"]);
    t.metadata.insert("tail".into(), fmt_f64(pd.tail()));
    for (n, p) in pd.probs().iter().enumerate() {
        t.push(vec![n.to_string(), fmt_f64(*p)]);
    }
    t
}

/// `theta,value`, one row per sample.
pub fn homodyne_table(scans: &[QuadratureSamples]) -> Table {
    let mut t = Table::new(&["theta", "value"]);
    for s in scans {
        let theta = fmt_f64(s.theta);
        for v in &s.values {
            t.push(vec![theta.clone(), fmt_f64(*v)]);
        }
    }
    t
}

/// Groups `theta,value` rows by angle, in order of first appearance.
pub fn homodyne_from_table(t: &Table) -> Result<Vec<QuadratureSamples>> {
    t.expect_columns(&["theta", "value"])?;
    let mut scans: Vec<QuadratureSamples> = Vec::new();
    for (theta, v) in t.floats("theta")?.into_iter().zip(t.floats("value")?) {
        match scans.iter_mut().find(|s| s.theta == theta) {
            Some(s) => s.values.push(v),
            None => scans.push(QuadratureSamples::new(theta, vec![v])?),
        }
    }
    Ok(scans)
}

pub fn dataset_from_table(t: &Table) -> Result<TomographyDataset> {
    TomographyDataset::new(homodyne_from_table(t)?)
}

/// `x,p`
pub fn heterodyne_table(samples: &[[f64; 2]]) -> Table {
    let mut t = Table::new(&["x", "p"]);
    for s in samples {
        t.push_floats(s);
    }
    t
}

/// `count`
pub fn counts_table(counts: &[u64]) -> Table {
    let mut t = Table::new(&["count"]);
    for c in counts {
        t.push(vec![c.to_string()]);
    }
    t
}
