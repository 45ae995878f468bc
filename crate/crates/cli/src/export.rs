//! Trajectory tables as CSV or JSON.
//!
//! Floats use Rust's shortest round-trip formatting, so re-reading a file
//! reproduces the samples bit for bit.

use std::f64::consts::PI;
use std::io::{self, Write};

use serde::Serialize;
use sl2mag_core::hyperbolic::cayley_unchecked;

pub const COLUMNS: [&str; 8] = ["s", "x", "y", "theta_unwrapped", "theta_mod2pi", "U", "disk_u", "disk_v"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Row {
    pub s: f64,
    pub x: f64,
    pub y: f64,
    pub theta_unwrapped: f64,
    pub theta_mod2pi: f64,
    #[serde(rename = "U")]
    pub u: f64,
    pub disk_u: f64,
    pub disk_v: f64,
}

impl Row {
    pub fn new(s: f64, x: f64, y: f64, theta: f64, u: f64) -> Self {
        let (disk_u, disk_v) = cayley_unchecked(x, y);
        Self { s, x, y, theta_unwrapped: theta, theta_mod2pi: theta.rem_euclid(2.0 * PI), u, disk_u, disk_v }
    }

    pub fn values(&self) -> [f64; 8] {
        [self.s, self.x, self.y, self.theta_unwrapped, self.theta_mod2pi, self.u, self.disk_u, self.disk_v]
    }

    #[cfg(test)]
    pub fn from_values(v: [f64; 8]) -> Self {
        Self {
            s: v[0],
            x: v[1],
            y: v[2],
            theta_unwrapped: v[3],
            theta_mod2pi: v[4],
            u: v[5],
            disk_u: v[6],
            disk_v: v[7],
        }
    }
}

/// Ordered `key = value` metadata.
pub type Metadata = Vec<(String, serde_json::Value)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format '{other}' (expected csv or json)")),
        }
    }
}

/// Shortest round-trip text; exponent form outside `[1e-5, 1e16)`.
pub fn fmt_float(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || !a.is_finite() || (1e-5..1e16).contains(&a) {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

fn meta_text(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn write_csv<W: Write>(out: &mut W, meta: &Metadata, rows: &[Row]) -> io::Result<()> {
    for (k, v) in meta {
        writeln!(out, "# {k} = {}", meta_text(v))?;
    }
    writeln!(out, "{}", COLUMNS.join(","))?;
    for r in rows {
        let fields: Vec<String> = r.values().iter().map(|&v| fmt_float(v)).collect();
        writeln!(out, "{}", fields.join(","))?;
    }
    Ok(())
}

pub fn write_json<W: Write>(out: &mut W, meta: &Metadata, rows: &[Row]) -> io::Result<()> {
    let metadata: serde_json::Map<String, serde_json::Value> = meta.iter().cloned().collect();
    let doc = serde_json::json!({ "metadata": metadata, "columns": COLUMNS, "rows": rows });
    serde_json::to_writer_pretty(&mut *out, &doc)?;
    writeln!(out)
}

pub fn write<W: Write>(out: &mut W, format: Format, meta: &Metadata, rows: &[Row]) -> io::Result<()> {
    match format {
        Format::Csv => write_csv(out, meta, rows),
        Format::Json => write_json(out, meta, rows),
    }
}

/// Reads rows back from CSV written by [`write_csv`], skipping metadata.
#[cfg(test)]
pub fn read_csv(text: &str) -> Result<Vec<Row>, String> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    match lines.next() {
        Some(h) if h == COLUMNS.join(",") => {}
        other => return Err(format!("unexpected header {other:?}")),
    }
    lines
        .map(|line| {
            let vals: Vec<f64> =
                line.split(',').map(|f| f.parse::<f64>().map_err(|e| format!("{f}: {e}"))).collect::<Result<_, _>>()?;
            let arr: [f64; 8] = vals.try_into().map_err(|_| format!("wrong field count in '{line}'"))?;
            Ok(Row::from_values(arr))
        })
        .collect()
}
