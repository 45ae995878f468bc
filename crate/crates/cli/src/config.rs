//! Optional TOML config file and angle parsing. Command-line flags take precedence.

use std::f64::consts::PI;
use std::path::Path;

use serde::Deserialize;

/// Parses `1.2`, `pi`, `-pi/2`, `2pi/5`, `3*pi/4`, `0.5pi`.
pub fn parse_angle(text: &str) -> Result<f64, String> {
    let t: String = text.trim().to_lowercase().replace('π', "pi").chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse angle '{text}'");
    let value = match t.find("pi") {
        None => t.parse::<f64>().map_err(|_| bad())?,
        Some(idx) => {
            let coef = t[..idx].trim_end_matches('*');
            let coef = match coef {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => c.parse::<f64>().map_err(|_| bad())?,
            };
            let rest = &t[idx + 2..];
            let den = match rest.strip_prefix('/') {
                None if rest.is_empty() => 1.0,
                None => return Err(bad()),
                Some(d) => d.parse::<f64>().map_err(|_| bad())?,
            };
            if den == 0.0 {
                return Err(bad());
            }
            coef * PI / den
        }
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

/// An angle given either as a number or as text such as `"2pi/5"`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum AngleValue {
    Number(f64),
    Text(String),
}

impl AngleValue {
    pub fn resolve(&self) -> Result<f64, String> {
        match self {
            AngleValue::Number(v) => Ok(*v),
            AngleValue::Text(s) => parse_angle(s),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegrateFile {
    pub q: Option<f64>,
    pub sigma: Option<AngleValue>,
    pub x0: Option<f64>,
    pub y0: Option<f64>,
    pub theta0: Option<AngleValue>,
    pub u0: Option<AngleValue>,
    pub span: Option<f64>,
    pub periods: Option<f64>,
    pub samples: Option<usize>,
    pub format: Option<String>,
    pub output: Option<String>,
    pub oracle: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanFile {
    pub m_max: Option<u32>,
    pub k_max: Option<u32>,
    pub sigmas: Option<Vec<AngleValue>>,
    pub output: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiguresFile {
    pub ids: Option<Vec<String>>,
    pub output_dir: Option<String>,
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyFile {
    pub suites: Option<Vec<String>>,
    pub samples: Option<usize>,
    pub trajectories: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub threads: Option<usize>,
    #[serde(default)]
    pub integrate: IntegrateFile,
    #[serde(default, rename = "scan-periodic")]
    pub scan: ScanFile,
    #[serde(default)]
    pub figures: FiguresFile,
    #[serde(default)]
    pub verify: VerifyFile,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
    }
}

/// Flag value if given, else the file value.
pub fn angle_or(flag: Option<&str>, file: Option<&AngleValue>) -> Result<Option<f64>, String> {
    match (flag, file) {
        (Some(s), _) => parse_angle(s).map(Some),
        (None, Some(v)) => v.resolve().map(Some),
        (None, None) => Ok(None),
    }
}
