//! Flat `key=value` scenario files.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::evolve::{DEFAULT_DT, DEFAULT_STRIDE, MAX_DT};
use crate::model::{EnvKind, EnvSpec, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Numeric,
    Analytic,
    /// Numeric rows plus the distance to the closed form at each sample.
    Both,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Numeric => "numeric",
            Mode::Analytic => "analytic",
            Mode::Both => "both",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "numeric" => Ok(Mode::Numeric),
            "analytic" => Ok(Mode::Analytic),
            "both" => Ok(Mode::Both),
            other => Err(Error::Config(format!("unknown mode `{other}` (numeric|analytic|both)"))),
        }
    }
}

/// Sweep axis parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AxisName {
    Delta,
    D,
    Gamma,
    P,
    T,
}

impl AxisName {
    pub fn as_str(&self) -> &'static str {
        match self {
            AxisName::Delta => "delta",
            AxisName::D => "d",
            AxisName::Gamma => "gamma",
            AxisName::P => "p",
            AxisName::T => "t",
        }
    }
}

impl FromStr for AxisName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "delta" => Ok(AxisName::Delta),
            "d" => Ok(AxisName::D),
            "gamma" => Ok(AxisName::Gamma),
            "p" | "p0" => Ok(AxisName::P),
            "t" => Ok(AxisName::T),
            other => Err(Error::Config(format!("unknown axis `{other}` (delta|d|gamma|p|t)"))),
        }
    }
}

/// `count` evenly spaced values from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub name: AxisName,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(name: AxisName, start: f64, stop: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::Config(format!(
                "axis {} needs count >= 2, got {count}",
                name.as_str()
            )));
        }
        if !start.is_finite() || !stop.is_finite() {
            return Err(Error::Config(format!("axis {} has a non-finite bound", name.as_str())));
        }
        if name == AxisName::T && (start < 0.0 || stop < start) {
            return Err(Error::Config("axis t must satisfy 0 <= start <= stop".into()));
        }
        Ok(Self {
            name,
            start,
            stop,
            count,
        })
    }

    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.count {
            return self.stop;
        }
        self.start + (self.stop - self.start) * i as f64 / (self.count - 1) as f64
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.value(i)).collect()
    }
}

impl FromStr for Axis {
    type Err = Error;

    /// `name:start:stop:count`, e.g. `delta:0:1:21`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let [name, start, stop, count] = parts[..] else {
            return Err(Error::Config(format!("axis `{s}` is not name:start:stop:count")));
        };
        let count = count
            .parse::<usize>()
            .map_err(|_| Error::Config(format!("axis count `{count}` is not a positive integer")))?;
        Axis::new(
            name.parse()?,
            parse_f64("axis start", start)?,
            parse_f64("axis stop", stop)?,
            count,
        )
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}:{}", self.name.as_str(), self.start, self.stop, self.count)
    }
}

/// Parsed config with defaults filled in. Ranges are checked later, by
/// [`Config::scenario`] and friends, so CLI overrides can fix a bad file value.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub p0: f64,
    pub delta: f64,
    pub d: f64,
    pub gamma: f64,
    pub env: EnvKind,
    pub t_end: f64,
    pub dt: f64,
    pub stride: usize,
    pub mode: Mode,
    /// `None` writes to stdout.
    pub out: Option<PathBuf>,
    pub axis1: Option<Axis>,
    pub axis2: Option<Axis>,
    pub d_values: Vec<f64>,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            p0: 0.5,
            delta: 0.0,
            d: 0.0,
            gamma: 0.0,
            env: EnvKind::Closed,
            t_end: 10.0,
            dt: DEFAULT_DT,
            stride: DEFAULT_STRIDE,
            mode: Mode::Numeric,
            out: None,
            axis1: None,
            axis2: None,
            d_values: vec![1.0, 2.0, 3.0, 5.0],
        }
    }
}

fn parse_f64(key: &str, value: &str) -> Result<f64> {
    let v = value
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::Config(format!("{key}: `{value}` is not a number")))?;
    if !v.is_finite() {
        return Err(Error::Config(format!("{key}: `{value}` is not finite")));
    }
    Ok(v)
}

impl Config {
    /// Parses config text. Blank lines and `#` comments are skipped; a later
    /// line overrides an earlier one.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Config::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config(format!(
                    "line {}: expected key=value, got `{line}`",
                    n + 1
                )));
            };
            cfg.set(key.trim(), value.trim())
                .map_err(|e| Error::Config(format!("line {}: {}", n + 1, strip_prefix(&e))))?;
        }
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| Error::Config(format!("{}: {}", path.display(), strip_prefix(&e))))
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "p0" => self.p0 = parse_f64(key, value)?,
            "delta" => self.delta = parse_f64(key, value)?,
            "d" => self.d = parse_f64(key, value)?,
            "gamma" => self.gamma = parse_f64(key, value)?,
            "env" => self.env = value.parse()?,
            "t_end" => self.t_end = parse_f64(key, value)?,
            "dt" => self.dt = parse_f64(key, value)?,
            "stride" => {
                self.stride = value
                    .parse()
                    .map_err(|_| Error::Config(format!("stride: `{value}` is not a positive integer")))?
            }
            "mode" => self.mode = value.parse()?,
            "out" => {
                self.out = if value.is_empty() || value == "-" {
                    None
                } else {
                    Some(PathBuf::from(value))
                }
            }
            "axis1" => self.axis1 = Some(value.parse()?),
            "axis2" => self.axis2 = Some(value.parse()?),
            "d_values" => {
                self.d_values = value.split(',').map(|v| parse_f64(key, v)).collect::<Result<_>>()?;
            }
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    pub fn params(&self) -> Result<ModelParams> {
        ModelParams::new(self.delta, self.d).map_err(as_config)
    }

    pub fn env_spec(&self) -> Result<EnvSpec> {
        EnvSpec::new(self.env, self.gamma).map_err(as_config)
    }

    pub fn scenario(&self) -> Result<Scenario> {
        Scenario::new(
            self.p0,
            self.params()?,
            self.env_spec()?,
            self.t_end,
            self.dt,
            self.stride,
            self.out.clone(),
        )
    }
}

fn strip_prefix(e: &Error) -> String {
    match e {
        Error::Config(msg) => msg.clone(),
        other => other.to_string(),
    }
}

fn as_config(e: Error) -> Error {
    match e {
        Error::Config(_) => e,
        other => Error::Config(other.to_string()),
    }
}

/// One trajectory's worth of inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    /// Werner parameter of the initial state.
    pub p0: f64,
    pub params: ModelParams,
    pub env: EnvSpec,
    pub t_end: f64,
    pub dt: f64,
    pub stride: usize,
    pub output_path: Option<PathBuf>,
}

impl Scenario {
    pub fn new(
        p0: f64,
        params: ModelParams,
        env: EnvSpec,
        t_end: f64,
        dt: f64,
        stride: usize,
        output_path: Option<PathBuf>,
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&p0) {
            return Err(Error::Config(format!("p0 = {p0} is outside [0, 1]")));
        }
        if !(t_end > 0.0 && t_end.is_finite()) {
            return Err(Error::Config(format!("t_end = {t_end} must be positive")));
        }
        if !(dt > 0.0 && dt <= MAX_DT) {
            return Err(Error::Config(format!("dt = {dt} is outside (0, {MAX_DT}]")));
        }
        if stride < 1 {
            return Err(Error::Config("stride must be >= 1".into()));
        }
        Ok(Self {
            p0,
            params,
            env,
            t_end,
            dt,
            stride,
            output_path,
        })
    }
}
