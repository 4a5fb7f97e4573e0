//! Experiment configuration: a TOML file, optionally overridden by flags.
//!
//! ```toml
//! experiment = "probdist"
//! steps = 100
//!
//! [walk]
//! variant = "split-step"
//! theta1 = "pi/2"
//! theta2_minus = "-3pi/4"
//! theta2_plus = "3pi/4"
//!
//! [channel]
//! kind = "bitflip"
//! p = 0.05
//! ```

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{parse_angle, parse_name, GridAxis, Side, Variant, WalkParams};
use crate::spectral::{DEFAULT_EDGE_TOL, DEFAULT_INTERFACE_WINDOW, DEFAULT_K_SAMPLES};
use crate::state::{ChannelKind, NoiseChannel};
use crate::walk::{Frame, OriginSide};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Probdist,
    NegMap,
    NegTime,
    NoiseCompare,
    PhaseMap,
    EdgeSpectrum,
    Validate,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Probdist => "probdist",
            ExperimentKind::NegMap => "neg-map",
            ExperimentKind::NegTime => "neg-time",
            ExperimentKind::NoiseCompare => "noise-compare",
            ExperimentKind::PhaseMap => "phase-map",
            ExperimentKind::EdgeSpectrum => "edge-spectrum",
            ExperimentKind::Validate => "validate",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An angle written either as a number of radians or as a pi expression.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AngleInput {
    Radians(f64),
    Expr(String),
}

impl AngleInput {
    pub fn radians(&self) -> Result<f64> {
        match self {
            AngleInput::Radians(v) => Ok(*v),
            AngleInput::Expr(s) => parse_angle(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct WalkConfig {
    #[serde(default)]
    pub variant: Variant,
    /// Force theta4 = theta2 for the double split-step walk.
    #[serde(default)]
    pub tie_theta4: bool,
    /// Which domain owns the site x = 0.
    #[serde(default = "default_origin")]
    pub origin: String,
    /// `theta1`, `theta2_minus`, `theta2_plus`, ...
    #[serde(flatten)]
    pub angles: BTreeMap<String, AngleInput>,
}

fn default_origin() -> String {
    "plus".into()
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig {
            variant: Variant::SplitStep,
            tie_theta4: false,
            origin: default_origin(),
            angles: BTreeMap::new(),
        }
    }
}

impl WalkConfig {
    /// Angles are applied uniform ones first, so `theta2_minus` refines `theta2`.
    pub fn params(&self) -> Result<WalkParams> {
        let mut p = WalkParams::new(self.variant);
        p.tie_theta4 = self.tie_theta4;
        p.origin = match self.origin.as_str() {
            "plus" => OriginSide::Plus,
            "minus" => OriginSide::Minus,
            other => {
                return Err(Error::config(
                    "walk.origin",
                    format!("expected 'plus' or 'minus', got '{other}'"),
                ))
            }
        };
        let (uniform, sided): (Vec<_>, Vec<_>) = self
            .angles
            .iter()
            .partition(|(k, _)| k.len() == "theta1".len());
        for (name, v) in uniform.into_iter().chain(sided) {
            let field = format!("walk.{name}");
            let rad = v
                .radians()
                .map_err(|e| Error::config(&field, e.to_string()))?;
            p.set(name, rad)
                .map_err(|e| Error::config(&field, e.to_string()))?;
        }
        Ok(p)
    }
}

/// A complex amplitude given as a real number or as `[re, im]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexInput {
    Real(f64),
    Pair([f64; 2]),
}

impl ComplexInput {
    pub fn value(self) -> C64 {
        match self {
            ComplexInput::Real(re) => C64::new(re, 0.0),
            ComplexInput::Pair([re, im]) => C64::new(re, im),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InitialConfig {
    pub alpha: ComplexInput,
    pub beta: ComplexInput,
}

impl Default for InitialConfig {
    fn default() -> Self {
        InitialConfig {
            alpha: ComplexInput::Real(FRAC_1_SQRT_2),
            beta: ComplexInput::Real(FRAC_1_SQRT_2),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct ChannelConfig {
    #[serde(default = "default_kind")]
    pub kind: ChannelKind,
    #[serde(default)]
    pub p: f64,
    /// Noise strengths for `neg-time`; falls back to `[p]`.
    #[serde(default)]
    pub p_values: Vec<f64>,
    /// Channels for `noise-compare`; falls back to all five.
    #[serde(default)]
    pub kinds: Vec<ChannelKind>,
}

fn default_kind() -> ChannelKind {
    ChannelKind::None
}

impl Default for ChannelConfig {
    fn default() -> Self {
        ChannelConfig {
            kind: ChannelKind::None,
            p: 0.0,
            p_values: vec![],
            kinds: vec![],
        }
    }
}

impl ChannelConfig {
    pub fn channel(&self) -> Result<NoiseChannel> {
        let p = if self.kind == ChannelKind::None {
            0.0
        } else {
            self.p
        };
        NoiseChannel::new(self.kind, p).map_err(|e| Error::config("channel.p", e.to_string()))
    }

    pub fn strengths(&self) -> Vec<f64> {
        if self.p_values.is_empty() {
            vec![self.p]
        } else {
            self.p_values.clone()
        }
    }

    pub fn compare_kinds(&self) -> Vec<ChannelKind> {
        if self.kinds.is_empty() {
            ChannelKind::ALL.to_vec()
        } else {
            self.kinds.clone()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
    Svg,
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            "svg" => Ok(OutputFormat::Svg),
            _ => Err(Error::config(
                "output.format",
                format!("expected csv, json or svg, got '{s}'"),
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputConfig {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    #[serde(default)]
    pub format: OutputFormat,
    /// File stem; defaults to the experiment name.
    #[serde(default)]
    pub name: Option<String>,
}

fn default_dir() -> PathBuf {
    PathBuf::from("out")
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            dir: default_dir(),
            format: OutputFormat::Csv,
            name: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct SpectrumConfig {
    #[serde(default = "default_ring")]
    pub ring_sites: usize,
    #[serde(default = "default_k")]
    pub k_samples: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_window")]
    pub interface_window: usize,
    /// Frame for the chiral check; the walk's natural frame when absent.
    #[serde(default)]
    pub frame: Option<Frame>,
}

fn default_ring() -> usize {
    64
}
fn default_k() -> usize {
    DEFAULT_K_SAMPLES
}
fn default_tol() -> f64 {
    DEFAULT_EDGE_TOL
}
fn default_window() -> usize {
    DEFAULT_INTERFACE_WINDOW
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        SpectrumConfig {
            ring_sites: default_ring(),
            k_samples: default_k(),
            tol: default_tol(),
            interface_window: default_window(),
            frame: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default)]
    pub walk: WalkConfig,
    #[serde(default)]
    pub initial: InitialConfig,
    #[serde(default)]
    pub channel: ChannelConfig,
    #[serde(default)]
    pub grid: Vec<GridAxis>,
    /// Step counts at which `noise-compare` records distributions.
    #[serde(default)]
    pub checkpoints: Vec<usize>,
    #[serde(default)]
    pub spectrum: SpectrumConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

fn default_steps() -> usize {
    100
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind) -> Self {
        ExperimentConfig {
            experiment,
            steps: default_steps(),
            walk: WalkConfig::default(),
            initial: InitialConfig::default(),
            channel: ChannelConfig::default(),
            grid: vec![],
            checkpoints: vec![],
            spectrum: SpectrumConfig::default(),
            output: OutputConfig::default(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text)
            .map_err(|e| Error::config("config", e.to_string().trim_end().to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(path.display().to_string(), e.to_string()))?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config { message, .. } => Error::config(path.display().to_string(), message),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).unwrap_or_default()
    }

    pub fn set_angle(&mut self, name: &str, value: &str) -> Result<()> {
        let key = name.replace('-', "_");
        parse_angle(value).map_err(|e| Error::config(format!("--{name}"), e.to_string()))?;
        let (idx, side) =
            parse_name(&key).map_err(|e| Error::config(format!("--{name}"), e.to_string()))?;
        // drop every spelling of the slots this value overrides
        self.walk.angles.retain(|k, _| match parse_name(k) {
            Ok((i, s)) => i != idx || (side != Side::Both && s != side),
            Err(_) => true,
        });
        self.walk
            .angles
            .insert(key, AngleInput::Expr(value.to_string()));
        Ok(())
    }

    pub fn initial_amplitudes(&self) -> (C64, C64) {
        (self.initial.alpha.value(), self.initial.beta.value())
    }

    pub fn checkpoints(&self) -> Vec<usize> {
        if self.checkpoints.is_empty() {
            vec![self.steps / 2, self.steps]
        } else {
            self.checkpoints.clone()
        }
    }

    /// Checks every field that can be checked without running anything.
    pub fn validate(&self) -> Result<WalkParams> {
        let needs_steps = !matches!(
            self.experiment,
            ExperimentKind::PhaseMap | ExperimentKind::EdgeSpectrum | ExperimentKind::Validate
        );
        if needs_steps && self.steps < 1 && self.experiment != ExperimentKind::Probdist {
            return Err(Error::config("steps", "must be at least 1"));
        }
        let params = self.walk.params()?;
        params
            .to_spec()
            .map_err(|e| Error::config("walk", e.to_string()))?;
        let (a, b) = self.initial_amplitudes();
        let norm = a.norm_sqr() + b.norm_sqr();
        if (norm - 1.0).abs() > crate::state::NORM_TOL {
            return Err(Error::config(
                "initial",
                format!("|alpha|^2 + |beta|^2 = {norm}, expected 1"),
            ));
        }
        self.channel.channel()?;
        for &p in &self.channel.p_values {
            NoiseChannel::new(ChannelKind::BitFlip, p)
                .map_err(|e| Error::config("channel.p-values", e.to_string()))?;
        }
        for (i, axis) in self.grid.iter().enumerate() {
            let field = format!("grid[{i}]");
            if axis.points < 1 {
                return Err(Error::config(field, "points must be at least 1"));
            }
            let mut probe = params.clone();
            for v in [axis.min, axis.max] {
                probe
                    .set(&axis.name, v)
                    .map_err(|e| Error::config(&field, e.to_string()))?;
                probe
                    .to_spec()
                    .map_err(|e| Error::config(&field, e.to_string()))?;
            }
        }
        if matches!(
            self.experiment,
            ExperimentKind::NegMap | ExperimentKind::PhaseMap
        ) && self.grid.len() != 2
        {
            return Err(Error::config(
                "grid",
                format!("{} needs exactly two axes", self.experiment),
            ));
        }
        if self.experiment == ExperimentKind::NoiseCompare {
            let cps = self.checkpoints();
            if cps.contains(&0) || cps.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::config(
                    "checkpoints",
                    "must be positive and strictly increasing",
                ));
            }
        }
        Ok(params)
    }

    pub fn stem(&self) -> String {
        self.output
            .name
            .clone()
            .unwrap_or_else(|| self.experiment.name().to_string())
    }
}
