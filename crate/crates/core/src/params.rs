//! Named walk parameters, grid axes and angle expressions such as `-3pi/4`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::walk::{Angle, CoinProfile, OriginSide, WalkSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Standard,
    #[default]
    SplitStep,
    DoubleSplitStep,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Standard => "standard",
            Variant::SplitStep => "split-step",
            Variant::DoubleSplitStep => "double-split-step",
        }
    }

    pub fn coin_count(self) -> usize {
        match self {
            Variant::Standard => 1,
            Variant::SplitStep => 2,
            Variant::DoubleSplitStep => 4,
        }
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(Variant::Standard),
            "split-step" | "split" => Ok(Variant::SplitStep),
            "double-split-step" | "double-split" => Ok(Variant::DoubleSplitStep),
            _ => Err(Error::config(
                "walk.variant",
                format!("unknown variant '{s}'"),
            )),
        }
    }
}

/// Angles left (`minus`) and right (`plus`) of the origin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, Default)]
pub struct SidePair {
    pub minus: f64,
    pub plus: f64,
}

impl SidePair {
    pub fn uniform(theta: f64) -> Self {
        SidePair {
            minus: theta,
            plus: theta,
        }
    }

    fn profile(&self, origin: OriginSide) -> Result<CoinProfile> {
        if self.minus == self.plus {
            Ok(CoinProfile::Uniform(Angle::new(self.minus)?))
        } else {
            Ok(CoinProfile::TwoDomain {
                minus: Angle::new(self.minus)?,
                plus: Angle::new(self.plus)?,
                origin,
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Side {
    Both,
    Minus,
    Plus,
}

/// Parses `theta2`, `theta2-`, `theta2+`, `theta2_minus`, `theta2_plus`.
pub(crate) fn parse_name(name: &str) -> Result<(usize, Side)> {
    let bad = || Error::config("parameter", format!("unknown parameter '{name}'"));
    let rest = name.strip_prefix("theta").ok_or_else(bad)?;
    let (digit, suffix) = rest.split_at(rest.chars().next().map_or(0, char::len_utf8));
    let idx: usize = digit.parse().map_err(|_| bad())?;
    if !(1..=4).contains(&idx) {
        return Err(bad());
    }
    let side = match suffix {
        "" => Side::Both,
        "-" | "_minus" | "-minus" | "m" => Side::Minus,
        "+" | "_plus" | "-plus" | "p" => Side::Plus,
        _ => return Err(bad()),
    };
    Ok((idx - 1, side))
}

/// Every coin angle of a walk, addressable by name for sweeps.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WalkParams {
    pub variant: Variant,
    pub theta: [SidePair; 4],
    /// Force `theta4 = theta2` on both sides (the chiral configuration).
    pub tie_theta4: bool,
    #[serde(skip)]
    pub origin: OriginSide,
}

impl WalkParams {
    pub fn new(variant: Variant) -> Self {
        WalkParams {
            variant,
            theta: [SidePair::default(); 4],
            tie_theta4: false,
            origin: OriginSide::Plus,
        }
    }

    pub fn with(mut self, name: &str, value: f64) -> Result<Self> {
        self.set(name, value)?;
        Ok(self)
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        let (i, side) = parse_name(name)?;
        if i >= self.variant.coin_count() {
            return Err(Error::config(
                "parameter",
                format!(
                    "'{name}' does not exist for the {} walk",
                    self.variant.name()
                ),
            ));
        }
        let pair = &mut self.theta[i];
        match side {
            Side::Both => *pair = SidePair::uniform(value),
            Side::Minus => pair.minus = value,
            Side::Plus => pair.plus = value,
        }
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<f64> {
        let (i, side) = parse_name(name)?;
        let pair = self.effective()[i];
        Ok(match side {
            Side::Minus => pair.minus,
            Side::Plus | Side::Both => pair.plus,
        })
    }

    fn effective(&self) -> [SidePair; 4] {
        let mut t = self.theta;
        if self.tie_theta4 {
            t[3] = t[1];
        }
        t
    }

    pub fn to_spec(&self) -> Result<WalkSpec> {
        let t = self.effective();
        let p = |i: usize| t[i].profile(self.origin);
        Ok(match self.variant {
            Variant::Standard => WalkSpec::standard(p(0)?),
            Variant::SplitStep => WalkSpec::split_step(p(0)?, p(1)?),
            Variant::DoubleSplitStep => WalkSpec::double_split_step(p(0)?, p(1)?, p(2)?, p(3)?),
        })
    }
}

/// Evenly spaced values of one named parameter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridAxis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl GridAxis {
    pub fn new(name: impl Into<String>, min: f64, max: f64, points: usize) -> Self {
        GridAxis {
            name: name.into(),
            min,
            max,
            points,
        }
    }

    /// A single-point axis.
    pub fn fixed(name: impl Into<String>, value: f64) -> Self {
        Self::new(name, value, value, 1)
    }

    pub fn values(&self) -> Vec<f64> {
        match self.points {
            0 => vec![],
            1 => vec![self.min],
            n => (0..n)
                .map(|i| {
                    if i == n - 1 {
                        self.max
                    } else {
                        self.min + (self.max - self.min) * i as f64 / (n - 1) as f64
                    }
                })
                .collect(),
        }
    }
}

impl fmt::Display for GridAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}:{}", self.name, self.min, self.max, self.points)
    }
}

impl FromStr for GridAxis {
    type Err = Error;
    /// `name:min:max:points`, e.g. `theta2-:-2pi:2pi:101`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 {
            return Err(Error::config(
                "grid",
                format!("expected name:min:max:points, got '{s}'"),
            ));
        }
        parse_name(parts[0])?;
        let points = parts[3]
            .trim()
            .parse()
            .map_err(|_| Error::config("grid", format!("bad point count '{}'", parts[3])))?;
        Ok(GridAxis::new(
            parts[0],
            parse_angle(parts[1])?,
            parse_angle(parts[2])?,
            points,
        ))
    }
}

/// Parses a plain number or a multiple of pi: `1.2`, `pi`, `-3pi/4`, `3*pi/4`,
/// `0.5pi`, `-pi/8`.
pub fn parse_angle(s: &str) -> Result<f64> {
    let bad = || Error::config("angle", format!("cannot parse angle '{s}'"));
    let t: String = s
        .trim()
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect::<String>()
        .to_lowercase();
    if let Ok(v) = t.parse::<f64>() {
        return Ok(v);
    }
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a, Some(b.parse::<f64>().map_err(|_| bad())?)),
        None => (t.as_str(), None),
    };
    let coef = num
        .strip_suffix("pi")
        .or_else(|| num.strip_suffix("π"))
        .ok_or_else(bad)?;
    let coef = coef.strip_suffix('*').unwrap_or(coef);
    let c = match coef {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().map_err(|_| bad())?,
    };
    let v = c * PI / den.unwrap_or(1.0);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}
