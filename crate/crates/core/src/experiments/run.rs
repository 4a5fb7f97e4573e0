//! Experiment runners. Every runner is a pure function of its config.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use super::config::{ExperimentConfig, ExperimentKind};
use crate::entanglement::{negativity_mixed, negativity_pure};
use crate::error::{Error, Result};
use crate::params::{GridAxis, WalkParams};
use crate::spectral::{self, EdgeModeOptions, GapTarget};
use crate::state::{ChannelKind, DensityOperator, NoiseChannel, PositionDistribution, PureState};
use crate::symmetry::{symmetry_report, SymmetryReport};
use crate::walk::{Lattice, WalkSpec};

/// Windows reported by `probdist`.
pub const PROBDIST_WINDOWS: [u64; 3] = [0, 2, 5];
/// Window used by `noise-compare`.
pub const COMPARE_WINDOW: u64 = 5;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Metadata {
    pub experiment: ExperimentKind,
    pub version: &'static str,
    pub config: ExperimentConfig,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Depolarizing weights as printed would not preserve the trace.
pub const DEPOLARIZING_NOTE: &str =
    "depolarizing channel: weight 1 - P on the identity and P/3 on each of sigma_x, sigma_y, sigma_z";

impl Metadata {
    fn of(config: &ExperimentConfig) -> Self {
        let ch = &config.channel;
        let depolarizing = match config.experiment {
            ExperimentKind::NoiseCompare => ch.compare_kinds().contains(&ChannelKind::Depolarizing),
            ExperimentKind::Probdist | ExperimentKind::NegMap | ExperimentKind::NegTime => {
                ch.kind == ChannelKind::Depolarizing
            }
            _ => false,
        };
        let notes = if depolarizing {
            vec![DEPOLARIZING_NOTE.to_string()]
        } else {
            vec![]
        };
        Metadata {
            experiment: config.experiment,
            version: crate::VERSION,
            config: config.clone(),
            notes,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Localization {
    pub window: u64,
    pub strength: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbDistResult {
    pub metadata: Metadata,
    pub steps: usize,
    pub x: Vec<i64>,
    pub p: Vec<f64>,
    pub localization: Vec<Localization>,
    pub negativity: f64,
}

impl ProbDistResult {
    pub fn strength(&self, window: u64) -> Option<f64> {
        self.localization
            .iter()
            .find(|l| l.window == window)
            .map(|l| l.strength)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridLayer {
    pub name: String,
    /// `values[i][j]` belongs to the i-th value of the first axis.
    pub values: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxisValues {
    pub name: String,
    pub values: Vec<f64>,
}

impl From<&GridAxis> for AxisValues {
    fn from(a: &GridAxis) -> Self {
        AxisValues {
            name: a.name.clone(),
            values: a.values(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridResult {
    pub metadata: Metadata,
    pub axes: [AxisValues; 2],
    pub layers: Vec<GridLayer>,
}

impl GridResult {
    pub fn layer(&self, name: &str) -> Option<&[Vec<f64>]> {
        self.layers
            .iter()
            .find(|l| l.name == name)
            .map(|l| l.values.as_slice())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Series {
    pub label: String,
    pub kind: ChannelKind,
    pub p: f64,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TimeSeriesResult {
    pub metadata: Metadata,
    pub t: Vec<usize>,
    pub series: Vec<Series>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChannelTable {
    pub kind: ChannelKind,
    pub p: f64,
    /// One distribution per checkpoint, all over the same sites.
    pub distributions: Vec<Vec<f64>>,
    pub strengths: Vec<f64>,
    /// Last checkpoint strength over first checkpoint strength.
    pub retention: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NoiseCompareResult {
    pub metadata: Metadata,
    pub checkpoints: Vec<usize>,
    pub window: u64,
    pub x: Vec<i64>,
    pub tables: Vec<ChannelTable>,
}

impl NoiseCompareResult {
    pub fn table(&self, kind: ChannelKind) -> Option<&ChannelTable> {
        self.tables.iter().find(|t| t.kind == kind)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EdgeModeSummary {
    pub quasienergy: f64,
    pub target: GapTarget,
    pub interface_weight: f64,
    pub chiral_expectation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EdgeSpectrumResult {
    pub metadata: Metadata,
    pub ring_sites: usize,
    pub quasienergies: Vec<f64>,
    pub modes: Vec<EdgeModeSummary>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidateResult {
    pub metadata: Metadata,
    pub report: SymmetryReport,
}

impl ValidateResult {
    pub fn passed(&self) -> bool {
        self.report.passed
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ExperimentOutput {
    ProbDist(ProbDistResult),
    Grid(GridResult),
    TimeSeries(TimeSeriesResult),
    NoiseCompare(NoiseCompareResult),
    EdgeSpectrum(EdgeSpectrumResult),
    Validate(ValidateResult),
}

impl ExperimentOutput {
    /// False only for a failed symmetry validation.
    pub fn passed(&self) -> bool {
        match self {
            ExperimentOutput::Validate(v) => v.passed(),
            _ => true,
        }
    }
}

pub fn run(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    Ok(match config.experiment {
        ExperimentKind::Probdist => ExperimentOutput::ProbDist(run_probdist(config)?),
        ExperimentKind::NegMap => ExperimentOutput::Grid(run_negativity_map(config)?),
        ExperimentKind::NegTime => ExperimentOutput::TimeSeries(run_negativity_time(config)?),
        ExperimentKind::NoiseCompare => ExperimentOutput::NoiseCompare(run_noise_compare(config)?),
        ExperimentKind::PhaseMap => ExperimentOutput::Grid(run_phase_map(config)?),
        ExperimentKind::EdgeSpectrum => ExperimentOutput::EdgeSpectrum(run_edge_spectrum(config)?),
        ExperimentKind::Validate => ExperimentOutput::Validate(run_validate(config)?),
    })
}

fn initial_state(config: &ExperimentConfig, spec: &WalkSpec, steps: usize) -> Result<PureState> {
    let (a, b) = config.initial_amplitudes();
    PureState::initial(a, b, Lattice::for_steps(spec, steps))
}

/// Final state of one run: pure when the channel is the identity.
enum Evolved {
    Pure(PureState),
    Mixed(DensityOperator),
}

impl Evolved {
    fn distribution(&self) -> PositionDistribution {
        match self {
            Evolved::Pure(s) => s.distribution(),
            Evolved::Mixed(r) => r.distribution(),
        }
    }

    fn negativity(&self) -> Result<f64> {
        Ok(match self {
            Evolved::Pure(s) => negativity_pure(s)?.value(),
            Evolved::Mixed(r) => negativity_mixed(r)?.value(),
        })
    }
}

fn evolve(
    psi: PureState,
    spec: &WalkSpec,
    channel: &NoiseChannel,
    steps: usize,
) -> Result<Evolved> {
    if channel.kind == ChannelKind::None {
        let mut psi = psi;
        psi.evolve(spec, steps)?;
        Ok(Evolved::Pure(psi))
    } else {
        let mut rho = DensityOperator::from_pure(&psi);
        for _ in 0..steps {
            rho.step(spec, channel)?;
        }
        Ok(Evolved::Mixed(rho))
    }
}

/// Negativity after `steps` steps from `(alpha, beta) (x) |0>`.
pub fn cell_negativity(
    spec: &WalkSpec,
    steps: usize,
    alpha: C64,
    beta: C64,
    channel: &NoiseChannel,
) -> Result<f64> {
    let psi = PureState::initial(alpha, beta, Lattice::for_steps(spec, steps))?;
    evolve(psi, spec, channel, steps)?.negativity()
}

pub fn run_probdist(config: &ExperimentConfig) -> Result<ProbDistResult> {
    let spec = config.validate()?.to_spec()?;
    let channel = config.channel.channel()?;
    let psi = initial_state(config, &spec, config.steps)?;
    let out = evolve(psi, &spec, &channel, config.steps)?;
    let dist = out.distribution();
    let localization = PROBDIST_WINDOWS
        .iter()
        .map(|&w| Localization {
            window: w,
            strength: crate::state::localization_strength(&dist, w),
        })
        .collect();
    let (x, p) = dist.iter().unzip();
    Ok(ProbDistResult {
        metadata: Metadata::of(config),
        steps: config.steps,
        x,
        p,
        localization,
        negativity: out.negativity()?,
    })
}

/// Evaluates `f` on every cell, in parallel, in row-major order. The first
/// failing cell (in that order) is reported with its coordinates.
fn sweep<F>(template: &WalkParams, a1: &GridAxis, a2: &GridAxis, f: F) -> Result<Vec<Vec<f64>>>
where
    F: Fn(&WalkSpec) -> Result<f64> + Sync,
{
    let v1 = a1.values();
    let v2 = a2.values();
    let n2 = v2.len();
    let flat: Vec<Result<f64>> = (0..v1.len() * n2)
        .into_par_iter()
        .map(|idx| {
            let (x, y) = (v1[idx / n2], v2[idx % n2]);
            let mut p = template.clone();
            p.set(&a1.name, x)?;
            p.set(&a2.name, y)?;
            f(&p.to_spec()?).map_err(|e| Error::Cell {
                axis1: a1.name.clone(),
                v1: x,
                axis2: a2.name.clone(),
                v2: y,
                source: Box::new(e),
            })
        })
        .collect();
    let mut rows = vec![Vec::with_capacity(n2); v1.len()];
    for (idx, r) in flat.into_iter().enumerate() {
        rows[idx / n2].push(r?);
    }
    Ok(rows)
}

pub fn run_negativity_map(config: &ExperimentConfig) -> Result<GridResult> {
    let params = config.validate()?;
    let channel = config.channel.channel()?;
    let (alpha, beta) = config.initial_amplitudes();
    let (a1, a2) = (&config.grid[0], &config.grid[1]);
    let values = sweep(&params, a1, a2, |spec| {
        cell_negativity(spec, config.steps, alpha, beta, &channel)
    })?;
    Ok(GridResult {
        metadata: Metadata::of(config),
        axes: [a1.into(), a2.into()],
        layers: vec![GridLayer {
            name: "negativity".into(),
            values,
        }],
    })
}

/// Negativity at every step `t = 0..=steps`.
pub fn negativity_series(
    spec: &WalkSpec,
    steps: usize,
    alpha: C64,
    beta: C64,
    channel: &NoiseChannel,
) -> Result<Vec<f64>> {
    let psi = PureState::initial(alpha, beta, Lattice::for_steps(spec, steps))?;
    let mut out = Vec::with_capacity(steps + 1);
    if channel.kind == ChannelKind::None {
        let mut psi = psi;
        out.push(negativity_pure(&psi)?.value());
        for _ in 0..steps {
            psi.evolve(spec, 1)?;
            out.push(negativity_pure(&psi)?.value());
        }
    } else {
        let mut rho = DensityOperator::from_pure(&psi);
        out.push(negativity_mixed(&rho)?.value());
        for _ in 0..steps {
            rho.step(spec, channel)?;
            out.push(negativity_mixed(&rho)?.value());
        }
    }
    Ok(out)
}

pub fn run_negativity_time(config: &ExperimentConfig) -> Result<TimeSeriesResult> {
    let spec = config.validate()?.to_spec()?;
    let (alpha, beta) = config.initial_amplitudes();
    let kind = config.channel.kind;
    let channels: Vec<NoiseChannel> = config
        .channel
        .strengths()
        .iter()
        .map(|&p| NoiseChannel::new(kind, if kind == ChannelKind::None { 0.0 } else { p }))
        .collect::<Result<_>>()?;
    let series = channels
        .par_iter()
        .map(|ch| {
            Ok(Series {
                label: format!("{} P={}", ch.kind, ch.p),
                kind: ch.kind,
                p: ch.p,
                values: negativity_series(&spec, config.steps, alpha, beta, ch)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TimeSeriesResult {
        metadata: Metadata::of(config),
        t: (0..=config.steps).collect(),
        series,
    })
}

pub fn run_noise_compare(config: &ExperimentConfig) -> Result<NoiseCompareResult> {
    let spec = config.validate()?.to_spec()?;
    let checkpoints = config.checkpoints();
    let last = *checkpoints.last().unwrap_or(&0);
    let psi = initial_state(config, &spec, last)?;
    let x: Vec<i64> = psi.lattice().positions().collect();
    let tables = config
        .channel
        .compare_kinds()
        .par_iter()
        .map(|&kind| {
            let p = if kind == ChannelKind::None {
                0.0
            } else {
                config.channel.p
            };
            let channel = NoiseChannel::new(kind, p)?;
            let mut rho = DensityOperator::from_pure(&psi);
            let mut done = 0;
            let mut distributions = Vec::new();
            let mut strengths = Vec::new();
            for &cp in &checkpoints {
                for _ in done..cp {
                    rho.step(&spec, &channel)?;
                }
                done = cp;
                let d = rho.distribution();
                strengths.push(crate::state::localization_strength(&d, COMPARE_WINDOW));
                distributions.push(d.p);
            }
            let retention = match (strengths.first(), strengths.last()) {
                (Some(&a), Some(&b)) if a > 0.0 => b / a,
                _ => f64::NAN,
            };
            Ok(ChannelTable {
                kind,
                p,
                distributions,
                strengths,
                retention,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NoiseCompareResult {
        metadata: Metadata::of(config),
        checkpoints,
        window: COMPARE_WINDOW,
        x,
        tables,
    })
}

pub fn run_phase_map(config: &ExperimentConfig) -> Result<GridResult> {
    let params = config.validate()?;
    let (a1, a2) = (&config.grid[0], &config.grid[1]);
    let map = spectral::gap_map(&params, a1, a2, config.spectrum.k_samples)?;
    let min = map
        .gap0
        .iter()
        .zip(&map.gap_pi)
        .map(|(r0, rp)| r0.iter().zip(rp).map(|(a, b)| a.min(*b)).collect())
        .collect();
    Ok(GridResult {
        metadata: Metadata::of(config),
        axes: [a1.into(), a2.into()],
        layers: vec![
            GridLayer {
                name: "gap0".into(),
                values: map.gap0,
            },
            GridLayer {
                name: "gap_pi".into(),
                values: map.gap_pi,
            },
            GridLayer {
                name: "min_gap".into(),
                values: min,
            },
        ],
    })
}

pub fn run_edge_spectrum(config: &ExperimentConfig) -> Result<EdgeSpectrumResult> {
    let spec = config.validate()?.to_spec()?;
    let ring = config.spectrum.ring_sites;
    let opts = EdgeModeOptions {
        tol: config.spectrum.tol,
        interface_window: config.spectrum.interface_window,
    };
    let modes = spectral::edge_modes(&spec, ring, opts)?
        .into_iter()
        .map(|m| EdgeModeSummary {
            quasienergy: m.quasienergy,
            target: m.target,
            interface_weight: m.interface_weight,
            chiral_expectation: m.chiral_expectation,
        })
        .collect();
    Ok(EdgeSpectrumResult {
        metadata: Metadata::of(config),
        ring_sites: ring,
        quasienergies: spectral::ring_quasienergies(&spec, ring)?,
        modes,
    })
}

pub fn run_validate(config: &ExperimentConfig) -> Result<ValidateResult> {
    let spec = config.validate()?.to_spec()?;
    let report = symmetry_report(&spec, config.spectrum.ring_sites, config.spectrum.frame)?;
    Ok(ValidateResult {
        metadata: Metadata::of(config),
        report,
    })
}
