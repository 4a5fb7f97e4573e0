//! Pure and mixed walker states, position observables, the coin partial
//! transpose and noisy density-matrix evolution.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::walk::{self, Boundary, Frame, Lattice, WalkSpec};

const ZERO: C64 = C64::new(0.0, 0.0);
pub const NORM_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    lattice: Lattice,
    boundary: Boundary,
    amps: Vec<C64>,
}

impl PureState {
    pub fn zeros(lattice: Lattice, boundary: Boundary) -> Self {
        PureState {
            lattice,
            boundary,
            amps: vec![ZERO; lattice.dim()],
        }
    }

    /// `(alpha|0> + beta|1>) (x) |x = 0>` on an open line.
    pub fn initial(alpha: C64, beta: C64, lattice: Lattice) -> Result<Self> {
        Self::initial_on(alpha, beta, lattice, Boundary::OpenLine)
    }

    pub fn initial_on(alpha: C64, beta: C64, lattice: Lattice, boundary: Boundary) -> Result<Self> {
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL || !norm.is_finite() {
            return Err(Error::NotNormalized(norm));
        }
        let mut s = Self::zeros(lattice, boundary);
        s.set(0, 0, alpha);
        s.set(1, 0, beta);
        Ok(s)
    }

    pub fn from_amplitudes(lattice: Lattice, boundary: Boundary, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != lattice.dim() {
            return Err(Error::LatticeMismatch(format!(
                "{} amplitudes for a lattice of dimension {}",
                amps.len(),
                lattice.dim()
            )));
        }
        Ok(PureState {
            lattice,
            boundary,
            amps,
        })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn get(&self, coin: usize, x: i64) -> C64 {
        self.amps[self.lattice.index(coin, x)]
    }

    pub fn set(&mut self, coin: usize, x: i64, value: C64) {
        let i = self.lattice.index(coin, x);
        self.amps[i] = value;
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn evolve(&mut self, spec: &WalkSpec, steps: usize) -> Result<()> {
        walk::evolve(self, spec, steps)
    }

    pub fn distribution(&self) -> PositionDistribution {
        position_distribution_pure(self)
    }
}

/// Probability per site.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PositionDistribution {
    pub x_min: i64,
    pub p: Vec<f64>,
}

impl PositionDistribution {
    pub fn at(&self, x: i64) -> f64 {
        let i = x - self.x_min;
        if i < 0 || i as usize >= self.p.len() {
            0.0
        } else {
            self.p[i as usize]
        }
    }

    pub fn total(&self) -> f64 {
        self.p.iter().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.p
            .iter()
            .enumerate()
            .map(move |(i, &p)| (self.x_min + i as i64, p))
    }
}

pub fn position_distribution_pure(state: &PureState) -> PositionDistribution {
    PositionDistribution {
        x_min: state.lattice.x_min(),
        p: state
            .amps
            .chunks_exact(2)
            .map(|s| s[0].norm_sqr() + s[1].norm_sqr())
            .collect(),
    }
}

pub fn position_distribution_mixed(rho: &DensityOperator) -> PositionDistribution {
    let m = &rho.matrix;
    PositionDistribution {
        x_min: rho.lattice.x_min(),
        p: (0..rho.lattice.sites())
            .map(|i| m[(2 * i, 2 * i)].re + m[(2 * i + 1, 2 * i + 1)].re)
            .collect(),
    }
}

/// Probability within `|x| <= window` of the origin.
pub fn localization_strength(p: &PositionDistribution, window: u64) -> f64 {
    let w = window as i64;
    p.iter().filter(|(x, _)| x.abs() <= w).map(|(_, v)| v).sum()
}

// ---------------------------------------------------------------------------
// Noise channels

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelKind {
    None,
    BitFlip,
    YFlip,
    ZFlip,
    Depolarizing,
}

impl ChannelKind {
    pub const ALL: [ChannelKind; 5] = [
        ChannelKind::None,
        ChannelKind::BitFlip,
        ChannelKind::YFlip,
        ChannelKind::ZFlip,
        ChannelKind::Depolarizing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ChannelKind::None => "none",
            ChannelKind::BitFlip => "bitflip",
            ChannelKind::YFlip => "yflip",
            ChannelKind::ZFlip => "zflip",
            ChannelKind::Depolarizing => "depolarizing",
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChannelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(ChannelKind::None),
            "bitflip" | "x" | "sigma-x" => Ok(ChannelKind::BitFlip),
            "yflip" | "y" | "sigma-y" => Ok(ChannelKind::YFlip),
            "zflip" | "z" | "sigma-z" => Ok(ChannelKind::ZFlip),
            "depolarizing" | "depolarising" => Ok(ChannelKind::Depolarizing),
            other => Err(Error::config(
                "noise",
                format!("unknown channel kind '{other}'"),
            )),
        }
    }
}

/// Pauli operators acting on the coin.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> [[C64; 2]; 2] {
        let (o, l, i) = (ZERO, C64::new(1.0, 0.0), C64::new(0.0, 1.0));
        match self {
            Pauli::I => [[l, o], [o, l]],
            Pauli::X => [[o, l], [l, o]],
            Pauli::Y => [[o, -i], [i, o]],
            Pauli::Z => [[l, o], [o, -l]],
        }
    }

    /// `f B f^dagger` for a 2x2 coin block `B`.
    fn conjugate_block(self, b: [[C64; 2]; 2]) -> [[C64; 2]; 2] {
        match self {
            Pauli::I => b,
            Pauli::X => [[b[1][1], b[1][0]], [b[0][1], b[0][0]]],
            Pauli::Y => [[b[1][1], -b[1][0]], [-b[0][1], b[0][0]]],
            Pauli::Z => [[b[0][0], -b[0][1]], [-b[1][0], b[1][1]]],
        }
    }
}

/// Coin noise applied after every step with strength `P` in [0, 0.5].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseChannel {
    pub kind: ChannelKind,
    pub p: f64,
}

impl NoiseChannel {
    pub const NONE: NoiseChannel = NoiseChannel {
        kind: ChannelKind::None,
        p: 0.0,
    };

    pub fn new(kind: ChannelKind, p: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&p) {
            return Err(Error::InvalidNoiseStrength(p));
        }
        Ok(NoiseChannel { kind, p })
    }

    pub fn is_noiseless(&self) -> bool {
        self.kind == ChannelKind::None || self.p == 0.0
    }

    /// Weighted Pauli branches `(w_i, f_i)` with `sum w_i = 1`.
    pub fn kraus_weights(&self) -> Vec<(f64, Pauli)> {
        let p = self.p;
        match self.kind {
            ChannelKind::None => vec![(1.0, Pauli::I)],
            ChannelKind::BitFlip => vec![(1.0 - p, Pauli::I), (p, Pauli::X)],
            ChannelKind::YFlip => vec![(1.0 - p, Pauli::I), (p, Pauli::Y)],
            ChannelKind::ZFlip => vec![(1.0 - p, Pauli::I), (p, Pauli::Z)],
            ChannelKind::Depolarizing => vec![
                (1.0 - p, Pauli::I),
                (p / 3.0, Pauli::X),
                (p / 3.0, Pauli::Y),
                (p / 3.0, Pauli::Z),
            ],
        }
    }
}

// ---------------------------------------------------------------------------
// Density operators

#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    lattice: Lattice,
    boundary: Boundary,
    matrix: CMatrix,
}

impl DensityOperator {
    pub fn from_pure(state: &PureState) -> Self {
        let a = &state.amps;
        let matrix = CMatrix::from_fn(a.len(), |i, j| a[i] * a[j].conj());
        DensityOperator {
            lattice: state.lattice,
            boundary: state.boundary,
            matrix,
        }
    }

    /// Checks Hermiticity and unit trace (not positivity, see [`Self::min_eigenvalue`]).
    pub fn from_matrix(lattice: Lattice, boundary: Boundary, matrix: CMatrix) -> Result<Self> {
        if matrix.dim() != lattice.dim() {
            return Err(Error::LatticeMismatch(format!(
                "matrix dimension {} for a lattice of dimension {}",
                matrix.dim(),
                lattice.dim()
            )));
        }
        let herm = matrix.hermitian_deviation();
        if herm > NORM_TOL {
            return Err(Error::InvalidDensity(format!(
                "not Hermitian (deviation {herm:e})"
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > NORM_TOL || tr.im.abs() > NORM_TOL {
            return Err(Error::InvalidDensity(format!("trace {tr} != 1")));
        }
        Ok(DensityOperator {
            lattice,
            boundary,
            matrix,
        })
    }

    pub fn maximally_mixed(lattice: Lattice, boundary: Boundary) -> Self {
        let d = lattice.dim();
        let mut m = CMatrix::zeros(d);
        for i in 0..d {
            m[(i, i)] = C64::new(1.0 / d as f64, 0.0);
        }
        DensityOperator {
            lattice,
            boundary,
            matrix: m,
        }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn distribution(&self) -> PositionDistribution {
        position_distribution_mixed(self)
    }

    /// Smallest site window holding all nonzero diagonal weight, or `None`
    /// for the zero matrix. Rows and columns outside it vanish by positivity.
    pub fn support(&self) -> Option<(i64, i64)> {
        // any nonzero entry counts: rounding can zero a diagonal but not its row
        let dim = self.lattice.dim();
        let mut occupied = vec![false; dim];
        for (k, v) in self.matrix.as_slice().iter().enumerate() {
            if *v != ZERO {
                occupied[k / dim] = true;
                occupied[k % dim] = true;
            }
        }
        let first = occupied.iter().position(|&o| o)? / 2;
        let last = occupied.iter().rposition(|&o| o)? / 2;
        Some((
            self.lattice.x_min() + first as i64,
            self.lattice.x_min() + last as i64,
        ))
    }

    /// The operator restricted to its support window.
    pub fn trimmed(&self) -> DensityOperator {
        let Some((lo, hi)) = self.support() else {
            return self.clone();
        };
        if self.boundary == Boundary::Ring {
            return self.clone();
        }
        let window = Lattice::window(lo, hi);
        let off = 2 * (lo - self.lattice.x_min()) as usize;
        let matrix = CMatrix::from_fn(window.dim(), |i, j| self.matrix[(off + i, off + j)]);
        DensityOperator {
            lattice: window,
            boundary: self.boundary,
            matrix,
        }
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        linalg::hermitian_eigenvalues(self.trimmed().matrix())
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eigenvalues()?.first().copied().unwrap_or(0.0))
    }

    /// One noisy step: `rho <- sum_i w_i f_i W rho W^dagger f_i^dagger`.
    pub fn step(&mut self, spec: &WalkSpec, channel: &NoiseChannel) -> Result<()> {
        let factors = spec.factors(Frame::AsGiven);
        let n = self.lattice.dim();
        let window = match (self.boundary, self.support()) {
            (Boundary::Ring, _) | (_, None) => self.lattice,
            (Boundary::OpenLine, Some((lo, hi))) => {
                let hop = spec.max_hop() as i64;
                Lattice::window(
                    (lo - hop).max(self.lattice.x_min()),
                    (hi + hop).min(self.lattice.x_max()),
                )
            }
        };
        let a = 2 * (window.x_min() - self.lattice.x_min()) as usize;
        let b = a + window.dim();
        let data = self.matrix.as_mut_slice();

        // W is real, so applying it to every row gives rho W^dagger.
        let rows_apply = |data: &mut [C64]| -> Result<()> {
            for r in a..b {
                walk::apply_factors_in_place(
                    &mut data[r * n + a..r * n + b],
                    &window,
                    &factors,
                    self.boundary,
                )?;
            }
            Ok(())
        };
        rows_apply(data)?;
        // (rho W^dagger)^dagger = W rho
        for i in a..b {
            data[i * n + i] = data[i * n + i].conj();
            for j in (i + 1)..b {
                let (u, v) = (data[i * n + j], data[j * n + i]);
                data[i * n + j] = v.conj();
                data[j * n + i] = u.conj();
            }
        }
        rows_apply(data)?;

        if !channel.is_noiseless() {
            let branches = channel.kraus_weights();
            let sites = window.sites();
            for si in 0..sites {
                for sj in 0..sites {
                    let (r, c) = (a + 2 * si, a + 2 * sj);
                    let blk = [
                        [data[r * n + c], data[r * n + c + 1]],
                        [data[(r + 1) * n + c], data[(r + 1) * n + c + 1]],
                    ];
                    let mut out = [[ZERO; 2]; 2];
                    for &(w, f) in &branches {
                        let t = f.conjugate_block(blk);
                        for u in 0..2 {
                            for v in 0..2 {
                                out[u][v] += t[u][v] * w;
                            }
                        }
                    }
                    data[r * n + c] = out[0][0];
                    data[r * n + c + 1] = out[0][1];
                    data[(r + 1) * n + c] = out[1][0];
                    data[(r + 1) * n + c + 1] = out[1][1];
                }
            }
        }
        Ok(())
    }
}

/// Evolves `rho` through `steps` noisy steps.
pub fn evolve_density(
    rho: &DensityOperator,
    spec: &WalkSpec,
    channel: &NoiseChannel,
    steps: usize,
) -> Result<DensityOperator> {
    NoiseChannel::new(channel.kind, channel.p)?;
    let mut out = rho.clone();
    for _ in 0..steps {
        out.step(spec, channel)?;
    }
    Ok(out)
}

/// Transposes the coin factor: `((c, x), (c', x')) -> ((c', x), (c, x'))`.
pub fn partial_transpose(rho: &DensityOperator) -> CMatrix {
    partial_transpose_coin(rho.matrix())
}

pub(crate) fn partial_transpose_coin(m: &CMatrix) -> CMatrix {
    CMatrix::from_fn(m.dim(), |i, j| {
        let (ci, si) = (i % 2, i / 2);
        let (cj, sj) = (j % 2, j / 2);
        m[(2 * si + cj, 2 * sj + ci)]
    })
}

/// Transposes the position factor: `((c, x), (c', x')) -> ((c, x'), (c', x))`.
pub fn partial_transpose_position(rho: &DensityOperator) -> CMatrix {
    let m = rho.matrix();
    CMatrix::from_fn(m.dim(), |i, j| {
        let (ci, si) = (i % 2, i / 2);
        let (cj, sj) = (j % 2, j / 2);
        m[(2 * sj + ci, 2 * si + cj)]
    })
}
