//! Lattices, coin profiles and the standard, split-step and double split-step
//! walk operators.
//!
//! Amplitudes over the joint coin/position space are stored with the coin as
//! the fast index: entry `2 * (x - x_min) + c` holds `<c, x|psi>`.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::state::PureState;

/// Default cap on the dimension of explicit step operators.
pub const DENSE_LIMIT: usize = 4096;

const TWO_PI: f64 = 2.0 * PI;
const RANGE_SLACK: f64 = 1e-12;

/// How out-of-range angles are handled on construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum AnglePolicy {
    #[default]
    Reject,
    /// Reduce modulo 4pi (the period of the coin) into [-2pi, 2pi).
    Wrap,
}

/// A coin angle in radians. Values are stored exactly as given.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Angle(f64);

impl Angle {
    pub fn new(radians: f64) -> Result<Self> {
        Self::with_policy(radians, AnglePolicy::Reject)
    }

    pub fn with_policy(radians: f64, policy: AnglePolicy) -> Result<Self> {
        if !radians.is_finite() {
            return Err(Error::AngleOutOfRange(radians));
        }
        if radians.abs() <= TWO_PI + RANGE_SLACK {
            return Ok(Angle(radians));
        }
        match policy {
            AnglePolicy::Reject => Err(Error::AngleOutOfRange(radians)),
            AnglePolicy::Wrap => Ok(Angle((radians + TWO_PI).rem_euclid(2.0 * TWO_PI) - TWO_PI)),
        }
    }

    /// Unvalidated constructor for derived angles such as half-coins.
    pub(crate) fn raw(radians: f64) -> Self {
        Angle(radians)
    }

    pub fn radians(self) -> f64 {
        self.0
    }
}

/// Boundary condition for shifts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Boundary {
    /// Finite window of the infinite line; amplitude must never reach the edge.
    OpenLine,
    /// Periodic; only used for spectral work.
    Ring,
}

/// Inclusive range of integer sites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Lattice {
    x_min: i64,
    x_max: i64,
}

impl Lattice {
    pub fn new(x_min: i64, x_max: i64) -> Result<Self> {
        if x_min > 0 || x_max < 0 {
            return Err(Error::InvalidLattice { x_min, x_max });
        }
        Ok(Lattice { x_min, x_max })
    }

    /// Window used internally for support-restricted updates; need not contain 0.
    pub(crate) fn window(x_min: i64, x_max: i64) -> Self {
        debug_assert!(x_min <= x_max);
        Lattice { x_min, x_max }
    }

    /// Symmetric lattice `[-radius, radius]`.
    pub fn symmetric(radius: u64) -> Self {
        let r = radius as i64;
        Lattice {
            x_min: -r,
            x_max: r,
        }
    }

    /// Open-line lattice that a walk of `steps` steps started at the origin
    /// can never leave: radius `hop * (steps + 1)`.
    pub fn for_steps(spec: &WalkSpec, steps: usize) -> Self {
        Self::symmetric(spec.max_hop() as u64 * (steps as u64 + 1))
    }

    /// Ring of `sites` sites, `x` in `[-sites/2, sites - sites/2 - 1]`.
    pub fn ring(sites: usize) -> Result<Self> {
        if sites == 0 {
            return Err(Error::InvalidLattice {
                x_min: 0,
                x_max: -1,
            });
        }
        let half = (sites / 2) as i64;
        Lattice::new(-half, sites as i64 - half - 1)
    }

    pub fn x_min(&self) -> i64 {
        self.x_min
    }

    pub fn x_max(&self) -> i64 {
        self.x_max
    }

    pub fn sites(&self) -> usize {
        (self.x_max - self.x_min + 1) as usize
    }

    /// Dimension of the coin-position space.
    pub fn dim(&self) -> usize {
        2 * self.sites()
    }

    pub fn positions(&self) -> impl Iterator<Item = i64> {
        self.x_min..=self.x_max
    }

    pub fn contains(&self, x: i64) -> bool {
        (self.x_min..=self.x_max).contains(&x)
    }

    pub fn index(&self, coin: usize, x: i64) -> usize {
        debug_assert!(coin < 2 && self.contains(x));
        2 * (x - self.x_min) as usize + coin
    }

    pub fn site_of(&self, index: usize) -> i64 {
        self.x_min + (index / 2) as i64
    }
}

/// Which domain the site `x = 0` belongs to in a two-domain profile.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OriginSide {
    Minus,
    #[default]
    Plus,
}

/// Assignment of a coin angle to every site.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CoinProfile {
    Uniform(Angle),
    /// `minus` on sites left of the origin, `plus` on sites right of it;
    /// `origin` decides the origin itself.
    TwoDomain {
        minus: Angle,
        plus: Angle,
        origin: OriginSide,
    },
}

impl CoinProfile {
    pub fn uniform(theta: f64) -> Result<Self> {
        Ok(CoinProfile::Uniform(Angle::new(theta)?))
    }

    pub fn two_domain(minus: f64, plus: f64) -> Result<Self> {
        Ok(CoinProfile::TwoDomain {
            minus: Angle::new(minus)?,
            plus: Angle::new(plus)?,
            origin: OriginSide::Plus,
        })
    }

    pub fn angle_at(&self, x: i64) -> f64 {
        match *self {
            CoinProfile::Uniform(a) => a.radians(),
            CoinProfile::TwoDomain {
                minus,
                plus,
                origin,
            } => {
                let left = x < 0 || (x == 0 && origin == OriginSide::Minus);
                if left {
                    minus.radians()
                } else {
                    plus.radians()
                }
            }
        }
    }

    pub fn is_uniform(&self) -> bool {
        matches!(self, CoinProfile::Uniform(_))
    }

    /// Same profile with every angle multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        match *self {
            CoinProfile::Uniform(a) => CoinProfile::Uniform(Angle::raw(a.radians() * factor)),
            CoinProfile::TwoDomain {
                minus,
                plus,
                origin,
            } => CoinProfile::TwoDomain {
                minus: Angle::raw(minus.radians() * factor),
                plus: Angle::raw(plus.radians() * factor),
                origin,
            },
        }
    }

    /// Sitewise equality of the assigned angles.
    pub fn same_sitewise(&self, other: &CoinProfile) -> bool {
        // Probing just left and right of the origin and the origin covers
        // every two-domain profile.
        [-1, 0, 1]
            .iter()
            .all(|&x| self.angle_at(x) == other.angle_at(x))
    }
}

/// Walk variant with its coin profiles.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WalkSpec {
    /// `W = S R(theta)`
    Standard { theta: CoinProfile },
    /// `W = S+ R(theta2) S- R(theta1)`
    SplitStep {
        theta1: CoinProfile,
        theta2: CoinProfile,
    },
    /// `W = S+ R(theta4) S+ R(theta3) S- R(theta2) S- R(theta1)`
    DoubleSplitStep {
        theta1: CoinProfile,
        theta2: CoinProfile,
        theta3: CoinProfile,
        theta4: CoinProfile,
    },
}

/// Time frame in which a step operator is written.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Frame {
    #[default]
    AsGiven,
    /// First coin split into two halves placed at both ends of the step:
    /// `R(theta1/2) ... R(theta1/2)`. Unitarily equivalent to the given frame.
    Symmetrized,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftKind {
    /// coin 0 to x-1, coin 1 to x+1
    Full,
    /// coin 0 to x-1, coin 1 fixed
    Minus,
    /// coin 0 fixed, coin 1 to x+1
    Plus,
}

impl ShiftKind {
    /// Displacement of the (coin 0, coin 1) components.
    pub fn displacements(self) -> (i64, i64) {
        match self {
            ShiftKind::Full => (-1, 1),
            ShiftKind::Minus => (-1, 0),
            ShiftKind::Plus => (0, 1),
        }
    }
}

/// One factor of a step operator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Factor {
    Coin(CoinProfile),
    Shift(ShiftKind),
}

impl WalkSpec {
    pub fn standard(theta: CoinProfile) -> Self {
        WalkSpec::Standard { theta }
    }

    pub fn split_step(theta1: CoinProfile, theta2: CoinProfile) -> Self {
        WalkSpec::SplitStep { theta1, theta2 }
    }

    pub fn double_split_step(
        theta1: CoinProfile,
        theta2: CoinProfile,
        theta3: CoinProfile,
        theta4: CoinProfile,
    ) -> Self {
        WalkSpec::DoubleSplitStep {
            theta1,
            theta2,
            theta3,
            theta4,
        }
    }

    /// Maximal displacement per step.
    pub fn max_hop(&self) -> usize {
        match self {
            WalkSpec::Standard { .. } | WalkSpec::SplitStep { .. } => 1,
            WalkSpec::DoubleSplitStep { .. } => 2,
        }
    }

    pub fn profiles(&self) -> Vec<CoinProfile> {
        match *self {
            WalkSpec::Standard { theta } => vec![theta],
            WalkSpec::SplitStep { theta1, theta2 } => vec![theta1, theta2],
            WalkSpec::DoubleSplitStep {
                theta1,
                theta2,
                theta3,
                theta4,
            } => {
                vec![theta1, theta2, theta3, theta4]
            }
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.profiles().iter().all(CoinProfile::is_uniform)
    }

    /// Whether the step operator is chiral in the symmetrized frame. Only the
    /// double split-step walk needs `theta4 == theta2` sitewise.
    pub fn satisfies_chiral_condition(&self) -> bool {
        match self {
            WalkSpec::DoubleSplitStep { theta2, theta4, .. } => theta2.same_sitewise(theta4),
            _ => true,
        }
    }

    /// The frame in which the chiral relation is checked by default.
    pub fn natural_chiral_frame(&self) -> Frame {
        match self {
            WalkSpec::DoubleSplitStep { theta1, .. }
                if theta1.same_sitewise(&CoinProfile::Uniform(Angle::raw(0.0))) =>
            {
                Frame::AsGiven
            }
            _ => Frame::Symmetrized,
        }
    }

    /// Factors in application order (the rightmost operator first).
    pub fn factors(&self, frame: Frame) -> Vec<Factor> {
        use Factor::{Coin, Shift};
        use ShiftKind::{Full, Minus, Plus};
        let first = |p: &CoinProfile| match frame {
            Frame::AsGiven => *p,
            Frame::Symmetrized => p.scaled(0.5),
        };
        let mut out = match self {
            WalkSpec::Standard { theta } => vec![Coin(first(theta)), Shift(Full)],
            WalkSpec::SplitStep { theta1, theta2 } => {
                vec![
                    Coin(first(theta1)),
                    Shift(Minus),
                    Coin(*theta2),
                    Shift(Plus),
                ]
            }
            WalkSpec::DoubleSplitStep {
                theta1,
                theta2,
                theta3,
                theta4,
            } => vec![
                Coin(first(theta1)),
                Shift(Minus),
                Coin(*theta2),
                Shift(Minus),
                Coin(*theta3),
                Shift(Plus),
                Coin(*theta4),
                Shift(Plus),
            ],
        };
        if frame == Frame::Symmetrized {
            out.push(out[0]);
        }
        out
    }
}

/// `[[cos(theta/2), -sin(theta/2)], [sin(theta/2), cos(theta/2)]]`
pub fn coin_matrix(theta: f64) -> [[f64; 2]; 2] {
    let (s, c) = (theta / 2.0).sin_cos();
    [[c, -s], [s, c]]
}

// ---------------------------------------------------------------------------
// In-place kernels on raw amplitude slices.

pub(crate) fn coin_in_place(amps: &mut [C64], lattice: &Lattice, profile: &CoinProfile) {
    debug_assert_eq!(amps.len(), lattice.dim());
    let rot = |theta: f64| {
        let (s, c) = (theta / 2.0).sin_cos();
        (c, s)
    };
    let (left, right, split) = match *profile {
        CoinProfile::Uniform(a) => {
            let r = rot(a.radians());
            (r, r, i64::MIN)
        }
        CoinProfile::TwoDomain {
            minus,
            plus,
            origin,
        } => {
            // first site that takes `plus`
            let split = if origin == OriginSide::Plus { 0 } else { 1 };
            (rot(minus.radians()), rot(plus.radians()), split)
        }
    };
    for (i, pair) in amps.chunks_exact_mut(2).enumerate() {
        let x = lattice.x_min + i as i64;
        let (c, s) = if x < split { left } else { right };
        let (a0, a1) = (pair[0], pair[1]);
        pair[0] = a0 * c - a1 * s;
        pair[1] = a0 * s + a1 * c;
    }
}

/// Moves the `coin` component by `delta` sites (`delta` in {-1, 0, 1}).
fn shift_component(
    amps: &mut [C64],
    lattice: &Lattice,
    coin: usize,
    delta: i64,
    boundary: Boundary,
) -> Result<()> {
    let n = lattice.sites();
    if delta == 0 || n == 0 {
        return Ok(());
    }
    let zero = C64::new(0.0, 0.0);
    match boundary {
        Boundary::OpenLine => {
            let (edge_site, edge) = if delta < 0 {
                (lattice.x_min, 0)
            } else {
                (lattice.x_max, n - 1)
            };
            if amps[2 * edge + coin] != zero {
                return Err(Error::BoundaryOverflow {
                    site: edge_site + delta,
                });
            }
            if delta < 0 {
                for i in 1..n {
                    amps[2 * (i - 1) + coin] = amps[2 * i + coin];
                }
                amps[2 * (n - 1) + coin] = zero;
            } else {
                for i in (1..n).rev() {
                    amps[2 * i + coin] = amps[2 * (i - 1) + coin];
                }
                amps[coin] = zero;
            }
        }
        Boundary::Ring => {
            if delta < 0 {
                let first = amps[coin];
                for i in 1..n {
                    amps[2 * (i - 1) + coin] = amps[2 * i + coin];
                }
                amps[2 * (n - 1) + coin] = first;
            } else {
                let last = amps[2 * (n - 1) + coin];
                for i in (1..n).rev() {
                    amps[2 * i + coin] = amps[2 * (i - 1) + coin];
                }
                amps[coin] = last;
            }
        }
    }
    Ok(())
}

pub(crate) fn shift_in_place(
    amps: &mut [C64],
    lattice: &Lattice,
    (d0, d1): (i64, i64),
    boundary: Boundary,
) -> Result<()> {
    // Check both components before moving either so a failed shift leaves
    // the state untouched.
    if boundary == Boundary::OpenLine && lattice.sites() > 0 {
        let zero = C64::new(0.0, 0.0);
        let last = lattice.sites() - 1;
        for (coin, d) in [(0usize, d0), (1, d1)] {
            let (site, idx) = match d {
                d if d < 0 => (lattice.x_min + d, coin),
                d if d > 0 => (lattice.x_max + d, 2 * last + coin),
                _ => continue,
            };
            if amps[idx] != zero {
                return Err(Error::BoundaryOverflow { site });
            }
        }
    }
    shift_component(amps, lattice, 0, d0, boundary)?;
    shift_component(amps, lattice, 1, d1, boundary)
}

pub(crate) fn apply_factors_in_place(
    amps: &mut [C64],
    lattice: &Lattice,
    factors: &[Factor],
    boundary: Boundary,
) -> Result<()> {
    for f in factors {
        match f {
            Factor::Coin(p) => coin_in_place(amps, lattice, p),
            Factor::Shift(k) => shift_in_place(amps, lattice, k.displacements(), boundary)?,
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// State-level operations.

/// Multiplies each site's spinor by the coin at that site.
pub fn apply_coin(state: &mut PureState, profile: &CoinProfile) {
    let lattice = *state.lattice();
    coin_in_place(state.amplitudes_mut(), &lattice, profile);
}

pub fn apply_shift(state: &mut PureState, kind: ShiftKind) -> Result<()> {
    let (lattice, boundary) = (*state.lattice(), state.boundary());
    shift_in_place(
        state.amplitudes_mut(),
        &lattice,
        kind.displacements(),
        boundary,
    )
}

/// Applies the inverse of a shift (all displacements reversed).
pub fn apply_shift_inverse(state: &mut PureState, kind: ShiftKind) -> Result<()> {
    let (lattice, boundary) = (*state.lattice(), state.boundary());
    let (d0, d1) = kind.displacements();
    shift_in_place(state.amplitudes_mut(), &lattice, (-d0, -d1), boundary)
}

/// One step of the walk, factors applied right to left.
pub fn apply_walk_step(state: &mut PureState, spec: &WalkSpec) -> Result<()> {
    apply_walk_step_in_frame(state, spec, Frame::AsGiven)
}

pub fn apply_walk_step_in_frame(
    state: &mut PureState,
    spec: &WalkSpec,
    frame: Frame,
) -> Result<()> {
    let (lattice, boundary) = (*state.lattice(), state.boundary());
    apply_factors_in_place(
        state.amplitudes_mut(),
        &lattice,
        &spec.factors(frame),
        boundary,
    )
}

pub fn evolve(state: &mut PureState, spec: &WalkSpec, steps: usize) -> Result<()> {
    let (lattice, boundary) = (*state.lattice(), state.boundary());
    let factors = spec.factors(Frame::AsGiven);
    for _ in 0..steps {
        apply_factors_in_place(state.amplitudes_mut(), &lattice, &factors, boundary)?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Dense operators.

pub fn coin_operator_dense(profile: &CoinProfile, lattice: &Lattice) -> CMatrix {
    let mut m = CMatrix::zeros(lattice.dim());
    for x in lattice.positions() {
        let r = coin_matrix(profile.angle_at(x));
        for (c, row) in r.iter().enumerate() {
            for (c2, v) in row.iter().enumerate() {
                m[(lattice.index(c, x), lattice.index(c2, x))] = C64::new(*v, 0.0);
            }
        }
    }
    m
}

/// Shift as an explicit matrix. On an open line the columns whose image
/// leaves the window are zero, so the matrix is unitary only on a ring.
pub fn shift_operator_dense(kind: ShiftKind, lattice: &Lattice, boundary: Boundary) -> CMatrix {
    shift_operator_dense_displaced(kind.displacements(), lattice, boundary)
}

pub(crate) fn shift_operator_dense_displaced(
    (d0, d1): (i64, i64),
    lattice: &Lattice,
    boundary: Boundary,
) -> CMatrix {
    let mut m = CMatrix::zeros(lattice.dim());
    let n = lattice.sites() as i64;
    for x in lattice.positions() {
        for (coin, d) in [(0usize, d0), (1, d1)] {
            let mut target = x + d;
            if !lattice.contains(target) {
                match boundary {
                    Boundary::OpenLine => continue,
                    Boundary::Ring => {
                        target = lattice.x_min + (target - lattice.x_min).rem_euclid(n);
                    }
                }
            }
            m[(lattice.index(coin, target), lattice.index(coin, x))] = C64::new(1.0, 0.0);
        }
    }
    m
}

/// The step operator as an explicit matrix, built as the product of its dense
/// coin and shift factors.
pub fn step_operator_dense(
    spec: &WalkSpec,
    lattice: &Lattice,
    boundary: Boundary,
) -> Result<CMatrix> {
    step_operator_dense_in_frame(spec, lattice, boundary, Frame::AsGiven, DENSE_LIMIT)
}

pub fn step_operator_dense_in_frame(
    spec: &WalkSpec,
    lattice: &Lattice,
    boundary: Boundary,
    frame: Frame,
    limit: usize,
) -> Result<CMatrix> {
    let dim = lattice.dim();
    if dim > limit {
        return Err(Error::DimensionLimit { dim, limit });
    }
    let mut w = CMatrix::identity(dim);
    for f in spec.factors(frame) {
        let m = match f {
            Factor::Coin(p) => coin_operator_dense(&p, lattice),
            Factor::Shift(k) => shift_operator_dense(k, lattice, boundary),
        };
        w = m.matmul(&w);
    }
    Ok(w)
}
