//! Quasienergy bands, gap maps and edge modes at domain interfaces.
//!
//! Quasienergies follow `W |psi> = e^{-i eps} |psi>` and are reported in
//! `(-pi, pi]`.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigh, CMatrix};
use crate::params::{GridAxis, WalkParams};
use crate::state::PureState;
use crate::symmetry::ChiralOperator;
use crate::walk::{
    coin_matrix, step_operator_dense_in_frame, Boundary, Factor, Frame, Lattice, WalkSpec,
    DENSE_LIMIT,
};

pub const DEFAULT_K_SAMPLES: usize = 512;
pub const MIN_K_SAMPLES: usize = 64;
pub const DEFAULT_EDGE_TOL: f64 = 1e-6;
pub const DEFAULT_INTERFACE_WINDOW: usize = 10;

/// Eigenvalues of `H = (W + W^dagger)/2` closer than this are treated as one
/// cluster when resolving them with `A = (W - W^dagger)/2i`.
const CLUSTER_TOL: f64 = 1e-9;

type Mat2 = [[C64; 2]; 2];

fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[C64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_phase(e: f64) -> f64 {
    let r = (e + PI).rem_euclid(2.0 * PI) - PI;
    if r <= -PI {
        r + 2.0 * PI
    } else {
        r
    }
}

pub fn circular_distance(a: f64, b: f64) -> f64 {
    wrap_phase(a - b).abs()
}

/// Bottleneck distance between two equally sized multisets of phases on the
/// circle. Optimal circular matchings of sorted sets are cyclic shifts, so
/// all shifts are tried.
pub fn circular_matching_distance(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    if a.is_empty() {
        return 0.0;
    }
    let sort = |v: &[f64]| {
        let mut w: Vec<f64> = v.iter().map(|&e| wrap_phase(e)).collect();
        w.sort_by(f64::total_cmp);
        w
    };
    let (a, b) = (sort(a), sort(b));
    let n = a.len();
    (0..n)
        .map(|shift| {
            (0..n)
                .map(|i| circular_distance(a[i], b[(i + shift) % n]))
                .fold(0.0, f64::max)
        })
        .fold(f64::INFINITY, f64::min)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GapTarget {
    Zero,
    Pi,
}

impl GapTarget {
    pub fn phase(self) -> f64 {
        match self {
            GapTarget::Zero => 0.0,
            GapTarget::Pi => PI,
        }
    }
}

/// Momentum-space step operator of a homogeneous walk.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochOperator {
    pub k: f64,
    pub matrix: Mat2,
}

impl BlochOperator {
    /// Both quasienergies.
    pub fn quasienergies(&self) -> [f64; 2] {
        let m = &self.matrix;
        let tr = m[0][0] + m[1][1];
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let disc = (tr * tr - det * 4.0).sqrt();
        let l1 = (tr + disc) * 0.5;
        let l2 = (tr - disc) * 0.5;
        [wrap_phase(-l1.arg()), wrap_phase(-l2.arg())]
    }

    pub fn unitarity_deviation(&self) -> f64 {
        let m = &self.matrix;
        let mut dev = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                let v: C64 = (0..2).map(|r| m[r][i].conj() * m[r][j]).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((v - target).norm());
            }
        }
        dev
    }
}

/// Fourier transform of the step: a shift by `d` sites becomes `e^{-i d k}`.
pub fn bloch_step_operator(spec: &WalkSpec, k: f64) -> Result<BlochOperator> {
    if !spec.is_homogeneous() {
        return Err(Error::NonUniformProfile);
    }
    let mut m: Mat2 = [
        [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
    ];
    for f in spec.factors(Frame::AsGiven) {
        let factor: Mat2 = match f {
            Factor::Coin(p) => {
                let r = coin_matrix(p.angle_at(0));
                [
                    [C64::new(r[0][0], 0.0), C64::new(r[0][1], 0.0)],
                    [C64::new(r[1][0], 0.0), C64::new(r[1][1], 0.0)],
                ]
            }
            Factor::Shift(s) => {
                let (d0, d1) = s.displacements();
                [
                    [C64::from_polar(1.0, -(d0 as f64) * k), C64::new(0.0, 0.0)],
                    [C64::new(0.0, 0.0), C64::from_polar(1.0, -(d1 as f64) * k)],
                ]
            }
        };
        m = mat2_mul(&factor, &m);
    }
    Ok(BlochOperator { k, matrix: m })
}

/// Uniform momentum grid on `[-pi, pi)`.
pub fn k_grid(samples: usize) -> impl Iterator<Item = f64> {
    (0..samples).map(move |j| -PI + 2.0 * PI * j as f64 / samples as f64)
}

/// Smallest circular distance of any band to the target quasienergy.
pub fn quasienergy_gap(spec: &WalkSpec, at: GapTarget, k_samples: usize) -> Result<f64> {
    let (g0, gpi) = gaps(spec, k_samples)?;
    Ok(match at {
        GapTarget::Zero => g0,
        GapTarget::Pi => gpi,
    })
}

/// `(gap at 0, gap at pi)` from a single k-scan.
pub fn gaps(spec: &WalkSpec, k_samples: usize) -> Result<(f64, f64)> {
    if k_samples < MIN_K_SAMPLES {
        return Err(Error::config(
            "k_samples",
            format!("need at least {MIN_K_SAMPLES}, got {k_samples}"),
        ));
    }
    let mut g0 = f64::INFINITY;
    let mut gpi = f64::INFINITY;
    for k in k_grid(k_samples) {
        for e in bloch_step_operator(spec, k)?.quasienergies() {
            g0 = g0.min(circular_distance(e, 0.0));
            gpi = gpi.min(circular_distance(e, PI));
        }
    }
    Ok((g0, gpi))
}

/// Gap at 0 and pi over a two-parameter grid. Rows follow `axis1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapMap {
    pub axis1: GridAxis,
    pub axis2: GridAxis,
    pub gap0: Vec<Vec<f64>>,
    pub gap_pi: Vec<Vec<f64>>,
}

pub fn gap_map(
    template: &WalkParams,
    axis1: &GridAxis,
    axis2: &GridAxis,
    k_samples: usize,
) -> Result<GapMap> {
    let v1 = axis1.values();
    let v2 = axis2.values();
    let cells: Vec<(usize, usize)> = (0..v1.len())
        .flat_map(|i| (0..v2.len()).map(move |j| (i, j)))
        .collect();
    let results: Vec<(f64, f64)> = cells
        .par_iter()
        .map(|&(i, j)| {
            let mut p = template.clone();
            p.set(&axis1.name, v1[i])?;
            p.set(&axis2.name, v2[j])?;
            gaps(&p.to_spec()?, k_samples)
        })
        .collect::<Result<_>>()?;
    let mut gap0 = vec![vec![0.0; v2.len()]; v1.len()];
    let mut gap_pi = gap0.clone();
    for (&(i, j), &(a, b)) in cells.iter().zip(&results) {
        gap0[i][j] = a;
        gap_pi[i][j] = b;
    }
    Ok(GapMap {
        axis1: axis1.clone(),
        axis2: axis2.clone(),
        gap0,
        gap_pi,
    })
}

/// An eigenpair of a unitary matrix.
#[derive(Clone, Debug)]
pub struct UnitaryEigenpair {
    pub quasienergy: f64,
    pub vector: Vec<C64>,
}

/// Diagonalizes a unitary through the commuting Hermitian pair
/// `H = (W + W^dagger)/2`, `A = (W - W^dagger)/2i`: first `H`, then `A`
/// inside each degenerate cluster of `H`.
pub fn unitary_eigen(w: &CMatrix) -> Result<Vec<UnitaryEigenpair>> {
    let (h, a) = hermitian_parts(w);
    let eig = hermitian_eigh(&h)?;
    let n = w.dim();
    let mut vectors: Vec<Vec<C64>> = (0..n).map(|k| eig.vector(k)).collect();

    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && eig.values[end] - eig.values[end - 1] <= CLUSTER_TOL {
            end += 1;
        }
        if end - start > 1 {
            let block = &vectors[start..end];
            let rotated = rotate_within(block, &a)?;
            vectors.splice(start..end, rotated);
        }
        start = end;
    }

    Ok(vectors
        .into_iter()
        .map(|v| {
            let z = w.expectation(&v, &v);
            UnitaryEigenpair {
                quasienergy: wrap_phase(-z.arg()),
                vector: v,
            }
        })
        .collect())
}

pub fn hermitian_parts(w: &CMatrix) -> (CMatrix, CMatrix) {
    let wd = w.adjoint();
    let h = w.add(&wd).scale(C64::new(0.5, 0.0));
    let a = w.sub(&wd).scale(C64::new(0.0, -0.5));
    (h, a)
}

/// Diagonalizes `op` restricted to the span of `basis` (orthonormal) and
/// returns the rotated basis.
fn rotate_within(basis: &[Vec<C64>], op: &CMatrix) -> Result<Vec<Vec<C64>>> {
    let m = basis.len();
    let applied: Vec<Vec<C64>> = basis.iter().map(|v| op.mul_vec(v)).collect();
    let sub = CMatrix::from_fn(m, |i, j| {
        basis[i]
            .iter()
            .zip(&applied[j])
            .map(|(a, b)| a.conj() * b)
            .sum()
    });
    let eig = hermitian_eigh(&sub)?;
    Ok((0..m)
        .map(|k| {
            let mut out = vec![C64::new(0.0, 0.0); basis[0].len()];
            for (i, b) in basis.iter().enumerate() {
                let coef = eig.vectors[(i, k)];
                for (o, x) in out.iter_mut().zip(b) {
                    *o += coef * x;
                }
            }
            out
        })
        .collect())
}

/// All quasienergies of the ring operator, ascending.
pub fn ring_quasienergies(spec: &WalkSpec, ring_sites: usize) -> Result<Vec<f64>> {
    let lattice = Lattice::ring(ring_sites)?;
    let w =
        step_operator_dense_in_frame(spec, &lattice, Boundary::Ring, Frame::AsGiven, DENSE_LIMIT)?;
    let mut e: Vec<f64> = unitary_eigen(&w)?
        .into_iter()
        .map(|p| p.quasienergy)
        .collect();
    e.sort_by(f64::total_cmp);
    Ok(e)
}

/// A ring eigenstate pinned at quasienergy 0 or pi.
#[derive(Clone, Debug)]
pub struct EdgeMode {
    pub quasienergy: f64,
    pub target: GapTarget,
    /// Eigenvector in `frame`; position probabilities are frame independent.
    pub state: PureState,
    pub frame: Frame,
    pub interface_weight: f64,
    pub chiral_expectation: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeModeOptions {
    pub tol: f64,
    pub interface_window: usize,
}

impl Default for EdgeModeOptions {
    fn default() -> Self {
        EdgeModeOptions {
            tol: DEFAULT_EDGE_TOL,
            interface_window: DEFAULT_INTERFACE_WINDOW,
        }
    }
}

/// Probability on the `window` sites at each side of the two ring
/// interfaces (the origin and the seam).
pub fn interface_weight(state: &PureState, window: usize) -> f64 {
    let l = state.lattice();
    let w = window as i64;
    state
        .distribution()
        .iter()
        .filter(|&(x, _)| (-w..w).contains(&x) || x < l.x_min() + w || x > l.x_max() - w)
        .map(|(_, p)| p)
        .sum()
}

/// Eigenstates of the ring operator (two domains joined at the origin and at
/// the seam) with quasienergy within `tol` of 0 or pi. States sharing a
/// target are rotated into eigenstates of `Gamma`.
pub fn edge_modes(
    spec: &WalkSpec,
    ring_sites: usize,
    opts: EdgeModeOptions,
) -> Result<Vec<EdgeMode>> {
    if ring_sites < 32 || !ring_sites.is_multiple_of(2) {
        return Err(Error::InvalidRingSize(ring_sites));
    }
    let lattice = Lattice::ring(ring_sites)?;
    let frame = spec.natural_chiral_frame();
    let w = step_operator_dense_in_frame(spec, &lattice, Boundary::Ring, frame, DENSE_LIMIT)?;
    let pairs = unitary_eigen(&w)?;
    let gamma = ChiralOperator::new(lattice);

    let mut modes = Vec::new();
    for target in [GapTarget::Zero, GapTarget::Pi] {
        let selected: Vec<Vec<C64>> = pairs
            .iter()
            .filter(|p| circular_distance(p.quasienergy, target.phase()) <= opts.tol)
            .map(|p| p.vector.clone())
            .collect();
        if selected.is_empty() {
            continue;
        }
        let rotated = rotate_within(&selected, &gamma.dense())?;
        for v in rotated {
            let z = w.expectation(&v, &v);
            let state = PureState::from_amplitudes(lattice, Boundary::Ring, v)?;
            modes.push(EdgeMode {
                quasienergy: wrap_phase(-z.arg()),
                target,
                interface_weight: interface_weight(&state, opts.interface_window),
                chiral_expectation: gamma.expectation(state.amplitudes()),
                state,
                frame,
            });
        }
    }
    Ok(modes)
}
