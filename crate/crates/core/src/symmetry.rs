//! Numerical checks of the chiral and particle-hole relations.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::Result;
use crate::linalg::CMatrix;
use crate::spectral;
use crate::walk::{
    coin_matrix, shift_operator_dense, shift_operator_dense_displaced,
    step_operator_dense_in_frame, Boundary, Frame, Lattice, ShiftKind, WalkSpec, DENSE_LIMIT,
};

pub const CHIRAL_TOL: f64 = 1e-12;
pub const PAIRING_TOL: f64 = 1e-8;

/// `Gamma = sigma_x (x) I`: swaps the two coin components on every site.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChiralOperator {
    lattice: Lattice,
}

impl ChiralOperator {
    pub fn new(lattice: Lattice) -> Self {
        ChiralOperator { lattice }
    }

    pub fn apply(&self, amps: &mut [C64]) {
        debug_assert_eq!(amps.len(), self.lattice.dim());
        for pair in amps.chunks_exact_mut(2) {
            pair.swap(0, 1);
        }
    }

    pub fn expectation(&self, amps: &[C64]) -> f64 {
        amps.chunks_exact(2)
            .map(|s| (s[0].conj() * s[1] + s[1].conj() * s[0]).re)
            .sum()
    }

    pub fn dense(&self) -> CMatrix {
        let n = self.lattice.dim();
        CMatrix::from_fn(n, |i, j| {
            if i ^ 1 == j {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    /// `Gamma M Gamma^{-1}` by permuting rows and columns.
    pub fn conjugate(&self, m: &CMatrix) -> CMatrix {
        CMatrix::from_fn(m.dim(), |i, j| m[(i ^ 1, j ^ 1)])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymmetryReport {
    pub variant: &'static str,
    pub frame: Frame,
    /// `theta4 == theta2` for the double split-step walk, always true otherwise.
    pub chiral_condition: bool,
    pub coin_residual: f64,
    pub shift_residual: f64,
    pub chiral_residual: f64,
    pub phs_residual: f64,
    pub pairing_residual: f64,
    pub ring_sites: usize,
    pub passed: bool,
}

/// `max |sigma_x R sigma_x - R^{-1}|`
pub fn coin_chiral_residual(theta: f64) -> f64 {
    let r = coin_matrix(theta);
    let conj = [[r[1][1], r[1][0]], [r[0][1], r[0][0]]];
    let inv = [[r[0][0], r[1][0]], [r[0][1], r[1][1]]];
    let mut m = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            m = m.max((conj[i][j] - inv[i][j]).abs());
        }
    }
    m
}

/// `max |Gamma S Gamma^{-1} - T^{-1}|` on a ring, where `T` is the partner
/// shift: `S+ <-> S-` and `S <-> S`.
pub fn shift_chiral_map(kind: ShiftKind, lattice: &Lattice) -> f64 {
    let gamma = ChiralOperator::new(*lattice);
    let s = shift_operator_dense(kind, lattice, Boundary::Ring);
    let partner = match kind {
        ShiftKind::Full => ShiftKind::Full,
        ShiftKind::Minus => ShiftKind::Plus,
        ShiftKind::Plus => ShiftKind::Minus,
    };
    let (d0, d1) = partner.displacements();
    let partner_inv = shift_operator_dense_displaced((-d0, -d1), lattice, Boundary::Ring);
    gamma.conjugate(&s).max_abs_diff(&partner_inv)
}

/// `max |Gamma W Gamma^{-1} W - I|` for the ring step operator in `frame`.
pub fn walk_chiral_residual(spec: &WalkSpec, lattice: &Lattice, frame: Frame) -> Result<f64> {
    let w = step_operator_dense_in_frame(spec, lattice, Boundary::Ring, frame, DENSE_LIMIT)?;
    let gamma = ChiralOperator::new(*lattice);
    Ok(gamma
        .conjugate(&w)
        .matmul(&w)
        .max_abs_diff(&CMatrix::identity(w.dim())))
}

/// Largest imaginary part among the entries of the ring step operator.
pub fn particle_hole_residual(spec: &WalkSpec, lattice: &Lattice) -> Result<f64> {
    let w =
        step_operator_dense_in_frame(spec, lattice, Boundary::Ring, Frame::AsGiven, DENSE_LIMIT)?;
    Ok(w.as_slice().iter().map(|z| z.im.abs()).fold(0.0, f64::max))
}

/// Circular bottleneck distance between the quasienergy multisets `{e}` and `{-e}`.
pub fn spectrum_pairing_residual(spec: &WalkSpec, lattice: &Lattice) -> Result<f64> {
    let w =
        step_operator_dense_in_frame(spec, lattice, Boundary::Ring, Frame::AsGiven, DENSE_LIMIT)?;
    let phases: Vec<f64> = spectral::unitary_eigen(&w)?
        .iter()
        .map(|e| e.quasienergy)
        .collect();
    let negated: Vec<f64> = phases.iter().map(|e| -e).collect();
    Ok(spectral::circular_matching_distance(&phases, &negated))
}

/// Runs every check on a ring of `ring_sites` sites.
pub fn symmetry_report(
    spec: &WalkSpec,
    ring_sites: usize,
    frame: Option<Frame>,
) -> Result<SymmetryReport> {
    let lattice = Lattice::ring(ring_sites)?;
    let frame = frame.unwrap_or_else(|| spec.natural_chiral_frame());
    let coin_residual = spec
        .profiles()
        .iter()
        .flat_map(|p| [p.angle_at(-1), p.angle_at(0)])
        .map(coin_chiral_residual)
        .fold(0.0, f64::max);
    let shift_residual = [ShiftKind::Full, ShiftKind::Minus, ShiftKind::Plus]
        .iter()
        .map(|&k| shift_chiral_map(k, &lattice))
        .fold(0.0, f64::max);
    let chiral_residual = walk_chiral_residual(spec, &lattice, frame)?;
    let phs_residual = particle_hole_residual(spec, &lattice)?;
    let pairing_residual = spectrum_pairing_residual(spec, &lattice)?;
    let passed = coin_residual <= CHIRAL_TOL
        && shift_residual <= CHIRAL_TOL
        && chiral_residual <= CHIRAL_TOL
        && phs_residual == 0.0
        && pairing_residual <= PAIRING_TOL;
    Ok(SymmetryReport {
        variant: match spec {
            WalkSpec::Standard { .. } => "standard",
            WalkSpec::SplitStep { .. } => "split-step",
            WalkSpec::DoubleSplitStep { .. } => "double-split-step",
        },
        frame,
        chiral_condition: spec.satisfies_chiral_condition(),
        coin_residual,
        shift_residual,
        chiral_residual,
        phs_residual,
        pairing_residual,
        ring_sites,
        passed,
    })
}
