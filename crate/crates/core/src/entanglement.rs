//! Coin-position negativity.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::state::{partial_transpose, DensityOperator, PureState};

pub use crate::linalg::{hermitian_eigenvalues, hermitian_eigh};

/// Round-off allowance on the reduced coin determinant.
pub const DET_CLAMP: f64 = 1e-14;

/// Negativity; at most 1/2 because the coin is a qubit.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct NegativityValue(f64);

impl NegativityValue {
    pub const MAX: f64 = 0.5;

    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<NegativityValue> for f64 {
    fn from(v: NegativityValue) -> f64 {
        v.0
    }
}

/// Reduced coin matrix `rho_c = Tr_x |psi><psi|` as `(rho00, rho11, rho01)`.
pub fn reduced_coin(state: &PureState) -> (f64, f64, num_complex::Complex64) {
    let mut r00 = 0.0;
    let mut r11 = 0.0;
    let mut r01 = num_complex::Complex64::new(0.0, 0.0);
    for s in state.amplitudes().chunks_exact(2) {
        r00 += s[0].norm_sqr();
        r11 += s[1].norm_sqr();
        r01 += s[0] * s[1].conj();
    }
    (r00, r11, r01)
}

/// For a pure state the negativity is the product of the two Schmidt
/// coefficients, i.e. `sqrt(det rho_c)`.
///
/// Close to a product state `r00 r11 - |r01|^2` cancels catastrophically, so
/// the determinant is then recomputed as `sum_{x<y} |a_x b_y - a_y b_x|^2`.
/// The result is clamped to the physical range `[0, 1/2]`.
pub fn negativity_pure(state: &PureState) -> Result<NegativityValue> {
    let (r00, r11, r01) = reduced_coin(state);
    let mut det = r00 * r11 - r01.norm_sqr();
    if det < -DET_CLAMP {
        return Err(Error::NegativeDeterminant(det));
    }
    if det < CANCELLATION_RATIO * r00 * r11 {
        det = lagrange_determinant(state.amplitudes());
    }
    Ok(NegativityValue(
        det.max(0.0).sqrt().min(NegativityValue::MAX),
    ))
}

/// Below this fraction of `r00 r11` the direct determinant has lost most of
/// its significant digits.
const CANCELLATION_RATIO: f64 = 1e-4;

fn lagrange_determinant(amps: &[num_complex::Complex64]) -> f64 {
    let support: Vec<(num_complex::Complex64, num_complex::Complex64)> = amps
        .chunks_exact(2)
        .filter(|s| {
            s[0] != num_complex::Complex64::new(0.0, 0.0)
                || s[1] != num_complex::Complex64::new(0.0, 0.0)
        })
        .map(|s| (s[0], s[1]))
        .collect();
    let mut det = 0.0;
    for (i, &(ax, bx)) in support.iter().enumerate() {
        for &(ay, by) in &support[i + 1..] {
            det += (ax * by - ay * bx).norm_sqr();
        }
    }
    det
}

/// Sum of `(|l| - l) / 2` over the eigenvalues of the coin partial transpose.
pub fn negativity_mixed(rho: &DensityOperator) -> Result<NegativityValue> {
    let trimmed = rho.trimmed();
    let pt = partial_transpose(&trimmed);
    let ev = linalg::hermitian_eigenvalues(&pt)?;
    Ok(NegativityValue(
        negativity_from_spectrum(&ev).clamp(0.0, NegativityValue::MAX),
    ))
}

pub fn negativity_from_spectrum(eigenvalues: &[f64]) -> f64 {
    eigenvalues.iter().map(|l| (l.abs() - l) / 2.0).sum()
}
