//! Dense complex square matrices and Hermitian eigensolvers.
//!
//! Matrices are stored row-major. Two eigensolvers are provided: a cyclic
//! Jacobi method (eigenvalues and eigenvectors) and a Householder
//! tridiagonalization followed by implicit QL (eigenvalues only), which is
//! used for the large partial transposes produced by density-matrix runs.

use std::ops::{Index, IndexMut};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Largest dimension for which [`hermitian_eigenvalues`] uses Jacobi.
pub const JACOBI_MAX_DIM: usize = 64;

/// Jacobi sweep limit.
pub const MAX_SWEEPS: usize = 100;

/// Accepted Hermiticity deviation on input.
pub const HERMITIAN_TOL: f64 = 1e-10;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix {
            n,
            data: vec![ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        CMatrix { n, data }
    }

    /// Builds a matrix from row-major data; panics if the length is not a square.
    pub fn from_row_major(n: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), n * n, "row-major data must hold n*n entries");
        CMatrix { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)])
    }

    /// Product `self * rhs`. Zero entries of `self` are skipped, so products of
    /// sparse factors (coins, shifts) stay cheap even at a few thousand rows.
    pub fn matmul(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            let out_row = &mut out.data[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let rhs_row = &rhs.data[k * n..(k + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `<u| self |v>`
    pub fn expectation(&self, u: &[C64], v: &[C64]) -> C64 {
        let mv = self.mul_vec(v);
        u.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn trace(&self) -> C64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        CMatrix {
            n: self.n,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, rhs: &CMatrix) -> Self {
        assert_eq!(self.n, rhs.n);
        CMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &CMatrix) -> Self {
        assert_eq!(self.n, rhs.n);
        CMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, rhs: &CMatrix) -> f64 {
        assert_eq!(self.n, rhs.n);
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |A - A^dagger|`
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.n;
        let mut dev = 0.0f64;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// `max |A^dagger A - I|`
    pub fn unitarity_deviation(&self) -> f64 {
        self.adjoint()
            .matmul(self)
            .max_abs_diff(&CMatrix::identity(self.n))
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.n + j]
    }
}

/// Eigenvalues (ascending) with eigenvectors stored as matrix columns.
#[derive(Clone, Debug)]
pub struct Eigh {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl Eigh {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }
}

fn check_hermitian(a: &CMatrix) -> Result<()> {
    let dev = a.hermitian_deviation();
    if dev > HERMITIAN_TOL || !dev.is_finite() {
        return Err(Error::NotHermitian(dev));
    }
    Ok(())
}

/// Sorted eigenvalues of a Hermitian matrix.
///
/// Small matrices go through Jacobi; larger ones through Householder
/// tridiagonalization and implicit QL.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Result<Vec<f64>> {
    if a.dim() <= JACOBI_MAX_DIM {
        jacobi_eigenvalues(a)
    } else {
        tridiagonal_eigenvalues(a)
    }
}

/// Eigenvalues and eigenvectors by cyclic Jacobi.
pub fn hermitian_eigh(a: &CMatrix) -> Result<Eigh> {
    check_hermitian(a)?;
    let (values, vectors) = jacobi(a, true)?;
    Ok(Eigh {
        values,
        vectors: vectors.expect("vectors requested"),
    })
}

pub fn jacobi_eigenvalues(a: &CMatrix) -> Result<Vec<f64>> {
    check_hermitian(a)?;
    Ok(jacobi(a, false)?.0)
}

fn off_diagonal_max(a: &CMatrix) -> f64 {
    let n = a.dim();
    let mut m = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            m = m.max(a[(i, j)].norm());
        }
    }
    m
}

/// Cyclic complex Jacobi. Each rotation first removes the phase of the pivot
/// `a_pq = |a_pq| e^{i phi}` and then applies a real Givens rotation.
fn jacobi(input: &CMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<CMatrix>)> {
    let n = input.dim();
    let mut a = input.clone();
    // Symmetrize exactly so the working copy is Hermitian to the last bit.
    for i in 0..n {
        a[(i, i)] = C64::new(a[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let avg = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
    }
    let mut v = if want_vectors {
        Some(CMatrix::identity(n))
    } else {
        None
    };

    let scale = a.max_abs();
    let threshold = 1e-12 * scale;
    let mut sweeps = 0;
    loop {
        let off = off_diagonal_max(&a);
        if off <= threshold {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                residual: off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let b = a[(p, q)];
                let mag = b.norm();
                if mag <= threshold {
                    continue;
                }
                let phase = b / mag; // e^{i phi}
                let phase_conj = phase.conj();
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // Columns p, q:  a_rp <- c a_rp - s e^{-i phi} a_rq,
                //                a_rq <- s a_rp + c e^{-i phi} a_rq.
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[(r, p)];
                    let arq = a[(r, q)] * phase_conj;
                    let new_rp = arp * c - arq * s;
                    let new_rq = arp * s + arq * c;
                    a[(r, p)] = new_rp;
                    a[(r, q)] = new_rq;
                    a[(p, r)] = new_rp.conj();
                    a[(q, r)] = new_rq.conj();
                }
                a[(p, p)] = C64::new(app - t * mag, 0.0);
                a[(q, q)] = C64::new(aqq + t * mag, 0.0);
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;

                if let Some(v) = v.as_mut() {
                    for r in 0..n {
                        let vrp = v[(r, p)];
                        let vrq = v[(r, q)] * phase_conj;
                        v[(r, p)] = vrp * c - vrq * s;
                        v[(r, q)] = vrp * s + vrq * c;
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = v.map(|v| CMatrix::from_fn(n, |r, k| v[(r, order[k])]));
    Ok((values, vectors))
}

/// Eigenvalues via Householder reduction to real symmetric tridiagonal form
/// followed by implicit QL with Wilkinson-type shifts.
pub fn tridiagonal_eigenvalues(input: &CMatrix) -> Result<Vec<f64>> {
    check_hermitian(input)?;
    let (mut d, mut e) = householder_tridiagonal(input);
    tql_eigenvalues(&mut d, &mut e)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Returns the diagonal and the moduli of the sub-diagonal (`e[k]` couples
/// `k` and `k + 1`; the last entry is 0).
fn householder_tridiagonal(input: &CMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = input.dim();
    let mut a = input.clone();
    let mut e = vec![0.0; n];
    let mut v = vec![ZERO; n];
    let mut p = vec![ZERO; n];
    for k in 0..n.saturating_sub(2) {
        let lo = k + 1;
        let x_norm2: f64 = (lo..n).map(|i| a[(i, k)].norm_sqr()).sum();
        let tail2: f64 = ((lo + 1)..n).map(|i| a[(i, k)].norm_sqr()).sum();
        if tail2 == 0.0 {
            e[k] = a[(lo, k)].norm();
            continue;
        }
        let x_norm = x_norm2.sqrt();
        let x0 = a[(lo, k)];
        let phase = if x0.norm() == 0.0 {
            ONE
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * x_norm;

        for i in lo..n {
            v[i] = a[(i, k)];
        }
        v[lo] -= alpha;
        let v_norm = (lo..n).map(|i| v[i].norm_sqr()).sum::<f64>().sqrt();
        for vi in v[lo..n].iter_mut() {
            *vi /= v_norm;
        }

        // p = A v on the trailing block, K = v^dagger p, w = p - K v.
        for i in lo..n {
            let row = &a.data[i * n..(i + 1) * n];
            p[i] = (lo..n).map(|j| row[j] * v[j]).sum();
        }
        let kk: f64 = (lo..n).map(|i| (v[i].conj() * p[i]).re).sum();
        for i in lo..n {
            p[i] -= v[i] * kk;
        }
        // A <- A - 2 (v w^dagger + w v^dagger)
        for i in lo..n {
            let vi2 = v[i] * 2.0;
            let wi2 = p[i] * 2.0;
            let row = &mut a.data[i * n..(i + 1) * n];
            for j in lo..n {
                row[j] -= vi2 * p[j].conj() + wi2 * v[j].conj();
            }
        }
        a[(lo, k)] = alpha;
        a[(k, lo)] = alpha.conj();
        for i in (lo + 1)..n {
            a[(i, k)] = ZERO;
            a[(k, i)] = ZERO;
        }
        e[k] = x_norm;
    }
    if n >= 2 {
        e[n - 2] = a[(n - 1, n - 2)].norm();
    }
    let d = (0..n).map(|i| a[(i, i)].re).collect();
    (d, e)
}

fn tql_eigenvalues(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    const MAX_ITER: usize = 60;
    let scale = d.iter().chain(e.iter()).fold(0.0f64, |a, v| a.max(v.abs()));
    let floor = f64::EPSILON * scale;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd || e[m].abs() <= floor {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            if iter == MAX_ITER {
                return Err(Error::NoConvergence {
                    sweeps: iter,
                    residual: e[l].abs(),
                });
            }
            iter += 1;
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
