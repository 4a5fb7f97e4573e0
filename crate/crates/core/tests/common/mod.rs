//! Dense reference model built from the defining formulas with nalgebra,
//! sharing no code with the library kernels. Index layout matches the
//! library: `2 * (x - x_min) + coin`.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use qwalk::params::{Variant, WalkParams};
use qwalk::walk::WalkSpec;

pub type M = DMatrix<C64>;

/// Walk parameters: variant and `(minus, plus)` per coin.
#[derive(Clone, Debug)]
pub struct RefWalk {
    pub variant: Variant,
    pub angles: Vec<(f64, f64)>,
}

impl RefWalk {
    pub fn spec(&self) -> WalkSpec {
        let mut p = WalkParams::new(self.variant);
        for (i, &(m, pl)) in self.angles.iter().enumerate() {
            p.set(&format!("theta{}-", i + 1), m).unwrap();
            p.set(&format!("theta{}+", i + 1), pl).unwrap();
        }
        p.to_spec().unwrap()
    }

    pub fn split(t1: f64, t2m: f64, t2p: f64) -> Self {
        RefWalk {
            variant: Variant::SplitStep,
            angles: vec![(t1, t1), (t2m, t2p)],
        }
    }

    fn ops(&self) -> Vec<Op> {
        let c = |i: usize| Op::Coin(self.angles[i]);
        match self.variant {
            Variant::Standard => vec![c(0), Op::Shift(-1, 1)],
            Variant::SplitStep => vec![c(0), Op::Shift(-1, 0), c(1), Op::Shift(0, 1)],
            Variant::DoubleSplitStep => vec![
                c(0),
                Op::Shift(-1, 0),
                c(1),
                Op::Shift(-1, 0),
                c(2),
                Op::Shift(0, 1),
                c(3),
                Op::Shift(0, 1),
            ],
        }
    }
}

enum Op {
    Coin((f64, f64)),
    /// Displacement of coin 0 and coin 1.
    Shift(i64, i64),
}

#[derive(Clone, Copy, Debug)]
pub struct RefLattice {
    pub x_min: i64,
    pub sites: usize,
    pub ring: bool,
}

impl RefLattice {
    pub fn line(radius: i64) -> Self {
        RefLattice {
            x_min: -radius,
            sites: (2 * radius + 1) as usize,
            ring: false,
        }
    }

    /// Sites `-n/2 .. n/2 - 1`.
    pub fn ring(n: usize) -> Self {
        RefLattice {
            x_min: -(n as i64 / 2),
            sites: n,
            ring: true,
        }
    }

    pub fn dim(&self) -> usize {
        2 * self.sites
    }

    fn slot(&self, x: i64) -> Option<usize> {
        let mut i = x - self.x_min;
        if self.ring {
            i = i.rem_euclid(self.sites as i64);
        }
        (0..self.sites as i64).contains(&i).then_some(i as usize)
    }
}

pub fn coin(theta: f64) -> [[f64; 2]; 2] {
    let (s, c) = (theta / 2.0).sin_cos();
    [[c, -s], [s, c]]
}

fn op_matrix(op: &Op, l: &RefLattice) -> M {
    let n = l.dim();
    let mut m = M::zeros(n, n);
    for i in 0..l.sites {
        let x = l.x_min + i as i64;
        match *op {
            Op::Coin((minus, plus)) => {
                let r = coin(if x < 0 { minus } else { plus });
                for a in 0..2 {
                    for b in 0..2 {
                        m[(2 * i + a, 2 * i + b)] = C64::new(r[a][b], 0.0);
                    }
                }
            }
            Op::Shift(d0, d1) => {
                for (c, d) in [(0, d0), (1, d1)] {
                    // open line: amplitude pushed past the edge is dropped
                    if let Some(j) = l.slot(x + d) {
                        m[(2 * j + c, 2 * i + c)] = C64::new(1.0, 0.0);
                    }
                }
            }
        }
    }
    m
}

/// One full step as a dense matrix.
pub fn step_matrix(w: &RefWalk, l: &RefLattice) -> M {
    let n = l.dim();
    w.ops()
        .iter()
        .fold(M::identity(n, n), |acc, op| op_matrix(op, l) * acc)
}

pub fn initial(l: &RefLattice, alpha: C64, beta: C64) -> nalgebra::DVector<C64> {
    let mut v = nalgebra::DVector::zeros(l.dim());
    let i = l.slot(0).unwrap();
    v[2 * i] = alpha;
    v[2 * i + 1] = beta;
    v
}

pub fn pauli(k: char) -> [[C64; 2]; 2] {
    let (o, z, i) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 1.0));
    match k {
        'I' => [[o, z], [z, o]],
        'X' => [[z, o], [o, z]],
        'Y' => [[z, -i], [i, z]],
        'Z' => [[o, z], [z, -o]],
        _ => unreachable!(),
    }
}

fn local(p: [[C64; 2]; 2], l: &RefLattice) -> M {
    let n = l.dim();
    let mut m = M::zeros(n, n);
    for s in 0..l.sites {
        for a in 0..2 {
            for b in 0..2 {
                m[(2 * s + a, 2 * s + b)] = p[a][b];
            }
        }
    }
    m
}

/// `(weight, Pauli)` branches of a channel named `none|bitflip|yflip|zflip|depolarizing`.
pub fn branches(kind: &str, p: f64) -> Vec<(f64, char)> {
    match kind {
        "none" => vec![(1.0, 'I')],
        "bitflip" => vec![(1.0 - p, 'I'), (p, 'X')],
        "yflip" => vec![(1.0 - p, 'I'), (p, 'Y')],
        "zflip" => vec![(1.0 - p, 'I'), (p, 'Z')],
        "depolarizing" => vec![
            (1.0 - p, 'I'),
            (p / 3.0, 'X'),
            (p / 3.0, 'Y'),
            (p / 3.0, 'Z'),
        ],
        _ => unreachable!(),
    }
}

/// `rho <- sum_i w_i K_i W rho W^dagger K_i^dagger`.
pub fn noisy_step(rho: &M, w: &M, kind: &str, p: f64, l: &RefLattice) -> M {
    let u = w * rho * w.adjoint();
    branches(kind, p)
        .into_iter()
        .map(|(wt, k)| {
            let kk = local(pauli(k), l);
            (&kk * &u * kk.adjoint()) * C64::new(wt, 0.0)
        })
        .fold(M::zeros(l.dim(), l.dim()), |a, b| a + b)
}

pub fn partial_transpose(rho: &M) -> M {
    let n = rho.nrows();
    M::from_fn(n, n, |r, c| {
        let (xr, cr) = (r / 2, r % 2);
        let (xc, cc) = (c / 2, c % 2);
        rho[(2 * xr + cc, 2 * xc + cr)]
    })
}

pub fn hermitian_eigenvalues(m: &M) -> Vec<f64> {
    let mut v: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn negativity(rho: &M) -> f64 {
    hermitian_eigenvalues(&partial_transpose(rho))
        .iter()
        .map(|l| (l.abs() - l) / 2.0)
        .sum()
}

pub fn pure_density(v: &nalgebra::DVector<C64>) -> M {
    v * v.adjoint()
}

/// `cos(eps(k))` of a uniform walk from the 2x2 Bloch product; the Bloch
/// matrix has unit determinant, so its eigenphases are `+-acos(tr / 2)`.
pub fn bloch_cos(w: &RefWalk, k: f64) -> f64 {
    let mut b = [
        [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
    ];
    for op in w.ops() {
        let f = match op {
            Op::Coin((t, _)) => {
                let r = coin(t);
                [
                    [C64::new(r[0][0], 0.0), C64::new(r[0][1], 0.0)],
                    [C64::new(r[1][0], 0.0), C64::new(r[1][1], 0.0)],
                ]
            }
            Op::Shift(d0, d1) => [
                [C64::from_polar(1.0, -(d0 as f64) * k), C64::new(0.0, 0.0)],
                [C64::new(0.0, 0.0), C64::from_polar(1.0, -(d1 as f64) * k)],
            ],
        };
        let mut n = [[C64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                n[i][j] = f[i][0] * b[0][j] + f[i][1] * b[1][j];
            }
        }
        b = n;
    }
    let det = b[0][0] * b[1][1] - b[0][1] * b[1][0];
    assert!((det - C64::new(1.0, 0.0)).norm() < 1e-12);
    ((b[0][0] + b[1][1]) / 2.0).re
}

/// Gaps at 0 and pi from `cos eps` on a fine k grid.
pub fn reference_gaps(w: &RefWalk, samples: usize) -> (f64, f64) {
    let mut g0 = f64::INFINITY;
    let mut gpi = f64::INFINITY;
    for i in 0..samples {
        let k = -std::f64::consts::PI + 2.0 * std::f64::consts::PI * i as f64 / samples as f64;
        let e = bloch_cos(w, k).clamp(-1.0, 1.0).acos();
        g0 = g0.min(e);
        gpi = gpi.min(std::f64::consts::PI - e);
    }
    (g0, gpi)
}

pub fn max_abs_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Entrywise distance between a library matrix and a reference matrix.
pub fn matrix_diff(lib: &qwalk::linalg::CMatrix, r: &M) -> f64 {
    let n = lib.dim();
    assert_eq!((n, n), r.shape());
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| (lib[(i, j)] - r[(i, j)]).norm())
        .fold(0.0, f64::max)
}
