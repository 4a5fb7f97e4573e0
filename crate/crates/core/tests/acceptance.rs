//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! `cargo test -p qwalk --test acceptance -- 5 7` runs a subset.

mod common;

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use common::*;
use nalgebra::linalg::Schur;
use num_complex::Complex64 as C64;
use qwalk::entanglement::{negativity_mixed, negativity_pure};
use qwalk::experiments::run::{run_negativity_map, run_noise_compare};
use qwalk::experiments::{ExperimentConfig, ExperimentKind};
use qwalk::params::{GridAxis, Variant, WalkParams};
use qwalk::spectral::{edge_modes, gaps, EdgeModeOptions};
use qwalk::state::{localization_strength, ChannelKind, DensityOperator, NoiseChannel, PureState};
use qwalk::symmetry::{
    coin_chiral_residual, particle_hole_residual, spectrum_pairing_residual, walk_chiral_residual,
};
use qwalk::walk::{step_operator_dense, Boundary, CoinProfile, Frame, Lattice, WalkSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria whose failure is known and analysed; they still print FAIL.
const KNOWN_FAILURES: [u32; 1] = [6];

/// Localization strengths `w = 2`, cases (a)-(d), frozen from the dense
/// reference evolution.
const SPLIT_STEP_W2: [f64; 4] = [
    3.0260580112135712e-5,
    0.7546819526307855,
    0.03766703732245917,
    1.0,
];
const DOUBLE_SPLIT_STEP_W2: [f64; 4] = [
    0.03151307975286943,
    0.960387593588807,
    0.0005223518233849492,
    0.0005668878449310308,
];
/// 200/100-step retention of the `w = 5` strength: bitflip, yflip, zflip,
/// depolarizing. The density kernel is checked against the dense reference
/// channel in `oracle.rs`; a 200-step dense reference run is out of reach.
const NOISE_RETENTION: [f64; 4] = [
    0.8462799751127132,
    0.4047257263692907,
    0.6061498720889756,
    0.6003928947913678,
];
const FROZEN_TOL: f64 = 1e-9;

/// Number, name, check and time budget.
type Criterion = (u32, &'static str, fn() -> Outcome, Duration);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn symmetric() -> (C64, C64) {
    (C64::new(FRAC_1_SQRT_2, 0.0), C64::new(FRAC_1_SQRT_2, 0.0))
}

fn split(t1: f64, t2m: f64, t2p: f64) -> WalkSpec {
    RefWalk::split(t1, t2m, t2p).spec()
}

fn random_walk(rng: &mut ChaCha8Rng) -> RefWalk {
    let variant = [
        Variant::Standard,
        Variant::SplitStep,
        Variant::DoubleSplitStep,
    ][rng.gen_range(0..3)];
    let angles = (0..variant.coin_count())
        .map(|_| {
            let m = rng.gen_range(-2.0 * PI..2.0 * PI);
            let p = if rng.gen_bool(0.3) {
                m
            } else {
                rng.gen_range(-2.0 * PI..2.0 * PI)
            };
            (m, p)
        })
        .collect();
    RefWalk { variant, angles }
}

fn random_amplitudes(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
    let v: Vec<C64> = (0..n)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Library and reference `w = 2` strengths after `steps` steps from the symmetric state.
fn strengths(walk: &RefWalk, steps: usize) -> (f64, f64) {
    let spec = walk.spec();
    let lattice = Lattice::for_steps(&spec, steps);
    let (a, b) = symmetric();
    let mut psi = PureState::initial(a, b, lattice).unwrap();
    psi.evolve(&spec, steps).unwrap();
    let lib = localization_strength(&psi.distribution(), 2);

    let rl = RefLattice::line(lattice.x_max());
    let m = step_matrix(walk, &rl);
    let mut v = initial(&rl, a, b);
    for _ in 0..steps {
        v = &m * v;
    }
    let reference = (-2..=2i64)
        .map(|x| {
            let i = (x - rl.x_min) as usize;
            v[2 * i].norm_sqr() + v[2 * i + 1].norm_sqr()
        })
        .sum();
    (lib, reference)
}

/// Cases (b), (d) against (a), (c): returns the pass flag and a summary.
fn separation(walks: &[RefWalk; 4], steps: usize, frozen: &[f64; 4]) -> (bool, String) {
    let mut lib = [0.0; 4];
    let mut worst_oracle = 0.0f64;
    let mut worst_frozen = 0.0f64;
    for (i, w) in walks.iter().enumerate() {
        let (l, r) = strengths(w, steps);
        lib[i] = l;
        worst_oracle = worst_oracle.max((l - r).abs());
        worst_frozen = worst_frozen.max((l - frozen[i]).abs());
    }
    let ratio = lib[1].min(lib[3]) / lib[0].max(lib[2]);
    let passed = ratio >= 10.0 && worst_oracle <= 1e-10 && worst_frozen <= FROZEN_TOL;
    let detail = format!(
        "w2 (a) {:.4e} (b) {:.4e} (c) {:.4e} (d) {:.4e}; min localized / max delocalized = {ratio:.3}; \
         |lib - oracle| {worst_oracle:.1e}; |lib - frozen| {worst_frozen:.1e}",
        lib[0], lib[1], lib[2], lib[3]
    );
    (passed, detail)
}

fn criterion_1() -> Outcome {
    let spec = split(FRAC_PI_2, -0.75 * PI, 0.75 * PI);
    let (a, b) = symmetric();
    let mut psi = PureState::initial(a, b, Lattice::for_steps(&spec, 1000)).unwrap();
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        psi.evolve(&spec, 1).unwrap();
        worst = worst.max((psi.norm_sqr() - 1.0).abs());
    }
    outcome(
        worst <= 1e-10,
        format!("max |norm^2 - 1| over 1000 steps = {worst:.2e}"),
    )
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst_lib = 0.0f64;
    let mut worst_ref = 0.0f64;
    for _ in 0..50 {
        let walk = random_walk(&mut rng);
        let spec = walk.spec();
        let n = 2 * rng.gen_range(4..=32);
        let lattice = Lattice::ring(n).unwrap();
        let dense = step_operator_dense(&spec, &lattice, Boundary::Ring).unwrap();
        let reference = step_matrix(&walk, &RefLattice::ring(n));
        let amps = random_amplitudes(&mut rng, lattice.dim());
        let mut psi = PureState::from_amplitudes(lattice, Boundary::Ring, amps.clone()).unwrap();
        let mut v = amps.clone();
        let mut r = nalgebra::DVector::from_vec(amps);
        for _ in 0..20 {
            psi.evolve(&spec, 1).unwrap();
            v = dense.mul_vec(&v);
            r = &reference * r;
            worst_lib = worst_lib.max(max_abs_diff(psi.amplitudes(), &v));
            worst_ref = worst_ref.max(max_abs_diff(psi.amplitudes(), r.as_slice()));
        }
    }
    outcome(
        worst_lib <= 1e-12 && worst_ref <= 1e-12,
        format!("50 specs, rings 8..64, t <= 20: vs library dense {worst_lib:.2e}, vs reference {worst_ref:.2e}"),
    )
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let coin = (0..100)
        .map(|_| coin_chiral_residual(rng.gen_range(-2.0 * PI..2.0 * PI)))
        .fold(0.0, f64::max);

    let mut phs = 0.0f64;
    let mut pairing = 0.0f64;
    let ring = Lattice::ring(16).unwrap();
    for _ in 0..20 {
        let spec = random_walk(&mut rng).spec();
        phs = phs.max(particle_hole_residual(&spec, &ring).unwrap());
        pairing = pairing.max(spectrum_pairing_residual(&spec, &ring).unwrap());
    }

    let mut dss = 0.0f64;
    for _ in 0..20 {
        let mut p = WalkParams::new(Variant::DoubleSplitStep);
        p.tie_theta4 = true;
        for name in ["theta2-", "theta2+", "theta3-", "theta3+"] {
            p.set(name, rng.gen_range(-2.0 * PI..2.0 * PI)).unwrap();
        }
        let spec = p.to_spec().unwrap();
        assert_eq!(spec.natural_chiral_frame(), Frame::AsGiven);
        dss = dss.max(walk_chiral_residual(&spec, &ring, Frame::AsGiven).unwrap());
        pairing = pairing.max(spectrum_pairing_residual(&spec, &ring).unwrap());
    }
    outcome(
        coin <= 1e-15 && phs == 0.0 && dss <= 1e-12 && pairing <= 1e-8,
        format!("coin {coin:.1e}, particle-hole {phs:e}, double split-step chiral {dss:.1e}, pairing {pairing:.1e}"),
    )
}

fn criterion_4() -> Outcome {
    let (a, b) = symmetric();
    let mut exact = true;
    for spec in [
        WalkSpec::standard(CoinProfile::uniform(0.0).unwrap()),
        split(0.0, 0.0, 0.0),
    ] {
        let mut psi = PureState::initial(a, b, Lattice::for_steps(&spec, 1)).unwrap();
        psi.evolve(&spec, 1).unwrap();
        let pure = negativity_pure(&psi).unwrap().value();
        let mixed = negativity_mixed(&DensityOperator::from_pure(&psi))
            .unwrap()
            .value();
        exact &= pure == 0.5 && mixed == 0.5;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut agree = 0.0f64;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for _ in 0..20 {
        let spec = random_walk(&mut rng).spec();
        let amps = random_amplitudes(&mut rng, 2);
        let mut psi = PureState::initial(amps[0], amps[1], Lattice::for_steps(&spec, 30)).unwrap();
        for _ in 0..30 {
            psi.evolve(&spec, 1).unwrap();
            let n = negativity_pure(&psi).unwrap().value();
            lo = lo.min(n);
            hi = hi.max(n);
        }
        let pure = negativity_pure(&psi).unwrap().value();
        let mixed = negativity_mixed(&DensityOperator::from_pure(&psi))
            .unwrap()
            .value();
        agree = agree.max((pure - mixed).abs());
        lo = lo.min(mixed);
        hi = hi.max(mixed);
    }
    outcome(
        exact && agree <= 1e-8 && lo >= 0.0 && hi <= 0.5 + 1e-9,
        format!("theta = 0 gives exactly 0.5: {exact}; pure vs mixed at t = 30: {agree:.1e}; range [{lo:.3e}, {hi:.6}]"),
    )
}

fn criterion_5() -> Outcome {
    let walks = [
        RefWalk::split(FRAC_PI_2, -FRAC_PI_4, FRAC_PI_4),
        RefWalk::split(FRAC_PI_2, -0.75 * PI, 0.75 * PI),
        RefWalk::split(-1.5 * PI, 1.25 * PI, 0.75 * PI),
        RefWalk::split(-1.5 * PI, -PI, PI),
    ];
    let (passed, detail) = separation(&walks, 100, &SPLIT_STEP_W2);
    outcome(passed, detail)
}

fn dss(t2m: f64, t2p: f64, t3m: f64, t3p: f64) -> RefWalk {
    RefWalk {
        variant: Variant::DoubleSplitStep,
        angles: vec![(0.0, 0.0), (t2m, t2p), (t3m, t3p), (t2m, t2p)],
    }
}

fn criterion_6() -> Outcome {
    let walks = [
        dss(-FRAC_PI_4, FRAC_PI_4, PI, PI),
        dss(-FRAC_PI_8, FRAC_PI_8, -PI, PI),
        dss(-FRAC_PI_4, -0.75 * PI, FRAC_PI_4, FRAC_PI_4),
        dss(-3.0 * FRAC_PI_8, FRAC_PI_8, -1.5 * PI, -FRAC_PI_2),
    ];
    let (passed, detail) = separation(&walks, 50, &DOUBLE_SPLIT_STEP_W2);
    outcome(passed, detail)
}

/// Number of ring eigenphases within `tol` of 0 or pi, from the reference operator.
fn reference_pinned_count(walk: &RefWalk, n: usize, tol: f64) -> usize {
    let w = step_matrix(walk, &RefLattice::ring(n));
    let eig = Schur::try_new(w, 1e-14, 10_000)
        .unwrap()
        .eigenvalues()
        .unwrap();
    eig.iter()
        .filter(|z| z.arg().abs() <= tol || PI - z.arg().abs() <= tol)
        .count()
}

fn criterion_7() -> Outcome {
    let opts = EdgeModeOptions::default();
    let b = RefWalk::split(FRAC_PI_2, -0.75 * PI, 0.75 * PI);
    let a = RefWalk::split(FRAC_PI_2, -FRAC_PI_4, FRAC_PI_4);
    let modes_b = edge_modes(&b.spec(), 64, opts).unwrap();
    let modes_a = edge_modes(&a.spec(), 64, opts).unwrap();
    let good = |m: &&qwalk::spectral::EdgeMode| {
        m.interface_weight >= 0.9 && m.chiral_expectation.abs() >= 1.0 - 1e-6
    };
    let good_b = modes_b.iter().filter(good).count();
    let good_a = modes_a.iter().filter(good).count();
    let (ref_b, ref_a) = (
        reference_pinned_count(&b, 64, 1e-6),
        reference_pinned_count(&a, 64, 1e-6),
    );
    let min_weight = modes_b
        .iter()
        .map(|m| m.interface_weight)
        .fold(f64::INFINITY, f64::min);
    let min_gamma = modes_b
        .iter()
        .map(|m| m.chiral_expectation.abs())
        .fold(f64::INFINITY, f64::min);
    outcome(
        good_b >= 1 && modes_a.is_empty() && good_a == 0 && ref_b == modes_b.len() && ref_a == 0,
        format!(
            "case (b): {} pinned modes ({good_b} qualifying, min weight {min_weight:.4}, min |<G>| {min_gamma:.8}); \
             case (a): {} pinned modes; reference counts {ref_b} / {ref_a}",
            modes_b.len(),
            modes_a.len()
        ),
    )
}

fn criterion_8() -> Outcome {
    let axis = GridAxis::new("theta2", FRAC_PI_4, 0.75 * PI, 101);
    let path: Vec<(f64, f64)> = axis
        .values()
        .iter()
        .map(|&t2| {
            let (g0, gpi) = gaps(&split(FRAC_PI_2, t2, t2), 512).unwrap();
            (t2, g0.min(gpi))
        })
        .collect();
    let (at, dip) = path
        .iter()
        .copied()
        .fold((0.0, f64::INFINITY), |m, p| if p.1 < m.1 { p } else { m });
    let endpoint_oracle = |t2: f64| {
        let (g0, gpi) = reference_gaps(&RefWalk::split(FRAC_PI_2, t2, t2), 512);
        g0.min(gpi)
    };
    // floor: the reference gap at each end, less a small slack for acos rounding
    let floors = [
        endpoint_oracle(FRAC_PI_4) - 1e-7,
        endpoint_oracle(0.75 * PI) - 1e-7,
    ];
    let ends = [path[0].1, path[path.len() - 1].1];
    let passed = dip < 1e-2
        && floors.iter().all(|&f| f > 0.0)
        && ends[0] >= floors[0]
        && ends[1] >= floors[1];
    outcome(
        passed,
        format!(
            "min gap {dip:.2e} at theta2 = {at:.4}; endpoints {:.6} / {:.6} vs floors {:.6} / {:.6}",
            ends[0], ends[1], floors[0], floors[1]
        ),
    )
}

fn criterion_9() -> Outcome {
    let spec = split(-FRAC_PI_4, -0.75 * PI, 0.75 * PI);
    let steps = 200;
    let (a, b) = symmetric();
    let psi0 = PureState::initial(a, b, Lattice::for_steps(&spec, steps)).unwrap();
    let kinds = [
        ChannelKind::BitFlip,
        ChannelKind::YFlip,
        ChannelKind::ZFlip,
        ChannelKind::Depolarizing,
    ];
    let mut trace_dev = 0.0f64;
    let mut min_eig = f64::INFINITY;
    for kind in kinds {
        for p in [0.02, 0.05, 0.5] {
            let ch = NoiseChannel::new(kind, p).unwrap();
            let mut rho = DensityOperator::from_pure(&psi0);
            for t in 1..=steps {
                rho.step(&spec, &ch).unwrap();
                trace_dev = trace_dev.max((rho.trace() - 1.0).norm());
                if t % 10 == 0 {
                    min_eig = min_eig.min(rho.min_eigenvalue().unwrap());
                }
            }
        }
    }

    let mut psi = psi0.clone();
    psi.evolve(&spec, steps).unwrap();
    let mut pure_dev = 0.0f64;
    for kind in kinds {
        let mut rho = DensityOperator::from_pure(&psi0);
        let ch = NoiseChannel::new(kind, 0.0).unwrap();
        for _ in 0..steps {
            rho.step(&spec, &ch).unwrap();
        }
        let v = psi.amplitudes();
        let m = rho.matrix();
        for i in 0..v.len() {
            for j in 0..v.len() {
                pure_dev = pure_dev.max((m[(i, j)] - v[i] * v[j].conj()).norm());
            }
        }
    }
    outcome(
        trace_dev <= 1e-10 && min_eig >= -1e-8 && pure_dev <= 1e-10,
        format!(
            "4 channels x P in {{0.02, 0.05, 0.5}}, 200 steps: max trace deviation {trace_dev:.1e}, \
             min eigenvalue {min_eig:.1e} (every 10 steps); P = 0 vs pure {pure_dev:.1e}"
        ),
    )
}

fn criterion_10() -> Outcome {
    let mut c = ExperimentConfig::new(ExperimentKind::NoiseCompare);
    c.steps = 200;
    c.checkpoints = vec![100, 200];
    c.set_angle("theta1", "-pi/4").unwrap();
    c.set_angle("theta2-minus", "-3pi/4").unwrap();
    c.set_angle("theta2-plus", "3pi/4").unwrap();
    c.channel.p = 0.05;
    let kinds = [
        ChannelKind::BitFlip,
        ChannelKind::YFlip,
        ChannelKind::ZFlip,
        ChannelKind::Depolarizing,
    ];
    c.channel.kinds = kinds.to_vec();
    let r = run_noise_compare(&c).unwrap();
    let ret: Vec<f64> = kinds
        .iter()
        .map(|&k| r.table(k).unwrap().retention)
        .collect();
    let frozen = ret
        .iter()
        .zip(NOISE_RETENTION)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    outcome(
        ret[1..].iter().all(|&x| ret[0] > x) && frozen <= FROZEN_TOL,
        format!(
            "retention bitflip {:.6}, yflip {:.6}, zflip {:.6}, depolarizing {:.6}; |lib - frozen| {frozen:.1e}",
            ret[0], ret[1], ret[2], ret[3]
        ),
    )
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

fn criterion_11() -> Outcome {
    let map = |p: f64| {
        let mut c = ExperimentConfig::new(ExperimentKind::NegMap);
        c.set_angle("theta1", "-pi/4").unwrap();
        c.grid = vec![
            GridAxis::new("theta2-", -2.0 * PI, 2.0 * PI, 41),
            GridAxis::new("theta2+", -2.0 * PI, 2.0 * PI, 41),
        ];
        if p > 0.0 {
            c.channel.kind = ChannelKind::BitFlip;
            c.channel.p = p;
        }
        let g = run_negativity_map(&c).unwrap();
        g.layers[0].values.concat()
    };
    let clean = map(0.0);
    let noisy = map(0.02);
    let diff: Vec<f64> = clean.iter().zip(&noisy).map(|(c, n)| c - n).collect();
    let excess = diff.iter().map(|d| -d).fold(f64::NEG_INFINITY, f64::max);
    let violations = diff.iter().filter(|&&d| d < 0.0).count();

    let mut order: Vec<usize> = (0..clean.len()).collect();
    order.sort_by(|&i, &j| clean[i].total_cmp(&clean[j]).then(i.cmp(&j)));
    let decile = clean.len() / 10;
    let valley: Vec<f64> = order[..decile].iter().map(|&i| diff[i]).collect();
    let rest: Vec<f64> = order[decile..].iter().map(|&i| diff[i]).collect();
    let (mv, mr) = (median(valley), median(rest));
    outcome(
        violations == 0 && mv < mr,
        format!(
            "41 x 41 cells: noisy > clean in {violations} cells (max excess {excess:.1e}); \
             median drop in bottom decile {mv:.3e} vs elsewhere {mr:.3e}"
        ),
    )
}

fn run_cli(args: &[&str], cwd: &Path) -> Vec<(String, Vec<u8>)> {
    let o = Command::new(env!("CARGO_BIN_EXE_qwalk"))
        .args(args)
        .current_dir(cwd)
        .output()
        .unwrap();
    assert!(
        o.status.success() || o.status.code() == Some(3),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let mut files: Vec<_> = std::fs::read_dir(cwd.join("out"))
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read(&p).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

fn criterion_12() -> Outcome {
    let runs: [&[&str]; 7] = [
        &[
            "probdist",
            "--theta1=pi/2",
            "--theta2-minus=-3pi/4",
            "--theta2-plus=3pi/4",
            "--noise=zflip",
            "--p=0.05",
        ],
        &[
            "neg-map",
            "--steps=20",
            "--theta1=-pi/4",
            "--grid=theta2-:-2pi:2pi:6",
            "--grid=theta2+:-2pi:2pi:5",
            "--noise=bitflip",
            "--p=0.02",
        ],
        &[
            "neg-time",
            "--steps=40",
            "--theta1=-pi/4",
            "--noise=depolarizing",
            "--p=0.05",
        ],
        &[
            "noise-compare",
            "--steps=60",
            "--theta1=-pi/4",
            "--theta2-minus=-3pi/4",
            "--theta2-plus=3pi/4",
            "--p=0.05",
        ],
        &[
            "phase-map",
            "--grid=theta1:-2pi:2pi:9",
            "--grid=theta2:-2pi:2pi:9",
        ],
        &[
            "edge-spectrum",
            "--theta1=pi/2",
            "--theta2-minus=-3pi/4",
            "--theta2-plus=3pi/4",
            "--ring-sites=32",
        ],
        &[
            "validate",
            "--variant=double-split-step",
            "--theta1=0",
            "--theta2=pi/5",
            "--theta3=-7pi/8",
            "--tie-theta4",
        ],
    ];
    let mut identical = 0;
    let mut files = 0;
    for args in runs {
        let with = |threads: &str| {
            let dir = tempfile::tempdir().unwrap();
            let mut a = args.to_vec();
            a.extend(["--format=svg", threads]);
            run_cli(&a, dir.path())
        };
        let first = with("--threads=1");
        let second = with("--threads=4");
        files += first.len();
        if !first.is_empty() && first == second {
            identical += 1;
        }
    }
    outcome(
        identical == runs.len(),
        format!("{identical}/{} experiments byte-identical across reruns (1 and 4 threads, {files} files)", runs.len()),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        (1, "norm conservation", criterion_1, Duration::from_secs(5)),
        (2, "sparse vs dense", criterion_2, Duration::from_secs(30)),
        (3, "symmetry suite", criterion_3, Duration::MAX),
        (4, "negativity calibration", criterion_4, Duration::MAX),
        (
            5,
            "split-step localization",
            criterion_5,
            Duration::from_secs(10),
        ),
        (
            6,
            "double split-step localization",
            criterion_6,
            Duration::from_secs(10),
        ),
        (7, "edge modes", criterion_7, Duration::from_secs(60)),
        (
            8,
            "gap closing along theta2",
            criterion_8,
            Duration::from_secs(10),
        ),
        (
            9,
            "noise channels",
            criterion_9,
            Duration::from_secs(15 * 60),
        ),
        (10, "robustness ordering", criterion_10, Duration::MAX),
        (11, "noisy negativity map", criterion_11, Duration::MAX),
        (12, "determinism", criterion_12, Duration::MAX),
    ];
    let selected: BTreeSet<u32> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut unexpected = Vec::new();
    let mut passed = 0;
    let mut ran = 0;
    for (n, name, f, budget) in criteria {
        if !selected.is_empty() && !selected.contains(&n) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let o = f();
        let elapsed = start.elapsed();
        let in_time = elapsed <= budget;
        let ok = o.passed && in_time;
        let budget_note = if budget == Duration::MAX {
            String::new()
        } else {
            format!(" / budget {} s", budget.as_secs())
        };
        println!(
            "{} criterion {n}: {name}: {}{} [{:.2} s{budget_note}]",
            if ok { "PASS" } else { "FAIL" },
            o.detail,
            if in_time { "" } else { "; over time budget" },
            elapsed.as_secs_f64(),
        );
        if ok {
            passed += 1;
        } else if !KNOWN_FAILURES.contains(&n) {
            unexpected.push(n);
        }
    }
    println!("{passed}/{ran} criteria passed");
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {unexpected:?}");
        ExitCode::FAILURE
    }
}
