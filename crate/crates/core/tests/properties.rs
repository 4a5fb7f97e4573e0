use num_complex::Complex64 as C64;
use proptest::prelude::*;
use qwalk::entanglement::{negativity_mixed, negativity_pure};
use qwalk::spectral::{self, GapTarget};
use qwalk::state::{ChannelKind, DensityOperator, NoiseChannel, PureState};
use qwalk::symmetry::{coin_chiral_residual, particle_hole_residual};
use qwalk::walk::{coin_matrix, step_operator_dense, Boundary, CoinProfile, Lattice, WalkSpec};
use std::f64::consts::PI;

fn angle() -> impl Strategy<Value = f64> {
    -2.0 * PI..2.0 * PI
}

fn profile() -> impl Strategy<Value = CoinProfile> {
    prop_oneof![
        angle().prop_map(|t| CoinProfile::uniform(t).unwrap()),
        (angle(), angle()).prop_map(|(m, p)| CoinProfile::two_domain(m, p).unwrap()),
    ]
}

fn spec() -> impl Strategy<Value = WalkSpec> {
    prop_oneof![
        profile().prop_map(WalkSpec::standard),
        (profile(), profile()).prop_map(|(a, b)| WalkSpec::split_step(a, b)),
        (profile(), profile(), profile(), profile())
            .prop_map(|(a, b, c, d)| WalkSpec::double_split_step(a, b, c, d)),
    ]
}

fn coin_state() -> impl Strategy<Value = (C64, C64)> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64)
        .prop_filter("nonzero", |(a, b, c, d)| {
            a * a + b * b + c * c + d * d > 1e-3
        })
        .prop_map(|(a, b, c, d)| {
            let n = (a * a + b * b + c * c + d * d).sqrt();
            (C64::new(a / n, b / n), C64::new(c / n, d / n))
        })
}

fn uniform_spec() -> impl Strategy<Value = WalkSpec> {
    let u = || angle().prop_map(|t| CoinProfile::uniform(t).unwrap());
    prop_oneof![
        u().prop_map(WalkSpec::standard),
        (u(), u()).prop_map(|(a, b)| WalkSpec::split_step(a, b)),
        (u(), u(), u(), u()).prop_map(|(a, b, c, d)| WalkSpec::double_split_step(a, b, c, d)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norm_is_preserved(s in spec(), (a, b) in coin_state(), steps in 0usize..60) {
        let mut psi = PureState::initial(a, b, Lattice::for_steps(&s, steps)).unwrap();
        psi.evolve(&s, steps).unwrap();
        prop_assert!((psi.norm_sqr() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn support_stays_in_light_cone(s in spec(), steps in 1usize..40) {
        let mut psi = PureState::initial(C64::new(1.0, 0.0), C64::new(0.0, 0.0), Lattice::for_steps(&s, steps)).unwrap();
        psi.evolve(&s, steps).unwrap();
        let reach = (s.max_hop() * steps) as i64;
        for (x, p) in psi.distribution().iter() {
            if x.abs() > reach {
                prop_assert_eq!(p, 0.0);
            }
        }
    }

    #[test]
    fn step_operator_is_real(s in spec(), half in 2usize..10) {
        let l = Lattice::ring(2 * half).unwrap();
        prop_assert_eq!(particle_hole_residual(&s, &l).unwrap(), 0.0);
        let w = step_operator_dense(&s, &l, Boundary::Ring).unwrap();
        prop_assert!(w.unitarity_deviation() <= 1e-13);
    }

    #[test]
    fn coin_is_chiral_and_orthogonal(t in angle()) {
        prop_assert!(coin_chiral_residual(t) <= 1e-15);
        let r = coin_matrix(t);
        prop_assert!((r[0][0] * r[1][1] - r[0][1] * r[1][0] - 1.0).abs() <= 1e-15);
    }

    #[test]
    fn pure_and_mixed_negativity_agree(s in spec(), (a, b) in coin_state(), steps in 0usize..15) {
        let mut psi = PureState::initial(a, b, Lattice::for_steps(&s, steps)).unwrap();
        psi.evolve(&s, steps).unwrap();
        let np = negativity_pure(&psi).unwrap().value();
        let nm = negativity_mixed(&DensityOperator::from_pure(&psi)).unwrap().value();
        prop_assert!((np - nm).abs() <= 1e-8, "{} vs {}", np, nm);
        prop_assert!((0.0..=0.5 + 1e-9).contains(&np));
    }

    #[test]
    fn negativity_invariant_under_local_coin_rotation(s in spec(), (a, b) in coin_state(), t in angle(), steps in 1usize..30) {
        let mut psi = PureState::initial(a, b, Lattice::for_steps(&s, steps)).unwrap();
        psi.evolve(&s, steps).unwrap();
        let before = negativity_pure(&psi).unwrap().value();
        let r = coin_matrix(t);
        for pair in psi.amplitudes_mut().chunks_exact_mut(2) {
            let (u, v) = (pair[0], pair[1]);
            pair[0] = u * r[0][0] + v * r[0][1];
            pair[1] = u * r[1][0] + v * r[1][1];
        }
        prop_assert!((negativity_pure(&psi).unwrap().value() - before).abs() <= 1e-9);
    }

    #[test]
    fn noisy_density_stays_normalized(s in spec(), kind in 1usize..5, p in 0.0..0.5f64, steps in 1usize..12) {
        let kind = ChannelKind::ALL[kind];
        let psi = PureState::initial(C64::new(1.0, 0.0), C64::new(0.0, 0.0), Lattice::for_steps(&s, steps)).unwrap();
        let mut rho = DensityOperator::from_pure(&psi);
        let ch = NoiseChannel::new(kind, p).unwrap();
        for _ in 0..steps {
            rho.step(&s, &ch).unwrap();
        }
        prop_assert!((rho.trace().re - 1.0).abs() <= 1e-12);
        prop_assert!(rho.matrix().hermitian_deviation() <= 1e-14);
        prop_assert!(rho.min_eigenvalue().unwrap() >= -1e-10);
    }

    #[test]
    fn ring_spectrum_is_sampled_bloch_band(s in uniform_spec(), half in 8usize..17) {
        let n = 2 * half;
        let ring = spectral::ring_quasienergies(&s, n).unwrap();
        let mut bloch = Vec::with_capacity(2 * n);
        for m in 0..n {
            let k = 2.0 * PI * m as f64 / n as f64;
            bloch.extend(spectral::bloch_step_operator(&s, k).unwrap().quasienergies());
        }
        prop_assert!(spectral::circular_matching_distance(&ring, &bloch) <= 1e-8);
    }

    #[test]
    fn finer_k_grid_never_widens_gap(s in uniform_spec()) {
        for at in [GapTarget::Zero, GapTarget::Pi] {
            let coarse = spectral::quasienergy_gap(&s, at, 128).unwrap();
            let fine = spectral::quasienergy_gap(&s, at, 1024).unwrap();
            prop_assert!(fine <= coarse + 1e-12);
        }
    }
}
