use doa_core::random;
use doa_core::*;
use faer::linalg::solvers::Solve;
use faer::Mat;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cexp(z: c64) -> c64 {
    let r = z.re.exp();
    c64::new(r * z.im.cos(), r * z.im.sin())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn trajectories_stay_physical(seed in any::<u64>(), n in 2usize..5, k in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sys = random::system(&mut rng, n, k, 0.8);
        let g = build_generator(&sys);
        let rho0 = random::pure_state(&mut rng, n);
        let times: Vec<f64> = (0..=40).map(|i| i as f64 * 0.25).collect();
        let traj = propagate(&g, &rho0, &times, &ToleranceSet::default()).unwrap();
        prop_assert_eq!(traj.len(), times.len());
        for row in traj.rows() {
            prop_assert!(row.trace_error < 1e-10);
            prop_assert!(row.min_eig > -1e-7);
        }
    }

    #[test]
    fn propagation_is_a_semigroup(seed in any::<u64>(), n in 2usize..5, t1 in 0.05f64..3.0, t2 in 0.05f64..3.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sys = random::system(&mut rng, n, 2, 0.8);
        let g = build_generator(&sys);
        let tol = ToleranceSet::default();
        let rho0 = random::full_rank_density(&mut rng, n);
        let mid = propagate(&g, &rho0, &[t1], &tol).unwrap().states.remove(0);
        let two_step = propagate(&g, &mid, &[t2], &tol).unwrap().states.remove(0);
        let one_step = propagate(&g, &rho0, &[t1 + t2], &tol).unwrap().states.remove(0);
        prop_assert!(hs_norm(&(two_step.op() - one_step.op())) < 1e-9);
    }

    #[test]
    fn uniform_and_pointwise_grids_agree(seed in any::<u64>(), n in 2usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sys = random::system(&mut rng, n, 2, 0.8);
        let g = build_generator(&sys);
        let tol = ToleranceSet::default();
        let rho0 = random::full_rank_density(&mut rng, n);
        let grid: Vec<f64> = (0..8).map(|i| 0.5 + i as f64 * 0.7).collect();
        let uniform = propagate(&g, &rho0, &grid, &tol).unwrap();
        for (t, s) in grid.iter().zip(&uniform.states) {
            let single = propagate(&g, &rho0, &[*t], &tol).unwrap().states.remove(0);
            prop_assert!(hs_norm(&(s.op() - single.op())) < 1e-10);
        }
    }

    #[test]
    fn propagation_matches_eigen_expansion(seed in any::<u64>(), n in 2usize..4, t in 0.1f64..4.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sys = random::system(&mut rng, n, 2, 0.8);
        let g = build_generator(&sys);
        let tol = ToleranceSet::default();
        let sd = full_spectrum(&g, &tol).unwrap();
        let rho0 = random::full_rank_density(&mut rng, n);
        let v = &sd.eigenvectors;
        let coeffs = v.partial_piv_lu().solve(vectorize(rho0.op()).as_mat());
        let d = n * n;
        let scaled = Mat::from_fn(d, 1, |i, _| coeffs[(i, 0)] * cexp(sd.eigenvalues[i] * t));
        let expanded = v * &scaled;
        let exact = propagate(&g, &rho0, &[t], &tol).unwrap().states.remove(0);
        let ve = vectorize(exact.op());
        let err = (0..d).map(|i| (expanded[(i, 0)] - ve[i]).norm_sqr()).sum::<f64>().sqrt();
        prop_assert!(err < 1e-8, "err {err}");
    }

    #[test]
    fn converged_limit_matches_spectral_limit(seed in any::<u64>(), blocks in prop::sample::select(vec![vec![2usize], vec![1, 2], vec![2, 2]])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sys = random::block_system(&mut rng, &blocks, 2, 0.8);
        let g = build_generator(&sys);
        let tol = ToleranceSet::default();
        let sd = full_spectrum(&g, &tol).unwrap();
        let rho0 = random::full_rank_density(&mut rng, sys.n());
        let spectral = asymptotic_state(&sd, &rho0, &tol).unwrap();
        let oracle = converged_limit(&g, &rho0, sd.gap.unwrap(), 1e-10).unwrap();
        let (a, b) = (spectral.limit().unwrap(), oracle.limit().unwrap());
        prop_assert!(hs_norm(&(a.op() - b.op())) < 1e-8);
    }
}

#[test]
fn oscillating_states_have_no_limit() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let sys = random::oscillating_system(&mut rng, 2, 2, 0.8, 1.3);
    let g = build_generator(&sys);
    let tol = ToleranceSet::default();
    let sd = full_spectrum(&g, &tol).unwrap();
    // coherent superposition across the two blocks keeps oscillating
    let psi = [c64::new(1.0, 0.0), c64::new(0.0, 0.0), c64::new(1.0, 0.0), c64::new(0.0, 0.0)];
    let rho0 = DensityMatrix::pure(&psi).unwrap();
    assert!(matches!(asymptotic_state(&sd, &rho0, &tol).unwrap(), AsymptoticOutcome::Oscillatory(_)));
    assert!(matches!(converged_limit(&g, &rho0, sd.gap.unwrap(), 1e-10).unwrap(), LimitOutcome::NoLimit));
}

#[test]
fn invalid_inputs_are_rejected() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let sys = random::system(&mut rng, 2, 1, 0.8);
    let g = build_generator(&sys);
    let rho0 = DensityMatrix::maximally_mixed(HilbertDim::new(2).unwrap());
    let tol = ToleranceSet::default();
    assert!(matches!(propagate(&g, &rho0, &[1.0, 0.5], &tol), Err(Error::InvalidTimes)));
    assert!(matches!(propagate(&g, &rho0, &[-1.0], &tol), Err(Error::InvalidTimes)));
    assert!(matches!(converged_limit(&g, &rho0, 0.0, 1e-10), Err(Error::InvalidGap(_))));
    let a = build_adjoint(&sys).unwrap();
    assert!(matches!(propagate(&a, &rho0, &[1.0], &tol), Err(Error::WrongKind)));
}
