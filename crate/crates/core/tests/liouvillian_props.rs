use doa_core::random;
use doa_core::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn close(a: c64, b: c64, tol: f64) -> bool {
    (a - b).norm_sqr().sqrt() <= tol * (1.0 + b.norm_sqr().sqrt())
}

fn conjugate(u: &Operator, x: &Operator) -> Operator {
    &(u * x) * &u.adjoint()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generator_preserves_trace_and_hermiticity(seed in any::<u64>(), n in 1usize..5, k in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sys = random::system(&mut rng, n, k, 0.7);
        let g = build_generator(&sys);
        let rho = random::full_rank_density(&mut rng, n);
        let out = apply(&g, rho.op()).unwrap();
        prop_assert!(out.trace().norm_sqr().sqrt() < 1e-12 * (1.0 + hs_norm(&out)));
        let x = random::ginibre(&mut rng, n);
        let lhs = apply(&g, &x.adjoint()).unwrap();
        let rhs = apply(&g, &x).unwrap().adjoint();
        prop_assert!((lhs - &rhs).max_abs() < 1e-12 * (1.0 + rhs.max_abs()));
    }

    #[test]
    fn adjoint_generator_is_unital_and_adjoint(seed in any::<u64>(), n in 1usize..5, k in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sys = random::system(&mut rng, n, k, 0.7);
        let g = build_generator(&sys);
        let a = build_adjoint(&sys).unwrap();
        let id = Operator::identity(sys.dim().clone());
        prop_assert!(apply(&a, &id).unwrap().max_abs() < 1e-12);
        let (x, y) = (random::ginibre(&mut rng, n), random::ginibre(&mut rng, n));
        let lhs = hs_inner(&x, &apply(&g, &y).unwrap()).unwrap();
        let rhs = hs_inner(&apply(&a, &x).unwrap(), &y).unwrap();
        prop_assert!(close(lhs, rhs, 1e-11));
    }

    #[test]
    fn superoperator_matches_direct_evaluation(seed in any::<u64>(), n in 1usize..5, k in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sys = random::system(&mut rng, n, k, 0.7);
        let x = random::ginibre(&mut rng, n);
        let via_matrix = apply(&build_generator(&sys), &x).unwrap();
        let direct = sys.rhs(&x).unwrap();
        prop_assert!((via_matrix - &direct).max_abs() < 1e-12 * (1.0 + direct.max_abs()));
        let via_matrix = apply(&build_adjoint(&sys).unwrap(), &x).unwrap();
        let direct = sys.adjoint_rhs(&x).unwrap();
        prop_assert!((via_matrix - &direct).max_abs() < 1e-12 * (1.0 + direct.max_abs()));
    }

    #[test]
    fn kernel_dimension_is_basis_independent(seed in any::<u64>(), blocks in prop::sample::select(vec![vec![2usize], vec![1, 1], vec![1, 2], vec![2, 2], vec![1, 1, 1]])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sys = random::block_system(&mut rng, &blocks, 2, 0.8);
        let n = sys.n();
        let u = random::unitary(&mut rng, n).unwrap();
        let rotated = LindbladSystem::new(
            conjugate(&u, sys.hamiltonian()).hermitian_part(),
            sys.couplings().iter().map(|l| conjugate(&u, l)).collect(),
            1e-10,
        ).unwrap();
        let k1 = kernel_basis(&build_generator(&sys), 1e-10).unwrap().len();
        let k2 = kernel_basis(&build_generator(&rotated), 1e-10).unwrap().len();
        prop_assert_eq!(k1, k2);
        prop_assert!(k1 >= blocks.len());
    }
}

#[test]
fn maximally_mixed_state_is_steady_under_dephasing() {
    let sz = Operator::diagonal(&[c64::new(1.0, 0.0), c64::new(-1.0, 0.0)]).unwrap();
    let h = Operator::zeros(HilbertDim::new(2).unwrap());
    let sys = LindbladSystem::new(h, vec![sz], 1e-10).unwrap();
    let rho = DensityMatrix::maximally_mixed(HilbertDim::new(2).unwrap());
    assert!(is_steady_state(&sys, &rho, 1e-10).unwrap().steady);
}

#[test]
fn non_hermitian_hamiltonian_is_rejected() {
    let h = Operator::from_rows(&[&[c64::new(0.0, 0.0), c64::new(1.0, 0.0)], &[c64::new(0.0, 0.0), c64::new(0.0, 0.0)]]).unwrap();
    assert!(matches!(LindbladSystem::new(h, vec![], 1e-10), Err(Error::HamiltonianNotHermitian { .. })));
}
