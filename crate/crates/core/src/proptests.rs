//! Property tests over random states, bases and channels.

use crate::discord::{alpha_closed_form, delta_given, delta_opt, mutual_information};
use crate::families::{alpha_werner_reference, alpha_zurek_reference, sweep_parameters};
use crate::linalg::{
    commutator, hermitian_eigendecomposition, partial_trace_a, partial_trace_s, tensor_product,
    ComplexMatrix, C64,
};
use crate::measurement::{measure_channel, random_basis};
use crate::state::{
    assemble_separable, random_density_with, random_separable_with, seeded_rng, von_neumann_entropy,
};
use crate::{werner, zurek, Family, SearchConfig};
use proptest::prelude::*;
use rand::Rng;
use rand_distr::StandardNormal;

fn random_matrix(seed: u64, dim: usize, hermitian: bool) -> ComplexMatrix {
    let mut rng = seeded_rng(seed);
    let data: Vec<C64> = (0..dim * dim)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let m = ComplexMatrix::from_row_major(dim, data).unwrap();
    if hermitian {
        m.hermitian_part()
    } else {
        m
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn jacobi_reconstructs_random_hermitian(seed in any::<u64>(), dim in 2usize..=6) {
        let m = random_matrix(seed, dim, true);
        let d = hermitian_eigendecomposition(&m).unwrap();
        prop_assert!(d.reconstruct().max_abs_diff(&m) < 1e-10);
        prop_assert!(d.orthonormality_error() < 1e-10);
        let sum: f64 = d.eigenvalues.iter().sum();
        prop_assert!((sum - m.trace().re).abs() < 1e-10);
        prop_assert!(d.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn partial_trace_of_tensor_product(seed in any::<u64>(), m in 1usize..=3, n in 1usize..=3) {
        let a = random_matrix(seed, m, false);
        let b = random_matrix(seed.wrapping_add(1), n, false);
        let ab = tensor_product(&a, &b);
        let left = partial_trace_a(&ab, m, n).unwrap();
        prop_assert!(left.max_abs_diff(&a.scale(b.trace())) < 1e-12);
        let right = partial_trace_s(&ab, m, n).unwrap();
        prop_assert!(right.max_abs_diff(&b.scale(a.trace())) < 1e-12);
    }

    #[test]
    fn commutator_is_traceless(seed in any::<u64>(), dim in 1usize..=5) {
        let a = random_matrix(seed, dim, false);
        let b = random_matrix(seed ^ 0xabcdef, dim, false);
        prop_assert!(commutator(&a, &b).unwrap().trace().norm() < 1e-12);
    }

    #[test]
    fn entropy_is_bounded(seed in any::<u64>(), dim in 2usize..=6) {
        let mut rng = seeded_rng(seed);
        let rank = rng.random_range(1..=dim);
        let rho = random_density_with(&mut rng, dim, rank).unwrap();
        let h = von_neumann_entropy(&rho);
        prop_assert!(h >= 0.0);
        prop_assert!(h <= (dim as f64).log2() + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn subadditivity(seed in any::<u64>(), m in 2usize..=3, n in 2usize..=3) {
        let mut rng = seeded_rng(seed);
        let rank = rng.random_range(1..=m * n);
        let rho = random_density_with(&mut rng, m * n, rank).unwrap().with_split(m, n).unwrap();
        let h_s = von_neumann_entropy(&rho.reduced_s().unwrap());
        let h_a = von_neumann_entropy(&rho.reduced_a().unwrap());
        prop_assert!(von_neumann_entropy(&rho) <= h_s + h_a + 1e-9);
        prop_assert!(mutual_information(&rho).unwrap() >= -1e-9);
    }

    #[test]
    fn separable_marginals_are_mixtures(seed in any::<u64>(), k in 1usize..=5) {
        let mut rng = seeded_rng(seed);
        let spec = random_separable_with(&mut rng, 2, 3, k).unwrap();
        let rho = assemble_separable(&spec).unwrap();
        let mut expect_s = ComplexMatrix::zeros(2);
        let mut expect_a = ComplexMatrix::zeros(3);
        for (w, (s, a)) in spec.weights().iter().zip(spec.components()) {
            expect_s = &expect_s + &s.matrix().scale_real(*w);
            expect_a = &expect_a + &a.matrix().scale_real(*w);
        }
        let rs = rho.reduced_s().unwrap();
        let ra = rho.reduced_a().unwrap();
        prop_assert!(rs.matrix().max_abs_diff(&expect_s) < 1e-12);
        prop_assert!(ra.matrix().max_abs_diff(&expect_a) < 1e-12);
        prop_assert!(rs.eigenvalues().iter().all(|&l| l > -1e-12));
        prop_assert!(ra.eigenvalues().iter().all(|&l| l > -1e-12));
    }

    #[test]
    fn channel_is_idempotent_and_commutes_with_projectors(seed in any::<u64>(), dim in 2usize..=4) {
        let mut rng = seeded_rng(seed);
        let rank = rng.random_range(1..=dim);
        let rho = random_density_with(&mut rng, dim, rank).unwrap();
        let basis = random_basis(&mut rng, dim);
        let once = measure_channel(&rho, &basis).unwrap();
        let twice = measure_channel(&once, &basis).unwrap();
        prop_assert!(once.matrix().max_abs_diff(twice.matrix()) < 1e-12);
        prop_assert!((once.matrix().trace().re - 1.0).abs() < 1e-12);
        for p in basis.projectors() {
            prop_assert!(commutator(once.matrix(), &p).unwrap().max_abs() < 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn delta_chain(seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let rank = rng.random_range(1..=4);
        let rho = random_density_with(&mut rng, 4, rank).unwrap().with_split(2, 2).unwrap();
        let best = delta_opt(&rho, &SearchConfig::delta_default()).unwrap().value;
        for _ in 0..8 {
            let b = random_basis(&mut rng, 2);
            let given = delta_given(&rho, &b).unwrap();
            prop_assert!(given >= -1e-9);
            prop_assert!(best <= given + 1e-9, "delta_opt {best} above delta_given {given}");
        }
    }
}

#[test]
fn family_closed_forms_track_printed_curves() {
    for family in [Family::Werner, Family::Zurek] {
        let (lo, hi) = family.range();
        for p in sweep_parameters(lo, hi, 50) {
            let rho = family.state(p).unwrap();
            let closed = alpha_closed_form(&rho).unwrap().value();
            let reference = family.alpha_reference(p);
            assert!(
                (closed - reference).abs() < 1e-7,
                "{family}({p}): {closed} vs {reference}"
            );
            assert!(closed >= -1e-12 && reference >= -1e-12);
        }
    }
    // Spot values straight from the two formulas.
    assert!((alpha_werner_reference(-1.0) - 1.0).abs() < 1e-15);
    assert!((alpha_zurek_reference(-1.0) - 1.0).abs() < 1e-15);
}

#[test]
fn werner_marginals_are_maximally_mixed() {
    let half = ComplexMatrix::identity(2).scale_real(0.5);
    for x in sweep_parameters(-1.0, 1.0 / 3.0, 50) {
        let w = werner(x).unwrap();
        assert!(w.reduced_s().unwrap().matrix().max_abs_diff(&half) < 1e-12);
        assert!(w.reduced_a().unwrap().matrix().max_abs_diff(&half) < 1e-12);
    }
    let z = zurek(0.3).unwrap();
    assert!(z.reduced_s().unwrap().matrix().max_abs_diff(&half) < 1e-12);
}
