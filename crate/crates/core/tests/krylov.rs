mod common;

use common::{best_rank_k_error, oracle_spectrum, planted, random_dense, random_sparse};
use krydim::krylov::{draw_block, projection_error, topk_spectrum, KrylovState};
use krydim::rng::SeedStream;
use krydim::{CriterionConfig, DenseMatrix, ObservationMatrix, OrthMode};
use proptest::prelude::*;

fn ritz_sequence(x: &ObservationMatrix, steps: usize, m: usize, mode: OrthMode, seed: u64) -> Vec<Vec<f64>> {
    let op = x.covariance();
    let mut state = KrylovState::new(x.p(), mode);
    let mut rng = SeedStream::new(seed);
    (0..steps)
        .map(|_| {
            let block = draw_block(x, m, &mut rng).unwrap().unwrap_or_else(|| DenseMatrix::zeros(x.p(), 0));
            state.advance(&op, &block).unwrap().theta
        })
        .collect()
}

fn mode_strategy() -> impl Strategy<Value = OrthMode> {
    prop_oneof![Just(OrthMode::PaperTruncated), Just(OrthMode::Accumulating)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ritz_values_are_bounded_by_eigenvalues(
        p in 5usize..40, n in 5usize..60, m in 1usize..6, mode in mode_strategy(), seed in any::<u64>()
    ) {
        let x = ObservationMatrix::from(random_dense(p, n, seed));
        let ell = oracle_spectrum(&x);
        let k = (p / 2).max(1);
        let est = topk_spectrum(&x, k, m, mode, seed).unwrap();
        prop_assert_eq!(est.k(), k);
        for (theta, l) in est.theta.iter().zip(&ell) {
            prop_assert!(*theta <= l + 1e-10 * ell[0]);
        }
        prop_assert!(est.theta.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(est.vectors.orthonormality_defect() <= 1e-10);
    }

    #[test]
    fn extending_the_basis_never_lowers_ritz_values(
        p in 6usize..40, n in 6usize..60, m in 1usize..5, mode in mode_strategy(), seed in any::<u64>()
    ) {
        let x = ObservationMatrix::from(random_dense(p, n, seed));
        let steps = p.min(8);
        let seq = ritz_sequence(&x, steps, m, mode, seed);
        let scale = oracle_spectrum(&x)[0];
        for pair in seq.windows(2) {
            for (before, after) in pair[0].iter().zip(&pair[1]) {
                prop_assert!(*after >= before - 1e-10 * scale);
            }
        }
    }

    #[test]
    fn identical_seeds_give_identical_ritz_values(p in 5usize..30, n in 5usize..30, seed in any::<u64>()) {
        let x = ObservationMatrix::from(random_sparse(p, n, 0.4, seed));
        for mode in [OrthMode::PaperTruncated, OrthMode::Accumulating] {
            let a = topk_spectrum(&x, 3.min(p), 4, mode, seed).unwrap();
            let b = topk_spectrum(&x, 3.min(p), 4, mode, seed).unwrap();
            prop_assert_eq!(
                a.theta.iter().map(|t| t.to_bits()).collect::<Vec<_>>(),
                b.theta.iter().map(|t| t.to_bits()).collect::<Vec<_>>()
            );
            prop_assert_eq!(a.vectors, b.vectors);
        }
    }
}

#[test]
fn accumulating_mode_meets_projection_bound_on_gapped_data() {
    let epsilon = 0.1;
    for (i, seed) in (0..20u64).enumerate() {
        let p = 60 + 12 * i;
        let k = 3 + i % 5;
        let x = planted(p, 2 * p, k, 1000 + seed);
        let m = CriterionConfig::depth_for_accuracy(p, epsilon);
        let est = topk_spectrum(&x, k, m, OrthMode::Accumulating, seed).unwrap();
        let ell = oracle_spectrum(&x);
        let err = projection_error(&x, &est.leading_vectors(k)).unwrap();
        let best = best_rank_k_error(&ell, k);
        assert!(err <= (1.0 + 2.0 * epsilon) * best, "p={p} k={k}: {err} > (1+2eps) {best}");
        assert!(err >= best * (1.0 - 1e-9), "p={p} k={k}: {err} beats the optimum {best}");
    }
}

#[test]
fn projection_error_matches_dense_oracle() {
    let x = ObservationMatrix::from(random_sparse(300, 80, 0.05, 4));
    let est = topk_spectrum(&x, 4, 6, OrthMode::Accumulating, 2).unwrap();
    let y = est.leading_vectors(4);
    let a = common::oracle_covariance(&x);
    let yn = common::to_nalgebra(&y);
    let expected = (&a - &yn * (yn.transpose() * &a)).norm();
    let got = projection_error(&x, &y).unwrap();
    assert!((got - expected).abs() <= 1e-10 * expected);
}

#[test]
fn rank_deficient_data_reports_zero_ritz_values() {
    let x = ObservationMatrix::from(random_dense(12, 3, 8));
    let est = topk_spectrum(&x, 6, 2, OrthMode::Accumulating, 1).unwrap();
    assert_eq!(est.k(), 6);
    assert!(est.theta[3..].iter().all(|&t| t == 0.0));
    let ell = oracle_spectrum(&x);
    for (theta, l) in est.theta[..3].iter().zip(&ell) {
        assert!((theta - l).abs() <= 1e-9 * ell[0]);
    }
}
