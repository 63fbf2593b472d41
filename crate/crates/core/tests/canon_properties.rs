mod common;

use common::{all_vectors, random_structurally_regular};
use jacobi::canon::{is_canon, minimal_canon, minimal_canon_with, CanonOptions};
use jacobi::order_matrix::brute_force_jacobi_number;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn jacobi_number_matches_permutation_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..400 {
        let n = rng.gen_range(1..=7);
        let a = random_structurally_regular(&mut rng, n, 5, 0.33);
        let c = minimal_canon(&a).unwrap();
        assert_eq!(c.jacobi_number, brute_force_jacobi_number(&a).unwrap(), "{a}");
    }
}

#[test]
fn ell_is_the_componentwise_minimal_canon() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..150 {
        let n = rng.gen_range(1..=3);
        let a = random_structurally_regular(&mut rng, n, 5, 0.3);
        let c = minimal_canon(&a).unwrap();
        assert!(is_canon(&a, &c.ell), "{a}");
        for lam in all_vectors(n, c.lambda + 2) {
            if is_canon(&a, &lam) {
                assert!(c.ell.iter().zip(&lam).all(|(l, x)| l <= x), "{a}\nell {:?} vs {lam:?}", c.ell);
            }
        }
    }
}

#[test]
fn canon_of_raised_matrix_is_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..200 {
        let n = rng.gen_range(1..=8);
        let a = random_structurally_regular(&mut rng, n, 6, 0.3);
        let c = minimal_canon(&a).unwrap();
        let again = minimal_canon(&c.raised_matrix(&a)).unwrap();
        assert!(again.ell.iter().all(|&x| x == 0), "{a}");
    }
}

#[test]
fn derived_offsets_are_consistent() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..200 {
        let n = rng.gen_range(1..=9);
        let a = random_structurally_regular(&mut rng, n, 9, 0.4);
        let c = minimal_canon(&a).unwrap();
        assert_eq!(c.lambda, *c.ell.iter().max().unwrap());
        for i in 0..n {
            assert_eq!(c.alpha[i] + c.ell[i], c.lambda);
        }
        for j in 0..n {
            let recomputed = (0..n)
                .filter_map(|i| a.get(i, j).finite().map(|v| v as i64 - c.alpha[i] as i64))
                .max()
                .unwrap();
            assert_eq!(c.beta[j], recomputed);
        }
        let j_sum: i64 = c.alpha.iter().map(|&x| x as i64).sum::<i64>() + c.beta.iter().sum::<i64>();
        assert_eq!(c.jacobi_number.finite(), Some(j_sum as u64));

        let raised = c.raised_matrix(&a);
        let mut cols = vec![false; n];
        for &(i, j) in &c.starred {
            assert_eq!(raised.get(i, j), raised.column_max(j));
            assert!(!std::mem::replace(&mut cols[j], true));
        }
        assert_eq!(c.starred.iter().map(|&(i, j)| a.get(i, j)).sum::<jacobi::order_matrix::OrderValue>(), c.jacobi_number);
    }
}

#[test]
fn trace_replay_reproduces_raised_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..200 {
        let n = rng.gen_range(1..=10);
        let a = random_structurally_regular(&mut rng, n, 7, 0.35);
        let c = minimal_canon(&a).unwrap();
        let mut acc = vec![0u64; n];
        for step in &c.trace {
            for (x, d) in acc.iter_mut().zip(&step.row_increments) {
                *x += d;
            }
        }
        assert_eq!(a.raised(&acc).unwrap(), c.raised_matrix(&a));
        let quiet = minimal_canon_with(&a, CanonOptions { trace: false }).unwrap();
        assert!(quiet.trace.is_empty());
        assert_eq!(quiet.ell, c.ell);
        assert_eq!(quiet.starred, c.starred);
    }
}
