mod common;

use common::{random_matrix, random_structurally_regular};
use jacobi::canon::minimal_canon;
use jacobi::order_matrix::Finite;
use jacobi::resolvent::{forma_elegans_orders, orders_agree, resolvent_orders};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn attachment_orders_equal_minor_orders_on_finite_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..200 {
        let n = rng.gen_range(1..=6);
        let a = random_matrix(&mut rng, n, 6, 0.0);
        let c = minimal_canon(&a).unwrap();
        for j0 in 0..n {
            let plan = resolvent_orders(&a, &c, j0).unwrap();
            let e = forma_elegans_orders(&a, j0).unwrap();
            assert!(orders_agree(&plan, &e), "{a}\nj0={j0}: {:?} vs {e:?}", plan.h);
        }
    }
}

#[test]
fn plan_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..200 {
        let n = rng.gen_range(1..=6);
        let a = random_matrix(&mut rng, n, 5, 0.0);
        let c = minimal_canon(&a).unwrap();
        let j = c.jacobi_number.finite().unwrap();
        let e_sum: u64 = (0..n).map(|i| a.row_max(i).finite().unwrap()).sum();
        for j0 in 0..n {
            let plan = resolvent_orders(&a, &c, j0).unwrap();
            let i0 = plan.i0;
            let a_i0 = a.get(i0, j0).finite().unwrap();
            assert_eq!(plan.h[i0], j - a_i0);
            for i in 0..n {
                let cap = (j - a_i0) as i64 + c.ell[i] as i64 - c.ell[i0] as i64;
                assert!(plan.h[i] as i64 <= cap, "{a}\nrow {i}: h={:?}", plan.h);
            }
            assert!(plan.h.iter().sum::<u64>() <= (n as u64 - 1) * e_sum);
            assert_eq!(plan.a_triple_prime, a.raised(&plan.h).unwrap());
            assert_eq!(plan.a_triple_prime.get(i0, j0), Finite(j));
        }
    }
}

#[test]
fn sparse_matrices_agree_or_stall() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let (mut agreed, mut stalled) = (0, 0);
    for _ in 0..300 {
        let n = rng.gen_range(2..=6);
        let a = random_structurally_regular(&mut rng, n, 5, 0.3);
        let c = minimal_canon(&a).unwrap();
        for j0 in 0..n {
            match resolvent_orders(&a, &c, j0) {
                Ok(plan) => {
                    let e = forma_elegans_orders(&a, j0).unwrap();
                    assert!(orders_agree(&plan, &e), "{a}\nj0={j0}: {:?} vs {e:?}", plan.h);
                    agreed += 1;
                }
                Err(err) => {
                    assert!(err.is_degenerate(), "{err}");
                    let e = forma_elegans_orders(&a, j0).unwrap();
                    assert!(e.iter().any(|v| !v.is_finite()), "{a}\nj0={j0}: stalled but {e:?}");
                    stalled += 1;
                }
            }
        }
    }
    assert!(agreed > 0 && stalled > 0);
}
