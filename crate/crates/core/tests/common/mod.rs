#![allow(dead_code)]

use jacobi::order_matrix::{has_finite_transversal, Finite, NegInfinity, OrderMatrix, OrderValue};
use rand::Rng;

/// Entries in `{−∞, 0..=max}`, each `−∞` with probability `neg_density`.
pub fn random_matrix(rng: &mut impl Rng, n: usize, max: u64, neg_density: f64) -> OrderMatrix {
    OrderMatrix::from_fn(n, |_, _| {
        if rng.gen_bool(neg_density) {
            NegInfinity
        } else {
            Finite(rng.gen_range(0..=max))
        }
    })
    .unwrap()
}

/// Rejection-sample until the matrix has a finite transversal.
pub fn random_structurally_regular(
    rng: &mut impl Rng,
    n: usize,
    max: u64,
    neg_density: f64,
) -> OrderMatrix {
    loop {
        let a = random_matrix(rng, n, max, neg_density);
        if has_finite_transversal(&a) {
            return a;
        }
    }
}

/// Every λ in `[0, bound]^n`.
pub fn all_vectors(n: usize, bound: u64) -> impl Iterator<Item = Vec<u64>> {
    let side = bound + 1;
    (0..side.pow(n as u32)).map(move |mut code| {
        let mut v = vec![0; n];
        for slot in v.iter_mut().rev() {
            *slot = code % side;
            code /= side;
        }
        v
    })
}

pub fn value(v: OrderValue) -> Option<u64> {
    v.finite()
}

pub fn names(n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("x{k}")).collect()
}

/// Sum of up to `terms` random monomials in `x1..x_vars` with small rational
/// coefficients, orders up to `max_order` and exponents up to 2.
pub fn random_polynomial(
    rng: &mut impl Rng,
    vars: usize,
    terms: usize,
    max_order: u64,
) -> jacobi::diffpoly::DiffPolynomial {
    use jacobi::diffpoly::{DerivativeVar, DiffPolynomial};
    use num_rational::BigRational;
    let mut p = DiffPolynomial::zero();
    for _ in 0..rng.gen_range(1..=terms) {
        let num: i64 = rng.gen_range(-6..=6);
        let den: i64 = rng.gen_range(1..=3);
        let mut t = DiffPolynomial::constant(BigRational::new(num.into(), den.into()));
        for _ in 0..rng.gen_range(0..=3) {
            let d = DerivativeVar::new(rng.gen_range(0..vars), rng.gen_range(0..=max_order));
            t = &t * &DiffPolynomial::var(d).pow(rng.gen_range(1..=2));
        }
        p = &p + &t;
    }
    p
}

/// `n×n` polynomial matrix with degrees up to `max_degree`, some entries zero.
pub fn random_poly_matrix(rng: &mut impl Rng, n: usize, max_degree: usize) -> jacobi::bounds::PolyMatrix {
    use jacobi::bounds::{PolyMatrix, UniPoly};
    let entries = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| {
                    if rng.gen_bool(0.25) {
                        UniPoly::zero()
                    } else {
                        let deg = rng.gen_range(0..=max_degree);
                        let coeffs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-3..=3)).collect();
                        UniPoly::from_integers(&coeffs)
                    }
                })
                .collect()
        })
        .collect();
    PolyMatrix::new(entries).unwrap()
}
