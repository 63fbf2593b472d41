use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::ser::{Serialize, SerializeStruct, Serializer};

use super::{DerivativeVar, DiffPolynomial, DiffSystem, PolyGrid};
use crate::canon::CanonResult;
use crate::error::{Error, Result};
use crate::resolvent::ResolventPlan;

/// Equation `u_equation` together with the derivative orders to take of it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prolongation {
    /// 0-based.
    pub equation: usize,
    pub orders: Vec<u64>,
}

impl Serialize for Prolongation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Prolongation", 2)?;
        st.serialize_field("equation", &(self.equation + 1))?;
        st.serialize_field("orders", &self.orders)?;
        st.end()
    }
}

impl Serialize for DerivativeVar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("DerivativeVar", 2)?;
        st.serialize_field("var", &(self.var + 1))?;
        st.serialize_field("order", &self.order)?;
        st.end()
    }
}

/// The shortest reduction: `u_i` is used with its derivatives up to `ℓ_i`.
///
/// Row `i` is starred in column `σ(i)`. The prolonged equations are solved
/// for `E = {x_{σ(i)}^(α_i+β_{σ(i)}+k) : 0 ≤ k ≤ ℓ_i}`; derivatives of `x_j`
/// below `known_set_bound[j]` are the parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionPlan {
    pub ell: Vec<u64>,
    pub alpha: Vec<u64>,
    pub beta: Vec<i64>,
    pub starred: Vec<(usize, usize)>,
    pub prolongations: Vec<Prolongation>,
    pub solved_set: Vec<DerivativeVar>,
    pub known_set_bound: Vec<u64>,
    pub order_total: u64,
}

impl Serialize for ReductionPlan {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ReductionPlan", 6)?;
        st.serialize_field("ell", &self.ell)?;
        st.serialize_field("prolongations", &self.prolongations)?;
        st.serialize_field("solvedSet", &self.solved_set)?;
        st.serialize_field("knownSetBound", &self.known_set_bound)?;
        st.serialize_field("beta", &self.beta)?;
        st.serialize_field("orderTotal", &self.order_total)?;
        st.end()
    }
}

/// Plan for the shortest reduction of `sys` under its minimal canon.
pub fn shortest_reduction_plan(sys: &DiffSystem, canon: &CanonResult) -> Result<ReductionPlan> {
    let n = sys.n();
    if canon.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: canon.n(),
        });
    }
    let mut solved_set = Vec::new();
    let mut known_set_bound = vec![0; n];
    let mut order_total = 0u64;
    for i in 0..n {
        let j = canon.starred_column(i);
        let base = canon.alpha[i] as i64 + canon.beta[j];
        if base < 0 {
            return Err(Error::Degenerate(format!(
                "alpha_{} + beta_{} is negative",
                i + 1,
                j + 1
            )));
        }
        let base = base as u64;
        known_set_bound[j] = base;
        order_total += base;
        solved_set.extend((0..=canon.ell[i]).map(|k| DerivativeVar::new(j, base + k)));
    }
    solved_set.sort_unstable();
    let prolongations = (0..n)
        .map(|i| Prolongation {
            equation: i,
            orders: (0..=canon.ell[i]).collect(),
        })
        .collect();
    Ok(ReductionPlan {
        ell: canon.ell.clone(),
        alpha: canon.alpha.clone(),
        beta: canon.beta.clone(),
        starred: canon.starred.clone(),
        prolongations,
        solved_set,
        known_set_bound,
        order_total,
    })
}

/// `(i, k, u_i^(k))` for every prolongation step, in plan order.
pub fn prolonged_equations(
    sys: &DiffSystem,
    prolongations: &[Prolongation],
) -> Vec<(usize, u64, DiffPolynomial)> {
    let mut out = Vec::new();
    for p in prolongations {
        let mut current = sys.equation(p.equation).clone();
        let mut at = 0;
        for &k in &p.orders {
            current = current.derivative_n(k - at);
            at = k;
            out.push((p.equation, k, current.clone()));
        }
    }
    out
}

impl ReductionPlan {
    pub fn prolonged_equations(&self, sys: &DiffSystem) -> Vec<(usize, u64, DiffPolynomial)> {
        prolonged_equations(sys, &self.prolongations)
    }

    /// Derivatives the plan treats as free parameters.
    pub fn is_parameter(&self, d: DerivativeVar) -> bool {
        d.order < self.known_set_bound[d.var]
    }

    /// Jacobian of the prolonged equations with respect to the solved set.
    pub fn solved_jacobian(&self, sys: &DiffSystem) -> PolyGrid {
        self.prolonged_equations(sys)
            .into_iter()
            .map(|(_, _, eq)| {
                self.solved_set
                    .iter()
                    .map(|&d| eq.partial_derivative(d))
                    .collect()
            })
            .collect()
    }

    /// Solve the prolonged equations for the solved set when they are affine
    /// in it with constant coefficients; each solved derivative is returned
    /// as a polynomial in the parameters.
    pub fn explicit_normal_form(
        &self,
        sys: &DiffSystem,
    ) -> Result<Vec<(DerivativeVar, DiffPolynomial)>> {
        let m = self.solved_set.len();
        let mut rows: Vec<(Vec<BigRational>, DiffPolynomial)> = Vec::with_capacity(m);
        for (i, k, eq) in self.prolonged_equations(sys) {
            let mut coeffs = Vec::with_capacity(m);
            let mut rest = eq.clone();
            for &d in &self.solved_set {
                let c = eq.partial_derivative(d).as_constant().ok_or_else(|| {
                    Error::NotLinear(format!(
                        "derivative {k} of {} is not affine in {}",
                        sys.equation_names()[i],
                        sys.display_var(d)
                    ))
                })?;
                rest = rest.substitute(d, &BigRational::zero());
                coeffs.push(c);
            }
            if let Some(d) = rest.variables().into_iter().find(|&d| !self.is_parameter(d)) {
                return Err(Error::NotLinear(format!(
                    "derivative {k} of {} involves {} outside the plan",
                    sys.equation_names()[i],
                    sys.display_var(d)
                )));
            }
            rows.push((coeffs, -rest));
        }
        // Gauss–Jordan on [coeffs | rhs]
        for col in 0..m {
            let pivot = (col..m)
                .find(|&r| !rows[r].0[col].is_zero())
                .ok_or_else(|| {
                    Error::Degenerate(format!(
                        "prolonged equations do not determine {}",
                        sys.display_var(self.solved_set[col])
                    ))
                })?;
            rows.swap(col, pivot);
            let inv = BigRational::one() / &rows[col].0[col];
            let (c, r) = (&rows[col].0, &rows[col].1);
            let (c, r): (Vec<BigRational>, DiffPolynomial) =
                (c.iter().map(|v| v * &inv).collect(), r.scale(&inv));
            rows[col] = (c, r);
            for other in 0..m {
                if other == col || rows[other].0[col].is_zero() {
                    continue;
                }
                let f = rows[other].0[col].clone();
                let pivot_row = rows[col].clone();
                let (oc, or) = &mut rows[other];
                for (x, p) in oc.iter_mut().zip(&pivot_row.0) {
                    *x -= &f * p;
                }
                *or = &*or - &pivot_row.1.scale(&f);
            }
        }
        Ok(self
            .solved_set
            .iter()
            .copied()
            .zip(rows.into_iter().map(|(_, r)| r))
            .collect())
    }
}

/// Jacobi ordering: by `k − β_j`, then by variable index, then by order.
pub fn jacobi_order_compare(d1: DerivativeVar, d2: DerivativeVar, beta: &[i64]) -> Result<Ordering> {
    let key = |d: DerivativeVar| -> Result<(i64, usize)> {
        let b = beta.get(d.var).ok_or(Error::IndexOutOfRange {
            index: d.var + 1,
            n: beta.len(),
        })?;
        Ok((d.order as i64 - b, d.var))
    };
    Ok(key(d1)?.cmp(&key(d2)?))
}

/// Equation `i` is differentiated `0..=h_i` times.
pub fn resolvent_prolongation(sys: &DiffSystem, plan: &ResolventPlan) -> Result<Vec<Prolongation>> {
    if plan.h.len() != sys.n() {
        return Err(Error::DimensionMismatch {
            expected: sys.n(),
            found: plan.h.len(),
        });
    }
    Ok(plan
        .h
        .iter()
        .enumerate()
        .map(|(i, &h)| Prolongation {
            equation: i,
            orders: (0..=h).collect(),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::minimal_canon;
    use crate::order_matrix::Finite;
    use crate::resolvent::resolvent_orders;

    fn d(var: usize, order: u64) -> DerivativeVar {
        DerivativeVar::new(var, order)
    }

    fn first() -> DiffSystem {
        DiffSystem::parse("x1'' - x2'\nx2'' - x3\nx3' - x2").unwrap()
    }

    fn second() -> DiffSystem {
        DiffSystem::parse("x1'' + x2'' + x3''\nx2'\nx2 + x3").unwrap()
    }

    fn plan_of(sys: &DiffSystem) -> ReductionPlan {
        shortest_reduction_plan(sys, &minimal_canon(&sys.order_matrix()).unwrap()).unwrap()
    }

    #[test]
    fn first_example_needs_no_prolongation() {
        let plan = plan_of(&first());
        assert_eq!(plan.ell, vec![0, 0, 0]);
        assert_eq!(plan.solved_set, vec![d(0, 2), d(1, 2), d(2, 1)]);
        assert_eq!(plan.order_total, 5);
        assert!(plan.prolongations.iter().all(|p| p.orders == vec![0]));
    }

    #[test]
    fn second_example_differentiates_u2_once_and_u3_twice() {
        let sys = second();
        let plan = plan_of(&sys);
        assert_eq!(plan.ell, vec![0, 1, 2]);
        assert_eq!(plan.order_total, 3);
        assert_eq!(plan.solved_set.len(), 6);
        assert_eq!(plan.known_set_bound, vec![2, 1, 0]);
        let orders: Vec<_> = plan.prolongations.iter().map(|p| p.orders.len() - 1).collect();
        assert_eq!(orders, vec![0, 1, 2]);
        let nf = plan.explicit_normal_form(&sys).unwrap();
        let x2 = DiffPolynomial::var(d(1, 0));
        for (v, value) in &nf {
            let expected = if *v == d(2, 0) { -&x2 } else { DiffPolynomial::zero() };
            assert_eq!(value, &expected, "{}", sys.display_var(*v));
        }
    }

    #[test]
    fn jacobi_ordering() {
        let beta = [2, 2, 1];
        assert_eq!(jacobi_order_compare(d(0, 2), d(2, 1), &beta).unwrap(), Ordering::Less);
        assert_eq!(jacobi_order_compare(d(1, 3), d(0, 2), &beta).unwrap(), Ordering::Greater);
        assert_eq!(jacobi_order_compare(d(1, 3), d(1, 3), &beta).unwrap(), Ordering::Equal);
        assert!(jacobi_order_compare(d(3, 0), d(0, 0), &beta).is_err());
    }

    #[test]
    fn resolvent_prolongation_of_first_example() {
        let sys = first();
        let a = sys.order_matrix();
        let plan = resolvent_orders(&a, &minimal_canon(&a).unwrap(), 0).unwrap();
        let pro = resolvent_prolongation(&sys, &plan).unwrap();
        let counts: Vec<usize> = pro.iter().map(|p| p.orders.len()).collect();
        assert_eq!(counts, vec![4, 3, 2]);
        let eqs = prolonged_equations(&sys, &pro);
        assert_eq!(eqs.len(), 9);
        let top = eqs.iter().map(|(_, _, p)| p.order_in(0)).max().unwrap();
        assert_eq!(top, Finite(5));
    }

    #[test]
    fn single_equation() {
        let sys = DiffSystem::parse("x1' - x1").unwrap();
        let a = sys.order_matrix();
        let plan = resolvent_orders(&a, &minimal_canon(&a).unwrap(), 0).unwrap();
        let pro = resolvent_prolongation(&sys, &plan).unwrap();
        assert_eq!(pro, vec![Prolongation { equation: 0, orders: vec![0] }]);
    }
}
