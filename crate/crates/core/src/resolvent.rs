//! Differentiation orders for a resolvent representation.
//!
//! Given the minimal canon of `A` and a column `j0` (the candidate primitive
//! element `x_{j0}`), the attachment process raises `A + ℓ` until every row
//! is attached to the row `i0` starred in column `j0`, then lifts everything
//! uniformly so that the star of `i0` reaches `J`. The total raise of row `i`
//! is `h_i`, the number of times `u_i` must be differentiated.
//!
//! The same numbers are the maximal transversal sums of the minors of `A`
//! without row `i` and column `j0` ([`forma_elegans_orders`]).

use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::canon::{jacobi_number, CanonResult};
use crate::error::{Error, Result};
use crate::order_matrix::{brute_force_jacobi_number, Finite, OrderMatrix, OrderValue};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolventPlan {
    /// 0-based column of the primitive-element variable.
    pub j0: usize,
    /// 0-based row whose star lies in column `j0`.
    pub i0: usize,
    pub h: Vec<u64>,
    /// `A` after the attachment closure.
    pub a_double_prime: OrderMatrix,
    /// `A` with row `i` raised by `h_i`.
    pub a_triple_prime: OrderMatrix,
    pub resolvent_order: OrderValue,
    /// Starred positions, unchanged by the process.
    pub starred: Vec<(usize, usize)>,
    /// Rows in the order they were attached, `i0` first.
    pub attachment_order: Vec<usize>,
}

impl ResolventPlan {
    /// Positions of `A‴` equal to the starred entry of their column.
    pub fn underlined(&self) -> Vec<(usize, usize)> {
        let m = &self.a_triple_prime;
        let n = m.n();
        let mut out = Vec::new();
        for &(r, c) in &self.starred {
            let star = m.get(r, c);
            for i in 0..n {
                if i != r && m.get(i, c) == star {
                    out.push((i, c));
                }
            }
        }
        out.sort_unstable();
        out
    }
}

impl Serialize for ResolventPlan {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ResolventPlan", 6)?;
        st.serialize_field("j0", &(self.j0 + 1))?;
        st.serialize_field("i0", &(self.i0 + 1))?;
        st.serialize_field("h", &self.h)?;
        st.serialize_field("aDoublePrime", &self.a_double_prime.to_json())?;
        st.serialize_field("aTriplePrime", &self.a_triple_prime.to_json())?;
        st.serialize_field("order", &self.resolvent_order.finite())?;
        st.end()
    }
}

/// Jacobi's attachment process; `j0` is 0-based.
pub fn resolvent_orders(a: &OrderMatrix, canon: &CanonResult, j0: usize) -> Result<ResolventPlan> {
    let n = a.n();
    if canon.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: canon.n(),
        });
    }
    if j0 >= n {
        return Err(Error::IndexOutOfRange { index: j0 + 1, n });
    }
    if !a.column_max(j0).is_finite() {
        return Err(Error::ResolventStalled {
            rows: (0..n).map(|i| i + 1).collect(),
        });
    }
    let j_total = canon
        .jacobi_number
        .finite()
        .ok_or_else(|| Error::Degenerate("Jacobi number is -inf".into()))?;
    let i0 = canon.starred_row(j0);
    let entry = |i: usize, j: usize| a.get(i, j).finite().map(|v| v as i64);

    let mut raise: Vec<i64> = canon.ell.iter().map(|&l| l as i64).collect();
    let mut attached = vec![false; n];
    attached[i0] = true;
    let mut attachment_order = vec![i0];
    while attachment_order.len() < n {
        // gap[r]: least raise of the attached rows that ties row r's star
        let mut best: Option<i64> = None;
        let mut gaps = vec![None; n];
        for r in (0..n).filter(|&r| !attached[r]) {
            let c = canon.starred_column(r);
            let star = entry(r, c).expect("stars are finite") + raise[r];
            let gap = (0..n)
                .filter(|&i| attached[i])
                .filter_map(|i| entry(i, c).map(|v| star - (v + raise[i])))
                .min();
            gaps[r] = gap;
            if let Some(g) = gap {
                best = Some(best.map_or(g, |b: i64| b.min(g)));
            }
        }
        let Some(delta) = best else {
            return Err(Error::ResolventStalled {
                rows: (0..n).filter(|&r| !attached[r]).map(|r| r + 1).collect(),
            });
        };
        debug_assert!(delta >= 0, "stars are column maxima");
        for i in 0..n {
            if attached[i] {
                raise[i] += delta;
            }
        }
        for r in 0..n {
            if gaps[r] == Some(delta) {
                attached[r] = true;
                attachment_order.push(r);
            }
        }
    }
    let to_u64 = |v: &Vec<i64>| v.iter().map(|&x| x as u64).collect::<Vec<u64>>();
    let a_double_prime = a.raised(&to_u64(&raise))?;
    let star0 = entry(i0, j0).expect("stars are finite") + raise[i0];
    let lift = j_total as i64 - star0;
    if lift < 0 {
        return Err(Error::Degenerate(format!(
            "starred entry of row {} exceeds J after attachment",
            i0 + 1
        )));
    }
    for r in raise.iter_mut() {
        *r += lift;
    }
    let h = to_u64(&raise);
    let a_triple_prime = a.raised(&h)?;
    Ok(ResolventPlan {
        j0,
        i0,
        h,
        a_double_prime,
        a_triple_prime,
        resolvent_order: Finite(j_total),
        starred: canon.starred.clone(),
        attachment_order,
    })
}

/// Largest `n` for which minors are evaluated by permutation enumeration.
pub const FORMA_ELEGANS_BRUTE_FORCE_MAX_N: usize = 8;

/// `h_i` = maximal transversal sum of `A` without row `i` and column `j0`
/// (0 for the empty minor, `−∞` when the minor has no finite transversal).
pub fn forma_elegans_orders(a: &OrderMatrix, j0: usize) -> Result<Vec<OrderValue>> {
    let n = a.n();
    if j0 >= n {
        return Err(Error::IndexOutOfRange { index: j0 + 1, n });
    }
    (0..n)
        .map(|i| match a.minor(i, j0) {
            None => Ok(Finite(0)),
            Some(m) if n <= FORMA_ELEGANS_BRUTE_FORCE_MAX_N => brute_force_jacobi_number(&m),
            Some(m) => Ok(jacobi_number(&m)),
        })
        .collect()
}

/// Entrywise equality of the attachment orders and the minor orders.
pub fn orders_agree(plan: &ResolventPlan, elegans: &[OrderValue]) -> bool {
    plan.h.len() == elegans.len()
        && plan
            .h
            .iter()
            .zip(elegans)
            .all(|(&h, &e)| e == Finite(h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::minimal_canon;
    use crate::order_matrix::NegInfinity;

    fn paper() -> OrderMatrix {
        "2 1 - ; - 2 0 ; - 0 1".parse().unwrap()
    }

    #[test]
    fn worked_example_for_x1() {
        let a = paper();
        let c = minimal_canon(&a).unwrap();
        let plan = resolvent_orders(&a, &c, 0).unwrap();
        assert_eq!(plan.i0, 0);
        assert_eq!(plan.h, vec![3, 2, 1]);
        assert_eq!(plan.a_double_prime, "4 3 - ; - 3 1 ; - 0 1".parse().unwrap());
        assert_eq!(plan.a_triple_prime, "5 4 - ; - 4 2 ; - 1 2".parse().unwrap());
        assert_eq!(plan.resolvent_order, Finite(5));
        assert_eq!(plan.attachment_order, vec![0, 1, 2]);
        let json = serde_json::to_string(&plan).unwrap();
        assert_eq!(
            json,
            r#"{"j0":1,"i0":1,"h":[3,2,1],"aDoublePrime":{"n":3,"entries":[[4,3,null],[null,3,1],[null,0,1]]},"aTriplePrime":{"n":3,"entries":[[5,4,null],[null,4,2],[null,1,2]]},"order":5}"#
        );
    }

    #[test]
    fn forma_elegans_on_worked_example() {
        let h = forma_elegans_orders(&paper(), 0).unwrap();
        assert_eq!(h, vec![Finite(3), Finite(2), Finite(1)]);
    }

    #[test]
    fn one_by_one() {
        let a: OrderMatrix = "4".parse().unwrap();
        let c = minimal_canon(&a).unwrap();
        let plan = resolvent_orders(&a, &c, 0).unwrap();
        assert_eq!(plan.h, vec![0]);
        assert_eq!(forma_elegans_orders(&a, 0).unwrap(), vec![Finite(0)]);
    }

    #[test]
    fn other_columns_of_worked_example() {
        let a = paper();
        let c = minimal_canon(&a).unwrap();
        for j0 in 1..3 {
            match resolvent_orders(&a, &c, j0) {
                Ok(plan) => {
                    let e = forma_elegans_orders(&a, j0).unwrap();
                    assert!(orders_agree(&plan, &e), "j0={j0}: {:?} vs {e:?}", plan.h);
                }
                Err(e) => assert!(e.is_degenerate(), "{e}"),
            }
        }
    }

    #[test]
    fn out_of_range_column() {
        let a = paper();
        let c = minimal_canon(&a).unwrap();
        assert!(matches!(
            resolvent_orders(&a, &c, 3),
            Err(Error::IndexOutOfRange { index: 4, n: 3 })
        ));
    }

    #[test]
    fn stalled_attachment_names_rows() {
        // row 2 only meets column 2, which row 1 never reaches
        let a: OrderMatrix = "1 - ; - 1".parse().unwrap();
        let c = minimal_canon(&a).unwrap();
        match resolvent_orders(&a, &c, 0) {
            Err(Error::ResolventStalled { rows }) => assert_eq!(rows, vec![2]),
            r => panic!("unexpected {r:?}"),
        }
        assert_eq!(forma_elegans_orders(&a, 0).unwrap(), vec![Finite(1), NegInfinity]);
    }
}
