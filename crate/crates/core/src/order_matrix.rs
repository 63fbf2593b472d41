//! Order matrices over `ℕ ∪ {−∞}` and the brute-force oracles used to check
//! every faster algorithm in this crate.
//!
//! Entry `(i, j)` of an [`OrderMatrix`] is the highest derivative order of
//! unknown `x_j` occurring in equation `u_i`, or [`OrderValue::NegInfinity`]
//! when `u_i` does not involve `x_j` at all (the *strong* convention). The
//! *weak* convention replaces every `−∞` by `0`, see [`OrderMatrix::to_weak`].
//!
//! Indices are 0-based in the API and 1-based in every printed report.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, HallViolation, Result};
use crate::matching;

/// Largest size accepted by the factorial-time oracles.
pub const BRUTE_FORCE_MAX_N: usize = 9;

/// A derivation order, or `−∞` for an absent unknown.
///
/// The derived ordering puts `NegInfinity` below every finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OrderValue {
    NegInfinity,
    Finite(u64),
}

pub use OrderValue::{Finite, NegInfinity};

impl OrderValue {
    pub fn finite(self) -> Option<u64> {
        match self {
            Finite(v) => Some(v),
            NegInfinity => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Finite(_))
    }

    /// Shift a finite value by a non-negative amount.
    pub fn raised(self, by: u64) -> OrderValue {
        match self {
            Finite(v) => Finite(v + by),
            NegInfinity => NegInfinity,
        }
    }
}

impl From<Option<u64>> for OrderValue {
    fn from(v: Option<u64>) -> Self {
        v.map_or(NegInfinity, Finite)
    }
}

impl From<u64> for OrderValue {
    fn from(v: u64) -> Self {
        Finite(v)
    }
}

/// Max-plus product: `−∞` is absorbing.
pub fn order_add(a: OrderValue, b: OrderValue) -> OrderValue {
    match (a, b) {
        (Finite(x), Finite(y)) => Finite(x + y),
        _ => NegInfinity,
    }
}

impl Add for OrderValue {
    type Output = OrderValue;

    fn add(self, rhs: OrderValue) -> OrderValue {
        order_add(self, rhs)
    }
}

impl std::iter::Sum for OrderValue {
    fn sum<I: Iterator<Item = OrderValue>>(iter: I) -> OrderValue {
        iter.fold(Finite(0), order_add)
    }
}

impl fmt::Display for OrderValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finite(v) => fmt::Display::fmt(v, f),
            NegInfinity => f.pad("-inf"),
        }
    }
}

impl Serialize for OrderValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.finite().serialize(s)
    }
}

impl<'de> Deserialize<'de> for OrderValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Option::<u64>::deserialize(d).map(OrderValue::from)
    }
}

/// A square matrix of [`OrderValue`]s, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrderMatrix {
    n: usize,
    entries: Vec<OrderValue>,
}

impl OrderMatrix {
    pub fn new(rows: Vec<Vec<OrderValue>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidMatrix("matrix must have at least one row".into()));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMatrix(format!(
                    "row {} has {} entries, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
            entries.extend(row);
        }
        Ok(OrderMatrix { n, entries })
    }

    pub fn from_options(rows: Vec<Vec<Option<u64>>>) -> Result<Self> {
        Self::new(
            rows.into_iter()
                .map(|r| r.into_iter().map(OrderValue::from).collect())
                .collect(),
        )
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> OrderValue) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidMatrix("matrix must have at least one row".into()));
        }
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        Ok(OrderMatrix { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> OrderValue {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[OrderValue] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[OrderValue]> {
        self.entries.chunks(self.n)
    }

    pub fn to_rows(&self) -> Vec<Vec<OrderValue>> {
        self.rows().map(<[_]>::to_vec).collect()
    }

    /// Row `i` shifted by `increments[i]`.
    pub fn raised(&self, increments: &[u64]) -> Result<OrderMatrix> {
        check_len(self.n, increments.len())?;
        Ok(OrderMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .enumerate()
                .map(|(k, v)| v.raised(increments[k / self.n]))
                .collect(),
        })
    }

    /// Weak convention: an absent unknown counts as order 0.
    pub fn to_weak(&self) -> OrderMatrix {
        OrderMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .map(|v| match v {
                    NegInfinity => Finite(0),
                    f => *f,
                })
                .collect(),
        }
    }

    pub fn transpose(&self) -> OrderMatrix {
        OrderMatrix::from_fn(self.n, |i, j| self.get(j, i)).expect("non-empty")
    }

    /// Matrix with `row_perm[i]`-th row of `self` at position `i` and likewise for columns.
    pub fn permuted(&self, row_perm: &Permutation, col_perm: &Permutation) -> Result<OrderMatrix> {
        check_len(self.n, row_perm.len())?;
        check_len(self.n, col_perm.len())?;
        OrderMatrix::from_fn(self.n, |i, j| self.get(row_perm.image(i), col_perm.image(j)))
    }

    /// The `(n−1)×(n−1)` matrix without row `i` and column `j`; `None` when `n == 1`.
    pub fn minor(&self, i: usize, j: usize) -> Option<OrderMatrix> {
        if self.n == 1 {
            return None;
        }
        let rows: Vec<Vec<OrderValue>> = (0..self.n)
            .filter(|&r| r != i)
            .map(|r| {
                (0..self.n)
                    .filter(|&c| c != j)
                    .map(|c| self.get(r, c))
                    .collect()
            })
            .collect();
        Some(OrderMatrix::new(rows).expect("square minor"))
    }

    /// Maximum of column `j`.
    pub fn column_max(&self, j: usize) -> OrderValue {
        (0..self.n).map(|i| self.get(i, j)).max().expect("n >= 1")
    }

    /// Maximum of row `i`.
    pub fn row_max(&self, i: usize) -> OrderValue {
        self.row(i).iter().copied().max().expect("n >= 1")
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Rows to the columns where the entry is finite.
    pub(crate) fn finite_adjacency(&self) -> Vec<Vec<usize>> {
        self.rows()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, v)| v.is_finite())
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect()
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson {
            n: self.n,
            entries: self
                .rows()
                .map(|r| r.iter().map(|v| v.finite()).collect())
                .collect(),
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let doc: MatrixJson = serde_json::from_str(text)?;
        doc.try_into()
    }
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// On-disk matrix form: `{"n": 3, "entries": [[2, 1, null], ...]}` where
/// `null` stands for `−∞`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub n: usize,
    pub entries: Vec<Vec<Option<u64>>>,
}

impl TryFrom<MatrixJson> for OrderMatrix {
    type Error = Error;

    fn try_from(doc: MatrixJson) -> Result<Self> {
        if doc.entries.len() != doc.n {
            return Err(Error::InvalidMatrix(format!(
                "\"n\" is {} but \"entries\" has {} rows",
                doc.n,
                doc.entries.len()
            )));
        }
        OrderMatrix::from_options(doc.entries)
    }
}

impl Serialize for OrderMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for OrderMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = MatrixJson::deserialize(d)?;
        OrderMatrix::try_from(doc).map_err(serde::de::Error::custom)
    }
}

/// Compact text form: rows separated by `;`, entries by whitespace or commas,
/// `-` or `-inf` for `−∞`. For example `"2 1 - ; - 2 0 ; - 0 1"`.
impl FromStr for OrderMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let rows = s
            .split(';')
            .map(|row| {
                row.split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|t| !t.is_empty())
                    .map(|t| match t {
                        "-" | "-inf" | "−∞" => Ok(NegInfinity),
                        t => t.parse::<u64>().map(Finite).map_err(|_| {
                            Error::InvalidMatrix(format!("bad entry `{t}`"))
                        }),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        OrderMatrix::new(rows)
    }
}

impl fmt::Display for OrderMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{v:>4}")?;
            }
        }
        Ok(())
    }
}

/// A bijection of `{0, .., n−1}`; `image(i)` is the column paired with row `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &j in &images {
            if j >= n || std::mem::replace(&mut seen[j], true) {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection of 0..{n}"
                )));
            }
        }
        Ok(Permutation { images })
    }

    /// Build from the 1-based images used in reports, e.g. `[2, 3, 1]`.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::InvalidPermutation("1-based images must be >= 1".into()));
        }
        Self::new(images.iter().map(|j| j - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }
}

/// `Σ_i a_{i,σ(i)}` with `−∞` absorbing.
pub fn transversal_sum(a: &OrderMatrix, sigma: &Permutation) -> Result<OrderValue> {
    check_len(a.n(), sigma.len())?;
    Ok((0..a.n()).map(|i| a.get(i, sigma.image(i))).sum())
}

/// Maximal transversal sum by enumerating all `n!` permutations.
pub fn brute_force_jacobi_number(a: &OrderMatrix) -> Result<OrderValue> {
    if a.n() > BRUTE_FORCE_MAX_N {
        return Err(Error::SizeGuard {
            what: "brute-force Jacobi number",
            n: a.n(),
            max: BRUTE_FORCE_MAX_N,
        });
    }
    Ok(max_transversal_exhaustive(a))
}

fn max_transversal_exhaustive(a: &OrderMatrix) -> OrderValue {
    fn go(a: &OrderMatrix, row: usize, used: &mut [bool], acc: u64, best: &mut OrderValue) {
        if row == a.n() {
            *best = (*best).max(Finite(acc));
            return;
        }
        for j in 0..a.n() {
            if used[j] {
                continue;
            }
            if let Finite(v) = a.get(row, j) {
                used[j] = true;
                go(a, row + 1, used, acc + v, best);
                used[j] = false;
            }
        }
    }
    let mut best = NegInfinity;
    go(a, 0, &mut vec![false; a.n()], 0, &mut best);
    best
}

/// Whether some transversal avoids every `−∞` entry, decided by bipartite
/// matching in polynomial time.
pub fn has_finite_transversal(a: &OrderMatrix) -> bool {
    finite_transversal_witness(a).is_ok()
}

/// A finite transversal (row → column), or the rows violating Hall's condition.
pub fn finite_transversal_witness(a: &OrderMatrix) -> std::result::Result<Permutation, HallViolation> {
    let adj = a.finite_adjacency();
    let m = matching::maximum_matching(&adj, a.n());
    if m.is_perfect() {
        Ok(Permutation {
            images: m.row_to_col.into_iter().map(|c| c.expect("perfect")).collect(),
        })
    } else {
        Err(matching::hall_violation(&adj, &m).expect("imperfect matching"))
    }
}

/// Order matrix of the isoperimetric (Euler–Lagrange) equations of a
/// Lagrangian in which unknown `x_i` occurs up to order `e_i`:
/// `a_{i,j} = e_i + e_j`.
pub fn isoperimetric_matrix(e: &[u64]) -> Result<OrderMatrix> {
    if e.is_empty() {
        return Err(Error::InvalidMatrix("order vector must be non-empty".into()));
    }
    OrderMatrix::from_fn(e.len(), |i, j| Finite(e[i] + e[j]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> OrderMatrix {
        s.parse().unwrap()
    }

    const JACOBI_EXAMPLE: &str = "2 1 - ; - 2 0 ; - 0 1";

    #[test]
    fn order_add_cases() {
        assert_eq!(order_add(Finite(2), Finite(3)), Finite(5));
        assert_eq!(order_add(NegInfinity, Finite(7)), NegInfinity);
        assert_eq!(order_add(Finite(0), Finite(0)), Finite(0));
        assert_eq!(Finite(4) + NegInfinity, NegInfinity);
    }

    #[test]
    fn neg_infinity_sorts_first() {
        assert!(NegInfinity < Finite(0));
        assert_eq!(Finite(3).max(NegInfinity), Finite(3));
    }

    #[test]
    fn transversal_sums() {
        let a = m(JACOBI_EXAMPLE);
        assert_eq!(transversal_sum(&a, &Permutation::identity(3)).unwrap(), Finite(5));
        let s = Permutation::from_one_based(&[2, 3, 1]).unwrap();
        assert_eq!(transversal_sum(&a, &s).unwrap(), NegInfinity);
        let z = m("0 0 0; 0 0 0; 0 0 0");
        let s = Permutation::from_one_based(&[3, 1, 2]).unwrap();
        assert_eq!(transversal_sum(&z, &s).unwrap(), Finite(0));
    }

    #[test]
    fn transversal_sum_rejects_size_mismatch() {
        let a = m(JACOBI_EXAMPLE);
        let err = transversal_sum(&a, &Permutation::identity(2)).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { expected: 3, found: 2 }));
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(brute_force_jacobi_number(&m(JACOBI_EXAMPLE)).unwrap(), Finite(5));
        assert_eq!(brute_force_jacobi_number(&m("3 - -; - 1 -; - - 4")).unwrap(), Finite(8));
        // only the identity is finite: 2 + 1 + 0
        assert_eq!(brute_force_jacobi_number(&m("2 2 2; - 1 -; - 0 0")).unwrap(), Finite(3));
        assert_eq!(brute_force_jacobi_number(&m("1 -; - -")).unwrap(), NegInfinity);
    }

    #[test]
    fn brute_force_guard() {
        let big = OrderMatrix::from_fn(10, |_, _| Finite(0)).unwrap();
        assert!(matches!(
            brute_force_jacobi_number(&big),
            Err(Error::SizeGuard { n: 10, max: 9, .. })
        ));
    }

    #[test]
    fn finite_transversal_detection() {
        assert!(has_finite_transversal(&m(JACOBI_EXAMPLE)));
        assert!(!has_finite_transversal(&m("1 2 3; - - -; 0 0 0")));
        assert!(!has_finite_transversal(&m("0 -; 0 -")));
        let w = finite_transversal_witness(&m("1 2 3; - - -; 0 0 0")).unwrap_err();
        assert_eq!(w.to_string(), "rows {2} match only columns {}");
    }

    #[test]
    fn weak_convention() {
        assert_eq!(m(JACOBI_EXAMPLE).to_weak(), m("2 1 0; 0 2 0; 0 0 1"));
        let finite = m("1 2; 3 4");
        assert_eq!(finite.to_weak(), finite);
        assert_eq!(m("-").to_weak(), m("0"));
    }

    #[test]
    fn isoperimetric_examples() {
        assert_eq!(isoperimetric_matrix(&[1, 2]).unwrap(), m("2 3; 3 4"));
        assert_eq!(isoperimetric_matrix(&[0]).unwrap(), m("0"));
        assert!(isoperimetric_matrix(&[]).is_err());
        assert!(isoperimetric_matrix(&[3, 0, 2]).unwrap().is_symmetric());
    }

    #[test]
    fn json_round_trip_and_validation() {
        let a = m(JACOBI_EXAMPLE);
        let text = serde_json::to_string(&a).unwrap();
        assert_eq!(text, r#"{"n":3,"entries":[[2,1,null],[null,2,0],[null,0,1]]}"#);
        assert_eq!(OrderMatrix::from_json_str(&text).unwrap(), a);
        assert!(OrderMatrix::from_json_str(r#"{"n":2,"entries":[[1,2]]}"#).is_err());
        assert!(OrderMatrix::from_json_str(r#"{"n":2,"entries":[[1,2],[3]]}"#).is_err());
        assert!(OrderMatrix::from_json_str(r#"{"n":1,"entries":[[-1]]}"#).is_err());
    }

    #[test]
    fn minor_drops_row_and_column() {
        let a = m(JACOBI_EXAMPLE);
        assert_eq!(a.minor(0, 0).unwrap(), m("2 0; 0 1"));
        assert_eq!(a.minor(2, 0).unwrap(), m("1 -; 2 0"));
        assert!(m("4").minor(0, 0).is_none());
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![0, 2]).is_err());
        assert!(Permutation::from_one_based(&[0, 1]).is_err());
    }
}
