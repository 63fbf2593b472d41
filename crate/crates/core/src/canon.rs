//! Jacobi's algorithm for the minimal canon of an order matrix.
//!
//! A *canon* for `A` is a vector `λ ∈ ℕⁿ` such that the raised matrix
//! `(a_{i,j} + λ_i)` contains `n` *transversal maxima*: entries maximal in
//! their column, lying in pairwise distinct rows and columns. The algorithm
//! below returns the componentwise-smallest canon `ℓ`, and with it
//! `Λ = max ℓ_i`, `α_i = Λ − ℓ_i`, `β_j = max_i (a_{i,j} − α_i)` and the
//! Jacobi number `J = Σ α_i + Σ β_j`.
//!
//! Outline:
//!
//! 1. *Preparation*: one top-to-bottom pass raises each row by the smallest
//!    amount giving it a column maximum.
//! 2. Star the leftmost maximum of the first row, then any maximum found in a
//!    lower row (no star yet) and a right column (no star yet).
//! 3. Partition rows into classes. The *first class* holds the upper rows with
//!    a maximum in a right column and every row reachable from them by a path:
//!    row `j` is reachable from row `i` when `j` ties the starred maximum of
//!    `i` in its column. A lower row in the first class yields an augmenting
//!    chain and one more star.
//! 4. Otherwise the *third class* (rows with a path to a lower row, lower rows
//!    included) is raised by the least amount making one of its entries equal
//!    to the maximum of a first- or second-class column. A second-class row
//!    reached this way moves to the third class; a first-class one gives an
//!    augmenting chain at the next pass.
//!
//! Each augmentation costs `O(n²)` and each raise `O(n)` thanks to per-column
//! slacks, for `O(n³)` overall.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matching;
use crate::order_matrix::{
    finite_transversal_witness, Finite, NegInfinity, OrderMatrix, OrderValue,
};

const NEG: i64 = i64::MIN;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StepKind {
    Preparation,
    Augment,
    RaiseThirdClass,
}

/// Rows per class at the moment of a raise (0-based here, 1-based when
/// serialized). `lower` lists the rows
/// without a star; they are raised together with `third`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ClassPartition {
    #[serde(serialize_with = "one_based")]
    pub first: Vec<usize>,
    #[serde(serialize_with = "one_based")]
    pub second: Vec<usize>,
    #[serde(serialize_with = "one_based")]
    pub third: Vec<usize>,
    #[serde(serialize_with = "one_based")]
    pub lower: Vec<usize>,
}

fn one_based<S: serde::Serializer>(rows: &[usize], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(rows.iter().map(|r| r + 1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TraceStep {
    pub kind: StepKind,
    pub row_increments: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classes: Option<ClassPartition>,
    /// Starred `(row, column)` positions after this step.
    #[serde(skip)]
    pub starred: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonResult {
    pub ell: Vec<u64>,
    pub lambda: u64,
    pub alpha: Vec<u64>,
    /// May be negative: `β_j = max_i a_{i,j} + ℓ_i − Λ`.
    pub beta: Vec<i64>,
    pub jacobi_number: OrderValue,
    /// One `(row, column)` per row, sorted by row.
    pub starred: Vec<(usize, usize)>,
    pub trace: Vec<TraceStep>,
}

impl CanonResult {
    pub fn n(&self) -> usize {
        self.ell.len()
    }

    /// Column starred in row `i`.
    pub fn starred_column(&self, i: usize) -> usize {
        self.starred[i].1
    }

    /// Row whose star lies in column `j`.
    pub fn starred_row(&self, j: usize) -> usize {
        self.starred
            .iter()
            .find(|&&(_, c)| c == j)
            .map(|&(r, _)| r)
            .expect("starred set is a transversal")
    }

    /// `(a_{i,j} + ℓ_i)`.
    pub fn raised_matrix(&self, a: &OrderMatrix) -> OrderMatrix {
        a.raised(&self.ell).expect("same size")
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CanonOptions {
    /// Record every step. Costs `O(n)` memory per step.
    pub trace: bool,
}

impl Default for CanonOptions {
    fn default() -> Self {
        CanonOptions { trace: true }
    }
}

/// One pass of row raising so that every row owns a column maximum.
pub fn prepare(a: &OrderMatrix) -> Result<(OrderMatrix, Vec<u64>)> {
    let increments = preparation_increments(a)?;
    Ok((a.raised(&increments)?, increments))
}

fn preparation_increments(a: &OrderMatrix) -> Result<Vec<u64>> {
    let n = a.n();
    // Raising a row by its smallest gap only creates ties, so the column
    // maxima of the original matrix stay valid through the pass.
    let colmax: Vec<OrderValue> = (0..n).map(|j| a.column_max(j)).collect();
    (0..n)
        .map(|i| {
            (0..n)
                .filter_map(|j| match (colmax[j], a.get(i, j)) {
                    (Finite(m), Finite(v)) => Some(m - v),
                    _ => None,
                })
                .min()
                .ok_or_else(|| {
                    Error::Degenerate(format!("row {} has no finite entry", i + 1))
                })
        })
        .collect()
}

/// Whether `(a_{i,j} + λ_i)` has `n` transversal maxima.
pub fn is_canon(a: &OrderMatrix, lambda: &[u64]) -> bool {
    if lambda.len() != a.n() {
        return false;
    }
    let raised = a.raised(lambda).expect("checked length");
    let n = a.n();
    let colmax: Vec<OrderValue> = (0..n).map(|j| raised.column_max(j)).collect();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| raised.get(i, j).is_finite() && raised.get(i, j) == colmax[j])
                .collect()
        })
        .collect();
    matching::maximum_matching(&adj, n).is_perfect()
}

/// Largest size accepted by [`brute_force_minimal_canon`].
pub const BRUTE_FORCE_CANON_MAX_N: usize = 4;
/// Largest box accepted by [`brute_force_minimal_canon`].
pub const BRUTE_FORCE_CANON_MAX_BOX: u64 = 6;

/// Exhaustive search for the componentwise-minimal canon in `[0, bound]^n`.
pub fn brute_force_minimal_canon(a: &OrderMatrix, bound: u64) -> Result<Vec<u64>> {
    if a.n() > BRUTE_FORCE_CANON_MAX_N {
        return Err(Error::SizeGuard {
            what: "brute-force canon search",
            n: a.n(),
            max: BRUTE_FORCE_CANON_MAX_N,
        });
    }
    if bound > BRUTE_FORCE_CANON_MAX_BOX {
        return Err(Error::SizeGuard {
            what: "brute-force canon search box",
            n: bound as usize,
            max: BRUTE_FORCE_CANON_MAX_BOX as usize,
        });
    }
    let canons = canons_in_box(a, bound);
    let Some(first) = canons.first() else {
        return Err(Error::NoCanonInBox { bound });
    };
    // Scan order is by sum then lexicographic, so the minimum (if any) comes first.
    if canons
        .iter()
        .all(|c| c.iter().zip(first).all(|(x, y)| y <= x))
    {
        Ok(first.clone())
    } else {
        Err(Error::NoCanonInBox { bound })
    }
}

fn canons_in_box(a: &OrderMatrix, bound: u64) -> Vec<Vec<u64>> {
    let n = a.n();
    let side = bound + 1;
    let total = side.pow(n as u32);
    let mut all: Vec<Vec<u64>> = (0..total)
        .map(|mut code| {
            let mut v = vec![0; n];
            for slot in v.iter_mut().rev() {
                *slot = code % side;
                code /= side;
            }
            v
        })
        .filter(|v| is_canon(a, v))
        .collect();
    all.sort_by(|x, y| {
        x.iter()
            .sum::<u64>()
            .cmp(&y.iter().sum::<u64>())
            .then_with(|| x.cmp(y))
    });
    all
}

/// Minimal canon with a full step trace.
pub fn minimal_canon(a: &OrderMatrix) -> Result<CanonResult> {
    minimal_canon_with(a, CanonOptions::default())
}

pub fn minimal_canon_with(a: &OrderMatrix, options: CanonOptions) -> Result<CanonResult> {
    finite_transversal_witness(a).map_err(Error::NoFiniteTransversal)?;
    let increments = preparation_increments(a)?;
    let mut solver = Solver::new(a, increments, options.trace);
    solver.run()?;
    Ok(solver.finish(a))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Class {
    First,
    Second,
    Third,
}

#[derive(Clone, Copy)]
enum Link {
    /// Root of a first-class chain: tight in this unstarred column.
    Column(usize),
    /// Tight in the starred column of this row.
    Row(usize),
}

/// Lower row reached by the search, with the chain links leading to it.
type Augmenting = (usize, Vec<Option<Link>>);

struct Solver {
    n: usize,
    base: Vec<i64>,
    inc: Vec<i64>,
    colmax: Vec<i64>,
    row_star: Vec<Option<usize>>,
    col_star: Vec<Option<usize>>,
    stars: usize,
    trace: Option<Vec<TraceStep>>,
}

impl Solver {
    fn new(a: &OrderMatrix, increments: Vec<u64>, trace: bool) -> Self {
        let n = a.n();
        let base: Vec<i64> = a
            .rows()
            .flatten()
            .map(|v| v.finite().map_or(NEG, |x| x as i64))
            .collect();
        let inc: Vec<i64> = increments.iter().map(|&x| x as i64).collect();
        let mut colmax = vec![NEG; n];
        for i in 0..n {
            for (j, m) in colmax.iter_mut().enumerate() {
                let v = base[i * n + j];
                if v != NEG {
                    *m = (*m).max(v + inc[i]);
                }
            }
        }
        let mut solver = Solver {
            n,
            base,
            inc,
            colmax,
            row_star: vec![None; n],
            col_star: vec![None; n],
            stars: 0,
            trace: trace.then(Vec::new),
        };
        solver.record(StepKind::Preparation, increments, None);
        solver
    }

    #[inline]
    fn val(&self, i: usize, j: usize) -> i64 {
        let v = self.base[i * self.n + j];
        if v == NEG {
            NEG
        } else {
            v + self.inc[i]
        }
    }

    #[inline]
    fn tight(&self, i: usize, j: usize) -> bool {
        let v = self.val(i, j);
        v != NEG && v == self.colmax[j]
    }

    fn starred_positions(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .filter_map(|i| self.row_star[i].map(|j| (i, j)))
            .collect()
    }

    fn record(&mut self, kind: StepKind, row_increments: Vec<u64>, classes: Option<ClassPartition>) {
        let starred = self.starred_positions();
        if let Some(trace) = &mut self.trace {
            trace.push(TraceStep {
                kind,
                row_increments,
                classes,
                starred,
            });
        }
    }

    fn star(&mut self, i: usize, j: usize) {
        self.row_star[i] = Some(j);
        self.col_star[j] = Some(i);
    }

    fn run(&mut self) -> Result<()> {
        while self.stars < self.n {
            if self.direct_stars() {
                continue;
            }
            if self.augment_from_first_class() {
                continue;
            }
            self.raise_third_class()?;
        }
        Ok(())
    }

    /// Star column maxima lying in a lower row and a right column, lowest
    /// `(row, column)` first.
    fn direct_stars(&mut self) -> bool {
        let mut any = false;
        for i in 0..self.n {
            if self.row_star[i].is_some() {
                continue;
            }
            if let Some(j) = (0..self.n).find(|&j| self.col_star[j].is_none() && self.tight(i, j)) {
                self.star(i, j);
                self.stars += 1;
                any = true;
                self.record(StepKind::Augment, vec![0; self.n], None);
            }
        }
        any
    }

    /// Breadth-first search of the first class; augments along the chain to
    /// the first lower row found.
    fn first_class(&self) -> (Vec<bool>, Option<Augmenting>) {
        let n = self.n;
        let mut in_first = vec![false; n];
        let mut link: Vec<Option<Link>> = vec![None; n];
        let mut queue = std::collections::VecDeque::new();
        for j in (0..n).filter(|&j| self.col_star[j].is_none()) {
            for i in 0..n {
                if !in_first[i] && self.tight(i, j) {
                    in_first[i] = true;
                    link[i] = Some(Link::Column(j));
                    queue.push_back(i);
                }
            }
        }
        while let Some(i) = queue.pop_front() {
            let Some(j) = self.row_star[i] else {
                return (in_first, Some((i, link)));
            };
            for k in 0..n {
                if !in_first[k] && self.tight(k, j) {
                    in_first[k] = true;
                    link[k] = Some(Link::Row(i));
                    queue.push_back(k);
                }
            }
        }
        (in_first, None)
    }

    fn augment_from_first_class(&mut self) -> bool {
        let (_, found) = self.first_class();
        let Some((lower, link)) = found else {
            return false;
        };
        let mut cur = lower;
        loop {
            match link[cur].expect("reached rows carry a link") {
                Link::Row(prev) => {
                    let j = self.row_star[prev].expect("upper row");
                    self.star(cur, j);
                    cur = prev;
                }
                Link::Column(j) => {
                    self.star(cur, j);
                    break;
                }
            }
        }
        self.stars += 1;
        self.record(StepKind::Augment, vec![0; self.n], None);
        true
    }

    fn raise_third_class(&mut self) -> Result<()> {
        let n = self.n;
        let (in_first, _) = self.first_class();
        let mut class: Vec<Class> = in_first
            .iter()
            .map(|&f| if f { Class::First } else { Class::Second })
            .collect();
        // column owned by a third-class row (its maximum rises with the row)
        let mut third_col = vec![false; n];
        let mut slack = vec![i64::MAX; n];
        let mut slack_row = vec![usize::MAX; n];
        let mut third_rows: Vec<usize> = Vec::new();
        let mut stack: Vec<usize> = Vec::new();

        for i in (0..n).filter(|&i| self.row_star[i].is_none()) {
            debug_assert!(class[i] != Class::First);
            class[i] = Class::Third;
            stack.push(i);
        }

        loop {
            // absorb newly third rows: they propagate along tight starred
            // columns and lower the slacks of the remaining columns
            while let Some(t) = stack.pop() {
                third_rows.push(t);
                if let Some(j) = self.row_star[t] {
                    third_col[j] = true;
                }
                for j in 0..n {
                    let v = self.val(t, j);
                    if v == NEG || third_col[j] {
                        continue;
                    }
                    let gap = self.colmax[j] - v;
                    if gap < slack[j] {
                        slack[j] = gap;
                        slack_row[j] = t;
                    }
                }
            }

            let Some(j) = (0..n)
                .filter(|&j| !third_col[j] && slack[j] != i64::MAX)
                .min_by_key(|&j| (slack[j], j))
            else {
                let rows: Vec<usize> = (0..n).filter(|&i| class[i] == Class::Third).collect();
                return Err(Error::Degenerate(format!(
                    "third-class rows {:?} cannot be raised to meet any column maximum",
                    rows.iter().map(|r| r + 1).collect::<Vec<_>>()
                )));
            };

            let delta = slack[j];
            if delta > 0 {
                let classes = self.trace.is_some().then(|| ClassPartition {
                    first: (0..n)
                        .filter(|&i| class[i] == Class::First && self.row_star[i].is_some())
                        .collect(),
                    second: (0..n).filter(|&i| class[i] == Class::Second).collect(),
                    third: (0..n)
                        .filter(|&i| class[i] == Class::Third && self.row_star[i].is_some())
                        .collect(),
                    lower: (0..n).filter(|&i| self.row_star[i].is_none()).collect(),
                });
                let mut step = vec![0u64; n];
                for &t in &third_rows {
                    self.inc[t] += delta;
                    step[t] = delta as u64;
                    if let Some(c) = self.row_star[t] {
                        self.colmax[c] += delta;
                    }
                }
                for c in 0..n {
                    if !third_col[c] && slack[c] != i64::MAX {
                        slack[c] -= delta;
                    }
                }
                self.record(StepKind::RaiseThirdClass, step, classes);
            }

            debug_assert!(self.tight(slack_row[j], j));
            match self.col_star[j] {
                Some(owner) if class[owner] == Class::Second => {
                    class[owner] = Class::Third;
                    stack.push(owner);
                }
                // unstarred column or first-class owner: an augmenting chain exists
                _ => return Ok(()),
            }
        }
    }

    fn finish(self, a: &OrderMatrix) -> CanonResult {
        let n = self.n;
        let ell: Vec<u64> = self.inc.iter().map(|&x| x as u64).collect();
        let lambda = ell.iter().copied().max().unwrap_or(0);
        let alpha: Vec<u64> = ell.iter().map(|&l| lambda - l).collect();
        let beta: Vec<i64> = self.colmax.iter().map(|&m| m - lambda as i64).collect();
        let starred: Vec<(usize, usize)> = self.starred_positions();
        let jacobi_number = starred.iter().map(|&(i, j)| a.get(i, j)).sum();
        debug_assert_eq!(starred.len(), n);
        CanonResult {
            ell,
            lambda,
            alpha,
            beta,
            jacobi_number,
            starred,
            trace: self.trace.unwrap_or_default(),
        }
    }
}

/// Jacobi number via the canon algorithm; `−∞` when no finite transversal exists.
pub fn jacobi_number(a: &OrderMatrix) -> OrderValue {
    match minimal_canon_with(a, CanonOptions { trace: false }) {
        Ok(c) => c.jacobi_number,
        Err(_) => NegInfinity,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order_matrix::{brute_force_jacobi_number, isoperimetric_matrix};

    fn m(s: &str) -> OrderMatrix {
        s.parse().unwrap()
    }

    const JACOBI_EXAMPLE: &str = "2 1 - ; - 2 0 ; - 0 1";
    const TWO_FORMS: &str = "2 2 2; - 1 -; - 0 0";

    #[test]
    fn prepare_examples() {
        assert_eq!(prepare(&m(JACOBI_EXAMPLE)).unwrap().1, vec![0, 0, 0]);
        let (prepared, inc) = prepare(&m(TWO_FORMS)).unwrap();
        assert_eq!(inc, vec![0, 1, 2]);
        assert_eq!(prepared, m("2 2 2; - 2 -; - 2 2"));
        assert_eq!(prepare(&m("0 0; 0 0")).unwrap().1, vec![0, 0]);
    }

    #[test]
    fn prepare_rejects_empty_row() {
        assert!(matches!(prepare(&m("1 2; - -")), Err(Error::Degenerate(_))));
    }

    #[test]
    fn is_canon_examples() {
        assert!(is_canon(&m(JACOBI_EXAMPLE), &[0, 0, 0]));
        assert!(is_canon(&m(TWO_FORMS), &[0, 1, 2]));
        assert!(!is_canon(&m(TWO_FORMS), &[0, 0, 0]));
        assert!(!is_canon(&m(TWO_FORMS), &[0, 1]));
    }

    #[test]
    fn canon_of_jacobi_example() {
        let c = minimal_canon(&m(JACOBI_EXAMPLE)).unwrap();
        assert_eq!(c.ell, vec![0, 0, 0]);
        assert_eq!(c.lambda, 0);
        assert_eq!(c.alpha, vec![0, 0, 0]);
        assert_eq!(c.beta, vec![2, 2, 1]);
        assert_eq!(c.jacobi_number, Finite(5));
        assert_eq!(c.starred, vec![(0, 0), (1, 1), (2, 2)]);
    }

    #[test]
    fn canon_of_two_forms_example() {
        let c = minimal_canon(&m(TWO_FORMS)).unwrap();
        assert_eq!(c.ell, vec![0, 1, 2]);
        assert_eq!(c.alpha, vec![2, 1, 0]);
        assert_eq!(c.beta, vec![0, 0, 0]);
        assert_eq!(c.jacobi_number, Finite(3));
    }

    #[test]
    fn canon_of_isoperimetric_matrix() {
        let c = minimal_canon(&isoperimetric_matrix(&[1, 2]).unwrap()).unwrap();
        assert_eq!(c.ell, vec![1, 0]);
        assert_eq!(c.jacobi_number, Finite(6));
    }

    #[test]
    fn beta_may_be_negative() {
        // x1 + x2^(5) = 0, x2 = 0: the second equation is differentiated 5 times
        let c = minimal_canon(&m("0 5; - 0")).unwrap();
        assert_eq!(c.ell, vec![0, 5]);
        assert_eq!(c.beta, vec![-5, 0]);
        assert_eq!(c.jacobi_number, Finite(0));
    }

    #[test]
    fn refuses_structurally_singular() {
        let err = minimal_canon(&m("1 2 3; - - -; 0 0 0")).unwrap_err();
        assert_eq!(err.to_string(), "no finite transversal: rows {2} match only columns {}");
        assert_eq!(jacobi_number(&m("0 -; 0 -")), NegInfinity);
    }

    #[test]
    fn brute_force_canon_examples() {
        assert_eq!(brute_force_minimal_canon(&m(JACOBI_EXAMPLE), 3).unwrap(), vec![0, 0, 0]);
        assert_eq!(brute_force_minimal_canon(&m(TWO_FORMS), 4).unwrap(), vec![0, 1, 2]);
        assert_eq!(brute_force_minimal_canon(&m("0"), 0).unwrap(), vec![0]);
        assert!(matches!(
            brute_force_minimal_canon(&m(TWO_FORMS), 1),
            Err(Error::NoCanonInBox { bound: 1 })
        ));
        let five = OrderMatrix::from_fn(5, |_, _| Finite(0)).unwrap();
        assert!(matches!(brute_force_minimal_canon(&five, 2), Err(Error::SizeGuard { .. })));
        assert!(brute_force_minimal_canon(&m("0"), 7).is_err());
    }

    #[test]
    fn trace_replays_to_final_multipliers() {
        let a = m("5 0 0 0; 4 1 0 -; 3 0 2 0; 5 3 1 0");
        let c = minimal_canon(&a).unwrap();
        let mut acc = vec![0u64; 4];
        for step in &c.trace {
            for (x, d) in acc.iter_mut().zip(&step.row_increments) {
                *x += d;
            }
            if step.kind == StepKind::RaiseThirdClass {
                assert!(step.row_increments.iter().any(|&d| d > 0));
                assert!(step.classes.is_some());
            }
        }
        assert_eq!(acc, c.ell);
        assert_eq!(c.jacobi_number, brute_force_jacobi_number(&a).unwrap());
        assert!(is_canon(&a, &c.ell));
    }

    #[test]
    fn trace_json_shape() {
        let c = minimal_canon(&m(TWO_FORMS)).unwrap();
        let v = serde_json::to_value(&c.trace[0]).unwrap();
        assert_eq!(v["kind"], "Preparation");
        assert_eq!(v["rowIncrements"], serde_json::json!([0, 1, 2]));
    }
}
