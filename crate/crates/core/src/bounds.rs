//! Competing order bounds and the determinant degree of linear systems.
//!
//! For a linear system with constant coefficients, substituting
//! `x_j = c_j e^{λt}` gives `P(λ) c = 0`; the order of the system is
//! `deg det P(λ)`, which never exceeds the Jacobi number of the degree
//! matrix `(deg P_{i,j})`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::canon::{jacobi_number, minimal_canon};
use crate::diffpoly::{rational_determinant, DiffSystem};
use crate::error::{Error, Result};
use crate::order_matrix::{Finite, NegInfinity, OrderMatrix, OrderValue};

/// `G = Σ_j r_j − max_i η_i` with `r_j` the column maxima and
/// `η_i = min { r_j − a_{i,j} : a_{i,j} finite }`.
pub fn greenspan(a: &OrderMatrix) -> Result<OrderValue> {
    let n = a.n();
    let r: Vec<u64> = (0..n)
        .map(|j| {
            a.column_max(j).finite().ok_or_else(|| {
                Error::Degenerate(format!("column {} has no finite entry", j + 1))
            })
        })
        .collect::<Result<_>>()?;
    let mut max_eta = 0;
    for i in 0..n {
        let eta = (0..n)
            .filter_map(|j| a.get(i, j).finite().map(|v| r[j] - v))
            .min()
            .ok_or_else(|| Error::Degenerate(format!("row {} has no finite entry", i + 1)))?;
        max_eta = max_eta.max(eta);
    }
    Ok(Finite(r.iter().sum::<u64>() - max_eta))
}

/// `Σ_i max_j a_{i,j}`.
pub fn bezout_dual(a: &OrderMatrix) -> OrderValue {
    (0..a.n()).map(|i| a.row_max(i)).sum()
}

/// Jacobi number under the weak convention (absent variables have order 0).
pub fn lando_weak_number(a: &OrderMatrix) -> OrderValue {
    jacobi_number(&a.to_weak())
}

/// Polynomial in `λ` with rational coefficients, lowest degree first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<BigRational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// `c λ^k`.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `−∞` for the zero polynomial.
    pub fn degree(&self) -> OrderValue {
        match self.coeffs.len() {
            0 => NegInfinity,
            k => Finite(k as u64 - 1),
        }
    }

    pub fn coefficient(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn evaluate(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..len)
                .map(|k| self.coefficient(k) + other.coefficient(k))
                .collect(),
        )
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (a, x) in self.coeffs.iter().enumerate() {
            for (b, y) in other.coeffs.iter().enumerate() {
                out[a + b] += x * y;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &BigRational) -> UniPoly {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Unique polynomial of degree `< points.len()` through the given points (Newton form).
    pub fn interpolate(points: &[(BigRational, BigRational)]) -> UniPoly {
        let m = points.len();
        let mut dd: Vec<BigRational> = points.iter().map(|(_, y)| y.clone()).collect();
        for level in 1..m {
            for k in (level..m).rev() {
                dd[k] = (&dd[k] - &dd[k - 1]) / (&points[k].0 - &points[k - level].0);
            }
        }
        let mut acc = UniPoly::zero();
        for k in (0..m).rev() {
            // acc = acc · (λ − x_k) + dd_k
            let factor = UniPoly::new(vec![-points[k].0.clone(), BigRational::one()]);
            acc = acc.mul(&factor).add(&UniPoly::new(vec![dd[k].clone()]));
        }
        acc
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let abs = c.abs();
            let show_coeff = k == 0 || !abs.is_one();
            if show_coeff {
                if abs.is_integer() {
                    write!(f, "{}", abs.numer())?;
                } else {
                    write!(f, "{}/{}", abs.numer(), abs.denom())?;
                }
            }
            match k {
                0 => {}
                1 if show_coeff => f.write_str("*λ")?,
                1 => f.write_str("λ")?,
                _ if show_coeff => write!(f, "*λ^{k}")?,
                _ => write!(f, "λ^{k}")?,
            }
        }
        Ok(())
    }
}

/// Square matrix of polynomials in `λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    n: usize,
    entries: Vec<Vec<UniPoly>>,
}

pub const LINEAR_SYSTEM_ORDER_MAX_N: usize = 8;

impl PolyMatrix {
    pub fn new(entries: Vec<Vec<UniPoly>>) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::InvalidMatrix("empty polynomial matrix".into()));
        }
        if let Some(row) = entries.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: row.len(),
            });
        }
        Ok(PolyMatrix { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &UniPoly {
        &self.entries[i][j]
    }

    /// `(deg P_{i,j})`, `−∞` for zero entries.
    pub fn degree_matrix(&self) -> OrderMatrix {
        OrderMatrix::from_fn(self.n, |i, j| self.entries[i][j].degree()).expect("square")
    }

    pub fn evaluate(&self, x: &BigRational) -> Vec<Vec<BigRational>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(|p| p.evaluate(x)).collect())
            .collect()
    }

    /// `det P(λ)`, interpolated from its values at `0, 1, …, J`.
    pub fn determinant(&self) -> UniPoly {
        let j = match jacobi_number(&self.degree_matrix()) {
            NegInfinity => return UniPoly::zero(),
            Finite(j) => j,
        };
        let points: Vec<(BigRational, BigRational)> = (0..=j)
            .map(|k| {
                let x = BigRational::from_integer(BigInt::from(k));
                let y = rational_determinant(&self.evaluate(&x));
                (x, y)
            })
            .collect();
        UniPoly::interpolate(&points)
    }

    /// Determinant of the leading coefficients `[λ^{α_i+β_j}] P_{i,j}` under
    /// the minimal canon of the degree matrix; nonzero exactly when
    /// `deg det P = J`. `None` when the degree matrix has no finite transversal.
    pub fn leading_determinant(&self) -> Option<BigRational> {
        let canon = minimal_canon(&self.degree_matrix()).ok()?;
        let m: Vec<Vec<BigRational>> = (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| {
                        let k = canon.alpha[i] as i64 + canon.beta[j];
                        if k < 0 {
                            BigRational::zero()
                        } else {
                            self.entries[i][j].coefficient(k as usize)
                        }
                    })
                    .collect()
            })
            .collect();
        Some(rational_determinant(&m))
    }
}

/// `deg det P(λ)`, `−∞` when the determinant vanishes identically.
pub fn linear_system_order(p: &PolyMatrix) -> Result<OrderValue> {
    if p.n() > LINEAR_SYSTEM_ORDER_MAX_N {
        return Err(Error::SizeGuard {
            what: "linear_system_order",
            n: p.n(),
            max: LINEAR_SYSTEM_ORDER_MAX_N,
        });
    }
    Ok(p.determinant().degree())
}

/// `P(λ)` of a linear system with constant coefficients: `x_j^(k)` becomes `λ^k`.
/// Constant terms are dropped.
pub fn characteristic_matrix(sys: &DiffSystem) -> Result<PolyMatrix> {
    let n = sys.n();
    let mut entries = vec![vec![UniPoly::zero(); n]; n];
    for (i, eq) in sys.equations().iter().enumerate() {
        for (m, c) in eq.terms() {
            match m.factors() {
                [] => {}
                [(d, 1)] => {
                    let term = UniPoly::monomial(c.clone(), d.order as usize);
                    entries[i][d.var] = entries[i][d.var].add(&term);
                }
                _ => {
                    return Err(Error::NotLinear(format!(
                        "{} has a nonlinear term",
                        sys.equation_names()[i]
                    )))
                }
            }
        }
    }
    PolyMatrix::new(entries)
}

/// Every bound on one order matrix, with the facts relating them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundsReport {
    pub jacobi_strong: OrderValue,
    pub jacobi_weak: OrderValue,
    pub greenspan: Option<OrderValue>,
    pub bezout_dual: OrderValue,
    pub relations: Vec<String>,
    /// Why a bound is missing or how it was read.
    pub notes: Vec<String>,
}

impl Serialize for BoundsReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("BoundsReport", 5)?;
        st.serialize_field("jacobiStrong", &self.jacobi_strong.finite())?;
        st.serialize_field("jacobiWeak", &self.jacobi_weak.finite())?;
        st.serialize_field("greenspan", &self.greenspan.and_then(OrderValue::finite))?;
        st.serialize_field("bezoutDual", &self.bezout_dual.finite())?;
        st.serialize_field("relations", &self.relations)?;
        st.end()
    }
}

pub const GREENSPAN_NOTE: &str =
    "greenspan: G = sum over columns j of r_j - max_i eta_i, eta_i taken over finite entries only";

pub fn bounds_report(a: &OrderMatrix) -> BoundsReport {
    let jacobi_strong = jacobi_number(a);
    let jacobi_weak = lando_weak_number(a);
    let bezout = bezout_dual(a);
    let mut notes = vec![GREENSPAN_NOTE.to_string()];
    let greenspan = match greenspan(a) {
        Ok(g) => Some(g),
        Err(e) => {
            notes.push(format!("greenspan unavailable: {e}"));
            None
        }
    };
    if jacobi_strong == NegInfinity {
        notes.push("jacobiStrong is -inf: no finite transversal".into());
    }
    let named = [
        ("jacobiStrong", Some(jacobi_strong)),
        ("jacobiWeak", Some(jacobi_weak)),
        ("greenspan", greenspan),
        ("bezoutDual", Some(bezout)),
    ];
    let mut relations = Vec::new();
    for (k, &(x, vx)) in named.iter().enumerate() {
        for &(y, vy) in &named[k + 1..] {
            let (Some(vx), Some(vy)) = (vx, vy) else {
                continue;
            };
            if vx == NegInfinity || vy == NegInfinity {
                continue;
            }
            let op = match vx.cmp(&vy) {
                std::cmp::Ordering::Less => "<",
                std::cmp::Ordering::Equal => "=",
                std::cmp::Ordering::Greater => ">",
            };
            relations.push(format!("{x} {op} {y}"));
        }
    }
    BoundsReport {
        jacobi_strong,
        jacobi_weak,
        greenspan,
        bezout_dual: bezout,
        relations,
        notes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order_matrix::brute_force_jacobi_number;

    fn m(s: &str) -> OrderMatrix {
        s.parse().unwrap()
    }

    fn paper() -> OrderMatrix {
        m("2 1 - ; - 2 0 ; - 0 1")
    }

    #[test]
    fn greenspan_examples() {
        assert_eq!(greenspan(&paper()).unwrap(), Finite(5));
        let a = m("2 1 1 ; 1 0 0 ; 1 0 0");
        assert_eq!(greenspan(&a).unwrap(), Finite(3));
        assert_eq!(brute_force_jacobi_number(&a).unwrap(), Finite(2));
        assert_eq!(greenspan(&m("7")).unwrap(), Finite(7));
        assert!(greenspan(&m("1 - ; 2 -")).unwrap_err().is_degenerate());
    }

    #[test]
    fn bezout_examples() {
        assert_eq!(bezout_dual(&paper()), Finite(5));
        assert_eq!(bezout_dual(&m("2 2 2 ; - 1 - ; - 0 0")), Finite(3));
        assert_eq!(bezout_dual(&m("0 0 ; 0 0")), Finite(0));
        assert_eq!(bezout_dual(&m("1 2 ; - -")), NegInfinity);
    }

    #[test]
    fn lando_examples() {
        assert_eq!(lando_weak_number(&paper()), Finite(5));
        assert_eq!(lando_weak_number(&m("1 - ; - -")), Finite(1));
        assert_eq!(jacobi_number(&m("1 - ; - -")), NegInfinity);
        let a = m("3 1 ; 4 0");
        assert_eq!(lando_weak_number(&a), jacobi_number(&a));
    }

    fn lam(coeffs: &[i64]) -> UniPoly {
        UniPoly::from_integers(coeffs)
    }

    #[test]
    fn characteristic_matrix_of_first_example() {
        let sys = DiffSystem::parse("x1'' - x2'\nx2'' - x3\nx3' - x2").unwrap();
        let p = characteristic_matrix(&sys).unwrap();
        let expected = PolyMatrix::new(vec![
            vec![lam(&[0, 0, 1]), lam(&[0, -1]), lam(&[])],
            vec![lam(&[]), lam(&[0, 0, 1]), lam(&[-1])],
            vec![lam(&[]), lam(&[-1]), lam(&[0, 1])],
        ])
        .unwrap();
        assert_eq!(p, expected);
        // λ²(λ³ − 1)
        assert_eq!(p.determinant(), lam(&[0, 0, -1, 0, 0, 1]));
        assert_eq!(linear_system_order(&p).unwrap(), Finite(5));
        assert_eq!(p.leading_determinant(), Some(BigRational::one()));
    }

    #[test]
    fn diagonal_and_singular() {
        let diag = PolyMatrix::new(vec![
            vec![lam(&[0, 0, 3]), lam(&[])],
            vec![lam(&[]), lam(&[1, 0, 0, 1])],
        ])
        .unwrap();
        assert_eq!(linear_system_order(&diag).unwrap(), Finite(5));
        let rank_one = PolyMatrix::new(vec![
            vec![lam(&[0, 1]), lam(&[0, 1])],
            vec![lam(&[0, 1]), lam(&[0, 1])],
        ])
        .unwrap();
        assert_eq!(linear_system_order(&rank_one).unwrap(), NegInfinity);
        assert_eq!(jacobi_number(&rank_one.degree_matrix()), Finite(2));
        assert_eq!(rank_one.leading_determinant(), Some(BigRational::zero()));
    }

    #[test]
    fn nonlinear_systems_have_no_characteristic_matrix() {
        let sys = DiffSystem::parse("x1'*x2 - 1\nx2' - x1").unwrap();
        assert!(matches!(characteristic_matrix(&sys), Err(Error::NotLinear(_))));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let p = lam(&[3, 0, -2, 7]);
        let pts: Vec<_> = (0..6)
            .map(|k| {
                let x = BigRational::from_integer(BigInt::from(k));
                (x.clone(), p.evaluate(&x))
            })
            .collect();
        assert_eq!(UniPoly::interpolate(&pts), p);
        assert_eq!(p.to_string(), "7*λ^3 - 2*λ^2 + 3");
        assert_eq!(lam(&[0, -1, 1]).to_string(), "λ^2 - λ");
    }

    #[test]
    fn report_examples() {
        let r = bounds_report(&paper());
        assert_eq!(
            (r.jacobi_strong, r.jacobi_weak, r.greenspan, r.bezout_dual),
            (Finite(5), Finite(5), Some(Finite(5)), Finite(5))
        );
        let r = bounds_report(&m("2 1 1 ; 1 0 0 ; 1 0 0"));
        assert_eq!(r.jacobi_strong, Finite(2));
        assert_eq!(r.greenspan, Some(Finite(3)));
        assert!(r.relations.contains(&"jacobiStrong < greenspan".to_string()));
        let r = bounds_report(&m("0"));
        assert_eq!(
            (r.jacobi_strong, r.jacobi_weak, r.greenspan, r.bezout_dual),
            (Finite(0), Finite(0), Some(Finite(0)), Finite(0))
        );
        let json = serde_json::to_string(&bounds_report(&m("1 - ; - -"))).unwrap();
        assert_eq!(
            json,
            r#"{"jacobiStrong":null,"jacobiWeak":1,"greenspan":null,"bezoutDual":null,"relations":[]}"#
        );
    }
}
