//! Differential polynomials with exact rational coefficients.
//!
//! Indeterminates are derivatives `x_j^(k)` ([`DerivativeVar`]); a
//! [`DiffPolynomial`] is a finite sum of rational multiples of monomials in
//! them. The derivation `d/dt` acts by `x_j^(k) ↦ x_j^(k+1)` and the Leibniz
//! rule ([`DiffPolynomial::total_derivative`]).

mod jacobian;
mod parse;
mod reduction;
mod system;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::order_matrix::{Finite, NegInfinity, OrderValue};

pub use jacobian::{
    check_truncated_jacobian, determinant_at, rational_determinant, symbolic_determinant,
    truncated_jacobian, JacobianStatus, PolyGrid, SYMBOLIC_DETERMINANT_MAX_N,
};
pub use parse::parse_polynomial;
pub use reduction::{
    jacobi_order_compare, prolonged_equations, resolvent_prolongation, shortest_reduction_plan,
    Prolongation, ReductionPlan,
};
pub use system::{euler_lagrange, order_matrix_of, DiffSystem};

/// The derivative `x_var^(order)`; `var` is 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DerivativeVar {
    pub var: usize,
    pub order: u64,
}

impl DerivativeVar {
    pub fn new(var: usize, order: u64) -> Self {
        DerivativeVar { var, order }
    }

    pub fn derive(self) -> Self {
        DerivativeVar {
            var: self.var,
            order: self.order + 1,
        }
    }

    /// Prime notation up to third order, `^(k)` beyond.
    pub fn display_with(self, names: &[String]) -> String {
        let name = names
            .get(self.var)
            .cloned()
            .unwrap_or_else(|| format!("x{}", self.var + 1));
        match self.order {
            0 => name,
            k @ 1..=3 => format!("{name}{}", "'".repeat(k as usize)),
            k => format!("{name}^({k})"),
        }
    }
}

/// Product of derivatives with positive exponents, sorted by derivative.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(DerivativeVar, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn of(d: DerivativeVar) -> Self {
        Monomial(vec![(d, 1)])
    }

    pub fn factors(&self) -> &[(DerivativeVar, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, d: DerivativeVar) -> u32 {
        self.0
            .binary_search_by(|(x, _)| x.cmp(&d))
            .map_or(0, |k| self.0[k].1)
    }

    fn from_map(map: BTreeMap<DerivativeVar, u32>) -> Self {
        Monomial(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    fn to_map(&self) -> BTreeMap<DerivativeVar, u32> {
        self.0.iter().copied().collect()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut map = self.to_map();
        for &(d, e) in &other.0 {
            *map.entry(d).or_insert(0) += e;
        }
        Monomial::from_map(map)
    }

    /// `self` with the exponent of `d` changed by `delta`.
    fn adjusted(&self, d: DerivativeVar, delta: i64) -> Monomial {
        let mut map = self.to_map();
        let e = map.entry(d).or_insert(0);
        *e = (*e as i64 + delta) as u32;
        Monomial::from_map(map)
    }
}

/// Exact polynomial in derivatives; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DiffPolynomial {
    terms: BTreeMap<Monomial, BigRational>,
}

impl DiffPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, Monomial::one())
    }

    pub fn integer(c: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(c)))
    }

    pub fn var(d: DerivativeVar) -> Self {
        Self::monomial(BigRational::one(), Monomial::of(d))
    }

    pub fn monomial(c: BigRational, m: Monomial) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value of a polynomial without indeterminates.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        DiffPolynomial {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// All derivatives occurring in the polynomial.
    pub fn variables(&self) -> BTreeSet<DerivativeVar> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|&(d, _)| d))
            .collect()
    }

    /// Highest order of `x_var`, `−∞` when absent.
    pub fn order_in(&self, var: usize) -> OrderValue {
        self.variables()
            .into_iter()
            .filter(|d| d.var == var)
            .map(|d| d.order)
            .max()
            .map_or(NegInfinity, Finite)
    }

    /// `d/dt`, by the Leibniz rule on each monomial.
    pub fn total_derivative(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            for &(d, e) in &m.0 {
                // e · d^(e−1) · d' · rest
                let dm = m.adjusted(d, -1).mul(&Monomial::of(d.derive()));
                out.add_term(dm, c * BigRational::from_integer(BigInt::from(e)));
            }
        }
        out
    }

    /// `d^k/dt^k`.
    pub fn derivative_n(&self, k: u64) -> Self {
        let mut p = self.clone();
        for _ in 0..k {
            p = p.total_derivative();
        }
        p
    }

    /// Formal partial derivative, every `x_j^(k)` being an independent indeterminate.
    pub fn partial_derivative(&self, v: DerivativeVar) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e > 0 {
                out.add_term(
                    m.adjusted(v, -1),
                    c * BigRational::from_integer(BigInt::from(e)),
                );
            }
        }
        out
    }

    pub fn evaluate(&self, point: &BTreeMap<DerivativeVar, BigRational>) -> Result<BigRational> {
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(d, e) in &m.0 {
                let x = point.get(&d).ok_or(Error::MissingAssignment(d))?;
                t *= num_traits::pow(x.clone(), e as usize);
            }
            total += t;
        }
        Ok(total)
    }

    /// Substitute a constant for every occurrence of `d`.
    pub fn substitute(&self, d: DerivativeVar, value: &BigRational) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(d);
            if e == 0 {
                out.add_term(m.clone(), c.clone());
            } else {
                let k = c * num_traits::pow(value.clone(), e as usize);
                out.add_term(m.adjusted(d, -(e as i64)), k);
            }
        }
        out
    }

    /// Replace every occurrence of `d` by the polynomial `with`.
    pub fn replace(&self, d: DerivativeVar, with: &DiffPolynomial) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(d);
            let rest = Self::monomial(c.clone(), m.adjusted(d, -(e as i64)));
            out = &out + &(&rest * &with.pow(e));
        }
        out
    }

    /// Text in the input grammar, using `names` for the unknowns.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a DiffPolynomial,
    names: &'a [String],
}

fn write_rational(f: &mut fmt::Formatter<'_>, q: &BigRational) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.poly.terms.iter().enumerate() {
            let negative = c.is_negative();
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            let mut first = true;
            if m.is_one() || !abs.is_one() {
                write_rational(f, &abs)?;
                first = false;
            }
            for &(d, e) in m.factors() {
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                f.write_str(&d.display_with(self.names))?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl Add for &DiffPolynomial {
    type Output = DiffPolynomial;

    fn add(self, rhs: &DiffPolynomial) -> DiffPolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &DiffPolynomial {
    type Output = DiffPolynomial;

    fn sub(self, rhs: &DiffPolynomial) -> DiffPolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &DiffPolynomial {
    type Output = DiffPolynomial;

    fn mul(self, rhs: &DiffPolynomial) -> DiffPolynomial {
        let mut out = DiffPolynomial::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &DiffPolynomial {
    type Output = DiffPolynomial;

    fn neg(self) -> DiffPolynomial {
        DiffPolynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for DiffPolynomial {
            type Output = DiffPolynomial;

            fn $method(self, rhs: DiffPolynomial) -> DiffPolynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for DiffPolynomial {
    type Output = DiffPolynomial;

    fn neg(self) -> DiffPolynomial {
        -&self
    }
}
