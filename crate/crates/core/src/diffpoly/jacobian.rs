use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{DerivativeVar, DiffPolynomial, DiffSystem};
use crate::canon::CanonResult;
use crate::error::{Error, Result};

/// Square grid of polynomials, row-major.
pub type PolyGrid = Vec<Vec<DiffPolynomial>>;

pub const SYMBOLIC_DETERMINANT_MAX_N: usize = 4;

const WITNESS_SEED: u64 = 0x4a61_636f_6269;
const WITNESS_TRIALS: u32 = 48;

/// `∇ = (∂u_i / ∂x_j^(α_i+β_j))`; entries with `α_i + β_j < 0` are zero.
pub fn truncated_jacobian(sys: &DiffSystem, canon: &CanonResult) -> Result<PolyGrid> {
    let n = sys.n();
    if canon.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: canon.n(),
        });
    }
    Ok((0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let order = canon.alpha[i] as i64 + canon.beta[j];
                    if order < 0 {
                        DiffPolynomial::zero()
                    } else {
                        sys.equation(i)
                            .partial_derivative(DerivativeVar::new(j, order as u64))
                    }
                })
                .collect()
        })
        .collect())
}

/// Exact determinant by Bareiss elimination after clearing denominators row by row.
pub fn rational_determinant(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    if n == 0 {
        return BigRational::one();
    }
    let mut scale = BigInt::one();
    let mut rows: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| {
            let l = row
                .iter()
                .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            scale *= &l;
            row.iter()
                .map(|q| (q * BigRational::from_integer(l.clone())).to_integer())
                .collect()
        })
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if rows[k][k].is_zero() {
            match (k + 1..n).find(|&r| !rows[r][k].is_zero()) {
                Some(r) => {
                    rows.swap(k, r);
                    sign = -sign;
                }
                None => return BigRational::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &rows[i][j] * &rows[k][k] - &rows[i][k] * &rows[k][j];
                rows[i][j] = v / &prev;
            }
            rows[i][k] = BigInt::zero();
        }
        prev = rows[k][k].clone();
    }
    BigRational::new(sign * prev, scale)
}

/// Evaluate every entry at `point` and take the exact determinant.
pub fn determinant_at(
    grid: &[Vec<DiffPolynomial>],
    point: &BTreeMap<DerivativeVar, BigRational>,
) -> Result<BigRational> {
    let values = grid
        .iter()
        .map(|row| row.iter().map(|p| p.evaluate(point)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(rational_determinant(&values))
}

/// Cofactor expansion along the first row.
pub fn symbolic_determinant(grid: &[Vec<DiffPolynomial>]) -> Result<DiffPolynomial> {
    let n = grid.len();
    if n > SYMBOLIC_DETERMINANT_MAX_N {
        return Err(Error::SizeGuard {
            what: "symbolic determinant",
            n,
            max: SYMBOLIC_DETERMINANT_MAX_N,
        });
    }
    let cols: Vec<usize> = (0..n).collect();
    Ok(expand(grid, 0, &cols))
}

fn expand(grid: &[Vec<DiffPolynomial>], row: usize, cols: &[usize]) -> DiffPolynomial {
    if cols.is_empty() {
        return DiffPolynomial::one();
    }
    let mut acc = DiffPolynomial::zero();
    for (k, &c) in cols.iter().enumerate() {
        let entry = &grid[row][c];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = entry * &expand(grid, row + 1, &rest);
        acc = if k % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// Outcome of the nonvanishing test for `|∇|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JacobianStatus {
    /// Exact value at an explicit point; the point is empty for constant grids.
    NonzeroWitnessed {
        point: Vec<(DerivativeVar, BigRational)>,
        value: BigRational,
    },
    ZeroSymbolic,
    /// Zero at every sampled point, grid too large for symbolic expansion.
    ProbablyZero { trials: u32 },
    NotComputed,
}

impl JacobianStatus {
    pub fn is_nonzero(&self) -> bool {
        matches!(self, JacobianStatus::NonzeroWitnessed { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            JacobianStatus::NonzeroWitnessed { .. } => "nonzero (witnessed)",
            JacobianStatus::ZeroSymbolic => "zero (symbolic)",
            JacobianStatus::ProbablyZero { .. } => "probably zero",
            JacobianStatus::NotComputed => "not computed",
        }
    }
}

/// Decide whether `|grid|` vanishes identically.
///
/// Points are drawn from `[-r, r]` with `r` doubling every eight trials,
/// from a fixed seed, so the witness is reproducible.
pub fn check_truncated_jacobian(grid: &[Vec<DiffPolynomial>]) -> JacobianStatus {
    let vars: BTreeSet<DerivativeVar> = grid
        .iter()
        .flatten()
        .flat_map(|p| p.variables())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(WITNESS_SEED);
    let trials = if vars.is_empty() { 1 } else { WITNESS_TRIALS };
    for t in 0..trials {
        let radius: i64 = 2 << (t / 8);
        let point: BTreeMap<DerivativeVar, BigRational> = vars
            .iter()
            .map(|&d| {
                let v = rng.gen_range(-radius..=radius);
                (d, BigRational::from_integer(BigInt::from(v)))
            })
            .collect();
        let value = determinant_at(grid, &point).expect("every variable is assigned");
        if !value.is_zero() {
            return JacobianStatus::NonzeroWitnessed {
                point: point.into_iter().collect(),
                value,
            };
        }
    }
    if vars.is_empty() {
        return JacobianStatus::ZeroSymbolic;
    }
    match symbolic_determinant(grid) {
        Ok(det) if det.is_zero() => JacobianStatus::ZeroSymbolic,
        Ok(det) => witness_from_symbolic(&det, &vars)
            .unwrap_or(JacobianStatus::ProbablyZero { trials }),
        Err(_) => JacobianStatus::ProbablyZero { trials },
    }
}

/// A nonzero polynomial has a nonzero value on a large enough grid of integers;
/// walk one coordinate at a time.
fn witness_from_symbolic(
    det: &DiffPolynomial,
    vars: &BTreeSet<DerivativeVar>,
) -> Option<JacobianStatus> {
    let mut p = det.clone();
    let mut point = Vec::new();
    for &d in vars {
        let degree = p
            .terms()
            .map(|(m, _)| m.exponent(d))
            .max()
            .unwrap_or(0) as i64;
        let pick = (0..=degree + 1)
            .map(|v| BigRational::from_integer(BigInt::from(v)))
            .find(|v| !p.substitute(d, v).is_zero())?;
        p = p.substitute(d, &pick);
        point.push((d, pick));
    }
    let value = p.as_constant()?;
    (!value.is_zero())
        .then_some(JacobianStatus::NonzeroWitnessed { point, value })
}
