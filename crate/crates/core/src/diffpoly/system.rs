use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use super::parse::{identifiers, parse_at};
use super::{DerivativeVar, DiffPolynomial};
use crate::error::{Error, Position, Result};
use crate::order_matrix::{OrderMatrix, OrderValue};

/// A square system `u_1 = … = u_n = 0`.
///
/// Text form, one equation per line:
///
/// ```text
/// # comment
/// variables: x1, x2, x3      (optional; otherwise inferred)
/// u1: x1'' - x2'
/// u2: x2'' = x3
/// u3: x3' - x2 = 0
/// ```
///
/// `lhs = rhs` stands for `lhs - (rhs)`. The equation label is optional.
/// Without a `variables:` line the unknowns are all identifiers used in the
/// equations, in natural order (`x2` before `x10`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffSystem {
    names: Vec<String>,
    equation_names: Vec<String>,
    equations: Vec<DiffPolynomial>,
}

impl DiffSystem {
    pub fn new(names: Vec<String>, equations: Vec<DiffPolynomial>) -> Result<Self> {
        let equation_names = (1..=equations.len()).map(|i| format!("u{i}")).collect();
        Self::with_equation_names(names, equation_names, equations)
    }

    pub fn with_equation_names(
        names: Vec<String>,
        equation_names: Vec<String>,
        equations: Vec<DiffPolynomial>,
    ) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::Degenerate("system has no unknowns".into()));
        }
        if equations.len() != names.len() {
            return Err(Error::DimensionMismatch {
                expected: names.len(),
                found: equations.len(),
            });
        }
        if equation_names.len() != equations.len() {
            return Err(Error::DimensionMismatch {
                expected: equations.len(),
                found: equation_names.len(),
            });
        }
        let distinct: BTreeSet<&String> = names.iter().collect();
        if distinct.len() != names.len() {
            return Err(Error::InvalidMatrix("duplicate variable name".into()));
        }
        for p in &equations {
            if let Some(d) = p.variables().into_iter().find(|d| d.var >= names.len()) {
                return Err(Error::DimensionMismatch {
                    expected: names.len(),
                    found: d.var + 1,
                });
            }
        }
        Ok(DiffSystem {
            names,
            equation_names,
            equations,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut declared: Option<Vec<String>> = None;
        let mut lines = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1;
            let content = raw.split('#').next().unwrap_or("");
            if content.trim().is_empty() {
                continue;
            }
            let (label, body, offset) = match content.find(':') {
                Some(c) => (
                    Some(content[..c].trim().to_string()),
                    &content[c + 1..],
                    content[..=c].chars().count(),
                ),
                None => (None, content, 0),
            };
            if label.as_deref() == Some("variables") {
                if declared.is_some() || !lines.is_empty() {
                    return Err(Error::Syntax {
                        position: Position { line: line_no, column: 1 },
                        message: "`variables:` must be the first declaration".into(),
                    });
                }
                let names: Vec<String> = body
                    .split([',', ' ', '\t'])
                    .filter(|s| !s.is_empty())
                    .map(String::from)
                    .collect();
                for name in &names {
                    if !is_identifier(name) {
                        return Err(Error::Syntax {
                            position: Position { line: line_no, column: 1 },
                            message: format!("`{name}` is not a variable name"),
                        });
                    }
                }
                declared = Some(names);
                continue;
            }
            if let Some(l) = &label {
                if !is_identifier(l) {
                    return Err(Error::Syntax {
                        position: Position { line: line_no, column: 1 },
                        message: format!("`{l}` is not an equation label"),
                    });
                }
            }
            lines.push((line_no, label, body.to_string(), offset));
        }
        if lines.is_empty() {
            return Err(Error::Degenerate("system has no equations".into()));
        }
        let names = match declared {
            Some(names) => names,
            None => {
                let mut set = BTreeSet::new();
                for (_, _, body, _) in &lines {
                    for side in body.split('=') {
                        set.extend(identifiers(side));
                    }
                }
                let mut names: Vec<String> = set.into_iter().collect();
                names.sort_by(|a, b| natural_cmp(a, b));
                names
            }
        };
        let mut equations = Vec::with_capacity(lines.len());
        let mut equation_names = Vec::with_capacity(lines.len());
        for (k, (line_no, label, body, offset)) in lines.into_iter().enumerate() {
            let p = match body.find('=') {
                Some(eq) => {
                    let lhs = parse_at(&body[..eq], &names, line_no, offset)?;
                    let rhs_offset = offset + body[..=eq].chars().count();
                    let rhs = parse_at(&body[eq + 1..], &names, line_no, rhs_offset)?;
                    &lhs - &rhs
                }
                None => parse_at(&body, &names, line_no, offset)?,
            };
            equations.push(p);
            equation_names.push(label.unwrap_or_else(|| format!("u{}", k + 1)));
        }
        Self::with_equation_names(names, equation_names, equations)
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn equation_names(&self) -> &[String] {
        &self.equation_names
    }

    pub fn equations(&self) -> &[DiffPolynomial] {
        &self.equations
    }

    pub fn equation(&self, i: usize) -> &DiffPolynomial {
        &self.equations[i]
    }

    /// Index of an unknown given by name or by 1-based index.
    pub fn variable_index(&self, key: &str) -> Option<usize> {
        self.names.iter().position(|v| v == key).or_else(|| {
            key.parse::<usize>()
                .ok()
                .filter(|&k| (1..=self.n()).contains(&k))
                .map(|k| k - 1)
        })
    }

    /// `a_{i,j} = ord_{x_j} u_i`, `−∞` when `x_j` is absent from `u_i`.
    pub fn order_matrix(&self) -> OrderMatrix {
        OrderMatrix::from_fn(self.n(), |i, j| self.equations[i].order_in(j))
            .expect("system is square")
    }

    pub fn display_var(&self, d: DerivativeVar) -> String {
        d.display_with(&self.names)
    }
}

/// `a_{i,j} = ord_{x_j} u_i` for every equation and unknown.
pub fn order_matrix_of(sys: &DiffSystem) -> OrderMatrix {
    sys.order_matrix()
}

impl FromStr for DiffSystem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DiffSystem::parse(s)
    }
}

impl fmt::Display for DiffSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "variables: {}", self.names.join(", "))?;
        for (name, p) in self.equation_names.iter().zip(&self.equations) {
            writeln!(f, "{name}: {}", p.display_with(&self.names))?;
        }
        Ok(())
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Orders digit runs numerically: `x2 < x10`.
fn natural_cmp(a: &str, b: &str) -> Ordering {
    fn chunks(s: &str) -> Vec<(bool, &str)> {
        let mut out = Vec::new();
        let mut start = 0;
        let bytes = s.as_bytes();
        for k in 1..=bytes.len() {
            if k == bytes.len() || bytes[k].is_ascii_digit() != bytes[start].is_ascii_digit() {
                out.push((bytes[start].is_ascii_digit(), &s[start..k]));
                start = k;
            }
        }
        out
    }
    let (ca, cb) = (chunks(a), chunks(b));
    for ((da, sa), (db, sb)) in ca.iter().zip(&cb) {
        let ord = if *da && *db {
            let (ta, tb) = (sa.trim_start_matches('0'), sb.trim_start_matches('0'));
            ta.len().cmp(&tb.len()).then_with(|| ta.cmp(tb))
        } else {
            sa.cmp(sb)
        };
        if ord != Ordering::Equal {
            return ord;
        }
    }
    ca.len().cmp(&cb.len()).then_with(|| a.cmp(b))
}

/// Euler–Lagrange equations of the functional `∫ U dt`:
/// `e_i = Σ_k (−1)^k D^k ∂U/∂x_i^(k)`.
pub fn euler_lagrange(lagrangian: &DiffPolynomial, names: Vec<String>) -> Result<DiffSystem> {
    let n = names.len();
    let mut equations = Vec::with_capacity(n);
    for i in 0..n {
        let mut e = DiffPolynomial::zero();
        if let OrderValue::Finite(top) = lagrangian.order_in(i) {
            for k in 0..=top {
                let term = lagrangian
                    .partial_derivative(DerivativeVar::new(i, k))
                    .derivative_n(k);
                e = if k % 2 == 0 { &e + &term } else { &e - &term };
            }
        }
        equations.push(e);
    }
    let equation_names = names.iter().map(|v| format!("el_{v}")).collect();
    DiffSystem::with_equation_names(names, equation_names, equations)
}
