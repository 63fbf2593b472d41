//! Exact structural analysis of square systems of ordinary differential
//! equations.
//!
//! The crate computes, for a system `u_1 = … = u_n = 0` in unknowns
//! `x_1, …, x_n`:
//!
//! - the order matrix `A = (ord_{x_j} u_i)` over `ℕ ∪ {−∞}` ([`order_matrix`]);
//! - its minimal canon `ℓ`, the offsets `α`, `β` and the Jacobi number
//!   `J = max_σ Σ a_{i,σ(i)}` in `O(n³)` ([`canon`]);
//! - the differentiation orders needed for a resolvent representation
//!   ([`resolvent`]);
//! - the truncated Jacobian, shortest-reduction plans and Jacobi orderings
//!   over exact differential polynomials ([`diffpoly`]);
//! - competing order bounds and the determinant degree of linear
//!   constant-coefficient systems ([`bounds`]).
//!
//! Every combinatorial routine has a brute-force counterpart usable as an
//! oracle on small inputs.
//!
//! ```
//! use jacobi::{canon::minimal_canon, order_matrix::{Finite, OrderMatrix}};
//!
//! let a: OrderMatrix = "2 1 - ; - 2 0 ; - 0 1".parse().unwrap();
//! let c = minimal_canon(&a).unwrap();
//! assert_eq!(c.jacobi_number, Finite(5));
//! assert_eq!(c.beta, vec![2, 2, 1]);
//! ```

pub mod bounds;
pub mod canon;
pub mod cli;
pub mod diffpoly;
pub mod error;
pub mod fixtures;
mod matching;
pub mod order_matrix;
pub mod report;
pub mod resolvent;

pub use error::{Error, Result};
