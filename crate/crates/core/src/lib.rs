//! Exact inclusion-exclusion polynomials
//!
//! For pairwise coprime `q_1 < ... < q_k` with product `m`, the polynomial `Q_rho` is
//!
//! ```text
//!            prod_{|S| even} (1 - x^(m / q_S))
//! Q_rho(x) = ---------------------------------,   q_S = prod_{i in S} q_i
//!            prod_{|S| odd}  (1 - x^(m / q_S))
//! ```
//!
//! which is the cyclotomic polynomial `Phi_m` when every `q_j` is prime.
//!
//! - [`tuple`] and [`factors`] hold the input tuple and its signed divisor system.
//! - [`poly`] expands `Q_rho` with in-place truncated series arithmetic.
//! - [`oracle`] is an independent schoolbook/long-division reference.
//! - [`construction`] builds the families `q_j = (4j - 2) N k! + 1` and the
//!   congruence lower bound on their heights.
//! - [`analysis`] computes normalized heights, the limit constant and small searches.

pub mod analysis;
pub mod construction;
pub mod error;
pub mod factors;
pub mod oracle;
pub mod poly;
pub mod real;
pub mod tuple;

pub use error::{Error, ErrorClass, Result};
pub use factors::{factor_system, Factor, FactorSystem, Sign};
pub use poly::{expand, Arithmetic, ExpandOptions, IEPolynomial};
pub use tuple::{degree_of, validate_tuple, CoprimeTuple};
