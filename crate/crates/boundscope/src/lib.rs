//! Upper bounds for minimizing a multivariate polynomial over a box, two
//! ways, with machinery to cross-validate one family against the other.
//!
//! The first family minimizes the f-average over sum-of-squares probability
//! densities of bounded degree; on a box, where all Lebesgue moments are in
//! closed form, each bound is the smallest generalized eigenvalue of an
//! explicit matrix pencil ([`lasserre`]). The second family takes the
//! expectation of f under the Boltzmann density e^(-f/t), the quantity a
//! simulated-annealing sampler estimates, along the temperature schedule
//! t = e * d * fhat_max / r ([`annealing`]). Truncated-exponential densities
//! connect the two: they are sums of squares, so their f-averages dominate
//! the eigenvalue bounds while converging to the Boltzmann expectation with
//! an explicit error term ([`taylor`]).
//!
//! Reference tables for four standard bivariate test functions ship with the
//! crate ([`testfns`]) and every cell is reproducible offline ([`cli`]).
//!
//! ## Examples
//!
//! Each major capability has a runnable example:
//!
//! - **`lasserre_bound`** - eigenvalue bounds in both bases, plus the
//!   optimal density
//! - **`annealing_bound`** - Boltzmann expectations and the temperature
//!   schedule
//! - **`taylor_chain`** - the inequality chain joining the two families
//! - **`reproduce_tables`** - recompute the bundled reference tables
//! - **`density_grid`** - emit plot-ready density surfaces
//! - **`custom_polynomial`** - parse and bound a hand-written objective
//!
//! ```bash
//! cargo run --example lasserre_bound
//! cargo run --example annealing_bound
//! cargo run --example taylor_chain
//! cargo run --example reproduce_tables
//! cargo run --example density_grid
//! cargo run --example custom_polynomial
//! ```
//!
//! The same functionality is scriptable through the `boundscope` binary
//! (verbs `bound`, `table`, `grid`, `verify`).
//!
//! ## A taste
//!
//! ```
//! use boundscope::lasserre::{lasserre_upper_bound, BasisKind};
//! use boundscope::annealing::boltzmann_expectation;
//! use boundscope::{parse_polynomial, BoxDomain};
//!
//! let f = parse_polynomial("x1^4 - x1^2 + x2^2", 2)?;
//! let k = BoxDomain::symmetric_unit(2);
//!
//! let eig = lasserre_upper_bound(&f, &k, 4, BasisKind::Orthonormal)?.value;
//! let boltz = boltzmann_expectation(&f, &k, 0.1)?;
//! assert!(eig >= -0.25 && boltz >= -0.25); // both upper-bound min f = -1/4
//! # Ok::<(), boundscope::Error>(())
//! ```

pub mod annealing;
pub mod cli;
pub mod error;
pub mod lasserre;
pub mod moments;
pub mod parser;
pub mod poly;
pub mod report;
pub mod taylor;
pub mod testfns;

pub use error::{Error, Result};
pub use moments::{BoxDomain, MonomialBasis};
pub use parser::parse_polynomial;
pub use poly::{Monomial, Polynomial};
pub use report::{BoundReport, Method};
