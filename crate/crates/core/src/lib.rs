//! Exact verification engine for WP-Bailey pairs and the q-series
//! transformations they generate.
//!
//! Both sides of each identity are evaluated as truncated formal power series
//! in `p` (with `q = p^2`) over exact Gaussian-rational coefficients, under
//! randomized admissible parameter substitutions, and certified equal
//! coefficient-by-coefficient to a chosen order.
//!
//! Module map:
//! - [`exactnum`]: arbitrary-precision rational and Gaussian-rational arithmetic
//! - [`series`]: monomials and the truncated-series ring
//! - [`qkernel`]: q-Pochhammer symbols and basic hypergeometric evaluators
//! - [`wpbailey`]: WP-Bailey pairs, the defining relation, constructions,
//!   and the Bailey-transform machinery
//! - [`identities`]: the identity registry, parameter sampler, and verifier
//! - [`cli`]: command-line front end and report emission

pub mod cli;
pub mod error;
pub mod exactnum;
pub mod identities;
pub mod qkernel;
pub mod series;
pub mod wpbailey;
