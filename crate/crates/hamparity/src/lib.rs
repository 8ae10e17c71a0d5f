//! Parity of the number of directed Hamiltonian cycles.
//!
//! The count of directed Hamiltonian cycles is reduced, over GF(2), to a sum
//! of per-subset contributions: a subset contributes only when every member
//! has odd out-degree into the subset, and each contribution is the solution
//! count of a small linear system. Randomizing the adjacency diagonal
//! (self-loops never affect Hamiltonicity) makes the contributing family
//! small in expectation, and two enumeration strategies walk it:
//!
//! - [`bipartite::parity_bipartite`] fixes one half of a balanced bipartite
//!   graph and solves for the other half, in expected time `1.5^n · poly(n)`.
//! - [`general::parity_general`] covers all of `{0,1}^n` by Fibonacci-many
//!   fixed-weight prefixes and solves for each suffix, within a polynomial
//!   factor of `Fibonacci(n+2)` candidates in expectation.
//! - [`derand::choose_diagonal`] replaces the random diagonal by a
//!   deterministic one chosen by conditional expectations, so the general
//!   solver's candidate count never exceeds the random-diagonal expectation.
//!
//! The [`oracle`] module holds independent references (factorial-time
//! counting, subset DP, direct partition sums) that the test suite holds the
//! fast solvers against.

pub mod bipartite;
pub mod contribution;
pub mod derand;
pub mod digraph;
pub mod general;
pub mod gf2;
pub mod oracle;
pub mod rng;
pub mod solver;

pub use bipartite::parity_bipartite;
pub use derand::choose_diagonal;
pub use digraph::{Bipartition, Digraph, ParseError, VertexSet};
pub use general::{parity_general, prefix_stream, PrefixFamily, PrefixState};
pub use gf2::{AffineSolutionSpace, BitMatrix, BitVector, LinearSystem};
pub use solver::{DiagonalChoice, ParityResult, SolverError, SolverKind};
