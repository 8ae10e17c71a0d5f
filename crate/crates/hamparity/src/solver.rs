//! Types shared by the two fast parity solvers.

use crate::gf2::BitVector;
use std::error::Error;
use std::fmt;

/// Which solver produced a [`ParityResult`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverKind {
    General,
    Bipartite,
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverKind::General => "general",
            SolverKind::Bipartite => "bipartite",
        })
    }
}

/// How the self-loop diagonal is picked.
#[derive(Clone, Debug)]
pub enum DiagonalChoice {
    /// Draw a uniform diagonal from the canonical generator.
    Seed(u64),
    /// Use this diagonal verbatim (length must equal `n`).
    Fixed(BitVector),
}

/// The output bit plus run metadata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityResult {
    /// Parity of the number of directed Hamiltonian cycles.
    pub parity: bool,
    pub solver: SolverKind,
    /// The self-loop diagonal the run used, in input vertex order.
    pub diagonal: BitVector,
    /// Linear systems set up and solved (prefixes, or half-assignments).
    pub prefixes_examined: u64,
    /// Vectors enumerated from consistent solution spaces.
    pub candidates_generated: u64,
    /// Candidates that passed the quadratic membership check.
    pub contributing_count: u64,
}

impl ParityResult {
    pub fn parity_bit(&self) -> u8 {
        self.parity as u8
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolverError {
    /// The parity solvers are defined for graphs on at least two vertices.
    GraphTooSmall { n: usize },
    /// The bipartite solver was handed a graph with an odd undirected cycle.
    NotBipartite,
}

impl fmt::Display for SolverError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolverError::GraphTooSmall { n } => {
                write!(f, "parity solvers need n >= 2, got n={n}")
            }
            SolverError::NotBipartite => {
                write!(f, "graph is not bipartite; use the general solver")
            }
        }
    }
}

impl Error for SolverError {}

/// Accumulated per-worker counters; merging is commutative, so sharded runs
/// are deterministic regardless of worker count.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Tallies {
    pub parity: bool,
    pub prefixes: u64,
    pub candidates: u64,
    pub contributing: u64,
}

impl Tallies {
    pub fn absorb(&mut self, other: Tallies) {
        self.parity ^= other.parity;
        self.prefixes += other.prefixes;
        self.candidates += other.candidates;
        self.contributing += other.contributing;
    }
}
