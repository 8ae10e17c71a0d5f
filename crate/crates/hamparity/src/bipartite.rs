//! Bipartite-graph parity solver.
//!
//! On a balanced bipartite graph with a randomized diagonal, fixing the
//! first-half variables of the quadratic membership system leaves a linear
//! system in the second half: first-half rows with a 1 become plain linear
//! constraints on the cross-block variables, and each second-half row
//! collapses to `(c_i + r_i + 1)·x_i = 0` where `c_i` is the known cross
//! parity, because squaring is the identity over GF(2). Sweeping all `2^(n/2)`
//! half-assignments therefore lists every contributing subset exactly once,
//! in expected total size `1.5^n`.

use crate::contribution::{f_parity, quadratic_residual};
use crate::digraph::{Bipartition, Digraph, VertexSet};
use crate::gf2::{BitMatrix, BitVector, LinearSystem};
use crate::rng;
use crate::solver::{ParityResult, SolverError, SolverKind, Tallies};
use std::sync::atomic::{AtomicUsize, Ordering};

/// Relabeling that puts one class on positions `0..n/2` and the other on
/// `n/2..n`, both in ascending original order.
struct Relabeling {
    /// `to_new[orig] = new` over 0-indexed positions.
    to_new: Vec<usize>,
    /// `to_old[new] = orig`.
    to_old: Vec<usize>,
}

impl Relabeling {
    fn new(v1: &VertexSet, v2: &VertexSet) -> Self {
        let n = v1.universe();
        let mut to_old: Vec<usize> = v1.members().map(|v| v - 1).collect();
        to_old.extend(v2.members().map(|v| v - 1));
        let mut to_new = vec![0; n];
        for (new, &old) in to_old.iter().enumerate() {
            to_new[old] = new;
        }
        Relabeling { to_new, to_old }
    }

    fn apply(&self, g: &Digraph) -> Digraph {
        let n = g.n();
        let mut edges = Vec::new();
        for u in 0..n {
            for v in g.adjacency().row(u).ones() {
                edges.push((self.to_new[u] + 1, self.to_new[v] + 1));
            }
        }
        Digraph::from_edges(n, &edges)
    }

    fn vector_to_old(&self, v: &BitVector) -> BitVector {
        let mut out = BitVector::zeros(v.len());
        for new in v.ones() {
            out.set(self.to_old[new], true);
        }
        out
    }
}

/// Builds and solves the second-half system for one first-half assignment.
/// `assignment` bit `j` fixes relabeled coordinate `j`; returns the full
/// membership vectors (relabeled coordinates) surviving the quadratic check.
fn sweep_assignment(
    relabeled: &Digraph,
    diagonal: &BitVector,
    assignment: u64,
    tallies: &mut Tallies,
    visit: &mut dyn FnMut(BitVector) -> bool,
) {
    let n = relabeled.n();
    let h = n / 2;
    let adj = relabeled.adjacency();

    let mut first_half = BitVector::zeros(n);
    for j in 0..h {
        if assignment >> j & 1 == 1 {
            first_half.set(j, true);
        }
    }

    let rows = first_half.weight() + h;
    let mut coeffs = BitMatrix::zeros(rows, h);
    let mut rhs = BitVector::zeros(rows);
    let mut row = 0;
    for i in first_half.ones() {
        for j in 0..h {
            if adj.get(i, h + j) {
                coeffs.set(row, j, true);
            }
        }
        rhs.set(row, !diagonal.get(i));
        row += 1;
    }
    for i in h..n {
        let cross = adj.row_dot(i, &first_half);
        coeffs.set(row, i - h, !(cross ^ diagonal.get(i)));
        row += 1;
    }

    tallies.prefixes += 1;
    let Some(space) = LinearSystem::new(coeffs, rhs).solve() else {
        return;
    };
    for second_half in space.enumerate() {
        tallies.candidates += 1;
        let mut x = first_half.clone();
        for j in second_half.ones() {
            x.set(h + j, true);
        }
        if quadratic_residual(relabeled, &x) {
            tallies.contributing += 1;
            tallies.parity ^= visit(x);
        }
    }
}

fn sweep_range(
    relabeled: &Digraph,
    diagonal: &BitVector,
    range: std::ops::Range<u64>,
    visit: &mut dyn FnMut(BitVector) -> bool,
) -> Tallies {
    let mut tallies = Tallies::default();
    for assignment in range {
        sweep_assignment(relabeled, diagonal, assignment, &mut tallies, visit);
    }
    tallies
}

struct Prepared {
    relabeling: Relabeling,
    relabeled: Digraph,
    diagonal: BitVector,
}

fn prepare(g: &Digraph, seed: u64) -> Result<Option<Prepared>, SolverError> {
    let n = g.n();
    if n < 2 {
        return Err(SolverError::GraphTooSmall { n });
    }
    let (v1, v2) = match g.bipartition() {
        Bipartition::NotBipartite => return Err(SolverError::NotBipartite),
        Bipartition::Unbalanced => return Ok(None),
        Bipartition::Balanced { v1, v2 } => (v1, v2),
    };
    let relabeling = Relabeling::new(&v1, &v2);
    let diagonal = rng::random_bitvector(&mut rng::seeded(seed), n);
    let relabeled = relabeling.apply(g).with_diagonal(&diagonal);
    Ok(Some(Prepared {
        relabeling,
        relabeled,
        diagonal,
    }))
}

fn unbalanced_result(n: usize) -> ParityResult {
    // No equal split, hence no Hamiltonian cycle: parity 0 with no work done.
    ParityResult {
        parity: false,
        solver: SolverKind::Bipartite,
        diagonal: BitVector::zeros(n),
        prefixes_examined: 0,
        candidates_generated: 0,
        contributing_count: 0,
    }
}

/// Parity of the number of directed Hamiltonian cycles of a bipartite `g`.
///
/// An unbalanced (but 2-colorable) graph short-circuits to parity 0. A graph
/// with an odd undirected cycle is an input error for this solver.
pub fn parity_bipartite(g: &Digraph, seed: u64) -> Result<ParityResult, SolverError> {
    parity_bipartite_with(g, seed, 1)
}

/// Like [`parity_bipartite`], sharding the half-assignment sweep over
/// `workers` threads; the result is identical for every worker count.
pub fn parity_bipartite_with(
    g: &Digraph,
    seed: u64,
    workers: usize,
) -> Result<ParityResult, SolverError> {
    let Some(prepared) = prepare(g, seed)? else {
        return Ok(unbalanced_result(g.n()));
    };
    let relabeled = &prepared.relabeled;
    let h = g.n() / 2;
    let total: u64 = 1 << h;
    let workers = workers.max(1).min(total as usize).max(1);

    let tallies = if workers <= 1 {
        let mut visit = |x: BitVector| f_parity(relabeled, &VertexSet::from_indicator(x));
        sweep_range(relabeled, &prepared.diagonal, 0..total, &mut visit)
    } else {
        let chunk = total.div_ceil(workers as u64);
        let next = AtomicUsize::new(0);
        let mut merged = Tallies::default();
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|_| {
                    let next = &next;
                    let diagonal = &prepared.diagonal;
                    scope.spawn(move || {
                        let mut tallies = Tallies::default();
                        let mut visit =
                            |x: BitVector| f_parity(relabeled, &VertexSet::from_indicator(x));
                        loop {
                            let i = next.fetch_add(1, Ordering::Relaxed) as u64;
                            let lo = i * chunk;
                            if lo >= total {
                                break;
                            }
                            let hi = (lo + chunk).min(total);
                            tallies.absorb(sweep_range(relabeled, diagonal, lo..hi, &mut visit));
                        }
                        tallies
                    })
                })
                .collect();
            for handle in handles {
                merged.absorb(handle.join().expect("solver worker panicked"));
            }
        });
        merged
    };

    Ok(ParityResult {
        parity: tallies.parity,
        solver: SolverKind::Bipartite,
        diagonal: prepared.relabeling.vector_to_old(&prepared.diagonal),
        prefixes_examined: tallies.prefixes,
        candidates_generated: tallies.candidates,
        contributing_count: tallies.contributing,
    })
}

/// Lists the contributing subsets the sweep emits, mapped back to original
/// vertex coordinates, together with the effective diagonal in original
/// coordinates. Verification support.
pub fn contributing_subsets_bipartite(
    g: &Digraph,
    seed: u64,
) -> Result<(BitVector, Vec<BitVector>), SolverError> {
    let Some(prepared) = prepare(g, seed)? else {
        return Ok((BitVector::zeros(g.n()), Vec::new()));
    };
    let mut out = Vec::new();
    let total: u64 = 1 << (g.n() / 2);
    sweep_range(
        &prepared.relabeled,
        &prepared.diagonal,
        0..total,
        &mut |x| {
            out.push(prepared.relabeling.vector_to_old(&x));
            false
        },
    );
    Ok((prepared.relabeling.vector_to_old(&prepared.diagonal), out))
}
