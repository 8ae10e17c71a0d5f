//! Per-subset contribution values over GF(2).
//!
//! A subset `X` contributes to the Hamiltonian-cycle parity the number,
//! mod 2, of subsets `Y` disjoint from `X` with `min X < min Y` such that
//! every vertex of `Y` has odd degree into `Y` and every vertex outside
//! `X ∪ Y` has odd degree into `X ∪ Y`. That count is the number of
//! solutions of a linear system over the indicator variables of `Y`, so it
//! is odd exactly when the system is consistent with a unique solution.

use crate::digraph::{Digraph, VertexSet};
use crate::gf2::{BitMatrix, BitVector, LinearSystem};

/// The linear system whose GF(2) solutions are the contributing partners of
/// one subject subset.
#[derive(Clone, Debug)]
pub struct ContributionSystem {
    pub system: LinearSystem,
    pub subject: VertexSet,
    /// `min X`, with the empty set mapped to the sentinel `n + 1`.
    pub min_x: usize,
}

/// Smallest member of `x` (1-indexed); `n + 1` for the empty set, so the
/// ordering constraint below pins every variable.
pub fn min_index(x: &VertexSet) -> usize {
    x.min_vertex().unwrap_or(x.universe() + 1)
}

/// Builds the contribution system for subject `x` against the
/// diagonal-fixed graph `g_r`.
///
/// Three row groups, all over variables `y_1..y_n`:
/// - membership rows `y_i = 0` for `i` in `x`,
/// - ordering rows `y_i = 0` for `i <= min x` (redundant overlaps with the
///   membership rows are kept; elimination removes them),
/// - degree rows for `i` outside `x`: `d_i(x)·y_i + Σ_j a_ij y_j = 1 + d_i(x)`.
pub fn build_f_system(g_r: &Digraph, x: &VertexSet) -> ContributionSystem {
    let n = g_r.n();
    assert_eq!(x.universe(), n, "vertex set size mismatch");
    let min_x = min_index(x);

    let membership = x.cardinality();
    let ordering = min_x.min(n);
    let degree = n - membership;
    let mut coeffs = BitMatrix::zeros(membership + ordering + degree, n);
    let mut rhs = BitVector::zeros(coeffs.rows());

    let mut row = 0;
    for v in x.members() {
        coeffs.set(row, v - 1, true);
        row += 1;
    }
    for i in 0..ordering {
        coeffs.set(row, i, true);
        row += 1;
    }
    for v in 1..=n {
        if x.contains(v) {
            continue;
        }
        let d_odd = g_r.degree_into(v, x) % 2 == 1;
        let mut r = g_r.adjacency().row(v - 1);
        if d_odd {
            let flipped = !r.get(v - 1);
            r.set(v - 1, flipped);
        }
        coeffs.set_row(row, &r);
        rhs.set(row, !d_odd);
        row += 1;
    }
    debug_assert_eq!(row, coeffs.rows());

    ContributionSystem {
        system: LinearSystem::new(coeffs, rhs),
        subject: x.clone(),
        min_x,
    }
}

/// Parity of the contribution of `x`: 1 exactly when the contribution
/// system has a unique solution. An inconsistent system or any free
/// dimension (an even solution count) gives 0.
pub fn f_parity(g_r: &Digraph, x: &VertexSet) -> bool {
    match build_f_system(g_r, x).system.solve() {
        Some(space) => space.dimension() == 0,
        None => false,
    }
}

/// Membership check for the quadratic system `x ∘ Ax = x`: every coordinate
/// with `x_i = 1` must see an odd overlap between row `i` and `x`.
pub fn quadratic_residual(g_r: &Digraph, x: &BitVector) -> bool {
    assert_eq!(x.len(), g_r.n(), "vector length must equal n");
    let adj = g_r.adjacency();
    x.ones().all(|i| adj.row_dot(i, x))
}
