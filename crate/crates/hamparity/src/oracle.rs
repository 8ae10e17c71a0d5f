//! Independent reference implementations used by tests and the `verify`
//! command: factorial-time and subset-DP Hamiltonian counting, the direct
//! partition-sum evaluator for a general modulus, the direct
//! contribution-sum evaluator, cycle-cover parity, and the empirical
//! solution-count experiment for random diagonals.
//!
//! Nothing here shares code with the fast solvers; agreement between the two
//! routes is the correctness argument.

use crate::digraph::Digraph;
use crate::gf2::BitVector;
use crate::rng;
use num_bigint::BigInt;
use std::error::Error;
use std::fmt;

/// Ranges the exponential-time references are willing to run at.
const BRUTE_MAX_N: usize = 10;
const HELD_KARP_MAX_N: usize = 24;
const FACTORED_MAX_N: usize = 9;
const MEAN_COUNT_MAX_N: usize = 14;
const PARTITION_SUM_MAX_N: usize = 9;
const PARTITION_SUM_MAX_STATES: u128 = 1 << 27;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleError {
    SizeLimit {
        what: &'static str,
        n: usize,
        max: usize,
    },
    ModulusTooSmall {
        modulus: u64,
    },
    TooManyStates {
        states: u128,
    },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::SizeLimit { what, n, max } => {
                write!(f, "{what} supports 2 <= n <= {max}, got n={n}")
            }
            OracleError::ModulusTooSmall { modulus } => {
                write!(f, "modulus must be at least 2, got {modulus}")
            }
            OracleError::TooManyStates { states } => {
                write!(f, "partition enumeration would visit {states} states")
            }
        }
    }
}

impl Error for OracleError {}

fn rows_as_masks(g: &Digraph) -> Vec<u64> {
    let n = g.n();
    assert!(n <= 64);
    (0..n)
        .map(|u| {
            let mut mask = 0u64;
            for v in g.adjacency().row(u).ones() {
                mask |= 1 << v;
            }
            mask
        })
        .collect()
}

/// Exact number of directed Hamiltonian cycles, reduced mod `modulus`.
///
/// Cycles are counted once each (not per rotation): vertex 1 is the anchor
/// and the remaining vertices are permuted. Self-loops are ignored.
pub fn ham_count_brute(g: &Digraph, modulus: u64) -> Result<u64, OracleError> {
    if modulus < 2 {
        return Err(OracleError::ModulusTooSmall { modulus });
    }
    let n = g.n();
    if !(2..=BRUTE_MAX_N).contains(&n) {
        return Err(OracleError::SizeLimit {
            what: "brute-force counting",
            n,
            max: BRUTE_MAX_N,
        });
    }
    let rows = rows_as_masks(g);
    let mut count = 0u64;
    let full = (1u64 << n) - 1;

    fn extend(rows: &[u64], full: u64, last: usize, visited: u64, count: &mut u64) {
        if visited == full {
            if rows[last] & 1 == 1 {
                *count += 1;
            }
            return;
        }
        let mut nexts = rows[last] & !visited & full;
        while nexts != 0 {
            let v = nexts.trailing_zeros() as usize;
            nexts &= nexts - 1;
            extend(rows, full, v, visited | 1 << v, count);
        }
    }

    extend(&rows, full, 0, 1, &mut count);
    Ok(count % modulus)
}

/// Parity of the number of directed Hamiltonian cycles by subset dynamic
/// programming anchored at vertex 1, all arithmetic mod 2.
pub fn ham_parity_heldkarp(g: &Digraph) -> Result<bool, OracleError> {
    let n = g.n();
    if !(2..=HELD_KARP_MAX_N).contains(&n) {
        return Err(OracleError::SizeLimit {
            what: "subset-DP parity",
            n,
            max: HELD_KARP_MAX_N,
        });
    }
    // dp[mask] bit v: parity of the number of paths that start at the anchor
    // (vertex 1), visit exactly the non-anchor vertices in `mask`, and end
    // at non-anchor vertex v+2. Masks index vertices 2..=n as bits 0..n-1.
    let k = n - 1;
    let mut in_mask = vec![0u32; k];
    for (v, mask) in in_mask.iter_mut().enumerate() {
        for u in 0..k {
            if u != v && g.has_edge(u + 2, v + 2) {
                *mask |= 1 << u;
            }
        }
    }
    let mut dp = vec![0u32; 1 << k];
    for v in 0..k {
        if g.has_edge(1, v + 2) {
            dp[1 << v] = 1 << v;
        }
    }
    for mask in 1u32..1 << k {
        if mask.count_ones() < 2 {
            continue;
        }
        let mut word = 0u32;
        let mut bits = mask;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let prev = dp[(mask ^ (1 << v)) as usize];
            if (prev & in_mask[v]).count_ones() % 2 == 1 {
                word |= 1 << v;
            }
        }
        dp[mask as usize] = word;
    }
    let mut close = 0u32;
    for v in 0..k {
        if g.has_edge(v + 2, 1) {
            close |= 1 << v;
        }
    }
    let full = (1u32 << k) - 1;
    Ok((dp[full as usize] & close).count_ones() % 2 == 1)
}

/// Direct evaluation of the partition-sum identity for the Hamiltonian
/// cycle count mod `modulus`.
///
/// Sums, over every assignment of the vertices to one special part `Z` and
/// `modulus` labeled parts, the signed product of degrees: vertices in `Z`
/// count their edges into the complement of `Z`, every other vertex counts
/// its edges inside its own part, and the sign is the parity of `|Z|`. The
/// total is accumulated exactly, asserted divisible by the modulus, and the
/// quotient is returned mod `modulus`.
pub fn theorem3_direct(g: &Digraph, modulus: u64) -> Result<u64, OracleError> {
    if modulus < 2 {
        return Err(OracleError::ModulusTooSmall { modulus });
    }
    let n = g.n();
    if !(2..=PARTITION_SUM_MAX_N).contains(&n) {
        return Err(OracleError::SizeLimit {
            what: "partition-sum evaluation",
            n,
            max: PARTITION_SUM_MAX_N,
        });
    }
    let parts = modulus as usize + 1;
    let states = (parts as u128).pow(n as u32);
    if states > PARTITION_SUM_MAX_STATES {
        return Err(OracleError::TooManyStates { states });
    }

    let rows = rows_as_masks(g);
    let full = (1u64 << n) - 1;

    // Odometer over labelings: labels[v] = 0 places v in Z, label p >= 1 in
    // part p. Part masks are maintained incrementally.
    let mut labels = vec![0usize; n];
    let mut masks = vec![0u64; parts];
    masks[0] = full;

    let mut total = BigInt::from(0);
    let mut block = 0i64;
    let mut block_terms = 0u32;

    loop {
        let z = masks[0];
        let term = {
            let mut prod = 1u64;
            let mut v = 0;
            while v < n && prod != 0 {
                let target = if labels[v] == 0 {
                    full & !z
                } else {
                    masks[labels[v]]
                };
                prod *= (rows[v] & target).count_ones() as u64;
                v += 1;
            }
            prod
        };
        if term != 0 {
            if z.count_ones() % 2 == 1 {
                block -= term as i64;
            } else {
                block += term as i64;
            }
            block_terms += 1;
            if block_terms == 1 << 20 {
                total += block;
                block = 0;
                block_terms = 0;
            }
        }

        // Advance the odometer.
        let mut v = 0;
        loop {
            if v == n {
                total += block;
                let k = BigInt::from(modulus);
                assert!(
                    (&total % &k) == BigInt::from(0),
                    "partition sum {total} not divisible by {modulus}; this is a bug"
                );
                let quotient = total / &k;
                let residue = ((quotient % &k) + &k) % &k;
                return Ok(u64::try_from(residue).expect("residue fits in u64"));
            }
            masks[labels[v]] &= !(1 << v);
            labels[v] += 1;
            if labels[v] < parts {
                masks[labels[v]] |= 1 << v;
                break;
            }
            labels[v] = 0;
            masks[0] |= 1 << v;
            v += 1;
        }
    }
}

/// Parity of the single contribution value for one subset, by exhaustive
/// enumeration: over all subsets `Y` of the complement of `X` whose minimum
/// exceeds `min X` (the empty set qualifies when `X` is nonempty), the term
/// is odd when every `y` in `Y` has odd degree into `Y` and every remaining
/// vertex has odd degree into `X + Y`.
pub fn f_parity_brute(g_r: &Digraph, x_mask: u64) -> bool {
    let n = g_r.n();
    assert!(n <= 24, "contribution brute force supports n <= 24");
    let rows = rows_as_masks(g_r);
    let full = (1u64 << n) - 1;
    debug_assert_eq!(x_mask & !full, 0);

    if x_mask == 0 {
        return false;
    }
    let min_x = x_mask.trailing_zeros();
    let allowed = full & !x_mask & !((1u64 << (min_x + 1)) - 1);

    let mut parity = false;
    // Enumerate y over all submasks of `allowed`, including the empty set.
    let mut y = allowed;
    loop {
        let z = full & !x_mask & !y;
        let mut odd = true;
        let mut rest = y;
        while odd && rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            odd = (rows[v] & y).count_ones() % 2 == 1;
        }
        let mut rest = z;
        while odd && rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            odd = (rows[v] & (x_mask | y)).count_ones() % 2 == 1;
        }
        if odd {
            parity = !parity;
        }
        if y == 0 {
            break;
        }
        y = (y - 1) & allowed;
    }
    parity
}

/// Parity of the Hamiltonian cycle count by exhaustively summing the
/// contribution of every subset whose members all have odd degree into it.
/// Sits between the partition-sum evaluator and the fast solvers: same
/// factored shape as the solvers, no linear algebra.
pub fn factored_parity_direct(g_r: &Digraph) -> Result<bool, OracleError> {
    let n = g_r.n();
    if !(2..=FACTORED_MAX_N).contains(&n) {
        return Err(OracleError::SizeLimit {
            what: "factored-sum evaluation",
            n,
            max: FACTORED_MAX_N,
        });
    }
    let rows = rows_as_masks(g_r);
    let mut parity = false;
    for x in 0u64..1 << n {
        let mut contributing = true;
        let mut rest = x;
        while contributing && rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            contributing = (rows[v] & x).count_ones() % 2 == 1;
        }
        if contributing && f_parity_brute(g_r, x) {
            parity = !parity;
        }
    }
    Ok(parity)
}

/// Parity of the number of directed cycle covers (self-loops allowed as
/// 1-cycles): the GF(2) determinant of the adjacency matrix.
pub fn cycle_cover_parity(g: &Digraph) -> bool {
    g.adjacency().determinant()
}

/// All solutions of the quadratic membership system `x ∘ Ax = x` for the
/// given graph, found by scanning every vector. Exponential; test support.
pub fn quadratic_solutions_exhaustive(g_r: &Digraph) -> Vec<BitVector> {
    let n = g_r.n();
    assert!(n <= 24, "exhaustive quadratic scan supports n <= 24");
    let rows = rows_as_masks(g_r);
    let mut out = Vec::new();
    for x in 0u64..1 << n {
        if solves_quadratic(&rows, x) {
            out.push(BitVector::from_bools(
                &(0..n).map(|i| x >> i & 1 == 1).collect::<Vec<_>>(),
            ));
        }
    }
    out
}

fn solves_quadratic(rows: &[u64], x: u64) -> bool {
    let mut rest = x;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        if (rows[v] & x).count_ones().is_multiple_of(2) {
            return false;
        }
    }
    true
}

/// Empirical mean, over `trials` independent uniform diagonals, of the
/// number of solutions to the quadratic membership system.
pub fn mean_solution_count(g: &Digraph, trials: u32, seed: u64) -> Result<f64, OracleError> {
    let n = g.n();
    if !(2..=MEAN_COUNT_MAX_N).contains(&n) {
        return Err(OracleError::SizeLimit {
            what: "solution-count sampling",
            n,
            max: MEAN_COUNT_MAX_N,
        });
    }
    assert!(trials > 0, "need at least one trial");
    let mut rng = rng::seeded(seed);
    let mut total = 0u64;
    for _ in 0..trials {
        let r = rng::random_bitvector(&mut rng, n);
        let rows = rows_as_masks(&g.with_diagonal(&r));
        total += (0u64..1 << n).filter(|&x| solves_quadratic(&rows, x)).count() as u64;
    }
    Ok(total as f64 / trials as f64)
}
