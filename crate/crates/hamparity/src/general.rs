//! General-graph parity solver.
//!
//! Every vector in `{0,1}^n` has exactly one `k` in `0..=n/2` for which its
//! length `n-k` prefix either has weight `k`, or has weight `k` on the first
//! `n-k-1` coordinates with the last prefix coordinate equal to 1. The two
//! prefix families therefore cover the cube with `Fibonacci(n+2)` prefixes
//! in total. For each prefix the quadratic membership system restricted to
//! the prefix rows is linear in the `k` suffix variables; enumerating each
//! affine solution space and filtering with the full quadratic check lists
//! every contributing subset exactly once. Contributions are folded on the
//! fly, so no subset list is ever stored.

use crate::contribution::{f_parity, quadratic_residual};
use crate::digraph::{Digraph, VertexSet};
use crate::gf2::{AffineSolutionSpace, BitMatrix, BitVector, LinearSystem};
use crate::rng;
use crate::solver::{DiagonalChoice, ParityResult, SolverError, SolverKind, Tallies};
use std::sync::atomic::{AtomicUsize, Ordering};

/// The two prefix families for a given `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PrefixFamily {
    /// Prefixes of length `n - k` with weight exactly `k`.
    WeightK,
    /// Prefixes of length `n - k` whose first `n - k - 1` coordinates have
    /// weight `k` and whose last coordinate is 1.
    WeightKLastOne,
}

/// One element of the prefix enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrefixState {
    pub k: usize,
    /// Fixed values of coordinates `0..n-k`.
    pub prefix: BitVector,
    pub family: PrefixFamily,
}

/// Fibonacci numbers with `F(1) = F(2) = 1`. The prefix stream for `n`
/// emits exactly `fibonacci(n + 2)` states.
pub fn fibonacci(i: usize) -> u64 {
    assert!(i <= 92, "fibonacci({i}) overflows u64");
    let (mut a, mut b) = (0u64, 1u64);
    for _ in 0..i {
        (a, b) = (b, a + b);
    }
    a
}

/// Nonempty `(k, family)` blocks in stream order.
pub(crate) fn family_blocks(n: usize) -> Vec<(usize, PrefixFamily)> {
    let mut blocks = Vec::new();
    for k in 0..=n / 2 {
        blocks.push((k, PrefixFamily::WeightK));
        if k < n - k {
            blocks.push((k, PrefixFamily::WeightKLastOne));
        }
    }
    blocks
}

/// Free-position universe for a block: positions that carry the weight-`k`
/// combination (the forced trailing 1 is outside it).
fn block_universe(n: usize, k: usize, family: PrefixFamily) -> usize {
    match family {
        PrefixFamily::WeightK => n - k,
        PrefixFamily::WeightKLastOne => n - k - 1,
    }
}

/// Steps `positions` to the lexicographically next ascending `k`-combination
/// of `0..universe`. Returns false once exhausted.
fn next_combination(positions: &mut [usize], universe: usize) -> bool {
    let k = positions.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if positions[i] < universe - (k - i) {
            positions[i] += 1;
            for j in i + 1..k {
                positions[j] = positions[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn build_prefix(n: usize, k: usize, family: PrefixFamily, positions: &[usize]) -> BitVector {
    let m = n - k;
    let mut prefix = BitVector::zeros(m);
    for &p in positions {
        prefix.set(p, true);
    }
    if family == PrefixFamily::WeightKLastOne {
        prefix.set(m - 1, true);
    }
    prefix
}

/// Streams every prefix of both families for every `k`, exactly once, in
/// `(k, family, lexicographic)` order.
pub fn prefix_stream(n: usize) -> PrefixStream {
    assert!(n >= 1, "prefix stream needs n >= 1");
    PrefixStream {
        n,
        blocks: family_blocks(n),
        block: 0,
        positions: None,
    }
}

/// Stream restricted to a single `(k, family)` block; shard support.
pub(crate) fn block_stream(n: usize, k: usize, family: PrefixFamily) -> PrefixStream {
    PrefixStream {
        n,
        blocks: vec![(k, family)],
        block: 0,
        positions: None,
    }
}

pub struct PrefixStream {
    n: usize,
    blocks: Vec<(usize, PrefixFamily)>,
    block: usize,
    positions: Option<Vec<usize>>,
}

impl Iterator for PrefixStream {
    type Item = PrefixState;

    fn next(&mut self) -> Option<PrefixState> {
        loop {
            let &(k, family) = self.blocks.get(self.block)?;
            let universe = block_universe(self.n, k, family);
            match &mut self.positions {
                None => {
                    if k > universe {
                        self.block += 1;
                        continue;
                    }
                    self.positions = Some((0..k).collect());
                }
                Some(positions) => {
                    if !next_combination(positions, universe) {
                        self.positions = None;
                        self.block += 1;
                        continue;
                    }
                }
            }
            let positions = self.positions.as_ref().unwrap();
            return Some(PrefixState {
                k,
                prefix: build_prefix(self.n, k, family, positions),
                family,
            });
        }
    }
}

/// The linear system a prefix induces on the `k` suffix variables.
///
/// For each prefix coordinate `i` with value 1 the membership row reads
/// `Σ_{j > n-k} a_ij x_j = 1 + Σ_{j <= n-k} a_ij prefix_j` (the right-hand
/// sum includes the diagonal entry at `i`). Returns the affine solution set
/// over the suffix variables, or `None` when no suffix extends this prefix.
pub fn candidate_space(g_r: &Digraph, p: &PrefixState) -> Option<AffineSolutionSpace> {
    let n = g_r.n();
    let k = p.k;
    let m = n - k;
    assert_eq!(p.prefix.len(), m, "prefix length must be n - k");
    let adj = g_r.adjacency();

    let constrained: Vec<usize> = p.prefix.ones().collect();
    let mut coeffs = BitMatrix::zeros(constrained.len(), k);
    let mut rhs = BitVector::zeros(constrained.len());
    for (row, &i) in constrained.iter().enumerate() {
        for j in 0..k {
            if adj.get(i, m + j) {
                coeffs.set(row, j, true);
            }
        }
        let mut acc = false;
        for j in p.prefix.ones() {
            acc ^= adj.get(i, j);
        }
        rhs.set(row, !acc);
    }
    LinearSystem::new(coeffs, rhs).solve()
}

fn walk_block(
    g_r: &Digraph,
    k: usize,
    family: PrefixFamily,
    tallies: &mut Tallies,
    visit: &mut dyn FnMut(BitVector) -> bool,
) {
    let n = g_r.n();
    let universe = block_universe(n, k, family);
    if k > universe {
        return;
    }
    let mut positions: Vec<usize> = (0..k).collect();
    loop {
        let state = PrefixState {
            k,
            prefix: build_prefix(n, k, family, &positions),
            family,
        };
        tallies.prefixes += 1;
        if let Some(space) = candidate_space(g_r, &state) {
            for suffix in space.enumerate() {
                tallies.candidates += 1;
                let x = state.prefix.concat(&suffix);
                if quadratic_residual(g_r, &x) {
                    tallies.contributing += 1;
                    tallies.parity ^= visit(x);
                }
            }
        }
        if !next_combination(&mut positions, universe) {
            break;
        }
    }
}

fn parity_visit(g_r: &Digraph) -> impl Fn(BitVector) -> bool + '_ {
    |x| f_parity(g_r, &VertexSet::from_indicator(x))
}

fn scan_sharded(g_r: &Digraph, workers: usize) -> Tallies {
    let blocks = family_blocks(g_r.n());
    if workers <= 1 {
        let mut tallies = Tallies::default();
        let visit = parity_visit(g_r);
        for &(k, family) in &blocks {
            walk_block(g_r, k, family, &mut tallies, &mut |x| visit(x));
        }
        return tallies;
    }
    let next = AtomicUsize::new(0);
    let mut total = Tallies::default();
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                let next = &next;
                let blocks = &blocks;
                scope.spawn(move || {
                    let mut tallies = Tallies::default();
                    let visit = parity_visit(g_r);
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        let Some(&(k, family)) = blocks.get(i) else {
                            break;
                        };
                        walk_block(g_r, k, family, &mut tallies, &mut |x| visit(x));
                    }
                    tallies
                })
            })
            .collect();
        for handle in handles {
            total.absorb(handle.join().expect("solver worker panicked"));
        }
    });
    total
}

/// Parity of the number of directed Hamiltonian cycles of `g`.
pub fn parity_general(g: &Digraph, choice: DiagonalChoice) -> Result<ParityResult, SolverError> {
    parity_general_with(g, choice, 1)
}

/// Like [`parity_general`], sharding the prefix blocks over `workers`
/// threads. Counters and parity merge commutatively, so the result is
/// identical for every worker count.
pub fn parity_general_with(
    g: &Digraph,
    choice: DiagonalChoice,
    workers: usize,
) -> Result<ParityResult, SolverError> {
    let n = g.n();
    if n < 2 {
        return Err(SolverError::GraphTooSmall { n });
    }
    let diagonal = match choice {
        DiagonalChoice::Seed(seed) => rng::random_bitvector(&mut rng::seeded(seed), n),
        DiagonalChoice::Fixed(r) => {
            assert_eq!(r.len(), n, "fixed diagonal length must equal n");
            r
        }
    };
    let g_r = g.with_diagonal(&diagonal);
    let tallies = scan_sharded(&g_r, workers.max(1));
    Ok(ParityResult {
        parity: tallies.parity,
        solver: SolverKind::General,
        diagonal,
        prefixes_examined: tallies.prefixes,
        candidates_generated: tallies.candidates,
        contributing_count: tallies.contributing,
    })
}

/// Lists every solution of the quadratic membership system of `g_r` (its
/// diagonal taken as-is) via the prefix enumeration. Each solution appears
/// exactly once. Exponential in the worst case; verification support.
pub fn contributing_subsets(g_r: &Digraph) -> Vec<BitVector> {
    let mut out = Vec::new();
    let mut tallies = Tallies::default();
    for &(k, family) in &family_blocks(g_r.n()) {
        walk_block(g_r, k, family, &mut tallies, &mut |x| {
            out.push(x);
            false
        });
    }
    out
}
