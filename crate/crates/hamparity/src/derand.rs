//! Deterministic diagonal selection by the method of conditional
//! expectations.
//!
//! The expected number of candidates the general solver enumerates, over a
//! uniform random diagonal, is a sum over prefixes of solution counts of
//! linear systems in which the still-random diagonal entries are ordinary
//! unknowns. Fixing the diagonal one bit at a time and keeping the branch
//! with the smaller conditional expectation yields a diagonal whose actual
//! candidate count is at most the all-random expectation. Expectations are
//! compared as exact sums of powers of two; the shared denominator at each
//! level never needs to be materialized.

use crate::digraph::Digraph;
use crate::gf2::{BitMatrix, BitVector, LinearSystem};
use crate::general::{prefix_stream, PrefixState};
use crate::solver::SolverError;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// An exact nonnegative integer maintained as a multiset of powers of two:
/// `exponent_counts[d]` occurrences of `2^d`. Insertions are O(1); the
/// represented value is normalized (carried) only when two tallies are
/// compared.
#[derive(Clone, Debug, Default)]
pub struct DyadicTally {
    exponent_counts: BTreeMap<usize, u64>,
}

impl DyadicTally {
    pub fn new() -> Self {
        DyadicTally::default()
    }

    /// Builds the tally for `count · 2^exponent`.
    pub fn from_count_shifted(count: u64, exponent: usize) -> Self {
        let mut tally = DyadicTally::new();
        if count > 0 {
            tally.exponent_counts.insert(exponent, count);
        }
        tally
    }

    /// Adds `2^exponent`.
    pub fn record(&mut self, exponent: usize) {
        *self.exponent_counts.entry(exponent).or_insert(0) += 1;
    }

    pub fn merge(&mut self, other: &DyadicTally) {
        for (&d, &c) in &other.exponent_counts {
            *self.exponent_counts.entry(d).or_insert(0) += c;
        }
    }

    /// The tally representing twice this value.
    pub fn doubled(&self) -> DyadicTally {
        DyadicTally {
            exponent_counts: self
                .exponent_counts
                .iter()
                .map(|(&d, &c)| (d + 1, c))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.exponent_counts.values().all(|&c| c == 0)
    }

    /// Normalized little-endian binary representation: carrying preserves
    /// the represented value, so two tallies compare as integers.
    fn to_words(&self) -> Vec<u64> {
        let mut words: Vec<u64> = Vec::new();
        for (&d, &c) in &self.exponent_counts {
            let word = d / 64;
            let shift = d % 64;
            if words.len() < word + 2 {
                words.resize(word + 2, 0);
            }
            let lo = c << shift;
            let hi = if shift == 0 { 0 } else { c >> (64 - shift) };
            let carry;
            (words[word], carry) = words[word].overflowing_add(lo);
            let mut idx = word + 1;
            let mut add = hi as u128 + carry as u128;
            while add > 0 {
                if idx >= words.len() {
                    words.resize(idx + 1, 0);
                }
                let sum = words[idx] as u128 + add;
                words[idx] = sum as u64;
                add = sum >> 64;
                idx += 1;
            }
        }
        while words.last() == Some(&0) {
            words.pop();
        }
        words
    }
}

impl PartialEq for DyadicTally {
    fn eq(&self, other: &Self) -> bool {
        self.to_words() == other.to_words()
    }
}

impl Eq for DyadicTally {}

impl PartialOrd for DyadicTally {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DyadicTally {
    fn cmp(&self, other: &Self) -> Ordering {
        let a = self.to_words();
        let b = other.to_words();
        a.len().cmp(&b.len()).then_with(|| {
            for (x, y) in a.iter().rev().zip(b.iter().rev()) {
                match x.cmp(y) {
                    Ordering::Equal => continue,
                    ord => return ord,
                }
            }
            Ordering::Equal
        })
    }
}

impl fmt::Display for DyadicTally {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let words = self.to_words();
        if words.is_empty() {
            return f.write_str("0");
        }
        write!(f, "0x")?;
        for (i, w) in words.iter().rev().enumerate() {
            if i == 0 {
                write!(f, "{w:x}")?;
            } else {
                write!(f, "{w:016x}")?;
            }
        }
        Ok(())
    }
}

/// Null-space exponent of the prefix system with the first `fixed` diagonal
/// entries read from `g` and the rest treated as unknowns.
///
/// Variables are the `k` suffix coordinates plus one unknown per still-random
/// diagonal entry; unknowns that appear in no row still count as free
/// dimensions, so `2^d` is the exact solution count over the declared
/// variable set. Returns `None` when the system is inconsistent.
fn space_exponent_with_fixed(g: &Digraph, p: &PrefixState, fixed: usize) -> Option<usize> {
    let n = g.n();
    let k = p.k;
    let m = n - k;
    assert_eq!(p.prefix.len(), m, "prefix length must be n - k");
    assert!(fixed <= n);
    let adj = g.adjacency();

    let constrained: Vec<usize> = p.prefix.ones().collect();
    let vars = k + (n - fixed);
    let mut coeffs = BitMatrix::zeros(constrained.len(), vars);
    let mut rhs = BitVector::zeros(constrained.len());
    for (row, &i) in constrained.iter().enumerate() {
        for j in 0..k {
            if adj.get(i, m + j) {
                coeffs.set(row, j, true);
            }
        }
        let mut acc = true; // the constant 1
        for j in p.prefix.ones() {
            if j == i {
                // The diagonal entry of a constrained row: known when fixed,
                // otherwise an unknown on the left-hand side.
                if i < fixed {
                    acc ^= adj.get(i, i);
                } else {
                    coeffs.set(row, k + (i - fixed), true);
                }
            } else {
                acc ^= adj.get(i, j);
            }
        }
        rhs.set(row, acc);
    }
    LinearSystem::new(coeffs, rhs)
        .solve()
        .map(|space| space.dimension())
}

/// Conditional solution-space exponent for one prefix: diagonal entries for
/// vertices `1..l` are taken from `g_partial`, entry `l` is tentatively `b`,
/// and entries `l+1..=n` stay random (unknowns). `l` is 1-indexed.
pub fn conditional_space_exponent(
    g_partial: &Digraph,
    p: &PrefixState,
    l: usize,
    b: bool,
) -> Option<usize> {
    let n = g_partial.n();
    assert!((1..=n).contains(&l), "level {l} out of range");
    let mut diag = g_partial.diagonal();
    diag.set(l - 1, b);
    space_exponent_with_fixed(&g_partial.with_diagonal(&diag), p, l)
}

/// Sum over all prefixes of `2^d` with the first `fixed` diagonal entries
/// read from `g`. The implied denominator is `2^(n - fixed)`; callers
/// compare tallies at equal `fixed` or shift explicitly.
pub fn expectation_tally(g: &Digraph, fixed: usize) -> DyadicTally {
    expectation_pass(g, fixed, 1)
}

/// One full prefix pass, optionally sharded by `(k, family)` blocks.
/// Tally merging is plain addition, so the result is worker-independent.
fn expectation_pass(g: &Digraph, fixed: usize, workers: usize) -> DyadicTally {
    let n = g.n();
    if workers <= 1 {
        let mut tally = DyadicTally::new();
        for p in prefix_stream(n) {
            if let Some(d) = space_exponent_with_fixed(g, &p, fixed) {
                tally.record(d);
            }
        }
        return tally;
    }
    let blocks = crate::general::family_blocks(n);
    let next = std::sync::atomic::AtomicUsize::new(0);
    let mut total = DyadicTally::new();
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                let next = &next;
                let blocks = &blocks;
                scope.spawn(move || {
                    let mut tally = DyadicTally::new();
                    loop {
                        let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                        let Some(&(k, family)) = blocks.get(i) else {
                            break;
                        };
                        for p in crate::general::block_stream(n, k, family) {
                            if let Some(d) = space_exponent_with_fixed(g, &p, fixed) {
                                tally.record(d);
                            }
                        }
                    }
                    tally
                })
            })
            .collect();
        for handle in handles {
            total.merge(&handle.join().expect("tally worker panicked"));
        }
    });
    total
}

/// The all-random expectation numerator: candidate counts summed as
/// `2^d` over every prefix, denominator `2^n` implied.
pub fn initial_expectation_tally(g: &Digraph) -> DyadicTally {
    expectation_tally(g, 0)
}

/// One greedy level of the diagonal selection.
#[derive(Clone, Debug)]
pub struct DerandLevel {
    pub n0: DyadicTally,
    pub n1: DyadicTally,
    /// The bit fixed at this level (1 exactly when `n0 > n1`).
    pub chosen: bool,
}

/// Deterministic diagonal such that the general solver's candidate count is
/// at most the uniform-random expectation.
pub fn choose_diagonal(g: &Digraph) -> Result<BitVector, SolverError> {
    choose_diagonal_traced_with(g, 1).map(|(diagonal, _)| diagonal)
}

/// Like [`choose_diagonal`], with the per-level prefix passes sharded over
/// `workers` threads. The outer level loop stays sequential: each level
/// depends on the bits already fixed.
pub fn choose_diagonal_with(g: &Digraph, workers: usize) -> Result<BitVector, SolverError> {
    choose_diagonal_traced_with(g, workers).map(|(diagonal, _)| diagonal)
}

/// Like [`choose_diagonal`], also returning the per-level tallies for
/// auditing the greedy descent.
pub fn choose_diagonal_traced(g: &Digraph) -> Result<(BitVector, Vec<DerandLevel>), SolverError> {
    choose_diagonal_traced_with(g, 1)
}

pub fn choose_diagonal_traced_with(
    g: &Digraph,
    workers: usize,
) -> Result<(BitVector, Vec<DerandLevel>), SolverError> {
    let n = g.n();
    if n < 2 {
        return Err(SolverError::GraphTooSmall { n });
    }
    let mut diag = BitVector::zeros(n);
    let mut levels = Vec::with_capacity(n);
    for l in 1..=n {
        let branch = |b: bool| {
            let mut diag_b = diag.clone();
            diag_b.set(l - 1, b);
            expectation_pass(&g.with_diagonal(&diag_b), l, workers)
        };
        let n0 = branch(false);
        let n1 = branch(true);
        let chosen = n0 > n1;
        diag.set(l - 1, chosen);
        levels.push(DerandLevel { n0, n1, chosen });
    }
    Ok((diag, levels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::general::{candidate_space, parity_general, prefix_stream};
    use crate::oracle;
    use crate::solver::DiagonalChoice;

    fn check_tally_vs_u128(exponents: &[usize]) {
        let mut tally = DyadicTally::new();
        let mut exact = 0u128;
        for &d in exponents {
            tally.record(d);
            exact += 1 << d;
        }
        let mut other = DyadicTally::new();
        let mut other_exact = 0u128;
        for &d in exponents.iter().rev() {
            other.record(d.saturating_sub(1));
            other_exact += 1 << d.saturating_sub(1);
        }
        assert_eq!(tally.cmp(&other), exact.cmp(&other_exact));
        assert_eq!(tally == other, exact == other_exact);
    }

    #[test]
    fn tally_comparison_matches_integers() {
        check_tally_vs_u128(&[0, 0, 0, 0]);
        check_tally_vs_u128(&[5, 5]);
        check_tally_vs_u128(&[0, 1, 2, 3, 4, 5, 6, 7]);
        check_tally_vs_u128(&[64, 64, 1]);
        check_tally_vs_u128(&[100, 3, 3, 3]);

        // Carrying: four 2^1 equals one 2^3.
        let mut a = DyadicTally::new();
        for _ in 0..4 {
            a.record(1);
        }
        let mut b = DyadicTally::new();
        b.record(3);
        assert_eq!(a, b);
        assert_eq!(a.doubled(), DyadicTally::from_count_shifted(1, 4));
    }

    #[test]
    fn tally_randomized_against_u128() {
        use rand::Rng;
        let mut rng = crate::rng::seeded(11);
        for _ in 0..200 {
            let xs: Vec<usize> = (0..rng.gen_range(0..12)).map(|_| rng.gen_range(0..90)).collect();
            let ys: Vec<usize> = (0..rng.gen_range(0..12)).map(|_| rng.gen_range(0..90)).collect();
            let build = |zs: &[usize]| {
                let mut t = DyadicTally::new();
                let mut v = 0u128;
                for &d in zs {
                    t.record(d);
                    v += 1 << d;
                }
                (t, v)
            };
            let (ta, va) = build(&xs);
            let (tb, vb) = build(&ys);
            assert_eq!(ta.cmp(&tb), va.cmp(&vb), "{xs:?} vs {ys:?}");
            let mut merged = ta.clone();
            merged.merge(&tb);
            let (expected, _) = build(&xs.iter().chain(&ys).copied().collect::<Vec<_>>());
            assert_eq!(merged, expected);
        }
    }

    #[test]
    fn zero_weight_prefix_leaves_all_unknowns_free() {
        let g = Digraph::random(6, 0.5, 3);
        let p = prefix_stream(6).next().unwrap(); // the all-zero prefix, k = 0
        assert!(p.prefix.is_zero());
        for fixed in 0..=6 {
            assert_eq!(space_exponent_with_fixed(&g, &p, fixed), Some(6 - fixed));
        }
    }

    #[test]
    fn fully_fixed_level_matches_candidate_space() {
        for seed in 0..10u64 {
            let n = 5 + (seed as usize % 3);
            let g = Digraph::random(n, 0.5, 100 + seed);
            let r = crate::rng::random_bitvector(&mut crate::rng::seeded(seed), n);
            let g_r = g.with_diagonal(&r);
            for p in prefix_stream(n) {
                let direct = candidate_space(&g_r, &p).map(|s| s.dimension());
                let via_levels =
                    conditional_space_exponent(&g_r, &p, n, r.get(n - 1));
                assert_eq!(direct, via_levels, "n={n} seed={seed} prefix={}", p.prefix);
            }
        }
    }

    #[test]
    fn halving_identity_holds_exactly() {
        // Fixing the next diagonal bit splits every solution set in two:
        // the numerator tally at level l-1 equals the merged numerators of
        // both branches at level l.
        for seed in 0..6u64 {
            let n = 4 + (seed as usize % 3);
            let g = Digraph::random(n, 0.5, 50 + seed);
            let mut diag = BitVector::zeros(n);
            for l in 1..=n {
                let g_partial = g.with_diagonal(&diag);
                let before = expectation_tally(&g_partial, l - 1);
                let mut both = DyadicTally::new();
                for b in [false, true] {
                    for p in prefix_stream(n) {
                        if let Some(d) = conditional_space_exponent(&g_partial, &p, l, b) {
                            both.record(d);
                        }
                    }
                }
                assert_eq!(before, both, "n={n} seed={seed} l={l}");
                diag.set(l - 1, seed >> (l - 1) & 1 == 1);
            }
        }
    }

    #[test]
    fn worker_count_does_not_change_the_choice() {
        let g = Digraph::random(9, 0.5, 21);
        let sequential = choose_diagonal(&g).unwrap();
        for workers in [2, 4] {
            assert_eq!(choose_diagonal_with(&g, workers).unwrap(), sequential);
        }
    }

    #[test]
    fn edgeless_graph_gets_a_deterministic_diagonal() {
        let g = Digraph::empty(5);
        let (diag, levels) = choose_diagonal_traced(&g).unwrap();
        assert_eq!(choose_diagonal(&g).unwrap(), diag);
        assert!(diag.is_zero());
        assert_eq!(levels.len(), 5);
        let result = parity_general(&g, DiagonalChoice::Fixed(diag)).unwrap();
        assert!(!result.parity);
        assert_eq!(result.candidates_generated, 1);
    }

    #[test]
    fn chosen_diagonal_matches_reference_and_bounds_candidates() {
        for seed in 0..10u64 {
            let n = 4 + (seed as usize % 5);
            let g = Digraph::random(n, [0.3, 0.5, 0.7][seed as usize % 3], 900 + seed);
            let (diag, levels) = choose_diagonal_traced(&g).unwrap();
            let result = parity_general(&g, DiagonalChoice::Fixed(diag)).unwrap();
            assert_eq!(
                result.parity,
                oracle::ham_parity_heldkarp(&g).unwrap(),
                "n={n} seed={seed}"
            );

            // Greedy descent: chosen branch tally at most the other branch,
            // and the realized candidate count at most the expectation.
            let initial = initial_expectation_tally(&g);
            let mut previous = initial.clone();
            for (l, level) in levels.iter().enumerate() {
                let chosen = if level.chosen { &level.n1 } else { &level.n0 };
                let mut merged = level.n0.clone();
                merged.merge(&level.n1);
                assert_eq!(merged, previous, "martingale broken at level {}", l + 1);
                assert!(chosen.doubled() <= merged, "descent broken at level {}", l + 1);
                previous = chosen.clone();
            }
            let realized =
                DyadicTally::from_count_shifted(result.candidates_generated, n);
            assert!(
                realized <= initial,
                "n={n} seed={seed}: candidates exceed the expectation"
            );
        }
    }
}
