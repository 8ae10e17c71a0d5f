//! Acceptance suite: one test per release criterion, each printing a
//! pass/fail line (run with `--nocapture` to see them all).
//!
//! The fast solvers are held against independent references on hundreds of
//! random instances, the enumeration combinatorics are checked exactly, and
//! the statistical claims behind the expected running times are measured.

use hamparity::derand::{self, DyadicTally};
use hamparity::digraph::Digraph;
use hamparity::general::{self, fibonacci};
use hamparity::gf2::BitVector;
use hamparity::oracle;
use hamparity::{bipartite, contribution, rng, DiagonalChoice, VertexSet};
use std::collections::HashSet;
use std::time::Instant;

fn pass(name: &str, detail: &str) {
    println!("acceptance {name}: PASS ({detail})");
}

const DENSITIES: [f64; 3] = [0.2, 0.5, 0.8];

#[test]
fn acceptance_01_general_solver_matches_oracles() {
    let start = Instant::now();
    let mut checked_brute = 0;
    for i in 0..200u64 {
        let n = 3 + (i as usize % 9); // 3..=11
        let p = DENSITIES[(i as usize / 9) % 3];
        let g = Digraph::random(n, p, 0xA1 + i);
        let expected = oracle::ham_parity_heldkarp(&g).unwrap();
        let got = general::parity_general(&g, DiagonalChoice::Seed(i)).unwrap();
        assert_eq!(got.parity, expected, "instance {i}: n={n} p={p}");
        if n <= 9 {
            assert_eq!(
                oracle::ham_count_brute(&g, 2).unwrap() == 1,
                expected,
                "instance {i}: brute disagrees"
            );
            checked_brute += 1;
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 120, "budget exceeded: {elapsed:?}");
    pass(
        "01 general-solver oracle equivalence",
        &format!("200 instances, {checked_brute} brute-checked, 0 mismatches, {elapsed:.2?}"),
    );
}

#[test]
fn acceptance_02_bipartite_solver_matches_oracle() {
    let start = Instant::now();
    for i in 0..100u64 {
        let n = 4 + 2 * (i as usize % 5); // 4,6,8,10,12
        let p = DENSITIES[(i as usize / 5) % 3];
        let g = Digraph::random_bipartite(n, p, 0xB2 + i);
        let expected = oracle::ham_parity_heldkarp(&g).unwrap();
        let got = bipartite::parity_bipartite(&g, i).unwrap();
        assert_eq!(got.parity, expected, "instance {i}: n={n} p={p}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "budget exceeded: {elapsed:?}");
    pass(
        "02 bipartite-solver oracle equivalence",
        &format!("100 instances, 0 mismatches, {elapsed:.2?}"),
    );
}

#[test]
fn acceptance_03_partition_sum_for_all_small_moduli() {
    let start = Instant::now();
    for i in 0..50u64 {
        let n = 3 + (i as usize % 6); // 3..=8
        let p = DENSITIES[(i as usize / 6) % 3];
        let g = Digraph::random(n, p, 0xC3 + i);
        for modulus in 2..=5 {
            // Divisibility of the pre-division sum is asserted inside the
            // evaluator; a violation panics the test.
            assert_eq!(
                oracle::theorem3_direct(&g, modulus).unwrap(),
                oracle::ham_count_brute(&g, modulus).unwrap(),
                "instance {i}: n={n} K={modulus}"
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 300, "budget exceeded: {elapsed:?}");
    pass(
        "03 partition-sum identity for K in 2..=5",
        &format!("50 instances x 4 moduli, divisibility everywhere, {elapsed:.2?}"),
    );
}

#[test]
fn acceptance_04_factored_sum_chain_agrees() {
    let start = Instant::now();
    for i in 0..100u64 {
        let n = 3 + (i as usize % 6); // 3..=8
        let p = DENSITIES[(i as usize / 6) % 3];
        let g = Digraph::random(n, p, 0xD4 + i);
        let r = rng::random_bitvector(&mut rng::substream(0xD4, i), n);
        let g_r = g.with_diagonal(&r);
        let factored = oracle::factored_parity_direct(&g_r).unwrap();
        assert_eq!(
            factored,
            oracle::theorem3_direct(&g_r, 2).unwrap() == 1,
            "instance {i}: factored vs partition sum"
        );
        assert_eq!(
            factored,
            oracle::ham_parity_heldkarp(&g_r).unwrap(),
            "instance {i}: factored vs subset DP"
        );
    }
    let elapsed = start.elapsed();
    pass(
        "04 factored-sum chain",
        &format!("100 (graph, diagonal) pairs, exact agreement, {elapsed:.2?}"),
    );
}

#[test]
fn acceptance_05_prefix_combinatorics_are_exact() {
    let start = Instant::now();
    for n in 1..=30usize {
        assert_eq!(
            general::prefix_stream(n).count() as u64,
            fibonacci(n + 2),
            "prefix count at n={n}"
        );
    }
    fn binomial(n: usize, k: usize) -> u128 {
        if k > n {
            return 0;
        }
        let mut out = 1u128;
        for i in 0..k {
            out = out * (n - i) as u128 / (i + 1) as u128;
        }
        out
    }
    for n in 1..=20usize {
        let mut total = 0u128;
        for k in 0..=n / 2 {
            let last_one = if n - k >= 1 { binomial(n - k - 1, k) } else { 0 };
            total += (binomial(n - k, k) + last_one) << k;
        }
        assert_eq!(total, 1u128 << n, "cover identity at n={n}");
    }
    let elapsed = start.elapsed();
    pass(
        "05 Fibonacci prefix counts and cover identity",
        &format!("counts exact to n=30, identity exact to n=20, {elapsed:.2?}"),
    );
}

#[test]
fn acceptance_06_random_diagonal_expectation() {
    let start = Instant::now();
    let g = Digraph::complete(10);
    let mean = oracle::mean_solution_count(&g, 1000, 0xE6).unwrap();
    let expected = 1.5f64.powi(10);
    let tolerance = 0.10 * expected;
    assert!(
        (mean - expected).abs() <= tolerance,
        "mean {mean} outside {expected} +/- {tolerance}"
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "budget exceeded: {elapsed:?}");
    pass(
        "06 random-diagonal solution-count expectation",
        &format!("mean {mean:.2} vs 1.5^10 = {expected:.2}, {elapsed:.2?}"),
    );
}

#[test]
fn acceptance_07_candidates_per_prefix_bound() {
    let start = Instant::now();
    let mut candidates = 0u64;
    let mut prefixes = 0u64;
    for i in 0..50u64 {
        let g = Digraph::random(14, 0.5, 0xF7 + i);
        let result = general::parity_general(&g, DiagonalChoice::Seed(i)).unwrap();
        assert_eq!(
            result.parity,
            oracle::ham_parity_heldkarp(&g).unwrap(),
            "instance {i}"
        );
        candidates += result.candidates_generated;
        prefixes += result.prefixes_examined;
    }
    let mean = candidates as f64 / prefixes as f64;
    assert!(mean <= 1.05, "mean candidates per prefix {mean} > 1.05");
    let elapsed = start.elapsed();
    pass(
        "07 expected candidates per prefix",
        &format!("mean {mean:.4} <= 1.05 over 50 instances at n=14, {elapsed:.2?}"),
    );
}

#[test]
fn acceptance_08_derandomized_diagonal() {
    let start = Instant::now();
    for i in 0..50u64 {
        let n = 4 + (i as usize % 9); // 4..=12
        let p = DENSITIES[(i as usize / 9) % 3];
        let g = Digraph::random(n, p, 0x98 + i);
        let (diagonal, levels) = derand::choose_diagonal_traced(&g).unwrap();
        let result =
            general::parity_general(&g, DiagonalChoice::Fixed(diagonal)).unwrap();
        assert_eq!(
            result.parity,
            oracle::ham_parity_heldkarp(&g).unwrap(),
            "instance {i}: parity under chosen diagonal"
        );

        // Realized candidates never exceed the all-random expectation, and
        // the greedy tally never increases from level to level.
        let initial = derand::initial_expectation_tally(&g);
        let realized = DyadicTally::from_count_shifted(result.candidates_generated, n);
        assert!(realized <= initial, "instance {i}: expectation bound");
        let mut previous = initial;
        for (l, level) in levels.iter().enumerate() {
            let chosen = if level.chosen { &level.n1 } else { &level.n0 };
            let mut merged = level.n0.clone();
            merged.merge(&level.n1);
            assert_eq!(merged, previous, "instance {i}: halving at level {}", l + 1);
            assert!(
                chosen.doubled() <= merged,
                "instance {i}: descent at level {}",
                l + 1
            );
            previous = chosen.clone();
        }
    }
    let elapsed = start.elapsed();
    pass(
        "08 conditional-expectation derandomization",
        &format!("50 instances to n=12, bound and descent exact, {elapsed:.2?}"),
    );
}

#[test]
fn acceptance_09_unique_cover_and_exact_listing() {
    let start = Instant::now();
    for n in 1..=12usize {
        let emitted: HashSet<(usize, BitVector)> = general::prefix_stream(n)
            .map(|p| (p.k, p.prefix))
            .collect();
        assert_eq!(emitted.len() as u64, fibonacci(n + 2), "stream size at n={n}");
        for x in 0u64..1 << n {
            let vec =
                BitVector::from_bools(&(0..n).map(|i| x >> i & 1 == 1).collect::<Vec<_>>());
            let mut matches = 0;
            for k in 0..=n / 2 {
                let m = n - k;
                let mut prefix = BitVector::zeros(m);
                for i in 0..m {
                    prefix.set(i, vec.get(i));
                }
                if emitted.contains(&(k, prefix)) {
                    matches += 1;
                }
            }
            assert_eq!(matches, 1, "vector {x:b} at n={n} extends {matches} prefixes");
        }
    }

    for (n, seed) in [(6, 1u64), (9, 2), (12, 3)] {
        let g = Digraph::random(n, 0.5, 0x99 + seed);
        let r = rng::random_bitvector(&mut rng::seeded(seed), n);
        let g_r = g.with_diagonal(&r);
        let listed = general::contributing_subsets(&g_r);
        let listed_set: HashSet<BitVector> = listed.iter().cloned().collect();
        assert_eq!(listed.len(), listed_set.len(), "n={n}: duplicate emission");
        let expected: HashSet<BitVector> = oracle::quadratic_solutions_exhaustive(&g_r)
            .into_iter()
            .collect();
        assert_eq!(listed_set, expected, "n={n}: listing mismatch");

        // Every listed subset is a genuine membership-system solution, and
        // folding its contribution reproduces the reference parity.
        let mut parity = false;
        for x in listed {
            assert!(contribution::quadratic_residual(&g_r, &x));
            parity ^= contribution::f_parity(&g_r, &VertexSet::from_indicator(x));
        }
        assert_eq!(parity, oracle::ham_parity_heldkarp(&g).unwrap(), "n={n}");
    }
    let elapsed = start.elapsed();
    pass(
        "09 unique prefix cover and exact listing",
        &format!("cover exact to n=12, listings equal exhaustive sets, {elapsed:.2?}"),
    );
}

#[test]
fn acceptance_10_scale_smoke_test() {
    let start = Instant::now();
    let g = Digraph::random(30, 0.5, 0xAA);
    let result = general::parity_general(&g, DiagonalChoice::Seed(30)).unwrap();
    assert_eq!(result.prefixes_examined, 2_178_309);
    assert_eq!(result.prefixes_examined, fibonacci(32));
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() <= 600, "budget exceeded: {elapsed:?}");
    pass(
        "10 scale smoke test",
        &format!(
            "n=30: parity={}, {} candidates, {} contributing, {elapsed:.2?}",
            result.parity_bit(),
            result.candidates_generated,
            result.contributing_count
        ),
    );
}
