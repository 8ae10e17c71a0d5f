//! Command-line front end: parity computation with solver selection,
//! instance generation, cross-verification campaigns, and benchmarking.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 usage or parse error.

use clap::{Parser, Subcommand, ValueEnum};
use hamparity::derand;
use hamparity::digraph::{Bipartition, Digraph};
use hamparity::general::parity_general_with;
use hamparity::oracle;
use hamparity::solver::{DiagonalChoice, ParityResult};
use hamparity::{bipartite, rng};
use rand::Rng;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "hamparity",
    version,
    about = "Parity of the number of directed Hamiltonian cycles",
    long_about = "Computes the parity of the number of directed Hamiltonian cycles of a \
                  digraph. The fast solvers enumerate the subsets whose members all have odd \
                  out-degree into the subset and fold per-subset contributions over GF(2); \
                  reference solvers (subset DP, brute force, direct partition sums) back the \
                  verify command. Set HAMPARITY_THREADS to cap solver workers."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the parity (or the count mod K) of an edge-list instance.
    Parity {
        /// Input file in edge-list format ("n m" header, then "u v" lines).
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = SolverArg::Auto)]
        solver: SolverArg,
        /// Seed for the random self-loop diagonal.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Pick the diagonal by conditional expectations instead of randomly
        /// (general solver only; auto resolves to general).
        #[arg(long)]
        derandomize: bool,
        /// Modulus for the brute/theorem3 solvers; 2 reports a parity.
        #[arg(short = 'K', long = "modulus", default_value_t = 2)]
        modulus: u64,
    },
    /// Write a random instance in edge-list format.
    Gen {
        /// Output file path.
        out: PathBuf,
        #[arg(short, long)]
        n: usize,
        /// Edge probability in [0, 1].
        #[arg(short, long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Only place edges between the halves 1..=n/2 and n/2+1..=n.
        #[arg(long)]
        bipartite: bool,
    },
    /// Cross-check the fast solvers against the reference oracles on random
    /// instances. Exits 1 on any mismatch.
    Verify {
        #[arg(long, default_value_t = 3)]
        n_min: usize,
        #[arg(long, default_value_t = 11)]
        n_max: usize,
        /// Random instances per (n, density) cell.
        #[arg(long, default_value_t = 20)]
        trials: u32,
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.2, 0.5, 0.8])]
        densities: Vec<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Time a solver over a range of sizes and write a CSV.
    Bench {
        #[arg(long)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long, default_value_t = 1)]
        step: usize,
        #[arg(long, value_enum, default_value_t = BenchSolverArg::General)]
        solver: BenchSolverArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolverArg {
    Auto,
    General,
    Bipartite,
    Heldkarp,
    Brute,
    Theorem3,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BenchSolverArg {
    General,
    Bipartite,
    Heldkarp,
}

const EXIT_MISMATCH: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn fail(msg: impl Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

/// Worker cap: HAMPARITY_THREADS when set, otherwise the machine parallelism.
fn workers() -> usize {
    match std::env::var("HAMPARITY_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(w) => w.max(1),
            Err(_) => {
                eprintln!("warning: ignoring unparsable HAMPARITY_THREADS={v:?}");
                1
            }
        },
        Err(_) => std::thread::available_parallelism().map_or(1, |p| p.get()),
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Parity {
            input,
            solver,
            seed,
            derandomize,
            modulus,
        } => cmd_parity(&input, solver, seed, derandomize, modulus),
        Command::Gen {
            out,
            n,
            p,
            seed,
            bipartite,
        } => cmd_gen(&out, n, p, seed, bipartite),
        Command::Verify {
            n_min,
            n_max,
            trials,
            densities,
            seed,
        } => cmd_verify(n_min, n_max, trials, &densities, seed),
        Command::Bench {
            n_min,
            n_max,
            step,
            solver,
            seed,
            out,
        } => cmd_bench(n_min, n_max, step, solver, seed, &out),
    }
}

fn read_instance(path: &Path) -> Result<Digraph, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    Digraph::parse_edge_list(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn print_solver_report(result: &ParityResult, seed: Option<u64>, derandomized: bool) {
    println!("parity={}", result.parity_bit());
    println!("solver={}", result.solver);
    if derandomized {
        println!("derandomized=true");
    }
    if let Some(seed) = seed {
        println!("seed={seed}");
    }
    println!("diagonal={}", result.diagonal);
    println!("prefixes_examined={}", result.prefixes_examined);
    println!("candidates_generated={}", result.candidates_generated);
    println!("contributing_count={}", result.contributing_count);
}

fn cmd_parity(
    input: &Path,
    solver: SolverArg,
    seed: u64,
    derandomize: bool,
    modulus: u64,
) -> ExitCode {
    if modulus != 2 && !matches!(solver, SolverArg::Brute | SolverArg::Theorem3) {
        return fail("--modulus other than 2 requires --solver brute or theorem3");
    }
    if derandomize && !matches!(solver, SolverArg::Auto | SolverArg::General) {
        return fail("--derandomize applies to the general solver only");
    }
    let g = match read_instance(input) {
        Ok(g) => g,
        Err(e) => return fail(e),
    };
    if g.n() < 2 {
        return fail(format!("parity is defined for n >= 2, got n={}", g.n()));
    }

    let solver = match solver {
        SolverArg::Auto if derandomize => SolverArg::General,
        SolverArg::Auto => match g.bipartition() {
            Bipartition::Balanced { .. } => SolverArg::Bipartite,
            _ => SolverArg::General,
        },
        other => other,
    };

    let start = Instant::now();
    match solver {
        SolverArg::Auto => unreachable!("auto resolved above"),
        SolverArg::General => {
            let choice = if derandomize {
                match derand::choose_diagonal_with(&g, workers()) {
                    Ok(diagonal) => DiagonalChoice::Fixed(diagonal),
                    Err(e) => return fail(e),
                }
            } else {
                DiagonalChoice::Seed(seed)
            };
            let elapsed_choice = start.elapsed();
            match parity_general_with(&g, choice, workers()) {
                Ok(result) => {
                    let seed = (!derandomize).then_some(seed);
                    print_solver_report(&result, seed, derandomize);
                    if derandomize {
                        println!("diagonal_ms={}", elapsed_choice.as_millis());
                    }
                }
                Err(e) => return fail(e),
            }
        }
        SolverArg::Bipartite => match bipartite::parity_bipartite_with(&g, seed, workers()) {
            Ok(result) => print_solver_report(&result, Some(seed), false),
            Err(e) => return fail(e),
        },
        SolverArg::Heldkarp => match oracle::ham_parity_heldkarp(&g) {
            Ok(parity) => {
                println!("parity={}", parity as u8);
                println!("solver=heldkarp");
            }
            Err(e) => return fail(e),
        },
        SolverArg::Brute | SolverArg::Theorem3 => {
            let (name, outcome) = match solver {
                SolverArg::Brute => ("brute", oracle::ham_count_brute(&g, modulus)),
                _ => ("theorem3", oracle::theorem3_direct(&g, modulus)),
            };
            match outcome {
                Ok(residue) => {
                    if modulus == 2 {
                        println!("parity={residue}");
                    } else {
                        println!("count_mod_K={residue}");
                    }
                    println!("solver={name}");
                    println!("modulus={modulus}");
                }
                Err(e) => return fail(e),
            }
        }
    }
    println!("wall_ms={}", start.elapsed().as_millis());
    ExitCode::SUCCESS
}

fn cmd_gen(out: &Path, n: usize, p: f64, seed: u64, bipartite: bool) -> ExitCode {
    if n < 2 {
        return fail("generation needs n >= 2");
    }
    if !(0.0..=1.0).contains(&p) {
        return fail("edge probability must lie in [0, 1]");
    }
    if bipartite && !n.is_multiple_of(2) {
        return fail("--bipartite needs an even n");
    }
    let g = if bipartite {
        Digraph::random_bipartite(n, p, seed)
    } else {
        Digraph::random(n, p, seed)
    };
    if let Err(e) = std::fs::write(out, g.write_edge_list()) {
        return fail(format!("cannot write {}: {e}", out.display()));
    }
    println!("wrote {} (n={} m={})", out.display(), g.n(), g.edge_count());
    ExitCode::SUCCESS
}

fn cmd_verify(n_min: usize, n_max: usize, trials: u32, densities: &[f64], seed: u64) -> ExitCode {
    if n_min < 2 || n_max < n_min {
        return fail("need 2 <= n-min <= n-max");
    }
    if n_max > 20 {
        return fail("verify is bounded by the reference oracles; use n-max <= 20");
    }
    if densities.iter().any(|d| !(0.0..=1.0).contains(d)) {
        return fail("densities must lie in [0, 1]");
    }
    let workers = workers();
    let mut seeds = rng::substream(seed, 0);
    let mut checks = 0u64;
    let mut mismatches = 0u64;

    for n in n_min..=n_max {
        for &density in densities {
            let mut cell = 0u64;
            for _ in 0..trials {
                let g = Digraph::random(n, density, seeds.gen());
                let expected = match oracle::ham_parity_heldkarp(&g) {
                    Ok(p) => p,
                    Err(e) => return fail(e),
                };
                let mut check = |ok: bool| {
                    checks += 1;
                    if !ok {
                        cell += 1;
                    }
                };

                let run = parity_general_with(&g, DiagonalChoice::Seed(seeds.gen()), workers)
                    .expect("n >= 2 checked above");
                check(run.parity == expected);

                let diagonal =
                    derand::choose_diagonal_with(&g, workers).expect("n >= 2 checked above");
                let run = parity_general_with(&g, DiagonalChoice::Fixed(diagonal), workers)
                    .expect("n >= 2 checked above");
                check(run.parity == expected);

                if n <= 9 {
                    let brute = oracle::ham_count_brute(&g, 2).expect("n <= 9");
                    check((brute == 1) == expected);
                }

                if n % 2 == 0 {
                    let g = Digraph::random_bipartite(n, density, seeds.gen());
                    let expected = oracle::ham_parity_heldkarp(&g).expect("n in range");
                    let run = bipartite::parity_bipartite_with(&g, seeds.gen(), workers)
                        .expect("generated bipartite");
                    check(run.parity == expected);
                }
            }
            println!("n={n} density={density} trials={trials} mismatches={cell}");
            mismatches += cell;
        }
    }
    println!("{checks} checks, {mismatches} mismatches");
    if mismatches == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_MISMATCH)
    }
}

fn cmd_bench(
    n_min: usize,
    n_max: usize,
    step: usize,
    solver: BenchSolverArg,
    seed: u64,
    out: &Path,
) -> ExitCode {
    if n_min < 2 || n_max < n_min || step == 0 {
        return fail("need 2 <= n-min <= n-max and step >= 1");
    }
    let workers = workers();
    let mut seeds = rng::substream(seed, 1);
    let mut csv = String::from(
        "n,solver,seed,wall_ms,prefixes_examined,candidates_generated,contributing_count,parity\n",
    );

    for n in (n_min..=n_max).step_by(step) {
        let instance_seed: u64 = seeds.gen();
        let run_seed: u64 = seeds.gen();
        let (name, row) = match solver {
            BenchSolverArg::General => {
                let g = Digraph::random(n, 0.5, instance_seed);
                let start = Instant::now();
                let r = parity_general_with(&g, DiagonalChoice::Seed(run_seed), workers)
                    .expect("n >= 2 checked above");
                ("general", (start.elapsed(), r.prefixes_examined, r.candidates_generated, r.contributing_count, r.parity))
            }
            BenchSolverArg::Bipartite => {
                if n % 2 != 0 {
                    continue; // the balanced generator needs even n
                }
                let g = Digraph::random_bipartite(n, 0.5, instance_seed);
                let start = Instant::now();
                let r = bipartite::parity_bipartite_with(&g, run_seed, workers)
                    .expect("generated bipartite");
                ("bipartite", (start.elapsed(), r.prefixes_examined, r.candidates_generated, r.contributing_count, r.parity))
            }
            BenchSolverArg::Heldkarp => {
                let g = Digraph::random(n, 0.5, instance_seed);
                let start = Instant::now();
                match oracle::ham_parity_heldkarp(&g) {
                    Ok(parity) => ("heldkarp", (start.elapsed(), 0, 0, 0, parity)),
                    Err(e) => return fail(e),
                }
            }
        };
        let (elapsed, prefixes, candidates, contributing, parity) = row;
        let wall_ms = elapsed.as_millis();
        csv.push_str(&format!(
            "{n},{name},{seed},{wall_ms},{prefixes},{candidates},{contributing},{}\n",
            parity as u8
        ));
        println!(
            "n={n} solver={name} wall_ms={wall_ms} prefixes={prefixes} candidates={candidates} \
             contributing={contributing} parity={}",
            parity as u8
        );
    }

    if let Err(e) = std::fs::write(out, csv) {
        return fail(format!("cannot write {}: {e}", out.display()));
    }
    println!("wrote {}", out.display());
    ExitCode::SUCCESS
}
