//! Directed graphs as dense adjacency bit-matrices.
//!
//! Vertices are numbered `1..=n` in every public interface and in the
//! edge-list file format; coordinates of the underlying bit structures are
//! 0-indexed. Self-loops are ordinary diagonal entries: they never affect
//! the Hamiltonian-cycle parity of a graph with at least two vertices, and
//! the parity solvers overwrite the diagonal anyway, so the diagonal belongs
//! to the algorithm rather than to the input.

use crate::gf2::{BitMatrix, BitVector};
use crate::rng;
use rand::Rng;
use std::error::Error;
use std::fmt;

/// A directed graph on vertices `1..=n`; entry `(i, j)` of the adjacency
/// matrix is 1 exactly when the edge `i -> j` exists.
#[derive(Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    adj: BitMatrix,
}

impl Digraph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Digraph {
            n,
            adj: BitMatrix::zeros(n, n),
        }
    }

    /// The complete loopless digraph: every ordered pair `(u, v)`, `u != v`.
    pub fn complete(n: usize) -> Self {
        let mut g = Digraph::empty(n);
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    g.adj.set(u, v, true);
                }
            }
        }
        g
    }

    /// Builds a graph from 1-indexed edge pairs. Duplicates collapse.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Digraph::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn adjacency(&self) -> &BitMatrix {
        &self.adj
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|r| self.adj.row(r).weight()).sum()
    }

    /// 1-indexed edge test.
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        assert!(
            (1..=self.n).contains(&u) && (1..=self.n).contains(&v),
            "edge ({u},{v}) out of range for n={}",
            self.n
        );
        self.adj.get(u - 1, v - 1)
    }

    /// 1-indexed edge insertion. `u == v` records a self-loop.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(
            (1..=self.n).contains(&u) && (1..=self.n).contains(&v),
            "edge ({u},{v}) out of range for n={}",
            self.n
        );
        self.adj.set(u - 1, v - 1, true);
    }

    /// Number of edges from vertex `v` (1-indexed) into the set `x`.
    /// A self-loop at `v` counts when `v` itself belongs to `x`.
    pub fn degree_into(&self, v: usize, x: &VertexSet) -> usize {
        assert!((1..=self.n).contains(&v), "vertex {v} out of range");
        assert_eq!(x.universe(), self.n, "vertex set size mismatch");
        self.adj.row_and_count(v - 1, x.indicator())
    }

    /// The diagonal (self-loop indicators), coordinate `i` for vertex `i+1`.
    pub fn diagonal(&self) -> BitVector {
        let mut d = BitVector::zeros(self.n);
        for i in 0..self.n {
            if self.adj.get(i, i) {
                d.set(i, true);
            }
        }
        d
    }

    /// Returns a copy with the diagonal replaced by `r`; off-diagonal
    /// entries are unchanged.
    pub fn with_diagonal(&self, r: &BitVector) -> Digraph {
        assert_eq!(r.len(), self.n, "diagonal length must equal n");
        let mut g = self.clone();
        for i in 0..self.n {
            g.adj.set(i, i, r.get(i));
        }
        g
    }

    /// Parses the edge-list text format.
    ///
    /// Lines starting with `#` and blank lines are ignored. The first
    /// significant line is the header `n m`; exactly `m` lines `u v`
    /// (1-indexed, `u == v` encoding a self-loop) follow. Duplicate edges
    /// collapse to one.
    pub fn parse_edge_list(text: &str) -> Result<Digraph, ParseError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (header_line, header) = lines.next().ok_or(ParseError::MissingHeader)?;
        let mut tokens = header.split_whitespace();
        let n = parse_token(tokens.next(), header_line)?;
        let m = parse_token(tokens.next(), header_line)?;
        if tokens.next().is_some() {
            return Err(ParseError::MalformedHeader { line: header_line });
        }

        let mut g = Digraph::empty(n);
        for _ in 0..m {
            let (line, body) = lines.next().ok_or(ParseError::MissingEdges {
                expected: m,
                found: g.edge_count(),
            })?;
            let mut tokens = body.split_whitespace();
            let u: usize = parse_token(tokens.next(), line)?;
            let v: usize = parse_token(tokens.next(), line)?;
            if tokens.next().is_some() {
                return Err(ParseError::MalformedEdge { line });
            }
            for w in [u, v] {
                if !(1..=n).contains(&w) {
                    return Err(ParseError::VertexOutOfRange { line, vertex: w, n });
                }
            }
            g.add_edge(u, v);
        }
        if let Some((line, _)) = lines.next() {
            return Err(ParseError::TrailingContent { line });
        }
        Ok(g)
    }

    /// Writes the edge-list text format; inverse of [`Digraph::parse_edge_list`].
    pub fn write_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edge_count());
        for u in 0..self.n {
            for v in self.adj.row(u).ones() {
                out.push_str(&format!("{} {}\n", u + 1, v + 1));
            }
        }
        out
    }

    /// Random digraph: every off-diagonal pair present independently with
    /// probability `p`, no self-loops. Deterministic per seed; pairs are
    /// drawn in row-major order.
    pub fn random(n: usize, p: f64, seed: u64) -> Digraph {
        assert!(n >= 2, "random graphs need n >= 2");
        assert!((0.0..=1.0).contains(&p), "probability out of range");
        let mut rng = rng::seeded(seed);
        let mut g = Digraph::empty(n);
        for u in 0..n {
            for v in 0..n {
                if u != v && rng.gen_bool(p) {
                    g.adj.set(u, v, true);
                }
            }
        }
        g
    }

    /// Random balanced bipartite digraph on halves `1..=n/2` and
    /// `n/2+1..=n`; both directions of every cross pair are sampled
    /// independently with probability `p`. `n` must be even.
    pub fn random_bipartite(n: usize, p: f64, seed: u64) -> Digraph {
        assert!(n >= 2 && n.is_multiple_of(2), "bipartite generator needs even n >= 2");
        assert!((0.0..=1.0).contains(&p), "probability out of range");
        let h = n / 2;
        let mut rng = rng::seeded(seed);
        let mut g = Digraph::empty(n);
        for u in 0..h {
            for v in h..n {
                if rng.gen_bool(p) {
                    g.adj.set(u, v, true);
                }
                if rng.gen_bool(p) {
                    g.adj.set(v, u, true);
                }
            }
        }
        g
    }

    /// 2-colors the underlying undirected graph (diagonal ignored).
    ///
    /// `Balanced` carries classes of equal size with vertex 1 in the first
    /// class; isolated vertices and independent components are assigned so
    /// the classes balance whenever possible. `Unbalanced` means the graph
    /// is 2-colorable but no equal split exists, in which case there can be
    /// no Hamiltonian cycle. `NotBipartite` reports an odd cycle.
    pub fn bipartition(&self) -> Bipartition {
        assert!(self.n >= 2, "bipartition needs n >= 2");
        let n = self.n;
        let undirected = |u: usize, v: usize| self.adj.get(u, v) || self.adj.get(v, u);

        let mut color = vec![None::<bool>; n];
        // Per component: members colored like the component's start vertex,
        // then the rest. Components are discovered in ascending vertex order.
        let mut components: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        for start in 0..n {
            if color[start].is_some() {
                continue;
            }
            let mut same = vec![start];
            let mut other = Vec::new();
            color[start] = Some(false);
            let mut queue = vec![start];
            while let Some(u) = queue.pop() {
                let cu = color[u].unwrap();
                for v in (0..n).filter(|&v| v != u && undirected(u, v)) {
                    match color[v] {
                        Some(cv) => {
                            if cv == cu {
                                return Bipartition::NotBipartite;
                            }
                        }
                        None => {
                            color[v] = Some(!cu);
                            if cu {
                                same.push(v);
                            } else {
                                other.push(v);
                            }
                            queue.push(v);
                        }
                    }
                }
            }
            components.push((same, other));
        }

        if !n.is_multiple_of(2) {
            return Bipartition::Unbalanced;
        }
        let target = n / 2;

        // Pick one side per component so the first classes sum to n/2.
        // The component holding vertex 1 keeps its own side (any balanced
        // split can be globally relabeled to put vertex 1 first), the rest
        // greedily prefer their own side subject to suffix feasibility.
        let c = components.len();
        let mut reachable = vec![vec![false; target + 1]; c + 1];
        reachable[c][0] = true;
        for i in (1..c).rev() {
            let (a, b) = (components[i].0.len(), components[i].1.len());
            for t in 0..=target {
                reachable[i][t] = (t >= a && reachable[i + 1][t - a])
                    || (t >= b && reachable[i + 1][t - b]);
            }
        }

        let first = components[0].0.len();
        if first > target {
            return Bipartition::Unbalanced;
        }
        let mut remaining = target - first;
        if c > 1 && !reachable[1][remaining] {
            return Bipartition::Unbalanced;
        }
        if c == 1 && remaining != 0 {
            return Bipartition::Unbalanced;
        }

        let mut v1 = VertexSet::empty(n);
        for &v in &components[0].0 {
            v1.insert(v + 1);
        }
        for i in 1..c {
            let (a, b) = (components[i].0.len(), components[i].1.len());
            let take_own = remaining >= a && reachable[i + 1][remaining - a];
            let side = if take_own {
                &components[i].0
            } else {
                debug_assert!(remaining >= b && reachable[i + 1][remaining - b]);
                &components[i].1
            };
            for &v in side {
                v1.insert(v + 1);
            }
            remaining -= side.len();
        }
        debug_assert_eq!(remaining, 0);

        let mut v2 = VertexSet::empty(n);
        for v in 1..=n {
            if !v1.contains(v) {
                v2.insert(v);
            }
        }
        Bipartition::Balanced { v1, v2 }
    }
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digraph(n={}, m={})", self.n, self.edge_count())
    }
}

fn parse_token(token: Option<&str>, line: usize) -> Result<usize, ParseError> {
    let token = token.ok_or(ParseError::MalformedHeader { line })?;
    token.parse().map_err(|_| ParseError::InvalidToken {
        line,
        token: token.to_string(),
    })
}

/// Outcome of 2-coloring the underlying undirected graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bipartition {
    Balanced { v1: VertexSet, v2: VertexSet },
    Unbalanced,
    NotBipartite,
}

/// A subset of the vertices `1..=n`, stored as an indicator vector whose
/// coordinate `i` marks vertex `i+1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    indicator: BitVector,
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet {
            indicator: BitVector::zeros(n),
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = VertexSet::empty(n);
        for v in 1..=n {
            s.insert(v);
        }
        s
    }

    /// Builds a set from 1-indexed members.
    pub fn from_members(n: usize, members: &[usize]) -> Self {
        let mut s = VertexSet::empty(n);
        for &v in members {
            s.insert(v);
        }
        s
    }

    pub fn from_indicator(indicator: BitVector) -> Self {
        VertexSet { indicator }
    }

    pub fn indicator(&self) -> &BitVector {
        &self.indicator
    }

    /// Size of the vertex universe, not of the set.
    pub fn universe(&self) -> usize {
        self.indicator.len()
    }

    pub fn cardinality(&self) -> usize {
        self.indicator.weight()
    }

    pub fn is_empty_set(&self) -> bool {
        self.indicator.is_zero()
    }

    /// 1-indexed membership test.
    pub fn contains(&self, v: usize) -> bool {
        assert!((1..=self.universe()).contains(&v), "vertex {v} out of range");
        self.indicator.get(v - 1)
    }

    /// 1-indexed insertion.
    pub fn insert(&mut self, v: usize) {
        assert!((1..=self.universe()).contains(&v), "vertex {v} out of range");
        self.indicator.set(v - 1, true);
    }

    /// Smallest member, 1-indexed.
    pub fn min_vertex(&self) -> Option<usize> {
        self.indicator.first_one().map(|i| i + 1)
    }

    /// Iterates over members in ascending order, 1-indexed.
    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.indicator.ones().map(|i| i + 1)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, v) in self.members().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Edge-list parse failure; line numbers are 1-based over the raw input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseError {
    MissingHeader,
    MalformedHeader { line: usize },
    MalformedEdge { line: usize },
    InvalidToken { line: usize, token: String },
    VertexOutOfRange { line: usize, vertex: usize, n: usize },
    MissingEdges { expected: usize, found: usize },
    TrailingContent { line: usize },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::MissingHeader => write!(f, "missing header line \"n m\""),
            ParseError::MalformedHeader { line } => {
                write!(f, "line {line}: header must be two integers \"n m\"")
            }
            ParseError::MalformedEdge { line } => {
                write!(f, "line {line}: edge must be two integers \"u v\"")
            }
            ParseError::InvalidToken { line, token } => {
                write!(f, "line {line}: invalid integer token {token:?}")
            }
            ParseError::VertexOutOfRange { line, vertex, n } => {
                write!(f, "line {line}: vertex {vertex} out of range 1..={n}")
            }
            ParseError::MissingEdges { expected, found } => {
                write!(f, "input ended after {found} of {expected} edge lines")
            }
            ParseError::TrailingContent { line } => {
                write!(f, "line {line}: unexpected content after the edge list")
            }
        }
    }
}

impl Error for ParseError {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use proptest::prelude::*;

    fn triangle() -> Digraph {
        Digraph::from_edges(3, &[(1, 2), (2, 3), (3, 1)])
    }

    #[test]
    fn degree_examples() {
        let g = triangle();
        assert_eq!(g.degree_into(1, &VertexSet::from_members(3, &[2])), 1);
        assert_eq!(g.degree_into(1, &VertexSet::empty(3)), 0);
        let k4 = Digraph::complete(4);
        assert_eq!(k4.degree_into(1, &VertexSet::full(4)), 3);
    }

    #[test]
    fn degree_counts_self_loop_when_member() {
        let mut g = triangle();
        g.add_edge(1, 1);
        assert_eq!(g.degree_into(1, &VertexSet::from_members(3, &[1, 2])), 2);
        assert_eq!(g.degree_into(1, &VertexSet::from_members(3, &[2])), 1);
    }

    #[test]
    fn with_diagonal_replaces_only_the_diagonal() {
        let g = triangle();
        let ones = BitVector::from_bools(&[true, true, true]);
        let looped = g.with_diagonal(&ones);
        assert_eq!(looped.diagonal(), ones);
        assert!(looped.has_edge(1, 2) && looped.has_edge(2, 3) && looped.has_edge(3, 1));
        let back = looped.with_diagonal(&BitVector::zeros(3));
        assert_eq!(back, g);
    }

    #[test]
    fn parse_examples() {
        let g = Digraph::parse_edge_list("3 3\n1 2\n2 3\n3 1\n").unwrap();
        assert_eq!(g, triangle());

        let g = Digraph::parse_edge_list("2 0\n").unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.edge_count(), 0);

        let g = Digraph::parse_edge_list("# comment\n2 2\n1 2\n2 1\n").unwrap();
        assert_eq!(g, Digraph::from_edges(2, &[(1, 2), (2, 1)]));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert_eq!(
            Digraph::parse_edge_list(""),
            Err(ParseError::MissingHeader)
        );
        assert_eq!(
            Digraph::parse_edge_list("3\n"),
            Err(ParseError::MalformedHeader { line: 1 })
        );
        assert_eq!(
            Digraph::parse_edge_list("2 1\n1 x\n"),
            Err(ParseError::InvalidToken {
                line: 2,
                token: "x".to_string()
            })
        );
        assert_eq!(
            Digraph::parse_edge_list("# hi\n2 1\n1 3\n"),
            Err(ParseError::VertexOutOfRange {
                line: 3,
                vertex: 3,
                n: 2
            })
        );
        assert_eq!(
            Digraph::parse_edge_list("2 2\n1 2\n"),
            Err(ParseError::MissingEdges {
                expected: 2,
                found: 1
            })
        );
        assert_eq!(
            Digraph::parse_edge_list("2 1\n1 2\n2 1\n"),
            Err(ParseError::TrailingContent { line: 3 })
        );
    }

    #[test]
    fn duplicate_edges_collapse() {
        let g = Digraph::parse_edge_list("2 3\n1 2\n1 2\n2 1\n").unwrap();
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn random_extremes() {
        let g = Digraph::random(5, 0.0, 1);
        assert_eq!(g.edge_count(), 0);
        let g = Digraph::random(3, 1.0, 1);
        assert_eq!(g.edge_count(), 6);
        assert_eq!(Digraph::random(8, 0.4, 9), Digraph::random(8, 0.4, 9));
        assert_ne!(Digraph::random(8, 0.4, 9), Digraph::random(8, 0.4, 10));
    }

    #[test]
    fn bipartition_examples() {
        let four_cycle = Digraph::from_edges(4, &[(1, 3), (3, 2), (2, 4), (4, 1)]);
        match four_cycle.bipartition() {
            Bipartition::Balanced { v1, v2 } => {
                assert_eq!(v1, VertexSet::from_members(4, &[1, 2]));
                assert_eq!(v2, VertexSet::from_members(4, &[3, 4]));
            }
            other => panic!("expected balanced, got {other:?}"),
        }

        assert_eq!(triangle().bipartition(), Bipartition::NotBipartite);

        let path_plus_isolated = Digraph::from_edges(3, &[(1, 2)]);
        assert_eq!(path_plus_isolated.bipartition(), Bipartition::Unbalanced);
    }

    #[test]
    fn bipartition_balances_isolated_vertices() {
        // Single edge 1->3 plus isolated 2 and 4: balance is still possible.
        let g = Digraph::from_edges(4, &[(1, 3)]);
        match g.bipartition() {
            Bipartition::Balanced { v1, v2 } => {
                assert_eq!(v1.cardinality(), 2);
                assert_eq!(v2.cardinality(), 2);
                assert!(v1.contains(1));
                assert!(v2.contains(3));
            }
            other => panic!("expected balanced, got {other:?}"),
        }
    }

    #[test]
    fn bipartition_unbalanced_when_no_split_exists() {
        // One component with classes of sizes 3 and 1: 3+1 cannot split 2/2.
        let star = Digraph::from_edges(4, &[(1, 2), (1, 3), (1, 4)]);
        match star.bipartition() {
            Bipartition::Balanced { .. } => panic!("star has no balanced split"),
            Bipartition::Unbalanced => {}
            Bipartition::NotBipartite => panic!("star is bipartite"),
        }
    }

    proptest! {
        #[test]
        fn roundtrip_write_parse(n in 2usize..9, p in 0.0f64..1.0, seed in 0u64..500) {
            let g = Digraph::random(n, p, seed);
            let parsed = Digraph::parse_edge_list(&g.write_edge_list()).unwrap();
            prop_assert_eq!(parsed, g);
        }

        #[test]
        fn degree_is_additive_over_disjoint_sets(
            seed in 0u64..500,
            mask_a in 0u32..64,
            mask_b in 0u32..64,
        ) {
            let n = 6;
            let g = Digraph::random(n, 0.5, seed);
            let a_bits: Vec<bool> = (0..n).map(|i| mask_a >> i & 1 == 1).collect();
            let b_bits: Vec<bool> = (0..n)
                .map(|i| mask_b >> i & 1 == 1 && !a_bits[i])
                .collect();
            let a = VertexSet::from_indicator(BitVector::from_bools(&a_bits));
            let b = VertexSet::from_indicator(BitVector::from_bools(&b_bits));
            let mut union = a.clone();
            for v in b.members() {
                union.insert(v);
            }
            for v in 1..=n {
                prop_assert_eq!(
                    g.degree_into(v, &union),
                    g.degree_into(v, &a) + g.degree_into(v, &b)
                );
            }
        }

        #[test]
        fn with_diagonal_is_idempotent_and_commutes_with_roundtrip(
            seed in 0u64..200,
            diag_mask in 0u32..32,
        ) {
            let n = 5;
            let g = Digraph::random(n, 0.5, seed);
            let r = BitVector::from_bools(&(0..n).map(|i| diag_mask >> i & 1 == 1).collect::<Vec<_>>());
            let once = g.with_diagonal(&r);
            prop_assert_eq!(once.with_diagonal(&r), once.clone());
            let roundtrip = Digraph::parse_edge_list(&once.write_edge_list()).unwrap();
            prop_assert_eq!(roundtrip, once);
        }

        #[test]
        fn diagonal_never_changes_parity(seed in 0u64..40, diag_mask in 0u32..64) {
            let n = 6;
            let g = Digraph::random(n, 0.5, seed);
            let r = BitVector::from_bools(&(0..n).map(|i| diag_mask >> i & 1 == 1).collect::<Vec<_>>());
            let base = oracle::ham_parity_heldkarp(&g).unwrap();
            prop_assert_eq!(oracle::ham_parity_heldkarp(&g.with_diagonal(&r)).unwrap(), base);
        }

        #[test]
        fn random_bipartite_has_canonical_classes(
            n_half in 1usize..6,
            p in 0.0f64..1.0,
            seed in 0u64..300,
        ) {
            let n = 2 * n_half;
            let g = Digraph::random_bipartite(n, p, seed);
            match g.bipartition() {
                Bipartition::Balanced { v1, v2 } => {
                    prop_assert_eq!(v1, VertexSet::from_members(n, &(1..=n_half).collect::<Vec<_>>()));
                    prop_assert_eq!(v2, VertexSet::from_members(n, &(n_half + 1..=n).collect::<Vec<_>>()));
                }
                other => prop_assert!(false, "expected balanced, got {:?}", other),
            }
        }
    }
}
