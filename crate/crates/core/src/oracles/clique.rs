//! Maximum cliques in small graphs and the generation graphs of `Sₙ`, `n ≤ 5`.

use serde::{Deserialize, Serialize};

use super::check_range;
use crate::chain::{classify, GenerationClass};
use crate::combin::{factorial_u64, lehmer_unrank};
use crate::error::{Error, Result};
use crate::perm::Permutation;

pub const MAX_OMEGA_DEGREE: usize = 5;
pub const MAX_GRAPH_VERTICES: usize = 128;

/// Simple undirected graph on at most 128 vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<u128>,
}

impl Graph {
    pub fn new(vertices: usize) -> Result<Self> {
        if vertices > MAX_GRAPH_VERTICES {
            return Err(Error::LimitExceeded(format!(
                "graph on {vertices} vertices; at most {MAX_GRAPH_VERTICES} supported"
            )));
        }
        Ok(Graph {
            adj: vec![0; vertices],
        })
    }

    pub fn from_edges(
        vertices: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut g = Graph::new(vertices)?;
        for (a, b) in edges {
            g.add_edge(a, b);
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        if a != b {
            self.adj[a] |= 1 << b;
            self.adj[b] |= 1 << a;
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> u64 {
        self.adj.iter().map(|m| m.count_ones() as u64).sum::<u64>() / 2
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a] >> b & 1 == 1
    }

    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(k, &a)| vertices[k + 1..].iter().all(|&b| self.adjacent(a, b)))
    }
}

struct CliqueSearch<'a> {
    graph: &'a Graph,
    best: Vec<usize>,
}

impl CliqueSearch<'_> {
    /// Greedy sequential colouring of `candidates` in index order; returns the
    /// vertices sorted by colour with their colour numbers.
    fn colour(&self, candidates: u128) -> Vec<(usize, usize)> {
        let mut order = Vec::new();
        let mut uncoloured = candidates;
        let mut colour = 0;
        while uncoloured != 0 {
            colour += 1;
            let mut available = uncoloured;
            while available != 0 {
                let v = available.trailing_zeros() as usize;
                available &= !(1u128 << v) & !self.graph.adj[v];
                uncoloured &= !(1u128 << v);
                order.push((v, colour));
            }
        }
        order
    }

    fn expand(&mut self, current: &mut Vec<usize>, mut candidates: u128) {
        let coloured = self.colour(candidates);
        for &(v, colour) in coloured.iter().rev() {
            if current.len() + colour <= self.best.len() {
                return;
            }
            current.push(v);
            let next = candidates & self.graph.adj[v];
            if next == 0 {
                if current.len() > self.best.len() {
                    self.best = current.clone();
                }
            } else {
                self.expand(current, next);
            }
            current.pop();
            candidates &= !(1u128 << v);
        }
    }
}

/// Maximum clique by branch and bound with greedy colouring bounds. The
/// returned clique is sorted.
pub fn max_clique(graph: &Graph) -> Vec<usize> {
    let all = if graph.vertex_count() == 128 {
        u128::MAX
    } else {
        (1u128 << graph.vertex_count()) - 1
    };
    let mut search = CliqueSearch {
        graph,
        best: Vec::new(),
    };
    if all != 0 {
        search.expand(&mut Vec::new(), all);
    }
    let mut best = search.best;
    best.sort_unstable();
    best
}

/// Clique number by plain include/exclude recursion; only for small graphs.
pub fn brute_force_clique_number(graph: &Graph) -> usize {
    fn go(graph: &Graph, candidates: u128, size: usize) -> usize {
        if candidates == 0 {
            return size;
        }
        let v = candidates.trailing_zeros() as usize;
        let without = candidates & !(1u128 << v);
        let with = go(graph, without & graph.adj[v], size + 1);
        with.max(go(graph, without, size))
    }
    let all = if graph.vertex_count() == 128 {
        u128::MAX
    } else {
        (1u128 << graph.vertex_count()) - 1
    };
    go(graph, all, 0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CliqueMode {
    /// Edges are pairs generating `Sₙ`.
    Full,
    /// Edges are pairs generating `Aₙ` or `Sₙ`.
    AtLeastAlt,
}

impl CliqueMode {
    pub fn accepts(self, class: GenerationClass) -> bool {
        match self {
            CliqueMode::Full => class.is_full(),
            CliqueMode::AtLeastAlt => class.contains_alternating(),
        }
    }
}

/// Vertex set of a generation graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexSet {
    Symmetric,
    Alternating,
    OddCoset,
}

pub fn vertex_elements(n: usize, set: VertexSet) -> Vec<Permutation> {
    (0..factorial_u64(n))
        .map(|r| Permutation::from_images_unchecked(lehmer_unrank(n, r)))
        .filter(|g| match set {
            VertexSet::Symmetric => true,
            VertexSet::Alternating => g.is_even(),
            VertexSet::OddCoset => !g.is_even(),
        })
        .collect()
}

/// Graph on `set` whose edges are the pairs accepted by `mode`.
pub fn generation_graph(
    n: usize,
    set: VertexSet,
    mode: CliqueMode,
) -> Result<(Vec<Permutation>, Graph)> {
    check_range("generation graph", n, 2, MAX_OMEGA_DEGREE)?;
    let vertices = vertex_elements(n, set);
    let mut graph = Graph::new(vertices.len())?;
    for a in 0..vertices.len() {
        for b in a + 1..vertices.len() {
            if mode.accepts(classify(n, &[&vertices[a], &vertices[b]])) {
                graph.add_edge(a, b);
            }
        }
    }
    Ok((vertices, graph))
}

/// The graph `A(n)`: even permutations, edges generating `Aₙ`.
pub fn alternating_graph(n: usize) -> Result<(Vec<Permutation>, Graph)> {
    generation_graph(n, VertexSet::Alternating, CliqueMode::AtLeastAlt)
}

/// The graph `B(n)`: odd permutations, edges generating `Sₙ`.
pub fn odd_coset_graph(n: usize) -> Result<(Vec<Permutation>, Graph)> {
    generation_graph(n, VertexSet::OddCoset, CliqueMode::Full)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaResult {
    pub n: usize,
    pub mode: CliqueMode,
    pub omega: usize,
    pub clique: Vec<String>,
}

pub fn omega_exact(n: usize, mode: CliqueMode) -> Result<OmegaResult> {
    check_range("omega_exact", n, 3, MAX_OMEGA_DEGREE)?;
    let (vertices, graph) = generation_graph(n, VertexSet::Symmetric, mode)?;
    let clique = max_clique(&graph);
    Ok(OmegaResult {
        n,
        mode,
        omega: clique.len(),
        clique: clique.iter().map(|&v| vertices[v].to_string()).collect(),
    })
}
