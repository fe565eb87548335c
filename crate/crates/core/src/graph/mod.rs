//! Simple undirected graphs on `0..n` with bitset adjacency.
//!
//! This is the verification substrate: every graph produced by a
//! construction, a knapsack plan or a search is checked through the
//! functions here (triangle-freeness, degrees, matching number,
//! factor-criticality).

mod graph6;
mod matching;

pub use graph6::{from_graph6, to_graph6, Graph6Error};
pub use matching::{is_factor_critical, matching_number, max_matching, Matching};

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
}

/// Fixed-width bitset over vertex indices.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct VertexSet {
    words: Vec<u64>,
}

impl VertexSet {
    pub fn new(n: usize) -> Self {
        VertexSet {
            words: vec![0; n.div_ceil(64)],
        }
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.words[v / 64] >> (v % 64) & 1 == 1
    }

    /// Returns true if `v` was not already present.
    #[inline]
    pub fn insert(&mut self, v: usize) -> bool {
        let w = &mut self.words[v / 64];
        let bit = 1u64 << (v % 64);
        let fresh = *w & bit == 0;
        *w |= bit;
        fresh
    }

    #[inline]
    pub fn remove(&mut self, v: usize) -> bool {
        let w = &mut self.words[v / 64];
        let bit = 1u64 << (v % 64);
        let present = *w & bit != 0;
        *w &= !bit;
        present
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn intersects(&self, other: &VertexSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .any(|(a, b)| a & b != 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i * 64 + b)
            })
        })
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Simple undirected graph. Each edge `{u, v}` is stored once in both
/// endpoint neighbor sets; there are no self-loops.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<VertexSet>,
    edges: usize,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        Graph {
            n,
            adj: vec![VertexSet::new(n); n],
            edges: 0,
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            g.try_add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn try_add_edge(&mut self, u: usize, v: usize) -> Result<bool, GraphError> {
        for x in [u, v] {
            if x >= self.n {
                return Err(GraphError::VertexOutOfRange { vertex: x, n: self.n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        Ok(self.insert_edge(u, v))
    }

    /// Adds `{u, v}`; returns false if it was already present.
    ///
    /// Panics on a self-loop or an out-of-range endpoint.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        self.try_add_edge(u, v).expect("invalid edge")
    }

    fn insert_edge(&mut self, u: usize, v: usize) -> bool {
        let fresh = self.adj[u].insert(v);
        if fresh {
            self.adj[v].insert(u);
            self.edges += 1;
        }
        fresh
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if u >= self.n || v >= self.n {
            return false;
        }
        let present = self.adj[u].remove(v);
        if present {
            self.adj[v].remove(u);
            self.edges -= 1;
        }
        present
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u].contains(v)
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter()
    }

    pub fn neighbor_set(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.adj[u].iter().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    /// True iff no three vertices are pairwise adjacent.
    pub fn is_triangle_free(&self) -> bool {
        self.edges()
            .all(|(u, v)| !self.adj[u].intersects(&self.adj[v]))
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let mut g = Graph::new(self.n + other.n);
        for (u, v) in self.edges() {
            g.insert_edge(u, v);
        }
        for (u, v) in other.edges() {
            g.insert_edge(u + self.n, v + self.n);
        }
        g
    }

    /// Disjoint union of many graphs, relabelled by cumulative offset.
    pub fn disjoint_union_all<'a, I>(parts: I) -> Graph
    where
        I: IntoIterator<Item = &'a Graph>,
        I::IntoIter: Clone,
    {
        let parts = parts.into_iter();
        let total = parts.clone().map(Graph::n).sum();
        let mut g = Graph::new(total);
        let mut offset = 0;
        for part in parts {
            for (u, v) in part.edges() {
                g.insert_edge(u + offset, v + offset);
            }
            offset += part.n;
        }
        g
    }

    /// Deletes `v`; vertices above `v` shift down by one.
    pub fn remove_vertex(&self, v: usize) -> Graph {
        assert!(v < self.n, "vertex {v} out of range");
        let relabel = |x: usize| if x > v { x - 1 } else { x };
        let mut g = Graph::new(self.n - 1);
        for (a, b) in self.edges() {
            if a != v && b != v {
                g.insert_edge(relabel(a), relabel(b));
            }
        }
        g
    }

    /// Induced subgraph on `vertices` (relabelled to `0..len` in the given order).
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut g = Graph::new(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            for w in self.adj[v].iter() {
                let j = index[w];
                if j != usize::MAX && i < j {
                    g.insert_edge(i, j);
                }
            }
        }
        g
    }

    /// Connected components, each sorted ascending; components ordered by
    /// smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for w in self.adj[u].iter() {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// Cycle on `n ≥ 3` vertices `0-1-…-(n-1)-0`.
pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3);
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
}

/// Complete graph on `n` vertices.
pub fn complete(n: usize) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            g.insert_edge(u, v);
        }
    }
    g
}

/// Path on `n` vertices `0-1-…-(n-1)`.
pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
}
