//! Brute-force ground truth for tiny instances.
//!
//! Deliberately naive: a labeled depth-first enumeration over vertex
//! pairs in lexicographic order, pruned only by the triangle rule, the
//! degree cap and the count of pairs that could still be added. It shares
//! no code with the search engine beyond reading a node's fixings.

use thiserror::Error;

use crate::graph::Graph;
use crate::search::SearchNode;
use crate::symmetry::EdgeColor;

/// Largest vertex count for [`brute_force_max`].
pub const MAX_ORACLE_N: usize = 11;
/// Largest vertex count for node-restricted enumeration.
pub const MAX_NODE_ORACLE_N: usize = 9;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle supports at most {cap} vertices, got {n}")]
    CapExceeded { n: usize, cap: usize },
}

struct Enumerator {
    pairs: Vec<(usize, usize)>,
    lo: Vec<usize>,
    hi: Vec<usize>,
    chain: Vec<usize>,
    adj: Vec<u16>,
    edges: usize,
    /// Best edge count seen, or -1.
    best: isize,
    best_adj: Vec<u16>,
    prune: bool,
    all: Option<Vec<u64>>,
}

impl Enumerator {
    fn new(n: usize, pairs: Vec<(usize, usize)>, lo: Vec<usize>, hi: Vec<usize>) -> Self {
        Enumerator {
            pairs,
            lo,
            hi,
            chain: Vec::new(),
            adj: vec![0; n],
            edges: 0,
            best: -1,
            best_adj: vec![0; n],
            prune: true,
            all: None,
        }
    }

    fn deg(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    fn addable(&self, u: usize, v: usize) -> bool {
        self.deg(u) < self.hi[u] && self.deg(v) < self.hi[v] && self.adj[u] & self.adj[v] == 0
    }

    fn remaining_addable(&self, from: usize) -> usize {
        self.pairs[from..].iter().filter(|&&(u, v)| self.addable(u, v)).count()
    }

    fn leaf_ok(&self) -> bool {
        let n = self.adj.len();
        if (0..n).any(|v| self.deg(v) < self.lo[v]) {
            return false;
        }
        self.chain.windows(2).all(|w| self.deg(w[0]) >= self.deg(w[1]))
    }

    fn rec(&mut self, p: usize) {
        if self.prune && (self.edges + self.remaining_addable(p)) as isize <= self.best {
            return;
        }
        if p == self.pairs.len() {
            if self.leaf_ok() {
                if self.edges as isize > self.best {
                    self.best = self.edges as isize;
                    self.best_adj.clone_from(&self.adj);
                }
                if let Some(all) = &mut self.all {
                    all.push(edge_mask(&self.adj));
                }
            }
            return;
        }
        let (u, v) = self.pairs[p];
        if self.addable(u, v) {
            self.adj[u] |= 1 << v;
            self.adj[v] |= 1 << u;
            self.edges += 1;
            self.rec(p + 1);
            self.adj[u] &= !(1 << v);
            self.adj[v] &= !(1 << u);
            self.edges -= 1;
        }
        self.rec(p + 1);
    }

    fn best_graph(&self) -> Graph {
        adj_to_graph(&self.best_adj)
    }
}

fn adj_to_graph(adj: &[u16]) -> Graph {
    let n = adj.len();
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if adj[u] >> v & 1 == 1 {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// Edge set as a bitmask with bit `u·n + v` for each edge `u < v`.
fn edge_mask(adj: &[u16]) -> u64 {
    let n = adj.len();
    let mut m = 0u64;
    for u in 0..n {
        for v in u + 1..n {
            if adj[u] >> v & 1 == 1 {
                m |= 1 << (u * n + v);
            }
        }
    }
    m
}

/// Maximum edge count of a triangle-free graph on `n` labeled vertices
/// with maximum degree `d`, with a witness.
pub fn brute_force_max(n: usize, d: usize) -> Result<(usize, Graph), OracleError> {
    if n > MAX_ORACLE_N {
        return Err(OracleError::CapExceeded { n, cap: MAX_ORACLE_N });
    }
    let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut e = Enumerator::new(n, pairs, vec![0; n], vec![d; n]);
    e.rec(0);
    Ok((e.best.max(0) as usize, e.best_graph()))
}

fn node_enumerator(node: &SearchNode, d: usize) -> Option<Enumerator> {
    let n = node.n();
    let lo = (0..n).map(|v| node.degree_window(v, d).0).collect();
    let hi = (0..n).map(|v| node.degree_window(v, d).1).collect();
    let mut free = Vec::new();
    let mut e = Enumerator::new(n, Vec::new(), lo, hi);
    e.chain = (0..n).filter(|&v| node.ordered_mask() >> v & 1 == 1).collect();
    for u in 0..n {
        for v in u + 1..n {
            match node.pair(u, v) {
                EdgeColor::FixedOne => {
                    if !e.addable(u, v) {
                        return None;
                    }
                    e.adj[u] |= 1 << v;
                    e.adj[v] |= 1 << u;
                    e.edges += 1;
                }
                EdgeColor::FixedZero => {}
                EdgeColor::Free => free.push((u, v)),
            }
        }
    }
    e.pairs = free;
    Some(e)
}

/// Maximum `|E|` over completions of `node` that are triangle-free and
/// respect its degree windows and chain; `None` if there is none.
pub fn brute_force_under_node(node: &SearchNode, d: usize) -> Result<Option<usize>, OracleError> {
    if node.n() > MAX_NODE_ORACLE_N {
        return Err(OracleError::CapExceeded { n: node.n(), cap: MAX_NODE_ORACLE_N });
    }
    let Some(mut e) = node_enumerator(node, d) else {
        return Ok(None);
    };
    e.rec(0);
    Ok((e.best >= 0).then_some(e.best as usize))
}

/// Every feasible completion of `node` as an edge bitmask (bit `u·n + v`
/// for `u < v`), sorted. Needs `n ≤ 8` so the mask fits in 64 bits.
pub fn feasible_completions(node: &SearchNode, d: usize) -> Result<Vec<u64>, OracleError> {
    if node.n() > 8 {
        return Err(OracleError::CapExceeded { n: node.n(), cap: 8 });
    }
    let Some(mut e) = node_enumerator(node, d) else {
        return Ok(Vec::new());
    };
    e.prune = false;
    e.all = Some(Vec::new());
    e.rec(0);
    let mut all = e.all.unwrap();
    all.sort_unstable();
    Ok(all)
}
