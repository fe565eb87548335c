//! Maximum cardinality matching in general graphs (Edmonds' blossom
//! algorithm) and the factor-criticality test built on it.

use std::collections::VecDeque;

use super::Graph;

const NONE: usize = usize::MAX;

/// A set of pairwise vertex-disjoint edges, stored as `(u, v)` with `u < v`
/// in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    pairs: Vec<(usize, usize)>,
}

impl Matching {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// True iff every pair is an edge of `g` and no vertex is used twice.
    pub fn is_valid_in(&self, g: &Graph) -> bool {
        let mut used = vec![false; g.n()];
        for &(u, v) in &self.pairs {
            if !g.has_edge(u, v) || used[u] || used[v] {
                return false;
            }
            used[u] = true;
            used[v] = true;
        }
        true
    }
}

/// Maximum matching of `g`. Each connected component is solved separately.
pub fn max_matching(g: &Graph) -> Matching {
    let mut pairs = Vec::new();
    for comp in g.components() {
        if comp.len() < 2 {
            continue;
        }
        let sub = g.induced(&comp);
        let adj: Vec<Vec<usize>> = (0..sub.n()).map(|v| sub.neighbors(v).collect()).collect();
        let mate = Blossom::new(&adj).solve();
        for (i, &j) in mate.iter().enumerate() {
            if j != NONE && i < j {
                let (a, b) = (comp[i], comp[j]);
                pairs.push((a.min(b), a.max(b)));
            }
        }
    }
    pairs.sort_unstable();
    Matching { pairs }
}

/// Size of a maximum matching.
pub fn matching_number(g: &Graph) -> usize {
    max_matching(g).len()
}

/// True iff `n` is odd and deleting any single vertex leaves a graph with a
/// perfect matching.
pub fn is_factor_critical(g: &Graph) -> bool {
    let n = g.n();
    if n % 2 == 0 {
        return false;
    }
    (0..n).all(|v| 2 * matching_number(&g.remove_vertex(v)) == n - 1)
}

struct Blossom<'a> {
    adj: &'a [Vec<usize>],
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    queue: VecDeque<usize>,
}

impl<'a> Blossom<'a> {
    fn new(adj: &'a [Vec<usize>]) -> Self {
        let n = adj.len();
        Blossom {
            adj,
            mate: vec![NONE; n],
            parent: vec![NONE; n],
            base: (0..n).collect(),
            used: vec![false; n],
            in_blossom: vec![false; n],
            queue: VecDeque::new(),
        }
    }

    fn solve(mut self) -> Vec<usize> {
        let n = self.adj.len();
        // greedy start
        for v in 0..n {
            if self.mate[v] == NONE {
                if let Some(&w) = self.adj[v].iter().find(|&&w| self.mate[w] == NONE) {
                    self.mate[v] = w;
                    self.mate[w] = v;
                }
            }
        }
        for root in 0..n {
            if self.mate[root] != NONE {
                continue;
            }
            if let Some(mut v) = self.find_augmenting_path(root) {
                while v != NONE {
                    let pv = self.parent[v];
                    let next = self.mate[pv];
                    self.mate[v] = pv;
                    self.mate[pv] = v;
                    v = next;
                }
            }
        }
        self.mate
    }

    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.adj.len()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    /// BFS over alternating paths from `root`; returns the free endpoint of
    /// an augmenting path, with `parent` links describing it.
    fn find_augmenting_path(&mut self, root: usize) -> Option<usize> {
        let n = self.adj.len();
        self.used.iter_mut().for_each(|x| *x = false);
        self.parent.iter_mut().for_each(|x| *x = NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        self.queue.clear();
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for idx in 0..self.adj[v].len() {
                let to = self.adj[v][idx];
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lca(v, to);
                    self.in_blossom.iter_mut().for_each(|x| *x = false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return Some(to);
                    }
                    let next = self.mate[to];
                    self.used[next] = true;
                    self.queue.push_back(next);
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, path};
    use proptest::prelude::*;

    /// Exponential reference: largest subset of edges that is a matching.
    fn brute_force_matching_number(g: &Graph) -> usize {
        let edges: Vec<_> = g.edges().collect();
        fn go(edges: &[(usize, usize)], i: usize, used: u64) -> usize {
            if i == edges.len() {
                return 0;
            }
            let skip = go(edges, i + 1, used);
            let (u, v) = edges[i];
            let mask = (1u64 << u) | (1u64 << v);
            if used & mask == 0 {
                skip.max(1 + go(edges, i + 1, used | mask))
            } else {
                skip
            }
        }
        go(&edges, 0, 0)
    }

    #[test]
    fn small_named_graphs() {
        assert_eq!(max_matching(&cycle(5)).len(), 2);
        assert_eq!(max_matching(&Graph::new(4)).len(), 0);
        assert_eq!(max_matching(&complete(7)).len(), 3);
        assert_eq!(max_matching(&path(6)).len(), 3);
    }

    #[test]
    fn blossom_is_needed() {
        // triangle with a pendant path; greedy picks badly without blossoms
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (0, 5)]).unwrap();
        let m = max_matching(&g);
        assert_eq!(m.len(), 3);
        assert!(m.is_valid_in(&g));
    }

    #[test]
    fn factor_critical_examples() {
        assert!(is_factor_critical(&cycle(5)));
        assert!(!is_factor_critical(&path(3)));
        assert!(!is_factor_critical(&cycle(4)));
        assert!(is_factor_critical(&complete(5)));
        assert!(is_factor_critical(&Graph::new(1)));
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (0..=max_n).prop_flat_map(|n| {
            let pairs = n * n.saturating_sub(1) / 2;
            (Just(n), proptest::collection::vec(any::<bool>(), pairs))
        })
        .prop_map(|(n, bits)| {
            let mut g = Graph::new(n);
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[k] {
                        g.add_edge(u, v);
                    }
                    k += 1;
                }
            }
            g
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn matches_brute_force(g in arb_graph(10)) {
            let m = max_matching(&g);
            prop_assert!(m.is_valid_in(&g));
            prop_assert_eq!(m.len(), brute_force_matching_number(&g));
        }

        #[test]
        fn factor_critical_implies_near_perfect(g in arb_graph(9)) {
            if is_factor_critical(&g) {
                prop_assert_eq!(g.n() % 2, 1);
                prop_assert_eq!(2 * max_matching(&g).len(), g.n() - 1);
            }
        }
    }
}
