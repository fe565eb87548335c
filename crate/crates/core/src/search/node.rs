//! Partial assignments of the edge variables and their propagation.

use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::symmetry::{ColoredModel, EdgeColor};

/// Largest vertex count a node can hold (one `u64` mask per vertex).
pub const MAX_VERTICES: usize = 64;

/// Degree constraint attached to a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VertexClass {
    ExactlyD,
    AtMostDMinus1,
    AtMostD,
}

impl VertexClass {
    /// Inclusive degree range for degree bound `d`.
    pub fn range(self, d: usize) -> (usize, usize) {
        match self {
            VertexClass::ExactlyD => (d, d),
            VertexClass::AtMostDMinus1 => (0, d.saturating_sub(1)),
            VertexClass::AtMostD => (0, d),
        }
    }

    fn code(self) -> u32 {
        match self {
            VertexClass::ExactlyD => 0,
            VertexClass::AtMostDMinus1 => 1,
            VertexClass::AtMostD => 2,
        }
    }
}

/// Fixed-one set `F1`, fixed-zero set `F0` and per-vertex degree classes.
///
/// Besides the class, each vertex carries an extra degree window
/// `[lo_extra, hi_extra]` that propagation may tighten, and vertices in
/// `ordered` must end with degrees non-increasing in index order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SearchNode {
    n: usize,
    one: [u64; MAX_VERTICES],
    zero: [u64; MAX_VERTICES],
    class: [VertexClass; MAX_VERTICES],
    lo_extra: [u8; MAX_VERTICES],
    hi_extra: [u8; MAX_VERTICES],
    ordered: u64,
    depth: usize,
}

impl std::fmt::Debug for SearchNode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut ones = Vec::new();
        let mut zeros = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                match self.pair(u, v) {
                    EdgeColor::FixedOne => ones.push((u, v)),
                    EdgeColor::FixedZero => zeros.push((u, v)),
                    EdgeColor::Free => {}
                }
            }
        }
        f.debug_struct("SearchNode")
            .field("n", &self.n)
            .field("f1", &ones)
            .field("f0", &zeros)
            .field("class", &&self.class[..self.n])
            .field("ordered", &format_args!("{:#x}", self.ordered))
            .field("depth", &self.depth)
            .finish()
    }
}

impl SearchNode {
    /// Root node: every pair free.
    pub fn root(classes: &[VertexClass]) -> Self {
        let n = classes.len();
        assert!(n <= MAX_VERTICES, "at most {MAX_VERTICES} vertices supported");
        let mut class = [VertexClass::AtMostD; MAX_VERTICES];
        class[..n].copy_from_slice(classes);
        SearchNode {
            n,
            one: [0; MAX_VERTICES],
            zero: [0; MAX_VERTICES],
            class,
            lo_extra: [0; MAX_VERTICES],
            hi_extra: [u8::MAX; MAX_VERTICES],
            ordered: 0,
            depth: 0,
        }
    }

    /// Root of the basic formulation: `n` vertices of class `AtMostD`.
    pub fn basic_root(n: usize) -> Self {
        SearchNode::root(&vec![VertexClass::AtMostD; n])
    }

    /// Requires the final degrees of `vertices` to be non-increasing in
    /// index order.
    pub fn with_degree_order(mut self, vertices: &[usize]) -> Self {
        for &v in vertices {
            assert!(v < self.n);
            self.ordered |= 1 << v;
        }
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn class(&self, v: usize) -> VertexClass {
        self.class[v]
    }

    pub fn ordered_mask(&self) -> u64 {
        self.ordered
    }

    pub(crate) fn all_mask(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    pub fn pair(&self, u: usize, v: usize) -> EdgeColor {
        if self.one[u] >> v & 1 == 1 {
            EdgeColor::FixedOne
        } else if self.zero[u] >> v & 1 == 1 {
            EdgeColor::FixedZero
        } else {
            EdgeColor::Free
        }
    }

    /// Fixes `{u, v}` to 1 without propagating. Returns false (leaving the
    /// node unchanged) if the pair is already fixed to 0.
    pub fn fix_one(&mut self, u: usize, v: usize) -> bool {
        assert!(u != v && u < self.n && v < self.n);
        if self.zero[u] >> v & 1 == 1 {
            return false;
        }
        self.one[u] |= 1 << v;
        self.one[v] |= 1 << u;
        true
    }

    /// Fixes `{u, v}` to 0 without propagating. Returns false if the pair
    /// is already fixed to 1.
    pub fn fix_zero(&mut self, u: usize, v: usize) -> bool {
        assert!(u != v && u < self.n && v < self.n);
        if self.one[u] >> v & 1 == 1 {
            return false;
        }
        self.zero[u] |= 1 << v;
        self.zero[v] |= 1 << u;
        true
    }

    pub fn one_mask(&self, v: usize) -> u64 {
        self.one[v]
    }

    pub fn zero_mask(&self, v: usize) -> u64 {
        self.zero[v]
    }

    pub fn free_mask(&self, v: usize) -> u64 {
        self.all_mask() & !self.one[v] & !self.zero[v] & !(1u64 << v)
    }

    pub fn f1_degree(&self, v: usize) -> usize {
        self.one[v].count_ones() as usize
    }

    pub fn free_degree(&self, v: usize) -> usize {
        self.free_mask(v).count_ones() as usize
    }

    /// `|F1|`.
    pub fn edge_count(&self) -> usize {
        self.one[..self.n].iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn free_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            let mut m = self.free_mask(u) & !((2u64 << u) - 1);
            while m != 0 {
                let v = m.trailing_zeros() as usize;
                m &= m - 1;
                out.push((u, v));
            }
        }
        out
    }

    pub fn free_pair_count(&self) -> usize {
        (0..self.n).map(|v| self.free_degree(v)).sum::<usize>() / 2
    }

    /// Effective inclusive degree window of `v` for degree bound `d`.
    pub fn degree_window(&self, v: usize, d: usize) -> (usize, usize) {
        let (lo, hi) = self.class[v].range(d);
        (
            lo.max(self.lo_extra[v] as usize),
            hi.min(self.hi_extra[v] as usize),
        )
    }

    /// Largest degree `v` can still reach.
    pub fn max_reachable(&self, v: usize, d: usize) -> usize {
        let (_, hi) = self.degree_window(v, d);
        hi.min(self.f1_degree(v) + self.free_degree(v))
    }

    /// The graph formed by `F1`.
    pub fn to_graph(&self) -> Graph {
        let mut g = Graph::new(self.n);
        for u in 0..self.n {
            let mut m = self.one[u] & !((2u64 << u) - 1);
            while m != 0 {
                let v = m.trailing_zeros() as usize;
                m &= m - 1;
                g.add_edge(u, v);
            }
        }
        g
    }

    /// Edge-colored model whose color-preserving permutations are
    /// symmetries of this node's subproblem.
    pub fn colored_model(&self, d: usize) -> ColoredModel {
        let mut rank = 0u32;
        let colors = (0..self.n)
            .map(|v| {
                let (lo, hi) = self.degree_window(v, d);
                let chain = if self.ordered >> v & 1 == 1 {
                    rank += 1;
                    rank
                } else {
                    0
                };
                chain << 20 | self.class[v].code() << 16 | (lo as u32) << 8 | hi as u32
            })
            .collect();
        ColoredModel::from_masks(colors, &self.one[..self.n], &self.zero[..self.n])
    }

    pub(crate) fn child(&self) -> SearchNode {
        let mut c = self.clone();
        c.depth += 1;
        c
    }
}

/// Result of propagation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Propagation {
    Node(SearchNode),
    Conflict,
}

/// Fixed point of the triangle, saturation and forced-completion rules,
/// plus the degree-order chain and handshake parity.
pub fn propagate(node: &SearchNode, d: usize) -> Propagation {
    let mut out = node.clone();
    if propagate_in_place(&mut out, d, None) {
        Propagation::Node(out)
    } else {
        Propagation::Conflict
    }
}

/// Degree-capacity bound: `|F1| + ⌊Σ_v min(hi(v) − deg_F1(v), free(v)) / 2⌋`.
pub fn bound(node: &SearchNode, d: usize) -> usize {
    let mut slack = 0;
    for v in 0..node.n {
        let (_, hi) = node.degree_window(v, d);
        slack += hi.saturating_sub(node.f1_degree(v)).min(node.free_degree(v));
    }
    node.edge_count() + slack / 2
}

/// Propagates in place; false on conflict (the node is then garbage).
///
/// With `target = Some(t)`, completions with fewer than `t` edges are
/// discarded as well: every vertex must keep enough degree for the
/// degree sum to reach `2t`.
pub(crate) fn propagate_in_place(node: &mut SearchNode, d: usize, target: Option<usize>) -> bool {
    let mut p = Propagator {
        all: node.all_mask(),
        node,
        d,
        dirty: 0,
    };
    p.dirty = p.all;
    p.run(target)
}

struct Propagator<'a> {
    node: &'a mut SearchNode,
    d: usize,
    all: u64,
    dirty: u64,
}

fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let b = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(b)
        }
    })
}

impl Propagator<'_> {
    fn set_zero(&mut self, u: usize, v: usize) -> bool {
        let n = &mut *self.node;
        if n.zero[u] >> v & 1 == 1 {
            return true;
        }
        if n.one[u] >> v & 1 == 1 {
            return false;
        }
        n.zero[u] |= 1 << v;
        n.zero[v] |= 1 << u;
        self.dirty |= 1 << u | 1 << v;
        true
    }

    fn set_one(&mut self, u: usize, v: usize) -> bool {
        let n = &mut *self.node;
        if n.one[u] >> v & 1 == 1 {
            return true;
        }
        if n.zero[u] >> v & 1 == 1 || n.one[u] & n.one[v] != 0 {
            return false;
        }
        n.one[u] |= 1 << v;
        n.one[v] |= 1 << u;
        let (nu, nv) = (n.one[u] & !(1 << v), n.one[v] & !(1 << u));
        self.dirty |= 1 << u | 1 << v;
        bits(nv).all(|w| self.set_zero(u, w)) && bits(nu).all(|w| self.set_zero(v, w))
    }

    /// Triangle rule over the initial `F1`.
    fn close_triangles(&mut self) -> bool {
        for v in 0..self.node.n {
            let nv = self.node.one[v];
            for u in bits(nv) {
                if self.node.one[u] & nv != 0 {
                    return false;
                }
                if !bits(nv & !(1 << u)).all(|w| self.set_zero(u, w)) {
                    return false;
                }
            }
        }
        true
    }

    fn degree_rules(&mut self) -> bool {
        while self.dirty != 0 {
            let v = self.dirty.trailing_zeros() as usize;
            self.dirty &= self.dirty - 1;
            let f1 = self.node.one[v].count_ones() as usize;
            let free = self.all & !self.node.one[v] & !self.node.zero[v] & !(1u64 << v);
            let fr = free.count_ones() as usize;
            let (lo, hi) = self.node.degree_window(v, self.d);
            if f1 > hi || f1 + fr < lo {
                return false;
            }
            if fr == 0 {
                continue;
            }
            if f1 == hi {
                if !bits(free).all(|w| self.set_zero(v, w)) {
                    return false;
                }
            } else if f1 + fr == lo && !bits(free).all(|w| self.set_one(v, w)) {
                return false;
            }
        }
        true
    }

    /// Adjacent vertices have disjoint neighborhoods, so for `uv ∈ F1` both
    /// remaining demands must fit in the union of their candidates. When it
    /// fits exactly, a candidate of only one endpoint is forced onto it.
    fn edge_rule(&mut self) -> bool {
        for u in 0..self.node.n {
            for v in bits(self.node.one[u] & !((2u64 << u) - 1)) {
                let pu = !self.node.zero[u] & self.all & !(1 << u | 1 << v);
                let pv = !self.node.zero[v] & self.all & !(1 << u | 1 << v);
                let room = (pu | pv).count_ones() as usize;
                let need = self.reachable(u).0 + self.reachable(v).0 - 2;
                if need > room {
                    return false;
                }
                if need == room {
                    let only_u = pu & !pv & !self.node.one[u];
                    let only_v = pv & !pu & !self.node.one[v];
                    if !bits(only_u).all(|w| self.set_one(u, w)) || !bits(only_v).all(|w| self.set_one(v, w)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// New neighbors of `v` must be independent, so a matching of `F1`
    /// edges among its free candidates caps how many it can still gain.
    fn independence_rule(&mut self) -> bool {
        for v in 0..self.node.n {
            let cand = self.all & !self.node.one[v] & !self.node.zero[v] & !(1u64 << v);
            let mut rest = cand;
            let mut matched = 0;
            while rest != 0 {
                let a = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let partners = self.node.one[a] & rest;
                if partners != 0 {
                    rest &= !(1u64 << partners.trailing_zeros());
                    matched += 1;
                }
            }
            if matched == 0 {
                continue;
            }
            let top = self.node.f1_degree(v) + cand.count_ones() as usize - matched;
            if top < self.reachable(v).0 {
                return false;
            }
            self.tighten_hi(v, top);
        }
        true
    }

    /// A shortest odd cycle `C` of length `2k + 1 ≥ 5` has no chords, so a
    /// vertex off `C` sees at most `k` of its vertices and the degrees on
    /// `C` sum to at most `2(2k + 1) + k(n − 2k − 1)`. When every vertex
    /// of `H` must have degree above that average for all `k`, `H` spans no
    /// odd cycle: `F1` on `H` has to be bipartite, and pairs on the same
    /// side of one of its components are zero. One or two vertices below
    /// the threshold can join `H` if cycles through them still exceed the
    /// sum.
    fn bipartite_rule(&mut self) -> bool {
        let n = self.node.n;
        let caps: Vec<(usize, usize)> = (2..)
            .take_while(|k| 2 * k < n)
            .map(|k| (k, 2 * (2 * k + 1) + k * (n - 2 * k - 1)))
            .collect();
        let Some(floor) = caps.iter().map(|&(k, cap)| cap / (2 * k + 1) + 1).max() else {
            return true;
        };
        let lo: Vec<usize> = (0..n).map(|v| self.reachable(v).0).collect();
        let high = (0..n).filter(|&v| lo[v] >= floor).fold(0u64, |m, v| m | 1 << v);
        if high == 0 {
            return true;
        }
        if !self.two_color(high) || !self.balanced(high) {
            return false;
        }
        let least = bits(high).map(|v| lo[v]).min().unwrap();
        // a shortest odd cycle through `extra` holds 2k + 1 − j vertices of H
        let joins = |extra: &[usize]| {
            caps.iter().all(|&(k, cap)| {
                let mut sum = (2 * k + 1) * least;
                extra.iter().take(2 * k + 1).all(|&w| {
                    sum = sum - least + lo[w];
                    sum > cap
                })
            })
        };
        let low: Vec<usize> = bits(self.all & !high).filter(|&w| joins(&[w])).collect();
        for (i, &w) in low.iter().enumerate() {
            let mask = high | 1 << w;
            if !self.two_color(mask) || !self.balanced(mask) {
                return false;
            }
            for &x in &low[i + 1..] {
                let mask = mask | 1 << x;
                if joins(&[w, x]) && (!self.two_color(mask) || !self.balanced(mask)) {
                    return false;
                }
            }
        }
        true
    }

    /// `F1` on `mask` is bipartite in every completion, and both sides of a
    /// bipartite graph have the same degree sum. Each component of `F1`
    /// may still be flipped, so look for flips under which the side sums
    /// can meet, given every vertex's range of degrees inside `mask`.
    fn balanced(&self, mask: u64) -> bool {
        let node = &*self.node;
        let out = self.all & !mask;
        let range = |v: usize| {
            let (lo, hi) = self.reachable(v);
            let reach = (out & !node.zero[v] & !(1u64 << v)).count_ones() as i32;
            let fixed = (out & node.one[v]).count_ones() as i32;
            ((lo as i32 - reach).max(0), hi as i32 - fixed)
        };
        // per component and side: slack (upper of other side minus lower of
        // this one) for both orientations
        let mut seen = 0u64;
        let mut choices = Vec::new();
        let mut span = 0;
        for s in bits(mask) {
            if seen >> s & 1 == 1 {
                continue;
            }
            let mut side = [1u64 << s, 0];
            let mut current = 1u64 << s;
            let mut parity = 0;
            seen |= current;
            loop {
                let fresh = bits(current).fold(0u64, |m, x| m | node.one[x] & mask) & !seen;
                if fresh == 0 {
                    break;
                }
                parity ^= 1;
                side[parity] |= fresh;
                seen |= fresh;
                current = fresh;
            }
            let sum = |m: u64| bits(m).fold((0, 0), |(l, u), v| {
                let (a, b) = range(v);
                (l + a, u + b)
            });
            let ((l0, u0), (l1, u1)) = (sum(side[0]), sum(side[1]));
            // side 0 in X: X gets (l0,u0), Y gets (l1,u1)
            let keep = (u1 - l0, u0 - l1);
            let flip = (u0 - l1, u1 - l0);
            span += keep.0.abs().max(flip.0.abs());
            choices.push((keep, flip));
        }
        // best[a + span] = largest reachable b-slack with a-slack a
        let width = 2 * span as usize + 1;
        let mut best = vec![i32::MIN; width];
        best[span as usize] = 0;
        for (keep, flip) in choices {
            let mut next = vec![i32::MIN; width];
            for (i, &b) in best.iter().enumerate() {
                if b == i32::MIN {
                    continue;
                }
                for (da, db) in [keep, flip] {
                    let j = i as i32 + da;
                    if (0..width as i32).contains(&j) {
                        let slot = &mut next[j as usize];
                        *slot = (*slot).max(b + db);
                    }
                }
            }
            best = next;
        }
        best[span as usize..].iter().any(|&b| b != i32::MIN && b >= 0)
    }

    /// 2-colors each component of `F1` on `mask`; false on an odd cycle.
    /// Pairs within one side of a component are fixed to zero.
    fn two_color(&mut self, mask: u64) -> bool {
        let mut seen = 0u64;
        for s in bits(mask) {
            if seen >> s & 1 == 1 {
                continue;
            }
            let mut side = [1u64 << s, 0];
            let mut current = 1u64 << s;
            let mut parity = 0;
            seen |= current;
            loop {
                let reach = bits(current).fold(0u64, |m, x| m | self.node.one[x] & mask);
                if reach & side[parity] != 0 {
                    return false;
                }
                let fresh = reach & !seen;
                if fresh == 0 {
                    break;
                }
                parity ^= 1;
                side[parity] |= fresh;
                seen |= fresh;
                current = fresh;
            }
            for part in side {
                for x in bits(part) {
                    let free = part & !self.node.zero[x] & !(1u64 << x);
                    if !bits(free).all(|y| self.set_zero(x, y)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn reachable(&self, v: usize) -> (usize, usize) {
        let (lo, hi) = self.node.degree_window(v, self.d);
        let f1 = self.node.f1_degree(v);
        (lo.max(f1), hi.min(f1 + self.node.free_degree(v)))
    }

    fn tighten_lo(&mut self, v: usize, lo: usize) {
        if lo > self.reachable(v).0 {
            self.node.lo_extra[v] = lo.min(u8::MAX as usize) as u8;
            self.dirty |= 1 << v;
        }
    }

    fn tighten_hi(&mut self, v: usize, hi: usize) {
        if hi < self.reachable(v).1 {
            self.node.hi_extra[v] = hi as u8;
            self.dirty |= 1 << v;
        }
    }

    /// Non-increasing degrees along the ordered chain.
    fn chain(&mut self) {
        let chain: Vec<usize> = bits(self.node.ordered).collect();
        let mut cap = usize::MAX;
        for &v in &chain {
            let (_, hi) = self.reachable(v);
            if cap < hi {
                self.tighten_hi(v, cap);
            }
            cap = cap.min(hi);
        }
        let mut floor = 0;
        for &v in chain.iter().rev() {
            let (lo, _) = self.reachable(v);
            if floor > lo {
                self.tighten_lo(v, floor);
            }
            floor = floor.max(lo);
        }
    }

    fn degree_sums(&self) -> (usize, usize, bool) {
        let (mut min_sum, mut max_sum, mut pinned) = (0, 0, true);
        for v in 0..self.node.n {
            let (lo, hi) = self.reachable(v);
            min_sum += lo;
            max_sum += hi;
            pinned &= lo == hi;
        }
        (min_sum, max_sum, pinned)
    }

    fn run(&mut self, target: Option<usize>) -> bool {
        if !self.close_triangles() {
            return false;
        }
        loop {
            if !self.degree_rules() || !self.edge_rule() || !self.independence_rule() {
                return false;
            }
            if self.dirty != 0 {
                continue;
            }
            if !self.bipartite_rule() {
                return false;
            }
            if self.dirty != 0 {
                continue;
            }
            if self.node.ordered != 0 {
                self.chain();
            }
            let (min_sum, max_sum, pinned) = self.degree_sums();
            if min_sum > max_sum {
                return false;
            }
            // handshake: a fully determined degree sequence must have even sum
            if pinned && max_sum % 2 == 1 {
                return false;
            }
            if let Some(t) = target {
                if max_sum < 2 * t {
                    return false;
                }
                for v in 0..self.node.n {
                    let (_, hi) = self.reachable(v);
                    let need = (2 * t).saturating_sub(max_sum - hi);
                    self.tighten_lo(v, need);
                }
            }
            if self.dirty == 0 {
                return true;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn node_with(n: usize, ones: &[(usize, usize)]) -> SearchNode {
        let mut node = SearchNode::basic_root(n);
        for &(u, v) in ones {
            node.fix_one(u, v);
        }
        node
    }

    fn expect_node(p: Propagation) -> SearchNode {
        match p {
            Propagation::Node(n) => n,
            Propagation::Conflict => panic!("unexpected conflict"),
        }
    }

    #[test]
    fn triangle_rule() {
        let node = expect_node(propagate(&node_with(5, &[(0, 1), (1, 2)]), 4));
        assert_eq!(node.pair(0, 2), EdgeColor::FixedZero);
        assert_eq!(node.pair(0, 3), EdgeColor::Free);
    }

    #[test]
    fn saturation() {
        let node = expect_node(propagate(&node_with(5, &[(0, 1), (0, 2)]), 2));
        for v in 3..5 {
            assert_eq!(node.pair(0, v), EdgeColor::FixedZero);
        }
    }

    #[test]
    fn forced_completion() {
        let mut node = SearchNode::root(&[VertexClass::ExactlyD, VertexClass::AtMostD, VertexClass::AtMostD, VertexClass::AtMostD, VertexClass::AtMostD]);
        node.fix_one(0, 1);
        node.fix_one(0, 2);
        node.fix_zero(0, 3);
        let node = expect_node(propagate(&node, 3));
        assert_eq!(node.pair(0, 4), EdgeColor::FixedOne);
        assert_eq!(node.pair(1, 4), EdgeColor::FixedZero);
    }

    #[test]
    fn unreachable_exact_degree_conflicts() {
        let mut node = SearchNode::root(&[VertexClass::ExactlyD; 4]);
        node.fix_zero(0, 1);
        node.fix_zero(0, 2);
        assert_eq!(propagate(&node, 2), Propagation::Conflict);
    }

    #[test]
    fn odd_regular_is_infeasible_by_parity() {
        let node = SearchNode::root(&[VertexClass::ExactlyD; 17]);
        assert_eq!(propagate(&node, 7), Propagation::Conflict);
        let node = SearchNode::root(&[VertexClass::ExactlyD; 16]);
        assert!(matches!(propagate(&node, 7), Propagation::Node(_)));
    }

    #[test]
    fn dense_exact_degrees_force_a_bipartite_side() {
        // 3-regular triangle-free on 6 vertices is K_{3,3}
        let mut node = SearchNode::root(&[VertexClass::ExactlyD; 6]);
        for i in 0..4 {
            node.fix_one(i, i + 1);
        }
        let node = expect_node(propagate(&node, 3));
        assert_eq!(node.pair(0, 4), EdgeColor::FixedZero);
    }

    #[test]
    fn dense_exact_degrees_reject_a_five_cycle() {
        let mut node = SearchNode::root(&[VertexClass::ExactlyD; 12]);
        for i in 0..5 {
            node.fix_one(i, (i + 1) % 5);
        }
        assert_eq!(propagate(&node, 5), Propagation::Conflict);
        let mut sparse = SearchNode::root(&[VertexClass::ExactlyD; 12]);
        for i in 0..5 {
            sparse.fix_one(i, (i + 1) % 5);
        }
        assert!(matches!(propagate(&sparse, 4), Propagation::Node(_)));
    }

    #[test]
    fn fixed_triangle_conflicts() {
        let node = node_with(4, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(propagate(&node, 3), Propagation::Conflict);
    }

    #[test]
    fn root_bounds() {
        assert_eq!(bound(&SearchNode::basic_root(19), 8), 76);
        assert_eq!(bound(&SearchNode::basic_root(17), 7), 59);
    }

    #[test]
    fn fully_fixed_bound_is_f1() {
        let mut node = node_with(5, &[(0, 1), (1, 2), (2, 3)]);
        for u in 0..5 {
            for v in u + 1..5 {
                if node.pair(u, v) == EdgeColor::Free {
                    node.fix_zero(u, v);
                }
            }
        }
        assert_eq!(bound(&node, 3), 3);
    }

    #[test]
    fn chain_pushes_degrees_both_ways() {
        // deg(0) >= deg(1); vertex 1 already has degree 2 and vertex 0 can
        // only reach 2 and 6
        let mut node = SearchNode::root(&[VertexClass::AtMostD; 7]).with_degree_order(&[0, 1]);
        node.fix_one(1, 3);
        node.fix_one(1, 4);
        for v in [1, 3, 4, 5] {
            node.fix_zero(0, v);
        }
        let node = expect_node(propagate(&node, 3));
        assert_eq!(node.pair(0, 2), EdgeColor::FixedOne);
        assert_eq!(node.pair(0, 6), EdgeColor::FixedOne);
        // and vertex 1 may not grow past 2
        assert_eq!(node.pair(1, 5), EdgeColor::FixedZero);
    }

    #[test]
    fn target_forces_degrees() {
        // 5 vertices, d = 2: reaching 5 edges forces every vertex to degree 2
        let mut node = node_with(5, &[(0, 1)]);
        node.fix_zero(0, 2);
        node.fix_zero(0, 3);
        assert!(propagate_in_place(&mut node, 2, Some(5)));
        assert_eq!(node.pair(0, 4), EdgeColor::FixedOne);
    }
}
