//! Symmetries of a partially fixed instance.
//!
//! A search node is viewed as an edge-colored complete graph: every vertex
//! pair is `FixedOne`, `FixedZero` or `Free`, and vertices carry a class
//! label. Vertex permutations preserving both colorings map feasible
//! completions to feasible completions with the same edge count, so orbits
//! of `Free` pairs under such permutations are exactly what orbital
//! branching needs.
//!
//! Generators are found with partition refinement and individualization:
//! a first path of individualizations down to a discrete partition, then
//! for every level (deepest first) a search for automorphisms mapping the
//! individualized vertex to each candidate not yet in its orbit. Every
//! generator is checked explicitly before use, so a time-boxed search
//! still returns a valid (sub)group.

use std::time::Instant;

use serde::{Deserialize, Serialize};

/// Color of a vertex pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeColor {
    FixedOne,
    FixedZero,
    Free,
}

/// Edge- and vertex-colored complete graph on at most 64 vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredModel {
    n: usize,
    vertex_color: Vec<u32>,
    one: Vec<u64>,
    zero: Vec<u64>,
}

impl ColoredModel {
    /// All pairs `Free`.
    pub fn new(vertex_color: Vec<u32>) -> Self {
        let n = vertex_color.len();
        assert!(n <= 64, "colored models support at most 64 vertices");
        ColoredModel {
            n,
            vertex_color,
            one: vec![0; n],
            zero: vec![0; n],
        }
    }

    /// Builds a model from fixed-one / fixed-zero adjacency masks.
    pub fn from_masks(vertex_color: Vec<u32>, one: &[u64], zero: &[u64]) -> Self {
        let mut m = ColoredModel::new(vertex_color);
        m.one.copy_from_slice(&one[..m.n]);
        m.zero.copy_from_slice(&zero[..m.n]);
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertex_color(&self, v: usize) -> u32 {
        self.vertex_color[v]
    }

    pub fn set_edge_color(&mut self, u: usize, v: usize, color: EdgeColor) {
        assert!(u != v && u < self.n && v < self.n);
        let (bu, bv) = (1u64 << u, 1u64 << v);
        self.one[u] &= !bv;
        self.one[v] &= !bu;
        self.zero[u] &= !bv;
        self.zero[v] &= !bu;
        match color {
            EdgeColor::FixedOne => {
                self.one[u] |= bv;
                self.one[v] |= bu;
            }
            EdgeColor::FixedZero => {
                self.zero[u] |= bv;
                self.zero[v] |= bu;
            }
            EdgeColor::Free => {}
        }
    }

    pub fn edge_color(&self, u: usize, v: usize) -> EdgeColor {
        if self.one[u] >> v & 1 == 1 {
            EdgeColor::FixedOne
        } else if self.zero[u] >> v & 1 == 1 {
            EdgeColor::FixedZero
        } else {
            EdgeColor::Free
        }
    }

    pub fn free_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.edge_color(u, v) == EdgeColor::Free {
                    out.push((u, v));
                }
            }
        }
        out
    }
}

/// A vertex permutation `v ↦ perm[v]`.
pub type Permutation = Vec<usize>;

/// True iff `perm` is a permutation preserving vertex and edge colors.
pub fn is_automorphism(model: &ColoredModel, perm: &[usize]) -> bool {
    let n = model.n;
    if perm.len() != n {
        return false;
    }
    let mut seen = 0u64;
    for &p in perm {
        if p >= n || seen >> p & 1 == 1 {
            return false;
        }
        seen |= 1 << p;
    }
    (0..n).all(|v| {
        model.vertex_color[v] == model.vertex_color[perm[v]]
            && map_mask(model.one[v], perm) == model.one[perm[v]]
            && map_mask(model.zero[v], perm) == model.zero[perm[v]]
    })
}

fn map_mask(mut mask: u64, perm: &[usize]) -> u64 {
    let mut out = 0;
    while mask != 0 {
        let b = mask.trailing_zeros() as usize;
        mask &= mask - 1;
        out |= 1u64 << perm[b];
    }
    out
}

/// Generators together with whether the search ran to completion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automorphisms {
    pub generators: Vec<Permutation>,
    /// False when the deadline cut the search short; the generators then
    /// span a subgroup of the full color-preserving group.
    pub complete: bool,
}

/// Ordered partition of the vertices, cells as bitmasks, with a hash of
/// the refinement history that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Partition {
    cells: Vec<u64>,
    trace: u64,
}

fn mix(h: u64, x: u64) -> u64 {
    (h ^ x).wrapping_mul(0x9e37_79b9_7f4a_7c15).rotate_left(29)
}

impl Partition {
    fn first_nonsingleton(&self) -> Option<usize> {
        self.cells.iter().position(|c| c.count_ones() > 1)
    }

    fn is_discrete(&self, n: usize) -> bool {
        self.cells.len() == n
    }

    fn individualize(&self, v: usize) -> Partition {
        let bit = 1u64 << v;
        let mut cells = Vec::with_capacity(self.cells.len() + 8);
        for &c in &self.cells {
            if c & bit != 0 && c != bit {
                cells.push(bit);
                cells.push(c & !bit);
            } else {
                cells.push(c);
            }
        }
        Partition { cells, trace: self.trace }
    }

    fn leaf_order(&self) -> Vec<usize> {
        self.cells.iter().map(|c| c.trailing_zeros() as usize).collect()
    }
}

struct Refiner<'a> {
    model: &'a ColoredModel,
}

impl Refiner<'_> {
    fn initial(&self) -> Partition {
        let mut colors: Vec<u32> = self.model.vertex_color.clone();
        colors.sort_unstable();
        colors.dedup();
        let mut trace = 0;
        let cells: Vec<u64> = colors
            .iter()
            .map(|&col| {
                let cell = (0..self.model.n)
                    .filter(|&v| self.model.vertex_color[v] == col)
                    .fold(0u64, |m, v| m | 1 << v);
                trace = mix(trace, (col as u64) << 8 | cell.count_ones() as u64);
                cell
            })
            .collect();
        let queue = cells.clone();
        self.refine(Partition { cells, trace }, queue)
    }

    /// Individualizes `v` in an equitable partition and refines.
    fn individualize(&self, p: &Partition, v: usize) -> Partition {
        let mut queue = Vec::with_capacity(2 * self.model.n);
        queue.push(1 << v);
        self.refine(p.individualize(v), queue)
    }

    /// Coarsest equitable refinement reachable by splitting against the
    /// cells in `queue` and every fragment produced on the way. Fragments
    /// are ordered by their counts, so the result and its trace commute
    /// with automorphisms.
    fn refine(&self, mut p: Partition, mut queue: Vec<u64>) -> Partition {
        let (one, zero) = (&self.model.one, &self.model.zero);
        let mut head = 0;
        while head < queue.len() && !p.is_discrete(self.model.n) {
            let w = queue[head];
            head += 1;
            let mut i = 0;
            while i < p.cells.len() {
                let x = p.cells[i];
                if x & (x - 1) == 0 {
                    i += 1;
                    continue;
                }
                let key = |v: usize| (one[v] & w).count_ones() << 8 | (zero[v] & w).count_ones();
                let k0 = key(x.trailing_zeros() as usize);
                if iter_bits(x).all(|v| key(v) == k0) {
                    i += 1;
                    continue;
                }
                let mut keys = [(0u32, 0usize); 64];
                let mut len = 0;
                for v in iter_bits(x) {
                    keys[len] = (key(v), v);
                    len += 1;
                }
                let keys = &mut keys[..len];
                keys.sort_unstable();
                let mut frags = [0u64; 64];
                let mut nf = 0;
                let mut current = 0u64;
                for j in 0..len {
                    if j > 0 && keys[j].0 != keys[j - 1].0 {
                        frags[nf] = current;
                        nf += 1;
                        current = 0;
                    }
                    current |= 1 << keys[j].1;
                    if j + 1 == len || keys[j].0 != keys[j + 1].0 {
                        p.trace = mix(p.trace, (i as u64) << 40 | (keys[j].0 as u64) << 8 | current.count_ones() as u64);
                    }
                }
                frags[nf] = current;
                nf += 1;
                queue.extend_from_slice(&frags[..nf]);
                p.cells.splice(i..=i, frags[..nf].iter().copied());
                i += nf;
            }
        }
        p
    }

    fn certificate(&self, p: &Partition) -> u64 {
        mix(p.trace, p.cells.len() as u64)
    }
}

fn iter_bits(mut mask: u64) -> impl Iterator<Item = usize> {
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

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        // smaller root wins so class roots are deterministic
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

struct Level {
    partition: Partition,
    cert: u64,
    /// Cell index individualized on the first path (None at the leaf).
    target: Option<usize>,
}

struct Search<'a> {
    refiner: Refiner<'a>,
    levels: Vec<Level>,
    leaf: Vec<usize>,
    deadline: Option<Instant>,
    timed_out: bool,
    steps: u64,
}

impl Search<'_> {
    fn out_of_time(&mut self) -> bool {
        if self.timed_out {
            return true;
        }
        self.steps += 1;
        if let Some(deadline) = self.deadline {
            if self.steps % 16 == 0 && Instant::now() >= deadline {
                self.timed_out = true;
            }
        }
        self.timed_out
    }

    /// Depth-first search for a leaf equivalent to the first-path leaf.
    /// `p` sits at `level` and has already been refined.
    fn find_automorphism(&mut self, level: usize, p: Partition) -> Option<Permutation> {
        if self.out_of_time() {
            return None;
        }
        if self.refiner.certificate(&p) != self.levels[level].cert {
            return None;
        }
        let Some(target) = self.levels[level].target else {
            let other = p.leaf_order();
            let mut perm = vec![0; self.leaf.len()];
            for (a, b) in self.leaf.iter().zip(&other) {
                perm[*a] = *b;
            }
            return is_automorphism(self.refiner.model, &perm).then_some(perm);
        };
        let cell = p.cells[target];
        for x in iter_bits(cell) {
            let child = self.refiner.individualize(&p, x);
            if let Some(perm) = self.find_automorphism(level + 1, child) {
                return Some(perm);
            }
            if self.timed_out {
                return None;
            }
        }
        None
    }
}

/// Generators of the color-preserving automorphism group, optionally
/// time-boxed.
pub fn automorphisms_with_deadline(model: &ColoredModel, deadline: Option<Instant>) -> Automorphisms {
    let refiner = Refiner { model };
    let mut levels = Vec::new();
    let mut p = refiner.initial();
    if p.is_discrete(model.n) {
        return Automorphisms { generators: Vec::new(), complete: true };
    }
    let mut path = Vec::new();
    loop {
        let cert = refiner.certificate(&p);
        match p.first_nonsingleton() {
            None => {
                levels.push(Level { partition: p.clone(), cert, target: None });
                break;
            }
            Some(t) => {
                let v = p.cells[t].trailing_zeros() as usize;
                path.push(v);
                let next = refiner.individualize(&p, v);
                levels.push(Level { partition: p, cert, target: Some(t) });
                p = next;
            }
        }
    }
    let leaf = p.leaf_order();
    let mut search = Search {
        refiner,
        levels,
        leaf,
        deadline,
        timed_out: false,
        steps: 0,
    };
    let n = model.n;
    let mut generators: Vec<Permutation> = Vec::new();
    let mut orbits = UnionFind::new(n);
    // swaps of twins are automorphisms; take them directly
    for class in twin_classes(model) {
        let first = class.trailing_zeros() as usize;
        for w in iter_bits(class & (class - 1)) {
            let mut perm: Permutation = (0..n).collect();
            perm.swap(first, w);
            orbits.union(first, w);
            generators.push(perm);
        }
    }
    for k in (0..path.len()).rev() {
        let v = path[k];
        let target = search.levels[k].target.unwrap();
        let cell = search.levels[k].partition.cells[target];
        for w in iter_bits(cell) {
            if w == v || orbits.find(w) == orbits.find(v) {
                continue;
            }
            let start = search.refiner.individualize(&search.levels[k].partition, w);
            if let Some(perm) = search.find_automorphism(k + 1, start) {
                for (a, &b) in perm.iter().enumerate() {
                    orbits.union(a, b);
                }
                generators.push(perm);
            }
            if search.timed_out {
                return Automorphisms {
                    generators,
                    complete: false,
                };
            }
        }
    }
    Automorphisms {
        generators,
        complete: true,
    }
}

/// Generators of the full color-preserving automorphism group.
pub fn automorphism_generators(model: &ColoredModel) -> Vec<Permutation> {
    automorphisms_with_deadline(model, None).generators
}

/// Partition of the `Free` pairs into orbits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitPartition {
    /// Each class sorted ascending; classes ordered by representative.
    pub classes: Vec<Vec<(usize, usize)>>,
}

impl OrbitPartition {
    /// Lexicographically smallest pair of class `i`.
    pub fn representative(&self, i: usize) -> (usize, usize) {
        self.classes[i][0]
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Index of a largest class (first such by representative).
    pub fn largest(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, c) in self.classes.iter().enumerate() {
            if best.is_none_or(|b| c.len() > self.classes[b].len()) {
                best = Some(i);
            }
        }
        best
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }
}

fn pair_index(n: usize, u: usize, v: usize) -> usize {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    a * n + b
}

/// Orbits of the `Free` pairs under the group generated by `generators`.
pub fn pair_orbits(model: &ColoredModel, generators: &[Permutation]) -> OrbitPartition {
    let (free, mut uf) = pair_union(model, generators);
    let n = model.n;
    let mut slot = vec![usize::MAX; n * n];
    let mut classes: Vec<Vec<(usize, usize)>> = Vec::new();
    for u in 0..n {
        for v in iter_bits(free[u] & above(u)) {
            let root = uf.find(pair_index(n, u, v));
            if slot[root] == usize::MAX {
                slot[root] = classes.len();
                classes.push(Vec::new());
            }
            classes[slot[root]].push((u, v));
        }
    }
    // pairs were visited in order, so classes are sorted and ordered by
    // their first pair
    OrbitPartition { classes }
}

/// The orbit `OrbitPartition::largest` would pick after breaking size
/// ties by `score` of the representative (higher first), then by the
/// smaller representative. None when there are no free pairs.
pub fn best_pair_orbit(
    model: &ColoredModel,
    generators: &[Permutation],
    score: impl Fn((usize, usize)) -> usize,
) -> Option<Vec<(usize, usize)>> {
    let (free, mut uf) = pair_union(model, generators);
    let n = model.n;
    let mut size = vec![0usize; n * n];
    let mut first = Vec::new();
    for u in 0..n {
        for v in iter_bits(free[u] & above(u)) {
            let root = uf.find(pair_index(n, u, v));
            if size[root] == 0 {
                first.push((root, (u, v)));
            }
            size[root] += 1;
        }
    }
    let (root, _) = first.iter().copied().max_by(|&(ra, a), &(rb, b)| {
        size[ra].cmp(&size[rb]).then(score(a).cmp(&score(b))).then(b.cmp(&a))
    })?;
    let mut orbit = Vec::with_capacity(size[root]);
    for u in 0..n {
        for v in iter_bits(free[u] & above(u)) {
            if uf.find(pair_index(n, u, v)) == root {
                orbit.push((u, v));
            }
        }
    }
    Some(orbit)
}

/// Free masks and the union of pairs under the generators.
fn pair_union(model: &ColoredModel, generators: &[Permutation]) -> (Vec<u64>, UnionFind) {
    let n = model.n;
    let all = if n == 64 { !0 } else { (1u64 << n) - 1 };
    let free: Vec<u64> = (0..n).map(|u| all & !(model.one[u] | model.zero[u] | 1 << u)).collect();
    let mut uf = UnionFind::new(n * n);
    for g in generators {
        let moved = (0..n).filter(|&v| g[v] != v).fold(0u64, |m, v| m | 1 << v);
        // pairs with both ends fixed by g map to themselves
        for u in 0..n {
            let mask = if moved >> u & 1 == 1 { free[u] } else { free[u] & moved };
            for v in iter_bits(mask & above(u)) {
                uf.union(pair_index(n, u, v), pair_index(n, g[u], g[v]));
            }
        }
    }
    (free, uf)
}

fn above(u: usize) -> u64 {
    if u >= 63 {
        0
    } else {
        !0u64 << (u + 1)
    }
}

/// Vertex orbits under the group generated by `generators`, as masks.
pub fn vertex_orbits(n: usize, generators: &[Permutation]) -> Vec<u64> {
    let mut uf = UnionFind::new(n);
    for g in generators {
        for (a, &b) in g.iter().enumerate() {
            uf.union(a, b);
        }
    }
    let mut masks = std::collections::BTreeMap::<usize, u64>::new();
    for v in 0..n {
        *masks.entry(uf.find(v)).or_default() |= 1 << v;
    }
    masks.into_values().collect()
}

/// Classes of vertices any two of which can be swapped: equal colors and
/// equal fixed rows apart from each other. Swaps compose, so the classes
/// partition the vertices and the product of their symmetric groups is a
/// subgroup of the automorphism group.
pub fn twin_classes(model: &ColoredModel) -> Vec<u64> {
    let n = model.n;
    let mut assigned = 0u64;
    let mut classes = Vec::new();
    for u in 0..n {
        if assigned >> u & 1 == 1 {
            continue;
        }
        let mut class = 1u64 << u;
        for v in u + 1..n {
            if assigned >> v & 1 == 1 || model.vertex_color[v] != model.vertex_color[u] {
                continue;
            }
            let mask = !(1u64 << u | 1u64 << v);
            if (model.one[u] ^ model.one[v]) & mask == 0 && (model.zero[u] ^ model.zero[v]) & mask == 0 {
                class |= 1 << v;
            }
        }
        assigned |= class;
        classes.push(class);
    }
    classes
}

/// Largest orbit of `Free` pairs under the twin subgroup, with ties broken
/// by `score` of the representative (higher first) and then by the smaller
/// representative. Pairs between two classes form one orbit, as do the
/// pairs inside one class. None when every orbit is a singleton.
pub fn largest_twin_orbit(
    model: &ColoredModel,
    score: impl Fn((usize, usize)) -> usize,
) -> Option<Vec<(usize, usize)>> {
    let classes = twin_classes(model);
    let first = |m: u64| m.trailing_zeros() as usize;
    let mut best: Option<(usize, usize, (usize, usize), u64, u64)> = None;
    for (i, &a) in classes.iter().enumerate() {
        for &b in &classes[i..] {
            let size = if a == b {
                let k = a.count_ones() as usize;
                k * k.saturating_sub(1) / 2
            } else {
                (a.count_ones() * b.count_ones()) as usize
            };
            if size < 2 {
                continue;
            }
            let rep = if a == b {
                let u = first(a);
                (u, first(a & !(1 << u)))
            } else {
                let (u, v) = (first(a), first(b));
                (u.min(v), u.max(v))
            };
            if model.edge_color(rep.0, rep.1) != EdgeColor::Free {
                continue;
            }
            let sc = score(rep);
            let better = best.is_none_or(|(bs, bsc, brep, _, _)| (size, sc, std::cmp::Reverse(rep)) > (bs, bsc, std::cmp::Reverse(brep)));
            if better {
                best = Some((size, sc, rep, a, b));
            }
        }
    }
    let (_, _, _, a, b) = best?;
    let members = |m: u64| (0..model.n).filter(move |&v| m >> v & 1 == 1);
    let mut orbit = Vec::new();
    for u in members(a) {
        for v in members(b) {
            if (a != b && u != v) || u < v {
                orbit.push((u.min(v), u.max(v)));
            }
        }
    }
    orbit.sort_unstable();
    orbit.dedup();
    Some(orbit)
}

/// Orbits of `Free` pairs under the full color-preserving group.
pub fn orbits(model: &ColoredModel) -> OrbitPartition {
    pair_orbits(model, &automorphism_generators(model))
}
