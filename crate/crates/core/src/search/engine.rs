//! Depth-first branch and bound over [`SearchNode`]s.

use std::collections::VecDeque;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::node::{bound, propagate_in_place, SearchNode};
use super::{BranchRule, OrbitDepth};
use crate::graph::Graph;
use crate::symmetry::{automorphisms_with_deadline, best_pair_orbit, largest_twin_orbit};

/// Stack size for search threads; recursion depth is bounded by the pair
/// count, and every frame holds two nodes.
pub(crate) const SEARCH_STACK_BYTES: usize = 256 << 20;

pub(crate) struct EngineConfig {
    pub d: usize,
    pub orbital: bool,
    pub branch_rule: BranchRule,
    pub orbit_depth: OrbitDepth,
    pub orbit_budget: Duration,
    pub twin_orbits: bool,
    /// `F1` at every node is itself feasible (all classes are upper bounds).
    pub f1_is_feasible: bool,
    pub deadline: Option<Instant>,
    pub workers: usize,
}

pub(crate) struct EngineOutcome {
    /// Best solution strictly above the floor, if any.
    pub best: Option<(usize, Graph)>,
    pub timed_out: bool,
    /// Largest bound among nodes abandoned at the deadline.
    pub open_bound: usize,
    pub nodes: u64,
    pub orbit_time: Duration,
    pub orbit_calls: u64,
}

struct Children {
    left: SearchNode,
    right: SearchNode,
    bound: usize,
    /// Produced by an orbital branch.
    symmetric: bool,
}

pub(crate) struct Engine {
    cfg: EngineConfig,
    /// Original constraints, used to vet incumbents.
    root: SearchNode,
    /// Minimum edge count a new incumbent must have.
    need: AtomicUsize,
    incumbent: Mutex<Option<(usize, Graph)>>,
    nodes: AtomicU64,
    orbit_ns: AtomicU64,
    orbit_calls: AtomicU64,
    cutoff: AtomicUsize,
    timed_out: AtomicBool,
    open_bound: AtomicUsize,
}

impl Engine {
    /// `floor`: only solutions with more edges than this are of interest.
    pub fn new(cfg: EngineConfig, root: SearchNode, floor: Option<usize>) -> Self {
        let cutoff = match cfg.orbit_depth {
            OrbitDepth::Adaptive | OrbitDepth::Inherit => usize::MAX,
            OrbitDepth::Fixed(k) => k,
            OrbitDepth::Off => 0,
        };
        Engine {
            cfg,
            root,
            need: AtomicUsize::new(floor.map_or(0, |f| f + 1)),
            incumbent: Mutex::new(None),
            nodes: AtomicU64::new(0),
            orbit_ns: AtomicU64::new(0),
            orbit_calls: AtomicU64::new(0),
            cutoff: AtomicUsize::new(cutoff),
            timed_out: AtomicBool::new(false),
            open_bound: AtomicUsize::new(0),
        }
    }

    pub fn run(self) -> EngineOutcome {
        let root = self.root.clone();
        let ceiling = bound(&root, self.cfg.d);
        if self.cfg.workers <= 1 {
            self.dfs(root, ceiling, true);
        } else {
            let frontier = self.frontier(root, ceiling, 8 * self.cfg.workers);
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(self.cfg.workers)
                .stack_size(SEARCH_STACK_BYTES)
                .build()
                .expect("thread pool");
            pool.install(|| {
                frontier
                    .into_par_iter()
                    .for_each(|(node, b, sym)| self.dfs(node, b, sym))
            });
        }
        EngineOutcome {
            best: self.incumbent.into_inner().unwrap(),
            timed_out: self.timed_out.into_inner(),
            open_bound: self.open_bound.into_inner(),
            nodes: self.nodes.into_inner(),
            orbit_time: Duration::from_nanos(self.orbit_ns.into_inner()),
            orbit_calls: self.orbit_calls.into_inner(),
        }
    }

    /// Breadth-first expansion until `size` open nodes exist.
    fn frontier(&self, root: SearchNode, ceiling: usize, size: usize) -> Vec<(SearchNode, usize, bool)> {
        let mut queue = VecDeque::from([(root, ceiling, true)]);
        while queue.len() < size {
            let Some((node, b, sym)) = queue.pop_front() else { break };
            if let Some(c) = self.expand(node, b, sym) {
                queue.push_back((c.left, c.bound, c.symmetric));
                queue.push_back((c.right, c.bound, c.symmetric));
            }
        }
        queue.into()
    }

    /// `symmetric`: the parent branched on a nontrivial orbit.
    fn dfs(&self, node: SearchNode, parent_bound: usize, symmetric: bool) {
        if let Some(c) = self.expand(node, parent_bound, symmetric) {
            self.dfs(c.left, c.bound, c.symmetric);
            self.dfs(c.right, c.bound, c.symmetric);
        }
    }

    fn out_of_time(&self, count: u64) -> bool {
        if self.timed_out.load(Ordering::Relaxed) {
            return true;
        }
        if let Some(deadline) = self.cfg.deadline {
            if count % 64 == 0 && Instant::now() >= deadline {
                self.timed_out.store(true, Ordering::Relaxed);
                return true;
            }
        }
        false
    }

    /// Processes one node; returns its two children and its bound when it
    /// still needs branching.
    fn expand(&self, mut node: SearchNode, parent_bound: usize, symmetric: bool) -> Option<Children> {
        let count = self.nodes.fetch_add(1, Ordering::Relaxed);
        if self.out_of_time(count) {
            self.open_bound.fetch_max(parent_bound, Ordering::Relaxed);
            return None;
        }
        let d = self.cfg.d;
        let need = self.need.load(Ordering::Relaxed);
        if !propagate_in_place(&mut node, d, Some(need)) {
            return None;
        }
        let b = bound(&node, d);
        if b < need {
            return None;
        }
        let free = node.free_pair_count();
        if free == 0 || self.cfg.f1_is_feasible {
            self.offer(&node);
        }
        if free == 0 || b < self.need.load(Ordering::Relaxed) {
            return None;
        }
        Some(self.branch(&node, b, symmetric))
    }

    fn offer(&self, node: &SearchNode) {
        let edges = node.edge_count();
        if edges < self.need.load(Ordering::Relaxed) || !self.satisfies_root(node) {
            return;
        }
        let mut inc = self.incumbent.lock().unwrap();
        if edges >= self.need.load(Ordering::Relaxed) {
            let g = node.to_graph();
            debug_assert!(g.is_triangle_free());
            self.need.store(edges + 1, Ordering::Relaxed);
            *inc = Some((edges, g));
        }
    }

    /// `F1` meets the root's degree classes and chain.
    fn satisfies_root(&self, node: &SearchNode) -> bool {
        let d = self.cfg.d;
        let mut prev = usize::MAX;
        for v in 0..node.n() {
            let deg = node.f1_degree(v);
            let (lo, hi) = self.root.degree_window(v, d);
            if deg < lo || deg > hi {
                return false;
            }
            if self.root.ordered_mask() >> v & 1 == 1 {
                if deg > prev {
                    return false;
                }
                prev = deg;
            }
        }
        true
    }

    fn branch(&self, node: &SearchNode, bound: usize, symmetric: bool) -> Children {
        let try_orbits = match self.cfg.orbit_depth {
            OrbitDepth::Inherit => symmetric,
            _ => node.depth() < self.cutoff.load(Ordering::Relaxed),
        };
        if self.cfg.orbital && self.cfg.branch_rule == BranchRule::MaxOrbit {
            if try_orbits {
                if let Some((left, right)) = self.orbital_branch(node) {
                    return Children { left, right, bound, symmetric: true };
                }
                if self.cfg.orbit_depth == OrbitDepth::Adaptive {
                    self.cutoff.fetch_min(node.depth(), Ordering::Relaxed);
                }
            } else if self.cfg.twin_orbits {
                let model = node.colored_model(self.cfg.d);
                if let Some(orbit) = largest_twin_orbit(&model, |(u, v)| node.f1_degree(u) + node.f1_degree(v)) {
                    let (left, right) = orbit_children(node, &orbit);
                    return Children { left, right, bound, symmetric: false };
                }
            }
        }
        let (u, v) = saturation_pair(node);
        let mut left = node.child();
        left.fix_one(u, v);
        let mut right = node.child();
        right.fix_zero(u, v);
        Children { left, right, bound, symmetric: false }
    }

    /// Left: representative fixed to 1. Right: whole orbit fixed to 0.
    /// None when the largest orbit is a singleton.
    fn orbital_branch(&self, node: &SearchNode) -> Option<(SearchNode, SearchNode)> {
        let start = Instant::now();
        let model = node.colored_model(self.cfg.d);
        let autos = automorphisms_with_deadline(&model, Some(start + self.cfg.orbit_budget));
        let score = |(u, v): (usize, usize)| node.f1_degree(u) + node.f1_degree(v);
        let best = if autos.generators.is_empty() {
            None
        } else {
            best_pair_orbit(&model, &autos.generators, score)
        };
        self.orbit_ns
            .fetch_add(start.elapsed().as_nanos() as u64, Ordering::Relaxed);
        self.orbit_calls.fetch_add(1, Ordering::Relaxed);
        let best = best?;
        if best.len() < 2 {
            return None;
        }
        Some(orbit_children(node, &best))
    }
}

/// Left: representative fixed to 1. Right: whole orbit fixed to 0.
fn orbit_children(node: &SearchNode, orbit: &[(usize, usize)]) -> (SearchNode, SearchNode) {
    let (u, v) = orbit[0];
    let mut left = node.child();
    left.fix_one(u, v);
    let mut right = node.child();
    for &(a, b) in orbit {
        right.fix_zero(a, b);
    }
    (left, right)
}

/// Free pair maximizing `deg_F1(u) + deg_F1(v)`, first in lexicographic
/// order among ties.
pub(crate) fn saturation_pair(node: &SearchNode) -> (usize, usize) {
    let mut best: Option<((usize, usize), usize)> = None;
    for u in 0..node.n() {
        let du = node.f1_degree(u);
        let mut m = node.free_mask(u) & !((2u64 << u) - 1);
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            let s = du + node.f1_degree(v);
            if best.is_none_or(|(_, bs)| s > bs) {
                best = Some(((u, v), s));
            }
        }
    }
    best.expect("branching needs a free pair").0
}
