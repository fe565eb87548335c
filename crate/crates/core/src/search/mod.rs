//! Branch-and-bound solvers for the maximum edge count of a triangle-free
//! graph on `2m + 1` vertices with maximum degree `d`.
//!
//! * `Basic` / `Orbital`: one search over all graphs, with the
//!   degree-capacity bound; `Orbital` branches on orbits of free pairs.
//! * `Iterative` / `IterativeOrbital`: a sequence of searches where all
//!   but the last `k` vertices have degree exactly `d`. The degree-sum
//!   ceiling drops by one half per deficient vertex, so the loop stops as
//!   soon as the best graph found reaches the ceiling for `k + 1`.
//! * `Oracle`: brute force, for tiny instances.

mod engine;
mod node;

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

pub use node::{bound, propagate, Propagation, SearchNode, VertexClass, MAX_VERTICES};

use crate::formula::Instance;
use crate::graph::Graph;
use crate::oracle;
use engine::{Engine, EngineConfig, EngineOutcome, SEARCH_STACK_BYTES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    Basic,
    Orbital,
    Iterative,
    IterativeOrbital,
    Oracle,
}

impl Method {
    pub fn uses_orbits(self) -> bool {
        matches!(self, Method::Orbital | Method::IterativeOrbital)
    }
}

/// How deep in the tree orbits are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitDepth {
    /// Unlimited until the first node whose largest orbit is a singleton;
    /// that node's depth becomes the limit.
    Adaptive,
    Fixed(usize),
    Off,
    /// Compute orbits at the root and below every orbital branch only.
    Inherit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BranchRule {
    MaxOrbit,
    MaxSaturationLex,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub method: Method,
    pub time_limit_s: f64,
    pub orbit_depth: OrbitDepth,
    pub branch_rule: BranchRule,
    pub workers: usize,
    pub deterministic: bool,
    /// Iterative methods: deficient vertices get non-increasing degrees.
    pub degree_order_cut: bool,
    /// Cap on one automorphism search, in milliseconds.
    pub orbit_budget_ms: u64,
    /// Where full orbits are not computed, still branch on orbits of
    /// interchangeable vertices.
    pub twin_orbits: bool,
    /// Print one line per finished iterative round to stderr.
    pub progress: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            method: Method::IterativeOrbital,
            time_limit_s: 3600.0,
            orbit_depth: OrbitDepth::Adaptive,
            branch_rule: BranchRule::MaxOrbit,
            workers: 1,
            deterministic: true,
            degree_order_cut: true,
            orbit_budget_ms: 250,
            twin_orbits: true,
            progress: false,
        }
    }
}

impl SolverConfig {
    pub fn with_method(method: Method) -> Self {
        SolverConfig {
            method,
            ..SolverConfig::default()
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.time_limit_s > 0.0) {
            return Err(format!("time limit must be positive, got {}", self.time_limit_s));
        }
        if self.workers < 1 {
            return Err("workers must be at least 1".into());
        }
        Ok(())
    }

    fn effective_workers(&self) -> usize {
        if self.deterministic {
            1
        } else {
            self.workers
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Optimal,
    TimeLimit,
    Infeasible,
}

/// One round of the iterative method.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationRecord {
    /// Number of vertices allowed degree at most `d − 1`.
    pub deficient: usize,
    /// Upper bound in force when the round started.
    pub ub: usize,
    /// Best edge count found in this round above the previous lower bound.
    pub improved_to: Option<usize>,
    pub nodes: u64,
    pub timed_out: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveStats {
    pub nodes: u64,
    pub wall_s: f64,
    pub orbit_s: f64,
    pub orbit_calls: u64,
    pub iterations: Vec<IterationRecord>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub lb: usize,
    pub ub: usize,
    pub incumbent: Option<Graph>,
    pub status: Status,
    pub stats: SolveStats,
}

impl SolveResult {
    /// UB sequence of the iterative rounds followed by the final UB.
    pub fn ub_sequence(&self) -> Vec<usize> {
        let mut seq: Vec<usize> = self.stats.iterations.iter().map(|r| r.ub).collect();
        seq.push(self.ub);
        seq
    }
}

/// Iterative ceiling with `k` deficient vertices: `⌊(N·d − k) / 2⌋`.
pub fn iterative_ceiling(n: usize, d: usize, k: usize) -> usize {
    (n * d).saturating_sub(k) / 2
}

fn engine_config(n_deadline: Option<Instant>, d: usize, cfg: &SolverConfig, f1_is_feasible: bool) -> EngineConfig {
    EngineConfig {
        d,
        orbital: cfg.method.uses_orbits(),
        branch_rule: cfg.branch_rule,
        orbit_depth: cfg.orbit_depth,
        orbit_budget: Duration::from_millis(cfg.orbit_budget_ms),
        twin_orbits: cfg.twin_orbits,
        f1_is_feasible,
        deadline: n_deadline,
        workers: cfg.effective_workers(),
    }
}

/// Runs `f` on a thread with a large stack.
fn on_search_thread<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    std::thread::scope(|s| {
        std::thread::Builder::new()
            .stack_size(SEARCH_STACK_BYTES)
            .spawn_scoped(s, f)
            .expect("spawn search thread")
            .join()
            .expect("search thread panicked")
    })
}

/// Maximizes `|F1|` over completions of `root` (degree classes, chain and
/// fixings as given), keeping only solutions above `floor`.
pub fn solve_node(root: SearchNode, d: usize, floor: Option<usize>, cfg: &SolverConfig) -> SolveResult {
    let start = Instant::now();
    let deadline = start + Duration::from_secs_f64(cfg.time_limit_s);
    let f1_ok = (0..root.n()).all(|v| root.degree_window(v, d).0 == 0) && root.ordered_mask() == 0;
    let ceiling = bound(&root, d);
    let out = run_engine(engine_config(Some(deadline), d, cfg, f1_ok), root, floor);
    let (lb, incumbent) = match out.best {
        Some((v, g)) => (v, Some(g)),
        None => (floor.unwrap_or(0), None),
    };
    let status = if out.timed_out {
        Status::TimeLimit
    } else if incumbent.is_none() && floor.is_none() {
        Status::Infeasible
    } else {
        Status::Optimal
    };
    let ub = if out.timed_out {
        lb.max(out.open_bound.min(ceiling))
    } else {
        lb
    };
    SolveResult {
        lb,
        ub,
        incumbent,
        status,
        stats: SolveStats {
            nodes: out.nodes,
            wall_s: start.elapsed().as_secs_f64(),
            orbit_s: out.orbit_time.as_secs_f64(),
            orbit_calls: out.orbit_calls,
            iterations: Vec::new(),
        },
    }
}

fn run_engine(cfg: EngineConfig, root: SearchNode, floor: Option<usize>) -> EngineOutcome {
    on_search_thread(move || Engine::new(cfg, root, floor).run())
}

/// Basic formulation, optionally with orbital branching.
pub fn solve_basic(inst: Instance, cfg: &SolverConfig) -> SolveResult {
    let n = inst.vertex_count();
    let mut res = solve_node(SearchNode::basic_root(n), inst.d, None, cfg);
    if res.incumbent.is_none() {
        // the empty graph is always feasible
        res.incumbent = Some(Graph::new(n));
    }
    res
}

/// The iterative method: rounds with `k = 0, 1, …` deficient vertices
/// (the highest indices) until the lower bound meets the ceiling.
pub fn solve_iterative(inst: Instance, cfg: &SolverConfig) -> SolveResult {
    let start = Instant::now();
    let deadline = start + Duration::from_secs_f64(cfg.time_limit_s);
    let (n, d) = (inst.vertex_count(), inst.d);
    let mut lb: Option<usize> = None;
    let mut incumbent: Option<Graph> = None;
    let mut ub = iterative_ceiling(n, d, 0);
    let mut stats = SolveStats::default();
    let mut status = Status::Optimal;
    let mut k = 0;
    while ub > lb.unwrap_or(0) || lb.is_none() {
        if k > n {
            break;
        }
        let classes: Vec<VertexClass> = (0..n)
            .map(|v| if v + k < n { VertexClass::ExactlyD } else { VertexClass::AtMostDMinus1 })
            .collect();
        let deficient: Vec<usize> = (n - k..n).collect();
        let mut root = SearchNode::root(&classes);
        if cfg.degree_order_cut {
            root = root.with_degree_order(&deficient);
        }
        let out = run_engine(engine_config(Some(deadline), d, cfg, false), root, lb);
        stats.nodes += out.nodes;
        stats.orbit_s += out.orbit_time.as_secs_f64();
        stats.orbit_calls += out.orbit_calls;
        let improved_to = out.best.as_ref().map(|(v, _)| *v);
        stats.iterations.push(IterationRecord {
            deficient: k,
            ub,
            improved_to,
            nodes: out.nodes,
            timed_out: out.timed_out,
        });
        if cfg.progress {
            eprintln!(
                "round k={k}: ub {ub}, found {improved_to:?}, {} nodes, {:.1}s{}",
                out.nodes,
                start.elapsed().as_secs_f64(),
                if out.timed_out { ", timed out" } else { "" }
            );
        }
        if let Some((v, g)) = out.best {
            lb = Some(v);
            incumbent = Some(g);
        }
        let best = lb.unwrap_or(0);
        if out.timed_out {
            // unexplored: this round's open nodes and every graph with more
            // deficient vertices
            let rest = out.open_bound.max(iterative_ceiling(n, d, k + 1));
            ub = best.max(ub.min(rest));
            status = Status::TimeLimit;
            break;
        }
        k += 1;
        ub = if k > n {
            // every vertex was allowed to be deficient: nothing left
            best
        } else {
            iterative_ceiling(n, d, k).max(best)
        };
    }
    if status == Status::Optimal && lb.is_none() {
        status = Status::Infeasible;
    }
    stats.wall_s = start.elapsed().as_secs_f64();
    SolveResult {
        lb: lb.unwrap_or(0),
        ub,
        incumbent,
        status,
        stats,
    }
}

/// Dispatch on `cfg.method`.
pub fn solve(inst: Instance, cfg: &SolverConfig) -> SolveResult {
    match cfg.method {
        Method::Basic | Method::Orbital => solve_basic(inst, cfg),
        Method::Iterative | Method::IterativeOrbital => solve_iterative(inst, cfg),
        Method::Oracle => {
            let start = Instant::now();
            let n = inst.vertex_count();
            match oracle::brute_force_max(n, inst.d) {
                Ok((value, g)) => SolveResult {
                    lb: value,
                    ub: value,
                    incumbent: Some(g),
                    status: Status::Optimal,
                    stats: SolveStats {
                        wall_s: start.elapsed().as_secs_f64(),
                        ..SolveStats::default()
                    },
                },
                Err(_) => SolveResult {
                    lb: 0,
                    ub: crate::formula::precomputed_ub(inst.d, inst.m),
                    incumbent: None,
                    status: Status::TimeLimit,
                    stats: SolveStats::default(),
                },
            }
        }
    }
}
