//! Explicit witnesses: stars, the general-graph extremal blocks, the
//! `B(d, d+t)` family, and disjoint unions assembled from knapsack plans.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{z_of, ZValue};
use crate::graph::Graph;
use crate::knapsack::KnapsackPlan;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("invalid t={t} for d={d}: {reason}")]
    InvalidT { d: usize, t: usize, reason: String },
    #[error("no component graph supplied for matching number {0}")]
    MissingComponent(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Which building block a component is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ComponentKind {
    DStar,
    /// `K_{d+1}` for even `d`, `K'_{d+1}` for odd `d`.
    GeneralBlock,
    BGraph { t: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentSpec {
    pub kind: ComponentKind,
    pub d: usize,
}

impl ComponentSpec {
    pub fn build(&self) -> Result<Graph, ConstructionError> {
        match self.kind {
            ComponentKind::DStar => Ok(d_star(self.d)),
            ComponentKind::GeneralBlock => Ok(general_block(self.d)),
            ComponentKind::BGraph { t } => b_graph(self.d, t),
        }
    }
}

/// `K_{1,d}` with center 0.
pub fn d_star(d: usize) -> Graph {
    assert!(d >= 1);
    Graph::from_edges(d + 1, (1..=d).map(|leaf| (0, leaf))).unwrap()
}

/// `K_{d+1}` when `d + 1` is odd; otherwise `K'_{d+1}`: `K_{d+1}` minus the
/// perfect matching `{2i, 2i+1}`, plus a vertex joined to `0..d`.
pub fn general_block(d: usize) -> Graph {
    assert!(d >= 1);
    let k = d + 1;
    if k % 2 == 1 {
        return crate::graph::complete(k);
    }
    let mut g = Graph::new(k + 1);
    for u in 0..k {
        for v in u + 1..k {
            if !(u % 2 == 0 && v == u + 1) {
                g.add_edge(u, v);
            }
        }
    }
    for u in 0..d {
        g.add_edge(k, u);
    }
    g
}

/// Extremal general graph: `q` general blocks and `r` d-stars with
/// `m = q·⌈d/2⌉ + r`, `q` maximal.
pub fn general_extremal(d: usize, m: usize) -> Graph {
    assert!(d >= 1 && m >= 1);
    let half = d.div_ceil(2);
    let q = m / half;
    let r = m - q * half;
    let block = general_block(d);
    let star = d_star(d);
    let parts: Vec<&Graph> = std::iter::repeat_n(&block, q)
        .chain(std::iter::repeat_n(&star, r))
        .collect();
    Graph::disjoint_union_all(parts)
}

/// Largest admissible `t` plus one, i.e. `Z(d) − d`, when `Z(d)` is known.
pub fn b_graph_t_limit(d: usize) -> Option<usize> {
    z_of(d).exact().map(|z| z - d)
}

fn validate_t(d: usize, t: usize) -> Result<(), ConstructionError> {
    let invalid = |reason: String| Err(ConstructionError::InvalidT { d, t, reason });
    if d < 2 {
        return invalid("d must be at least 2".into());
    }
    if t == 0 {
        return Ok(());
    }
    if d < 7 {
        return invalid("t > 0 requires d >= 7".into());
    }
    match z_of(d) {
        ZValue::Range { lo, hi } => invalid(format!("Z({d}) unknown (in [{lo}, {hi}])")),
        ZValue::Exact { value: z } if t >= z - d => invalid(format!("need t < Z(d) - d = {}", z - d)),
        ZValue::Exact { .. } => Ok(()),
    }
}

/// Factor-critical triangle-free graph with `ν = d + t` and
/// `d² + dt + t + 1` edges on `2(d+t) + 1` vertices.
///
/// Labels: left side `0..d+t` (first `d−1` form `F`, the rest `H`), right
/// side `d+t..2(d+t)` split the same way, apex `2(d+t)`. Start from the
/// complete bipartite graph, drop the `t` cyclic-shift matchings
/// `F_L[j]–F_R[(j+s) mod (d−1)]` for `s < t`, drop all `H_L × H_R` edges, and
/// join the apex to every `H` vertex. `t = 0` gives `A_d`.
pub fn b_graph(d: usize, t: usize) -> Result<Graph, ConstructionError> {
    validate_t(d, t)?;
    let side = d + t;
    let f = d - 1;
    let apex = 2 * side;
    let mut g = Graph::new(2 * side + 1);
    for a in 0..side {
        for b in 0..side {
            let (a_in_f, b_in_f) = (a < f, b < f);
            let keep = match (a_in_f, b_in_f) {
                (true, true) => (b + f - a) % f >= t,
                (false, false) => false,
                _ => true,
            };
            if keep {
                g.add_edge(a, side + b);
            }
        }
    }
    for h in f..side {
        g.add_edge(apex, h);
        g.add_edge(apex, side + h);
    }
    Ok(g)
}

/// Solver-found components with `ν = Z(d)`, one `d graph6` pair per line.
const Z_COMPONENTS: &str = include_str!("../data/z_components.txt");

/// A shipped extremal component with matching number `Z(d)`, if one is
/// available for this `d`.
pub fn z_component(d: usize) -> Option<Graph> {
    Z_COMPONENTS.lines().find_map(|line| {
        let (k, g6) = line.trim().split_once(' ')?;
        if k.parse::<usize>().ok()? != d {
            return None;
        }
        Some(crate::graph::from_graph6(g6.trim().as_bytes()).expect("shipped graph6 is valid"))
    })
}

/// Extremal components for every `i ∈ [d, Z(d)]`: `B(d, i)` below `Z(d)`,
/// the shipped component at `Z(d)`.
pub fn extremal_components(d: usize) -> Result<BTreeMap<usize, Graph>, ConstructionError> {
    let z = match z_of(d) {
        ZValue::Exact { value } => value,
        ZValue::Range { .. } => {
            return Err(ConstructionError::InvalidArgument(format!("Z({d}) is not known exactly")))
        }
    };
    let mut out = BTreeMap::new();
    for i in d..z {
        out.insert(i, b_graph(d, i - d)?);
    }
    out.insert(z, z_component(d).ok_or(ConstructionError::MissingComponent(z))?);
    Ok(out)
}

/// Disjoint union of `plan.star_count` d-stars and `plan.counts[i]` copies
/// of `components[i]`. Components come first, by ascending matching number.
pub fn assemble(
    plan: &KnapsackPlan,
    components: &BTreeMap<usize, Graph>,
) -> Result<Graph, ConstructionError> {
    let mut parts: Vec<&Graph> = Vec::new();
    for (&i, &count) in &plan.counts {
        if count == 0 {
            continue;
        }
        let g = components.get(&i).ok_or(ConstructionError::MissingComponent(i))?;
        parts.extend(std::iter::repeat_n(g, count));
    }
    let star = if plan.star_count > 0 {
        Some(d_star(plan.d))
    } else {
        None
    };
    if let Some(star) = &star {
        parts.extend(std::iter::repeat_n(star, plan.star_count));
    }
    Ok(Graph::disjoint_union_all(parts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::f_gen;
    use crate::graph::{is_factor_critical, max_matching};

    #[test]
    fn stars() {
        let s = d_star(7);
        assert_eq!((s.n(), s.edge_count(), s.degree(0)), (8, 7, 7));
        assert_eq!(d_star(1).edge_count(), 1);
        assert_eq!(max_matching(&d_star(10)).len(), 1);
    }

    #[test]
    fn general_extremal_examples() {
        let g = general_extremal(2, 2);
        assert_eq!(g.edge_count(), 6);
        assert_eq!(g.components().len(), 2);
        let g = general_extremal(3, 3);
        assert_eq!(g.edge_count(), 10);
        assert_eq!(g.edge_count(), f_gen(3, 3));
        let g = general_extremal(1, 4);
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.max_degree(), 1);
        assert_eq!(max_matching(&g).len(), 4);
    }

    #[test]
    fn general_extremal_matches_f_gen() {
        for d in 1..=8 {
            for m in 1..=12 {
                let g = general_extremal(d, m);
                assert_eq!(g.edge_count(), f_gen(d, m), "d={d} m={m}");
                assert!(g.max_degree() <= d);
                assert!(max_matching(&g).len() <= m);
            }
        }
    }

    #[test]
    fn k_prime_block_shape() {
        // d = 3: K_4 minus {01, 23}, plus vertex 4 joined to 0, 1, 2
        let g = general_block(3);
        assert_eq!(g.n(), 5);
        assert_eq!(g.edge_count(), 7);
        assert!(!g.has_edge(0, 1) && !g.has_edge(2, 3));
        assert!(g.has_edge(4, 2) && !g.has_edge(4, 3));
        assert_eq!(max_matching(&g).len(), 2);
    }

    #[test]
    fn b_graph_examples() {
        let g = b_graph(7, 1).unwrap();
        assert_eq!((g.n(), g.edge_count()), (17, 58));
        assert!(g.is_triangle_free());
        assert!(is_factor_critical(&g));
        assert_eq!(b_graph(7, 0).unwrap().edge_count(), 50);
        let g = b_graph(8, 1).unwrap();
        assert_eq!(g.edge_count(), 74);
        assert_eq!(max_matching(&g).len(), 9);
    }

    #[test]
    fn a_2_is_c5() {
        let g = b_graph(2, 0).unwrap();
        assert_eq!(g.edge_count(), 5);
        assert_eq!(g.degrees(), vec![2; 5]);
        assert!(g.is_triangle_free());
    }

    #[test]
    fn b_graph_rejects_bad_t() {
        assert!(matches!(b_graph(7, 2), Err(ConstructionError::InvalidT { .. })));
        assert!(matches!(b_graph(6, 1), Err(ConstructionError::InvalidT { .. })));
        assert!(matches!(b_graph(15, 1), Err(ConstructionError::InvalidT { .. })));
        assert!(b_graph(15, 0).is_ok());
    }

    #[test]
    fn assemble_empty_plan() {
        let plan = KnapsackPlan {
            d: 8,
            m: 0,
            counts: BTreeMap::new(),
            star_count: 0,
            objective: 0,
        };
        let g = assemble(&plan, &BTreeMap::new()).unwrap();
        assert_eq!(g.n(), 0);
    }

    #[test]
    fn assemble_with_b_graph_components() {
        let plan = KnapsackPlan {
            d: 7,
            m: 16,
            counts: BTreeMap::from([(7, 1), (8, 1)]),
            star_count: 1,
            objective: 0,
        };
        let comps = BTreeMap::from([(7, b_graph(7, 0).unwrap()), (8, b_graph(7, 1).unwrap())]);
        let g = assemble(&plan, &comps).unwrap();
        assert_eq!(g.edge_count(), 50 + 58 + 7);
        assert_eq!(max_matching(&g).len(), 7 + 8 + 1);
        let missing = BTreeMap::from([(7, b_graph(7, 0).unwrap())]);
        assert_eq!(assemble(&plan, &missing), Err(ConstructionError::MissingComponent(8)));
    }

    #[test]
    fn shipped_components_are_extremal() {
        for d in 2..=10 {
            let z = z_of(d).exact().unwrap();
            let g = z_component(d).unwrap_or_else(|| panic!("no component for d={d}"));
            assert_eq!(g.n(), 2 * z + 1, "d={d}");
            assert!(g.is_triangle_free());
            assert!(g.max_degree() <= d);
            assert_eq!(max_matching(&g).len(), z);
            assert!(is_factor_critical(&g), "d={d}");
            assert_eq!(Ok(g.edge_count()), crate::formula::f_delta(d, z, false), "d={d}");
        }
        assert!(z_component(11).is_none());
    }

    #[test]
    fn extremal_components_cover_the_range() {
        let comps = extremal_components(8).unwrap();
        assert_eq!(comps.keys().copied().collect::<Vec<_>>(), vec![8, 9, 10]);
        assert_eq!(comps[&9].edge_count(), 8 * 9 + 9 - 8 + 1);
        assert!(extremal_components(14).is_err());
    }
}
