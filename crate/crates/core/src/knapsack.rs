//! Composition of extremal graphs from components.
//!
//! An extremal graph for `(d, m)` can be taken as a disjoint union of
//! d-stars and extremal components with matching numbers `i ∈ [d, Z(d)]`.
//! Choosing how many of each is an unbounded knapsack: volume `i`, utility
//! `f_Δ(d, i) − d·i`, capacity `m`; leftover capacity is filled by stars,
//! each worth exactly `d` per unit of matching number.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{f_delta, z_exact, FormulaError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KnapsackError {
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error("no utility supplied for component with matching number {0}")]
    MissingUtility(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnapsackPlan {
    pub d: usize,
    pub m: usize,
    /// `x_i` for every `i` in `[d, Z(d)]` (zeros included).
    pub counts: BTreeMap<usize, usize>,
    pub star_count: usize,
    /// Total edge count `d·m + Σ (f_Δ(d,i) − d·i)·x_i`.
    pub objective: usize,
}

impl KnapsackPlan {
    pub fn count(&self, i: usize) -> usize {
        self.counts.get(&i).copied().unwrap_or(0)
    }

    /// Number of non-star components.
    pub fn component_count(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn used_volume(&self) -> usize {
        self.counts.iter().map(|(&i, &x)| i * x).sum()
    }
}

/// Utilities `f_Δ(d, i)` for `i ∈ [d, Z(d)]` from the formula module.
pub fn formula_utilities(
    d: usize,
    assume_conjecture: bool,
) -> Result<BTreeMap<usize, usize>, FormulaError> {
    let z = z_exact(d)?;
    (d..=z)
        .map(|i| f_delta(d, i, assume_conjecture).map(|v| (i, v)))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Partial {
    value: i64,
    comps: usize,
    volume: usize,
}

impl Partial {
    /// Higher value, then fewer components, then smaller volume.
    fn better_than(&self, other: &Partial) -> bool {
        self.value
            .cmp(&other.value)
            .then(other.comps.cmp(&self.comps))
            .then(other.volume.cmp(&self.volume))
            == Ordering::Greater
    }
}

/// Optimal plan by dynamic programming over the capacity.
///
/// Among optimal plans the one returned maximizes `x_{Z(d)}`, then has the
/// fewest non-star components, then the most stars.
pub fn solve_knapsack(
    d: usize,
    m: usize,
    utilities: &BTreeMap<usize, usize>,
) -> Result<KnapsackPlan, KnapsackError> {
    if d < 2 || m < 1 {
        return Err(KnapsackError::InvalidArgument(format!(
            "need d >= 2 and m >= 1, got d={d} m={m}"
        )));
    }
    let z = z_exact(d)?;
    let gain = |i: usize| -> Result<i64, KnapsackError> {
        let f = *utilities.get(&i).ok_or(KnapsackError::MissingUtility(i))?;
        Ok(f as i64 - (d * i) as i64)
    };
    let small: Vec<(usize, i64)> = (d..z).map(|i| gain(i).map(|g| (i, g))).collect::<Result<_, _>>()?;
    let big_gain = gain(z)?;

    // exact[v]: best (value, comps) filling volume exactly v with small items
    let mut exact: Vec<Option<Partial>> = vec![None; m + 1];
    let mut choice = vec![usize::MAX; m + 1];
    exact[0] = Some(Partial { value: 0, comps: 0, volume: 0 });
    for v in 1..=m {
        for &(i, g) in &small {
            if i > v {
                break;
            }
            let Some(prev) = exact[v - i] else { continue };
            let cand = Partial {
                value: prev.value + g,
                comps: prev.comps + 1,
                volume: v,
            };
            if exact[v].is_none_or(|cur| cand.better_than(&cur)) {
                exact[v] = Some(cand);
                choice[v] = i;
            }
        }
    }
    // best_within[c]: best exact[v] over v ≤ c
    let mut best_within: Vec<Partial> = Vec::with_capacity(m + 1);
    for v in 0..=m {
        let mut best = if v == 0 { exact[0].unwrap() } else { best_within[v - 1] };
        if let Some(p) = exact[v] {
            if p.better_than(&best) {
                best = p;
            }
        }
        best_within.push(best);
    }

    let mut winner: Option<(i64, usize, Partial)> = None;
    for xz in (0..=m / z).rev() {
        let rest = best_within[m - xz * z];
        let total = xz as i64 * big_gain + rest.value;
        // xz descends, so only a strictly larger total displaces the winner
        if winner.is_none_or(|(best, _, _)| total > best) {
            winner = Some((total, xz, rest));
        }
    }
    let (total, xz, rest) = winner.expect("xz = 0 is always available");

    let mut counts: BTreeMap<usize, usize> = (d..=z).map(|i| (i, 0)).collect();
    *counts.get_mut(&z).unwrap() += xz;
    let mut v = rest.volume;
    while v > 0 {
        let i = choice[v];
        *counts.get_mut(&i).unwrap() += 1;
        v -= i;
    }
    let used: usize = counts.iter().map(|(&i, &x)| i * x).sum();
    let objective = (d * m) as i64 + total;
    Ok(KnapsackPlan {
        d,
        m,
        counts,
        star_count: m - used,
        objective: objective as usize,
    })
}

/// True iff at most one component has matching number below `Z(d)`.
pub fn check_special_structure(plan: &KnapsackPlan) -> bool {
    let z = match z_exact(plan.d) {
        Ok(z) => z,
        Err(_) => plan.counts.keys().copied().max().unwrap_or(plan.d),
    };
    plan.counts
        .iter()
        .filter(|&(&i, _)| i < z)
        .map(|(_, &x)| x)
        .sum::<usize>()
        <= 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plan_for(d: usize, m: usize) -> KnapsackPlan {
        solve_knapsack(d, m, &formula_utilities(d, false).unwrap()).unwrap()
    }

    #[test]
    fn table_rows() {
        let p = plan_for(8, 20);
        assert_eq!(p.objective, 168);
        assert_eq!((p.count(10), p.component_count(), p.star_count), (2, 2, 0));

        let p = plan_for(7, 15);
        assert_eq!(p.objective, 108);
        assert_eq!((p.count(9), p.component_count(), p.star_count), (1, 1, 6));

        let p = plan_for(8, 19);
        assert_eq!(p.objective, 158);
        assert_eq!((p.count(9), p.count(10), p.star_count), (1, 1, 0));
    }

    #[test]
    fn tie_break_prefers_z_components() {
        // d=9, m=20: {12, 8 stars} and {11, 9} both give 184
        let p = plan_for(9, 20);
        assert_eq!(p.objective, 184);
        assert_eq!((p.count(12), p.star_count), (1, 8));
    }

    #[test]
    fn special_structure() {
        let mk = |counts: &[(usize, usize)]| KnapsackPlan {
            d: 8,
            m: 20,
            counts: counts.iter().copied().collect(),
            star_count: 0,
            objective: 0,
        };
        assert!(check_special_structure(&mk(&[(10, 2)])));
        assert!(check_special_structure(&mk(&[(9, 1), (10, 1)])));
        assert!(!check_special_structure(&mk(&[(8, 1), (9, 1)])));
    }

    #[test]
    fn missing_utility_and_unknown_z() {
        let mut u = formula_utilities(8, false).unwrap();
        u.remove(&9);
        assert_eq!(solve_knapsack(8, 20, &u), Err(KnapsackError::MissingUtility(9)));
        assert!(matches!(
            solve_knapsack(15, 20, &BTreeMap::new()),
            Err(KnapsackError::Formula(FormulaError::UnknownZ { .. }))
        ));
    }

    #[test]
    fn small_m_is_all_stars() {
        let p = plan_for(8, 5);
        assert_eq!((p.objective, p.star_count, p.component_count()), (40, 5, 0));
    }

    /// Every count vector with Σ i·x_i ≤ m, ranked by the same preference
    /// order, computed independently of the DP.
    fn exhaustive(d: usize, m: usize, u: &BTreeMap<usize, usize>) -> (usize, Vec<usize>, usize) {
        let z = z_exact(d).unwrap();
        let items: Vec<usize> = (d..=z).collect();
        let mut best: Option<(i64, usize, i64, usize, Vec<usize>)> = None;
        let mut counts = vec![0usize; items.len()];
        fn rec(
            k: usize,
            left: usize,
            items: &[usize],
            counts: &mut Vec<usize>,
            f: &mut dyn FnMut(&[usize], usize),
        ) {
            if k == items.len() {
                f(counts, left);
                return;
            }
            for x in 0..=left / items[k] {
                counts[k] = x;
                rec(k + 1, left - x * items[k], items, counts, f);
            }
            counts[k] = 0;
        }
        let mut visit = |c: &[usize], left: usize| {
            let value: i64 = items
                .iter()
                .zip(c)
                .map(|(&i, &x)| (u[&i] as i64 - (d * i) as i64) * x as i64)
                .sum();
            let xz = *c.last().unwrap();
            let comps: usize = c.iter().sum();
            let key = (value, xz, -(comps as i64), left, c.to_vec());
            let better = match &best {
                None => true,
                Some(b) => (key.0, key.1, key.2, key.3) > (b.0, b.1, b.2, b.3),
            };
            if better {
                best = Some(key);
            }
        };
        rec(0, m, &items, &mut counts, &mut visit);
        let b = best.unwrap();
        (((d * m) as i64 + b.0) as usize, b.4, b.3)
    }

    #[test]
    fn dp_matches_exhaustive_enumeration() {
        for d in 7..=10 {
            let u = formula_utilities(d, false).unwrap();
            for m in 1..=30 {
                let p = solve_knapsack(d, m, &u).unwrap();
                let (obj, counts, stars) = exhaustive(d, m, &u);
                assert_eq!(p.objective, obj, "d={d} m={m}");
                assert_eq!(p.counts.values().copied().collect::<Vec<_>>(), counts, "d={d} m={m}");
                assert_eq!(p.star_count, stars, "d={d} m={m}");
            }
        }
    }

    #[test]
    fn conjectured_optima_have_special_structure() {
        for d in [7, 8, 9, 10, 11, 12, 13] {
            let u = formula_utilities(d, true).unwrap();
            for m in 1..=120 {
                let p = solve_knapsack(d, m, &u).unwrap();
                assert!(check_special_structure(&p), "d={d} m={m}: {p:?}");
                assert_eq!(p.objective, f_delta(d, m, true).unwrap(), "d={d} m={m}");
            }
        }
    }
}
