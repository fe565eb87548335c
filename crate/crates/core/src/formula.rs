//! Closed-form edge counts: the general-graph maximum, `Z(d)`, the
//! triangle-free maximum on its solved cases, and the degree-sum ceiling.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("Z({d}) is only known to lie in [{lo}, {hi}]")]
    UnknownZ { d: usize, lo: usize, hi: usize },
    #[error("f_delta({d}, {m}) is not a proved or computationally settled case")]
    UnknownCase { d: usize, m: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Problem parameters: degree bound `d`, matching bound `m`. The search
/// space is graphs on `2m + 1` vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Instance {
    pub d: usize,
    pub m: usize,
}

impl Instance {
    pub fn new(d: usize, m: usize) -> Result<Self, FormulaError> {
        if d < 2 {
            return Err(FormulaError::InvalidArgument(format!("d must be >= 2, got {d}")));
        }
        if m < 1 {
            return Err(FormulaError::InvalidArgument(format!("m must be >= 1, got {m}")));
        }
        Ok(Instance { d, m })
    }

    /// Vertex count of a factor-critical graph with matching number `m`.
    pub fn vertex_count(&self) -> usize {
        2 * self.m + 1
    }

    pub fn precomputed_ub(&self) -> usize {
        precomputed_ub(self.d, self.m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ZValue {
    Exact { value: usize },
    Range { lo: usize, hi: usize },
}

impl ZValue {
    pub fn exact(self) -> Option<usize> {
        match self {
            ZValue::Exact { value } => Some(value),
            ZValue::Range { .. } => None,
        }
    }
}

/// Maximum edges in any graph with `Δ ≤ d` and `ν ≤ m`:
/// `dm + ⌊d/2⌋·⌊m/⌈d/2⌉⌋`.
pub fn f_gen(d: usize, m: usize) -> usize {
    assert!(d >= 1, "d must be positive");
    d * m + (d / 2) * (m / d.div_ceil(2))
}

/// `Z(d)` for odd `d` determined by exhaustive computation.
const COMPUTED_ODD_Z: &[(usize, usize)] = &[
    (7, 9),
    // Two values appear in the source for d = 9; 12 is the one consistent
    // with the d=9, m=12 optimum equal to the degree-sum ceiling (112).
    (9, 12),
    (11, 15),
    (13, 17),
];

/// Smallest matching number of a `d`-regular (even `d`) or almost
/// `d`-regular (odd `d`) triangle-free factor-critical graph.
pub fn z_of(d: usize) -> ZValue {
    assert!(d >= 2, "Z(d) is defined for d >= 2");
    if d % 2 == 0 {
        return ZValue::Exact { value: 5 * d / 4 };
    }
    match d {
        3 => return ZValue::Exact { value: 3 },
        5 => return ZValue::Exact { value: 6 },
        _ => {}
    }
    if let Some(&(_, z)) = COMPUTED_ODD_Z.iter().find(|&&(k, _)| k == d) {
        return ZValue::Exact { value: z };
    }
    ZValue::Range {
        lo: 5 * (d - 1) / 4,
        hi: (5 * (d + 1)).div_ceil(4),
    }
}

pub fn z_exact(d: usize) -> Result<usize, FormulaError> {
    match z_of(d) {
        ZValue::Exact { value } => Ok(value),
        ZValue::Range { lo, hi } => Err(FormulaError::UnknownZ { d, lo, hi }),
    }
}

/// A computationally settled optimum: the solver closed the gap (LB = UB).
#[derive(Debug, Clone, Copy)]
pub struct SettledOptimum {
    pub d: usize,
    pub m: usize,
    pub edges: usize,
    /// Where the value was reported.
    pub source: &'static str,
}

/// Optima closed by exhaustive search (iterative method tables).
pub const SETTLED_OPTIMA: &[SettledOptimum] = &[
    SettledOptimum { d: 7, m: 8, edges: 58, source: "iterative+orbital table, row d=7 m=8" },
    SettledOptimum { d: 7, m: 9, edges: 66, source: "iterative+orbital table, row d=7 m=9" },
    SettledOptimum { d: 8, m: 9, edges: 74, source: "iterative+orbital table, row d=8 m=9" },
    SettledOptimum { d: 8, m: 10, edges: 84, source: "iterative+orbital table, row d=8 m=10" },
    SettledOptimum { d: 9, m: 10, edges: 92, source: "iterative+orbital table, row d=9 m=10" },
    SettledOptimum { d: 9, m: 11, edges: 102, source: "iterative+orbital table, row d=9 m=11" },
    SettledOptimum { d: 9, m: 12, edges: 112, source: "iterative+orbital table, row d=9 m=12" },
    SettledOptimum { d: 10, m: 11, edges: 112, source: "iterative+orbital table, row d=10 m=11" },
    SettledOptimum { d: 10, m: 12, edges: 125, source: "iterative+orbital table, row d=10 m=12" },
    SettledOptimum { d: 11, m: 12, edges: 134, source: "iterative+orbital table, row d=11 m=12" },
    SettledOptimum { d: 11, m: 13, edges: 146, source: "iterative+orbital table, row d=11 m=13" },
    SettledOptimum { d: 11, m: 15, edges: 170, source: "iterative+orbital table, row d=11 m=15" },
    SettledOptimum { d: 12, m: 13, edges: 158, source: "iterative+orbital table, row d=12 m=13" },
    SettledOptimum { d: 12, m: 15, edges: 186, source: "iterative+orbital table, row d=12 m=15" },
    SettledOptimum { d: 13, m: 17, edges: 227, source: "iterative+orbital table, row d=13 m=17" },
];

pub fn settled_optimum(d: usize, m: usize) -> Option<&'static SettledOptimum> {
    SETTLED_OPTIMA.iter().find(|s| s.d == d && s.m == m)
}

/// True when `(d, m)` is covered by the proved closed form: `d ≥ m`,
/// `d ≤ 6`, or `Z(d) ≤ m < 2d`.
pub fn is_proved_case(d: usize, m: usize) -> bool {
    if d >= m || d <= 6 {
        return true;
    }
    matches!(z_of(d), ZValue::Exact { value } if value <= m && m < 2 * d)
}

/// The closed form with `m = k·Z + r`, `0 ≤ r < Z`.
fn closed_form(d: usize, m: usize, z: usize) -> usize {
    let (k, r) = (m / z, m % z);
    let base = d * m + k * (d / 2);
    if r < d {
        base
    } else {
        base + r - d + 1
    }
}

/// Maximum edges of a triangle-free graph with `Δ ≤ d` and `ν ≤ m`.
///
/// Without `assume_conjecture` only proved cases and computationally
/// settled pairs are answered; settled pairs return the stored optimum.
pub fn f_delta(d: usize, m: usize, assume_conjecture: bool) -> Result<usize, FormulaError> {
    if d < 2 || m < 1 {
        return Err(FormulaError::InvalidArgument(format!(
            "need d >= 2 and m >= 1, got d={d} m={m}"
        )));
    }
    let z = z_exact(d)?;
    if assume_conjecture || is_proved_case(d, m) {
        return Ok(closed_form(d, m, z));
    }
    settled_optimum(d, m)
        .map(|s| s.edges)
        .ok_or(FormulaError::UnknownCase { d, m })
}

/// Conjectured extremal component size for `d < i < Z(d)`: `di + i − d + 1`.
pub fn conjectured_component_edges(d: usize, i: usize) -> usize {
    d * i + i + 1 - d
}

/// Degree-sum ceiling on `2m + 1` vertices: `⌊(2m+1)·d/2⌋`.
pub fn precomputed_ub(d: usize, m: usize) -> usize {
    (2 * m + 1) * d / 2
}
