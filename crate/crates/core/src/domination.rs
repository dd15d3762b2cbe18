//! Dominating and restrained dominating sets.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, VertexSet};

/// Exponential enumeration guard for [`all_qualifying_sets`].
pub const ORACLE_MAX_VERTICES: usize = 20;

/// Which domination predicate a coalition is built on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DominationKind {
    Dominating,
    Restrained,
}

impl DominationKind {
    pub const ALL: [DominationKind; 2] = [DominationKind::Dominating, DominationKind::Restrained];

    pub fn as_str(self) -> &'static str {
        match self {
            DominationKind::Dominating => "dominating",
            DominationKind::Restrained => "restrained",
        }
    }

    /// Whether `s` passes this kind's predicate in `g`.
    #[inline]
    pub fn qualifies(self, g: &Graph, s: VertexSet) -> bool {
        match self {
            DominationKind::Dominating => is_dominating(g, s),
            DominationKind::Restrained => is_restrained_dominating(g, s),
        }
    }
}

impl fmt::Display for DominationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown domination kind `{0}` (expected dominating or restrained)")]
pub struct ParseKindError(String);

impl FromStr for DominationKind {
    type Err = ParseKindError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "dominating" | "d" | "c" => Ok(DominationKind::Dominating),
            "restrained" | "r" | "rc" => Ok(DominationKind::Restrained),
            _ => Err(ParseKindError(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("exhaustive enumeration is limited to {ORACLE_MAX_VERTICES} vertices, got {0}")]
pub struct OracleGuardError(pub usize);

/// Every vertex outside `s` has a neighbor in `s`.
#[inline]
pub fn is_dominating(g: &Graph, s: VertexSet) -> bool {
    g.closed_neighborhood_of_set(s) == g.vertices()
}

/// `s` dominates and no vertex of `V \ s` is isolated in `G[V \ s]`.
/// `s = V` qualifies vacuously.
pub fn is_restrained_dominating(g: &Graph, s: VertexSet) -> bool {
    let outside = g.vertices().difference(s);
    is_dominating(g, s) && outside.iter().all(|v| !g.neighbors(v).is_disjoint(outside))
}

/// γ(G) by include/exclude branch and bound.
pub fn domination_number(g: &Graph) -> usize {
    let mut best = g.order();
    let mut search = MinSetSearch {
        g,
        restrained: false,
        best: &mut best,
    };
    search.run(0, VertexSet::EMPTY, VertexSet::EMPTY);
    best
}

/// γ_r(G) by include/exclude branch and bound. Always `Some`, since `V`
/// itself is restrained dominating; the `Option` mirrors callers that work
/// with induced subgraphs.
pub fn restrained_domination_number(g: &Graph) -> Option<usize> {
    let mut best = g.order();
    let mut search = MinSetSearch {
        g,
        restrained: true,
        best: &mut best,
    };
    search.run(0, VertexSet::EMPTY, VertexSet::EMPTY);
    Some(best)
}

/// Decides vertices `0, 1, ...` in order as inside or outside the set.
/// An outside vertex whose neighborhood is fully decided must already see an
/// inside neighbor (and, for the restrained case, an outside neighbor).
struct MinSetSearch<'a> {
    g: &'a Graph,
    restrained: bool,
    best: &'a mut usize,
}

impl MinSetSearch<'_> {
    fn run(&mut self, v: usize, inside: VertexSet, outside: VertexSet) {
        let n = self.g.order();
        if inside.len() >= *self.best {
            return;
        }
        if v == n {
            // all feasibility was checked as neighborhoods closed
            *self.best = inside.len();
            return;
        }
        let decided = VertexSet::full(v + 1);
        // Try excluding first: smaller sets are found early.
        for include in [false, true] {
            let (ins, outs) = if include {
                (inside.union(VertexSet::singleton(v)), outside)
            } else {
                (inside, outside.union(VertexSet::singleton(v)))
            };
            if self.consistent(ins, outs, decided) {
                self.run(v + 1, ins, outs);
            }
        }
    }

    /// Checks outside vertices whose closed neighborhoods are now decided.
    fn consistent(&self, inside: VertexSet, outside: VertexSet, decided: VertexSet) -> bool {
        outside.iter().all(|w| {
            let nb = self.g.neighbors(w);
            if !nb.is_subset(decided) {
                return true;
            }
            !nb.is_disjoint(inside) && (!self.restrained || !nb.is_disjoint(outside))
        })
    }
}

/// All subsets passing `kind`'s predicate, ordered by size and then
/// lexicographically by sorted member list. Plain enumeration of all `2^n`
/// masks, kept independent of the search code as a cross-check.
pub fn all_qualifying_sets(
    g: &Graph,
    kind: DominationKind,
) -> Result<Vec<VertexSet>, OracleGuardError> {
    let n = g.order();
    if n > ORACLE_MAX_VERTICES {
        return Err(OracleGuardError(n));
    }
    let qualifies = |s: u64| -> bool {
        let outside = !s & ((1u64 << n) - 1);
        (0..n).filter(|v| (outside >> v) & 1 == 1).all(|v| {
            let nb = g.adjacency()[v];
            nb & s != 0 && (kind == DominationKind::Dominating || nb & outside != 0)
        })
    };
    let mut sets: Vec<VertexSet> = (0..1u64 << n)
        .filter(|&s| qualifies(s))
        .map(VertexSet)
        .collect();
    sets.sort_by_key(|s| (s.len(), s.iter().collect::<Vec<_>>()));
    Ok(sets)
}

/// Minimum qualifying set size from [`all_qualifying_sets`].
pub fn oracle_minimum(g: &Graph, kind: DominationKind) -> Result<usize, OracleGuardError> {
    Ok(all_qualifying_sets(g, kind)?
        .first()
        .map(|s| s.len())
        .expect("V always qualifies"))
}
