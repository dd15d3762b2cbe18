//! Brute force over every set partition, used to validate the solver.

use thiserror::Error;

use crate::domination::{is_dominating, is_restrained_dominating, DominationKind};
use crate::graph::{Graph, VertexSet};

/// Bell(10) = 115975 partitions is the largest enumeration allowed.
pub const NAIVE_ORACLE_MAX_VERTICES: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("naive oracle is limited to {NAIVE_ORACLE_MAX_VERTICES} vertices, got {0}")]
pub struct OracleError(pub usize);

/// Largest class count over all coalition partitions of `kind`, or 0 if
/// there is none. Walks every restricted-growth string and checks the
/// definition directly, sharing nothing with the solver beyond the two
/// domination predicates.
pub fn naive_max_oracle(g: &Graph, kind: DominationKind) -> Result<usize, OracleError> {
    let n = g.order();
    if n > NAIVE_ORACLE_MAX_VERTICES {
        return Err(OracleError(n));
    }
    let qualifies = |s: VertexSet| match kind {
        DominationKind::Dominating => is_dominating(g, s),
        DominationKind::Restrained => is_restrained_dominating(g, s),
    };

    let mut best = 0;
    // rgs[i] <= 1 + max(rgs[..i])
    let mut rgs = vec![0usize; n];
    loop {
        let k = rgs.iter().max().unwrap() + 1;
        if k > best {
            let mut classes = vec![VertexSet::EMPTY; k];
            for (v, &c) in rgs.iter().enumerate() {
                classes[c].insert(v);
            }
            let good: Vec<bool> = classes.iter().map(|&s| qualifies(s)).collect();
            let valid = (0..k).all(|i| {
                if good[i] {
                    classes[i].len() == 1
                } else {
                    (0..k).any(|j| j != i && !good[j] && qualifies(classes[i].union(classes[j])))
                }
            });
            if valid {
                best = k;
            }
        }
        // next restricted-growth string
        let mut i = n;
        loop {
            if i == 1 {
                return Ok(best);
            }
            i -= 1;
            let prefix_max = rgs[..i].iter().max().copied().unwrap_or(0);
            if rgs[i] <= prefix_max {
                rgs[i] += 1;
                for x in &mut rgs[i + 1..] {
                    *x = 0;
                }
                break;
            }
        }
    }
}
