//! Sweeps over graph corpora: per-graph invariants, distribution tables,
//! gap witnesses and DOT rendering of coalition graphs.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Duration;

use rayon::prelude::*;
use thiserror::Error;

use crate::coalition::{
    coalition_graph, max_coalition_number, BoundPolicy, CoalitionCertificate, Partition,
    PartitionError, SolveStatus, SolverConfig,
};
use crate::domination::{domination_number, restrained_domination_number, DominationKind};
use crate::families::{free_trees, FamilyError};
use crate::graph::Graph;

/// Number of connected graphs of order `n` up to isomorphism, for `n <= 9`.
pub fn expected_connected_count(n: usize) -> Option<usize> {
    [0, 1, 1, 2, 6, 21, 112, 853, 11117, 261080].get(n).copied()
}

/// Number of trees of order `n` up to isomorphism, for `n <= 16`.
pub fn expected_tree_count(n: usize) -> Option<usize> {
    [
        0, 1, 1, 1, 2, 3, 6, 11, 23, 47, 106, 235, 551, 1301, 3159, 7741, 19320,
    ]
    .get(n)
    .copied()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurveyError {
    #[error("record {id} is incomplete ({reason})")]
    Incomplete { id: String, reason: String },
    #[error(transparent)]
    Family(#[from] FamilyError),
}

#[derive(Debug, Clone)]
pub struct SurveyOptions {
    pub config: SolverConfig,
    /// Cap the `RC` search at the `C` just computed.
    pub cap_rc_by_c: bool,
    pub parallel: bool,
    pub keep_certificates: bool,
}

impl Default for SurveyOptions {
    fn default() -> Self {
        SurveyOptions {
            config: SolverConfig::default().with_time_budget(Duration::from_secs(10)),
            cap_rc_by_c: true,
            parallel: true,
            keep_certificates: true,
        }
    }
}

impl SurveyOptions {
    /// Only the trivial `n` bound: values are then independent of every
    /// published bound, so those bounds can be checked against them.
    pub fn unbounded() -> Self {
        let mut o = SurveyOptions::default();
        o.config.bounds = BoundPolicy::OrderOnly;
        o.cap_rc_by_c = false;
        o
    }
}

/// Invariants of one surveyed graph.
#[derive(Debug, Clone)]
pub struct SurveyRecord {
    pub id: String,
    pub graph: Graph,
    pub n: usize,
    pub connected: bool,
    pub min_degree: usize,
    pub max_degree: usize,
    pub gamma: usize,
    pub gamma_r: usize,
    pub c: Option<usize>,
    pub rc: Option<usize>,
    pub c_status: SolveStatus,
    pub rc_status: SolveStatus,
    pub nodes: u64,
    pub elapsed: Duration,
    pub c_certificate: Option<CoalitionCertificate>,
    pub rc_certificate: Option<CoalitionCertificate>,
}

impl SurveyRecord {
    /// `C − RC`, when both are known.
    pub fn d(&self) -> Option<usize> {
        Some(self.c?.checked_sub(self.rc?).expect("RC(G) <= C(G)"))
    }

    /// Budget overrun, infeasibility or a disconnected input.
    pub fn flag(&self) -> Option<String> {
        if !self.connected {
            return Some("disconnected".into());
        }
        for (name, status) in [("C", self.c_status), ("RC", self.rc_status)] {
            match status {
                SolveStatus::Optimal => {}
                SolveStatus::Infeasible => return Some(format!("{name} infeasible")),
                SolveStatus::BudgetExceeded => return Some(format!("{name} budget exceeded")),
            }
        }
        None
    }

    /// Published bounds that the computed values violate, if any.
    pub fn bound_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let (Some(c), Some(rc)) = (self.c, self.rc) else {
            return out;
        };
        if rc > c {
            out.push(format!("RC = {rc} > C = {c}"));
        }
        if self.gamma_r >= 2 && rc > self.n + 2 - self.gamma_r {
            out.push(format!(
                "RC = {rc} > n - gamma_r + 2 = {}",
                self.n + 2 - self.gamma_r
            ));
        }
        if self.min_degree == 1 && rc > self.max_degree + 2 {
            out.push(format!("RC = {rc} > Delta + 2 = {}", self.max_degree + 2));
        }
        // C <= (Δ+3)²/4, compared without rounding
        if 4 * c > (self.max_degree + 3) * (self.max_degree + 3) {
            out.push(format!(
                "C = {c} > (Delta + 3)^2 / 4 with Delta = {}",
                self.max_degree
            ));
        }
        out
    }

    pub const CSV_HEADER: &'static str =
        "id,graph6,n,connected,min_degree,max_degree,gamma,gamma_r,C,RC,d,status,nodes";

    /// One CSV line; wall time is left out so output is reproducible.
    pub fn csv_row(&self) -> String {
        let opt = |v: Option<usize>| v.map_or_else(String::new, |v| v.to_string());
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.id,
            self.graph.to_graph6(),
            self.n,
            self.connected,
            self.min_degree,
            self.max_degree,
            self.gamma,
            self.gamma_r,
            opt(self.c),
            opt(self.rc),
            opt(self.d()),
            self.flag().unwrap_or_else(|| "ok".into()),
            self.nodes
        )
    }
}

/// Computes every invariant of one graph.
pub fn survey_one(id: String, g: &Graph, opts: &SurveyOptions) -> SurveyRecord {
    let c = max_coalition_number(g, DominationKind::Dominating, &opts.config);
    let mut rc_config = opts.config.clone();
    if opts.cap_rc_by_c {
        if let Some(cv) = c.value {
            rc_config.upper_bound = Some(rc_config.upper_bound.map_or(cv, |u| u.min(cv)));
        }
    }
    let rc = max_coalition_number(g, DominationKind::Restrained, &rc_config);
    SurveyRecord {
        id,
        graph: g.clone(),
        n: g.order(),
        connected: g.is_connected(),
        min_degree: g.min_degree(),
        max_degree: g.max_degree(),
        gamma: domination_number(g),
        gamma_r: restrained_domination_number(g).expect("V is always an RD-set"),
        c: c.value,
        rc: rc.value,
        c_status: c.status,
        rc_status: rc.status,
        nodes: c.stats.nodes + rc.stats.nodes,
        elapsed: c.stats.elapsed + rc.stats.elapsed,
        c_certificate: c.certificate.filter(|_| opts.keep_certificates),
        rc_certificate: rc.certificate.filter(|_| opts.keep_certificates),
    }
}

/// One record per input graph, in input order. The parallel path hands
/// graphs to a worker pool and collects in order, so both paths give the
/// same output.
pub fn survey(graphs: &[(String, Graph)], opts: &SurveyOptions) -> Vec<SurveyRecord> {
    if opts.parallel {
        graphs
            .par_iter()
            .map(|(id, g)| survey_one(id.clone(), g, opts))
            .collect()
    } else {
        graphs
            .iter()
            .map(|(id, g)| survey_one(id.clone(), g, opts))
            .collect()
    }
}

/// All trees with `min_n <= n <= max_n`, labelled `T<n>-<index>`.
pub fn tree_corpus(min_n: usize, max_n: usize) -> Result<Vec<(String, Graph)>, SurveyError> {
    let mut out = Vec::new();
    for n in min_n..=max_n {
        for (i, t) in free_trees(n)?.enumerate() {
            out.push((format!("T{n}-{i}"), t));
        }
    }
    Ok(out)
}

/// What a distribution table counts per graph order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    /// `d = C − RC`
    Difference,
    /// `RC`
    Rc,
}

/// Counts of graphs per `(order, value)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistributionTable {
    pub metric: Metric,
    counts: BTreeMap<usize, BTreeMap<usize, usize>>,
}

/// Orientation and labels for rendering a table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    /// One row per order, one column per value, then a total column.
    OrdersAsRows { total_label: &'static str },
    /// One column per order, one row per value, then a total row.
    OrdersAsColumns { total_label: &'static str },
}

impl DistributionTable {
    fn build(records: &[SurveyRecord], metric: Metric) -> Result<DistributionTable, SurveyError> {
        let mut counts: BTreeMap<usize, BTreeMap<usize, usize>> = BTreeMap::new();
        for r in records {
            if let Some(reason) = r.flag() {
                return Err(SurveyError::Incomplete {
                    id: r.id.clone(),
                    reason,
                });
            }
            let value = match metric {
                Metric::Difference => r.d(),
                Metric::Rc => r.rc,
            }
            .expect("unflagged records carry both values");
            *counts.entry(r.n).or_default().entry(value).or_default() += 1;
        }
        Ok(DistributionTable { metric, counts })
    }

    pub fn count(&self, n: usize, value: usize) -> usize {
        self.counts
            .get(&n)
            .and_then(|row| row.get(&value))
            .copied()
            .unwrap_or(0)
    }

    pub fn total(&self, n: usize) -> usize {
        self.counts.get(&n).map_or(0, |row| row.values().sum())
    }

    pub fn orders(&self) -> Vec<usize> {
        self.counts.keys().copied().collect()
    }

    /// Counts for order `n` over `values`.
    pub fn row(&self, n: usize, values: impl IntoIterator<Item = usize>) -> Vec<usize> {
        values.into_iter().map(|v| self.count(n, v)).collect()
    }

    /// Every value from the smallest to the largest observed (0 first for
    /// differences).
    pub fn values(&self) -> Vec<usize> {
        let seen = self.counts.values().flat_map(|row| row.keys().copied());
        let (lo, hi) = seen.fold((usize::MAX, 0), |(lo, hi), v| (lo.min(v), hi.max(v)));
        if lo == usize::MAX {
            return Vec::new();
        }
        let lo = if self.metric == Metric::Difference {
            0
        } else {
            lo
        };
        (lo..=hi).collect()
    }

    /// CSV with a header row. With `dots`, zero cells print as `.`.
    pub fn to_csv(&self, layout: Layout, dots: bool) -> String {
        let cell = |c: usize| {
            if c == 0 && dots {
                ".".to_string()
            } else {
                c.to_string()
            }
        };
        let value_name = match self.metric {
            Metric::Difference => "d",
            Metric::Rc => "RC",
        };
        let orders = self.orders();
        let values = self.values();
        let mut out = String::new();
        match layout {
            Layout::OrdersAsRows { total_label } => {
                let _ = write!(out, "n\\{value_name}");
                for v in &values {
                    let _ = write!(out, ",{v}");
                }
                let _ = writeln!(out, ",{total_label}");
                for &n in &orders {
                    let _ = write!(out, "{n}");
                    for &v in &values {
                        let _ = write!(out, ",{}", cell(self.count(n, v)));
                    }
                    let _ = writeln!(out, ",{}", self.total(n));
                }
            }
            Layout::OrdersAsColumns { total_label } => {
                let _ = write!(out, "{value_name}\\n");
                for n in &orders {
                    let _ = write!(out, ",{n}");
                }
                out.push('\n');
                for &v in &values {
                    let _ = write!(out, "{v}");
                    for &n in &orders {
                        let _ = write!(out, ",{}", cell(self.count(n, v)));
                    }
                    out.push('\n');
                }
                let _ = write!(out, "{total_label}");
                for &n in &orders {
                    let _ = write!(out, ",{}", self.total(n));
                }
                out.push('\n');
            }
        }
        out
    }
}

/// Distribution of `d = C − RC` per order. Fails on any flagged record.
pub fn table_diff(records: &[SurveyRecord]) -> Result<DistributionTable, SurveyError> {
    DistributionTable::build(records, Metric::Difference)
}

/// Distribution of `RC` per order. Fails on any flagged record.
pub fn table_rc(records: &[SurveyRecord]) -> Result<DistributionTable, SurveyError> {
    DistributionTable::build(records, Metric::Rc)
}

/// First graph in `corpus` with `C − RC = k`, solved in order.
pub fn find_gap_witness<'a, I>(corpus: I, k: usize, opts: &SurveyOptions) -> Option<SurveyRecord>
where
    I: IntoIterator<Item = &'a (String, Graph)>,
{
    corpus
        .into_iter()
        .map(|(id, g)| survey_one(id.clone(), g, opts))
        .find(|r| r.flag().is_none() && r.d() == Some(k))
}

/// Coalition graph of `partition` in Graphviz DOT, one node per class
/// labelled with its vertex set.
pub fn export_dot(
    g: &Graph,
    partition: &Partition,
    kind: DominationKind,
) -> Result<String, PartitionError> {
    let cg = coalition_graph(g, partition, kind)?;
    let mut out = String::new();
    let _ = writeln!(out, "graph {kind}_coalition_graph {{");
    for (i, class) in partition.classes().iter().enumerate() {
        let _ = writeln!(out, "  c{i} [label=\"{class}\"];");
    }
    for (i, j) in cg.edges() {
        let _ = writeln!(out, "  c{i} -- c{j};");
    }
    out.push_str("}\n");
    Ok(out)
}
