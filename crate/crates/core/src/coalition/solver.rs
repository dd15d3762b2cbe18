//! Exact search for coalition partitions with a prescribed number of classes.
//!
//! Vertices are assigned in index order to an existing class or to the next
//! unused class label (restricted growth), so each set partition is visited
//! at most once. After every assignment the partial partition is tested
//! against necessary conditions; a full assignment is accepted only after
//! [`verify_partition`] succeeds, so pruning can never produce an invalid
//! certificate.

use std::time::{Duration, Instant};

use crate::coalition::{verify_partition, CoalitionCertificate, Partition};
use crate::domination::{restrained_domination_number, DominationKind};
use crate::graph::{Graph, VertexSet, MAX_VERTICES};

/// Which published upper bounds the optimizer may start from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundPolicy {
    /// `n`, `(Δ+3)²/4`, `Δ+2` when `δ = 1`, `n − γ_r + 2` when `γ_r ≥ 2`.
    Literature,
    /// Only the vertex count. Used when the literature bounds are themselves
    /// under test.
    OrderOnly,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SolverConfig {
    /// Abort after this many search nodes (summed over all tried sizes).
    pub node_budget: Option<u64>,
    pub time_budget: Option<Duration>,
    /// Extra caller-supplied upper bound, e.g. `C(G)` when solving `RC(G)`.
    pub upper_bound: Option<usize>,
    pub bounds: BoundPolicy,
    /// A class that passes the predicate for every completion and has two or
    /// more vertices ends the branch.
    pub prune_qualifying: bool,
    /// Restrained kind with at least three classes: all pendant vertices go
    /// to one class.
    pub prune_pendant: bool,
    /// Every class that needs a partner must still have a feasible one.
    pub prune_partner: bool,
    /// Twin vertices (equal neighborhoods apart from each other) get
    /// nondecreasing class labels in index order.
    pub break_twins: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            node_budget: None,
            time_budget: None,
            upper_bound: None,
            bounds: BoundPolicy::Literature,
            prune_qualifying: true,
            prune_pendant: true,
            prune_partner: true,
            break_twins: true,
        }
    }
}

impl SolverConfig {
    /// All sixteen on/off combinations of the prune and symmetry rules.
    pub fn prune_variants(&self) -> Vec<SolverConfig> {
        (0..16u8)
            .map(|m| SolverConfig {
                prune_qualifying: m & 1 != 0,
                prune_pendant: m & 2 != 0,
                prune_partner: m & 4 != 0,
                break_twins: m & 8 != 0,
                ..self.clone()
            })
            .collect()
    }

    pub fn with_upper_bound(mut self, ub: usize) -> Self {
        self.upper_bound = Some(ub);
        self
    }

    pub fn with_time_budget(mut self, budget: Duration) -> Self {
        self.time_budget = Some(budget);
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub nodes: u64,
    pub leaves_verified: u64,
    pub prunes_qualifying: u64,
    pub prunes_partner: u64,
    pub pendant_forced: u64,
    /// Sizes tried, in order.
    pub sizes_tried: Vec<usize>,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolveStatus {
    Optimal,
    /// No coalition partition of any size exists.
    Infeasible,
    /// Node or time budget ran out before the answer was proven.
    BudgetExceeded,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub kind: DominationKind,
    pub status: SolveStatus,
    /// The optimum when `status` is `Optimal`.
    pub value: Option<usize>,
    pub certificate: Option<CoalitionCertificate>,
    /// Upper bound the descent started from.
    pub upper_bound: usize,
    pub stats: SolveStats,
}

/// Upper bound on the coalition number of `kind` before any search.
pub fn upper_bound(g: &Graph, kind: DominationKind, config: &SolverConfig) -> usize {
    let n = g.order();
    let mut ub = n;
    if let Some(extra) = config.upper_bound {
        ub = ub.min(extra);
    }
    if config.bounds == BoundPolicy::OrderOnly {
        return ub;
    }
    let delta = g.max_degree();
    match kind {
        DominationKind::Dominating => {
            if g.is_connected() {
                ub = ub.min((delta + 3) * (delta + 3) / 4);
            }
        }
        DominationKind::Restrained => {
            if g.is_connected() && g.min_degree() == 1 {
                ub = ub.min(delta + 2);
            }
            let gamma_r = restrained_domination_number(g).expect("V is always an RD-set");
            if gamma_r >= 2 {
                ub = ub.min(n + 2 - gamma_r);
            }
        }
    }
    ub
}

/// Computes `C(G)` or `RC(G)` by testing sizes from the upper bound down.
pub fn max_coalition_number(g: &Graph, kind: DominationKind, config: &SolverConfig) -> SolveResult {
    let start = Instant::now();
    let ub = upper_bound(g, kind, config);
    let mut stats = SolveStats::default();
    let deadline = config.time_budget.map(|t| start + t);
    for k in (1..=ub).rev() {
        stats.sizes_tried.push(k);
        match search(g, k, kind, config, deadline, &mut stats) {
            Outcome::Found(cert) => {
                stats.elapsed = start.elapsed();
                return SolveResult {
                    kind,
                    status: SolveStatus::Optimal,
                    value: Some(k),
                    certificate: Some(cert),
                    upper_bound: ub,
                    stats,
                };
            }
            Outcome::Exhausted => {}
            Outcome::Aborted => {
                stats.elapsed = start.elapsed();
                return SolveResult {
                    kind,
                    status: SolveStatus::BudgetExceeded,
                    value: None,
                    certificate: None,
                    upper_bound: ub,
                    stats,
                };
            }
        }
    }
    stats.elapsed = start.elapsed();
    SolveResult {
        kind,
        status: SolveStatus::Infeasible,
        value: None,
        certificate: None,
        upper_bound: ub,
        stats,
    }
}

/// A verified coalition partition with exactly `k` classes, if one exists.
/// Returns the lexicographically least assignment vector in restricted
/// growth form. Budgets in `config` are ignored.
pub fn exists_partition_of_size(
    g: &Graph,
    k: usize,
    kind: DominationKind,
    config: &SolverConfig,
) -> Option<CoalitionCertificate> {
    let unbounded = SolverConfig {
        node_budget: None,
        time_budget: None,
        ..config.clone()
    };
    let mut stats = SolveStats::default();
    match search(g, k, kind, &unbounded, None, &mut stats) {
        Outcome::Found(cert) => Some(cert),
        Outcome::Exhausted => None,
        Outcome::Aborted => unreachable!("no budget set"),
    }
}

enum Outcome {
    Found(CoalitionCertificate),
    Exhausted,
    Aborted,
}

fn search(
    g: &Graph,
    k: usize,
    kind: DominationKind,
    config: &SolverConfig,
    deadline: Option<Instant>,
    stats: &mut SolveStats,
) -> Outcome {
    let n = g.order();
    if k == 0 || k > n {
        return Outcome::Exhausted;
    }
    let mut s = Search::new(g, k, kind, config, deadline, stats);
    match s.descend(0) {
        Step::Found => {
            let partition =
                Partition::from_assignment(s.assign[..n].iter().map(|&c| c as usize).collect())
                    .expect("search keeps labels dense");
            let cert = verify_partition(g, &partition, kind).expect("leaf was verified");
            Outcome::Found(cert)
        }
        Step::Continue => Outcome::Exhausted,
        Step::Abort => Outcome::Aborted,
    }
}

#[derive(PartialEq, Eq)]
enum Step {
    Continue,
    Found,
    Abort,
}

struct Search<'a> {
    g: &'a Graph,
    kind: DominationKind,
    k: usize,
    n: usize,
    full: u64,
    adj: [u64; MAX_VERTICES],
    closed: [u64; MAX_VERTICES],
    /// Vertices whose singleton passes the predicate.
    self_sufficient: u64,
    /// Pendant vertices; every RD-set contains all of them.
    pendants: u64,
    pendant_rule: bool,
    /// Largest closed neighborhood, `Δ + 1`.
    max_closed: usize,
    /// Closed neighborhood of vertices `v..n`, the unassigned ones once
    /// `0..v` are placed.
    suffix_dom: [u64; MAX_VERTICES + 1],
    /// Nearest smaller twin of each vertex, if any.
    twin_prev: [Option<u8>; MAX_VERTICES],
    prune_qualifying: bool,
    prune_partner: bool,
    node_budget: Option<u64>,
    deadline: Option<Instant>,
    stats: &'a mut SolveStats,

    class_sets: [u64; MAX_VERTICES],
    /// Union of closed neighborhoods of each class.
    class_dom: [u64; MAX_VERTICES],
    assign: [u8; MAX_VERTICES],
    open: usize,
    assigned: u64,
    pendant_class: Option<usize>,
}

impl<'a> Search<'a> {
    fn new(
        g: &'a Graph,
        k: usize,
        kind: DominationKind,
        config: &SolverConfig,
        deadline: Option<Instant>,
        stats: &'a mut SolveStats,
    ) -> Search<'a> {
        let n = g.order();
        let mut adj = [0u64; MAX_VERTICES];
        let mut closed = [0u64; MAX_VERTICES];
        let mut self_sufficient = 0u64;
        for v in 0..n {
            adj[v] = g.neighbors(v).bits();
            closed[v] = g.closed_neighborhood(v).bits();
            if kind.qualifies(g, VertexSet::singleton(v)) {
                self_sufficient |= 1 << v;
            }
        }
        let pendants = if kind == DominationKind::Restrained {
            g.pendant_vertices().bits()
        } else {
            0
        };
        let mut suffix_dom = [0u64; MAX_VERTICES + 1];
        for v in (0..n).rev() {
            suffix_dom[v] = suffix_dom[v + 1] | closed[v];
        }
        let mut twin_prev = [None; MAX_VERTICES];
        if config.break_twins {
            for v in 0..n {
                twin_prev[v] = (0..v)
                    .rev()
                    .find(|&u| adj[u] & !(1 << v) == adj[v] & !(1 << u))
                    .map(|u| u as u8);
            }
        }
        Search {
            g,
            kind,
            k,
            n,
            full: g.vertices().bits(),
            adj,
            closed,
            self_sufficient,
            pendants,
            pendant_rule: config.prune_pendant && pendants != 0 && k >= 3,
            max_closed: g.max_degree() + 1,
            suffix_dom,
            twin_prev,
            prune_qualifying: config.prune_qualifying,
            prune_partner: config.prune_partner,
            node_budget: config.node_budget,
            deadline,
            stats,
            class_sets: [0; MAX_VERTICES],
            class_dom: [0; MAX_VERTICES],
            assign: [0; MAX_VERTICES],
            open: 0,
            assigned: 0,
            pendant_class: None,
        }
    }

    fn descend(&mut self, v: usize) -> Step {
        self.stats.nodes += 1;
        if let Some(b) = self.node_budget {
            if self.stats.nodes > b {
                return Step::Abort;
            }
        }
        if self.stats.nodes & 0xfff == 0 {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    return Step::Abort;
                }
            }
        }
        if v == self.n {
            return self.check_leaf();
        }

        let remaining_after = self.n - v - 1;
        let bit = 1u64 << v;
        let forced = if self.pendant_rule && self.pendants & bit != 0 {
            self.pendant_class
        } else {
            None
        };
        let highest = if self.open < self.k {
            self.open
        } else {
            self.open - 1
        };
        let lowest = self.twin_prev[v].map_or(0, |u| self.assign[u as usize] as usize);
        for c in lowest..=highest {
            if let Some(p) = forced {
                if c != p {
                    continue;
                }
            }
            let opens = c == self.open;
            let open_after = self.open + opens as usize;
            if open_after + remaining_after < self.k {
                continue;
            }

            // apply
            self.assign[v] = c as u8;
            self.class_sets[c] |= bit;
            self.class_dom[c] |= self.closed[v];
            self.assigned |= bit;
            if opens {
                self.open += 1;
            }
            let set_pendant =
                self.pendant_rule && self.pendants & bit != 0 && self.pendant_class.is_none();
            if set_pendant {
                self.pendant_class = Some(c);
            } else if forced.is_some() {
                self.stats.pendant_forced += 1;
            }

            let step = if self.feasible() {
                self.descend(v + 1)
            } else {
                Step::Continue
            };

            // undo
            if set_pendant {
                self.pendant_class = None;
            }
            if opens {
                self.open -= 1;
            }
            self.assigned &= !bit;
            self.class_sets[c] &= !bit;
            self.class_dom[c] = self.dom_of(self.class_sets[c]);

            if step != Step::Continue {
                return step;
            }
        }
        Step::Continue
    }

    fn check_leaf(&mut self) -> Step {
        if self.open != self.k {
            return Step::Continue;
        }
        self.stats.leaves_verified += 1;
        let partition =
            Partition::from_assignment(self.assign[..self.n].iter().map(|&c| c as usize).collect())
                .expect("search keeps labels dense");
        if verify_partition(self.g, &partition, self.kind).is_ok() {
            Step::Found
        } else {
            Step::Continue
        }
    }

    #[inline]
    fn dom_of(&self, set: u64) -> u64 {
        VertexSet(set).iter().fold(0, |acc, u| acc | self.closed[u])
    }

    /// `set` passes the predicate however the unassigned vertices are placed
    /// (assuming none of them joins `set`'s class, which only matters for
    /// restraint and is covered by the outside-support condition).
    #[inline]
    fn surely_qualifies(&self, set: u64, dom: u64) -> bool {
        if dom != self.full {
            return false;
        }
        match self.kind {
            DominationKind::Dominating => true,
            DominationKind::Restrained => {
                // every vertex that can end up outside `set` already has a
                // neighbor placed in some other class
                let other = self.assigned & !set;
                VertexSet(self.full & !set)
                    .iter()
                    .all(|w| self.adj[w] & other != 0)
            }
        }
    }

    /// Necessary condition for two classes whose current union is `union`
    /// to end up as a coalition, with every unassigned vertex still free
    /// except for `reserve` of them, which must open classes elsewhere.
    #[inline]
    fn pair_possible(
        &self,
        union: u64,
        union_dom: u64,
        unassigned_dom: u64,
        unassigned: u64,
        reserve: usize,
    ) -> bool {
        if union_dom | unassigned_dom != self.full {
            return false;
        }
        let missing = self.full & !union_dom;
        if missing != 0 {
            // each added vertex covers at most Δ + 1 missing vertices
            let needed = (missing.count_ones() as usize).div_ceil(self.max_closed);
            if needed + reserve > unassigned.count_ones() as usize {
                return false;
            }
        }
        if self.kind == DominationKind::Restrained {
            if self.pendants & !(union | unassigned) != 0 {
                return false;
            }
            // placed vertices outside the union keep needing an outside neighbor
            let outside_placed = self.assigned & !union;
            if VertexSet(outside_placed)
                .iter()
                .any(|w| self.adj[w] & !union == 0)
            {
                return false;
            }
        }
        true
    }

    /// A class not opened yet consists of unassigned vertices only; it needs
    /// to be a qualifying singleton or have a partner.
    fn future_class_can_partner(&self, sure: u64, unassigned: u64, unassigned_dom: u64) -> bool {
        if unassigned & self.self_sufficient != 0 {
            return true;
        }
        let unopened = self.k - self.open;
        if unopened >= 2 && self.pair_possible(0, 0, unassigned_dom, unassigned, unopened - 2) {
            return true;
        }
        (0..self.open).any(|b| {
            sure & (1 << b) == 0
                && self.pair_possible(
                    self.class_sets[b],
                    self.class_dom[b],
                    unassigned_dom,
                    unassigned,
                    unopened - 1,
                )
        })
    }

    fn feasible(&mut self) -> bool {
        let k = self.open;
        let mut sure = 0u64;
        if self.prune_qualifying || self.prune_partner {
            for c in 0..k {
                if self.surely_qualifies(self.class_sets[c], self.class_dom[c]) {
                    sure |= 1 << c;
                }
            }
        }
        if self.prune_qualifying {
            let big_sure =
                (0..k).any(|c| sure & (1 << c) != 0 && self.class_sets[c].count_ones() >= 2);
            if big_sure {
                self.stats.prunes_qualifying += 1;
                return false;
            }
        }
        if !self.prune_partner {
            return true;
        }
        let unassigned = self.full & !self.assigned;
        let unassigned_dom = self.suffix_dom[self.assigned.count_ones() as usize];
        let unopened = self.k - self.open;
        let future = unopened > 0;
        if future && !self.future_class_can_partner(sure, unassigned, unassigned_dom) {
            self.stats.prunes_partner += 1;
            return false;
        }
        for a in 0..k {
            let set_a = self.class_sets[a];
            if set_a.count_ones() == 1 && self.self_sufficient & set_a != 0 {
                continue;
            }
            if sure & (1 << a) != 0 {
                // can never be part of a coalition
                self.stats.prunes_partner += 1;
                return false;
            }
            let dom_a = self.class_dom[a];
            let mut ok = future
                && self.pair_possible(set_a, dom_a, unassigned_dom, unassigned, unopened - 1);
            if !ok {
                for b in 0..k {
                    if b == a || sure & (1 << b) != 0 {
                        continue;
                    }
                    let set_b = self.class_sets[b];
                    let union_dom = dom_a | self.class_dom[b];
                    if self.pair_possible(
                        set_a | set_b,
                        union_dom,
                        unassigned_dom,
                        unassigned,
                        unopened,
                    ) {
                        ok = true;
                        break;
                    }
                }
            }
            if !ok {
                self.stats.prunes_partner += 1;
                return false;
            }
        }
        true
    }
}
