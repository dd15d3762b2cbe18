//! Coalition partitions: representation, verification, coalition graphs and
//! exact solvers for `C(G)` and `RC(G)`.
//!
//! A class that passes the predicate must be a singleton and needs no
//! partner. Every other class needs a partner: a second non-qualifying class
//! whose union with it qualifies.

mod oracle;
mod solver;

pub use oracle::{naive_max_oracle, OracleError, NAIVE_ORACLE_MAX_VERTICES};
pub use solver::{
    exists_partition_of_size, max_coalition_number, upper_bound, BoundPolicy, SolveResult,
    SolveStats, SolveStatus, SolverConfig,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domination::DominationKind;
use crate::graph::{Graph, VertexSet, MAX_VERTICES};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("partition must cover 1..=64 vertices, got {0}")]
    VertexCount(usize),
    #[error("class {0} is empty")]
    EmptyClass(usize),
    #[error("vertex {0} appears in more than one class")]
    Overlap(usize),
    #[error("vertex {0} is not covered")]
    Uncovered(usize),
    #[error("vertex {0} is outside the vertex range")]
    OutOfRange(usize),
    #[error("partition has {partition} vertices but the graph has {graph}")]
    OrderMismatch { partition: usize, graph: usize },
}

/// A partition of `{0, ..., n-1}` into nonempty classes labelled `0..k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    assignment: Vec<usize>,
    classes: Vec<VertexSet>,
}

impl Partition {
    /// From a per-vertex class index. Labels must be dense: every index below
    /// the largest one must be used.
    pub fn from_assignment(assignment: Vec<usize>) -> Result<Partition, PartitionError> {
        let n = assignment.len();
        if n == 0 || n > MAX_VERTICES {
            return Err(PartitionError::VertexCount(n));
        }
        let k = assignment.iter().max().map_or(0, |&m| m + 1);
        if k > n {
            return Err(PartitionError::EmptyClass(
                (0..k).find(|c| !assignment.contains(c)).unwrap_or(0),
            ));
        }
        let mut classes = vec![VertexSet::EMPTY; k];
        for (v, &c) in assignment.iter().enumerate() {
            classes[c].insert(v);
        }
        if let Some(c) = classes.iter().position(|s| s.is_empty()) {
            return Err(PartitionError::EmptyClass(c));
        }
        Ok(Partition {
            assignment,
            classes,
        })
    }

    /// From explicit classes, which must be nonempty, disjoint and cover
    /// `0..n`.
    pub fn from_classes(n: usize, classes: Vec<VertexSet>) -> Result<Partition, PartitionError> {
        if n == 0 || n > MAX_VERTICES {
            return Err(PartitionError::VertexCount(n));
        }
        let full = VertexSet::full(n);
        let mut seen = VertexSet::EMPTY;
        let mut assignment = vec![usize::MAX; n];
        for (c, &s) in classes.iter().enumerate() {
            if s.is_empty() {
                return Err(PartitionError::EmptyClass(c));
            }
            if let Some(v) = s.difference(full).first() {
                return Err(PartitionError::OutOfRange(v));
            }
            if let Some(v) = s.intersection(seen).first() {
                return Err(PartitionError::Overlap(v));
            }
            seen = seen.union(s);
            for v in s {
                assignment[v] = c;
            }
        }
        if let Some(v) = full.difference(seen).first() {
            return Err(PartitionError::Uncovered(v));
        }
        Ok(Partition {
            assignment,
            classes,
        })
    }

    /// The partition into `n` singletons.
    pub fn singletons(n: usize) -> Result<Partition, PartitionError> {
        Partition::from_assignment((0..n).collect())
    }

    /// Relabels classes in order of first appearance (restricted growth form).
    pub fn canonical(&self) -> Partition {
        let mut map = vec![usize::MAX; self.classes.len()];
        let mut next = 0;
        let assignment = self
            .assignment
            .iter()
            .map(|&c| {
                if map[c] == usize::MAX {
                    map[c] = next;
                    next += 1;
                }
                map[c]
            })
            .collect();
        Partition::from_assignment(assignment).expect("relabeling keeps classes nonempty")
    }

    pub fn order(&self) -> usize {
        self.assignment.len()
    }

    /// Number of classes.
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn classes(&self) -> &[VertexSet] {
        &self.classes
    }

    pub fn class(&self, i: usize) -> VertexSet {
        self.classes[i]
    }

    pub fn class_of(&self, v: usize) -> usize {
        self.assignment[v]
    }

    fn check_order(&self, g: &Graph) -> Result<(), PartitionError> {
        if self.order() != g.order() {
            return Err(PartitionError::OrderMismatch {
                partition: self.order(),
                graph: g.order(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoalitionError {
    #[error("coalition operands must be nonempty")]
    EmptyOperand,
    #[error("coalition operands overlap at vertex {0}")]
    Overlap(usize),
}

/// `a` and `b` form a coalition: neither passes the predicate, their union
/// does.
pub fn is_coalition(
    g: &Graph,
    a: VertexSet,
    b: VertexSet,
    kind: DominationKind,
) -> Result<bool, CoalitionError> {
    if a.is_empty() || b.is_empty() {
        return Err(CoalitionError::EmptyOperand);
    }
    if let Some(v) = a.intersection(b).first() {
        return Err(CoalitionError::Overlap(v));
    }
    Ok(forms_coalition(g, a, b, kind))
}

#[inline]
fn forms_coalition(g: &Graph, a: VertexSet, b: VertexSet, kind: DominationKind) -> bool {
    !kind.qualifies(g, a) && !kind.qualifies(g, b) && kind.qualifies(g, a.union(b))
}

/// Why a class is allowed in a coalition partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Justification {
    /// A singleton that passes the predicate on its own.
    SelfSufficient,
    /// Forms a coalition with the class at this index.
    Partner(usize),
}

/// Broken rule found while checking a partition or certificate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("class {class} passes the predicate but has {size} vertices (qualifying classes must be singletons)")]
    QualifyingClassNotSingleton { class: usize, size: usize },
    #[error("class {class} does not pass the predicate and forms a coalition with no other class")]
    NoPartner { class: usize },
    #[error("class {class} is marked self-sufficient but is not a qualifying singleton")]
    BadSelfSufficient { class: usize },
    #[error("classes {class} and {partner} do not form a coalition")]
    BadPartner { class: usize, partner: usize },
    #[error("certificate lists {justifications} justifications for {classes} classes")]
    JustificationCount {
        justifications: usize,
        classes: usize,
    },
    #[error("certificate reports value {value} but the partition has {classes} classes")]
    ValueMismatch { value: usize, classes: usize },
    #[error("certificate is for {certificate} coalitions, expected {expected}")]
    KindMismatch {
        certificate: DominationKind,
        expected: DominationKind,
    },
}

/// A partition together with a justification for each class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoalitionCertificate {
    pub kind: DominationKind,
    pub partition: Partition,
    pub justification: Vec<Justification>,
}

impl CoalitionCertificate {
    /// Number of classes.
    pub fn value(&self) -> usize {
        self.partition.len()
    }

    /// Re-checks every justification against `g`, including both sides of
    /// each partner pair.
    pub fn verify(&self, g: &Graph) -> Result<(), Violation> {
        self.partition.check_order(g)?;
        let k = self.partition.len();
        if self.justification.len() != k {
            return Err(Violation::JustificationCount {
                justifications: self.justification.len(),
                classes: k,
            });
        }
        for (i, j) in self.justification.iter().enumerate() {
            let class = self.partition.class(i);
            match *j {
                Justification::SelfSufficient => {
                    if class.len() != 1 || !self.kind.qualifies(g, class) {
                        return Err(Violation::BadSelfSufficient { class: i });
                    }
                }
                Justification::Partner(p) => {
                    if p >= k
                        || p == i
                        || !forms_coalition(g, class, self.partition.class(p), self.kind)
                    {
                        return Err(Violation::BadPartner {
                            class: i,
                            partner: p,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> CertificateJson {
        CertificateJson {
            n: self.partition.order(),
            kind: self.kind,
            value: self.value(),
            assignment: self.partition.assignment().to_vec(),
            justification: self
                .justification
                .iter()
                .enumerate()
                .map(|(class, j)| match *j {
                    Justification::SelfSufficient => JustificationJson {
                        class,
                        self_sufficient: true,
                        partner: None,
                    },
                    Justification::Partner(p) => JustificationJson {
                        class,
                        self_sufficient: false,
                        partner: Some(p),
                    },
                })
                .collect(),
        }
    }

    /// Rebuilds a certificate from its JSON form. Structural consistency is
    /// checked here; call [`CoalitionCertificate::verify`] for the graph.
    pub fn from_json(json: &CertificateJson) -> Result<CoalitionCertificate, Violation> {
        let partition = Partition::from_assignment(json.assignment.clone())?;
        if json.n != partition.order() {
            return Err(PartitionError::VertexCount(json.n).into());
        }
        if json.value != partition.len() {
            return Err(Violation::ValueMismatch {
                value: json.value,
                classes: partition.len(),
            });
        }
        if json.justification.len() != partition.len() {
            return Err(Violation::JustificationCount {
                justifications: json.justification.len(),
                classes: partition.len(),
            });
        }
        let mut justification = vec![Justification::SelfSufficient; partition.len()];
        for (i, j) in json.justification.iter().enumerate() {
            if j.class != i {
                return Err(Violation::JustificationCount {
                    justifications: json.justification.len(),
                    classes: partition.len(),
                });
            }
            justification[i] = match (j.self_sufficient, j.partner) {
                (true, None) => Justification::SelfSufficient,
                (false, Some(p)) => Justification::Partner(p),
                _ => return Err(Violation::BadSelfSufficient { class: i }),
            };
        }
        Ok(CoalitionCertificate {
            kind: json.kind,
            partition,
            justification,
        })
    }
}

/// Serialized certificate. Field order is part of the format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub n: usize,
    pub kind: DominationKind,
    pub value: usize,
    pub assignment: Vec<usize>,
    pub justification: Vec<JustificationJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JustificationJson {
    pub class: usize,
    #[serde(rename = "self")]
    pub self_sufficient: bool,
    pub partner: Option<usize>,
}

/// Checks that `partition` is a coalition partition of `kind` and returns a
/// certificate. Partners are the smallest-index class that works.
pub fn verify_partition(
    g: &Graph,
    partition: &Partition,
    kind: DominationKind,
) -> Result<CoalitionCertificate, Violation> {
    partition.check_order(g)?;
    let classes = partition.classes();
    let qualifying: Vec<bool> = classes.iter().map(|&s| kind.qualifies(g, s)).collect();
    let mut justification = Vec::with_capacity(classes.len());
    for (i, &class) in classes.iter().enumerate() {
        if qualifying[i] {
            if class.len() != 1 {
                return Err(Violation::QualifyingClassNotSingleton {
                    class: i,
                    size: class.len(),
                });
            }
            justification.push(Justification::SelfSufficient);
            continue;
        }
        let partner = (0..classes.len())
            .find(|&j| j != i && !qualifying[j] && kind.qualifies(g, class.union(classes[j])));
        match partner {
            Some(j) => justification.push(Justification::Partner(j)),
            None => return Err(Violation::NoPartner { class: i }),
        }
    }
    Ok(CoalitionCertificate {
        kind,
        partition: partition.clone(),
        justification,
    })
}

/// One vertex per class; classes `i` and `j` are adjacent when they form a
/// coalition. Works for any partition, valid or not.
pub fn coalition_graph(
    g: &Graph,
    partition: &Partition,
    kind: DominationKind,
) -> Result<Graph, PartitionError> {
    partition.check_order(g)?;
    let classes = partition.classes();
    let mut edges = Vec::new();
    for i in 0..classes.len() {
        for j in i + 1..classes.len() {
            if forms_coalition(g, classes[i], classes[j], kind) {
                edges.push((i, j));
            }
        }
    }
    Ok(Graph::from_edges(classes.len(), &edges).expect("class count is within 1..=64"))
}

/// Center of a star graph with at least three vertices, if `g` is one.
pub fn star_center(g: &Graph) -> Option<usize> {
    let k = g.order();
    if k < 3 || g.edge_count() != k - 1 {
        return None;
    }
    (0..k).find(|&c| g.degree(c) == k - 1)
}
