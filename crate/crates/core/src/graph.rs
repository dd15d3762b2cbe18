//! Simple undirected graphs on at most 64 vertices.
//!
//! Every vertex set is a single `u64` bitmask, so neighborhood unions and
//! domination checks are a handful of word operations.

use std::fmt;

use thiserror::Error;

/// Largest supported vertex count.
pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex count {0} outside 1..=64")]
    VertexCount(usize),
    #[error("edge ({0}, {1}) has an endpoint outside 0..{2}")]
    EndpointOutOfRange(usize, usize, usize),
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("graph6: {0}")]
    Graph6(String),
}

/// A subset of vertices stored as a bitmask (bit `v` set iff `v` is a member).
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexSet(pub u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    /// The set `{0, 1, ..., n-1}`.
    #[inline]
    pub fn full(n: usize) -> VertexSet {
        debug_assert!(n <= MAX_VERTICES);
        if n == MAX_VERTICES {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    #[inline]
    pub fn singleton(v: usize) -> VertexSet {
        VertexSet(1u64 << v)
    }

    pub fn from_vertices<I: IntoIterator<Item = usize>>(vertices: I) -> VertexSet {
        VertexSet(vertices.into_iter().fold(0u64, |acc, v| acc | (1u64 << v)))
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn contains(self, v: usize) -> bool {
        v < MAX_VERTICES && (self.0 >> v) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.0 |= 1u64 << v;
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1u64 << v);
    }

    #[inline]
    pub fn union(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & !other.0)
    }

    #[inline]
    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_disjoint(self, other: VertexSet) -> bool {
        self.0 & other.0 == 0
    }

    /// Smallest member, if any.
    #[inline]
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> Members {
        Members(self.0)
    }
}

/// Iterator over the members of a [`VertexSet`] in increasing order.
#[derive(Clone)]
pub struct Members(u64);

impl Iterator for Members {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.0.count_ones() as usize;
        (c, Some(c))
    }
}

impl ExactSizeIterator for Members {}

impl IntoIterator for VertexSet {
    type Item = usize;
    type IntoIter = Members;

    fn into_iter(self) -> Members {
        self.iter()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::from_vertices(iter)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Simple undirected graph; `adj[v]` is the open neighborhood of `v`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
}

impl Graph {
    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Result<Graph, GraphError> {
        if n == 0 || n > MAX_VERTICES {
            return Err(GraphError::VertexCount(n));
        }
        Ok(Graph { n, adj: vec![0; n] })
    }

    /// Builds a graph from an edge list. Duplicate edges collapse.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::EndpointOutOfRange(u, v, n));
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            g.adj[u] |= 1 << v;
            g.adj[v] |= 1 << u;
        }
        debug_assert!(g.is_well_formed());
        Ok(g)
    }

    /// Builds a graph from raw adjacency masks, checking symmetry.
    pub fn from_adjacency(adj: Vec<u64>) -> Result<Graph, GraphError> {
        let g = Graph { n: adj.len(), adj };
        if g.n == 0 || g.n > MAX_VERTICES {
            return Err(GraphError::VertexCount(g.n));
        }
        if !g.is_well_formed() {
            return Err(GraphError::Graph6(
                "adjacency is not symmetric and loop-free".into(),
            ));
        }
        Ok(g)
    }

    /// Symmetric, irreflexive, and no bits above `n - 1`.
    pub fn is_well_formed(&self) -> bool {
        let full = VertexSet::full(self.n).0;
        self.adj.iter().enumerate().all(|(v, &a)| {
            a & !full == 0
                && (a >> v) & 1 == 0
                && VertexSet(a).iter().all(|u| (self.adj[u] >> v) & 1 == 1)
        })
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// Open neighborhood `N(v)`.
    #[inline]
    pub fn neighbors(&self, v: usize) -> VertexSet {
        VertexSet(self.adj[v])
    }

    /// Closed neighborhood `N[v] = N(v) ∪ {v}`.
    #[inline]
    pub fn closed_neighborhood(&self, v: usize) -> VertexSet {
        VertexSet(self.adj[v] | (1 << v))
    }

    /// Union of the closed neighborhoods of every member of `s`.
    #[inline]
    pub fn closed_neighborhood_of_set(&self, s: VertexSet) -> VertexSet {
        s.iter().fold(s, |acc, v| acc.union(self.neighbors(v)))
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        (self.adj[u] >> v) & 1 == 1
    }

    pub fn adjacency(&self) -> &[u64] {
        &self.adj
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|u| {
                VertexSet(self.adj[u] & !((2u64 << u).wrapping_sub(1)))
                    .iter()
                    .map(move |v| (u, v))
            })
            .collect()
    }

    /// Vertices of degree one.
    pub fn pendant_vertices(&self) -> VertexSet {
        (0..self.n).filter(|&v| self.degree(v) == 1).collect()
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = 1u64;
        let mut frontier = 1u64;
        while frontier != 0 {
            let mut next = 0u64;
            for v in VertexSet(frontier) {
                next |= self.adj[v];
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen == self.vertices().0
    }

    pub fn is_complete(&self) -> bool {
        (0..self.n).all(|v| self.degree(v) == self.n - 1)
    }

    /// The graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut adj = vec![0u64; self.n];
        for u in 0..self.n {
            for v in self.neighbors(u) {
                adj[perm[u]] |= 1 << perm[v];
            }
        }
        Graph { n: self.n, adj }
    }

    /// Induced subgraph on `keep`, renumbered in increasing vertex order.
    pub fn induced(&self, keep: VertexSet) -> Result<Graph, GraphError> {
        let index: Vec<usize> = keep.iter().collect();
        let mut pos = [usize::MAX; MAX_VERTICES];
        for (i, &v) in index.iter().enumerate() {
            pos[v] = i;
        }
        let mut g = Graph::empty(index.len())?;
        for (i, &v) in index.iter().enumerate() {
            for u in self.neighbors(v).intersection(keep) {
                g.adj[i] |= 1 << pos[u];
            }
        }
        Ok(g)
    }

    /// Standard graph6 encoding without the optional `>>graph6<<` header.
    pub fn to_graph6(&self) -> String {
        let n = self.n;
        let mut out = Vec::with_capacity(4 + (n * (n - 1) / 2).div_ceil(6));
        if n <= 62 {
            out.push(n as u8 + 63);
        } else {
            out.push(126);
            out.push(((n >> 12) & 63) as u8 + 63);
            out.push(((n >> 6) & 63) as u8 + 63);
            out.push((n & 63) as u8 + 63);
        }
        let mut group = 0u8;
        let mut filled = 0;
        for j in 1..n {
            for i in 0..j {
                group = (group << 1) | self.has_edge(i, j) as u8;
                filled += 1;
                if filled == 6 {
                    out.push(group + 63);
                    group = 0;
                    filled = 0;
                }
            }
        }
        if filled > 0 {
            out.push((group << (6 - filled)) + 63);
        }
        String::from_utf8(out).expect("graph6 bytes are ASCII")
    }

    /// Parses one graph6 string. Surrounding whitespace and an optional
    /// `>>graph6<<` header are accepted; anything else is an error.
    pub fn from_graph6(text: &str) -> Result<Graph, GraphError> {
        let err = |m: &str| GraphError::Graph6(m.to_string());
        let text = text.trim();
        let text = text.strip_prefix(">>graph6<<").unwrap_or(text);
        let bytes = text.as_bytes();
        if let Some(&b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
            return Err(GraphError::Graph6(format!("byte {b} outside 63..=126")));
        }
        let (n, body) = match bytes {
            [] => return Err(err("empty input")),
            [126, 126, ..] => return Err(err("order too large")),
            [126, rest @ ..] => {
                if rest.len() < 3 {
                    return Err(err("truncated size field"));
                }
                let n = rest[..3]
                    .iter()
                    .fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
                if n <= 62 {
                    return Err(err("non-canonical size field"));
                }
                (n, &rest[3..])
            }
            [b, rest @ ..] => ((b - 63) as usize, rest),
        };
        if n == 0 || n > MAX_VERTICES {
            return Err(GraphError::VertexCount(n));
        }
        let nbits = n * (n - 1) / 2;
        let need = nbits.div_ceil(6);
        if body.len() < need {
            return Err(err("truncated body"));
        }
        if body.len() > need {
            return Err(err("trailing bytes after body"));
        }
        let mut g = Graph::empty(n)?;
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                let byte = body[k / 6] - 63;
                if (byte >> (5 - k % 6)) & 1 == 1 {
                    g.adj[i] |= 1 << j;
                    g.adj[j] |= 1 << i;
                }
                k += 1;
            }
        }
        if k % 6 != 0 && (body[need - 1] - 63) & ((1 << (6 - k % 6)) - 1) != 0 {
            return Err(err("nonzero padding bits"));
        }
        Ok(g)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

/// Reads a graph6 stream: one graph per line, blank lines and an optional
/// header skipped. Errors carry the 1-based line number.
pub fn parse_graph6_stream(text: &str) -> Result<Vec<Graph>, (usize, GraphError)> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| Graph::from_graph6(l).map_err(|e| (i + 1, e)))
        .collect()
}
