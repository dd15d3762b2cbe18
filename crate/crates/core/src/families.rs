//! Parametric graph families, free-tree enumeration, and known closed forms
//! for the restrained coalition number.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{Graph, MAX_VERTICES};

/// Largest tree order [`free_trees`] accepts.
pub const MAX_TREE_ORDER: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("{family} needs {requirement}, got {got}")]
    Parameter {
        family: &'static str,
        requirement: &'static str,
        got: String,
    },
    #[error(
        "cannot parse family `{0}` (expected e.g. path:6, cycle:5, star:4, complete:3, kbip:3,2)"
    )]
    Syntax(String),
}

fn param_err(
    family: &'static str,
    requirement: &'static str,
    got: impl fmt::Display,
) -> FamilyError {
    FamilyError::Parameter {
        family,
        requirement,
        got: got.to_string(),
    }
}

/// A named graph family member. Orders follow the usual convention: `Star(n)`
/// has `n` vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilySpec {
    Path(usize),
    Cycle(usize),
    Star(usize),
    Complete(usize),
    CompleteBipartite(usize, usize),
}

impl FamilySpec {
    pub fn order(&self) -> usize {
        match *self {
            FamilySpec::Path(n)
            | FamilySpec::Cycle(n)
            | FamilySpec::Star(n)
            | FamilySpec::Complete(n) => n,
            FamilySpec::CompleteBipartite(r, s) => r + s,
        }
    }

    fn validate(&self) -> Result<(), FamilyError> {
        let n = self.order();
        match *self {
            FamilySpec::Cycle(n) if n < 3 => Err(param_err("cycle", "n >= 3", n)),
            FamilySpec::CompleteBipartite(r, s) if s < 1 || r < s => Err(param_err(
                "complete bipartite",
                "r >= s >= 1",
                format!("{r},{s}"),
            )),
            _ if !(1..=MAX_VERTICES).contains(&n) => Err(param_err("graph", "1 <= n <= 64", n)),
            _ => Ok(()),
        }
    }

    /// Paths and cycles are numbered consecutively, the star center is 0, and
    /// the bipartite sides are `0..r` and `r..r+s`.
    pub fn build(&self) -> Result<Graph, FamilyError> {
        self.validate()?;
        let n = self.order();
        let mut edges = Vec::new();
        match *self {
            FamilySpec::Path(n) => edges.extend((1..n).map(|i| (i - 1, i))),
            FamilySpec::Cycle(n) => edges.extend((0..n).map(|i| (i, (i + 1) % n))),
            FamilySpec::Star(n) => edges.extend((1..n).map(|i| (0, i))),
            FamilySpec::Complete(n) => {
                for i in 0..n {
                    edges.extend((i + 1..n).map(|j| (i, j)));
                }
            }
            FamilySpec::CompleteBipartite(r, s) => {
                for i in 0..r {
                    edges.extend((r..r + s).map(|j| (i, j)));
                }
            }
        }
        Ok(Graph::from_edges(n, &edges).expect("family parameters validated"))
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FamilySpec::Path(n) => write!(f, "P{n}"),
            FamilySpec::Cycle(n) => write!(f, "C{n}"),
            FamilySpec::Star(n) => write!(f, "S{n}"),
            FamilySpec::Complete(n) => write!(f, "K{n}"),
            FamilySpec::CompleteBipartite(r, s) => write!(f, "K{r}_{s}"),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = FamilyError;

    /// Accepts `path:6`, `cycle:5`, `star:4`, `complete:3`, `kbip:3,2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let syntax = || FamilyError::Syntax(s.to_string());
        let (name, args) = s.split_once(':').ok_or_else(syntax)?;
        let nums: Vec<usize> = args
            .split(',')
            .map(|a| a.trim().parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|_| syntax())?;
        let spec = match (name.to_ascii_lowercase().as_str(), nums.as_slice()) {
            ("path" | "p", [n]) => FamilySpec::Path(*n),
            ("cycle" | "c", [n]) => FamilySpec::Cycle(*n),
            ("star" | "s", [n]) => FamilySpec::Star(*n),
            ("complete" | "k", [n]) => FamilySpec::Complete(*n),
            ("kbip" | "bipartite" | "complete-bipartite", [r, s]) => {
                FamilySpec::CompleteBipartite(*r, *s)
            }
            _ => return Err(syntax()),
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Known value of `RC(C_n)`: 3 for n = 3, 5; 4 for n = 4, 8; 5 for
/// n = 7, 11; 6 otherwise.
pub fn rc_cycle_expected(n: usize) -> Result<usize, FamilyError> {
    match n {
        0..=2 => Err(param_err("cycle", "n >= 3", n)),
        3 | 5 => Ok(3),
        4 | 8 => Ok(4),
        7 | 11 => Ok(5),
        _ => Ok(6),
    }
}

/// Known value of `RC(P_n)`: the restrained coalition graph of a path is
/// `S_2` for 2 <= n <= 5 and `S_3` from n = 6 on.
pub fn rc_path_expected(n: usize) -> Result<usize, FamilyError> {
    match n {
        0..=1 => Err(param_err("path", "n >= 2", n)),
        2..=5 => Ok(2),
        _ => Ok(3),
    }
}

/// Upper bound `C(C_n) <= 6`.
pub fn cn_cycle_upper(n: usize) -> Result<usize, FamilyError> {
    if n < 3 {
        return Err(param_err("cycle", "n >= 3", n));
    }
    Ok(6)
}

/// Iterator over one tree per isomorphism class on `n` vertices.
///
/// Trees are produced as canonical level sequences rooted at a center and
/// advanced with the constant-amortized-time successor of Wright, Richmond,
/// Odlyzko and McKay. Vertices are numbered in preorder, so vertex 0 is the
/// root and every other vertex's parent has a smaller index.
pub fn free_trees(n: usize) -> Result<FreeTrees, FamilyError> {
    if !(1..=MAX_TREE_ORDER).contains(&n) {
        return Err(param_err("free trees", "1 <= n <= 16", n));
    }
    let layout = if n == 1 {
        None
    } else {
        // path rooted at its center
        let mut l: Vec<usize> = (0..=n / 2).collect();
        l.extend(1..n.div_ceil(2));
        Some(l)
    };
    Ok(FreeTrees {
        layout,
        single: n == 1,
    })
}

pub struct FreeTrees {
    layout: Option<Vec<usize>>,
    single: bool,
}

impl FreeTrees {
    /// Like `next`, but yields the level sequence instead of the graph.
    pub fn next_level_sequence(&mut self) -> Option<Vec<usize>> {
        if self.single {
            self.single = false;
            return Some(vec![0]);
        }
        let candidate = self.layout.take()?;
        let tree = next_valid_tree(candidate)?;
        self.layout = next_rooted_tree(&tree, None);
        Some(tree)
    }
}

impl Iterator for FreeTrees {
    type Item = Graph;

    fn next(&mut self) -> Option<Graph> {
        self.next_level_sequence()
            .map(|l| level_sequence_to_graph(&l))
    }
}

/// Builds the rooted tree whose preorder depths are `levels`.
pub fn level_sequence_to_graph(levels: &[usize]) -> Graph {
    let mut stack: Vec<usize> = Vec::new();
    let mut edges = Vec::with_capacity(levels.len().saturating_sub(1));
    for (i, &level) in levels.iter().enumerate() {
        while let Some(&top) = stack.last() {
            if levels[top] >= level {
                stack.pop();
            } else {
                break;
            }
        }
        if let Some(&parent) = stack.last() {
            edges.push((parent, i));
        }
        stack.push(i);
    }
    Graph::from_edges(levels.len(), &edges).expect("level sequence describes a tree")
}

/// Beyer–Hedetniemi successor of a rooted level sequence, changing position
/// `p` (default: the last position whose level exceeds 1).
fn next_rooted_tree(pred: &[usize], p: Option<usize>) -> Option<Vec<usize>> {
    let p = match p {
        Some(p) => p,
        None => {
            let mut p = pred.len() - 1;
            while pred[p] == 1 {
                p -= 1;
            }
            p
        }
    };
    if p == 0 {
        return None;
    }
    let mut q = p - 1;
    while pred[q] != pred[p] - 1 {
        q -= 1;
    }
    let mut result = pred.to_vec();
    // repeat the subtree ending at q from position p onward
    for i in p..result.len() {
        result[i] = result[i - p + q];
    }
    Some(result)
}

/// Splits off the first subtree of the root: returns the subtree (levels
/// shifted up by one) and the remaining tree.
fn split_tree(layout: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let m = layout
        .iter()
        .enumerate()
        .skip(1)
        .filter(|&(_, &l)| l == 1)
        .nth(1)
        .map_or(layout.len(), |(i, _)| i);
    let left = layout[1..m].iter().map(|&l| l - 1).collect();
    let mut rest = vec![0];
    rest.extend_from_slice(&layout[m..]);
    (left, rest)
}

/// Returns `candidate` if it is the canonical center-rooted form of a free
/// tree, otherwise jumps to the next candidate that is.
fn next_valid_tree(candidate: Vec<usize>) -> Option<Vec<usize>> {
    let (left, rest) = split_tree(&candidate);
    let left_height = left.iter().max().copied().unwrap_or(0);
    let rest_height = rest.iter().max().copied().unwrap_or(0);
    let mut valid = rest_height >= left_height;
    if valid
        && rest_height == left_height
        && (left.len() > rest.len() || (left.len() == rest.len() && left > rest))
    {
        valid = false;
    }
    if valid {
        return Some(candidate);
    }
    let p = left.len();
    let mut next = next_rooted_tree(&candidate, Some(p))?;
    if candidate[p] > 2 {
        let (new_left, _) = split_tree(&next);
        let new_left_height = new_left.iter().max().copied().unwrap_or(0);
        let len = next.len();
        let suffix = new_left_height + 1;
        for (i, level) in (1..=suffix).enumerate() {
            next[len - suffix + i] = level;
        }
    }
    Some(next)
}
