//! d-uniform hypergraphs ("d-graphs") on the vertex set `1..=n`.
//!
//! Edges are d-element subsets stored in canonical sorted form, the graph
//! keeps them in lexicographic order and answers membership in O(1). All
//! operations treat graphs as immutable; set operations build new graphs.

use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Vertices are positive integers; `0` is never a vertex.
pub type Vertex = u32;

/// Guard for `complete` and friends so a typo like `complete(100, 7)` fails
/// fast instead of allocating 16 billion edges.
pub const MAX_ENUMERATED_EDGES: u64 = 5_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("uniformity must be at least 1, got {0}")]
    BadUniformity(usize),
    #[error("need 1 <= d <= n, got d={d}, n={n}")]
    BadParameters { n: u32, d: usize },
    #[error("vertex {v} out of range 1..={n}")]
    VertexOutOfRange { v: Vertex, n: u32 },
    #[error("edge {0} does not have exactly {1} vertices")]
    WrongEdgeSize(Edge, usize),
    #[error("repeated vertex {v} in edge")]
    RepeatedVertex { v: Vertex },
    #[error("duplicate edge {0}")]
    DuplicateEdge(Edge),
    #[error("operands have mismatched shape: ({n1}, {d1}) vs ({n2}, {d2})")]
    ShapeMismatch { n1: u32, d1: usize, n2: u32, d2: usize },
    #[error("link set has {got} vertices, need between 0 and {d}")]
    BadLinkSet { got: usize, d: usize },
    #[error("refusing to enumerate {0} edges (cap {MAX_ENUMERATED_EDGES})")]
    TooLarge(u64),
    #[error("edge {0} is not in the graph")]
    MissingEdge(Edge),
}

/// A set of distinct vertices in canonical (sorted ascending) form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(Box<[Vertex]>);

impl Edge {
    /// Builds an edge from any vertex order; rejects repeats.
    pub fn new(mut vs: Vec<Vertex>) -> Result<Self, GraphError> {
        vs.sort_unstable();
        for w in vs.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::RepeatedVertex { v: w[0] });
            }
        }
        Ok(Edge(vs.into_boxed_slice()))
    }

    /// Caller promises `vs` is sorted ascending with no repeats.
    pub(crate) fn from_sorted(vs: Vec<Vertex>) -> Self {
        debug_assert!(vs.windows(2).all(|w| w[0] < w[1]));
        Edge(vs.into_boxed_slice())
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// True when every vertex of `other` is also in `self`.
    pub fn contains_all(&self, other: &[Vertex]) -> bool {
        other.iter().all(|&v| self.contains(v))
    }

    /// The edge with the vertices of `other` removed.
    pub fn minus(&self, other: &[Vertex]) -> Edge {
        Edge::from_sorted(
            self.0
                .iter()
                .copied()
                .filter(|v| !other.contains(v))
                .collect(),
        )
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for Edge {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Edge {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let vs = Vec::<Vertex>::deserialize(d)?;
        if !vs.windows(2).all(|w| w[0] < w[1]) {
            return Err(serde::de::Error::custom(format!(
                "edge {vs:?} is not sorted strictly ascending"
            )));
        }
        Ok(Edge::from_sorted(vs))
    }
}

/// A d-uniform hypergraph on vertices `1..=n`.
///
/// The uniformity 0 case (a single possible empty edge) is allowed so that
/// links of full-size sets have a home; the JSON loader insists on d >= 1.
#[derive(Clone)]
pub struct DGraph {
    n: u32,
    d: usize,
    edges: Vec<Edge>,
    index: HashMap<Edge, usize>,
}

impl DGraph {
    pub fn new(n: u32, d: usize, edges: Vec<Edge>) -> Result<Self, GraphError> {
        let mut edges = edges;
        edges.sort_unstable();
        let mut index = HashMap::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            if e.len() != d {
                return Err(GraphError::WrongEdgeSize(e.clone(), d));
            }
            for &v in e.vertices() {
                if v == 0 || v > n {
                    return Err(GraphError::VertexOutOfRange { v, n });
                }
            }
            if index.insert(e.clone(), i).is_some() {
                return Err(GraphError::DuplicateEdge(e.clone()));
            }
        }
        Ok(DGraph { n, d, edges, index })
    }

    pub fn empty(n: u32, d: usize) -> Self {
        DGraph {
            n,
            d,
            edges: Vec::new(),
            index: HashMap::new(),
        }
    }

    /// The complete d-graph on `[n]`: all binomial(n, d) subsets.
    pub fn complete(n: u32, d: usize) -> Result<Self, GraphError> {
        if d < 1 || d as u64 > n as u64 {
            return Err(GraphError::BadParameters { n, d });
        }
        let count = binomial(n as u64, d as u64);
        if count > MAX_ENUMERATED_EDGES {
            return Err(GraphError::TooLarge(count));
        }
        let edges = (1..=n)
            .combinations(d)
            .map(Edge::from_sorted)
            .collect::<Vec<_>>();
        Ok(DGraph {
            index: edges
                .iter()
                .enumerate()
                .map(|(i, e)| (e.clone(), i))
                .collect(),
            n,
            d,
            edges,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn contains(&self, e: &Edge) -> bool {
        self.index.contains_key(e)
    }

    /// Position of `e` in the canonical edge order.
    pub fn edge_index(&self, e: &Edge) -> Option<usize> {
        self.index.get(e).copied()
    }

    /// The link G(S): a (d - |S|)-graph whose edges are the extensions of S.
    ///
    /// Vertices of S become isolated in the result; the ambient range `1..=n`
    /// is kept so links compose without renumbering.
    pub fn link(&self, s: &[Vertex]) -> Result<DGraph, GraphError> {
        let s_edge = Edge::new(s.to_vec())?;
        if s_edge.len() > self.d {
            return Err(GraphError::BadLinkSet {
                got: s_edge.len(),
                d: self.d,
            });
        }
        for &v in s_edge.vertices() {
            if v == 0 || v > self.n {
                return Err(GraphError::VertexOutOfRange { v, n: self.n });
            }
        }
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .filter(|e| e.contains_all(s_edge.vertices()))
            .map(|e| e.minus(s_edge.vertices()))
            .collect();
        DGraph::new(self.n, self.d - s_edge.len(), edges)
    }

    /// Number of edges containing every vertex of `s`.
    pub fn degree(&self, s: &[Vertex]) -> usize {
        self.edges.iter().filter(|e| e.contains_all(s)).count()
    }

    /// Counts `|G(S)|` for every i-subset S that meets at least one edge.
    /// Subsets absent from the map have degree 0.
    pub fn level_degrees(&self, i: usize) -> HashMap<Edge, u64> {
        let mut counts: HashMap<Edge, u64> = HashMap::new();
        for e in &self.edges {
            for sub in e.vertices().iter().copied().combinations(i) {
                *counts.entry(Edge::from_sorted(sub)).or_insert(0) += 1;
            }
        }
        counts
    }

    /// (min, max) of `|G(S)|` over all i-subsets S of `[n]`.
    pub fn degree_profile(&self, i: usize) -> Result<(u64, u64), GraphError> {
        if i > self.d {
            return Err(GraphError::BadLinkSet { got: i, d: self.d });
        }
        let counts = self.level_degrees(i);
        let total_subsets = binomial(self.n as u64, i as u64);
        let max = counts.values().copied().max().unwrap_or(0);
        let min = if (counts.len() as u64) < total_subsets {
            0
        } else {
            counts.values().copied().min().unwrap_or(0)
        };
        Ok((min, max))
    }

    fn check_shape(&self, other: &DGraph) -> Result<(), GraphError> {
        if self.n != other.n || self.d != other.d {
            return Err(GraphError::ShapeMismatch {
                n1: self.n,
                d1: self.d,
                n2: other.n,
                d2: other.d,
            });
        }
        Ok(())
    }

    pub fn union(&self, other: &DGraph) -> Result<DGraph, GraphError> {
        self.check_shape(other)?;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().filter(|e| !self.contains(e)).cloned());
        DGraph::new(self.n, self.d, edges)
    }

    pub fn difference(&self, other: &DGraph) -> Result<DGraph, GraphError> {
        self.check_shape(other)?;
        let edges = self
            .edges
            .iter()
            .filter(|e| !other.contains(e))
            .cloned()
            .collect();
        DGraph::new(self.n, self.d, edges)
    }

    pub fn is_edge_disjoint(&self, other: &DGraph) -> bool {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small.edges.iter().all(|e| !large.contains(e))
    }

    pub fn with_edges_removed<'a, I>(&self, remove: I) -> Result<DGraph, GraphError>
    where
        I: IntoIterator<Item = &'a Edge>,
    {
        let mut keep: Vec<Option<&Edge>> = self.edges.iter().map(Some).collect();
        for e in remove {
            match self.edge_index(e) {
                Some(i) if keep[i].is_some() => keep[i] = None,
                _ => return Err(GraphError::MissingEdge(e.clone())),
            }
        }
        DGraph::new(self.n, self.d, keep.into_iter().flatten().cloned().collect())
    }

    pub fn with_edges_added<'a, I>(&self, add: I) -> Result<DGraph, GraphError>
    where
        I: IntoIterator<Item = &'a Edge>,
    {
        let mut edges = self.edges.clone();
        for e in add {
            if !self.contains(e) {
                edges.push(e.clone());
            }
        }
        DGraph::new(self.n, self.d, edges)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

impl fmt::Debug for DGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DGraph(n={}, d={}, {} edges)", self.n, self.d, self.len())
    }
}

impl PartialEq for DGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.d == other.d && self.edges == other.edges
    }
}

impl Eq for DGraph {}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    n: u32,
    d: usize,
    edges: Vec<Edge>,
}

impl Serialize for DGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RawGraph {
            n: self.n,
            d: self.d,
            edges: self.edges.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DGraph {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let raw = RawGraph::deserialize(de)?;
        if raw.d < 1 {
            return Err(serde::de::Error::custom(GraphError::BadUniformity(raw.d)));
        }
        DGraph::new(raw.n, raw.d, raw.edges).map_err(serde::de::Error::custom)
    }
}

/// binomial(n, k) with 128-bit intermediates; panics on overflow, which is
/// unreachable for the graph sizes this crate enumerates.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial overflow")
}
