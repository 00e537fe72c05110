//! Vertex sequences and the edges they cover.
//!
//! A sequence (v_1, ..., v_k) of uniformity d covers, for each window of d+1
//! consecutive entries, the d-sets obtained by dropping one of the last d
//! entries of the window; an open sequence additionally covers its final d
//! entries as one edge, a closed one wraps around. A sequence is a valid
//! trail (tour) in a host graph when the covered edges are pairwise distinct
//! and all present in the host.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::FacetFamily;
use crate::hypergraph::{DGraph, Edge, Vertex};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TrailError {
    #[error("uniformity must be at least 1, got {0}")]
    BadUniformity(usize),
    #[error("open sequence of length {k} is shorter than d = {d}")]
    OpenTooShort { k: usize, d: usize },
    #[error("closed sequence of length {k} needs at least d + 3 = {} entries", d + 3)]
    ClosedTooShort { k: usize, d: usize },
    #[error("vertex {v} repeats at positions {first} and {second}, inside one window of {} entries", d + 1)]
    WindowRepeat {
        v: Vertex,
        first: usize,
        second: usize,
        d: usize,
    },
    #[error("vertex ids start at 1; found 0")]
    ZeroVertex,
    #[error("sequence has uniformity {seq_d} but the host graph is {host_d}-uniform")]
    UniformityMismatch { seq_d: usize, host_d: usize },
    #[error("a closed sequence has no ends")]
    NoEnds,
    #[error("the empty sequence has no ends")]
    EmptySequence,
    #[error("{0}")]
    Parse(String),
}

/// An open or closed vertex sequence of uniformity d.
///
/// Construction enforces the window invariant (no vertex repeats within any
/// d+1 consecutive entries, cyclically for closed sequences), so every
/// covered d-set is well formed. The empty open sequence is allowed; it
/// covers nothing and is the identity for gluing.
#[derive(Clone, PartialEq, Eq)]
pub struct VertexSeq {
    d: usize,
    entries: Vec<Vertex>,
    closed: bool,
}

/// One covered edge together with the window index and drop position that
/// produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Coverage {
    pub iota: usize,
    pub sigma: usize,
    pub edge: Edge,
}

/// An edge emitted more than once, with every (iota, sigma) that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DuplicateEdge {
    pub edge: Edge,
    pub positions: Vec<(usize, usize)>,
}

/// Everything `validate` found. `valid` holds exactly when both failure
/// lists are empty.
#[derive(Clone, Debug, Serialize)]
pub struct CoverageReport {
    pub valid: bool,
    pub covered: Vec<Coverage>,
    pub duplicates: Vec<DuplicateEdge>,
    pub missing_from_host: Vec<Edge>,
}

impl VertexSeq {
    pub fn new(d: usize, entries: Vec<Vertex>, closed: bool) -> Result<Self, TrailError> {
        if d < 1 {
            return Err(TrailError::BadUniformity(d));
        }
        if entries.iter().any(|&v| v == 0) {
            return Err(TrailError::ZeroVertex);
        }
        let k = entries.len();
        if closed && k < d + 3 {
            return Err(TrailError::ClosedTooShort { k, d });
        }
        if !closed && k > 0 && k < d {
            return Err(TrailError::OpenTooShort { k, d });
        }
        for j in 0..k {
            for t in 1..=d {
                let i = if closed {
                    (j + t) % k
                } else if j + t < k {
                    j + t
                } else {
                    break;
                };
                if entries[j] == entries[i] {
                    return Err(TrailError::WindowRepeat {
                        v: entries[j],
                        first: j + 1,
                        second: i + 1,
                        d,
                    });
                }
            }
        }
        Ok(VertexSeq { d, entries, closed })
    }

    pub fn open(d: usize, entries: Vec<Vertex>) -> Result<Self, TrailError> {
        VertexSeq::new(d, entries, false)
    }

    pub fn closed(d: usize, entries: Vec<Vertex>) -> Result<Self, TrailError> {
        VertexSeq::new(d, entries, true)
    }

    pub fn empty(d: usize) -> Self {
        VertexSeq {
            d: d.max(1),
            entries: Vec::new(),
            closed: false,
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn entries(&self) -> &[Vertex] {
        &self.entries
    }

    /// Largest vertex id appearing in the sequence (0 when empty).
    pub fn max_vertex(&self) -> Vertex {
        self.entries.iter().copied().max().unwrap_or(0)
    }

    /// Every covered edge with its (iota, sigma) label, iota ascending and
    /// sigma ascending within a window. Open sequences emit (k-d)*d + 1
    /// edges, closed ones k*d.
    pub fn covered_edges(&self) -> Vec<Coverage> {
        let k = self.entries.len();
        let d = self.d;
        let mut out = Vec::new();
        if k == 0 {
            return out;
        }
        let window_edge = |iota: usize, sigma: usize| {
            // window entries v_iota..v_{iota+d} (1-based), minus v_{iota+sigma}
            let vs: Vec<Vertex> = (0..=d)
                .filter(|&j| j != sigma)
                .map(|j| {
                    let idx = if self.closed {
                        (iota - 1 + j) % k
                    } else {
                        iota - 1 + j
                    };
                    self.entries[idx]
                })
                .collect();
            Edge::new(vs).expect("window entries are distinct")
        };
        if self.closed {
            for iota in 1..=k {
                for sigma in 1..=d {
                    out.push(Coverage {
                        iota,
                        sigma,
                        edge: window_edge(iota, sigma),
                    });
                }
            }
        } else {
            for iota in 1..=k.saturating_sub(d) {
                for sigma in 1..=d {
                    out.push(Coverage {
                        iota,
                        sigma,
                        edge: window_edge(iota, sigma),
                    });
                }
            }
            // the trailing d entries form one more edge
            out.push(Coverage {
                iota: k - d + 1,
                sigma: d,
                edge: Edge::new(self.entries[k - d..].to_vec())
                    .expect("window entries are distinct"),
            });
        }
        out
    }

    /// The covered edges as a set (duplicates collapsed).
    pub fn covered_set(&self) -> HashSet<Edge> {
        self.covered_edges().into_iter().map(|c| c.edge).collect()
    }

    /// Checks the sequence against a host graph, reporting every duplicate
    /// coverage and every covered edge the host is missing.
    pub fn validate(&self, host: &DGraph) -> Result<CoverageReport, TrailError> {
        if self.d != host.d() {
            return Err(TrailError::UniformityMismatch {
                seq_d: self.d,
                host_d: host.d(),
            });
        }
        let covered = self.covered_edges();
        let mut seen: HashMap<&Edge, Vec<(usize, usize)>> = HashMap::new();
        for c in &covered {
            seen.entry(&c.edge).or_default().push((c.iota, c.sigma));
        }
        let mut duplicates: Vec<DuplicateEdge> = seen
            .iter()
            .filter(|(_, pos)| pos.len() > 1)
            .map(|(e, pos)| DuplicateEdge {
                edge: (*e).clone(),
                positions: pos.clone(),
            })
            .collect();
        duplicates.sort_by(|a, b| a.edge.cmp(&b.edge));
        let mut missing: Vec<Edge> = seen
            .keys()
            .filter(|e| !host.contains(e))
            .map(|e| (*e).clone())
            .collect();
        missing.sort();
        Ok(CoverageReport {
            valid: duplicates.is_empty() && missing.is_empty(),
            covered,
            duplicates,
            missing_from_host: missing,
        })
    }

    /// First and last d entries of an open sequence.
    pub fn ends(&self) -> Result<(Vec<Vertex>, Vec<Vertex>), TrailError> {
        if self.closed {
            return Err(TrailError::NoEnds);
        }
        if self.entries.is_empty() {
            return Err(TrailError::EmptySequence);
        }
        let k = self.entries.len();
        Ok((
            self.entries[..self.d].to_vec(),
            self.entries[k - self.d..].to_vec(),
        ))
    }

    /// Number of distinct covered edges containing each vertex.
    pub fn trail_degrees(&self) -> BTreeMap<Vertex, u64> {
        let mut deg = BTreeMap::new();
        for e in self.covered_set() {
            for &v in e.vertices() {
                *deg.entry(v).or_insert(0) += 1;
            }
        }
        deg
    }

    /// True when the covered edges are pairwise distinct, i.e. the sequence
    /// is a valid trail (tour) in the complete d-graph on its own vertices.
    pub fn is_straight(&self) -> bool {
        let covered = self.covered_edges();
        let set: HashSet<&Edge> = covered.iter().map(|c| &c.edge).collect();
        set.len() == covered.len()
    }

    /// The (d+1)-sets spanned by consecutive windows, as a facet family on
    /// `1..=max_vertex()` (or on d+1 vertices when the sequence is too short
    /// to span a window).
    pub fn facets_of(&self) -> FacetFamily {
        let n = self.max_vertex().max(self.d as u32 + 1);
        self.facets_on(n).expect("windows are valid facets")
    }

    /// The window facets as a family on an explicit ambient vertex count.
    pub fn facets_on(&self, n: u32) -> Result<FacetFamily, crate::hypergraph::GraphError> {
        let k = self.entries.len();
        let d = self.d;
        let mut facets: Vec<Edge> = Vec::new();
        let mut seen = HashSet::new();
        let count = if self.closed { k } else { k.saturating_sub(d) };
        for i in 0..count {
            let vs: Vec<Vertex> = (0..=d)
                .map(|j| self.entries[if self.closed { (i + j) % k } else { i + j }])
                .collect();
            let f = Edge::new(vs).expect("window entries are distinct");
            if seen.insert(f.clone()) {
                facets.push(f);
            }
        }
        FacetFamily::new(n, d, facets)
    }

    /// The same entries in reverse order.
    pub fn reversed(&self) -> VertexSeq {
        let mut entries = self.entries.clone();
        entries.reverse();
        VertexSeq {
            d: self.d,
            entries,
            closed: self.closed,
        }
    }

    /// Plain text form: `d k open|closed` on one line, the entries on the next.
    pub fn to_text(&self) -> String {
        let mode = if self.closed { "closed" } else { "open" };
        let body = self
            .entries
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        format!("{} {} {}\n{}\n", self.d, self.entries.len(), mode, body)
    }

    pub fn parse_text(text: &str) -> Result<VertexSeq, TrailError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| TrailError::Parse("empty sequence file".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(TrailError::Parse(format!(
                "header must be `d k open|closed`, got {header:?}"
            )));
        }
        let d: usize = fields[0]
            .parse()
            .map_err(|_| TrailError::Parse(format!("bad uniformity {:?}", fields[0])))?;
        let k: usize = fields[1]
            .parse()
            .map_err(|_| TrailError::Parse(format!("bad length {:?}", fields[1])))?;
        let closed = match fields[2] {
            "open" => false,
            "closed" => true,
            other => {
                return Err(TrailError::Parse(format!(
                    "mode must be open or closed, got {other:?}"
                )))
            }
        };
        let body = lines.next().unwrap_or("");
        let entries: Vec<Vertex> = body
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| TrailError::Parse(format!("bad vertex id {t:?}")))
            })
            .collect::<Result<_, _>>()?;
        if entries.len() != k {
            return Err(TrailError::Parse(format!(
                "header promises {k} entries, found {}",
                entries.len()
            )));
        }
        if let Some(extra) = lines.next() {
            return Err(TrailError::Parse(format!(
                "unexpected trailing line {extra:?}"
            )));
        }
        VertexSeq::new(d, entries, closed)
    }
}

impl fmt::Debug for VertexSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mode = if self.closed { "closed" } else { "open" };
        write!(f, "VertexSeq(d={}, {mode}, {:?})", self.d, self.entries)
    }
}

#[derive(Serialize, Deserialize)]
struct RawSeq {
    d: usize,
    closed: bool,
    entries: Vec<Vertex>,
}

impl Serialize for VertexSeq {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RawSeq {
            d: self.d,
            closed: self.closed,
            entries: self.entries.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for VertexSeq {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let raw = RawSeq::deserialize(de)?;
        VertexSeq::new(raw.d, raw.entries, raw.closed).map_err(serde::de::Error::custom)
    }
}
