//! Divisibility obstructions for decomposing a d-graph into extra-tight
//! pieces, and residue conditions a host must satisfy before an extra-tight
//! tour or trail can exist.
//!
//! The degree vector of a d-graph G is Deg(G) = (D_0, ..., D_{d-1}) where
//! D_i is the gcd of the degrees of all i-sets of vertices (D_0 = |G|). If G
//! decomposes into copies of F then Deg(F) divides Deg(G) componentwise, so
//! a failed division certifies that no decomposition exists.

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::hypergraph::{binomial, DGraph, Edge, GraphError, Vertex};
use crate::trails::{TrailError, VertexSeq};

/// A reason no extra-tight tour or trail can exist in a host graph. An empty
/// obstruction list means the necessary conditions all hold, not that an
/// object exists.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Obstruction {
    #[error("edge count {count} is {residue} mod {modulus}, needs {expected}")]
    EdgeCount {
        count: u64,
        modulus: u64,
        residue: u64,
        expected: u64,
    },
    #[error("edge count {count} is below the minimum {needed}")]
    TooFewEdges { count: u64, needed: u64 },
    #[error("vertex {v} has degree {degree}, which is not {expected} mod {modulus}")]
    VertexResidue {
        v: Vertex,
        degree: u64,
        expected: u64,
        modulus: u64,
    },
    #[error("start and finish share a vertex")]
    EndsNotDisjoint,
    #[error("the {which} set is not an edge of the host")]
    EndNotEdge { which: &'static str },
}

impl Serialize for Obstruction {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Deg(G): entry i is the gcd of the degrees of all i-sets, for
/// i = 0..d-1. Zero-degree sets do not affect a gcd, and an empty graph
/// yields the all-zero vector.
pub fn div_vector(g: &DGraph) -> Vec<u64> {
    (0..g.d())
        .map(|i| {
            g.level_degrees(i)
                .values()
                .fold(0u64, |acc, &deg| gcd(acc, deg))
        })
        .collect()
}

/// Componentwise divisibility of degree vectors; zero divides only zero.
pub fn is_divisible(sub: &[u64], sup: &[u64]) -> bool {
    sub.len() == sup.len()
        && sub.iter().zip(sup).all(|(&a, &b)| {
            if a == 0 {
                b == 0
            } else {
                b % a == 0
            }
        })
}

/// The graph covered by an extra-tight closed tour through f distinct
/// vertices; f must be at least d + 3.
pub fn cycle_graph(f: usize, d: usize) -> Result<DGraph, TrailError> {
    let seq = VertexSeq::closed(d, (1..=f as Vertex).collect())?;
    let edges: Vec<Edge> = seq.covered_set().into_iter().collect();
    Ok(DGraph::new(f as u32, d, edges).expect("tour coverage is a valid graph"))
}

/// The graph covered by an extra-tight path through k distinct vertices;
/// k must be at least d.
pub fn path_graph(k: usize, d: usize) -> Result<DGraph, TrailError> {
    let seq = VertexSeq::open(d, (1..=k as Vertex).collect())?;
    let edges: Vec<Edge> = seq.covered_set().into_iter().collect();
    Ok(DGraph::new(k as u32, d, edges).expect("path coverage is a valid graph"))
}

/// Necessary conditions for an extra-tight tour covering all of `g`:
/// d divides |G|, the tour length |G|/d is at least d + 3, and every vertex
/// degree is divisible by d^2.
pub fn tour_feasible(g: &DGraph) -> Vec<Obstruction> {
    let d = g.d() as u64;
    let count = g.len() as u64;
    let mut out = Vec::new();
    if count % d != 0 {
        out.push(Obstruction::EdgeCount {
            count,
            modulus: d,
            residue: count % d,
            expected: 0,
        });
    }
    if count < d * (d + 3) {
        out.push(Obstruction::TooFewEdges {
            count,
            needed: d * (d + 3),
        });
    }
    let dd = d * d;
    for v in 1..=g.n() {
        let degree = g.degree(&[v]) as u64;
        if degree % dd != 0 {
            out.push(Obstruction::VertexResidue {
                v,
                degree,
                expected: 0,
                modulus: dd,
            });
        }
    }
    out
}

/// Necessary conditions for an extra-tight trail covering all of `g` whose
/// first and last d entries are the given tuples, both read from the outside
/// in (`start[0]` is the very first entry, `finish[0]` the very last).
///
/// The conditions: |G| is 1 mod d and at least d^2 + 1; the two tuples are
/// disjoint edges of the host; and each vertex degree is i(d-1) + 1 mod d^2
/// when the vertex sits at outside-in position i of either tuple (0 mod d^2
/// for every other vertex).
pub fn trail_feasible(
    g: &DGraph,
    start: &[Vertex],
    finish: &[Vertex],
) -> Result<Vec<Obstruction>, GraphError> {
    let d = g.d();
    for tuple in [start, finish] {
        if tuple.len() != d {
            return Err(GraphError::BadLinkSet {
                got: tuple.len(),
                d,
            });
        }
    }
    let start_edge = Edge::new(start.to_vec())?;
    let finish_edge = Edge::new(finish.to_vec())?;
    let mut out = Vec::new();
    let count = g.len() as u64;
    let dm = d as u64;
    if count % dm != 1 {
        out.push(Obstruction::EdgeCount {
            count,
            modulus: dm,
            residue: count % dm,
            expected: 1,
        });
    }
    if count < dm * dm + 1 {
        out.push(Obstruction::TooFewEdges {
            count,
            needed: dm * dm + 1,
        });
    }
    if start.iter().any(|v| finish.contains(v)) {
        out.push(Obstruction::EndsNotDisjoint);
    }
    if !g.contains(&start_edge) {
        out.push(Obstruction::EndNotEdge { which: "start" });
    }
    if !g.contains(&finish_edge) {
        out.push(Obstruction::EndNotEdge { which: "finish" });
    }
    let dd = dm * dm;
    let mut expected = std::collections::HashMap::new();
    for (j, &v) in start.iter().enumerate() {
        expected.insert(v, ((j as u64 + 1) * (dm - 1) + 1) % dd);
    }
    for (j, &v) in finish.iter().enumerate() {
        expected.insert(v, ((j as u64 + 1) * (dm - 1) + 1) % dd);
    }
    for v in 1..=g.n() {
        let want = expected.get(&v).copied().unwrap_or(0);
        let degree = g.degree(&[v]) as u64;
        if degree % dd != want {
            out.push(Obstruction::VertexResidue {
                v,
                degree,
                expected: want,
                modulus: dd,
            });
        }
    }
    Ok(out)
}

/// Size of the smallest edge set whose removal from the complete d-graph on
/// n vertices leaves an edge count of 1 mod d: (C(n,d) - 1) mod d.
pub fn compute_s(n: u32, d: usize) -> u64 {
    (binomial(n as u64, d as u64) - 1) % d as u64
}
