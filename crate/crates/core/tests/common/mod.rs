//! Seeded generators shared by the integration tests.
//!
//! Everything here draws from a caller-supplied ChaCha stream so failures
//! replay exactly. Sequences come out with pairwise-distinct entries, which
//! keeps them valid on complete hosts of any uniformity (every window is a
//! clique, and each covered d-set determines its window position).

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xtrail::hypergraph::{DGraph, Edge, Vertex};
use xtrail::trails::VertexSeq;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// t distinct vertices of [n] in random order.
pub fn distinct_entries(n: u32, t: usize, rng: &mut ChaCha8Rng) -> Vec<Vertex> {
    assert!(t <= n as usize, "asked for {t} distinct vertices of [{n}]");
    let mut pool: Vec<Vertex> = (1..=n).collect();
    pool.shuffle(rng);
    pool.truncate(t);
    pool
}

/// An open extra-tight path on t distinct vertices of [n].
pub fn random_open_path(n: u32, d: usize, t: usize, rng: &mut ChaCha8Rng) -> VertexSeq {
    assert!(t >= d + 1);
    VertexSeq::open(d, distinct_entries(n, t, rng)).expect("distinct entries form a valid trail")
}

/// A closed extra-tight tour sequence on f distinct vertices of [n].
pub fn random_closed_tour(n: u32, d: usize, f: usize, rng: &mut ChaCha8Rng) -> VertexSeq {
    assert!(f >= d + 3);
    VertexSeq::closed(d, distinct_entries(n, f, rng)).expect("distinct entries form a valid tour")
}

/// A random nonempty sub-d-graph of the complete d-graph on [n].
///
/// Each complete edge is kept independently with probability `keep`; one
/// uniformly chosen edge is forced in so the result is never empty.
pub fn random_subgraph(n: u32, d: usize, keep: f64, rng: &mut ChaCha8Rng) -> DGraph {
    let full = DGraph::complete(n, d).expect("complete host fits in memory");
    let mut edges: Vec<Edge> = full
        .edges()
        .iter()
        .filter(|_| rng.gen::<f64>() < keep)
        .cloned()
        .collect();
    if edges.is_empty() {
        let i = rng.gen_range(0..full.len());
        edges.push(full.edges()[i].clone());
    }
    DGraph::new(n, d, edges).expect("edges drawn from a complete host")
}

/// K_n minus a perfect matching (n even).
pub fn complete_minus_matching(n: u32) -> DGraph {
    assert!(n % 2 == 0);
    let full = DGraph::complete(n, 2).expect("complete host fits in memory");
    let matching: Vec<Edge> = (0..n / 2)
        .map(|i| Edge::new(vec![2 * i + 1, 2 * i + 2]).expect("disjoint pair"))
        .collect();
    full.with_edges_removed(matching.iter())
        .expect("matching edges are host edges")
}

/// A (trail, cycle, host) triple where the trail contains a window matching
/// d-1 consecutive cycle entries, so cycle insertion always has a landing
/// spot, and the two sequences cover disjoint edge sets by construction:
/// the cycle runs on its own vertex set C, the trail touches C in exactly
/// d-1 consecutive entries, so every trail window has at most d-1 vertices
/// inside C and none of its covered d-sets lies within C.
pub fn random_insertion_instance(
    d: usize,
    rng: &mut ChaCha8Rng,
) -> (VertexSeq, VertexSeq, DGraph) {
    let n: u32 = 14;
    let mut pool: Vec<Vertex> = (1..=n).collect();
    pool.shuffle(rng);

    let kc = rng.gen_range(d + 3..=d + 4);
    let cycle_verts: Vec<Vertex> = pool[..kc].to_vec();
    let rest: Vec<Vertex> = pool[kc..].to_vec();

    let r = rng.gen_range(0..kc);
    let run: Vec<Vertex> = (1..d).map(|j| cycle_verts[(r + j) % kc]).collect();

    let a = rng.gen_range(0..=2usize);
    let b = rng.gen_range(0..=2usize);
    let mut entries: Vec<Vertex> = Vec::new();
    entries.extend_from_slice(&rest[..a]);
    entries.push(rest[a]);
    entries.extend_from_slice(&run);
    entries.push(rest[a + 1]);
    entries.extend_from_slice(&rest[a + 2..a + 2 + b]);

    let trail = VertexSeq::open(d, entries).expect("distinct entries form a valid trail");
    let cycle = VertexSeq::closed(d, cycle_verts).expect("distinct entries form a valid tour");
    let host = DGraph::complete(n, d).expect("complete host fits in memory");
    (trail, cycle, host)
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// All i-subsets of [n], for brute-force degree oracles.
pub fn subsets_of(n: u32, i: usize) -> Vec<Vec<Vertex>> {
    use itertools::Itertools;
    (1..=n).combinations(i).collect()
}
