//! Fractional clique decompositions and the random walk they drive: sampling
//! extra-tight paths, checking the walk's stationary law, packing sampled
//! paths greedily into an edge-disjoint family, and connecting a packing
//! through a reserve host into one trail.
//!
//! A fractional decomposition assigns each (d+1)-clique a nonnegative weight
//! so that the weights over the cliques containing any fixed edge sum to one.
//! The walk keeps an ordered window of its last d vertices (always an edge)
//! and steps to vertex v with probability equal to the weight of the clique
//! the window forms with v, which makes every ordered window uniform over
//! the d! |G| ordered edge tuples. Conditioning the first t vertices on being
//! pairwise distinct turns walk prefixes into a path sampler.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::hypergraph::{DGraph, Edge, GraphError, Vertex, MAX_ENUMERATED_EDGES};
use crate::lp;
use crate::search::binomial_saturating;
use crate::surgery::{appended_edges, glue_restricted, SurgeryError, SURGERY_NODE_CAP};
use crate::trails::{TrailError, VertexSeq};

/// Per-edge weight sums must land within this distance of one.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// Proportional scaling gives up after this many correction sweeps.
pub const MAX_SWEEPS: u64 = 10_000;

/// Path sampling gives up after this many rejected walks.
pub const REJECTION_CAP: u64 = 10_000;

/// The greedy packer declares a stall after this many consecutive failed
/// attempts.
pub const GREEDY_FAILURE_CAP: u64 = 60;

/// Full greedy passes to run per seed; the best leftover wins. Passes stop
/// as soon as the leftover maximum degree reaches gamma n.
pub const GREEDY_RESTARTS: u64 = 20;

/// Stalled passes evict a path through the thickest leftover spot and
/// re-pack, up to this many evictions per host vertex.
pub const GREEDY_EVICTIONS_PER_VERTEX: u64 = 2;

#[derive(Debug, Error, PartialEq)]
pub enum RandwalkError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Trail(#[from] TrailError),
    #[error(transparent)]
    Surgery(#[from] SurgeryError),
    #[error("edge {0} lies in no clique of the host, so no decomposition exists")]
    EdgeInNoClique(Edge),
    #[error("no decomposition found: residual {residual:.3e} after {sweeps} scaling sweeps and a simplex pass")]
    NonConvergence { residual: f64, sweeps: u64 },
    #[error("path order {t} is outside the feasible range {min}..={n}")]
    BadOrder { t: usize, min: usize, n: u32 },
    #[error("rejection sampling missed the all-distinct event {attempts} times in a row")]
    RejectionCapExceeded { attempts: u64 },
    #[error("the host has no edges to start a walk from")]
    EmptyHost,
}

/// How a decomposition's weights were obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecompMethod {
    /// Complete host, uniform weight 1/(n-d) on every clique.
    ClosedForm,
    /// Iterative proportional scaling converged.
    Scaling,
    /// Scaling stalled and the phase-1 simplex found the weights.
    Simplex,
}

/// A fractional clique decomposition: nonnegative weights on the (d+1)-sets
/// whose subsets are all edges, summing to one over the cliques that contain
/// any fixed edge. Weights dump to JSON as a list of clique and weight pairs.
#[derive(Clone, Debug, Serialize)]
pub struct FractionalDecomp {
    pub d: usize,
    #[serde(serialize_with = "weights_as_rows")]
    pub weights: BTreeMap<Edge, f64>,
    /// Normality parameter the weights were checked against.
    pub mu: f64,
    /// True when every positive weight lies within [mu/n, 1/(mu n)].
    pub normal: bool,
    pub method: DecompMethod,
    /// Largest per-edge deviation of the weight sums from one.
    pub residual: f64,
}

impl FractionalDecomp {
    /// The weight of `s`, extended by zero off the clique support.
    pub fn weight(&self, s: &Edge) -> f64 {
        self.weights.get(s).copied().unwrap_or(0.0)
    }

    /// Sum of the weights over all cliques containing `e`.
    pub fn edge_sum(&self, e: &Edge) -> f64 {
        self.weights
            .iter()
            .filter(|(s, _)| s.contains_all(e.vertices()))
            .map(|(_, &w)| w)
            .sum()
    }
}

fn weights_as_rows<S: Serializer>(
    weights: &BTreeMap<Edge, f64>,
    s: S,
) -> Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Row<'a> {
        clique: &'a Edge,
        weight: f64,
    }
    s.collect_seq(
        weights
            .iter()
            .map(|(clique, &weight)| Row { clique, weight }),
    )
}

/// All (d+1)-sets of covered vertices whose d-subsets are all host edges.
fn enumerate_cliques(g: &DGraph) -> Result<Vec<Edge>, RandwalkError> {
    let d = g.d();
    let mut verts: Vec<Vertex> = g
        .edges()
        .iter()
        .flat_map(|e| e.vertices().iter().copied())
        .collect();
    verts.sort_unstable();
    verts.dedup();
    let candidates = binomial_saturating(verts.len() as u64, (d + 1) as u64);
    if candidates > MAX_ENUMERATED_EDGES {
        return Err(GraphError::TooLarge(candidates).into());
    }
    let mut out = Vec::new();
    for combo in verts.into_iter().combinations(d + 1) {
        let s = Edge::new(combo).expect("combination entries are distinct");
        let vs = s.vertices().to_vec();
        if vs.iter().all(|&v| g.contains(&s.minus(&[v]))) {
            out.push(s);
        }
    }
    Ok(out)
}

/// Per-edge multiplicative correction sweeps from the uniform start 1/kappa,
/// where kappa is the mean number of cliques per edge. Returns the weights
/// and the sweep count on convergence, or the stall residual otherwise.
fn scale(by_edge: &[Vec<usize>], cliques: usize) -> Result<(Vec<f64>, u64), (f64, u64)> {
    let members: usize = by_edge.iter().map(Vec::len).sum();
    let kappa = members as f64 / by_edge.len() as f64;
    let mut xs = vec![1.0 / kappa; cliques];
    let mut residual = f64::INFINITY;
    for sweep in 1..=MAX_SWEEPS {
        for list in by_edge {
            let s: f64 = list.iter().map(|&i| xs[i]).sum();
            let f = 1.0 / s;
            for &i in list {
                xs[i] *= f;
            }
        }
        residual = 0.0;
        for list in by_edge {
            let s: f64 = list.iter().map(|&i| xs[i]).sum();
            residual = residual.max((s - 1.0).abs());
        }
        if residual < SUM_TOLERANCE {
            return Ok((xs, sweep));
        }
    }
    Err((residual, MAX_SWEEPS))
}

/// Finds a fractional clique decomposition of the host and checks it for
/// mu-normality. Complete hosts get the uniform closed form 1/(n-d); other
/// hosts go through proportional scaling, with a phase-1 simplex taking over
/// when scaling stalls (which happens exactly when every solution needs a
/// zero weight, or none exists).
pub fn fractional_decomposition(
    g: &DGraph,
    mu: f64,
) -> Result<FractionalDecomp, RandwalkError> {
    let d = g.d();
    let n = g.n();
    if g.is_empty() {
        return Ok(FractionalDecomp {
            d,
            weights: BTreeMap::new(),
            mu,
            normal: mu > 0.0,
            method: DecompMethod::ClosedForm,
            residual: 0.0,
        });
    }
    let cliques = enumerate_cliques(g)?;
    let mut by_edge: Vec<Vec<usize>> = vec![Vec::new(); g.len()];
    for (si, s) in cliques.iter().enumerate() {
        for &v in s.vertices() {
            let e = s.minus(&[v]);
            let id = g
                .edge_index(&e)
                .expect("every d-subset of a clique is a host edge");
            by_edge[id].push(si);
        }
    }
    for (id, list) in by_edge.iter().enumerate() {
        if list.is_empty() {
            return Err(RandwalkError::EdgeInNoClique(g.edges()[id].clone()));
        }
    }

    let complete = g.len() as u64 == binomial_saturating(n as u64, d as u64);
    let (xs, method, sweeps) = if complete {
        let w = 1.0 / (n as usize - d) as f64;
        (vec![w; cliques.len()], DecompMethod::ClosedForm, 0)
    } else {
        match scale(&by_edge, cliques.len()) {
            Ok((xs, sweeps)) => (xs, DecompMethod::Scaling, sweeps),
            Err((stalled, sweeps)) => {
                let rows: Vec<Vec<f64>> = by_edge
                    .iter()
                    .map(|list| {
                        let mut row = vec![0.0; cliques.len()];
                        for &i in list {
                            row[i] = 1.0;
                        }
                        row
                    })
                    .collect();
                let rhs = vec![1.0; by_edge.len()];
                match lp::solve_nonnegative(&rows, &rhs) {
                    Some(xs) => (xs, DecompMethod::Simplex, sweeps),
                    None => {
                        return Err(RandwalkError::NonConvergence {
                            residual: stalled,
                            sweeps,
                        })
                    }
                }
            }
        }
    };

    let mut residual = 0.0f64;
    for list in &by_edge {
        let s: f64 = list.iter().map(|&i| xs[i]).sum();
        residual = residual.max((s - 1.0).abs());
    }
    if residual > SUM_TOLERANCE {
        return Err(RandwalkError::NonConvergence { residual, sweeps });
    }
    let lo = mu / n as f64;
    let hi = 1.0 / (mu * n as f64);
    let normal = mu > 0.0 && xs.iter().all(|&w| w <= 0.0 || (lo <= w && w <= hi));
    Ok(FractionalDecomp {
        d,
        weights: cliques.into_iter().zip(xs).collect(),
        mu,
        normal,
        method,
        residual,
    })
}

/// A walk in progress: the full vertex history, the ordered window of the
/// last d vertices (always an edge of the host), and the generator that
/// drives it. Restarting from the same seed replays the same trajectory.
#[derive(Clone, Debug)]
pub struct WalkState {
    history: Vec<Vertex>,
    current: Vec<Vertex>,
    seed: u64,
    rng: ChaCha8Rng,
}

impl WalkState {
    /// Starts a walk from an ordered d-tuple drawn uniformly over the
    /// d! |G| orderings of host edges.
    pub fn start(g: &DGraph, seed: u64) -> Result<WalkState, RandwalkError> {
        if g.is_empty() {
            return Err(RandwalkError::EmptyHost);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let current = draw_start(g, &mut rng);
        Ok(WalkState {
            history: current.clone(),
            current,
            seed,
            rng,
        })
    }

    pub fn history(&self) -> &[Vertex] {
        &self.history
    }

    /// The ordered window of the last d vertices.
    pub fn current(&self) -> &[Vertex] {
        &self.current
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Steps taken so far (history length minus the starting tuple).
    pub fn steps(&self) -> u64 {
        (self.history.len() - self.current.len()) as u64
    }
}

fn draw_start(g: &DGraph, rng: &mut ChaCha8Rng) -> Vec<Vertex> {
    let e = &g.edges()[rng.gen_range(0..g.len())];
    let mut tuple = e.vertices().to_vec();
    tuple.shuffle(rng);
    tuple
}

/// Continuations from the ordered window `cur`: every vertex whose union
/// with the window carries positive weight, paired with that weight. The
/// weights sum to one when `x` decomposes the window's host.
fn continuations(cur: &[Vertex], x: &FractionalDecomp, n: u32) -> Vec<(Vertex, f64)> {
    let mut out = Vec::new();
    for v in 1..=n {
        if cur.contains(&v) {
            continue;
        }
        let mut vs = cur.to_vec();
        vs.push(v);
        let s = Edge::new(vs).expect("window entries are distinct");
        let w = x.weight(&s);
        if w > 0.0 {
            out.push((v, w));
        }
    }
    out
}

fn pick(cands: &[(Vertex, f64)], rng: &mut ChaCha8Rng) -> Vertex {
    let total: f64 = cands.iter().map(|&(_, w)| w).sum();
    let mut u = rng.gen::<f64>() * total;
    for &(v, w) in cands {
        if u < w {
            return v;
        }
        u -= w;
    }
    cands.last().expect("candidate list is nonempty").0
}

/// Advances the walk by one vertex, chosen among the continuations of the
/// current window with probability proportional to the clique weight the
/// window forms with it. Vertices inside the window have probability zero.
///
/// Panics when `x` offers no continuation at the current window, which
/// cannot happen for a decomposition of the walk's own host.
pub fn walk_step(mut state: WalkState, x: &FractionalDecomp, g: &DGraph) -> WalkState {
    let cands = continuations(&state.current, x, g.n());
    assert!(
        !cands.is_empty(),
        "a fractional decomposition leaves a continuation at every window"
    );
    let v = pick(&cands, &mut state.rng);
    state.history.push(v);
    state.current.remove(0);
    state.current.push(v);
    state
}

/// Deviation of one window pattern's empirical tuple frequencies from the
/// uniform law over ordered edge tuples.
#[derive(Clone, Debug, Serialize)]
pub struct PatternDeviation {
    /// Index offsets of the pattern within a (d+1)-entry window.
    pub offsets: Vec<usize>,
    pub distinct_windows: u64,
    pub max_deviation: f64,
    pub within: bool,
}

/// Stationarity report for one seeded walk: every choice of d positions out
/// of d+1 consecutive ones should see each ordered tuple with frequency
/// 1/(d! |G|).
#[derive(Clone, Debug, Serialize)]
pub struct StationarityReport {
    pub n: u32,
    pub d: usize,
    pub steps: u64,
    pub seed: u64,
    /// Number of ordered edge tuples, d! |G|.
    pub states: u64,
    /// The uniform reference frequency 1/states.
    pub expected: f64,
    /// Four standard errors of a single-cell frequency estimate.
    pub tolerance: f64,
    pub patterns: Vec<PatternDeviation>,
    pub max_deviation: f64,
    pub within_tolerance: bool,
}

/// Runs a seeded walk for `steps` steps and compares, for every pattern of
/// d indices out of d+1 consecutive ones, the empirical frequency of each
/// ordered tuple against the uniform value. Each pattern is sampled at
/// exactly `steps` window positions. A tuple that never occurs counts as a
/// deviation of the full reference frequency, so a reducible host (for
/// example n = d+1, where the walk is trapped in one orbit) reports its
/// confinement honestly.
pub fn stationarity_check(
    g: &DGraph,
    x: &FractionalDecomp,
    steps: u64,
    seed: u64,
) -> Result<StationarityReport, RandwalkError> {
    let d = g.d();
    let mut state = WalkState::start(g, seed)?;
    state.history.reserve(steps as usize);
    for _ in 0..steps {
        state = walk_step(state, x, g);
    }
    let hist = state.history();

    let fact = (1..=d as u64).fold(1u64, |a, b| a.saturating_mul(b));
    let states = fact.saturating_mul(g.len() as u64);
    let expected = 1.0 / states as f64;
    let tolerance = 4.0 * (expected * (1.0 - expected) / steps as f64).sqrt();

    let mut patterns = Vec::new();
    for skip in (1..=d).rev() {
        let offsets: Vec<usize> = (0..=d).filter(|&j| j != skip).collect();
        let mut counts: HashMap<Vec<Vertex>, u64> = HashMap::new();
        for i in 0..steps as usize {
            let key: Vec<Vertex> = offsets.iter().map(|&o| hist[i + o]).collect();
            *counts.entry(key).or_insert(0) += 1;
        }
        let mut max_deviation = 0.0f64;
        for &c in counts.values() {
            max_deviation = max_deviation.max((c as f64 / steps as f64 - expected).abs());
        }
        if (counts.len() as u64) < states {
            max_deviation = max_deviation.max(expected);
        }
        patterns.push(PatternDeviation {
            offsets,
            distinct_windows: counts.len() as u64,
            max_deviation,
            within: max_deviation <= tolerance,
        });
    }
    let max_deviation = patterns
        .iter()
        .map(|p| p.max_deviation)
        .fold(0.0, f64::max);
    let within_tolerance = patterns.iter().all(|p| p.within);
    Ok(StationarityReport {
        n: g.n(),
        d,
        steps,
        seed,
        states,
        expected,
        tolerance,
        patterns,
        max_deviation,
        within_tolerance,
    })
}

fn try_distinct_walk(
    g: &DGraph,
    x: &FractionalDecomp,
    t: usize,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<Vertex>> {
    let mut entries = draw_start(g, rng);
    let mut cur = entries.clone();
    while entries.len() < t {
        let cands = continuations(&cur, x, g.n());
        assert!(
            !cands.is_empty(),
            "a fractional decomposition leaves a continuation at every window"
        );
        let v = pick(&cands, rng);
        if entries.contains(&v) {
            return None;
        }
        entries.push(v);
        cur.remove(0);
        cur.push(v);
    }
    Some(entries)
}

/// Samples an extra-tight path of order `t` by running walks and rejecting
/// any whose first `t` vertices repeat. A rejected attempt is abandoned at
/// the first repeat, which leaves the accepted distribution unchanged. The
/// result always validates against the host because every step stays inside
/// a positive-weight clique.
pub fn sample_path(
    g: &DGraph,
    x: &FractionalDecomp,
    t: usize,
    seed: u64,
) -> Result<VertexSeq, RandwalkError> {
    let d = g.d();
    if t < d + 1 || t as u64 > g.n() as u64 {
        return Err(RandwalkError::BadOrder {
            t,
            min: d + 1,
            n: g.n(),
        });
    }
    if g.is_empty() {
        return Err(RandwalkError::EmptyHost);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..REJECTION_CAP {
        if let Some(entries) = try_distinct_walk(g, x, t, &mut rng) {
            return Ok(VertexSeq::open(d, entries)?);
        }
    }
    Err(RandwalkError::RejectionCapExceeded {
        attempts: REJECTION_CAP,
    })
}

/// An edge-disjoint family of sampled extra-tight paths plus everything the
/// greedy pass could not cover.
#[derive(Clone, Debug, Serialize)]
pub struct PackingReport {
    pub n: u32,
    pub d: usize,
    pub t: usize,
    pub gamma: f64,
    pub seed: u64,
    pub paths: Vec<VertexSeq>,
    pub covered_edges: usize,
    pub leftover: DGraph,
    /// Largest (d-1)-set degree of the leftover.
    pub leftover_max_degree: u64,
    /// floor(gamma n): no (d-1)-set may end more paths than this.
    pub end_cap: u64,
    #[serde(serialize_with = "counts_as_rows")]
    pub end_counts: BTreeMap<Edge, u64>,
    pub attempts: u64,
}

fn counts_as_rows<S: Serializer>(
    counts: &BTreeMap<Edge, u64>,
    s: S,
) -> Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Row<'a> {
        end: &'a Edge,
        count: u64,
    }
    s.collect_seq(counts.iter().map(|(end, &count)| Row { end, count }))
}

/// Node budget for one backtracking attempt of the residual sampler.
const RESIDUAL_NODE_CAP: u64 = 20_000;

/// Continuations of `entries` that use a fresh vertex and complete only
/// uncovered edges, in weighted-random priority order: popping from the end
/// draws without replacement following the renormalized transition law
/// (each candidate keyed by u^(1/w), largest key last).
fn residual_frame(
    g: &DGraph,
    x: &FractionalDecomp,
    entries: &[Vertex],
    covered: &[bool],
    degrees: &[u64],
    rng: &mut ChaCha8Rng,
) -> Vec<(Vertex, Vec<usize>)> {
    let d = g.d();
    let cur = &entries[entries.len() - d..];
    let mut frame: Vec<(f64, Vertex, Vec<usize>)> = Vec::new();
    'vertex: for v in 1..=g.n() {
        if entries.contains(&v) {
            continue;
        }
        let mut vs = cur.to_vec();
        vs.push(v);
        let s = Edge::new(vs).expect("window entries are distinct");
        let w = x.weight(&s);
        if w <= 0.0 {
            continue;
        }
        let mut tentative = entries.to_vec();
        tentative.push(v);
        let mut new_ids = Vec::with_capacity(d);
        for e in appended_edges(&tentative, d) {
            let id = g.edge_index(&e).expect("clique subsets are host edges");
            if covered[id] {
                continue 'vertex;
            }
            new_ids.push(id);
        }
        // Boost vertices with many uncovered incident edges so coverage
        // stays balanced and the leftover concentrates nowhere.
        let boost = (degrees[v as usize] + 1).pow(2) as f64;
        let key = rng.gen::<f64>().powf(1.0 / (w * boost));
        frame.push((key, v, new_ids));
    }
    frame.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("keys are finite"));
    frame.into_iter().map(|(_, v, ids)| (v, ids)).collect()
}

/// One residual-aware attempt from the given start edge: a depth-first
/// search that extends the path by fresh vertices completing only uncovered
/// edges, trying continuations in weighted-random order and backtracking on
/// dead ends until the node budget runs out. Returns the entries and the
/// covered edge indices.
fn try_residual_path(
    g: &DGraph,
    x: &FractionalDecomp,
    t: usize,
    covered: &[bool],
    degrees: &[u64],
    start_id: usize,
    rng: &mut ChaCha8Rng,
) -> Option<(Vec<Vertex>, Vec<usize>)> {
    let d = g.d();
    let start = &g.edges()[start_id];
    let mut entries = start.vertices().to_vec();
    entries.shuffle(rng);
    let mut ids = vec![start_id];
    let mut frames = vec![residual_frame(g, x, &entries, covered, degrees, rng)];
    let mut nodes = 0u64;
    while let Some(frame) = frames.last_mut() {
        if let Some((v, new_ids)) = frame.pop() {
            nodes += 1;
            debug_assert_eq!(new_ids.len(), d);
            entries.push(v);
            ids.extend(new_ids);
            if entries.len() == t {
                return Some((entries, ids));
            }
            if nodes >= RESIDUAL_NODE_CAP {
                return None;
            }
            frames.push(residual_frame(g, x, &entries, covered, degrees, rng));
        } else {
            frames.pop();
            if entries.len() > d {
                entries.pop();
                ids.truncate(ids.len() - d);
            }
        }
    }
    None
}

/// Per-vertex count of uncovered incident edges, indexed by vertex.
fn uncovered_degrees(g: &DGraph, uncovered: &[usize]) -> Vec<u64> {
    let mut deg = vec![0u64; g.n() as usize + 1];
    for &id in uncovered {
        for &v in g.edges()[id].vertices() {
            deg[v as usize] += 1;
        }
    }
    deg
}

struct Packing {
    paths: Vec<VertexSeq>,
    end_counts: BTreeMap<Edge, u64>,
    leftover: DGraph,
    leftover_max_degree: u64,
    attempts: u64,
}

struct Accepted {
    entries: Vec<Vertex>,
    ids: Vec<usize>,
    ends: Option<(Edge, Edge)>,
}

/// The (d-1)-set with the most uncovered incident edges, or None when
/// everything is covered or d < 2. Ties go to the largest set in edge
/// order, keeping a seeded run reproducible.
fn thickest_set(g: &DGraph, uncovered: &[usize]) -> Option<Edge> {
    if g.d() < 2 {
        return None;
    }
    let mut deg: BTreeMap<Edge, u64> = BTreeMap::new();
    for &id in uncovered {
        let e = &g.edges()[id];
        for &v in e.vertices() {
            *deg.entry(e.minus(&[v])).or_insert(0) += 1;
        }
    }
    deg.into_iter().max_by_key(|(_, c)| *c).map(|(s, _)| s)
}

/// Largest count of uncovered edges over a single (d-1)-set, with the
/// leftover edge count as a tie-break key.
fn leftover_quality(g: &DGraph, uncovered: &[usize]) -> (u64, usize) {
    if g.d() < 2 {
        return (uncovered.len() as u64, uncovered.len());
    }
    let mut deg: BTreeMap<Edge, u64> = BTreeMap::new();
    for &id in uncovered {
        let e = &g.edges()[id];
        for &v in e.vertices() {
            *deg.entry(e.minus(&[v])).or_insert(0) += 1;
        }
    }
    (
        deg.values().copied().max().unwrap_or(0),
        uncovered.len(),
    )
}

/// One full greedy pass: sample residual paths until `GREEDY_FAILURE_CAP`
/// consecutive attempts fail, then evict an accepted path running through
/// the thickest leftover spot and re-pack, within the eviction budget.
/// A stall with the leftover maximum degree already at or below
/// `target_degree` ends the pass.
fn pack_once(
    g: &DGraph,
    x: &FractionalDecomp,
    t: usize,
    end_cap: u64,
    target_degree: f64,
    rng: &mut ChaCha8Rng,
) -> Result<Packing, RandwalkError> {
    let d = g.d();
    let mut covered = vec![false; g.len()];
    let mut uncovered: Vec<usize> = (0..g.len()).collect();
    let mut end_counts: BTreeMap<Edge, u64> = BTreeMap::new();
    let mut accepted: Vec<Accepted> = Vec::new();
    let mut attempts = 0u64;
    let mut evictions = GREEDY_EVICTIONS_PER_VERTEX.saturating_mul(g.n() as u64);
    let mut degrees = uncovered_degrees(g, &uncovered);
    loop {
        let mut failures = 0u64;
        while failures < GREEDY_FAILURE_CAP && !uncovered.is_empty() {
            attempts += 1;
            let start_id = uncovered[rng.gen_range(0..uncovered.len())];
            let Some((entries, ids)) =
                try_residual_path(g, x, t, &covered, &degrees, start_id, rng)
            else {
                failures += 1;
                continue;
            };
            let ends = if d >= 2 {
                let lo = Edge::new(entries[..d - 1].to_vec()).expect("entries are distinct");
                let hi = Edge::new(entries[t - d + 1..].to_vec()).expect("entries are distinct");
                let lo_n = end_counts.get(&lo).copied().unwrap_or(0);
                let hi_n = end_counts.get(&hi).copied().unwrap_or(0);
                if lo_n >= end_cap || hi_n >= end_cap {
                    failures += 1;
                    continue;
                }
                Some((lo, hi))
            } else {
                None
            };
            for &id in &ids {
                covered[id] = true;
            }
            uncovered.retain(|&i| !covered[i]);
            if let Some((lo, hi)) = &ends {
                *end_counts.entry(lo.clone()).or_insert(0) += 1;
                *end_counts.entry(hi.clone()).or_insert(0) += 1;
            }
            accepted.push(Accepted { entries, ids, ends });
            degrees = uncovered_degrees(g, &uncovered);
            failures = 0;
        }
        if uncovered.is_empty() || evictions == 0 || accepted.is_empty() {
            break;
        }
        if leftover_quality(g, &uncovered).0 as f64 <= target_degree {
            break;
        }
        evictions -= 1;
        // Evict a path through the thickest leftover spot: flooding the
        // starved region with its edges lets a fresh search re-route there.
        let victim = match thickest_set(g, &uncovered) {
            Some(s) => {
                let through: Vec<usize> = (0..accepted.len())
                    .filter(|&i| {
                        s.vertices()
                            .iter()
                            .all(|v| accepted[i].entries.contains(v))
                    })
                    .collect();
                match through.len() {
                    0 => rng.gen_range(0..accepted.len()),
                    k => through[rng.gen_range(0..k)],
                }
            }
            None => rng.gen_range(0..accepted.len()),
        };
        let out = accepted.swap_remove(victim);
        for id in out.ids {
            covered[id] = false;
        }
        uncovered = (0..g.len()).filter(|&i| !covered[i]).collect();
        if let Some((lo, hi)) = out.ends {
            for e in [lo, hi] {
                let c = end_counts.get_mut(&e).expect("accepted ends are counted");
                *c -= 1;
                if *c == 0 {
                    end_counts.remove(&e);
                }
            }
        }
        degrees = uncovered_degrees(g, &uncovered);
    }
    let mut paths = Vec::with_capacity(accepted.len());
    for a in accepted {
        paths.push(VertexSeq::open(d, a.entries)?);
    }
    let leftover_edges: Vec<Edge> = uncovered.iter().map(|&i| g.edges()[i].clone()).collect();
    let leftover = DGraph::new(g.n(), d, leftover_edges)?;
    let leftover_max_degree = if d >= 2 {
        leftover
            .level_degrees(d - 1)
            .values()
            .copied()
            .max()
            .unwrap_or(0)
    } else {
        leftover.len() as u64
    };
    Ok(Packing {
        paths,
        end_counts,
        leftover,
        leftover_max_degree,
        attempts,
    })
}

/// Packs edge-disjoint extra-tight paths of order `t` by repeated residual
/// sampling with bounded backtracking, running `GREEDY_RESTARTS` full
/// passes off the seed and keeping the pass whose leftover has the smallest
/// maximum (d-1)-set degree (ties broken by leftover size). A path is
/// rejected when either of its end (d-1)-sets already ends floor(gamma n)
/// accepted paths. Coverage quality is reported, never guaranteed: the
/// leftover is returned together with its largest (d-1)-set degree and the
/// per-end counts.
pub fn greedy_approx_decomposition(
    g: &DGraph,
    t: usize,
    gamma: f64,
    seed: u64,
) -> Result<PackingReport, RandwalkError> {
    let d = g.d();
    if t < d + 1 || t as u64 > g.n() as u64 {
        return Err(RandwalkError::BadOrder {
            t,
            min: d + 1,
            n: g.n(),
        });
    }
    let x = fractional_decomposition(g, 0.9)?;
    let end_cap = (gamma * g.n() as f64).floor().max(0.0) as u64;
    let target_degree = (gamma * g.n() as f64).max(0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut attempts = 0u64;
    let mut best: Option<Packing> = None;
    for _ in 0..GREEDY_RESTARTS {
        let pass = pack_once(g, &x, t, end_cap, target_degree, &mut rng)?;
        attempts += pass.attempts;
        let better = best.as_ref().is_none_or(|b| {
            (pass.leftover_max_degree, pass.leftover.len())
                < (b.leftover_max_degree, b.leftover.len())
        });
        if better {
            best = Some(pass);
        }
        if best
            .as_ref()
            .is_some_and(|b| b.leftover_max_degree as f64 <= target_degree)
        {
            break;
        }
    }
    let best = best.expect("at least one pass runs");
    Ok(PackingReport {
        n: g.n(),
        d,
        t,
        gamma,
        seed,
        covered_edges: g.len() - best.leftover.len(),
        paths: best.paths,
        leftover: best.leftover,
        leftover_max_degree: best.leftover_max_degree,
        end_cap,
        end_counts: best.end_counts,
        attempts,
    })
}

fn union_host(reserve: &DGraph, a: &VertexSeq, b: &VertexSeq) -> Result<DGraph, GraphError> {
    let mut edges: BTreeSet<Edge> = reserve.edges().iter().cloned().collect();
    edges.extend(a.covered_set());
    edges.extend(b.covered_set());
    let n = reserve.n().max(a.max_vertex()).max(b.max_vertex());
    DGraph::new(n, reserve.d(), edges.into_iter().collect())
}

/// Joins an edge-disjoint path packing into one open trail by folding the
/// glue operation through the reserve: an opening glue against the empty
/// trail, one glue per packed path, and a closing glue. Every connector
/// entry is drawn from `anchors`, so the first and last d vertices of the
/// result lie in `anchors` and every connector edge lives in the reserve
/// (pieces already glued never come back into play because each glue sees
/// only the reserve plus the pieces it joins). An empty packing produces a
/// bare 2d-entry trail through the reserve.
pub fn connect_packing(
    packing: &[VertexSeq],
    reserve: &DGraph,
    anchors: &[Vertex],
) -> Result<VertexSeq, RandwalkError> {
    let d = reserve.d();
    for p in packing {
        for e in p.covered_set() {
            if reserve.contains(&e) {
                return Err(SurgeryError::NotEdgeDisjoint(e).into());
            }
        }
    }
    let mut trail = VertexSeq::empty(d);
    for p in packing {
        let host = union_host(reserve, &trail, p)?;
        trail = glue_restricted(&trail, p, &host, anchors, SURGERY_NODE_CAP)?;
    }
    let empty = VertexSeq::empty(d);
    let host = union_host(reserve, &trail, &empty)?;
    trail = glue_restricted(&trail, &empty, &host, anchors, SURGERY_NODE_CAP)?;
    let (first, last) = trail.ends()?;
    assert!(
        first.iter().chain(&last).all(|v| anchors.contains(v)),
        "connector construction pins both ends into the anchor set"
    );
    Ok(trail)
}
