//! Budgeted exact searches: extra-tight Euler tours and trails in a given
//! host, longest induced paths in Johnson graphs, and maximum-diameter
//! strongly connected complexes assembled from either.
//!
//! Every search is deterministic. A budget caps wall-clock time and explored
//! nodes; reports say whether the space was exhausted, so a miss under a
//! tight budget is never mistaken for a proof of absence.

use std::time::{Duration, Instant};

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::complex::{DualShape, ExtremalCertificate, FacetFamily};
use crate::divisibility::{tour_feasible, trail_feasible, Obstruction};
use crate::hypergraph::{binomial, DGraph, Edge, GraphError, Vertex};
use crate::trails::{TrailError, VertexSeq};

/// Largest Johnson graph (vertex count) the induced-path search will build.
/// The adjacency table is quadratic in this.
pub const MAX_JOHNSON_VERTICES: u64 = 4096;

/// Largest d-set universe C(covered vertices, d) the cover searches will
/// index; one bit per possible edge, twice.
pub const MAX_COVER_UNIVERSE: u64 = 1 << 26;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Trail(#[from] TrailError),
    #[error("a Johnson graph needs 1 <= k < n, got n = {n}, k = {k}")]
    BadJohnson { n: u32, k: usize },
    #[error("no covering tour after {nodes} nodes (space exhausted: {exhausted})")]
    NoTour { nodes: u64, exhausted: bool },
}

/// What to do once a solution turns up: stop, or keep going and count every
/// solution in canonical position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    Exhaustive,
    FirstFound,
}

/// Caps on a search. `None` means unlimited; the default is unlimited and
/// exhaustive.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SearchBudget {
    pub max_seconds: Option<f64>,
    pub max_nodes: Option<u64>,
    pub mode: SearchMode,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_seconds: None,
            max_nodes: None,
            mode: SearchMode::Exhaustive,
        }
    }
}

impl SearchBudget {
    pub fn first_found() -> Self {
        SearchBudget {
            mode: SearchMode::FirstFound,
            ..SearchBudget::default()
        }
    }
}

struct Ticker {
    deadline: Option<Instant>,
    max_nodes: Option<u64>,
    nodes: u64,
    stopped: bool,
}

impl Ticker {
    fn new(budget: &SearchBudget) -> Ticker {
        let deadline = budget
            .max_seconds
            .filter(|s| s.is_finite())
            .map(|s| Instant::now() + Duration::from_secs_f64(s.max(0.0)));
        Ticker {
            deadline,
            max_nodes: budget.max_nodes,
            nodes: 0,
            stopped: false,
        }
    }

    /// Counts one explored node; false once a cap is hit. The clock is only
    /// consulted every 1024 nodes.
    fn tick(&mut self) -> bool {
        if self.stopped {
            return false;
        }
        self.nodes += 1;
        if self.max_nodes.is_some_and(|m| self.nodes > m) {
            self.stopped = true;
        } else if self.nodes % 1024 == 0 {
            if let Some(deadline) = self.deadline {
                if Instant::now() >= deadline {
                    self.stopped = true;
                }
            }
        }
        !self.stopped
    }
}

/// Outcome of a tour or trail search.
///
/// `exhausted` is true exactly when absence has been proven: a necessary
/// condition failed up front, or the whole (pruned) space was explored. A
/// first-found hit leaves it false. `count` is the number of solutions seen
/// in canonical position; for tours the canonical position fixes the first
/// entry to the smallest covered vertex and orients the cycle, so a tour is
/// counted once per occurrence of that vertex rather than once.
#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub found: Option<VertexSeq>,
    pub count: u64,
    pub obstructions: Vec<Obstruction>,
    pub nodes: u64,
    pub elapsed_seconds: f64,
    pub exhausted: bool,
}

/// C(n, k) saturating at u64::MAX instead of panicking.
pub(crate) fn binomial_saturating(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Dense vertex table and colex d-set ranking for one host. The cover
/// search's per-node bookkeeping runs on this as array arithmetic: an edge
/// is a bit position, not a hashed allocation.
struct CoverIndex {
    /// Covered vertices ascending; search entries are indices into this.
    verts: Vec<Vertex>,
    d: usize,
    /// Pascal table, `binom[i * (d + 1) + j] = C(i, j)`.
    binom: Vec<u64>,
    universe: usize,
    host: Bitset,
    /// Host degree per dense vertex.
    deg: Vec<u64>,
}

impl CoverIndex {
    fn build(g: &DGraph) -> Result<CoverIndex, GraphError> {
        let d = g.d();
        let mut verts: Vec<Vertex> = g
            .edges()
            .iter()
            .flat_map(|e| e.vertices().iter().copied())
            .collect();
        verts.sort_unstable();
        verts.dedup();
        let m = verts.len();
        let universe = binomial_saturating(m as u64, d as u64);
        if universe > MAX_COVER_UNIVERSE {
            return Err(GraphError::TooLarge(universe));
        }
        let cols = d + 1;
        let mut binom = vec![0u64; (m + 1) * cols];
        for i in 0..=m {
            binom[i * cols] = 1;
            for j in 1..=d.min(i) {
                binom[i * cols + j] = binom[(i - 1) * cols + j - 1] + binom[(i - 1) * cols + j];
            }
        }
        let mut idx = CoverIndex {
            verts,
            d,
            binom,
            universe: universe as usize,
            host: Bitset::new(universe as usize),
            deg: vec![0; m],
        };
        let mut scratch = Vec::with_capacity(d);
        for e in g.edges() {
            scratch.clear();
            for &v in e.vertices() {
                let i = idx.dense(v).expect("edge vertices were just collected");
                scratch.push(i);
            }
            let r = idx.rank(&mut scratch);
            idx.host.set(r);
            for &i in &scratch {
                idx.deg[i as usize] += 1;
            }
        }
        Ok(idx)
    }

    fn m(&self) -> usize {
        self.verts.len()
    }

    fn dense(&self, v: Vertex) -> Option<u32> {
        self.verts.binary_search(&v).ok().map(|i| i as u32)
    }

    /// Colex rank of a d-set of dense indices; sorts the set in place.
    fn rank(&self, set: &mut [u32]) -> usize {
        set.sort_unstable();
        let cols = self.d + 1;
        let mut r = 0u64;
        for (j, &i) in set.iter().enumerate() {
            r += self.binom[i as usize * cols + (j + 1)];
        }
        r as usize
    }
}

struct CoverSearch<'h> {
    g: &'h DGraph,
    idx: CoverIndex,
    d: usize,
    k: usize,
    closed: bool,
    /// Pinned dense entries: the canonical tour start, or a trail's end
    /// tuples.
    forced: Vec<Option<u32>>,
    /// Break the reflection symmetry of closed tours (second entry below the
    /// last).
    reflect_break: bool,
    /// Exact occurrence quota per dense vertex, forced by the degree
    /// arithmetic.
    need_occ: Vec<u64>,
    occ: Vec<u64>,
    /// How much of each dense vertex's host degree the used edges cover.
    cov_deg: Vec<u64>,
    entries: Vec<u32>,
    used: Bitset,
    scratch: Vec<u32>,
    stop_at_first: bool,
    found: Option<VertexSeq>,
    count: u64,
    ticker: Ticker,
}

impl CoverSearch<'_> {
    /// A closed sequence is searched as its own extension by d entries that
    /// replay the opening, so every seam edge is checked the moment its last
    /// member is placed instead of at the leaf.
    fn total(&self) -> usize {
        if self.closed {
            self.k + self.d
        } else {
            self.k
        }
    }

    /// Depth-first extension by one entry; true aborts the whole search.
    fn extend(&mut self) -> bool {
        let i = self.entries.len();
        let total = self.total();
        if i == total {
            return self.leaf();
        }
        let replay = i >= self.k;
        let pinned = if replay {
            Some(self.entries[i - self.k])
        } else {
            self.forced[i]
        };
        let (lo, hi) = match pinned {
            Some(v) => (v, v),
            None => (0, self.idx.m() as u32 - 1),
        };
        for cand in lo..=hi {
            if !replay && self.occ[cand as usize] == self.need_occ[cand as usize] {
                continue;
            }
            if self.reflect_break && i == self.k - 1 && cand <= self.entries[1] {
                continue;
            }
            if !self.window_ok(cand) {
                continue;
            }
            if !self.ticker.tick() {
                return true;
            }
            self.entries.push(cand);
            let dup_last = replay && i == total - 1;
            let (placed, fresh) = self.place_appended(dup_last);
            let mut proceed = fresh;
            if fresh && !replay {
                self.occ[cand as usize] += 1;
                if self.occ[cand as usize] == self.need_occ[cand as usize]
                    && !self.final_occurrence_ok(cand, i)
                {
                    proceed = false;
                }
            }
            let abort = proceed && self.extend();
            if fresh && !replay {
                self.occ[cand as usize] -= 1;
            }
            self.unplace_appended(placed);
            self.entries.pop();
            if abort {
                return true;
            }
        }
        false
    }

    /// How many d-sets the newest entry completes.
    fn slot_count(&self) -> usize {
        let l = self.entries.len();
        if l < self.d {
            0
        } else if l == self.d {
            1
        } else {
            self.d
        }
    }

    /// Rank of the s-th completed d-set, leaving its dense vertices in
    /// scratch. Slot order: the window drops 1..d-1, then the trailing set.
    fn slot_rank(&mut self, s: usize) -> usize {
        let l = self.entries.len();
        self.scratch.clear();
        if l == self.d {
            self.scratch.extend_from_slice(&self.entries);
        } else {
            let window = &self.entries[l - self.d - 1..];
            let drop = if s + 1 < self.d { s + 1 } else { 0 };
            for (j, &v) in window.iter().enumerate() {
                if j != drop {
                    self.scratch.push(v);
                }
            }
        }
        self.idx.rank(&mut self.scratch)
    }

    /// Marks the newest entry's completed d-sets as used, stopping at the
    /// first one missing from the host or already used. Returns how many
    /// were marked and whether all were fresh. With `skip_last` the final
    /// slot is the opening edge coming around again on the last replay
    /// entry, a known duplicate that must not fail the freshness check.
    fn place_appended(&mut self, skip_last: bool) -> (usize, bool) {
        let slots = self.slot_count();
        let mut placed = 0;
        for s in 0..slots {
            let rank = self.slot_rank(s);
            if skip_last && s == slots - 1 {
                debug_assert!(self.used.get(rank));
                continue;
            }
            if !self.idx.host.get(rank) || self.used.get(rank) {
                return (placed, false);
            }
            self.used.set(rank);
            for &v in &self.scratch {
                self.cov_deg[v as usize] += 1;
            }
            placed += 1;
        }
        (placed, true)
    }

    /// Rolls back the first `placed` slots of the newest entry; they are
    /// always a contiguous prefix because placement stops at a stale slot
    /// and the only skipped slot is the last.
    fn unplace_appended(&mut self, placed: usize) {
        for s in 0..placed {
            let rank = self.slot_rank(s);
            self.used.clear(rank);
            for &v in &self.scratch {
                self.cov_deg[v as usize] -= 1;
            }
        }
    }

    /// Once a vertex has used its whole occurrence quota, the placements
    /// still ahead of its active window deliver an exact number of further
    /// edges at it; its uncovered degree must match or the branch is dead.
    fn final_occurrence_ok(&self, v: u32, i: usize) -> bool {
        let d = self.d;
        let future = if self.closed {
            if i < d {
                return true;
            }
            // An opening-window vertex also collects from the replayed
            // seam: d own edges minus the duplicated opening set, plus d-1
            // per later replay step.
            match self.entries[..d].iter().position(|&h| h == v) {
                Some(q) => ((d - 1) * (2 * d - q)) as u64,
                None => ((d - 1) * d) as u64,
            }
        } else if i + 1 < d {
            (1 + (d - 1) * (i + 1)) as u64
        } else {
            ((d - 1) * d.min(self.k - 1 - i)) as u64
        };
        self.idx.deg[v as usize] - self.cov_deg[v as usize] == future
    }

    /// Window distinctness for the candidate: against the last d entries,
    /// and against the opening entries once a closed sequence nears the
    /// seam (the replay re-checks those, but later).
    fn window_ok(&self, cand: u32) -> bool {
        let i = self.entries.len();
        if self.entries[i.saturating_sub(self.d)..]
            .iter()
            .any(|&v| v == cand)
        {
            return false;
        }
        if self.closed && i < self.k && i + self.d >= self.k {
            let wrap = self.d + i - self.k;
            if self.entries[..=wrap].iter().any(|&v| v == cand) {
                return false;
            }
        }
        true
    }

    /// Full-length candidate: every edge was checked incrementally, so this
    /// revalidates from scratch purely to guard the bookkeeping itself.
    fn leaf(&mut self) -> bool {
        let entries: Vec<Vertex> = self.entries[..self.k]
            .iter()
            .map(|&i| self.idx.verts[i as usize])
            .collect();
        let seq = match VertexSeq::new(self.d, entries, self.closed) {
            Ok(seq) => seq,
            Err(_) => return false,
        };
        let valid = match seq.validate(self.g) {
            Ok(report) => report.valid,
            Err(_) => return false,
        };
        if !valid {
            return false;
        }
        self.count += 1;
        if self.found.is_none() {
            self.found = Some(seq);
        }
        self.stop_at_first
    }
}

fn run_cover_search(mut search: CoverSearch, t0: Instant, mode: SearchMode) -> SearchReport {
    search.extend();
    let exhausted =
        !search.ticker.stopped && (search.count == 0 || mode == SearchMode::Exhaustive);
    SearchReport {
        found: search.found,
        count: search.count,
        obstructions: Vec::new(),
        nodes: search.ticker.nodes,
        elapsed_seconds: t0.elapsed().as_secs_f64(),
        exhausted,
    }
}

/// Searches `g` for a closed extra-tight sequence covering every edge
/// exactly once. Necessary conditions are checked first; when one fails the
/// report carries the obstructions and no nodes are explored.
///
/// The sequence has |G|/d entries and every vertex appears exactly
/// degree/d^2 times, which prunes hard. Rotations are factored out by
/// pinning the first entry to the smallest covered vertex, reflections by
/// ordering its two cyclic neighbours.
pub fn find_euler_tour(g: &DGraph, budget: &SearchBudget) -> Result<SearchReport, SearchError> {
    let t0 = Instant::now();
    let obstructions = tour_feasible(g);
    if !obstructions.is_empty() {
        return Ok(SearchReport {
            found: None,
            count: 0,
            obstructions,
            nodes: 0,
            elapsed_seconds: t0.elapsed().as_secs_f64(),
            exhausted: true,
        });
    }
    let d = g.d();
    let dd = (d * d) as u64;
    let k = g.len() / d;
    let idx = CoverIndex::build(g)?;
    let m = idx.m();
    // A zero residue with positive degree means degree >= d^2, so every
    // covered vertex has a positive quota; dense index 0 is the smallest.
    let need_occ: Vec<u64> = idx.deg.iter().map(|&x| x / dd).collect();
    debug_assert_eq!(need_occ.iter().sum::<u64>(), k as u64);
    let mut forced = vec![None; k];
    forced[0] = Some(0);
    let used = Bitset::new(idx.universe);
    let search = CoverSearch {
        g,
        idx,
        d,
        k,
        closed: true,
        forced,
        reflect_break: true,
        need_occ,
        occ: vec![0; m],
        cov_deg: vec![0; m],
        entries: Vec::with_capacity(k + d),
        used,
        scratch: Vec::with_capacity(d),
        stop_at_first: budget.mode == SearchMode::FirstFound,
        found: None,
        count: 0,
        ticker: Ticker::new(budget),
    };
    Ok(run_cover_search(search, t0, budget.mode))
}

/// Searches `g` for an open extra-tight sequence covering every edge exactly
/// once, with both end tuples pinned (outside in: `start[0]` is the very
/// first entry, `finish[0]` the very last).
pub fn find_euler_trail(
    g: &DGraph,
    start: &[Vertex],
    finish: &[Vertex],
    budget: &SearchBudget,
) -> Result<SearchReport, SearchError> {
    let t0 = Instant::now();
    let obstructions = trail_feasible(g, start, finish)?;
    if !obstructions.is_empty() {
        return Ok(SearchReport {
            found: None,
            count: 0,
            obstructions,
            nodes: 0,
            elapsed_seconds: t0.elapsed().as_secs_f64(),
            exhausted: true,
        });
    }
    let d = g.d();
    let dd = (d * d) as u64;
    let k = d + (g.len() - 1) / d;
    let idx = CoverIndex::build(g)?;
    let m = idx.m();
    let mut need_occ: Vec<u64> = idx.deg.iter().map(|&x| x / dd).collect();
    // An end vertex at outside-in position j covers (j+1)(d-1)+1 degree
    // there instead of a full d^2, and the residue check above already
    // certified degree >= that contribution.
    for tuple in [start, finish] {
        for (j, &v) in tuple.iter().enumerate() {
            let i = idx.dense(v).expect("feasible end vertices are covered") as usize;
            let contribution = (j as u64 + 1) * (d as u64 - 1) + 1;
            need_occ[i] = 1 + (idx.deg[i] - contribution) / dd;
        }
    }
    debug_assert_eq!(need_occ.iter().sum::<u64>(), k as u64);
    let mut forced = vec![None; k];
    for (j, &v) in start.iter().enumerate() {
        forced[j] = Some(idx.dense(v).expect("feasible end vertices are covered"));
    }
    for (j, &v) in finish.iter().enumerate() {
        forced[k - 1 - j] = Some(idx.dense(v).expect("feasible end vertices are covered"));
    }
    let used = Bitset::new(idx.universe);
    let search = CoverSearch {
        g,
        idx,
        d,
        k,
        closed: false,
        forced,
        reflect_break: false,
        need_occ,
        occ: vec![0; m],
        cov_deg: vec![0; m],
        entries: Vec::with_capacity(k),
        used,
        scratch: Vec::with_capacity(d),
        stop_at_first: budget.mode == SearchMode::FirstFound,
        found: None,
        count: 0,
        ticker: Ticker::new(budget),
    };
    Ok(run_cover_search(search, t0, budget.mode))
}

/// A longest induced path in the Johnson graph J(n, k), whose vertices are
/// the k-sets of 1..=n and whose edges join sets sharing k-1 elements.
/// `length` counts edges; `path` lists the k-sets along a best path.
#[derive(Clone, Debug, Serialize)]
pub struct JohnsonReport {
    pub n: u32,
    pub k: usize,
    pub graph_size: usize,
    pub path: Vec<Edge>,
    pub length: usize,
    pub nodes: u64,
    pub elapsed_seconds: f64,
    pub exhausted: bool,
}

#[derive(Clone)]
struct Bitset {
    words: Vec<u64>,
}

impl Bitset {
    fn new(len: usize) -> Bitset {
        Bitset {
            words: vec![0; len.div_ceil(64)],
        }
    }

    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn clear(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn or_with(&mut self, other: &Bitset) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }
}

fn shared_count(a: &Edge, b: &Edge) -> usize {
    let (mut i, mut j, mut shared) = (0, 0, 0);
    let (av, bv) = (a.vertices(), b.vertices());
    while i < av.len() && j < bv.len() {
        match av[i].cmp(&bv[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                shared += 1;
                i += 1;
                j += 1;
            }
        }
    }
    shared
}

struct SnakeSearch<'a> {
    adj: &'a [Bitset],
    m: usize,
    path: Vec<usize>,
    best: Vec<usize>,
    ticker: Ticker,
}

impl SnakeSearch<'_> {
    /// Branch and bound: a new node must be adjacent to the tip and to no
    /// earlier path node. `excluded` holds the path plus every neighbour of
    /// a non-tip path node, so its complement bounds what can still join.
    fn grow(&mut self, excluded: &Bitset) -> bool {
        if self.path.len() > self.best.len() {
            self.best = self.path.clone();
        }
        let avail = self.m - excluded.count();
        if self.path.len() + avail <= self.best.len() {
            return false;
        }
        let tip = *self.path.last().expect("the path starts nonempty");
        for cand in 0..self.m {
            if !self.adj[tip].get(cand) || excluded.get(cand) {
                continue;
            }
            if !self.ticker.tick() {
                return true;
            }
            let mut next = excluded.clone();
            next.or_with(&self.adj[tip]);
            next.set(cand);
            self.path.push(cand);
            let abort = self.grow(&next);
            self.path.pop();
            if abort {
                return true;
            }
        }
        false
    }
}

/// Finds a longest induced path in J(n, k) by branch and bound. The
/// symmetric group is transitive on ordered adjacent pairs, so the first two
/// path nodes are pinned to {1..k} and {1..k-1, k+1} without loss. The
/// budget's mode is ignored: the search always runs to optimality or to a
/// cap, and `exhausted` says which.
pub fn johnson_longest_induced_path(
    n: u32,
    k: usize,
    budget: &SearchBudget,
) -> Result<JohnsonReport, SearchError> {
    if k < 1 || k as u64 >= n as u64 {
        return Err(SearchError::BadJohnson { n, k });
    }
    let size = binomial(n as u64, k as u64);
    if size > MAX_JOHNSON_VERTICES {
        return Err(SearchError::Graph(GraphError::TooLarge(size)));
    }
    let t0 = Instant::now();
    let subsets: Vec<Edge> = (1..=n)
        .combinations(k)
        .map(|vs| Edge::new(vs).expect("combinations are distinct"))
        .collect();
    let m = subsets.len();
    let adj: Vec<Bitset> = (0..m)
        .map(|i| {
            let mut row = Bitset::new(m);
            for j in 0..m {
                if j != i && shared_count(&subsets[i], &subsets[j]) == k - 1 {
                    row.set(j);
                }
            }
            row
        })
        .collect();
    // Lexicographic enumeration puts the canonical pair first.
    let first: Vec<Vertex> = (1..=k as u32).collect();
    let second: Vec<Vertex> = (1..k as u32).chain([k as u32 + 1]).collect();
    assert_eq!(subsets[0].vertices(), first.as_slice());
    assert_eq!(subsets[1].vertices(), second.as_slice());
    let mut excluded = Bitset::new(m);
    excluded.set(0);
    excluded.set(1);
    excluded.or_with(&adj[0]);
    let mut search = SnakeSearch {
        adj: &adj,
        m,
        path: vec![0, 1],
        best: vec![0, 1],
        ticker: Ticker::new(budget),
    };
    search.grow(&excluded);
    let path: Vec<Edge> = search.best.iter().map(|&i| subsets[i].clone()).collect();
    for (i, a) in path.iter().enumerate() {
        for (j, b) in path.iter().enumerate().skip(i + 1) {
            let adjacent = shared_count(a, b) == k - 1;
            assert_eq!(adjacent, j == i + 1, "the reported path must be induced");
        }
    }
    Ok(JohnsonReport {
        n,
        k,
        graph_size: m,
        length: path.len() - 1,
        path,
        nodes: search.ticker.nodes,
        elapsed_seconds: t0.elapsed().as_secs_f64(),
        exhausted: !search.ticker.stopped,
    })
}

/// How a maximum-diameter family was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstructionMethod {
    /// Facets of a covering tour of the complete graph, minus the
    /// lexicographically first one.
    TourMinusFacet,
    /// Nodes of a longest induced path in J(n, 3).
    JohnsonSnake,
}

/// A strongly connected 2-complex on n vertices built for large dual
/// diameter, with its certificate against the (|G| - d - 1) / d bound.
/// `exhausted` reflects the underlying search only; when the certificate
/// says extremal, optimality follows from the bound regardless.
#[derive(Clone, Debug, Serialize)]
pub struct DiameterConstruction {
    pub n: u32,
    pub d: usize,
    pub method: ConstructionMethod,
    pub family: FacetFamily,
    pub certificate: ExtremalCertificate,
    pub nodes: u64,
    pub elapsed_seconds: f64,
    pub exhausted: bool,
}

/// What is left of a budget after a first phase spent part of it.
fn remaining(budget: &SearchBudget, t0: Instant, spent_nodes: u64) -> SearchBudget {
    SearchBudget {
        max_seconds: budget
            .max_seconds
            .map(|s| (s - t0.elapsed().as_secs_f64()).max(0.0)),
        max_nodes: budget.max_nodes.map(|m| m.saturating_sub(spent_nodes)),
        mode: budget.mode,
    }
}

/// Builds a 2-complex on n vertices whose dual is a long path.
///
/// For n = 1 mod 4 the complete graph satisfies every tour residue; when a
/// covering tour is found, its facet windows form a dual cycle and deleting
/// one facet leaves a path meeting the diameter bound exactly. The residues
/// are not sufficient, though: n = 9 passes them all and still has no tour
/// (the exhaustive search proves it), so when the tour space is exhausted
/// empty the construction falls back to the same route as every other n, a
/// longest induced path in J(n, 3). A tour search stopped by its budget is
/// inconclusive and reported as `NoTour` instead of silently falling back.
pub fn max_diameter_complex(
    n: u32,
    budget: &SearchBudget,
) -> Result<DiameterConstruction, SearchError> {
    if n < 4 {
        return Err(SearchError::Graph(GraphError::BadParameters { n, d: 2 }));
    }
    let t0 = Instant::now();
    let mut tour_nodes = 0;
    if n % 4 == 1 {
        let g = DGraph::complete(n, 2)?;
        let first_found = SearchBudget {
            mode: SearchMode::FirstFound,
            ..*budget
        };
        let report = find_euler_tour(&g, &first_found)?;
        tour_nodes = report.nodes;
        match report.found {
            Some(tour) => {
                let family = tour.facets_on(n)?;
                let lex_first = family.facets()[0].clone();
                let family = family.with_facet_removed(&lex_first)?;
                let certificate = family.certify_extremal()?;
                assert_eq!(certificate.dual, DualShape::Path);
                assert!(certificate.connected);
                return Ok(DiameterConstruction {
                    n,
                    d: 2,
                    method: ConstructionMethod::TourMinusFacet,
                    family,
                    certificate,
                    nodes: report.nodes,
                    elapsed_seconds: t0.elapsed().as_secs_f64(),
                    exhausted: report.exhausted,
                });
            }
            None if report.exhausted => {}
            None => {
                return Err(SearchError::NoTour {
                    nodes: report.nodes,
                    exhausted: false,
                });
            }
        }
    }
    let rest = remaining(budget, t0, tour_nodes);
    let report = johnson_longest_induced_path(n, 3, &rest)?;
    let family = FacetFamily::new(n, 2, report.path.clone())?;
    let certificate = family.certify_extremal()?;
    assert_eq!(certificate.dual, DualShape::Path);
    assert!(certificate.connected);
    Ok(DiameterConstruction {
        n,
        d: 2,
        method: ConstructionMethod::JohnsonSnake,
        family,
        certificate,
        nodes: tour_nodes + report.nodes,
        elapsed_seconds: t0.elapsed().as_secs_f64(),
        exhausted: report.exhausted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisibility::path_graph;

    #[test]
    fn tour_search_solves_the_smallest_complete_host() {
        let g = DGraph::complete(5, 2).unwrap();
        let report = find_euler_tour(&g, &SearchBudget::first_found()).unwrap();
        let tour = report.found.expect("a covering tour of K_5 exists");
        assert!(tour.is_closed());
        assert_eq!(tour.entries().len(), 5);
        assert_eq!(tour.entries()[0], 1);
        let coverage = tour.validate(&g).unwrap();
        assert!(coverage.valid);
        assert_eq!(coverage.covered.len(), 10);
        assert!(!report.exhausted);
    }

    #[test]
    fn tour_count_on_five_vertices_is_every_cyclic_arrangement() {
        // Any closed arrangement of five distinct vertices covers the ten
        // pairs exactly once (adjacent pairs form a cycle, skip pairs its
        // complement), so the canonical count is 4!/2.
        let g = DGraph::complete(5, 2).unwrap();
        let report = find_euler_tour(&g, &SearchBudget::default()).unwrap();
        assert_eq!(report.count, 12);
        assert!(report.exhausted);
        assert!(report.found.is_some());
    }

    #[test]
    fn tour_preconditions_rule_out_the_small_hosts() {
        for n in [4, 6, 7, 8] {
            let g = DGraph::complete(n, 2).unwrap();
            let report = find_euler_tour(&g, &SearchBudget::default()).unwrap();
            assert!(report.found.is_none(), "K_{n} has no covering tour");
            assert!(report.exhausted);
            assert_eq!(report.nodes, 0, "obstructions mean no search");
            assert!(!report.obstructions.is_empty());
        }
        let g4 = DGraph::complete(4, 2).unwrap();
        let report = find_euler_tour(&g4, &SearchBudget::default()).unwrap();
        assert!(report
            .obstructions
            .iter()
            .any(|o| matches!(o, Obstruction::TooFewEdges { .. })));
        let g8 = DGraph::complete(8, 2).unwrap();
        let report = find_euler_tour(&g8, &SearchBudget::default()).unwrap();
        assert!(report
            .obstructions
            .iter()
            .any(|o| matches!(o, Obstruction::VertexResidue { degree: 7, .. })));
    }

    #[test]
    fn the_nine_vertex_host_admits_no_tour() {
        // K_9 passes every residue condition (degree 8 = 2 d^2, 36 = 18 d
        // edges), yet the exhaustive search proves no covering tour exists:
        // the canonical space dies out around fifteen placed entries.
        let g = DGraph::complete(9, 2).unwrap();
        let report = find_euler_tour(&g, &SearchBudget::default()).unwrap();
        assert!(report.found.is_none());
        assert_eq!(report.count, 0);
        assert!(report.obstructions.is_empty(), "no residue rules K_9 out");
        assert!(report.exhausted, "the whole pruned space was explored");
        assert!(report.nodes > 1_000_000, "this is not a pre-check shortcut");
    }

    #[test]
    fn trail_search_recovers_a_covering_trail() {
        let g = path_graph(7, 2).unwrap();
        let report = find_euler_trail(&g, &[1, 2], &[7, 6], &SearchBudget::default()).unwrap();
        let trail = report.found.expect("the path host is covered by its own trail");
        let coverage = trail.validate(&g).unwrap();
        assert!(coverage.valid);
        assert_eq!(coverage.covered.len(), g.len());
        // The search takes the finish tuple outside-in ([7, 6] means the
        // sequence ends ..., 6, 7); ends() reads in sequence order.
        let (start, finish) = trail.ends().unwrap();
        assert_eq!(start, vec![1, 2]);
        assert_eq!(finish, vec![6, 7]);
        assert!(report.exhausted);
    }

    #[test]
    fn trail_search_reports_residue_obstructions() {
        let g = path_graph(7, 2).unwrap();
        let report = find_euler_trail(&g, &[2, 1], &[7, 6], &SearchBudget::default()).unwrap();
        assert!(report.found.is_none());
        assert!(report.exhausted);
        assert!(report
            .obstructions
            .iter()
            .any(|o| matches!(o, Obstruction::VertexResidue { .. })));
    }

    #[test]
    fn a_spent_budget_is_not_a_proof_of_absence() {
        let g = DGraph::complete(9, 2).unwrap();
        let budget = SearchBudget {
            max_nodes: Some(50),
            ..SearchBudget::first_found()
        };
        let report = find_euler_tour(&g, &budget).unwrap();
        assert!(report.found.is_none());
        assert!(!report.exhausted);
        assert!(report.nodes >= 50);
    }

    #[test]
    fn cover_search_rejects_an_oversized_universe() {
        // Disjoint complete patches keep every residue whole (degree 4
        // everywhere) while the covered-vertex count makes the pair
        // universe too big to index.
        let mut edges = Vec::new();
        for patch in 0..2400u32 {
            let base = patch * 5;
            for a in 1..=5 {
                for b in (a + 1)..=5 {
                    let e = Edge::new(vec![base + a, base + b]).unwrap();
                    edges.push(e);
                }
            }
        }
        let g = DGraph::new(12_000, 2, edges).unwrap();
        let err = find_euler_tour(&g, &SearchBudget::default()).unwrap_err();
        assert!(matches!(
            err,
            SearchError::Graph(GraphError::TooLarge(_))
        ));
    }

    #[test]
    fn johnson_snakes_have_the_known_lengths() {
        let j53 = johnson_longest_induced_path(5, 3, &SearchBudget::default()).unwrap();
        assert_eq!(j53.length, 3);
        assert!(j53.exhausted);
        assert_eq!(j53.graph_size, 10);

        let j63 = johnson_longest_induced_path(6, 3, &SearchBudget::default()).unwrap();
        assert_eq!(j63.length, 5);
        assert!(j63.exhausted);

        let j73 = johnson_longest_induced_path(7, 3, &SearchBudget::default()).unwrap();
        assert_eq!(j73.length, 9);
        assert!(j73.exhausted);
        assert_eq!(j73.path.len(), 10);
    }

    #[test]
    fn johnson_rejects_degenerate_parameters() {
        assert_eq!(
            johnson_longest_induced_path(5, 0, &SearchBudget::default()).unwrap_err(),
            SearchError::BadJohnson { n: 5, k: 0 }
        );
        assert_eq!(
            johnson_longest_induced_path(4, 4, &SearchBudget::default()).unwrap_err(),
            SearchError::BadJohnson { n: 4, k: 4 }
        );
        assert!(matches!(
            johnson_longest_induced_path(40, 10, &SearchBudget::default()),
            Err(SearchError::Graph(GraphError::TooLarge(_)))
        ));
    }

    #[test]
    fn diameter_construction_meets_the_bound_when_a_tour_exists() {
        let built = max_diameter_complex(5, &SearchBudget::default()).unwrap();
        assert_eq!(built.method, ConstructionMethod::TourMinusFacet);
        assert_eq!(built.certificate.diameter, Some(3));
        assert!(built.certificate.extremal);
        assert_eq!(built.family.facets().len(), 4);
    }

    #[test]
    fn diameter_construction_falls_back_when_no_tour_exists() {
        // n = 9 satisfies the tour residues but the tour space exhausts
        // empty, so the construction switches to the induced-path family,
        // which does reach the bound: J(9, 3) has a 16-edge snake.
        let built = max_diameter_complex(9, &SearchBudget::default()).unwrap();
        assert_eq!(built.method, ConstructionMethod::JohnsonSnake);
        assert_eq!(built.certificate.diameter, Some(16));
        assert_eq!(built.certificate.bound, 16);
        assert!(built.certificate.extremal);
        assert_eq!(built.family.facets().len(), 17);
        assert!(built.exhausted);
        assert!(built.nodes > 110_000_000, "the tour proof is in the total");
    }

    #[test]
    fn diameter_construction_will_not_guess_on_a_spent_budget() {
        // A budget too small to exhaust the tour space is inconclusive, and
        // the construction must say so rather than fall back quietly.
        let budget = SearchBudget {
            max_nodes: Some(1_000),
            ..SearchBudget::default()
        };
        let err = max_diameter_complex(9, &budget).unwrap_err();
        assert!(matches!(
            err,
            SearchError::NoTour {
                exhausted: false,
                ..
            }
        ));
    }

    #[test]
    fn diameter_construction_is_honest_off_the_tour_residues() {
        let built = max_diameter_complex(6, &SearchBudget::default()).unwrap();
        assert_eq!(built.method, ConstructionMethod::JohnsonSnake);
        assert_eq!(built.certificate.diameter, Some(5));
        assert_eq!(built.certificate.bound, 6);
        assert!(!built.certificate.extremal);
        assert!(built.exhausted, "the snake search proved its own maximum");
    }

    #[test]
    fn trail_search_handles_higher_uniformity() {
        // The open sequence 1..6 at d = 3 covers 3 * 3 + 1 = 10 edges; its
        // covered graph is the unique host this trail search must solve.
        let g = path_graph(6, 3).unwrap();
        let report = find_euler_trail(&g, &[1, 2, 3], &[6, 5, 4], &SearchBudget::default()).unwrap();
        let trail = report.found.expect("the path host is covered by its own trail");
        assert_eq!(trail.entries(), &[1, 2, 3, 4, 5, 6]);
        assert!(trail.validate(&g).unwrap().valid);
    }

    #[test]
    fn bitsets_track_membership_and_counts() {
        let mut a = Bitset::new(130);
        a.set(0);
        a.set(64);
        a.set(129);
        assert!(a.get(64));
        assert!(!a.get(63));
        assert_eq!(a.count(), 3);
        a.clear(64);
        assert!(!a.get(64));
        assert_eq!(a.count(), 2);
        let mut b = Bitset::new(130);
        b.set(63);
        b.or_with(&a);
        assert_eq!(b.count(), 3);
    }

    #[test]
    fn dset_ranks_are_a_colex_bijection() {
        let g = DGraph::complete(7, 3).unwrap();
        let idx = CoverIndex::build(&g).unwrap();
        assert_eq!(idx.universe, 35);
        let mut seen = vec![false; 35];
        for e in g.edges() {
            let mut set: Vec<u32> = e.vertices().iter().map(|&v| v - 1).collect();
            let r = idx.rank(&mut set);
            assert!(!seen[r], "ranks must not collide");
            seen[r] = true;
            assert!(idx.host.get(r));
        }
        assert!(seen.iter().all(|&s| s));
    }

    fn used_pairs(entries: &[Vertex]) -> usize {
        let seq = VertexSeq::closed(2, entries.to_vec()).unwrap();
        seq.covered_set().len()
    }

    #[test]
    fn closed_coverage_counts_match_the_seam_arithmetic() {
        // k d covered edges in total, of which d^2 - 1 cross the seam and
        // are only checkable once the sequence closes.
        assert_eq!(used_pairs(&[1, 2, 3, 4, 5]), 10);
        assert_eq!(used_pairs(&[1, 2, 3, 4, 5, 6]), 12);
    }
}
