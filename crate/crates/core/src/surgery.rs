//! Local surgery on trails and facet families: gluing two trails into one,
//! turning a facet to shift coverage between two vertices, splicing a closed
//! tour into a trail, switchers, and the degree-fixing digraphs that decide
//! where turns must happen.

use std::collections::{HashMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::complex::{DualShape, FacetFamily};
use crate::divisibility::{compute_s, trail_feasible, Obstruction};
use crate::hypergraph::{DGraph, Edge, GraphError, Vertex};
use crate::trails::{TrailError, VertexSeq};

/// Default node budget for the backtracking searches in this module.
pub const SURGERY_NODE_CAP: u64 = 5_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SurgeryError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Trail(#[from] TrailError),
    #[error("operation needs an open sequence")]
    NotOpen,
    #[error("operation needs a closed sequence")]
    NotClosed,
    #[error("the {which} piece is not a valid trail in the host")]
    InvalidPiece { which: &'static str },
    #[error("pieces share the covered edge {0}")]
    NotEdgeDisjoint(Edge),
    #[error("no connector sequence exists ({explored} nodes explored)")]
    GlueInfeasible { explored: u64 },
    #[error("search budget exhausted after {explored} nodes")]
    BudgetExceeded { explored: u64 },
    #[error("turn run has {got} entries, needs {want}")]
    RunLength { got: usize, want: usize },
    #[error("turn run repeats a vertex")]
    RunRepeats,
    #[error("facet {0} is not in the family")]
    FacetAbsent(Edge),
    #[error("facet {0} is already in the family")]
    FacetPresent(Edge),
    #[error("the set {0} is already in the shadow, so the turn would repeat coverage")]
    ShadowCollision(Edge),
    #[error("turn damaged the family: {0}")]
    TurnDamaged(&'static str),
    #[error("no splice position joins the trail and the cycle")]
    NoSplice,
    #[error("degree fixing needs uniformity at least 2, got {0}")]
    WrongUniformity(usize),
    #[error("start and finish tuples share a vertex")]
    EndsOverlap,
    #[error("degree corrections do not telescope: residue {residue} remains at the last vertex")]
    FixClosure { residue: u64 },
    #[error("no admissible intermediary vertex while correcting vertex {v}")]
    FixStuck { v: Vertex },
    #[error("{n} vertices give {capacity} usable edges but the plan needs {needed}")]
    HostTooSmall { n: u32, needed: u64, capacity: u64 },
}

/// Edges completed by the final entry of `entries`, read as an open
/// sequence prefix. Empty below d entries, one edge at exactly d, and d
/// edges (each containing the new entry) beyond that. The caller must have
/// checked the last d+1 entries are distinct.
pub(crate) fn appended_edges(entries: &[Vertex], d: usize) -> Vec<Edge> {
    let l = entries.len();
    if l < d {
        return Vec::new();
    }
    if l == d {
        return vec![Edge::new(entries.to_vec()).expect("window entries are distinct")];
    }
    let window = &entries[l - d - 1..];
    let mut out = Vec::with_capacity(d);
    for drop in (1..d).chain([0]) {
        let vs: Vec<Vertex> = window
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != drop)
            .map(|(_, &v)| v)
            .collect();
        out.push(Edge::new(vs).expect("window entries are distinct"));
    }
    out
}

fn window_ok(entries: &[Vertex], d: usize, cand: Vertex) -> bool {
    let l = entries.len();
    entries[l.saturating_sub(d)..].iter().all(|&v| v != cand)
}

struct GlueSearch<'h> {
    host: &'h DGraph,
    d: usize,
    b_entries: Vec<Vertex>,
    reserved: HashSet<Edge>,
    used: HashSet<Edge>,
    entries: Vec<Vertex>,
    candidates: Vec<Vertex>,
    slots: usize,
    nodes: u64,
    cap: u64,
}

impl GlueSearch<'_> {
    fn place(&mut self, slot: usize) -> Result<bool, SurgeryError> {
        if slot == self.slots {
            return Ok(self.append_rest());
        }
        for ci in 0..self.candidates.len() {
            let cand = self.candidates[ci];
            self.nodes += 1;
            if self.nodes > self.cap {
                return Err(SurgeryError::BudgetExceeded {
                    explored: self.nodes,
                });
            }
            if !window_ok(&self.entries, self.d, cand) {
                continue;
            }
            self.entries.push(cand);
            let new_edges = appended_edges(&self.entries, self.d);
            let admissible = new_edges.iter().all(|e| {
                self.host.contains(e) && !self.used.contains(e) && !self.reserved.contains(e)
            });
            if admissible {
                for e in &new_edges {
                    self.used.insert(e.clone());
                }
                if self.place(slot + 1)? {
                    return Ok(true);
                }
                for e in &new_edges {
                    self.used.remove(e);
                }
            }
            self.entries.pop();
        }
        Ok(false)
    }

    fn append_rest(&mut self) -> bool {
        let mark = self.entries.len();
        let mut added = Vec::new();
        let b_entries = std::mem::take(&mut self.b_entries);
        let mut ok = true;
        for &x in &b_entries {
            if !window_ok(&self.entries, self.d, x) {
                ok = false;
                break;
            }
            self.entries.push(x);
            let new_edges = appended_edges(&self.entries, self.d);
            if new_edges
                .iter()
                .any(|e| !self.host.contains(e) || self.used.contains(e))
            {
                self.entries.pop();
                ok = false;
                break;
            }
            for e in new_edges {
                self.used.insert(e.clone());
                added.push(e);
            }
        }
        self.b_entries = b_entries;
        if ok {
            return true;
        }
        self.entries.truncate(mark);
        for e in added {
            self.used.remove(&e);
        }
        false
    }
}

/// Joins two edge-disjoint open trails into one open trail in the host by
/// inserting exactly 2d fresh connector entries between them, searched
/// lowest-vertex-first. Either piece may be empty; the result then gains a
/// connector prefix or suffix.
pub fn glue(a: &VertexSeq, b: &VertexSeq, host: &DGraph) -> Result<VertexSeq, SurgeryError> {
    glue_with_cap(a, b, host, SURGERY_NODE_CAP)
}

pub fn glue_with_cap(
    a: &VertexSeq,
    b: &VertexSeq,
    host: &DGraph,
    node_cap: u64,
) -> Result<VertexSeq, SurgeryError> {
    let all: Vec<Vertex> = (1..=host.n()).collect();
    glue_restricted(a, b, host, &all, node_cap)
}

/// Like [`glue_with_cap`], but the 2d connector entries are drawn only from
/// `candidates` (tried lowest-first after sorting and deduplication). The
/// pieces themselves are unrestricted, so connector edges may still straddle
/// the boundary between the candidate set and a piece.
pub fn glue_restricted(
    a: &VertexSeq,
    b: &VertexSeq,
    host: &DGraph,
    candidates: &[Vertex],
    node_cap: u64,
) -> Result<VertexSeq, SurgeryError> {
    if a.is_closed() || b.is_closed() {
        return Err(SurgeryError::NotOpen);
    }
    if !a.is_empty() && !a.validate(host)?.valid {
        return Err(SurgeryError::InvalidPiece { which: "first" });
    }
    if !b.is_empty() && !b.validate(host)?.valid {
        return Err(SurgeryError::InvalidPiece { which: "second" });
    }
    let cov_a = a.covered_set();
    let cov_b = b.covered_set();
    if let Some(e) = cov_a.intersection(&cov_b).next() {
        return Err(SurgeryError::NotEdgeDisjoint(e.clone()));
    }
    let d = host.d();
    let mut pool: Vec<Vertex> = candidates
        .iter()
        .copied()
        .filter(|&v| v >= 1 && v <= host.n())
        .collect();
    pool.sort_unstable();
    pool.dedup();
    let mut search = GlueSearch {
        host,
        d,
        b_entries: b.entries().to_vec(),
        reserved: cov_b,
        used: cov_a,
        entries: a.entries().to_vec(),
        candidates: pool,
        slots: 2 * d,
        nodes: 0,
        cap: node_cap,
    };
    if search.place(0)? {
        let seq = VertexSeq::open(d, search.entries)?;
        let report = seq.validate(host)?;
        assert!(report.valid, "glued sequence must be a valid trail");
        Ok(seq)
    } else {
        Err(SurgeryError::GlueInfeasible {
            explored: search.nodes,
        })
    }
}

/// Result of one turn: the modified family and the exact shadow exchange.
#[derive(Clone, Debug, Serialize)]
pub struct TurnOutcome {
    pub family: FacetFamily,
    pub removed: Edge,
    pub added: Edge,
    pub gained: Vec<Edge>,
    pub lost: Vec<Edge>,
}

/// Turns a facet of the family. `run` is a tuple of d+2 consecutive trail
/// entries (w, x, m_1, ..., m_{d-1}, z): the facet {x, m_*, z} is replaced
/// by {w, m_*, z}, which moves d-1 shadow sets from x onto w. Requires both
/// {w, x, m_*} and {x, m_*, z} to be facets, the d-1 gained sets to be
/// absent from the shadow, and (checked afterwards) the exchange to leave
/// the shadow size and a path-shaped dual intact.
pub fn apply_turn(fam: &FacetFamily, run: &[Vertex]) -> Result<TurnOutcome, SurgeryError> {
    let d = fam.d();
    if run.len() != d + 2 {
        return Err(SurgeryError::RunLength {
            got: run.len(),
            want: d + 2,
        });
    }
    let mut dedup = run.to_vec();
    dedup.sort_unstable();
    dedup.dedup();
    if dedup.len() != run.len() {
        return Err(SurgeryError::RunRepeats);
    }
    let companion = Edge::new(run[..=d].to_vec())?;
    let replaced = Edge::new(run[1..].to_vec())?;
    if !fam.contains(&companion) {
        return Err(SurgeryError::FacetAbsent(companion));
    }
    if !fam.contains(&replaced) {
        return Err(SurgeryError::FacetAbsent(replaced));
    }
    let added_vs: Vec<Vertex> = std::iter::once(run[0])
        .chain(run[2..].iter().copied())
        .collect();
    let added = Edge::new(added_vs)?;
    if fam.contains(&added) {
        return Err(SurgeryError::FacetPresent(added));
    }
    let shadow = fam.shadow();
    let mut gained = Vec::with_capacity(d - 1);
    let mut lost = Vec::with_capacity(d - 1);
    for j in 2..=d {
        let g: Vec<Vertex> = std::iter::once(run[0])
            .chain(run[2..].iter().copied())
            .filter(|&v| v != run[j])
            .collect();
        let g = Edge::new(g)?;
        if shadow.contains(&g) {
            return Err(SurgeryError::ShadowCollision(g));
        }
        gained.push(g);
        let l: Vec<Vertex> = run[1..].iter().copied().filter(|&v| v != run[j]).collect();
        lost.push(Edge::new(l)?);
    }
    let before = fam.dual_report();
    let family = fam
        .with_facet_removed(&replaced)?
        .with_facet_added(added.clone())?;
    let after_shadow = family.shadow();
    if after_shadow.len() != shadow.len() {
        return Err(SurgeryError::TurnDamaged("shadow size changed"));
    }
    for l in &lost {
        if after_shadow.contains(l) {
            return Err(SurgeryError::TurnDamaged(
                "a lost set persists through another facet",
            ));
        }
    }
    if before.shape == DualShape::Path && family.dual_report().shape != DualShape::Path {
        return Err(SurgeryError::TurnDamaged("dual graph is no longer a path"));
    }
    Ok(TurnOutcome {
        family,
        removed: replaced,
        added,
        gained,
        lost,
    })
}

/// Result of splicing a closed tour into an open trail.
#[derive(Clone, Debug, Serialize)]
pub struct CycleInsertion {
    pub merged: VertexSeq,
    /// 1-based position of the run's first entry in the original trail.
    pub position: usize,
    /// Rotation offset of the cycle that lined up with the run.
    pub rotation: usize,
    /// Edges covered by the merge beyond both pieces (2(d-1) of them).
    pub gained: Vec<Edge>,
    /// Edges of the pieces no longer covered (2(d-1) of them).
    pub lost: Vec<Edge>,
}

/// Splices an edge-disjoint closed tour into an open trail. Scans the trail
/// for a window (w_0, u_1, ..., u_{d-1}, w_d) whose interior matches d-1
/// consecutive cycle entries u_1, ..., u_{d-1} (preceded by u_0 and followed
/// by u_d in the cycle), requires the d+3 anchors distinct, and rewrites the
/// window to detour through the whole cycle. First feasible position and
/// rotation wins.
pub fn insert_cycle(
    trail: &VertexSeq,
    cycle: &VertexSeq,
    host: &DGraph,
) -> Result<CycleInsertion, SurgeryError> {
    if trail.is_closed() {
        return Err(SurgeryError::NotOpen);
    }
    if !cycle.is_closed() {
        return Err(SurgeryError::NotClosed);
    }
    if !trail.validate(host)?.valid {
        return Err(SurgeryError::InvalidPiece { which: "trail" });
    }
    if !cycle.validate(host)?.valid {
        return Err(SurgeryError::InvalidPiece { which: "cycle" });
    }
    let cov_t = trail.covered_set();
    let cov_c = cycle.covered_set();
    if let Some(e) = cov_t.intersection(&cov_c).next() {
        return Err(SurgeryError::NotEdgeDisjoint(e.clone()));
    }
    let d = host.d();
    let te = trail.entries();
    let ce = cycle.entries();
    let kc = ce.len();
    for p in 0..=te.len().saturating_sub(d + 1) {
        'rot: for r in 0..kc {
            for j in 0..d - 1 {
                if te[p + 1 + j] != ce[(r + 1 + j) % kc] {
                    continue 'rot;
                }
            }
            let w0 = te[p];
            let wd = te[p + d];
            let u0 = ce[r];
            let ud = ce[(r + d) % kc];
            let mid = &te[p + 1..p + d];
            let mut anchors = vec![w0, wd, u0, ud];
            anchors.extend_from_slice(mid);
            anchors.sort_unstable();
            anchors.dedup();
            if anchors.len() != d + 3 {
                continue;
            }
            let mut xs = Vec::with_capacity(te.len() + kc);
            xs.extend_from_slice(&te[..=p]);
            xs.extend_from_slice(mid);
            xs.push(ud);
            for i in d + 1..kc {
                xs.push(ce[(r + i) % kc]);
            }
            xs.push(u0);
            xs.extend_from_slice(mid);
            xs.extend_from_slice(&te[p + d..]);
            let Ok(seq) = VertexSeq::open(d, xs) else {
                continue;
            };
            let report = seq.validate(host)?;
            if !report.valid {
                continue;
            }
            let new_cov = seq.covered_set();
            let mut gained: Vec<Edge> = new_cov
                .iter()
                .filter(|e| !cov_t.contains(e) && !cov_c.contains(e))
                .cloned()
                .collect();
            let mut lost: Vec<Edge> = cov_t
                .union(&cov_c)
                .filter(|e| !new_cov.contains(e))
                .cloned()
                .collect();
            gained.sort();
            lost.sort();
            return Ok(CycleInsertion {
                merged: seq,
                position: p + 1,
                rotation: r,
                gained,
                lost,
            });
        }
    }
    Err(SurgeryError::NoSplice)
}

/// Exchanges two vertex labels throughout a sequence.
pub fn swap_labels(seq: &VertexSeq, a: Vertex, b: Vertex) -> VertexSeq {
    let entries: Vec<Vertex> = seq
        .entries()
        .iter()
        .map(|&v| {
            if v == a {
                b
            } else if v == b {
                a
            } else {
                v
            }
        })
        .collect();
    VertexSeq::new(seq.d(), entries, seq.is_closed()).expect("relabeling preserves windows")
}

/// The four clauses a switcher pair must satisfy, each reported separately.
#[derive(Clone, Debug, Serialize)]
pub struct SwitcherReport {
    /// Edges covered by the first walk only.
    pub first_only: Vec<Edge>,
    /// Edges covered by the second walk only.
    pub second_only: Vec<Edge>,
    /// first_only is exactly the designated outgoing exchange set.
    pub e1_matches: bool,
    /// second_only is exactly the designated incoming exchange set.
    pub e2_matches: bool,
    /// Both walks have the same start and finish tuples.
    pub ends_match: bool,
    /// The exchange vertices span no other covered edge of the first walk.
    pub exchange_independent: bool,
    pub valid: bool,
}

/// Checks that two open walks form a switcher: they cover the same edges
/// except that the first covers `e1` where the second covers `e2`, they
/// share both end tuples, and the exchange vertices are independent in the
/// first walk's remaining coverage.
pub fn verify_switcher(
    t1: &VertexSeq,
    t2: &VertexSeq,
    e1: &[Edge],
    e2: &[Edge],
) -> Result<SwitcherReport, SurgeryError> {
    if t1.is_closed() || t2.is_closed() {
        return Err(SurgeryError::NotOpen);
    }
    if t1.d() != t2.d() {
        return Err(SurgeryError::Trail(TrailError::UniformityMismatch {
            seq_d: t1.d(),
            host_d: t2.d(),
        }));
    }
    let cov1 = t1.covered_set();
    let cov2 = t2.covered_set();
    let mut first_only: Vec<Edge> = cov1.difference(&cov2).cloned().collect();
    let mut second_only: Vec<Edge> = cov2.difference(&cov1).cloned().collect();
    first_only.sort();
    second_only.sort();
    let mut e1s = e1.to_vec();
    e1s.sort();
    let mut e2s = e2.to_vec();
    e2s.sort();
    let e1_matches = first_only == e1s;
    let e2_matches = second_only == e2s;
    let ends_match = match (t1.ends(), t2.ends()) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    };
    let verts: HashSet<Vertex> = e1
        .iter()
        .chain(e2)
        .flat_map(|e| e.vertices().iter().copied())
        .collect();
    let e1set: HashSet<&Edge> = e1.iter().collect();
    let exchange_independent = cov1
        .iter()
        .filter(|e| !e1set.contains(e))
        .all(|e| !e.vertices().iter().all(|v| verts.contains(v)));
    let valid = e1_matches && e2_matches && ends_match && exchange_independent;
    Ok(SwitcherReport {
        first_only,
        second_only,
        e1_matches,
        e2_matches,
        ends_match,
        exchange_independent,
        valid,
    })
}

/// A multidigraph on 1..=n recording where coverage must move: the arc
/// (x, y) stands for one turn that shifts one unit of coverage need from x
/// onto y.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixDigraph {
    pub n: u32,
    pub d: usize,
    pub arcs: Vec<(Vertex, Vertex)>,
}

impl FixDigraph {
    pub fn out_degree(&self, v: Vertex) -> u64 {
        self.arcs.iter().filter(|(x, _)| *x == v).count() as u64
    }

    pub fn in_degree(&self, v: Vertex) -> u64 {
        self.arcs.iter().filter(|(_, y)| *y == v).count() as u64
    }

    pub fn occupancy(&self, v: Vertex) -> u64 {
        self.out_degree(v) + self.in_degree(v)
    }
}

fn mod_inverse(a: i64, m: i64) -> i64 {
    // extended Euclid; callers guarantee gcd(a, m) == 1
    let (mut old_r, mut r) = (a, m);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    old_s.rem_euclid(m)
}

fn pair_edge(x: Vertex, y: Vertex) -> Edge {
    Edge::new(vec![x, y]).expect("pair vertices are distinct")
}

/// Builds the degree-fixing digraph by the chain construction: sweeping
/// v = 1..n-1, the outstanding residue at v is settled with |a| two-arc
/// units through a fresh intermediary, each unit handing the remainder to
/// v+1, and the final residue must telescope to zero. Residues are taken
/// as signed representatives so the arc count stays small. Intermediaries
/// are least-loaded-first with per-vertex caps, so every vertex ends with
/// occupancy at most 5d^2; `pair_ok` restricts which vertex pairs an arc
/// may use, and no unordered pair is used twice.
fn fix_core(
    n: u32,
    d: usize,
    need: &[u64],
    pair_ok: &dyn Fn(Vertex, Vertex) -> bool,
) -> Result<FixDigraph, SurgeryError> {
    let dd = (d * d) as i64;
    let inv = mod_inverse(d as i64 - 1, dd);
    let mut arcs = Vec::new();
    let mut used_pairs: HashSet<Edge> = HashSet::new();
    let mut inter_load = vec![0i64; n as usize + 1];
    let mut chain_load = vec![0i64; n as usize + 1];
    let mut carry = 0i64;
    for v in 1..n {
        let w = (need[v as usize] as i64 * inv) % dd;
        let total = (w + carry).rem_euclid(dd);
        let a = if 2 * total > dd { total - dd } else { total };
        carry = a;
        chain_load[v as usize] += a.abs();
        chain_load[v as usize + 1] += a.abs();
        for _ in 0..a.abs() {
            let mut best: Option<Vertex> = None;
            for u in 1..=n {
                if u == v || u == v + 1 {
                    continue;
                }
                if inter_load[u as usize] + 2 > 3 * dd - 1 {
                    continue;
                }
                if !pair_ok(v, u) || !pair_ok(u, v + 1) {
                    continue;
                }
                if used_pairs.contains(&pair_edge(v, u))
                    || used_pairs.contains(&pair_edge(u, v + 1))
                {
                    continue;
                }
                if best.map_or(true, |b| inter_load[u as usize] < inter_load[b as usize]) {
                    best = Some(u);
                }
            }
            let Some(u) = best else {
                return Err(SurgeryError::FixStuck { v });
            };
            if a > 0 {
                arcs.push((v, u));
                arcs.push((u, v + 1));
            } else {
                arcs.push((u, v));
                arcs.push((v + 1, u));
            }
            used_pairs.insert(pair_edge(v, u));
            used_pairs.insert(pair_edge(u, v + 1));
            inter_load[u as usize] += 2;
        }
    }
    let w_last = (need[n as usize] as i64 * inv) % dd;
    let residue = (w_last + carry).rem_euclid(dd);
    if residue != 0 {
        return Err(SurgeryError::FixClosure {
            residue: residue as u64,
        });
    }
    for v in 1..=n {
        assert!(
            chain_load[v as usize] + inter_load[v as usize] <= 5 * dd,
            "occupancy bound violated at vertex {v}"
        );
    }
    Ok(FixDigraph { n, d, arcs })
}

/// Computes a digraph D such that, for every vertex v,
/// deg(v) + (out(v) - in(v)) (d-1) matches i(d-1)+1 when v sits at
/// outside-in position i of `start` or `finish` and 0 otherwise, all
/// mod d^2, with every occupancy out(v) + in(v) at most 5d^2. For d = 2 the
/// arcs additionally use only edges of `g` other than the two end pairs.
pub fn fix_digraph(
    g: &DGraph,
    start: &[Vertex],
    finish: &[Vertex],
) -> Result<FixDigraph, SurgeryError> {
    let d = g.d();
    if d < 2 {
        return Err(SurgeryError::WrongUniformity(d));
    }
    for tuple in [start, finish] {
        if tuple.len() != d {
            return Err(SurgeryError::Graph(GraphError::BadLinkSet {
                got: tuple.len(),
                d,
            }));
        }
    }
    if start.iter().any(|v| finish.contains(v)) {
        return Err(SurgeryError::EndsOverlap);
    }
    let start_e = Edge::new(start.to_vec())?;
    let finish_e = Edge::new(finish.to_vec())?;
    let n = g.n();
    let dd = (d * d) as u64;
    let mut target = vec![0u64; n as usize + 1];
    for (j, &v) in start.iter().enumerate() {
        target[v as usize] = (j as u64 + 1) * (d as u64 - 1) + 1;
    }
    for (j, &v) in finish.iter().enumerate() {
        target[v as usize] = (j as u64 + 1) * (d as u64 - 1) + 1;
    }
    let mut need = vec![0u64; n as usize + 1];
    for v in 1..=n {
        let deg = g.degree(&[v]) as u64 % dd;
        need[v as usize] = (target[v as usize] + dd - deg) % dd;
    }
    let pair_ok = |x: Vertex, y: Vertex| -> bool {
        if d != 2 {
            return true;
        }
        let e = pair_edge(x, y);
        g.contains(&e) && e != start_e && e != finish_e
    };
    fix_core(n, d, &need, &pair_ok)
}

/// One turn of a plan: which arc it serves, where its block sits in the
/// trail, and the exact facet and shadow exchange.
#[derive(Clone, Debug, Serialize)]
pub struct TurnRecord {
    pub arc: (Vertex, Vertex),
    /// 1-based position of the block's first entry in the trail.
    pub block_start: usize,
    pub removed: Edge,
    pub added: Edge,
    pub gained: Vec<Edge>,
    pub lost: Vec<Edge>,
}

/// A complete 2-uniform turn plan: a trail whose straightened family, after
/// one turn per arc, leaves a residual graph satisfying all trail residue
/// conditions at the designated ends.
#[derive(Clone, Debug, Serialize)]
pub struct TurnPlan {
    pub n: u32,
    pub d: usize,
    /// Pairs removed from the complete graph before anything else.
    pub matching: Vec<Edge>,
    /// The host every piece lives in: the complete graph minus `matching`.
    #[serde(skip)]
    pub host: DGraph,
    pub trail: VertexSeq,
    pub arcs: FixDigraph,
    pub turns: Vec<TurnRecord>,
    /// The family after all turns.
    pub family: FacetFamily,
    /// The one edge shared between the family's shadow and the residual.
    pub tail_edge: Edge,
    pub residual: DGraph,
    pub residual_start: Vec<Vertex>,
    pub residual_finish: Vec<Vertex>,
    /// Residue conditions the residual fails to meet; empty when certified.
    pub obstructions: Vec<Obstruction>,
    pub certified: bool,
    pub log: Vec<String>,
}

/// Caps for the turn-plan search.
#[derive(Clone, Copy, Debug)]
pub struct PlanCaps {
    /// Most times any one vertex may appear in the trail.
    pub occurrence_cap: u32,
    /// Backtracking node budget.
    pub node_cap: u64,
}

impl Default for PlanCaps {
    fn default() -> Self {
        // 24 d^3 occurrences for d = 2
        PlanCaps {
            occurrence_cap: 192,
            node_cap: SURGERY_NODE_CAP,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Slot {
    Forced(Vertex),
    Free,
    /// The final entry of a block; carries the gained-pair bookkeeping.
    BlockEnd,
}

struct PlanSearch<'h> {
    host: &'h DGraph,
    slots: Vec<Slot>,
    entries: Vec<Vertex>,
    used: HashSet<Edge>,
    /// Pairs no placement may cover, except at their release position.
    reserved: HashSet<Edge>,
    /// Position at which a reserved pair becomes coverable (and must be).
    release_at: HashMap<Edge, usize>,
    occ: Vec<u32>,
    occurrence_cap: u32,
    nodes: u64,
    cap: u64,
}

impl PlanSearch<'_> {
    /// Free candidates, least-covered first so coverage spreads evenly;
    /// the twelve special vertices come last because their spare pairs are
    /// scarce.
    fn ordered_candidates(&self) -> Vec<Vertex> {
        let mut cands: Vec<Vertex> = (1..=self.host.n()).collect();
        cands.sort_by_key(|&v| (self.occ[v as usize], v <= 12, v));
        cands
    }

    fn place(&mut self, pos: usize) -> Result<bool, SurgeryError> {
        if pos == self.slots.len() {
            return Ok(true);
        }
        match self.slots[pos] {
            Slot::Forced(v) => {
                if self.try_entry(pos, v)? {
                    if self.place(pos + 1)? {
                        return Ok(true);
                    }
                    self.undo_entry();
                }
                Ok(false)
            }
            Slot::Free => {
                for cand in self.ordered_candidates() {
                    if self.occ[cand as usize] >= self.occurrence_cap {
                        continue;
                    }
                    if self.try_entry(pos, cand)? {
                        if self.place(pos + 1)? {
                            return Ok(true);
                        }
                        self.undo_entry();
                    }
                }
                Ok(false)
            }
            Slot::BlockEnd => {
                let j2 = self.entries[pos - 3];
                for cand in self.ordered_candidates() {
                    if self.occ[cand as usize] >= self.occurrence_cap || cand == j2 {
                        continue;
                    }
                    let gained = pair_edge(j2, cand);
                    if !self.host.contains(&gained)
                        || self.used.contains(&gained)
                        || self.reserved.contains(&gained)
                    {
                        continue;
                    }
                    if self.try_entry(pos, cand)? {
                        self.reserved.insert(gained.clone());
                        if self.place(pos + 1)? {
                            return Ok(true);
                        }
                        self.reserved.remove(&gained);
                        self.undo_entry();
                    }
                }
                Ok(false)
            }
        }
    }

    /// Appends one entry if its new coverage is admissible; on success the
    /// new edges are committed (undo_entry reverses).
    fn try_entry(&mut self, pos: usize, cand: Vertex) -> Result<bool, SurgeryError> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(SurgeryError::BudgetExceeded {
                explored: self.nodes,
            });
        }
        if !window_ok(&self.entries, 2, cand) {
            return Ok(false);
        }
        self.entries.push(cand);
        let new_edges = appended_edges(&self.entries, 2);
        let admissible = new_edges.iter().all(|e| {
            self.host.contains(e)
                && !self.used.contains(e)
                && (!self.reserved.contains(e) || self.release_at.get(e) == Some(&pos))
        });
        if !admissible {
            self.entries.pop();
            return Ok(false);
        }
        for e in new_edges {
            self.used.insert(e);
        }
        self.occ[cand as usize] += 1;
        Ok(true)
    }

    fn undo_entry(&mut self) {
        for e in appended_edges(&self.entries, 2) {
            self.used.remove(&e);
        }
        let cand = self.entries.pop().expect("undo matches a placement");
        self.occ[cand as usize] -= 1;
    }
}

/// Plans a complete turn sequence on n vertices for the 2-uniform setting:
/// removes a minimum matching, builds a trail hosting one turn block per
/// fixing arc, applies every turn, and certifies that the residual graph
/// meets the trail residue conditions at the designated residual ends.
/// Needs n to be large enough that the trail fits next to the reserved
/// pairs; n of the form 4m+1 keeps the arc count, and so the needed room,
/// small.
pub fn plan_turn_sequence(n: u32) -> Result<TurnPlan, SurgeryError> {
    plan_turn_sequence_with(n, &PlanCaps::default())
}

pub fn plan_turn_sequence_with(n: u32, caps: &PlanCaps) -> Result<TurnPlan, SurgeryError> {
    const D: usize = 2;
    const DD: u64 = 4;
    let start1: [Vertex; 2] = [1, 2];
    let finish1: [Vertex; 2] = [3, 4];
    let t2_start: [Vertex; 2] = [7, 8];
    let t2_finish: [Vertex; 2] = [11, 12]; // entries in trail order; outside-in tuple is (12, 11)
    let tail_edge = pair_edge(9, 10);
    if n < 13 {
        return Err(SurgeryError::HostTooSmall {
            n,
            needed: 13,
            capacity: u64::from(n),
        });
    }
    let s = compute_s(n, D);
    let matching: Vec<Edge> = if s == 1 { vec![pair_edge(5, 6)] } else { vec![] };
    let host = DGraph::complete(n, D)?.with_edges_removed(&matching)?;
    let mut log = vec![format!(
        "host: complete graph on {n} vertices minus a matching of size {s}"
    )];

    // residue plan: targets for the residual trail ends, corrections for the
    // planned trail's own ends, one extra unit where the tail edge returns
    let mut target = vec![0u64; n as usize + 1];
    target[1] = 2;
    target[2] = 3;
    target[3] = 2;
    target[4] = 3;
    let mut trail_end_residue = vec![0u64; n as usize + 1];
    trail_end_residue[t2_start[0] as usize] = 2;
    trail_end_residue[t2_start[1] as usize] = 3;
    trail_end_residue[t2_finish[1] as usize] = 2;
    trail_end_residue[t2_finish[0] as usize] = 3;
    let mut tail_bump = vec![0u64; n as usize + 1];
    tail_bump[9] = 1;
    tail_bump[10] = 1;
    let mut need = vec![0u64; n as usize + 1];
    for v in 1..=n {
        let i = v as usize;
        let base = (host.degree(&[v]) as u64 + 2 * DD - trail_end_residue[i] + tail_bump[i]) % DD;
        need[i] = (target[i] + DD - base) % DD;
    }

    let static_reserved: Vec<Edge> = vec![
        pair_edge(1, 2),
        pair_edge(3, 4),
        pair_edge(7, 8),
        pair_edge(9, 10),
        pair_edge(9, 11),
        pair_edge(10, 11),
        pair_edge(10, 12),
        pair_edge(11, 12),
    ];
    let static_set: HashSet<Edge> = static_reserved.iter().cloned().collect();
    let pair_ok = |x: Vertex, y: Vertex| -> bool {
        let e = pair_edge(x, y);
        host.contains(&e) && !static_set.contains(&e)
    };
    let mut arcs = fix_core(n, D, &need, &pair_ok)?;
    log.push(format!("fixing digraph: {} arcs", arcs.arcs.len()));

    // the first block sits right after the start stub (7, 8), so its forced
    // entries pair up with 7 and 8; pick a first arc that keeps those pairs
    // ordinary
    let arc_set: HashSet<Edge> = arcs.arcs.iter().map(|&(x, y)| pair_edge(x, y)).collect();
    let first_fits = |&(j1, j2): &(Vertex, Vertex)| -> bool {
        j1 != 7
            && j1 != 8
            && j2 != 7
            && j2 != 8
            && !arc_set.contains(&pair_edge(7, j2))
            && !arc_set.contains(&pair_edge(8, j2))
            && !arc_set.contains(&pair_edge(8, j1))
    };
    if let Some(i) = arcs.arcs.iter().position(first_fits) {
        arcs.arcs.swap(0, i);
    }

    // capacity: the trail's coverage plus the never-covered end pairs plus
    // one reserved gained pair per arc must fit in the host
    let blocks = arcs.arcs.len();
    let k = 6 + 6 * blocks;
    let needed = (2 * k - 3 + 2 + blocks) as u64;
    if needed > host.len() as u64 {
        return Err(SurgeryError::HostTooSmall {
            n,
            needed,
            capacity: host.len() as u64,
        });
    }

    // one six-entry block per arc: the turn run (j2, j1, free, free), then
    // two padding entries so consecutive blocks' forced entries never pair up
    let mut slots = vec![Slot::Forced(t2_start[0]), Slot::Forced(t2_start[1])];
    let mut release_at: HashMap<Edge, usize> = HashMap::new();
    release_at.insert(pair_edge(7, 8), 1);
    for (i, &(j1, j2)) in arcs.arcs.iter().enumerate() {
        slots.extend([
            Slot::Forced(j2),
            Slot::Forced(j1),
            Slot::Free,
            Slot::BlockEnd,
            Slot::Free,
            Slot::Free,
        ]);
        release_at.insert(pair_edge(j1, j2), 2 + 6 * i + 1);
    }
    let tail_start = slots.len();
    slots.extend([
        Slot::Forced(9),
        Slot::Forced(10),
        Slot::Forced(t2_finish[0]),
        Slot::Forced(t2_finish[1]),
    ]);
    release_at.insert(pair_edge(9, 10), tail_start + 1);
    release_at.insert(pair_edge(9, 11), tail_start + 2);
    release_at.insert(pair_edge(10, 11), tail_start + 2);
    release_at.insert(pair_edge(10, 12), tail_start + 3);
    release_at.insert(pair_edge(11, 12), tail_start + 3);
    let mut reserved = static_set;
    reserved.extend(arcs.arcs.iter().map(|&(x, y)| pair_edge(x, y)));
    let mut search = PlanSearch {
        host: &host,
        slots,
        entries: Vec::with_capacity(k),
        used: HashSet::new(),
        reserved,
        release_at,
        occ: vec![0; n as usize + 1],
        occurrence_cap: caps.occurrence_cap,
        nodes: 0,
        cap: caps.node_cap,
    };
    if !search.place(0)? {
        return Err(SurgeryError::GlueInfeasible {
            explored: search.nodes,
        });
    }
    let trail = VertexSeq::open(D, search.entries)?;
    let report = trail.validate(&host)?;
    assert!(report.valid, "planned trail must be valid in the host");
    log.push(format!(
        "trail: {} entries covering {} edges",
        trail.len(),
        report.covered.len()
    ));

    let mut family = trail.facets_on(n)?;
    let mut turns = Vec::with_capacity(blocks);
    for (i, &(j1, j2)) in arcs.arcs.iter().enumerate() {
        let off = 2 + 6 * i;
        let run = &trail.entries()[off..off + 4];
        let outcome = apply_turn(&family, run)?;
        log.push(format!(
            "turn {} for arc ({j1} -> {j2}): facet {} becomes {}, shadow gains {} and drops {}",
            i + 1,
            outcome.removed,
            outcome.added,
            outcome.gained[0],
            outcome.lost[0],
        ));
        family = outcome.family.clone();
        turns.push(TurnRecord {
            arc: (j1, j2),
            block_start: off + 1,
            removed: outcome.removed,
            added: outcome.added,
            gained: outcome.gained,
            lost: outcome.lost,
        });
    }

    let shadow = family.shadow();
    assert!(shadow.contains(&tail_edge), "tail edge stays covered");
    let residual = host
        .difference(&shadow)?
        .with_edges_added([&tail_edge])?;
    let obstructions = trail_feasible(&residual, &start1, &finish1)?;
    let certified = obstructions.is_empty();
    log.push(format!(
        "residual: {} edges, certification {}",
        residual.len(),
        if certified { "passed" } else { "FAILED" }
    ));
    Ok(TurnPlan {
        n,
        d: D,
        matching,
        host,
        trail,
        arcs,
        turns,
        family,
        tail_edge,
        residual,
        residual_start: start1.to_vec(),
        residual_finish: finish1.to_vec(),
        obstructions,
        certified,
        log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge(vs: &[Vertex]) -> Edge {
        Edge::new(vs.to_vec()).unwrap()
    }

    #[test]
    fn glue_joins_two_paths() {
        let host = DGraph::complete(9, 2).unwrap();
        let a = VertexSeq::open(2, vec![1, 2, 3]).unwrap();
        let b = VertexSeq::open(2, vec![4, 5, 6]).unwrap();
        let glued = glue(&a, &b, &host).unwrap();
        assert_eq!(glued.len(), 3 + 4 + 3);
        assert_eq!(&glued.entries()[..3], &[1, 2, 3]);
        assert_eq!(&glued.entries()[7..], &[4, 5, 6]);
        assert!(glued.validate(&host).unwrap().valid);
        let cov = glued.covered_set();
        for e in a.covered_set().union(&b.covered_set()) {
            assert!(cov.contains(e));
        }
    }

    #[test]
    fn glue_accepts_empty_pieces() {
        let host = DGraph::complete(7, 2).unwrap();
        let b = VertexSeq::open(2, vec![1, 2, 3]).unwrap();
        let empty = VertexSeq::empty(2);
        let glued = glue(&empty, &b, &host).unwrap();
        assert_eq!(glued.len(), 7);
        assert_eq!(&glued.entries()[4..], &[1, 2, 3]);
        let glued = glue(&b, &empty, &host).unwrap();
        assert_eq!(&glued.entries()[..3], &[1, 2, 3]);
        let glued = glue(&empty, &empty, &host).unwrap();
        assert_eq!(glued.len(), 4);
        assert!(glued.validate(&host).unwrap().valid);
    }

    #[test]
    fn glue_needs_spare_edges() {
        let a = VertexSeq::open(2, vec![1, 2, 3]).unwrap();
        let b = VertexSeq::open(2, vec![4, 5, 6]).unwrap();
        let host = DGraph::new(
            6,
            2,
            a.covered_set().into_iter().chain(b.covered_set()).collect(),
        )
        .unwrap();
        assert!(matches!(
            glue(&a, &b, &host),
            Err(SurgeryError::GlueInfeasible { .. })
        ));
    }

    #[test]
    fn glue_rejects_overlapping_pieces() {
        let host = DGraph::complete(9, 2).unwrap();
        let a = VertexSeq::open(2, vec![1, 2, 3]).unwrap();
        let b = VertexSeq::open(2, vec![2, 3, 4]).unwrap();
        assert!(matches!(
            glue(&a, &b, &host),
            Err(SurgeryError::NotEdgeDisjoint(_))
        ));
    }

    #[test]
    fn restricted_glue_keeps_connectors_in_the_allowed_set() {
        let host = DGraph::complete(10, 2).unwrap();
        let a = VertexSeq::open(2, vec![1, 2, 3]).unwrap();
        let b = VertexSeq::open(2, vec![7, 8, 9]).unwrap();
        let allowed = [4, 5, 6, 10];
        let glued = glue_restricted(&a, &b, &host, &allowed, SURGERY_NODE_CAP).unwrap();
        assert!(glued.validate(&host).unwrap().valid);
        for &v in &glued.entries()[3..7] {
            assert!(allowed.contains(&v), "connector entry {v} escaped");
        }
        assert!(matches!(
            glue_restricted(&a, &b, &host, &[4], SURGERY_NODE_CAP),
            Err(SurgeryError::GlueInfeasible { .. })
        ));
    }

    #[test]
    fn turn_moves_one_shadow_set() {
        let seq = VertexSeq::open(2, (1..=9).collect()).unwrap();
        let fam = seq.facets_of();
        let before = fam.shadow();
        let out = apply_turn(&fam, &[4, 5, 6, 7]).unwrap();
        assert_eq!(out.removed, edge(&[5, 6, 7]));
        assert_eq!(out.added, edge(&[4, 6, 7]));
        assert_eq!(out.gained, vec![edge(&[4, 7])]);
        assert_eq!(out.lost, vec![edge(&[5, 7])]);
        let after = out.family.shadow();
        assert_eq!(after.len(), before.len());
        assert_eq!(after.degree(&[4]), before.degree(&[4]) + 1);
        assert_eq!(after.degree(&[5]), before.degree(&[5]) - 1);
        assert_eq!(out.family.dual_report().shape, DualShape::Path);
    }

    #[test]
    fn turn_preconditions_are_checked() {
        let seq = VertexSeq::open(2, (1..=9).collect()).unwrap();
        let fam = seq.facets_of();
        assert!(matches!(
            apply_turn(&fam, &[4, 5, 6]),
            Err(SurgeryError::RunLength { .. })
        ));
        assert!(matches!(
            apply_turn(&fam, &[4, 5, 6, 4]),
            Err(SurgeryError::RunRepeats)
        ));
        assert!(matches!(
            apply_turn(&fam, &[1, 5, 6, 7]),
            Err(SurgeryError::FacetAbsent(_))
        ));
        // a family where the gained pair already sits in the shadow
        let fam = FacetFamily::new(
            5,
            2,
            vec![
                edge(&[1, 2, 3]),
                edge(&[2, 3, 4]),
                edge(&[3, 4, 5]),
                edge(&[1, 4, 5]),
            ],
        )
        .unwrap();
        assert!(matches!(
            apply_turn(&fam, &[1, 2, 3, 4]),
            Err(SurgeryError::ShadowCollision(_))
        ));
    }

    #[test]
    fn cycle_insertion_matches_the_exchange_formula() {
        let host = DGraph::complete(7, 2).unwrap();
        let trail = VertexSeq::open(2, vec![1, 2, 3]).unwrap();
        let cycle = VertexSeq::closed(2, vec![4, 2, 5, 6, 7]).unwrap();
        let out = insert_cycle(&trail, &cycle, &host).unwrap();
        assert_eq!(out.merged.entries(), &[1, 2, 5, 6, 7, 4, 2, 3]);
        assert_eq!(out.position, 1);
        assert_eq!(out.rotation, 0);
        assert_eq!(out.gained, vec![edge(&[1, 5]), edge(&[3, 4])]);
        assert_eq!(out.lost, vec![edge(&[1, 3]), edge(&[4, 5])]);
        assert!(out.merged.validate(&host).unwrap().valid);
        // coverage identity: new = (trail ∪ cycle ∪ gained) minus lost
        let mut expect = trail.covered_set();
        expect.extend(cycle.covered_set());
        expect.extend(out.gained.iter().cloned());
        for e in &out.lost {
            expect.remove(e);
        }
        assert_eq!(out.merged.covered_set(), expect);
    }

    #[test]
    fn cycle_insertion_requires_a_matching_run() {
        let host = DGraph::complete(9, 2).unwrap();
        let trail = VertexSeq::open(2, vec![1, 2, 3]).unwrap();
        let cycle = VertexSeq::closed(2, vec![4, 5, 6, 7, 8]).unwrap();
        assert!(matches!(
            insert_cycle(&trail, &cycle, &host),
            Err(SurgeryError::NoSplice)
        ));
    }

    #[test]
    fn label_swap_is_an_involution() {
        let seq = VertexSeq::open(3, vec![1, 2, 3, 4, 5, 2, 6]).unwrap();
        let swapped = swap_labels(&seq, 2, 6);
        assert_eq!(swapped.entries(), &[1, 6, 3, 4, 5, 6, 2]);
        assert_eq!(swap_labels(&swapped, 2, 6), seq);
    }

    #[test]
    fn switcher_certificate_on_the_seven_vertex_instance() {
        // walk order: x1 w2 u0 x2 x3 w0 u2 x1, then u0 and w0 exchanged
        let t1 = VertexSeq::open(2, vec![1, 2, 3, 4, 5, 6, 7, 1]).unwrap();
        let t2 = swap_labels(&t1, 3, 6);
        let e1 = [edge(&[2, 3]), edge(&[6, 7])];
        let e2 = [edge(&[2, 6]), edge(&[3, 7])];
        let report = verify_switcher(&t1, &t2, &e1, &e2).unwrap();
        assert!(report.e1_matches);
        assert!(report.e2_matches);
        assert!(report.ends_match);
        assert!(report.exchange_independent);
        assert!(report.valid);
        // a wrong designation fails the right clause
        let report = verify_switcher(&t1, &t2, &e2, &e1).unwrap();
        assert!(!report.e1_matches);
        assert!(!report.valid);
    }

    #[test]
    fn fix_digraph_clauses_on_a_complete_graph() {
        let g = DGraph::complete(7, 2).unwrap();
        let fix = fix_digraph(&g, &[1, 2], &[6, 7]).unwrap();
        // clause: adjusted degrees hit the outside-in end residues
        for v in 1..=7u32 {
            let want = match v {
                1 | 6 => 2,
                2 | 7 => 3,
                _ => 0,
            };
            let adjusted =
                g.degree(&[v]) as i64 + fix.out_degree(v) as i64 - fix.in_degree(v) as i64;
            assert_eq!(adjusted.rem_euclid(4), want, "vertex {v}");
            assert!(fix.occupancy(v) <= 20);
        }
        // clause: arcs use host edges other than the end pairs
        for &(x, y) in &fix.arcs {
            let e = pair_edge(x, y);
            assert!(g.contains(&e));
            assert_ne!(e, edge(&[1, 2]));
            assert_ne!(e, edge(&[6, 7]));
        }
    }

    #[test]
    fn fix_digraph_detects_a_broken_residue_total() {
        let g = DGraph::complete(7, 2)
            .unwrap()
            .with_edges_removed(&[edge(&[3, 4])])
            .unwrap();
        assert!(matches!(
            fix_digraph(&g, &[1, 2], &[6, 7]),
            Err(SurgeryError::FixClosure { .. })
        ));
    }

    #[test]
    fn turn_plan_certifies_a_residual_trail() {
        let plan = plan_turn_sequence(33).unwrap();
        assert!(plan.certified, "obstructions: {:?}", plan.obstructions);
        assert_eq!(plan.turns.len(), plan.arcs.arcs.len());
        assert_eq!(plan.family.dual_report().shape, DualShape::Path);
        assert!(plan.trail.validate(&plan.host).unwrap().valid);
        assert_eq!(plan.residual.len() % 2, 1);
        assert!(plan.residual.contains(&edge(&[1, 2])));
        assert!(plan.residual.contains(&edge(&[3, 4])));
        assert!(plan.residual.contains(&plan.tail_edge));
        let shadow = plan.family.shadow();
        assert!(shadow.contains(&plan.tail_edge));
        // the residual and the family's shadow overlap exactly in the tail edge
        let overlap: Vec<&Edge> = plan
            .residual
            .edges()
            .iter()
            .filter(|e| shadow.contains(e))
            .collect();
        assert_eq!(overlap, vec![&plan.tail_edge]);
    }

    #[test]
    fn turn_plan_reports_too_small_hosts() {
        assert!(matches!(
            plan_turn_sequence(12),
            Err(SurgeryError::HostTooSmall { .. })
        ));
        assert!(matches!(
            plan_turn_sequence(14),
            Err(SurgeryError::HostTooSmall { .. })
        ));
    }

    #[test]
    fn glue_handles_higher_uniformity() {
        let host = DGraph::complete(11, 3).unwrap();
        let a = VertexSeq::open(3, vec![1, 2, 3, 4]).unwrap();
        let b = VertexSeq::open(3, vec![5, 6, 7]).unwrap();
        let glued = glue(&a, &b, &host).unwrap();
        assert_eq!(glued.len(), 4 + 6 + 3);
        assert!(glued.validate(&host).unwrap().valid);
    }
}
