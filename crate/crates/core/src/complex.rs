//! Pure simplicial complexes given by their facets, their shadows and dual
//! graphs, and certification of maximum-diameter examples.
//!
//! The dual graph has one node per facet, with two facets adjacent when they
//! share all but one vertex. A complex is strongly connected when its dual
//! graph is connected, and its diameter is the largest dual-graph distance
//! between two facets. On n vertices the diameter of a strongly connected
//! d-complex is at most `hs_bound(n, d)`, and a family attaining the bound is
//! called extremal.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::hypergraph::{binomial, DGraph, Edge, GraphError, Vertex, MAX_ENUMERATED_EDGES};

/// A pure d-dimensional complex on vertices 1..=n, listed by its facets
/// (sets of d+1 vertices).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetFamily {
    n: u32,
    d: usize,
    facets: Vec<Edge>,
    index: HashMap<Edge, usize>,
}

/// Shape of the dual graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DualShape {
    Path,
    Cycle,
    Other,
}

/// Connectivity, shape, and diameter of the dual graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualReport {
    pub shape: DualShape,
    pub connected: bool,
    /// Largest distance between two facets; None when disconnected or empty.
    pub diameter: Option<u64>,
}

/// Outcome of checking a family against the diameter bound.
#[derive(Clone, Debug, Serialize)]
pub struct ExtremalCertificate {
    pub n: u32,
    pub d: usize,
    pub facet_count: usize,
    pub shadow_size: usize,
    /// d-sets of the complete graph absent from the shadow.
    pub missing: Vec<Edge>,
    pub dual: DualShape,
    pub connected: bool,
    pub diameter: Option<u64>,
    pub bound: u64,
    /// True exactly when the family is strongly connected and its diameter
    /// attains the bound.
    pub extremal: bool,
}

/// Largest possible diameter of a strongly connected d-complex on n
/// vertices: floor((C(n,d) - d - 1) / d). Requires 2 <= d < n.
pub fn hs_bound(n: u32, d: usize) -> Result<u64, GraphError> {
    if d < 2 || n as usize <= d {
        return Err(GraphError::BadParameters { n, d });
    }
    Ok((binomial(n as u64, d as u64) - d as u64 - 1) / d as u64)
}

impl FacetFamily {
    pub fn new(n: u32, d: usize, facets: Vec<Edge>) -> Result<Self, GraphError> {
        if d < 1 || (n as usize) < d + 1 {
            return Err(GraphError::BadParameters { n, d });
        }
        let mut sorted = facets;
        for f in &sorted {
            if f.len() != d + 1 {
                return Err(GraphError::WrongEdgeSize(f.clone(), d + 1));
            }
            for &v in f.vertices() {
                if v == 0 || v > n {
                    return Err(GraphError::VertexOutOfRange { v, n });
                }
            }
        }
        sorted.sort();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateEdge(w[0].clone()));
            }
        }
        let index = sorted
            .iter()
            .enumerate()
            .map(|(i, f)| (f.clone(), i))
            .collect();
        Ok(FacetFamily {
            n,
            d,
            facets: sorted,
            index,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Dimension: facets have d+1 vertices.
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.facets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn facets(&self) -> &[Edge] {
        &self.facets
    }

    pub fn contains(&self, f: &Edge) -> bool {
        self.index.contains_key(f)
    }

    pub fn with_facet_removed(&self, f: &Edge) -> Result<FacetFamily, GraphError> {
        if !self.contains(f) {
            return Err(GraphError::MissingEdge(f.clone()));
        }
        let facets = self
            .facets
            .iter()
            .filter(|g| *g != f)
            .cloned()
            .collect();
        FacetFamily::new(self.n, self.d, facets)
    }

    pub fn with_facet_added(&self, f: Edge) -> Result<FacetFamily, GraphError> {
        let mut facets = self.facets.clone();
        facets.push(f);
        FacetFamily::new(self.n, self.d, facets)
    }

    /// All d-subsets of the facets, as a d-graph on the same vertex set.
    pub fn shadow(&self) -> DGraph {
        let mut seen = HashSet::new();
        let mut edges = Vec::new();
        for f in &self.facets {
            for drop in 0..f.len() {
                let vs: Vec<Vertex> = f
                    .vertices()
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != drop)
                    .map(|(_, &v)| v)
                    .collect();
                let e = Edge::new(vs).expect("facet vertices are distinct");
                if seen.insert(e.clone()) {
                    edges.push(e);
                }
            }
        }
        DGraph::new(self.n, self.d, edges).expect("shadow edges are valid")
    }

    fn dual_adjacency(&self) -> Vec<Vec<usize>> {
        let m = self.facets.len();
        let mut adj = vec![Vec::new(); m];
        for i in 0..m {
            for j in i + 1..m {
                if intersection_size(&self.facets[i], &self.facets[j]) == self.d {
                    adj[i].push(j);
                    adj[j].push(i);
                }
            }
        }
        adj
    }

    /// Classifies the dual graph and measures its diameter.
    pub fn dual_report(&self) -> DualReport {
        let adj = self.dual_adjacency();
        let m = adj.len();
        if m == 0 {
            return DualReport {
                shape: DualShape::Other,
                connected: false,
                diameter: None,
            };
        }
        let connected = {
            let mut seen = vec![false; m];
            let mut queue = VecDeque::from([0usize]);
            seen[0] = true;
            let mut count = 1;
            while let Some(u) = queue.pop_front() {
                for &w in &adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        count += 1;
                        queue.push_back(w);
                    }
                }
            }
            count == m
        };
        let ones = adj.iter().filter(|a| a.len() == 1).count();
        let twos = adj.iter().filter(|a| a.len() == 2).count();
        let shape = if !connected {
            DualShape::Other
        } else if m == 1 || (ones == 2 && twos == m - 2) {
            DualShape::Path
        } else if m >= 3 && twos == m {
            DualShape::Cycle
        } else {
            DualShape::Other
        };
        let diameter = if connected {
            let mut best = 0u64;
            for start in 0..m {
                let mut dist = vec![u64::MAX; m];
                dist[start] = 0;
                let mut queue = VecDeque::from([start]);
                while let Some(u) = queue.pop_front() {
                    for &w in &adj[u] {
                        if dist[w] == u64::MAX {
                            dist[w] = dist[u] + 1;
                            queue.push_back(w);
                        }
                    }
                }
                best = best.max(dist.iter().copied().max().unwrap());
            }
            Some(best)
        } else {
            None
        };
        DualReport {
            shape,
            connected,
            diameter,
        }
    }

    /// Compares this family against the diameter bound for its parameters.
    pub fn certify_extremal(&self) -> Result<ExtremalCertificate, GraphError> {
        let bound = hs_bound(self.n, self.d)?;
        if binomial(self.n as u64, self.d as u64) > MAX_ENUMERATED_EDGES {
            return Err(GraphError::TooLarge(binomial(self.n as u64, self.d as u64)));
        }
        let shadow = self.shadow();
        let full = DGraph::complete(self.n, self.d)?;
        let missing: Vec<Edge> = full
            .edges()
            .iter()
            .filter(|e| !shadow.contains(e))
            .cloned()
            .collect();
        let dual = self.dual_report();
        let extremal = dual.connected && dual.diameter == Some(bound);
        Ok(ExtremalCertificate {
            n: self.n,
            d: self.d,
            facet_count: self.facets.len(),
            shadow_size: shadow.len(),
            missing,
            dual: dual.shape,
            connected: dual.connected,
            diameter: dual.diameter,
            bound,
            extremal,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("facet family serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

fn intersection_size(a: &Edge, b: &Edge) -> usize {
    let (xs, ys) = (a.vertices(), b.vertices());
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < xs.len() && j < ys.len() {
        match xs[i].cmp(&ys[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

#[derive(Serialize, Deserialize)]
struct RawFamily {
    n: u32,
    d: usize,
    facets: Vec<Edge>,
}

impl Serialize for FacetFamily {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RawFamily {
            n: self.n,
            d: self.d,
            facets: self.facets.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FacetFamily {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let raw = RawFamily::deserialize(de)?;
        FacetFamily::new(raw.n, raw.d, raw.facets).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trails::VertexSeq;

    fn edge(vs: &[Vertex]) -> Edge {
        Edge::new(vs.to_vec()).unwrap()
    }

    #[test]
    fn bound_values() {
        assert_eq!(hs_bound(9, 2).unwrap(), 16);
        assert_eq!(hs_bound(6, 2).unwrap(), 6);
        assert_eq!(hs_bound(7, 3).unwrap(), 10);
        assert_eq!(hs_bound(5, 2).unwrap(), 3);
        assert!(hs_bound(3, 3).is_err());
        assert!(hs_bound(5, 1).is_err());
    }

    #[test]
    fn straight_path_has_path_dual_and_full_shadow_count() {
        let seq = VertexSeq::open(2, vec![1, 2, 3, 4, 5]).unwrap();
        let fam = seq.facets_of();
        let report = fam.dual_report();
        assert_eq!(report.shape, DualShape::Path);
        assert!(report.connected);
        assert_eq!(report.diameter, Some(2));
        // a path-dual family has exactly |F| * d + 1 shadow edges
        assert_eq!(fam.shadow().len(), fam.len() * 2 + 1);
    }

    #[test]
    fn straight_tour_has_cycle_dual() {
        let seq = VertexSeq::closed(2, vec![1, 2, 3, 4, 5]).unwrap();
        let fam = seq.facets_of();
        let report = fam.dual_report();
        assert_eq!(report.shape, DualShape::Cycle);
        assert_eq!(report.diameter, Some(2));
        // a cycle-dual family has exactly |F| * d shadow edges
        assert_eq!(fam.shadow().len(), fam.len() * 2);
    }

    #[test]
    fn deleting_one_facet_from_a_full_shadow_tour_is_extremal() {
        let seq = VertexSeq::closed(2, vec![1, 2, 3, 4, 5]).unwrap();
        let fam = seq.facets_of();
        let cut = fam.with_facet_removed(&edge(&[1, 2, 3])).unwrap();
        let cert = cut.certify_extremal().unwrap();
        assert!(cert.connected);
        assert_eq!(cert.dual, DualShape::Path);
        assert_eq!(cert.diameter, Some(3));
        assert_eq!(cert.bound, 3);
        assert!(cert.extremal);
        assert_eq!(cert.missing, vec![edge(&[1, 3])]);
        assert_eq!(cert.shadow_size, 9);
    }

    #[test]
    fn disconnected_family_has_no_diameter() {
        let fam = FacetFamily::new(
            8,
            2,
            vec![edge(&[1, 2, 3]), edge(&[5, 6, 7])],
        )
        .unwrap();
        let report = fam.dual_report();
        assert!(!report.connected);
        assert_eq!(report.shape, DualShape::Other);
        assert_eq!(report.diameter, None);
        let cert = fam.certify_extremal().unwrap();
        assert!(!cert.extremal);
    }

    #[test]
    fn branching_family_is_other() {
        let fam = FacetFamily::new(
            6,
            2,
            vec![
                edge(&[1, 2, 3]),
                edge(&[2, 3, 4]),
                edge(&[3, 4, 5]),
                edge(&[2, 3, 6]),
            ],
        )
        .unwrap();
        let report = fam.dual_report();
        assert!(report.connected);
        assert_eq!(report.shape, DualShape::Other);
    }

    #[test]
    fn three_facets_through_a_common_face_form_a_cycle() {
        let fam = FacetFamily::new(
            5,
            2,
            vec![edge(&[1, 2, 3]), edge(&[1, 2, 4]), edge(&[1, 2, 5])],
        )
        .unwrap();
        assert_eq!(fam.dual_report().shape, DualShape::Cycle);
    }

    #[test]
    fn single_facet_is_a_path_of_diameter_zero() {
        let fam = FacetFamily::new(4, 3, vec![edge(&[1, 2, 3, 4])]).unwrap();
        let report = fam.dual_report();
        assert_eq!(report.shape, DualShape::Path);
        assert_eq!(report.diameter, Some(0));
    }

    #[test]
    fn family_validation() {
        assert!(FacetFamily::new(5, 2, vec![edge(&[1, 2])]).is_err());
        assert!(FacetFamily::new(5, 2, vec![edge(&[1, 2, 6])]).is_err());
        assert!(
            FacetFamily::new(5, 2, vec![edge(&[1, 2, 3]), edge(&[1, 2, 3])]).is_err()
        );
        assert!(FacetFamily::new(3, 3, vec![]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let fam = FacetFamily::new(5, 2, vec![edge(&[1, 2, 3]), edge(&[2, 3, 4])]).unwrap();
        let text = fam.to_json();
        let back = FacetFamily::from_json(&text).unwrap();
        assert_eq!(back, fam);
        // facets must be valid: wrong size rejected at parse time
        assert!(FacetFamily::from_json(r#"{"n":5,"d":2,"facets":[[1,2]]}"#).is_err());
        assert!(FacetFamily::from_json(r#"{"n":5,"d":2,"facets":[[3,2,1]]}"#).is_err());
    }
}
