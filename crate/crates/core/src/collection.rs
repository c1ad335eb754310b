//! Collections of vertex-disjoint short cycles and their lexicographic
//! potential.
//!
//! Inside a collection an edge counts as a cycle of order 2 and a single
//! vertex as a cycle of order 1.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

/// Cyclically ordered vertex sequence stored in canonical rotation: smallest
/// vertex first, then the direction whose second vertex is smaller.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Cycle(Vec<VertexId>);

impl Cycle {
    pub fn new(mut vertices: Vec<VertexId>) -> Result<Cycle> {
        if vertices.is_empty() {
            return Err(Error::InvalidCycles("empty cycle".into()));
        }
        let distinct: BTreeSet<_> = vertices.iter().collect();
        if distinct.len() != vertices.len() {
            return Err(Error::InvalidCycles(format!(
                "repeated vertex in {vertices:?}"
            )));
        }
        let pos = (0..vertices.len()).min_by_key(|&i| vertices[i]).unwrap();
        vertices.rotate_left(pos);
        let len = vertices.len();
        if len >= 3 && vertices[len - 1] < vertices[1] {
            vertices[1..].reverse();
        }
        Ok(Cycle(vertices))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn into_vertices(self) -> Vec<VertexId> {
        self.0
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.contains(&v)
    }

    /// Consecutive pairs `(c[i], c[i+1])`: one for order 2, none for order 1.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        match self.len() {
            1 => Vec::new(),
            2 => vec![(self.0[0], self.0[1])],
            n => (0..n).map(|i| (self.0[i], self.0[(i + 1) % n])).collect(),
        }
    }

    /// Order 1: the vertex exists. Order 2: the edge exists. Otherwise every
    /// consecutive pair is an edge.
    pub fn is_in(&self, g: &Graph) -> bool {
        self.0.iter().all(|&v| g.contains(v)) && self.edges().iter().all(|&(u, v)| g.has_edge(u, v))
    }
}

impl<'de> Deserialize<'de> for Cycle {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<VertexId>::deserialize(d)?;
        Cycle::new(v).map_err(serde::de::Error::custom)
    }
}

/// `(|C(r)|, |C(r−1)|, …, |C(1)|)`, compared most-significant first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Potential(pub Vec<usize>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleCollection {
    r: usize,
    /// `buckets[i]` holds the cycles of order `i + 1`.
    buckets: Vec<BTreeSet<Cycle>>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    /// Vertices that lie in more than one cycle.
    pub shared_vertices: Vec<VertexId>,
    /// Entries that are not cycles (or edges, or vertices) of the graph.
    pub non_cycles: Vec<Cycle>,
    /// Entries filed under the wrong order, or of order above `r`.
    pub misfiled: Vec<Cycle>,
    /// Graph vertices covered by no cycle; only filled when spanning is required.
    pub uncovered: Vec<VertexId>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.shared_vertices.is_empty()
            && self.non_cycles.is_empty()
            && self.misfiled.is_empty()
            && self.uncovered.is_empty()
    }
}

#[derive(Serialize, Deserialize)]
struct CollectionJson {
    r: usize,
    cycles: Vec<Cycle>,
}

impl CycleCollection {
    pub fn new(r: usize) -> Result<Self> {
        if r < 3 {
            return Err(Error::InvalidParameter(format!("order cap r = {r} < 3")));
        }
        Ok(CycleCollection {
            r,
            buckets: vec![BTreeSet::new(); r],
        })
    }

    /// Every vertex of `g` as its own 1-cycle.
    pub fn seed(g: &Graph, r: usize) -> Result<Self> {
        let mut c = Self::new(r)?;
        for v in g.vertices() {
            c.buckets[0].insert(Cycle(vec![v]));
        }
        Ok(c)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Cycles of order `order` (`1..=r`).
    pub fn bucket(&self, order: usize) -> &BTreeSet<Cycle> {
        &self.buckets[order - 1]
    }

    /// All cycles, by increasing order then canonical sequence.
    pub fn cycles(&self) -> impl Iterator<Item = &Cycle> + '_ {
        self.buckets.iter().flatten()
    }

    pub fn len(&self) -> usize {
        self.buckets.iter().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, c: &Cycle) -> bool {
        !c.is_empty() && c.len() <= self.r && self.buckets[c.len() - 1].contains(c)
    }

    /// Files `c` under its order. Disjointness is not checked here; see
    /// [`CycleCollection::validate`].
    pub fn insert(&mut self, c: Cycle) -> Result<()> {
        if c.len() > self.r {
            return Err(Error::InvalidCollection(format!(
                "cycle of order {} exceeds cap {}",
                c.len(),
                self.r
            )));
        }
        self.buckets[c.len() - 1].insert(c);
        Ok(())
    }

    pub fn remove(&mut self, c: &Cycle) -> bool {
        !c.is_empty() && c.len() <= self.r && self.buckets[c.len() - 1].remove(c)
    }

    pub fn potential(&self) -> Potential {
        Potential(self.buckets.iter().rev().map(BTreeSet::len).collect())
    }

    /// Map from each covered vertex to the cycle containing it.
    pub fn owners(&self) -> BTreeMap<VertexId, &Cycle> {
        let mut map = BTreeMap::new();
        for c in self.cycles() {
            for &v in c.vertices() {
                map.insert(v, c);
            }
        }
        map
    }

    pub fn validate(&self, g: &Graph, require_spanning: bool) -> ValidationReport {
        let mut report = ValidationReport::default();
        let mut seen = BTreeSet::new();
        let mut shared = BTreeSet::new();
        for (i, bucket) in self.buckets.iter().enumerate() {
            for c in bucket {
                if c.len() != i + 1 {
                    report.misfiled.push(c.clone());
                }
                if !c.is_in(g) {
                    report.non_cycles.push(c.clone());
                }
                for &v in c.vertices() {
                    if !seen.insert(v) {
                        shared.insert(v);
                    }
                }
            }
        }
        report.shared_vertices = shared.into_iter().collect();
        if require_spanning {
            report.uncovered = g.vertices().filter(|v| !seen.contains(v)).collect();
        }
        report
    }

    /// `{"r": r, "cycles": [[v, ...], ...]}`, cycles sorted by order then
    /// first vertex.
    pub fn to_json(&self) -> String {
        let doc = CollectionJson {
            r: self.r,
            cycles: self.cycles().cloned().collect(),
        };
        serde_json::to_string(&doc).expect("collection serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: CollectionJson = serde_json::from_str(text)
            .map_err(|e| Error::InvalidCollection(format!("bad JSON: {e}")))?;
        let mut c = Self::new(doc.r)?;
        for cycle in doc.cycles {
            c.insert(cycle)?;
        }
        Ok(c)
    }
}
