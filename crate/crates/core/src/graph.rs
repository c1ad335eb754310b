//! Simple undirected graphs with stable vertex identifiers.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::Ratio;

use crate::error::{Error, Result};

pub type VertexId = u32;

/// Exact rational used for every degree threshold.
pub type Rational = Ratio<i64>;

/// Undirected simple graph. Adjacency lists are kept sorted and duplicate
/// free, so neighbourhood intersection is a linear merge.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: BTreeMap<VertexId, Vec<VertexId>>,
    edges: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphStats {
    pub n: usize,
    pub m: usize,
    /// `2m / n`, reduced.
    pub avg_degree: Rational,
    pub min_degree: usize,
    /// Minimum number of common neighbours over all edges; `None` when edgeless.
    pub tau: Option<usize>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Graph on `0..n` with no edges.
    pub fn empty(n: usize) -> Self {
        let mut g = Self::new();
        for v in 0..n as VertexId {
            g.add_vertex(v);
        }
        g
    }

    pub fn from_edges<I>(edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut g = Self::new();
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, v: VertexId) {
        self.adj.entry(v).or_default();
    }

    /// Adds `uv`, creating missing endpoints. Re-adding an existing edge is a
    /// no-op; loops are rejected.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        if u == v {
            return Err(Error::InvalidParameter(format!("loop at vertex {u}")));
        }
        let nu = self.adj.entry(u).or_default();
        match nu.binary_search(&v) {
            Ok(_) => return Ok(()),
            Err(pos) => nu.insert(pos, v),
        }
        let nv = self.adj.entry(v).or_default();
        let pos = nv.binary_search(&u).unwrap_err();
        nv.insert(pos, u);
        self.edges += 1;
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.edges
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.adj.contains_key(&v)
    }

    /// Vertices in increasing id order.
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.adj.keys().copied()
    }

    /// Sorted neighbourhood; empty for unknown vertices.
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        self.adj.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.neighbors(v).len()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.adj
            .iter()
            .flat_map(|(&u, nb)| nb.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn stats(&self) -> Result<GraphStats> {
        if self.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let n = self.n();
        let m = self.m();
        let min_degree = self.adj.values().map(Vec::len).min().unwrap_or(0);
        let tau = self
            .edges()
            .map(|(u, v)| count_common(self.neighbors(u), self.neighbors(v)))
            .min();
        Ok(GraphStats {
            n,
            m,
            avg_degree: Rational::new(2 * m as i64, n as i64),
            min_degree,
            tau,
        })
    }

    pub fn common_neighbors(&self, u: VertexId, v: VertexId) -> Result<Vec<VertexId>> {
        self.require(u)?;
        self.require(v)?;
        if u == v {
            return Err(Error::InvalidParameter(format!(
                "common neighbours of {u} with itself"
            )));
        }
        Ok(intersect(self.neighbors(u), self.neighbors(v)))
    }

    pub fn delete_vertex(&self, v: VertexId) -> Result<Graph> {
        let mut g = self.clone();
        g.delete_vertex_in_place(v)?;
        Ok(g)
    }

    /// Contracts `uv`; the merged vertex keeps the smaller of the two ids.
    pub fn contract_edge(&self, u: VertexId, v: VertexId) -> Result<Graph> {
        let mut g = self.clone();
        g.contract_edge_in_place(u, v)?;
        Ok(g)
    }

    pub(crate) fn delete_vertex_in_place(&mut self, v: VertexId) -> Result<()> {
        let nb = self.adj.remove(&v).ok_or(Error::UnknownVertex(v))?;
        for w in &nb {
            let list = self.adj.get_mut(w).expect("symmetric adjacency");
            let pos = list.binary_search(&v).expect("symmetric adjacency");
            list.remove(pos);
        }
        self.edges -= nb.len();
        Ok(())
    }

    /// Returns `(survivor, absorbed)`.
    pub(crate) fn contract_edge_in_place(
        &mut self,
        u: VertexId,
        v: VertexId,
    ) -> Result<(VertexId, VertexId)> {
        self.require(u)?;
        self.require(v)?;
        if !self.has_edge(u, v) {
            return Err(Error::NotAnEdge(u, v));
        }
        let (keep, gone) = if u < v { (u, v) } else { (v, u) };
        let absorbed: Vec<VertexId> = self
            .neighbors(gone)
            .iter()
            .copied()
            .filter(|&w| w != keep)
            .collect();
        self.delete_vertex_in_place(gone)?;
        for w in absorbed {
            self.add_edge(keep, w)?;
        }
        Ok((keep, gone))
    }

    fn require(&self, v: VertexId) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v))
        }
    }

    /// Graph induced on the vertices accepted by `keep`.
    pub fn induced<F: Fn(VertexId) -> bool>(&self, keep: F) -> Graph {
        let mut g = Graph::new();
        for v in self.vertices().filter(|&v| keep(v)) {
            g.add_vertex(v);
            for &w in self.neighbors(v) {
                if w > v && keep(w) {
                    g.add_edge(v, w).expect("source graph is simple");
                }
            }
        }
        g
    }

    /// Checks symmetry, absence of loops and strictly sorted adjacency.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let mut half_edges = 0;
        for (&v, nb) in &self.adj {
            if nb.windows(2).any(|w| w[0] >= w[1]) {
                return Err(format!("adjacency of {v} not strictly sorted"));
            }
            for &w in nb {
                if w == v {
                    return Err(format!("loop at {v}"));
                }
                if !self.neighbors(w).binary_search(&v).is_ok() {
                    return Err(format!("edge {v}-{w} not symmetric"));
                }
            }
            half_edges += nb.len();
        }
        if half_edges != 2 * self.edges {
            return Err(format!(
                "edge count {} disagrees with adjacency ({half_edges} half-edges)",
                self.edges
            ));
        }
        Ok(())
    }

    /// Parses the edge-list text format: `u v` per edge, `v` alone declares a
    /// vertex, `#` starts a comment line.
    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut g = Graph::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse = |tok: &str| {
                tok.parse::<VertexId>().map_err(|_| Error::Parse {
                    line: idx + 1,
                    msg: format!("invalid vertex id {tok:?}"),
                })
            };
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks.as_slice() {
                [v] => g.add_vertex(parse(v)?),
                [u, v] => {
                    let (u, v) = (parse(u)?, parse(v)?);
                    g.add_edge(u, v).map_err(|_| Error::Parse {
                        line: idx + 1,
                        msg: format!("loop {u} {v}"),
                    })?;
                }
                _ => {
                    return Err(Error::Parse {
                        line: idx + 1,
                        msg: format!("expected one or two tokens, got {}", toks.len()),
                    })
                }
            }
        }
        Ok(g)
    }

    /// Isolated vertices first (one per line), then edges sorted
    /// lexicographically.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for v in self.vertices().filter(|&v| self.degree(v) == 0) {
            let _ = writeln!(out, "{v}");
        }
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

/// Size of the intersection of two sorted slices.
pub(crate) fn count_common(a: &[VertexId], b: &[VertexId]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

pub(crate) fn intersect(a: &[VertexId], b: &[VertexId]) -> Vec<VertexId> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}
