//! Exact decision procedure for small graphs: does `g` contain `k` disjoint
//! cycles of order at least `r`?
//!
//! The search branches on the lowest available vertex, which is either left
//! out or lies on a cycle whose other vertices are all higher. A cycle whose
//! vertices span a chord closing a shorter cycle of order at least `r` is
//! never needed, since swapping in the shorter cycle keeps the packing valid
//! and uses fewer vertices; such paths are cut early.

use serde::Serialize;

use crate::engine::{verify_certificate, PackingCertificate};
use crate::graph::{Graph, VertexId};

/// Oracle capacity: vertex sets are bit masks, so at most 64 vertices.
pub const MAX_ORACLE_VERTICES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_vertices: usize,
    pub max_nodes: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_vertices: 20,
            max_nodes: 200_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "answer", content = "certificate", rename_all = "snake_case")]
pub enum OracleOutcome {
    Yes(PackingCertificate),
    No,
    BudgetExceeded,
}

struct OutOfBudget;

struct Search {
    adj: Vec<u64>,
    r: usize,
    nodes_left: u64,
    chosen: Vec<Vec<usize>>,
}

impl Search {
    fn tick(&mut self) -> Result<(), OutOfBudget> {
        self.nodes_left = self.nodes_left.checked_sub(1).ok_or(OutOfBudget)?;
        Ok(())
    }

    fn pack(&mut self, avail: u64, needed: usize) -> Result<bool, OutOfBudget> {
        if needed == 0 {
            return Ok(true);
        }
        if (avail.count_ones() as usize) < needed * self.r {
            return Ok(false);
        }
        self.tick()?;
        let v = avail.trailing_zeros() as usize;
        let rest = avail & !(1u64 << v);
        let mut path = vec![v];
        if self.cycles_through(&mut path, rest, rest, needed)? {
            return Ok(true);
        }
        self.pack(rest, needed)
    }

    /// Extends `path` inside `free`; each completed cycle is tried against the
    /// rest of `avail`.
    fn cycles_through(
        &mut self,
        path: &mut Vec<usize>,
        free: u64,
        avail: u64,
        needed: usize,
    ) -> Result<bool, OutOfBudget> {
        let last = *path.last().unwrap();
        let mut candidates = self.adj[last] & free;
        while candidates != 0 {
            let u = candidates.trailing_zeros() as usize;
            candidates &= candidates - 1;
            self.tick()?;
            path.push(u);
            let j = path.len() - 1;
            // A chord from u back to p_i with j − i + 1 >= r closes a shorter
            // long cycle; i = 0 is the closing edge itself.
            let long_chord = (1..j.saturating_sub(1))
                .any(|i| j - i + 1 >= self.r && self.adj[u] >> path[i] & 1 == 1);
            let closes = j + 1 >= self.r && self.adj[u] >> path[0] & 1 == 1;
            if !long_chord {
                if closes {
                    if path[1] < u {
                        let used = path.iter().fold(0u64, |m, &p| m | 1 << p);
                        self.chosen.push(path.clone());
                        if self.pack(avail & !used, needed - 1)? {
                            return Ok(true);
                        }
                        self.chosen.pop();
                    }
                } else if self.cycles_through(path, free & !(1u64 << u), avail, needed)? {
                    return Ok(true);
                }
            }
            path.pop();
        }
        Ok(false)
    }
}

/// Exhaustive search for `k` disjoint cycles of order at least `r`.
/// `No` is only returned after the search space is exhausted.
pub fn exact_pack(g: &Graph, k: usize, r: usize, budget: OracleBudget) -> OracleOutcome {
    let r_eff = r.max(3);
    if k == 0 {
        return OracleOutcome::Yes(PackingCertificate { k, r, cycles: Vec::new() });
    }
    if g.n() > budget.max_vertices.min(MAX_ORACLE_VERTICES) {
        return OracleOutcome::BudgetExceeded;
    }
    let ids: Vec<VertexId> = g.vertices().collect();
    let index = |v: VertexId| ids.binary_search(&v).expect("vertex of g");
    let adj: Vec<u64> = ids
        .iter()
        .map(|&v| g.neighbors(v).iter().fold(0u64, |m, &u| m | 1 << index(u)))
        .collect();
    let all = if ids.len() == 64 { u64::MAX } else { (1u64 << ids.len()) - 1 };
    let mut search = Search {
        adj,
        r: r_eff,
        nodes_left: budget.max_nodes,
        chosen: Vec::new(),
    };
    match search.pack(all, k) {
        Err(OutOfBudget) => OracleOutcome::BudgetExceeded,
        Ok(false) => OracleOutcome::No,
        Ok(true) => {
            let cert = PackingCertificate {
                k,
                r,
                cycles: search
                    .chosen
                    .iter()
                    .map(|c| c.iter().map(|&i| ids[i]).collect())
                    .collect(),
            };
            debug_assert!(verify_certificate(g, &cert));
            OracleOutcome::Yes(cert)
        }
    }
}
