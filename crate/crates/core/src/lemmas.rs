//! Path searches on cycles used to reroute through a family of disjoint
//! cycles.
//!
//! Every search is an exhaustive scan over arc start positions and lengths,
//! so it returns a witness whenever one exists, whether or not the
//! cardinality hypotheses that guarantee one hold. Among several witnesses the
//! least one by (cycle index, start vertex id, length) is returned. Arcs are
//! read in the stored (clockwise) direction of each cycle.
//!
//! The guarantees themselves are checked by [`crate::lemma_suite`].

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Rational, VertexId};

pub type VertexSet = BTreeSet<VertexId>;

/// Disjoint cycles `F_1..F_t` (each of order `>= 3`) with a path length
/// `q_i` per cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleFamily {
    cycles: Vec<Vec<VertexId>>,
    q: Vec<usize>,
}

impl CycleFamily {
    /// Requires disjoint cycles of order `>= 3` and `1 <= q_i <= |F_i| − 1`.
    pub fn new(cycles: Vec<Vec<VertexId>>, q: Vec<usize>) -> Result<Self> {
        if cycles.len() != q.len() {
            return Err(Error::InvalidParameter(format!(
                "{} cycles but {} path lengths",
                cycles.len(),
                q.len()
            )));
        }
        let mut seen = VertexSet::new();
        for (cycle, &qi) in cycles.iter().zip(&q) {
            if cycle.len() < 3 {
                return Err(Error::InvalidParameter(format!(
                    "cycle {cycle:?} has fewer than 3 vertices"
                )));
            }
            if qi == 0 || qi >= cycle.len() {
                return Err(Error::InvalidParameter(format!(
                    "path length {qi} outside 1..={}",
                    cycle.len() - 1
                )));
            }
            for &v in cycle {
                if !seen.insert(v) {
                    return Err(Error::InvalidParameter(format!(
                        "vertex {v} appears in two cycles"
                    )));
                }
            }
        }
        Ok(CycleFamily { cycles, q })
    }

    pub fn cycles(&self) -> &[Vec<VertexId>] {
        &self.cycles
    }

    pub fn q(&self) -> &[usize] {
        &self.q
    }

    pub fn vertex_count(&self) -> usize {
        self.cycles.iter().map(Vec::len).sum()
    }

    fn check_members(&self, sets: [&VertexSet; 2]) -> Result<()> {
        for set in sets {
            for &v in set {
                if !self.cycles.iter().any(|c| c.contains(&v)) {
                    return Err(Error::InvalidParameter(format!(
                        "vertex {v} is not on the cycle family"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `path` is an arc of cycle `cycle_index`. With `spare`, a vertex of the
/// same cycle off the path; with `second_path`, a disjoint second arc.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RerouteWitness {
    pub cycle_index: usize,
    pub path: Vec<VertexId>,
    pub spare: Option<VertexId>,
    pub second_path: Option<Vec<VertexId>>,
}

/// The `len` vertices from position `start` onwards, wrapping around.
pub(crate) fn arc(cycle: &[VertexId], start: usize, len: usize) -> Vec<VertexId> {
    (0..len).map(|j| cycle[(start + j) % cycle.len()]).collect()
}

/// Cycle positions ordered by the vertex id found there.
fn positions_by_id(cycle: &[VertexId]) -> Vec<usize> {
    let mut pos: Vec<usize> = (0..cycle.len()).collect();
    pos.sort_by_key(|&i| cycle[i]);
    pos
}

fn check_simple_cycle(cycle: &[VertexId], min_len: usize) -> Result<()> {
    if cycle.len() < min_len {
        return Err(Error::Precondition(format!(
            "cycle of order {} is too short: need at least {min_len} vertices",
            cycle.len()
        )));
    }
    let distinct: VertexSet = cycle.iter().copied().collect();
    if distinct.len() != cycle.len() {
        return Err(Error::InvalidParameter(format!(
            "cycle {cycle:?} repeats a vertex"
        )));
    }
    Ok(())
}

fn check_subset(cycle: &[VertexId], sets: [&VertexSet; 2]) -> Result<()> {
    for set in sets {
        if let Some(v) = set.iter().find(|v| !cycle.contains(v)) {
            return Err(Error::InvalidParameter(format!(
                "vertex {v} is not on the cycle"
            )));
        }
    }
    Ok(())
}

/// A path of exactly `q_i` vertices along some `F_i` with both ends in `s`,
/// plus a vertex of `t` on `F_i` off the path.
///
/// Guaranteed to exist when `|S|, |T| > 2/3 |V(F)|`.
pub fn find_path_with_spare(
    family: &CycleFamily,
    s: &VertexSet,
    t: &VertexSet,
) -> Result<Option<RerouteWitness>> {
    family.check_members([s, t])?;
    Ok(path_with_spare(family.cycles(), family.q(), s, t))
}

pub(crate) fn path_with_spare(
    cycles: &[Vec<VertexId>],
    q: &[usize],
    s: &VertexSet,
    t: &VertexSet,
) -> Option<RerouteWitness> {
    for (i, cycle) in cycles.iter().enumerate() {
        let len = cycle.len();
        let qi = q[i];
        for start in positions_by_id(cycle) {
            let end = (start + qi - 1) % len;
            if !s.contains(&cycle[start]) || !s.contains(&cycle[end]) {
                continue;
            }
            let spare = (qi..len)
                .map(|j| cycle[(start + j) % len])
                .filter(|v| t.contains(v))
                .min();
            if let Some(spare) = spare {
                return Some(RerouteWitness {
                    cycle_index: i,
                    path: arc(cycle, start, qi),
                    spare: Some(spare),
                    second_path: None,
                });
            }
        }
    }
    None
}

/// Disjoint arcs `P` (ends in `s`, at least `min_p` vertices) and `Q` (ends in
/// `t`, at least `min_q` vertices). For each candidate `P` the longest `Q` in
/// the rest of the cycle is taken.
pub(crate) fn disjoint_arcs(
    cycle: &[VertexId],
    s: &VertexSet,
    t: &VertexSet,
    min_p: usize,
    min_q: usize,
) -> Option<(Vec<VertexId>, Vec<VertexId>)> {
    let len = cycle.len();
    let (min_p, min_q) = (min_p.max(1), min_q.max(1));
    if min_p + min_q > len {
        return None;
    }
    for start in positions_by_id(cycle) {
        if !s.contains(&cycle[start]) {
            continue;
        }
        for lp in min_p..=len - min_q {
            if !s.contains(&cycle[(start + lp - 1) % len]) {
                continue;
            }
            let rest = start + lp;
            let first = (0..len - lp).find(|&j| t.contains(&cycle[(rest + j) % len]));
            let last = (0..len - lp).rev().find(|&j| t.contains(&cycle[(rest + j) % len]));
            if let (Some(a), Some(b)) = (first, last) {
                if b - a + 1 >= min_q {
                    return Some((arc(cycle, start, lp), arc(cycle, rest + a, b - a + 1)));
                }
            }
        }
    }
    None
}

/// On a single cycle `c` with `|c| >= 6` and `p = floor(|c|/3)`: disjoint arcs
/// `P` with ends in `s` and `Q` with ends in `t`, each of at least `p + 1`
/// vertices.
///
/// Guaranteed to exist when `|S| >= p + 1` and `|T| >= 2p + 2`.
#[allow(non_snake_case)]
pub fn find_disjoint_ST_paths(
    c: &[VertexId],
    s: &VertexSet,
    t: &VertexSet,
) -> Result<Option<(Vec<VertexId>, Vec<VertexId>)>> {
    check_simple_cycle(c, 6)?;
    check_subset(c, [s, t])?;
    let p = c.len() / 3;
    Ok(disjoint_arcs(c, s, t, p + 1, p + 1))
}

/// For `k − 1 >= 5` cycles all of order `r >= 4` with `1 <= q_i < r/3`:
/// either a [`find_path_with_spare`] witness, or two disjoint arcs in one
/// cycle, `P` with ends in `s` and `Q` with ends in `t`, each of more than
/// `r/3` vertices (`second_path` holds `Q`).
///
/// Guaranteed to exist when `|S|, |T| > 2/3 (k−1) r − r/3`.
pub fn find_reroute_or_double(
    family: &CycleFamily,
    s: &VertexSet,
    t: &VertexSet,
) -> Result<Option<RerouteWitness>> {
    let cycles = family.cycles();
    if cycles.len() < 5 {
        return Err(Error::Precondition(format!(
            "need at least 5 cycles, got {}",
            cycles.len()
        )));
    }
    let r = cycles[0].len();
    if cycles.iter().any(|c| c.len() != r) {
        return Err(Error::Precondition("cycles of unequal order".into()));
    }
    if r < 4 {
        return Err(Error::Precondition(format!("cycle order {r} < 4")));
    }
    if let Some(q) = family.q().iter().find(|&&q| 3 * q >= r) {
        return Err(Error::Precondition(format!(
            "path length {q} is not below r/3 = {}",
            Rational::new(r as i64, 3)
        )));
    }
    family.check_members([s, t])?;
    if let Some(w) = path_with_spare(cycles, family.q(), s, t) {
        return Ok(Some(w));
    }
    // More than r/3 vertices.
    let min_len = r / 3 + 1;
    for (i, cycle) in cycles.iter().enumerate() {
        if let Some((p, q)) = disjoint_arcs(cycle, s, t, min_len, min_len) {
            return Ok(Some(RerouteWitness {
                cycle_index: i,
                path: p,
                spare: None,
                second_path: Some(q),
            }));
        }
    }
    Ok(None)
}

/// Largest arc length allowed by `|P| <= |c|/6 + 4`, i.e. `6|P| <= |c| + 24`.
pub fn crossing_path_bound(cycle_len: usize) -> usize {
    ((cycle_len + 24) / 6).min(cycle_len)
}

/// An arc with one end in `s` and the other in `t` and
/// `2 <= |P| <= |c|/6 + 4`, returned starting at its `s` end.
///
/// Guaranteed to exist when `|S|, |T| > |c|/3`.
pub fn find_short_crossing_path(
    c: &[VertexId],
    s: &VertexSet,
    t: &VertexSet,
) -> Result<Option<Vec<VertexId>>> {
    check_simple_cycle(c, 3)?;
    check_subset(c, [s, t])?;
    let len = c.len();
    let bound = crossing_path_bound(len);
    for start in positions_by_id(c) {
        for l in 2..=bound {
            let a = c[start];
            let b = c[(start + l - 1) % len];
            if s.contains(&a) && t.contains(&b) {
                return Ok(Some(arc(c, start, l)));
            }
            if t.contains(&a) && s.contains(&b) {
                let mut p = arc(c, start, l);
                p.reverse();
                return Ok(Some(p));
            }
        }
    }
    Ok(None)
}
