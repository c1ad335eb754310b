//! Local search over cycle collections.
//!
//! The engine keeps a spanning [`CycleCollection`] with cycles of order at
//! most `r`, writes `𝒰` for the cycles of order below `r`, and repeatedly
//! applies the first applicable move of a fixed catalog. Every move that does
//! not finish the search strictly increases the lexicographic potential, so
//! the loop terminates. The search finishes with a certificate once `k` cycles
//! of order at least `r` are available, or reports the collection as stuck.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::collection::{Cycle, CycleCollection, Potential};
use crate::error::{Error, Result};
use crate::graph::{intersect, Graph, Rational, VertexId};
use crate::lemmas::{arc, disjoint_arcs, path_with_spare};
use crate::minimal::{lift_packing, minimalize, MinimalizeResult};

pub const DEFAULT_MAX_ITERATIONS: usize = 1_000_000;

/// Search nodes spent looking for one long cycle inside `V(𝒰)`.
const LONG_CYCLE_BUDGET: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MoveKind {
    /// An edge `vw` of `C ∈ 𝒰` and a common neighbour `x` in a cycle of `𝒰`
    /// no longer than `C`: route `C` through `x`.
    AbsorbCommonNeighbor,
    /// Consecutive `u1, u3, u2` on `C ∈ 𝒰` and an edge `vw` of a shorter or
    /// equal `C'`: replace `u3` by `w, v` and drop `C'`.
    AbsorbTwoForOne,
    /// Two adjacent 1-cycles become a 2-cycle.
    MergeOneCycles,
    /// Borrow a vertex and a path from a full cycle for two cycles of `𝒰`.
    RerouteExtend,
    /// Borrow two disjoint paths from one full cycle, lifting two cycles of
    /// `𝒰` to order at least `r`.
    DoubleReroute,
    /// Splice all of `C2` into `C1` in place of an arc of `C1`.
    BridgeSwap,
    /// Join two cycles of `𝒰` through two 1-cycles.
    BigCycleMerge,
    /// A cycle of order at least `r` inside `V(𝒰)` when `k − 1` cycles are full.
    SuccessLongCycle,
}

impl MoveKind {
    /// Default order: structural moves first, lemma-based reroutes later.
    pub const CATALOG: [MoveKind; 8] = [
        MoveKind::MergeOneCycles,
        MoveKind::AbsorbCommonNeighbor,
        MoveKind::AbsorbTwoForOne,
        MoveKind::BridgeSwap,
        MoveKind::RerouteExtend,
        MoveKind::DoubleReroute,
        MoveKind::BigCycleMerge,
        MoveKind::SuccessLongCycle,
    ];
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackConfig {
    pub k: usize,
    pub r: usize,
    pub move_order: Vec<MoveKind>,
    pub max_iterations: usize,
}

impl PackConfig {
    pub fn new(k: usize, r: usize) -> Result<Self> {
        let cfg = PackConfig {
            k,
            r,
            move_order: MoveKind::CATALOG.to_vec(),
            max_iterations: DEFAULT_MAX_ITERATIONS,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        if self.r < 3 {
            return Err(Error::InvalidParameter(format!("r = {} < 3", self.r)));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidParameter("max_iterations must be positive".into()));
        }
        let distinct: BTreeSet<_> = self.move_order.iter().collect();
        if distinct.len() != MoveKind::CATALOG.len() || self.move_order.len() != distinct.len() {
            return Err(Error::InvalidParameter(
                "move_order must list every move kind exactly once".into(),
            ));
        }
        Ok(())
    }
}

/// Replace `removed` by `added`. Vertices of removed cycles that no added
/// cycle covers return as 1-cycles. For a success move `added` holds the new
/// cycles of order at least `r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Move {
    pub kind: MoveKind,
    pub removed: Vec<Cycle>,
    pub added: Vec<Cycle>,
    pub success: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AppliedMove {
    Improved(CycleCollection),
    /// The full cycles left untouched plus the new ones.
    Success(Vec<Cycle>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub kind: MoveKind,
    pub removed: Vec<Cycle>,
    pub added: Vec<Cycle>,
    /// `None` for the final success move.
    pub potential_after: Option<Potential>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackingCertificate {
    pub k: usize,
    pub r: usize,
    pub cycles: Vec<Vec<VertexId>>,
}

impl PackingCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidCycles(format!("bad certificate: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StuckDiagnostics {
    pub reason: String,
    pub potential: Potential,
    pub full_cycles: usize,
    /// `k >= 6` and `d(G) >= 4kr/3`.
    pub hypotheses_hold: bool,
    /// Structural improvements that a stuck collection should not admit. Any
    /// entry points at a detector bug.
    pub claim_witnesses: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PackOutcome {
    Success(PackingCertificate),
    Stuck(StuckDiagnostics),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PackResult {
    pub outcome: PackOutcome,
    pub trace: Vec<TraceEntry>,
    pub iterations: usize,
}

impl PackResult {
    pub fn certificate(&self) -> Option<&PackingCertificate> {
        match &self.outcome {
            PackOutcome::Success(c) => Some(c),
            PackOutcome::Stuck(_) => None,
        }
    }

    pub fn is_success(&self) -> bool {
        self.certificate().is_some()
    }

    /// Whether the recorded potentials strictly increase.
    pub fn trace_is_monotone(&self) -> bool {
        let ps: Vec<&Potential> = self.trace.iter().filter_map(|t| t.potential_after.as_ref()).collect();
        ps.windows(2).all(|w| w[0] < w[1])
    }

    pub fn trace_json(&self) -> String {
        serde_json::to_string(&self.trace).expect("trace serializes")
    }
}

/// `arc(c, i + 1, |c|)` followed by `path`: the cycle with `path` inserted
/// between `c[i]` and `c[i + 1]`.
fn splice(c: &Cycle, i: usize, path: &[VertexId]) -> Vec<VertexId> {
    let mut out = arc(c.vertices(), i + 1, c.len());
    out.extend_from_slice(path);
    out
}

/// Positions `i` naming the edge `c[i] c[i+1]`, or the single vertex.
fn anchors(c: &Cycle) -> std::ops::Range<usize> {
    if c.len() <= 2 {
        0..1
    } else {
        0..c.len()
    }
}

fn new_cycle(vertices: Vec<VertexId>) -> Result<Cycle> {
    Cycle::new(vertices).map_err(|e| Error::InvalidMove(e.to_string()))
}

struct Ctx<'a> {
    g: &'a Graph,
    k: usize,
    r: usize,
    full: Vec<&'a Cycle>,
    full_vertices: BTreeSet<VertexId>,
    /// `𝒰`, longest first.
    under: Vec<&'a Cycle>,
    ones: BTreeSet<VertexId>,
    owner: BTreeMap<VertexId, &'a Cycle>,
}

impl<'a> Ctx<'a> {
    fn new(g: &'a Graph, c: &'a CycleCollection, k: usize) -> Self {
        let r = c.r();
        let full: Vec<&Cycle> = c.bucket(r).iter().collect();
        let full_vertices = full.iter().flat_map(|c| c.vertices().iter().copied()).collect();
        let mut under: Vec<&Cycle> = (1..r).rev().flat_map(|o| c.bucket(o).iter()).collect();
        under.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        let ones = c.bucket(1).iter().map(|c| c.vertices()[0]).collect();
        Ctx {
            g,
            k,
            r,
            full,
            full_vertices,
            under,
            ones,
            owner: c.owners(),
        }
    }

    fn boundary(&self) -> bool {
        self.full.len() + 1 == self.k
    }

    /// `W(vw)` for the edge at anchor `i`, or `W(v)` for a 1-cycle.
    fn w_set(&self, c: &Cycle, i: usize) -> BTreeSet<VertexId> {
        let vs = c.vertices();
        let g = self.g;
        let base = if vs.len() == 1 {
            g.neighbors(vs[0]).to_vec()
        } else {
            intersect(g.neighbors(vs[i]), g.neighbors(vs[(i + 1) % vs.len()]))
        };
        base.into_iter().filter(|v| self.full_vertices.contains(v)).collect()
    }

    fn find(&self, kind: MoveKind) -> Result<Option<Move>> {
        match kind {
            MoveKind::MergeOneCycles => self.merge_ones(),
            MoveKind::AbsorbCommonNeighbor => self.absorb_common_neighbor(),
            MoveKind::AbsorbTwoForOne => self.absorb_two_for_one(),
            MoveKind::BridgeSwap => self.bridge_swap(),
            MoveKind::RerouteExtend => self.reroute_extend(),
            MoveKind::DoubleReroute => self.double_reroute(),
            MoveKind::BigCycleMerge => self.big_cycle_merge(),
            MoveKind::SuccessLongCycle => self.long_cycle(),
        }
    }

    fn merge_ones(&self) -> Result<Option<Move>> {
        for &x in &self.ones {
            if let Some(&y) = self.g.neighbors(x).iter().find(|&&y| y > x && self.ones.contains(&y)) {
                return Ok(Some(Move {
                    kind: MoveKind::MergeOneCycles,
                    removed: vec![new_cycle(vec![x])?, new_cycle(vec![y])?],
                    added: vec![new_cycle(vec![x, y])?],
                    success: false,
                }));
            }
        }
        Ok(None)
    }

    /// `d` without `x`, kept as a cycle when the neighbours of `x` on `d` are
    /// adjacent.
    fn shrink(&self, d: &Cycle, x: VertexId) -> Result<Option<Cycle>> {
        let len = d.len();
        if len < 3 {
            return Ok(None);
        }
        let vs = d.vertices();
        let p = vs.iter().position(|&v| v == x).expect("x on d");
        let prev = vs[(p + len - 1) % len];
        let next = vs[(p + 1) % len];
        if len == 3 || self.g.has_edge(prev, next) {
            Ok(Some(new_cycle(arc(vs, p + 1, len - 1))?))
        } else {
            Ok(None)
        }
    }

    fn absorb_common_neighbor(&self) -> Result<Option<Move>> {
        for &c in &self.under {
            if c.len() < 2 {
                continue;
            }
            for i in anchors(c) {
                let (v, w) = (c.vertices()[i], c.vertices()[(i + 1) % c.len()]);
                for x in intersect(self.g.neighbors(v), self.g.neighbors(w)) {
                    let d = self.owner[&x];
                    if d == c || d.len() >= self.r || d.len() > c.len() {
                        continue;
                    }
                    let mut added = vec![new_cycle(splice(c, i, &[x]))?];
                    added.extend(self.shrink(d, x)?);
                    return Ok(Some(Move {
                        kind: MoveKind::AbsorbCommonNeighbor,
                        removed: vec![c.clone(), d.clone()],
                        added,
                        success: false,
                    }));
                }
            }
        }
        Ok(None)
    }

    fn absorb_two_for_one(&self) -> Result<Option<Move>> {
        let g = self.g;
        for &c in &self.under {
            let len = c.len();
            if len < 3 {
                continue;
            }
            let vs = c.vertices();
            for j in 0..len {
                let (u1, u2) = (vs[j], vs[(j + 2) % len]);
                let rest = arc(vs, j + 2, len - 1);
                for &other in &self.under {
                    if other == c || other.len() < 2 || other.len() > len {
                        continue;
                    }
                    for i in anchors(other) {
                        let ov = other.vertices();
                        let (v, w) = (ov[i], ov[(i + 1) % ov.len()]);
                        let tail = if g.has_edge(u1, w) && g.has_edge(v, u2) {
                            [w, v]
                        } else if g.has_edge(u1, v) && g.has_edge(w, u2) {
                            [v, w]
                        } else {
                            continue;
                        };
                        let mut seq = rest.clone();
                        seq.extend_from_slice(&tail);
                        return Ok(Some(Move {
                            kind: MoveKind::AbsorbTwoForOne,
                            removed: vec![c.clone(), other.clone()],
                            added: vec![new_cycle(seq)?],
                            success: false,
                        }));
                    }
                }
            }
        }
        Ok(None)
    }

    /// Improvement when the new order fits and beats both sources, success
    /// when it reaches past `r` with `k − 1` full cycles.
    fn classify(&self, order: usize, beaten: usize) -> Option<bool> {
        if order > self.r {
            self.boundary().then_some(true)
        } else {
            (order > beaten).then_some(false)
        }
    }

    fn bridge_swap(&self) -> Result<Option<Move>> {
        let g = self.g;
        for &c1 in &self.under {
            if c1.len() < 2 {
                continue;
            }
            let (v1, len1) = (c1.vertices(), c1.len());
            for &c2 in &self.under {
                if c2 == c1 || c2.len() < 2 {
                    continue;
                }
                let len2 = c2.len();
                for i in anchors(c2) {
                    let forward = arc(c2.vertices(), i + 1, len2);
                    let mut backward = forward.clone();
                    backward.reverse();
                    for q in [backward, forward] {
                        let (v, w) = (q[0], q[len2 - 1]);
                        for a_pos in 0..len1 {
                            if !g.has_edge(v1[a_pos], v) {
                                continue;
                            }
                            for l in 2..=len1 {
                                let b_pos = (a_pos + l - 1) % len1;
                                if !g.has_edge(w, v1[b_pos]) {
                                    continue;
                                }
                                let order = len2 + len1 - l + 2;
                                let Some(success) = self.classify(order, len1.max(len2)) else {
                                    continue;
                                };
                                let mut seq = q.clone();
                                seq.extend(arc(v1, b_pos, len1 - l + 2));
                                return Ok(Some(Move {
                                    kind: MoveKind::BridgeSwap,
                                    removed: vec![c1.clone(), c2.clone()],
                                    added: vec![new_cycle(seq)?],
                                    success,
                                }));
                            }
                        }
                    }
                }
            }
        }
        Ok(None)
    }

    fn full_family(&self) -> Vec<Vec<VertexId>> {
        self.full.iter().map(|c| c.vertices().to_vec()).collect()
    }

    fn reroute_extend(&self) -> Result<Option<Move>> {
        if self.full.is_empty() {
            return Ok(None);
        }
        let family = self.full_family();
        for &c1 in &self.under {
            for &c2 in &self.under {
                if c2 == c1 || c2.len() > c1.len() {
                    continue;
                }
                let q = vec![self.r - c2.len(); family.len()];
                for i in anchors(c1) {
                    let t = self.w_set(c1, i);
                    if t.is_empty() {
                        continue;
                    }
                    for j in anchors(c2) {
                        let s = self.w_set(c2, j);
                        if s.is_empty() {
                            continue;
                        }
                        let Some(wit) = path_with_spare(&family, &q, &s, &t) else {
                            continue;
                        };
                        let u = wit.spare.expect("spare vertex");
                        return Ok(Some(Move {
                            kind: MoveKind::RerouteExtend,
                            removed: vec![c1.clone(), c2.clone(), self.full[wit.cycle_index].clone()],
                            added: vec![new_cycle(splice(c1, i, &[u]))?, new_cycle(splice(c2, j, &wit.path))?],
                            success: false,
                        }));
                    }
                }
            }
        }
        Ok(None)
    }

    fn double_reroute(&self) -> Result<Option<Move>> {
        if !self.boundary() || self.full.is_empty() {
            return Ok(None);
        }
        for &c1 in &self.under {
            for &c2 in &self.under {
                if c2 == c1 {
                    continue;
                }
                for i in anchors(c1) {
                    let t = self.w_set(c1, i);
                    if t.is_empty() {
                        continue;
                    }
                    for j in anchors(c2) {
                        let s = self.w_set(c2, j);
                        if s.is_empty() {
                            continue;
                        }
                        for (fi, f) in self.full.iter().enumerate() {
                            let Some((p, q)) =
                                disjoint_arcs(f.vertices(), &s, &t, self.r - c2.len(), self.r - c1.len())
                            else {
                                continue;
                            };
                            return Ok(Some(Move {
                                kind: MoveKind::DoubleReroute,
                                removed: vec![c1.clone(), c2.clone(), self.full[fi].clone()],
                                added: vec![new_cycle(splice(c1, i, &q))?, new_cycle(splice(c2, j, &p))?],
                                success: true,
                            }));
                        }
                    }
                }
            }
        }
        Ok(None)
    }

    /// 1-cycles `x != x'` with `x ~ v, a` and `x' ~ w, b`.
    fn connector_pair(&self, v: VertexId, a: VertexId, w: VertexId, b: VertexId) -> Option<(VertexId, VertexId)> {
        let g = self.g;
        let xs: Vec<VertexId> = self.ones.iter().copied().filter(|&x| g.has_edge(x, v) && g.has_edge(x, a)).collect();
        if xs.is_empty() {
            return None;
        }
        for &x2 in &self.ones {
            if g.has_edge(x2, w) && g.has_edge(x2, b) {
                if let Some(&x) = xs.iter().find(|&&x| x != x2) {
                    return Some((x, x2));
                }
            }
        }
        None
    }

    fn big_cycle_merge(&self) -> Result<Option<Move>> {
        if self.ones.len() < 2 {
            return Ok(None);
        }
        for &c0 in &self.under {
            if c0.len() < 2 {
                continue;
            }
            let (v0, len0) = (c0.vertices(), c0.len());
            for &c1 in &self.under {
                if c1 == c0 || c1.len() < 2 {
                    continue;
                }
                let (v1, len1) = (c1.vertices(), c1.len());
                for p in 0..len0 {
                    for l in 2..=len0 {
                        let w_pos = (p + l - 1) % len0;
                        let (v, w) = (v0[p], v0[w_pos]);
                        for pa in 0..len1 {
                            for pb in 0..len1 {
                                if pa == pb {
                                    continue;
                                }
                                let d = (pb + len1 - pa) % len1;
                                let clockwise = arc(v1, pa, d + 1);
                                let mut counter = arc(v1, pb, len1 - d + 1);
                                counter.reverse();
                                let (long, short) = if clockwise.len() >= counter.len() {
                                    (clockwise, counter)
                                } else {
                                    (counter, clockwise)
                                };
                                for q in [long, short] {
                                    let order = len0 - l + 2 + 2 + q.len();
                                    let Some(success) = self.classify(order, len0.max(len1)) else {
                                        continue;
                                    };
                                    let Some((x, x2)) = self.connector_pair(v, v1[pa], w, v1[pb]) else {
                                        continue;
                                    };
                                    let mut seq = arc(v0, w_pos, len0 - l + 2);
                                    seq.push(x);
                                    seq.extend_from_slice(&q);
                                    seq.push(x2);
                                    return Ok(Some(Move {
                                        kind: MoveKind::BigCycleMerge,
                                        removed: vec![c0.clone(), c1.clone(), new_cycle(vec![x])?, new_cycle(vec![x2])?],
                                        added: vec![new_cycle(seq)?],
                                        success,
                                    }));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(None)
    }

    fn long_cycle(&self) -> Result<Option<Move>> {
        if !self.boundary() {
            return Ok(None);
        }
        let allowed: BTreeSet<VertexId> = self.under.iter().flat_map(|c| c.vertices().iter().copied()).collect();
        let Some(cycle) = find_long_cycle(self.g, &allowed, self.r, LONG_CYCLE_BUDGET) else {
            return Ok(None);
        };
        let removed: BTreeSet<&Cycle> = cycle.iter().map(|v| self.owner[v]).collect();
        Ok(Some(Move {
            kind: MoveKind::SuccessLongCycle,
            removed: removed.into_iter().cloned().collect(),
            added: vec![new_cycle(cycle)?],
            success: true,
        }))
    }
}

/// Depth-first search for a cycle of order at least `r` within `allowed`,
/// giving up after `budget` extensions.
fn find_long_cycle(g: &Graph, allowed: &BTreeSet<VertexId>, r: usize, budget: usize) -> Option<Vec<VertexId>> {
    fn extend(
        g: &Graph,
        allowed: &BTreeSet<VertexId>,
        r: usize,
        path: &mut Vec<VertexId>,
        on_path: &mut BTreeSet<VertexId>,
        nodes: &mut usize,
    ) -> Option<bool> {
        let start = path[0];
        let last = *path.last().unwrap();
        if path.len() >= r && g.has_edge(last, start) {
            return Some(true);
        }
        for &u in g.neighbors(last) {
            if u <= start || on_path.contains(&u) || !allowed.contains(&u) {
                continue;
            }
            *nodes = nodes.checked_sub(1)?;
            path.push(u);
            on_path.insert(u);
            if extend(g, allowed, r, path, on_path, nodes)? {
                return Some(true);
            }
            path.pop();
            on_path.remove(&u);
        }
        Some(false)
    }

    let mut nodes = budget;
    for &s in allowed {
        let mut path = vec![s];
        let mut on_path = BTreeSet::from([s]);
        match extend(g, allowed, r, &mut path, &mut on_path, &mut nodes) {
            Some(true) => return Some(path),
            Some(false) => {}
            None => return None,
        }
    }
    None
}

fn check_collection(g: &Graph, c: &CycleCollection) -> Result<()> {
    let report = c.validate(g, true);
    if report.is_valid() {
        Ok(())
    } else {
        Err(Error::InvalidCollection(format!("{report:?}")))
    }
}

fn first_move(g: &Graph, c: &CycleCollection, cfg: &PackConfig) -> Result<Option<Move>> {
    let ctx = Ctx::new(g, c, cfg.k);
    for &kind in &cfg.move_order {
        if let Some(m) = ctx.find(kind)? {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

/// The first applicable move in `cfg.move_order`, or `None` when the
/// collection admits none.
pub fn find_move(g: &Graph, c: &CycleCollection, cfg: &PackConfig) -> Result<Option<Move>> {
    cfg.validate()?;
    if c.r() != cfg.r {
        return Err(Error::InvalidCollection(format!(
            "collection cap {} differs from r = {}",
            c.r(),
            cfg.r
        )));
    }
    check_collection(g, c)?;
    first_move(g, c, cfg)
}

pub fn apply_move(c: &CycleCollection, m: &Move) -> Result<AppliedMove> {
    for cycle in &m.removed {
        if !c.contains(cycle) {
            return Err(Error::InvalidMove(format!("cycle {:?} is not in the collection", cycle.vertices())));
        }
    }
    if m.success {
        let mut cycles: Vec<Cycle> = c.bucket(c.r()).iter().filter(|f| !m.removed.contains(f)).cloned().collect();
        cycles.extend(m.added.iter().filter(|a| a.len() >= c.r()).cloned());
        return Ok(AppliedMove::Success(cycles));
    }
    let mut next = c.clone();
    for cycle in &m.removed {
        next.remove(cycle);
    }
    let covered: BTreeSet<VertexId> = m.added.iter().flat_map(|a| a.vertices().iter().copied()).collect();
    for cycle in &m.added {
        next.insert(cycle.clone())?;
    }
    for cycle in &m.removed {
        for &v in cycle.vertices() {
            if !covered.contains(&v) {
                next.insert(new_cycle(vec![v])?)?;
            }
        }
    }
    if next.potential() <= c.potential() {
        return Err(Error::InvalidMove(format!(
            "{} does not raise the potential {:?}",
            m.kind,
            c.potential().0
        )));
    }
    Ok(AppliedMove::Improved(next))
}

fn hypotheses_hold(g: &Graph, k: usize, r: usize) -> bool {
    let d = Rational::new(2 * g.m() as i64, g.n() as i64);
    k >= 6 && d >= Rational::new(4 * (k * r) as i64, 3)
}

/// Witnesses of simple improvements, found without the move detectors.
fn claim_witnesses(g: &Graph, c: &CycleCollection) -> Vec<String> {
    let r = c.r();
    let under: Vec<&Cycle> = c.cycles().filter(|x| x.len() < r).collect();
    let mut owner: BTreeMap<VertexId, &Cycle> = BTreeMap::new();
    for &cy in &under {
        for &v in cy.vertices() {
            owner.insert(v, cy);
        }
    }
    let mut out = Vec::new();
    for &cy in &under {
        for (v, w) in cy.edges() {
            for x in g.vertices() {
                if !(g.has_edge(v, x) && g.has_edge(w, x)) {
                    continue;
                }
                if let Some(&d) = owner.get(&x) {
                    if d != cy && d.len() <= cy.len() {
                        out.push(format!(
                            "edge {v}-{w} of {:?} has common neighbour {x} in {:?}",
                            cy.vertices(),
                            d.vertices()
                        ));
                    }
                }
            }
            for &other in &under {
                if other == cy || other.len() < cy.len() {
                    continue;
                }
                let common = other
                    .vertices()
                    .iter()
                    .filter(|&&u| g.has_edge(u, v) && g.has_edge(u, w))
                    .count();
                if 3 * common > other.len() {
                    out.push(format!(
                        "edge {v}-{w} of {:?} has {common} common neighbours on {:?}",
                        cy.vertices(),
                        other.vertices()
                    ));
                }
            }
        }
    }
    let singles: Vec<VertexId> = c.bucket(1).iter().map(|x| x.vertices()[0]).collect();
    for (i, &x) in singles.iter().enumerate() {
        for &y in &singles[i + 1..] {
            if g.has_edge(x, y) {
                out.push(format!("1-cycles {x} and {y} are adjacent"));
            }
        }
    }
    out
}

fn certificate(cfg: &PackConfig, cycles: Vec<Cycle>) -> PackingCertificate {
    PackingCertificate {
        k: cfg.k,
        r: cfg.r,
        cycles: cycles.into_iter().map(Cycle::into_vertices).collect(),
    }
}

pub fn pack(g: &Graph, cfg: &PackConfig) -> Result<PackResult> {
    cfg.validate()?;
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let mut c = CycleCollection::seed(g, cfg.r)?;
    let mut trace = Vec::new();
    let mut iterations = 0;
    loop {
        if c.bucket(cfg.r).len() >= cfg.k {
            let cert = certificate(cfg, c.bucket(cfg.r).iter().cloned().collect());
            return Ok(PackResult {
                outcome: PackOutcome::Success(cert),
                trace,
                iterations,
            });
        }
        if iterations >= cfg.max_iterations {
            return Ok(stuck(g, cfg, &c, "iteration cap", trace, iterations));
        }
        let Some(m) = first_move(g, &c, cfg)? else {
            return Ok(stuck(g, cfg, &c, "no move applies", trace, iterations));
        };
        iterations += 1;
        match apply_move(&c, &m)? {
            AppliedMove::Success(cycles) => {
                trace.push(TraceEntry {
                    kind: m.kind,
                    removed: m.removed,
                    added: m.added,
                    potential_after: None,
                });
                return Ok(PackResult {
                    outcome: PackOutcome::Success(certificate(cfg, cycles)),
                    trace,
                    iterations,
                });
            }
            AppliedMove::Improved(next) => {
                if cfg!(debug_assertions) {
                    check_collection(g, &next)?;
                }
                trace.push(TraceEntry {
                    kind: m.kind,
                    removed: m.removed,
                    added: m.added,
                    potential_after: Some(next.potential()),
                });
                c = next;
            }
        }
    }
}

fn stuck(
    g: &Graph,
    cfg: &PackConfig,
    c: &CycleCollection,
    reason: &str,
    trace: Vec<TraceEntry>,
    iterations: usize,
) -> PackResult {
    PackResult {
        outcome: PackOutcome::Stuck(StuckDiagnostics {
            reason: reason.to_string(),
            potential: c.potential(),
            full_cycles: c.bucket(cfg.r).len(),
            hypotheses_hold: hypotheses_hold(g, cfg.k, cfg.r),
            claim_witnesses: claim_witnesses(g, c),
        }),
        trace,
        iterations,
    }
}

/// Packs a minimal minor of `g` and lifts a successful certificate back to
/// `g`. The returned trace refers to minor vertices.
pub fn pack_with_minimalization(g: &Graph, cfg: &PackConfig) -> Result<(MinimalizeResult, PackResult)> {
    cfg.validate()?;
    let min = minimalize(g)?;
    let mut result = pack(&min.minor, cfg)?;
    if let PackOutcome::Success(cert) = &result.outcome {
        let cycles = lift_packing(g, &min.history, &cert.cycles)?;
        let lifted = PackingCertificate {
            k: cert.k,
            r: cert.r,
            cycles,
        };
        if !verify_certificate(g, &lifted) {
            return Err(Error::InvalidCycles("lifted certificate does not verify".into()));
        }
        result.outcome = PackOutcome::Success(lifted);
    }
    Ok((min, result))
}

/// At least `k` pairwise disjoint cycles of `g`, each of order at least
/// `max(r, 3)`.
pub fn verify_certificate(g: &Graph, cert: &PackingCertificate) -> bool {
    if cert.cycles.len() < cert.k {
        return false;
    }
    let mut used = BTreeSet::new();
    for cycle in &cert.cycles {
        let n = cycle.len();
        if n < cert.r.max(3) {
            return false;
        }
        for (i, &v) in cycle.iter().enumerate() {
            if !used.insert(v) || !g.has_edge(v, cycle[(i + 1) % n]) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_complete, gen_complete_bipartite, gen_cycle, gen_petersen};

    fn cyc(v: &[VertexId]) -> Cycle {
        Cycle::new(v.to_vec()).unwrap()
    }

    fn collection(r: usize, cycles: &[&[VertexId]]) -> CycleCollection {
        let mut c = CycleCollection::new(r).unwrap();
        for cy in cycles {
            c.insert(cyc(cy)).unwrap();
        }
        c
    }

    #[test]
    fn merge_two_singletons() {
        let g = Graph::from_edges([(0, 1)]).unwrap();
        let cfg = PackConfig::new(1, 3).unwrap();
        let c = CycleCollection::seed(&g, 3).unwrap();
        let m = find_move(&g, &c, &cfg).unwrap().unwrap();
        assert_eq!(m.kind, MoveKind::MergeOneCycles);
        assert_eq!(m.added, vec![cyc(&[0, 1])]);
        let AppliedMove::Improved(next) = apply_move(&c, &m).unwrap() else {
            panic!("expected improvement");
        };
        assert_eq!(next.potential(), Potential(vec![0, 1, 0]));
    }

    #[test]
    fn triangle_absorbs_common_neighbour() {
        // Triangle 0,1,2 plus vertex 3 adjacent to 0 and 1.
        let g = Graph::from_edges([(0, 1), (1, 2), (0, 2), (0, 3), (1, 3)]).unwrap();
        let c = collection(4, &[&[0, 1, 2], &[3]]);
        let cfg = PackConfig::new(2, 4).unwrap();
        let m = find_move(&g, &c, &cfg).unwrap().unwrap();
        assert_eq!(m.kind, MoveKind::AbsorbCommonNeighbor);
        let AppliedMove::Improved(next) = apply_move(&c, &m).unwrap() else {
            panic!("expected improvement");
        };
        assert_eq!(next.bucket(4).len(), 1);
        assert!(next.validate(&g, true).is_valid());
    }

    #[test]
    fn apply_rejects_foreign_cycles() {
        let c = collection(3, &[&[0], &[1]]);
        let m = Move {
            kind: MoveKind::MergeOneCycles,
            removed: vec![cyc(&[5]), cyc(&[1])],
            added: vec![cyc(&[1, 5])],
            success: false,
        };
        assert!(matches!(apply_move(&c, &m), Err(Error::InvalidMove(_))));
    }

    #[test]
    fn apply_rejects_non_improving_move() {
        let c = collection(3, &[&[0, 1], &[2]]);
        let m = Move {
            kind: MoveKind::MergeOneCycles,
            removed: vec![cyc(&[0, 1])],
            added: vec![cyc(&[0]), cyc(&[1])],
            success: false,
        };
        assert!(apply_move(&c, &m).is_err());
    }

    #[test]
    fn k9_packs_three_triangles() {
        let g = gen_complete(9).unwrap();
        let res = pack(&g, &PackConfig::new(3, 3).unwrap()).unwrap();
        let cert = res.certificate().expect("success");
        assert!(verify_certificate(&g, cert));
        assert!(cert.cycles.len() >= 3);
        assert!(res.trace_is_monotone());
    }

    #[test]
    fn k63_is_stuck_without_claim_witnesses() {
        let g = gen_complete_bipartite(6, 3).unwrap();
        let res = pack(&g, &PackConfig::new(2, 3).unwrap()).unwrap();
        let PackOutcome::Stuck(d) = &res.outcome else {
            panic!("K_6,3 has no two disjoint cycles");
        };
        assert_eq!(d.reason, "no move applies");
        assert!(d.claim_witnesses.is_empty(), "{:?}", d.claim_witnesses);
        assert!(!d.hypotheses_hold);
    }

    #[test]
    fn single_long_cycle() {
        let g = gen_cycle(7).unwrap();
        let res = pack(&g, &PackConfig::new(1, 5).unwrap()).unwrap();
        let cert = res.certificate().expect("C7 holds a cycle of order 7");
        assert!(verify_certificate(&g, cert));
        assert_eq!(cert.cycles[0].len(), 7);
    }

    #[test]
    fn petersen_two_pentagons() {
        let g = gen_petersen();
        let res = pack(&g, &PackConfig::new(2, 5).unwrap()).unwrap();
        if let Some(cert) = res.certificate() {
            assert!(verify_certificate(&g, cert));
        }
        assert!(res.trace_is_monotone());
    }

    #[test]
    fn verifier_examples() {
        let g = gen_complete(9).unwrap();
        let good = PackingCertificate {
            k: 3,
            r: 3,
            cycles: vec![vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 8]],
        };
        assert!(verify_certificate(&g, &good));
        let shared = PackingCertificate {
            cycles: vec![vec![0, 1, 2], vec![2, 4, 5], vec![6, 7, 8]],
            ..good.clone()
        };
        assert!(!verify_certificate(&g, &shared));
        let c6 = gen_cycle(6).unwrap();
        let missing = PackingCertificate {
            k: 1,
            r: 3,
            cycles: vec![vec![0, 1, 3]],
        };
        assert!(!verify_certificate(&c6, &missing));
        let too_few = PackingCertificate { k: 4, ..good.clone() };
        assert!(!verify_certificate(&g, &too_few));
        assert_eq!(PackingCertificate::from_json(&good.to_json()).unwrap(), good);
    }

    #[test]
    fn config_validation() {
        assert!(PackConfig::new(0, 3).is_err());
        assert!(PackConfig::new(2, 2).is_err());
        let mut cfg = PackConfig::new(2, 3).unwrap();
        cfg.move_order.pop();
        assert!(cfg.validate().is_err());
        assert!(pack(&Graph::new(), &PackConfig::new(1, 3).unwrap()).is_err());
    }

    #[test]
    fn find_move_rejects_non_spanning() {
        let g = gen_complete(4).unwrap();
        let c = collection(3, &[&[0], &[1]]);
        assert!(find_move(&g, &c, &PackConfig::new(1, 3).unwrap()).is_err());
    }

    #[test]
    fn minimalized_pack_lifts() {
        let mut g = gen_complete(9).unwrap();
        g.add_edge(8, 9).unwrap();
        g.add_edge(9, 10).unwrap();
        let (min, res) = pack_with_minimalization(&g, &PackConfig::new(3, 3).unwrap()).unwrap();
        assert!(min.minor.n() <= g.n());
        assert!(verify_certificate(&g, res.certificate().unwrap()));
    }
}
