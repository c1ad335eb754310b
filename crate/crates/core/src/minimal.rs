//! Reduction to a minimal minor and lifting of cycles back to the input graph.
//!
//! A graph is minimal when every single vertex deletion or edge contraction
//! strictly lowers its average degree `d`. Deleting `v` keeps `d` from
//! dropping iff `deg(v) <= d/2`; contracting `uv` keeps it iff `u` and `v`
//! have at most `d/2 - 1` common neighbours. So a minimal graph with an edge
//! has `δ > d/2` and `τ > d/2 - 1`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{count_common, Graph, Rational, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HistoryStep {
    Delete(VertexId),
    /// `Contract(survivor, absorbed)`; the survivor is always the smaller id.
    Contract(VertexId, VertexId),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ContractionHistory {
    pub steps: Vec<HistoryStep>,
    /// Minor vertex → sorted original vertices merged into it.
    pub branch_sets: BTreeMap<VertexId, Vec<VertexId>>,
}

#[derive(Debug, Clone)]
pub struct MinimalizeResult {
    pub minor: Graph,
    pub history: ContractionHistory,
    pub original_d: Rational,
    pub final_d: Rational,
}

impl ContractionHistory {
    /// History with no steps: every vertex is its own branch set.
    pub fn identity(g: &Graph) -> Self {
        ContractionHistory {
            steps: Vec::new(),
            branch_sets: g.vertices().map(|v| (v, vec![v])).collect(),
        }
    }

    fn record(&mut self, step: HistoryStep) {
        match step {
            HistoryStep::Delete(v) => {
                self.branch_sets.remove(&v);
            }
            HistoryStep::Contract(keep, gone) => {
                let absorbed = self.branch_sets.remove(&gone).unwrap_or_default();
                let set = self.branch_sets.entry(keep).or_default();
                set.extend(absorbed);
                set.sort_unstable();
            }
        }
        self.steps.push(step);
    }

    /// Applies the recorded steps to `g`.
    pub fn replay(&self, g: &Graph) -> Result<Graph> {
        let mut minor = g.clone();
        for step in &self.steps {
            match *step {
                HistoryStep::Delete(v) => minor.delete_vertex_in_place(v)?,
                HistoryStep::Contract(u, v) => {
                    minor.contract_edge_in_place(u, v)?;
                }
            }
        }
        Ok(minor)
    }

    /// Checks the branch sets against `original`: disjoint, nonempty, inside
    /// `V(original)` and each inducing a connected subgraph.
    pub fn check_branch_sets(&self, original: &Graph) -> std::result::Result<(), String> {
        let mut seen = BTreeSet::new();
        for (&m, set) in &self.branch_sets {
            if set.is_empty() {
                return Err(format!("branch set of {m} is empty"));
            }
            for &v in set {
                if !original.contains(v) {
                    return Err(format!("branch set of {m} contains unknown vertex {v}"));
                }
                if !seen.insert(v) {
                    return Err(format!("vertex {v} lies in two branch sets"));
                }
            }
            let members: BTreeSet<VertexId> = set.iter().copied().collect();
            if !connected(original, &members) {
                return Err(format!("branch set of {m} is not connected"));
            }
        }
        Ok(())
    }

    /// Line format: `D v` and `C u v` steps in order, then
    /// `B m: v1 v2 ...` branch-set lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for step in &self.steps {
            let _ = match step {
                HistoryStep::Delete(v) => writeln!(out, "D {v}"),
                HistoryStep::Contract(u, v) => writeln!(out, "C {u} {v}"),
            };
        }
        for (m, set) in &self.branch_sets {
            let _ = write!(out, "B {m}:");
            for v in set {
                let _ = write!(out, " {v}");
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut h = ContractionHistory::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse { line: idx + 1, msg };
            let id = |tok: &str| {
                tok.parse::<VertexId>()
                    .map_err(|_| err(format!("invalid vertex id {tok:?}")))
            };
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks.as_slice() {
                ["D", v] => h.steps.push(HistoryStep::Delete(id(v)?)),
                ["C", u, v] => h.steps.push(HistoryStep::Contract(id(u)?, id(v)?)),
                ["B", head, rest @ ..] => {
                    let m = head
                        .strip_suffix(':')
                        .ok_or_else(|| err("branch set id must end with ':'".into()))?;
                    let set = rest.iter().map(|t| id(t)).collect::<Result<Vec<_>>>()?;
                    if h.branch_sets.insert(id(m)?, set).is_some() {
                        return Err(err(format!("duplicate branch set {m}")));
                    }
                }
                _ => return Err(err(format!("unrecognised record {line:?}"))),
            }
        }
        Ok(h)
    }
}

fn connected(g: &Graph, members: &BTreeSet<VertexId>) -> bool {
    let Some(&start) = members.iter().next() else {
        return true;
    };
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbors(v) {
            if members.contains(&w) && seen.insert(w) {
                queue.push_back(w);
            }
        }
    }
    seen.len() == members.len()
}

/// Shortest `from`–`to` path inside `members`, visiting neighbours in id order.
fn bfs_path(
    g: &Graph,
    members: &BTreeSet<VertexId>,
    from: VertexId,
    to: VertexId,
) -> Option<Vec<VertexId>> {
    let mut parent = BTreeMap::from([(from, from)]);
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        if v == to {
            let mut path = vec![to];
            let mut cur = to;
            while cur != from {
                cur = parent[&cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for &w in g.neighbors(v) {
            if members.contains(&w) && !parent.contains_key(&w) {
                parent.insert(w, v);
                queue.push_back(w);
            }
        }
    }
    None
}

/// Repeatedly deletes a vertex of degree `<= d/2`, or failing that contracts
/// an edge with `<= d/2 - 1` common neighbours, recomputing `d` after every
/// step. Deletions win over contractions; the lowest-degree vertex (then
/// lowest id) is deleted first, and the edge with fewest common neighbours
/// (then lexicographically least) is contracted first.
///
/// At least one vertex is always kept, so an edgeless input ends at `K_1`.
pub fn minimalize(g: &Graph) -> Result<MinimalizeResult> {
    let original_d = g.stats()?.avg_degree;
    let mut minor = g.clone();
    let mut history = ContractionHistory::identity(g);
    loop {
        let n = minor.n();
        let m = minor.m();
        if n <= 1 {
            break;
        }
        // deg(v) <= m/n, scaled by n.
        let deletion = minor
            .vertices()
            .map(|v| (minor.degree(v), v))
            .min()
            .filter(|&(deg, _)| deg * n <= m);
        if let Some((_, v)) = deletion {
            minor.delete_vertex_in_place(v)?;
            history.record(HistoryStep::Delete(v));
            continue;
        }
        // common(u, v) + 1 <= m/n, scaled by n.
        let contraction = minor
            .edges()
            .map(|(u, v)| (count_common(minor.neighbors(u), minor.neighbors(v)), u, v))
            .min()
            .filter(|&(c, _, _)| (c + 1) * n <= m);
        if let Some((_, u, v)) = contraction {
            let (keep, gone) = minor.contract_edge_in_place(u, v)?;
            history.record(HistoryStep::Contract(keep, gone));
            continue;
        }
        break;
    }
    let final_d = minor.stats()?.avg_degree;
    Ok(MinimalizeResult {
        minor,
        history,
        original_d,
        final_d,
    })
}

/// Lifts vertex-disjoint cycles of the minor to vertex-disjoint cycles of
/// `original`. Consecutive branch sets are joined by their lexicographically
/// least crossing edge; inside a branch set the entry and exit vertices are
/// joined by a shortest path.
pub fn lift_packing(
    original: &Graph,
    history: &ContractionHistory,
    cycles: &[Vec<VertexId>],
) -> Result<Vec<Vec<VertexId>>> {
    let mut used = BTreeSet::new();
    for cycle in cycles {
        if cycle.len() < 3 {
            return Err(Error::InvalidCycles(format!(
                "cycle {cycle:?} has fewer than 3 vertices"
            )));
        }
        for &v in cycle {
            if !history.branch_sets.contains_key(&v) {
                return Err(Error::InvalidCycles(format!("{v} is not a minor vertex")));
            }
            if !used.insert(v) {
                return Err(Error::InvalidCycles(format!(
                    "vertex {v} appears twice in the packing"
                )));
            }
        }
    }

    let mut lifted = Vec::with_capacity(cycles.len());
    for cycle in cycles {
        let len = cycle.len();
        // crossing[i] joins the branch sets of cycle[i] and cycle[i + 1].
        let mut crossing = Vec::with_capacity(len);
        for i in 0..len {
            let (x, y) = (cycle[i], cycle[(i + 1) % len]);
            let bx = &history.branch_sets[&x];
            let by: BTreeSet<VertexId> = history.branch_sets[&y].iter().copied().collect();
            let edge = bx.iter().find_map(|&a| {
                original
                    .neighbors(a)
                    .iter()
                    .find(|b| by.contains(b))
                    .map(|&b| (a, b))
            });
            match edge {
                Some(e) => crossing.push(e),
                None => {
                    return Err(Error::InvalidCycles(format!(
                        "{x} {y} is not an edge of the minor"
                    )))
                }
            }
        }
        let mut out = Vec::new();
        for i in 0..len {
            let entry = crossing[(i + len - 1) % len].1;
            let exit = crossing[i].0;
            let members: BTreeSet<VertexId> =
                history.branch_sets[&cycle[i]].iter().copied().collect();
            let path = bfs_path(original, &members, entry, exit).ok_or_else(|| {
                Error::InvalidCycles(format!("branch set of {} is disconnected", cycle[i]))
            })?;
            out.extend(path);
        }
        lifted.push(out);
    }
    Ok(lifted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_complete, gen_cycle, gen_gnp};

    fn is_cycle_of(g: &Graph, cycle: &[VertexId]) -> bool {
        let distinct: BTreeSet<_> = cycle.iter().collect();
        cycle.len() >= 3
            && distinct.len() == cycle.len()
            && (0..cycle.len()).all(|i| g.has_edge(cycle[i], cycle[(i + 1) % cycle.len()]))
    }

    /// Whether any single deletion or contraction keeps `d` from dropping,
    /// checked by actually performing each one.
    fn has_non_lowering_move(g: &Graph) -> bool {
        let d = g.stats().unwrap().avg_degree;
        let deletions = g
            .vertices()
            .filter(|_| g.n() > 1)
            .any(|v| g.delete_vertex(v).unwrap().stats().unwrap().avg_degree >= d);
        let contractions = g
            .edges()
            .any(|(u, v)| g.contract_edge(u, v).unwrap().stats().unwrap().avg_degree >= d);
        deletions || contractions
    }

    #[test]
    fn complete_graph_is_already_minimal() {
        let k5 = gen_complete(5).unwrap();
        assert!(!has_non_lowering_move(&k5));
        let res = minimalize(&k5).unwrap();
        assert_eq!(res.minor, k5);
        assert!(res.history.steps.is_empty());
    }

    #[test]
    fn isolated_vertex_is_deleted() {
        let mut g = gen_complete(5).unwrap();
        g.add_vertex(5);
        let res = minimalize(&g).unwrap();
        assert_eq!(res.minor, gen_complete(5).unwrap());
        assert_eq!(res.history.steps, vec![HistoryStep::Delete(5)]);
        assert_eq!(res.final_d, Rational::from_integer(4));
        assert_eq!(res.original_d, Rational::new(10, 3));
    }

    #[test]
    fn path_on_three_vertices_is_minimal() {
        let p3 = Graph::from_edges([(0, 1), (1, 2)]).unwrap();
        assert!(!has_non_lowering_move(&p3));
        assert_eq!(minimalize(&p3).unwrap().minor, p3);
    }

    #[test]
    fn minimal_output_has_no_non_lowering_move() {
        for seed in 0..20 {
            let g = gen_gnp(14, 0.4, seed).unwrap();
            let res = minimalize(&g).unwrap();
            assert!(!has_non_lowering_move(&res.minor), "seed {seed}");
            assert!(res.final_d >= res.original_d);
            assert_eq!(res.history.replay(&g).unwrap(), res.minor);
            res.history.check_branch_sets(&g).unwrap();
        }
    }

    #[test]
    fn edgeless_graph_shrinks_to_a_single_vertex() {
        let res = minimalize(&Graph::empty(4)).unwrap();
        assert_eq!(res.minor.n(), 1);
        assert!(minimalize(&Graph::new()).is_err());
    }

    #[test]
    fn trivial_history_lifts_unchanged() {
        let g = gen_complete(6).unwrap();
        let h = ContractionHistory::identity(&g);
        let cycles = vec![vec![0, 1, 2], vec![3, 5, 4]];
        assert_eq!(lift_packing(&g, &h, &cycles).unwrap(), cycles);
    }

    #[test]
    fn lift_through_contracted_cycle() {
        let c6 = gen_cycle(6).unwrap();
        let mut h = ContractionHistory::identity(&c6);
        h.record(HistoryStep::Contract(0, 1));
        let c5 = h.replay(&c6).unwrap();
        assert_eq!(c5.n(), 5);
        let lifted = lift_packing(&c6, &h, &[vec![0, 2, 3, 4, 5]]).unwrap();
        assert_eq!(lifted[0].len(), 6);
        assert!(is_cycle_of(&c6, &lifted[0]));
    }

    #[test]
    fn lift_triangle_of_contracted_k4() {
        let k4 = gen_complete(4).unwrap();
        let mut h = ContractionHistory::identity(&k4);
        h.record(HistoryStep::Contract(0, 3));
        let lifted = lift_packing(&k4, &h, &[vec![0, 1, 2]]).unwrap();
        assert!(is_cycle_of(&k4, &lifted[0]));
        assert!((3..=4).contains(&lifted[0].len()));
    }

    #[test]
    fn lift_rejects_bad_input() {
        let g = gen_complete(6).unwrap();
        let h = ContractionHistory::identity(&g);
        assert!(lift_packing(&g, &h, &[vec![0, 1, 2], vec![2, 3, 4]]).is_err());
        assert!(lift_packing(&g, &h, &[vec![0, 1]]).is_err());
        let c6 = gen_cycle(6).unwrap();
        let h6 = ContractionHistory::identity(&c6);
        assert!(lift_packing(&c6, &h6, &[vec![0, 1, 3]]).is_err());
    }

    #[test]
    fn history_text_round_trip() {
        let g = gen_gnp(20, 0.3, 3).unwrap();
        let h = minimalize(&g).unwrap().history;
        let text = h.to_text();
        assert_eq!(ContractionHistory::parse(&text).unwrap(), h);
        assert_eq!(ContractionHistory::parse(&text).unwrap().to_text(), text);
        assert!(ContractionHistory::parse("X 1").is_err());
        assert!(ContractionHistory::parse("B 1 2 3").is_err());
    }
}
