//! Guarantee and soundness suites for the searches in [`crate::lemmas`].
//!
//! The exhaustive suites enumerate every hypothesis-satisfying instance up to
//! a size bound and report any instance where the search found nothing. Every
//! returned witness is re-checked here by code that shares nothing with the
//! searches.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::graph::VertexId;
use crate::lemmas::{
    crossing_path_bound, find_disjoint_ST_paths, find_path_with_spare, find_reroute_or_double,
    find_short_crossing_path, CycleFamily, RerouteWitness, VertexSet,
};

#[derive(Debug, Clone, Default, Serialize)]
pub struct SuiteReport {
    pub lemma: u8,
    pub instances: u64,
    pub witnesses: u64,
    /// Hypothesis-satisfying instances with no witness.
    pub missing: Vec<String>,
    /// Witnesses rejected by the independent checker.
    pub unsound: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.missing.is_empty() && self.unsound.is_empty()
    }

    fn record_missing(&mut self, what: String) {
        if self.missing.len() < 20 {
            self.missing.push(what);
        } else if self.missing.len() == 20 {
            self.missing.push("…".into());
        }
    }

    fn record_unsound(&mut self, what: String) {
        if self.unsound.len() < 20 {
            self.unsound.push(what);
        }
    }
}

/// Whether `path` is a contiguous run of distinct vertices along `cycle`, in
/// either direction.
pub fn is_arc_of(cycle: &[VertexId], path: &[VertexId]) -> bool {
    let n = cycle.len();
    if path.is_empty() || path.len() > n {
        return false;
    }
    let pos: BTreeMap<VertexId, usize> = cycle.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let Some(idx) = path.iter().map(|v| pos.get(v).copied()).collect::<Option<Vec<_>>>() else {
        return false;
    };
    let mut distinct = idx.clone();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() != idx.len() {
        return false;
    }
    let forward = idx.windows(2).all(|w| w[1] == (w[0] + 1) % n);
    let backward = idx.windows(2).all(|w| w[0] == (w[1] + 1) % n);
    forward || backward
}

fn ends_in(path: &[VertexId], set: &VertexSet) -> bool {
    set.contains(&path[0]) && set.contains(&path[path.len() - 1])
}

/// Checks a witness of the single-path-with-spare search.
pub fn check_spare_witness(
    family: &CycleFamily,
    s: &VertexSet,
    t: &VertexSet,
    w: &RerouteWitness,
) -> Result<(), String> {
    let cycle = family
        .cycles()
        .get(w.cycle_index)
        .ok_or("cycle index out of range")?;
    if !is_arc_of(cycle, &w.path) {
        return Err(format!("{:?} is not an arc of {cycle:?}", w.path));
    }
    if w.path.len() != family.q()[w.cycle_index] {
        return Err(format!("path has {} vertices", w.path.len()));
    }
    if !ends_in(&w.path, s) {
        return Err("path ends not in S".into());
    }
    let spare = w.spare.ok_or("missing spare vertex")?;
    if !t.contains(&spare) || !cycle.contains(&spare) || w.path.contains(&spare) {
        return Err(format!("bad spare vertex {spare}"));
    }
    Ok(())
}

/// Checks a pair of disjoint arcs with ends in `s` and `t` respectively and
/// at least `min_len` vertices each.
pub fn check_arc_pair(
    cycle: &[VertexId],
    s: &VertexSet,
    t: &VertexSet,
    p: &[VertexId],
    q: &[VertexId],
    min_len: usize,
) -> Result<(), String> {
    if !is_arc_of(cycle, p) || !is_arc_of(cycle, q) {
        return Err("not arcs of the cycle".into());
    }
    if p.iter().any(|v| q.contains(v)) {
        return Err("arcs intersect".into());
    }
    if p.len() < min_len || q.len() < min_len {
        return Err(format!("arcs of {} and {} vertices", p.len(), q.len()));
    }
    if !ends_in(p, s) || !ends_in(q, t) {
        return Err("arc ends outside S / T".into());
    }
    Ok(())
}

/// Checks either outcome of the reroute-or-double search.
pub fn check_reroute_or_double_witness(
    family: &CycleFamily,
    s: &VertexSet,
    t: &VertexSet,
    w: &RerouteWitness,
) -> Result<(), String> {
    match (&w.spare, &w.second_path) {
        (Some(_), None) => check_spare_witness(family, s, t, w),
        (None, Some(q)) => {
            let cycle = family
                .cycles()
                .get(w.cycle_index)
                .ok_or("cycle index out of range")?;
            let r = cycle.len();
            // more than r/3 vertices
            check_arc_pair(cycle, s, t, &w.path, q, r / 3 + 1)
        }
        _ => Err("witness must carry exactly one of spare / second path".into()),
    }
}

pub fn check_crossing_path(
    cycle: &[VertexId],
    s: &VertexSet,
    t: &VertexSet,
    p: &[VertexId],
) -> Result<(), String> {
    if !is_arc_of(cycle, p) {
        return Err(format!("{p:?} is not an arc"));
    }
    if p.len() < 2 || 6 * p.len() > cycle.len() + 24 {
        return Err(format!("path of {} vertices", p.len()));
    }
    let (a, b) = (p[0], p[p.len() - 1]);
    if !((s.contains(&a) && t.contains(&b)) || (t.contains(&a) && s.contains(&b))) {
        return Err("ends do not cross S and T".into());
    }
    Ok(())
}

/// Subsets of `0..n` (as sets) with at least `min_size` elements.
fn subsets_at_least(n: usize, min_size: usize) -> Vec<VertexSet> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize >= min_size)
        .map(|m| (0..n as VertexId).filter(|&v| m >> v & 1 == 1).collect())
        .collect()
}

/// Nonincreasing sequences of parts `>= 3` summing to exactly `total`.
fn cycle_partitions(total: usize, max_part: usize) -> Vec<Vec<usize>> {
    if total == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for part in (3..=max_part.min(total)).rev() {
        for mut rest in cycle_partitions(total - part, part) {
            rest.insert(0, part);
            out.push(rest);
        }
    }
    out
}

fn family_cycles(sizes: &[usize]) -> Vec<Vec<VertexId>> {
    let mut next = 0;
    sizes
        .iter()
        .map(|&len| {
            let c: Vec<VertexId> = (next..next + len as VertexId).collect();
            next += len as VertexId;
            c
        })
        .collect()
}

/// Every vector with `1 <= q_i <= hi(i)`.
fn q_vectors(his: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &hi in his {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (1..=hi).map(move |q| {
                    let mut v = prefix.clone();
                    v.push(q);
                    v
                })
            })
            .collect();
    }
    out
}

/// Single path with spare, on every family of disjoint cycles with at most
/// `max_vertices` vertices in total, every admissible `q`, and every `S`, `T`
/// with `|S|, |T| > 2/3 |V(F)|`.
pub fn exhaustive_path_with_spare(max_vertices: usize) -> SuiteReport {
    let mut report = SuiteReport {
        lemma: 1,
        ..Default::default()
    };
    for total in 3..=max_vertices {
        // 3|S| > 2N
        let sets = subsets_at_least(total, 2 * total / 3 + 1);
        for sizes in cycle_partitions(total, total) {
            let cycles = family_cycles(&sizes);
            let his: Vec<usize> = sizes.iter().map(|&s| s - 1).collect();
            let families: Vec<CycleFamily> = q_vectors(&his)
                .into_iter()
                .map(|q| CycleFamily::new(cycles.clone(), q).expect("valid family"))
                .collect();
            for s in &sets {
                for t in &sets {
                    for family in &families {
                        report.instances += 1;
                        match find_path_with_spare(family, s, t) {
                            Ok(Some(w)) => {
                                report.witnesses += 1;
                                if let Err(e) = check_spare_witness(family, s, t, &w) {
                                    report.record_unsound(format!("{sizes:?} {e}"));
                                }
                            }
                            _ => report.record_missing(format!(
                                "sizes {sizes:?} q {:?} S {s:?} T {t:?}",
                                family.q()
                            )),
                        }
                    }
                }
            }
        }
    }
    report
}

/// Disjoint S/T arcs on every cycle `C_n`, `6 <= n <= max_len`, every `S` with
/// `|S| >= p + 1` and `T` with `|T| >= 2p + 2`, `p = floor(n/3)`.
pub fn exhaustive_disjoint_paths(max_len: usize) -> SuiteReport {
    let mut report = SuiteReport {
        lemma: 2,
        ..Default::default()
    };
    for n in 6..=max_len {
        let p = n / 3;
        let cycle: Vec<VertexId> = (0..n as VertexId).collect();
        let ss = subsets_at_least(n, p + 1);
        let ts = subsets_at_least(n, 2 * p + 2);
        for s in &ss {
            for t in &ts {
                report.instances += 1;
                match find_disjoint_ST_paths(&cycle, s, t) {
                    Ok(Some((pp, qq))) => {
                        report.witnesses += 1;
                        if let Err(e) = check_arc_pair(&cycle, s, t, &pp, &qq, p + 1) {
                            report.record_unsound(format!("C_{n} {e}"));
                        }
                    }
                    _ => report.record_missing(format!("C_{n} S {s:?} T {t:?}")),
                }
            }
        }
    }
    report
}

/// Short crossing path on every cycle `C_n`, `3 <= n <= max_len`, every `S`,
/// `T` with `|S|, |T| > n/3`.
pub fn exhaustive_crossing_path(max_len: usize) -> SuiteReport {
    let mut report = SuiteReport {
        lemma: 4,
        ..Default::default()
    };
    for n in 3..=max_len {
        let cycle: Vec<VertexId> = (0..n as VertexId).collect();
        let sets = subsets_at_least(n, n / 3 + 1);
        for s in &sets {
            for t in &sets {
                report.instances += 1;
                match find_short_crossing_path(&cycle, s, t) {
                    Ok(Some(p)) => {
                        report.witnesses += 1;
                        if let Err(e) = check_crossing_path(&cycle, s, t, &p) {
                            report.record_unsound(format!("C_{n} {e}"));
                        }
                    }
                    _ => report.record_missing(format!("C_{n} S {s:?} T {t:?}")),
                }
            }
        }
    }
    report
}

/// Smallest cycle `C_n` (`n <= max_len`) with sets `|S| = |T| = floor(n/3)`
/// admitting no short crossing path: shows the `> n/3` hypothesis cannot be
/// relaxed to `>= floor(n/3)`.
pub fn crossing_path_sharpness(max_len: usize) -> Option<(usize, VertexSet, VertexSet)> {
    for n in 3..=max_len {
        let size = n / 3;
        let cycle: Vec<VertexId> = (0..n as VertexId).collect();
        let sets: Vec<VertexSet> = subsets_at_least(n, size)
            .into_iter()
            .filter(|s| s.len() == size)
            .collect();
        for s in &sets {
            for t in &sets {
                // independent brute force: any two distinct cycle positions
                // within bound along one direction
                let bound = crossing_path_bound(n);
                let found = s.iter().any(|&a| {
                    t.iter().any(|&b| {
                        let gap = (b as usize + n - a as usize) % n;
                        a != b && (gap < bound || n - gap < bound)
                    })
                });
                if !found {
                    assert_eq!(find_short_crossing_path(&cycle, s, t), Ok(None));
                    return Some((n, s.clone(), t.clone()));
                }
            }
        }
    }
    None
}

/// Reroute-or-double on `samples` random instances per `(k − 1, r)` config:
/// random admissible `q` and random `S`, `T` just above the
/// `2/3 (k−1) r − r/3` threshold.
pub fn sampled_reroute_or_double(
    configs: &[(usize, usize)],
    samples: usize,
    seed: u64,
) -> SuiteReport {
    let mut report = SuiteReport {
        lemma: 3,
        ..Default::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for &(t_count, r) in configs {
        let cycles = family_cycles(&vec![r; t_count]);
        let n = t_count * r;
        // 3|S| > 2(k−1)r − r
        let min_size = (2 * n - r) / 3 + 1;
        let q_max = (r - 1) / 3; // 3q < r
        let mut all: Vec<VertexId> = (0..n as VertexId).collect();
        for _ in 0..samples {
            let q: Vec<usize> = (0..t_count).map(|_| rng.gen_range(1..=q_max)).collect();
            let family = CycleFamily::new(cycles.clone(), q).expect("valid family");
            let mut draw = |rng: &mut ChaCha8Rng| -> VertexSet {
                // bias towards the threshold, where witnesses are scarcest
                let size = if rng.gen_bool(0.7) {
                    min_size
                } else {
                    rng.gen_range(min_size..=n)
                };
                all.shuffle(rng);
                all[..size].iter().copied().collect()
            };
            let s = draw(&mut rng);
            let t = draw(&mut rng);
            report.instances += 1;
            match find_reroute_or_double(&family, &s, &t) {
                Ok(Some(w)) => {
                    report.witnesses += 1;
                    if let Err(e) = check_reroute_or_double_witness(&family, &s, &t, &w) {
                        report.record_unsound(format!("({t_count},{r}) {e}"));
                    }
                }
                _ => report.record_missing(format!(
                    "({t_count},{r}) q {:?} S {s:?} T {t:?}",
                    family.q()
                )),
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arc_checker() {
        let c: Vec<VertexId> = (0..6).collect();
        assert!(is_arc_of(&c, &[4, 5, 0]));
        assert!(is_arc_of(&c, &[1, 0, 5]));
        assert!(is_arc_of(&c, &[3]));
        assert!(!is_arc_of(&c, &[1, 3]));
        assert!(!is_arc_of(&c, &[1, 2, 1]));
        assert!(!is_arc_of(&c, &[7]));
        assert!(!is_arc_of(&c, &[]));
    }

    #[test]
    fn partitions_and_q_vectors() {
        assert_eq!(cycle_partitions(6, 6), vec![vec![6], vec![3, 3]]);
        assert_eq!(cycle_partitions(7, 7), vec![vec![7], vec![4, 3]]);
        assert!(cycle_partitions(5, 2).is_empty());
        assert_eq!(q_vectors(&[2, 1]), vec![vec![1, 1], vec![2, 1]]);
    }

    #[test]
    fn spare_witness_checker_rejects_tampering() {
        let f = CycleFamily::new(vec![(0..6).collect()], vec![2]).unwrap();
        let all: VertexSet = (0..6).collect();
        let mut w = find_path_with_spare(&f, &all, &all).unwrap().unwrap();
        assert!(check_spare_witness(&f, &all, &all, &w).is_ok());
        w.spare = Some(w.path[0]);
        assert!(check_spare_witness(&f, &all, &all, &w).is_err());
    }

    #[test]
    fn small_exhaustive_suites_pass() {
        assert!(exhaustive_path_with_spare(8).passed());
        assert!(exhaustive_disjoint_paths(8).passed());
        assert!(exhaustive_crossing_path(8).passed());
    }

    #[test]
    fn disjoint_paths_on_c9_and_c6() {
        // All 4-subsets S and 8-subsets T of C_9; all 3-subsets S of C_6 with T = V.
        let c9: Vec<VertexId> = (0..9).collect();
        let s4: Vec<VertexSet> = subsets_at_least(9, 4).into_iter().filter(|s| s.len() == 4).collect();
        let t8: Vec<VertexSet> = subsets_at_least(9, 8).into_iter().filter(|s| s.len() == 8).collect();
        for s in &s4 {
            for t in &t8 {
                let (p, q) = find_disjoint_ST_paths(&c9, s, t).unwrap().unwrap();
                check_arc_pair(&c9, s, t, &p, &q, 4).unwrap();
            }
        }
        let c6: Vec<VertexId> = (0..6).collect();
        let all: VertexSet = (0..6).collect();
        for s in subsets_at_least(6, 3).into_iter().filter(|s| s.len() == 3) {
            let (p, q) = find_disjoint_ST_paths(&c6, &s, &all).unwrap().unwrap();
            check_arc_pair(&c6, &s, &all, &p, &q, 3).unwrap();
        }
    }

    #[test]
    fn crossing_paths_on_c9() {
        let c9: Vec<VertexId> = (0..9).collect();
        for s in subsets_at_least(9, 4) {
            for t in subsets_at_least(9, 4) {
                let p = find_short_crossing_path(&c9, &s, &t).unwrap().unwrap();
                assert!((2..=5).contains(&p.len()));
            }
        }
    }

    #[test]
    fn sharpness_fixture() {
        let (n, s, t) = crossing_path_sharpness(12).unwrap();
        assert_eq!(n, 3);
        assert_eq!(s.len(), 1);
        assert_eq!(s, t);
    }

    #[test]
    fn sampled_small_run() {
        let report = sampled_reroute_or_double(&[(5, 4), (5, 7)], 200, 1);
        assert!(report.passed(), "{:?}", report.missing);
        assert_eq!(report.instances, 400);
    }
}
