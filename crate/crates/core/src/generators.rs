//! Graph families used as examples and extremal constructions.
//!
//! Vertex ids are always `0..n`. Where a family has two sides, the first side
//! (clique or left part) takes the low ids.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

pub fn gen_complete(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(invalid("complete graph needs n >= 1"));
    }
    let mut g = Graph::empty(n);
    for u in 0..n as VertexId {
        for v in u + 1..n as VertexId {
            g.add_edge(u, v)?;
        }
    }
    Ok(g)
}

/// `K_{s,t}`: left side `0..s`, right side `s..s+t`.
pub fn gen_complete_bipartite(s: usize, t: usize) -> Result<Graph> {
    if s == 0 || t == 0 {
        return Err(invalid("complete bipartite graph needs both sides nonempty"));
    }
    let mut g = Graph::empty(s + t);
    for u in 0..s as VertexId {
        for v in s as VertexId..(s + t) as VertexId {
            g.add_edge(u, v)?;
        }
    }
    Ok(g)
}

/// Order of the clique in the split graph for `(k, r)`: `ceil(r/2)·k − 1`.
pub fn split_clique_order(k: usize, r: usize) -> usize {
    r.div_ceil(2) * k - 1
}

/// Split graph: a clique of order `ceil(r/2)·k − 1` joined completely to an
/// independent set of `n` vertices. No `k` disjoint cycles of order `>= r`
/// exist, since each needs `ceil(r/2)` clique vertices.
pub fn gen_split(k: usize, r: usize, n: usize) -> Result<Graph> {
    if k == 0 || r < 3 || n == 0 {
        return Err(invalid("split graph needs k >= 1, r >= 3, n >= 1"));
    }
    let c = split_clique_order(k, r);
    let mut g = Graph::empty(c + n);
    for u in 0..c as VertexId {
        for v in u + 1..(c + n) as VertexId {
            g.add_edge(u, v)?;
        }
    }
    Ok(g)
}

/// Split graph plus the perfect matching `{c+2i, c+2i+1}` on the independent
/// set.
pub fn gen_split_matched(k: usize, r: usize, n: usize) -> Result<Graph> {
    if !n.is_multiple_of(2) {
        return Err(invalid("perfect matching needs an even independent set"));
    }
    let mut g = gen_split(k, r, n)?;
    let c = split_clique_order(k, r) as VertexId;
    for i in (0..n as VertexId).step_by(2) {
        g.add_edge(c + i, c + i + 1)?;
    }
    Ok(g)
}

/// `copies` disjoint copies of `K_size`.
pub fn gen_disjoint_cliques(size: usize, copies: usize) -> Result<Graph> {
    if size == 0 || copies == 0 {
        return Err(invalid("clique size and copy count must be positive"));
    }
    let mut g = Graph::empty(size * copies);
    for c in 0..copies {
        let base = (c * size) as VertexId;
        for u in 0..size as VertexId {
            for v in u + 1..size as VertexId {
                g.add_edge(base + u, base + v)?;
            }
        }
    }
    Ok(g)
}

/// `k` disjoint cycles of order `r`; cycle `c` is `c·r, c·r+1, …` in order.
pub fn gen_disjoint_cycles(k: usize, r: usize) -> Result<Graph> {
    if k == 0 || r < 3 {
        return Err(invalid("disjoint cycles need k >= 1 and r >= 3"));
    }
    let mut g = Graph::empty(k * r);
    for c in 0..k {
        let base = (c * r) as VertexId;
        for i in 0..r as VertexId {
            g.add_edge(base + i, base + (i + 1) % r as VertexId)?;
        }
    }
    Ok(g)
}

/// The cycle `C_n` on `0..n`.
pub fn gen_cycle(n: usize) -> Result<Graph> {
    gen_disjoint_cycles(1, n)
}

/// Erdős–Rényi `G(n, p)`, deterministic in `seed`.
pub fn gen_gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(invalid("G(n,p) needs n >= 1"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::empty(n);
    for u in 0..n as VertexId {
        for v in u + 1..n as VertexId {
            if rng.gen_bool(p) {
                g.add_edge(u, v)?;
            }
        }
    }
    Ok(g)
}

/// Petersen graph: outer cycle `0..5`, inner pentagram `5..10`, spokes `i, i+5`.
pub fn gen_petersen() -> Graph {
    let mut g = Graph::empty(10);
    for i in 0..5 {
        g.add_edge(i, (i + 1) % 5).unwrap();
        g.add_edge(5 + i, 5 + (i + 2) % 5).unwrap();
        g.add_edge(i, i + 5).unwrap();
    }
    g
}
