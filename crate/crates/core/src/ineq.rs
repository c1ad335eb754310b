//! Exact feasibility of the integer systems that bound how a family of
//! `k − 1` equal cycles can split between four cycle types.
//!
//! `θ1..θ4` count cycles of each type, `θ1 <= 1` and `θ1 + θ2 + θ3 + θ4 = k − 1`.
//! The linear system asks for
//!
//! ```text
//! 2/3 (k−1) − 1/3 < θ1 + θ2 + θ3/3 + θ4/2
//! 2/3 (k−1) − 1/3 < θ1/3 + θ3 + 7θ4/9
//! ```
//!
//! and is settled by enumerating every `θ`. For `k − 1 = 5` the sharper system,
//! with `r = 3a + b`, `a >= 1`, `b ∈ {0, 1, 2}`,
//!
//! ```text
//! 9a + 3b + 1 <= (3a+b)(θ1+θ2) + aθ3 + (3a+b)θ4/2
//! 9a + 3b + 1 <= (ceil(a + b/3) − 1)θ1 + (3a+b)θ3 + (2a+1)θ4
//! ```
//!
//! is affine in `a` for each fixed `(θ, b)`, so the set of admissible `a` is an
//! interval found from the signs of the coefficients.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct TypeCounts {
    pub theta: [u32; 4],
    pub k_minus_1: u32,
    /// `r = 3a + b`; only set for witnesses of the `k − 1 = 5` system.
    pub a: Option<u64>,
    pub b: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Feasibility {
    pub feasible: bool,
    pub witnesses: Vec<TypeCounts>,
}

/// All `θ` with `θ1 <= 1` summing to `total`, in lexicographic order.
pub fn theta_vectors(total: u32) -> Vec<[u32; 4]> {
    let mut out = Vec::new();
    for t1 in 0..=total.min(1) {
        for t2 in 0..=total - t1 {
            for t3 in 0..=total - t1 - t2 {
                out.push([t1, t2, t3, total - t1 - t2 - t3]);
            }
        }
    }
    out
}

/// Whether `θ` satisfies both strict linear inequalities for `k − 1 = total`.
pub fn satisfies_linear(theta: [u32; 4], total: u32) -> bool {
    let [t1, t2, t3, t4] = theta.map(|t| Rational::from_integer(t as i64));
    let bound = Rational::new(2 * total as i64, 3) - Rational::new(1, 3);
    let s_side = t1 + t2 + t3 / 3 + t4 / 2;
    let t_side = t1 / 3 + t3 + t4 * Rational::new(7, 9);
    bound < s_side && bound < t_side
}

pub fn check_linear_system(k_minus_1: u32) -> Result<Feasibility> {
    if k_minus_1 == 0 {
        return Err(Error::InvalidParameter("k − 1 must be at least 1".into()));
    }
    let witnesses: Vec<TypeCounts> = theta_vectors(k_minus_1)
        .into_iter()
        .filter(|&theta| satisfies_linear(theta, k_minus_1))
        .map(|theta| TypeCounts {
            theta,
            k_minus_1,
            a: None,
            b: None,
        })
        .collect();
    Ok(Feasibility {
        feasible: !witnesses.is_empty(),
        witnesses,
    })
}

/// `coef·a + constant >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AffineInA {
    pub coef: i64,
    pub constant: i64,
}

impl AffineInA {
    pub fn holds_at(self, a: i64) -> bool {
        self.coef * a + self.constant >= 0
    }
}

/// The two `k − 1 = 5` constraints for fixed `(θ, b)`, rearranged as
/// `coef·a + constant >= 0`. The first is doubled to clear the `1/2`.
pub fn quadratic_constraints(theta: [u32; 4], b: u32) -> [AffineInA; 2] {
    let [t1, t2, t3, t4] = theta.map(i64::from);
    let b = i64::from(b);
    let t12 = t1 + t2;
    // 2(9a+3b+1) <= 2(3a+b)t12 + 2a t3 + (3a+b) t4
    let first = AffineInA {
        coef: 6 * t12 + 2 * t3 + 3 * t4 - 18,
        constant: 2 * b * t12 + b * t4 - 6 * b - 2,
    };
    // ceil(a + b/3) = a + [b > 0]
    let bump = i64::from(b > 0);
    // 9a+3b+1 <= (a + bump − 1)t1 + (3a+b)t3 + (2a+1)t4
    let second = AffineInA {
        coef: t1 + 3 * t3 + 2 * t4 - 9,
        constant: (bump - 1) * t1 + b * t3 + t4 - 3 * b - 1,
    };
    [first, second]
}

/// Integer interval `[lo, hi]` (`hi = None` for unbounded) of `a >= 1`
/// satisfying the constraint, or `None` if empty.
fn admissible_a(c: AffineInA) -> Option<(i64, Option<i64>)> {
    use std::cmp::Ordering;
    match c.coef.cmp(&0) {
        // a >= ceil(−constant / coef)
        Ordering::Greater => Some(((-c.constant).div_euclid(c.coef) + i64::from((-c.constant).rem_euclid(c.coef) != 0)).max(1)).map(|lo| (lo, None)),
        Ordering::Equal => (c.constant >= 0).then_some((1, None)),
        // a <= floor(constant / −coef)
        Ordering::Less => {
            let hi = c.constant.div_euclid(-c.coef);
            (hi >= 1).then_some((1, Some(hi)))
        }
    }
}

/// Smallest `a >= 1` satisfying both constraints, if any.
pub fn solve_for_a(constraints: [AffineInA; 2]) -> Option<i64> {
    let (lo1, hi1) = admissible_a(constraints[0])?;
    let (lo2, hi2) = admissible_a(constraints[1])?;
    let lo = lo1.max(lo2);
    let hi = match (hi1, hi2) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    };
    match hi {
        Some(hi) if hi < lo => None,
        _ => Some(lo),
    }
}

/// Decides the `k − 1 = 5` system over all `θ` and `b` by sign analysis in `a`.
pub fn check_quadratic_system_k5() -> Feasibility {
    let mut witnesses = Vec::new();
    for theta in theta_vectors(5) {
        for b in 0..3 {
            if let Some(a) = solve_for_a(quadratic_constraints(theta, b)) {
                witnesses.push(TypeCounts {
                    theta,
                    k_minus_1: 5,
                    a: Some(a as u64),
                    b: Some(b),
                });
            }
        }
    }
    Feasibility {
        feasible: !witnesses.is_empty(),
        witnesses,
    }
}

/// One row of the feasibility table: `k − 1 = 5` is decided by the sharper
/// system, every other value by the linear one.
#[derive(Debug, Clone, Serialize)]
pub struct TableRow {
    pub k_minus_1: u32,
    pub system: &'static str,
    pub feasible: bool,
    pub witnesses: usize,
    /// Feasible for `k − 1 <= 4`, infeasible from 5 on.
    pub expected_feasible: bool,
}

pub fn feasibility_table(range: std::ops::RangeInclusive<u32>) -> Result<Vec<TableRow>> {
    range
        .map(|km1| {
            let (system, f) = if km1 == 5 {
                ("quadratic", check_quadratic_system_k5())
            } else {
                ("linear", check_linear_system(km1)?)
            };
            Ok(TableRow {
                k_minus_1: km1,
                system,
                feasible: f.feasible,
                witnesses: f.witnesses.len(),
                expected_feasible: km1 <= 4,
            })
        })
        .collect()
}
