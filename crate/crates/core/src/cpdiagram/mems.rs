//! Numerical frontier of maximal concurrence at fixed purity.
//!
//! The search runs over two-qubit X states, which are known to attain the
//! frontier. Several reductions are exact:
//! - Phases of the coherences do not enter `P` or `C`.
//! - Only the branch with the larger coherence matters. It is taken on
//!   `|ρ₁₄|`, and `|ρ₂₃|` absorbs the remaining purity budget.
//! - `d1 = d4` is optimal. For fixed `d1 + d4`, an equal split maximizes
//!   `√(d1 d4)` and the purity budget by the same amount, so feasibility is
//!   unchanged.
//!
//! That leaves a bounded search over `(d2, d3)`: a memoized coarse lattice
//! followed by zoom refinement.

use std::sync::OnceLock;

use crate::{Error, Result};

const LATTICE_STEPS: usize = 200;
const ZOOM_POINTS: usize = 24;
const ZOOM_SHRINK: f64 = 0.25;
const ZOOM_FLOOR: f64 = 1e-14;
const DOMAIN_SLACK: f64 = 1e-12;

struct LatticePoint {
    d2: f64,
    d3: f64,
}

fn lattice() -> &'static [LatticePoint] {
    static LATTICE: OnceLock<Vec<LatticePoint>> = OnceLock::new();
    LATTICE.get_or_init(|| {
        let h = 1.0 / LATTICE_STEPS as f64;
        let mut pts = Vec::new();
        for i in 0..=LATTICE_STEPS {
            for j in 0..=(LATTICE_STEPS - i) {
                pts.push(LatticePoint {
                    d2: i as f64 * h,
                    d3: j as f64 * h,
                });
            }
        }
        pts
    })
}

// Unclamped concurrence of the best X state with populations
// (a, d2, d3, a) at purity p, or None if no coherences reach p.
fn objective(p: f64, d2: f64, d3: f64) -> Option<f64> {
    let a = 0.5 * (1.0 - d2 - d3);
    if a < 0.0 || d2 < 0.0 || d3 < 0.0 {
        return None;
    }
    let budget = 0.5 * (p - 2.0 * a * a - d2 * d2 - d3 * d3);
    if budget < 0.0 {
        return None;
    }
    let q = d2 * d3;
    let r14 = if budget <= a * a {
        budget.sqrt()
    } else if budget - a * a <= q {
        a
    } else {
        return None;
    };
    Some(2.0 * (r14 - q.sqrt()))
}

fn clamp_to_simplex(d2: f64, d3: f64) -> (f64, f64) {
    let d2 = d2.clamp(0.0, 1.0);
    let d3 = d3.clamp(0.0, 1.0 - d2);
    (d2, d3)
}

fn zoom(p: f64, mut best: (f64, f64, f64)) -> (f64, f64, f64) {
    let mut half = 2.0 / LATTICE_STEPS as f64;
    while half > ZOOM_FLOOR {
        let (c2, c3) = (best.1, best.2);
        let step = 2.0 * half / ZOOM_POINTS as f64;
        for i in 0..=ZOOM_POINTS {
            for j in 0..=ZOOM_POINTS {
                let (d2, d3) = clamp_to_simplex(c2 - half + i as f64 * step, c3 - half + j as f64 * step);
                if let Some(v) = objective(p, d2, d3) {
                    if v > best.0 {
                        best = (v, d2, d3);
                    }
                }
            }
        }
        half *= ZOOM_SHRINK;
    }
    best
}

/// Largest concurrence attainable by any two-qubit state of purity `p`.
pub fn mems_frontier(p: f64) -> Result<f64> {
    if !(p.is_finite() && (0.25 - DOMAIN_SLACK..=1.0 + DOMAIN_SLACK).contains(&p)) {
        return Err(Error::Domain(format!("purity {p} outside [1/4, 1]")));
    }
    let p = p.clamp(0.25, 1.0);
    let coarse = lattice()
        .iter()
        .filter_map(|pt| objective(p, pt.d2, pt.d3).map(|v| (v, pt.d2, pt.d3)))
        .max_by(|a, b| a.0.total_cmp(&b.0));
    // The uniform populations are feasible for every p ≤ 1/2 and keep tiny
    // purity budgets from missing the lattice.
    let seeds = [Some((objective(p, 0.25, 0.25).unwrap_or(f64::NEG_INFINITY), 0.25, 0.25)), coarse];
    let best = seeds
        .into_iter()
        .flatten()
        .map(|seed| zoom(p, seed))
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .filter(|b| b.0.is_finite())
        .ok_or_else(|| Error::NumericalFailure(format!("no feasible state found at purity {p}")))?;
    Ok(best.0.clamp(0.0, 1.0))
}
