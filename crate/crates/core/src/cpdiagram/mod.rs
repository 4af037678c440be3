//! Concurrence-purity plane: reference curves, model trajectories and their
//! self-intersections, unital-region membership, and teleportation
//! thresholds.

mod mems;

use serde::{Deserialize, Serialize};

pub use mems::mems_frontier;

use crate::measures::{
    concurrence, dephasing_floor, dephasing_relation, purity, XStateElements,
};
use crate::models::{evolve_reduced, EvolutionConfig, Evolver, ModelKind, PropagatorRoute};
use crate::states::FieldSpec;
use crate::{Error, Result};

/// Slack on the unital-region boundaries.
pub const UNITAL_TOL: f64 = 1e-9;
/// Slack allowed above the numerical frontier.
pub const FRONTIER_TOL: f64 = 1e-6;

const CP_SLACK: f64 = 1e-12;

/// A point of the concurrence-purity plane, optionally tagged with its time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CPPoint {
    pub p: f64,
    pub c: f64,
    pub t: Option<f64>,
}

impl CPPoint {
    /// Checks `1/4 ≤ P ≤ 1` and `0 ≤ C ≤ 1` (with `1e-12` slack).
    pub fn new(p: f64, c: f64, t: Option<f64>) -> Result<Self> {
        let in_range = |v: f64, lo: f64| v.is_finite() && (lo - CP_SLACK..=1.0 + CP_SLACK).contains(&v);
        if !in_range(p, 0.25) || !in_range(c, 0.0) {
            return Err(Error::Domain(format!("(P, C) = ({p}, {c}) outside the plane")));
        }
        Ok(Self { p, c, t })
    }

    /// `C ≤ C_MEMS(P) + 1e-6`.
    pub fn is_physical(&self) -> Result<bool> {
        Ok(self.c <= mems_frontier(self.p)? + FRONTIER_TOL)
    }
}

/// `C_W(P)`: Werner-family concurrence at purity `P`, with
/// `x = √((4P − 1)/3)`.
pub fn werner_concurrence_at(p: f64) -> f64 {
    let x = ((4.0 * p - 1.0) / 3.0).max(0.0).sqrt();
    (0.5 * (3.0 * x - 1.0)).max(0.0)
}

/// `C_D(P) = √(2P − 1)`, zero below `P = 1/2`.
pub fn dephasing_concurrence_at(p: f64) -> f64 {
    (2.0 * p - 1.0).max(0.0).sqrt()
}

fn require_samples(samples: usize) -> Result<()> {
    if samples < 2 {
        Err(Error::Domain(format!("need at least two samples, got {samples}")))
    } else {
        Ok(())
    }
}

/// Werner family swept over `x ∈ [0, 1]` at `samples` evenly spaced values.
pub fn werner_curve(samples: usize) -> Result<Vec<CPPoint>> {
    require_samples(samples)?;
    (0..samples)
        .map(|k| {
            let x = k as f64 / (samples - 1) as f64;
            CPPoint::new(0.25 * (1.0 + 3.0 * x * x), (0.5 * (3.0 * x - 1.0)).max(0.0), None)
        })
        .collect()
}

/// Dephasing law for `sin φ |ee> + cos φ |gg>`, swept over
/// `P ∈ [sin⁴φ + cos⁴φ, 1]`.
pub fn dephasing_curve(phi: f64, samples: usize) -> Result<Vec<CPPoint>> {
    require_samples(samples)?;
    let floor = dephasing_floor(phi);
    (0..samples)
        .map(|k| {
            let p = floor + (1.0 - floor) * k as f64 / (samples - 1) as f64;
            CPPoint::new(p, dephasing_relation(p, phi)?, None)
        })
        .collect()
}

/// `(P, C)` along an evolution.
pub fn trajectory(cfg: &EvolutionConfig) -> Result<Vec<CPPoint>> {
    let states = evolve_reduced(cfg)?;
    states
        .iter()
        .zip(&cfg.grid)
        .map(|(rho, &t)| CPPoint::new(purity(rho), concurrence(rho)?, Some(t)))
        .collect()
}

fn cross(o: &CPPoint, a: &CPPoint, b: &CPPoint) -> f64 {
    (a.p - o.p) * (b.c - o.c) - (a.c - o.c) * (b.p - o.p)
}

/// Pairs `(i, j)` of non-adjacent polyline segments `[i, i+1]`, `[j, j+1]`
/// that cross properly (each straddles the other's line). Touching and
/// collinear overlaps are not counted.
pub fn self_intersections(points: &[CPPoint]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let n = points.len();
    if n < 4 {
        return out;
    }
    for i in 0..n - 1 {
        let (a, b) = (&points[i], &points[i + 1]);
        let (lo_p, hi_p) = (a.p.min(b.p), a.p.max(b.p));
        let (lo_c, hi_c) = (a.c.min(b.c), a.c.max(b.c));
        for j in i + 2..n - 1 {
            let (c, d) = (&points[j], &points[j + 1]);
            if c.p.max(d.p) < lo_p || c.p.min(d.p) > hi_p || c.c.max(d.c) < lo_c || c.c.min(d.c) > hi_c {
                continue;
            }
            let d1 = cross(a, b, c);
            let d2 = cross(a, b, d);
            let d3 = cross(c, d, a);
            let d4 = cross(c, d, b);
            if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
                out.push((i, j));
            }
        }
    }
    out
}

/// Between the dephasing curve `C_D` and the Werner curve `C_W`, each
/// boundary widened by `1e-9`.
pub fn in_unital_region(point: &CPPoint) -> bool {
    let lower = dephasing_concurrence_at(point.p);
    let upper = werner_concurrence_at(point.p);
    point.c >= lower - UNITAL_TOL && point.c <= upper + UNITAL_TOL
}

/// `C_th = (√ρ₂₂ − √ρ₃₃)²`.
pub fn teleport_threshold(x: &XStateElements) -> f64 {
    let diff = x.d2.max(0.0).sqrt() - x.d3.max(0.0).sqrt();
    diff * diff
}

/// Threshold check at one time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub t: f64,
    pub c: f64,
    pub c_th: f64,
    pub p: f64,
    /// Only reported where a purity-concurrence law fixes it.
    pub p_th: Option<f64>,
    /// `C > C_th`.
    pub usable: bool,
}

enum PurityLaw {
    Homogenization,
    Dephasing(f64),
}

fn purity_law(cfg: &EvolutionConfig) -> Option<PurityLaw> {
    let pure = (cfg.werner.x() - 1.0).abs() < 1e-12;
    match (cfg.model, &cfg.field) {
        (ModelKind::TavisCummingsSpectator, FieldSpec::Fock { n: 0 }) if cfg.werner.is_bell() => {
            Some(PurityLaw::Homogenization)
        }
        (ModelKind::SpinBosonSpectator, _) if pure => Some(PurityLaw::Dephasing(cfg.werner.phi())),
        _ => None,
    }
}

fn reject_coherent(cfg: &EvolutionConfig) -> Result<()> {
    if matches!(cfg.field, FieldSpec::Coherent { .. }) {
        return Err(Error::Unsupported(
            "coherent-field evolutions leave the X family; thresholds need X states".into(),
        ));
    }
    Ok(())
}

/// Teleportation-threshold report for every grid point. The evolved
/// states must be X-shaped, so coherent fields are rejected.
pub fn teleport_windows(cfg: &EvolutionConfig) -> Result<Vec<ThresholdReport>> {
    reject_coherent(cfg)?;
    let law = purity_law(cfg);
    let states = evolve_reduced(cfg)?;
    states
        .iter()
        .zip(&cfg.grid)
        .map(|(rho, &t)| {
            let x = XStateElements::from_density(rho)?;
            let c = concurrence(rho)?;
            let c_th = teleport_threshold(&x);
            let p_th = law.as_ref().map(|law| match law {
                PurityLaw::Homogenization => 0.5 * (1.0 + c_th.powi(4)),
                PurityLaw::Dephasing(phi) => dephasing_floor(*phi),
            });
            Ok(ThresholdReport {
                t,
                c,
                c_th,
                p: purity(rho),
                p_th,
                usable: c > c_th,
            })
        })
        .collect()
}

/// Grid intervals `(t_k, t_{k+1})` across which the usable flag changes.
pub fn window_transitions(reports: &[ThresholdReport]) -> Vec<(f64, f64)> {
    reports
        .windows(2)
        .filter(|w| w[0].usable != w[1].usable)
        .map(|w| (w[0].t, w[1].t))
        .collect()
}

/// Bisects `C(t) − C_th(t)` on `[lo, hi]` through the full evolution
/// pipeline until the bracket is narrower than `tol`. The margin must
/// change sign across the bracket.
pub fn refine_window_edge(cfg: &EvolutionConfig, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    reject_coherent(cfg)?;
    if !(lo < hi && tol > 0.0) {
        return Err(Error::Domain(format!("bad bracket [{lo}, {hi}] or tolerance {tol}")));
    }
    let evolver = Evolver::new(cfg.model, &cfg.werner, &cfg.field, PropagatorRoute::Analytic)?;
    let margin = |t: f64| -> Result<f64> {
        let rho = evolver.state_at(t)?;
        let x = XStateElements::from_density(&rho)?;
        Ok(concurrence(&rho)? - teleport_threshold(&x))
    };
    let (mut a, mut b) = (lo, hi);
    let fa = margin(a)?;
    if fa.signum() == margin(b)?.signum() {
        return Err(Error::Domain(format!("threshold margin does not change sign on [{lo}, {hi}]")));
    }
    let positive_low = fa > 0.0;
    while b - a > tol {
        let mid = 0.5 * (a + b);
        if (margin(mid)? > 0.0) == positive_low {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}
