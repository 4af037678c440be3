//! Closed-form propagators checked against exponentiated Hamiltonians.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Evolver, ModelKind, PropagatorRoute};
use crate::states::{FieldSpec, WernerParams};
use crate::Result;

/// Largest entrywise deviation between the two routes, per model.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleReport {
    pub points: usize,
    pub max_deviation_tc: f64,
    pub max_deviation_bs: f64,
}

impl OracleReport {
    pub fn max_deviation(&self) -> f64 {
        self.max_deviation_tc.max(self.max_deviation_bs)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_deviation() < tol
    }
}

/// Compares reduced states from both propagator routes at `points` random
/// draws of model, Werner parameters, Fock level `n ≤ 8`, cutoff
/// `n + 2 ..= n + 4` and `gt ∈ [0, 4π)`.
pub fn oracle_suite(points: usize, seed: u64) -> Result<OracleReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = OracleReport {
        points,
        max_deviation_tc: 0.0,
        max_deviation_bs: 0.0,
    };
    for k in 0..points {
        let model = if k % 2 == 0 {
            ModelKind::TavisCummingsSpectator
        } else {
            ModelKind::BuckSukumarSpectator
        };
        let werner = WernerParams::new(
            rng.random_range(0.0..=1.0),
            rng.random_range(0.0..=std::f64::consts::FRAC_PI_2),
        )?;
        let n = rng.random_range(0..=8usize);
        let cutoff = n + rng.random_range(2..=4usize);
        let gt = rng.random_range(0.0..4.0 * std::f64::consts::PI);
        let field = FieldSpec::Fock { n };
        let build = |route| Evolver::with_cutoff(model, &werner, &field, route, Some(cutoff));
        let a = build(PropagatorRoute::Analytic)?.state_at(gt)?;
        let b = build(PropagatorRoute::Exponentiated)?.state_at(gt)?;
        let dev = a.matrix().max_abs_diff(b.matrix());
        let slot = match model {
            ModelKind::TavisCummingsSpectator => &mut report.max_deviation_tc,
            _ => &mut report.max_deviation_bs,
        };
        *slot = slot.max(dev);
    }
    Ok(report)
}
