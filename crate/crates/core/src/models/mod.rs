//! Dynamical maps for the spectator configuration: qubit A couples to the
//! environment, qubit B is idle.
//!
//! Tavis-Cummings and Buck-Sukumar runs take dimensionless times `gt` on
//! resonance; spin-boson runs take absolute times `t`, with the couplings
//! carried by the [`FieldSpec`](crate::states::FieldSpec).

mod closed_form;
mod oracle;
mod propagators;
mod spin_boson;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use closed_form::{bs_reduced, tc_coherent_reduced, tc_number_reduced};
pub use oracle::{oracle_suite, OracleReport};
pub use propagators::{
    annihilation, bs_hamiltonian, bs_propagator, lift_to_abf, susskind_glogower, tc_hamiltonian,
    tc_propagator, RabiProfile,
};
pub use spin_boson::{decoherence_factor, sb_reduced, sb_total_overlap_elements};

use crate::qmath::{eig_hermitian, ComplexMatrix, DensityMatrix, HermitianEigen, ZERO};
use crate::states::{field_vector, werner_like, CouplingSpec, FieldSpec, WernerParams};
use crate::{Error, Result};

// Initial-state eigenvalues at or below this are dropped from the mixture.
const BRANCH_WEIGHT_FLOOR: f64 = 1e-15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    #[serde(alias = "tc")]
    TavisCummingsSpectator,
    #[serde(alias = "bs")]
    BuckSukumarSpectator,
    #[serde(alias = "sb")]
    SpinBosonSpectator,
}

impl ModelKind {
    pub fn profile(self) -> Option<RabiProfile> {
        match self {
            ModelKind::TavisCummingsSpectator => Some(RabiProfile::SquareRoot),
            ModelKind::BuckSukumarSpectator => Some(RabiProfile::Linear),
            ModelKind::SpinBosonSpectator => None,
        }
    }
}

/// One evolution run: model, initial qubit and field states, time grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvolutionConfig {
    pub model: ModelKind,
    pub werner: WernerParams,
    pub field: FieldSpec,
    pub grid: Vec<f64>,
}

impl EvolutionConfig {
    pub fn validate(&self) -> Result<()> {
        validate_grid(&self.grid)?;
        check_pairing(self.model, &self.field)
    }
}

/// Grid must be nonempty, finite, start at or after zero and increase
/// strictly.
pub fn validate_grid(grid: &[f64]) -> Result<()> {
    let first = *grid
        .first()
        .ok_or_else(|| Error::Config("time grid is empty".into()))?;
    if grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::Config("time grid contains a non-finite value".into()));
    }
    if first < 0.0 {
        return Err(Error::Config(format!("time grid starts at negative time {first}")));
    }
    if let Some(w) = grid.windows(2).find(|w| w[1] <= w[0]) {
        return Err(Error::Config(format!(
            "time grid not strictly increasing at {} -> {}",
            w[0], w[1]
        )));
    }
    Ok(())
}

fn check_pairing(model: ModelKind, field: &FieldSpec) -> Result<()> {
    let multimode = matches!(field, FieldSpec::MultimodeVacuum { .. });
    let spin_boson = model == ModelKind::SpinBosonSpectator;
    if multimode != spin_boson {
        return Err(Error::Config(format!(
            "field {field:?} cannot drive model {model:?}; the multimode vacuum pairs with spin-boson only"
        )));
    }
    Ok(())
}

/// How the qubit-field propagator is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PropagatorRoute {
    /// Closed-form block operator built from Susskind-Glogower operators.
    #[default]
    Analytic,
    /// Numerical exponential of the truncated interaction Hamiltonian.
    Exponentiated,
}

enum Engine {
    Field {
        profile: RabiProfile,
        route: PropagatorRoute,
        cutoff: usize,
        field: Vec<Complex64>,
        hamiltonian: Option<HermitianEigen>,
        // (weight, two-qubit amplitudes)
        branches: Vec<(f64, Vec<Complex64>)>,
    },
    Dephasing {
        werner: WernerParams,
        couplings: CouplingSpec,
    },
}

/// Reusable evolution of one initial state: the product
/// `ρ(0) = ϱ(0) ⊗ |f><f|` is stored as a mixture of pure product states,
/// each propagated by `U ⊗ 1_B`, and the field is traced out.
pub struct Evolver {
    engine: Engine,
}

impl Evolver {
    pub fn new(
        model: ModelKind,
        werner: &WernerParams,
        field: &FieldSpec,
        route: PropagatorRoute,
    ) -> Result<Self> {
        Self::with_cutoff(model, werner, field, route, None)
    }

    /// `cutoff` overrides the propagator truncation. It must leave at
    /// least one empty level above the field support: `n + 1` for `|n>`,
    /// the coherent cutoff plus one otherwise. The default is `n + 2` for
    /// number states and coherent cutoff plus one for coherent states.
    pub fn with_cutoff(
        model: ModelKind,
        werner: &WernerParams,
        field: &FieldSpec,
        route: PropagatorRoute,
        cutoff: Option<usize>,
    ) -> Result<Self> {
        check_pairing(model, field)?;
        let profile = match model.profile() {
            Some(p) => p,
            None => {
                let FieldSpec::MultimodeVacuum { couplings } = field else {
                    unreachable!("pairing checked above")
                };
                return Ok(Self {
                    engine: Engine::Dephasing {
                        werner: *werner,
                        couplings: couplings.clone(),
                    },
                });
            }
        };
        let (minimum, default) = match field {
            FieldSpec::Fock { n } => (n + 1, n + 2),
            FieldSpec::Coherent { .. } => {
                let k = field.effective_cutoff().expect("coherent field");
                (k + 1, k + 1)
            }
            FieldSpec::MultimodeVacuum { .. } => unreachable!("pairing checked above"),
        };
        let cutoff = cutoff.unwrap_or(default);
        if cutoff < minimum {
            return Err(Error::Config(format!(
                "propagator cutoff {cutoff} leaves no headroom above the field (need >= {minimum})"
            )));
        }
        let field = field_vector(field, cutoff + 1)?;
        let rho0 = werner_like(werner)?;
        let eig = eig_hermitian(rho0.matrix())?;
        let branches = eig
            .values
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > BRANCH_WEIGHT_FLOOR)
            .map(|(k, &w)| (w, eig.vectors.column(k)))
            .collect();
        let hamiltonian = match route {
            PropagatorRoute::Analytic => None,
            PropagatorRoute::Exponentiated => {
                Some(eig_hermitian(&propagators::hamiltonian(profile, cutoff))?)
            }
        };
        Ok(Self {
            engine: Engine::Field {
                profile,
                route,
                cutoff,
                field,
                hamiltonian,
                branches,
            },
        })
    }

    /// Propagator truncation in use, if the model has a single field mode.
    pub fn cutoff(&self) -> Option<usize> {
        match &self.engine {
            Engine::Field { cutoff, .. } => Some(*cutoff),
            Engine::Dephasing { .. } => None,
        }
    }

    fn propagator(&self, gt: f64) -> Option<ComplexMatrix> {
        match &self.engine {
            Engine::Field {
                profile,
                route,
                cutoff,
                hamiltonian,
                ..
            } => Some(match route {
                PropagatorRoute::Analytic => propagators::propagator(*profile, gt, *cutoff),
                PropagatorRoute::Exponentiated => {
                    hamiltonian.as_ref().expect("cached for this route").exp_i(gt)
                }
            }),
            Engine::Dephasing { .. } => None,
        }
    }

    // Evolved branches: weight and, for b ∈ {e, g}, the A ⊗ F vector of
    // that qubit-B component (index a·d + m).
    fn evolved_branches(&self, gt: f64) -> Vec<(f64, [Vec<Complex64>; 2])> {
        let Engine::Field {
            field, branches, ..
        } = &self.engine
        else {
            return Vec::new();
        };
        let u = self.propagator(gt).expect("single-mode engine");
        let d = field.len();
        branches
            .iter()
            .map(|(w, amps)| {
                let split = |b: usize| {
                    let mut v = vec![ZERO; 2 * d];
                    for a in 0..2 {
                        let c = amps[2 * a + b];
                        if c != ZERO {
                            for (m, f) in field.iter().enumerate() {
                                v[a * d + m] = c * f;
                            }
                        }
                    }
                    u.mul_vec(&v)
                };
                (*w, [split(0), split(1)])
            })
            .collect()
    }

    /// Reduced two-qubit state at `gt` (or absolute `t` for spin-boson).
    pub fn state_at(&self, time: f64) -> Result<DensityMatrix> {
        match &self.engine {
            Engine::Dephasing { werner, couplings } => sb_reduced(werner, couplings, time),
            Engine::Field { field, .. } => {
                let d = field.len();
                let mut rho = ComplexMatrix::zeros(4, 4);
                for (w, halves) in self.evolved_branches(time) {
                    for i in 0..4 {
                        let (ai, bi) = (i / 2, i % 2);
                        for j in 0..4 {
                            let (aj, bj) = (j / 2, j % 2);
                            let vi = &halves[bi][ai * d..(ai + 1) * d];
                            let vj = &halves[bj][aj * d..(aj + 1) * d];
                            let s: Complex64 = vi.iter().zip(vj).map(|(x, y)| x * y.conj()).sum();
                            rho[(i, j)] += s * w;
                        }
                    }
                }
                DensityMatrix::new(rho.with_dims(vec![2, 2])?)
            }
        }
    }

    /// `<a†a + (σ_z^A + 1)/2>`; `None` for spin-boson.
    pub fn excitation_number(&self, gt: f64) -> Option<f64> {
        let Engine::Field { field, .. } = &self.engine else {
            return None;
        };
        let d = field.len();
        let total = self
            .evolved_branches(gt)
            .iter()
            .map(|(w, halves)| {
                w * halves
                    .iter()
                    .map(|v| {
                        v.iter()
                            .enumerate()
                            .map(|(k, z)| {
                                let (a, m) = (k / d, k % d);
                                z.norm_sqr() * (m as f64 + if a == 0 { 1.0 } else { 0.0 })
                            })
                            .sum::<f64>()
                    })
                    .sum::<f64>()
            })
            .sum();
        Some(total)
    }
}

/// Reduced states on the configured grid using the closed-form propagator.
pub fn evolve_reduced(cfg: &EvolutionConfig) -> Result<Vec<DensityMatrix>> {
    evolve_reduced_with(cfg, PropagatorRoute::Analytic)
}

pub fn evolve_reduced_with(
    cfg: &EvolutionConfig,
    route: PropagatorRoute,
) -> Result<Vec<DensityMatrix>> {
    cfg.validate()?;
    let evolver = Evolver::new(cfg.model, &cfg.werner, &cfg.field, route)?;
    cfg.grid.iter().map(|&t| evolver.state_at(t)).collect()
}
