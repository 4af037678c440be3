//! Pure dephasing of qubit A by a bath of oscillators starting in their
//! ground state. Populations are frozen; the `ee`/`gg` coherence decays
//! as `e^{-Γ(t)}`.

use num_complex::Complex64;

use crate::qmath::{ComplexMatrix, DensityMatrix, I};
use crate::states::{CouplingSpec, WernerParams};
use crate::Result;

/// `Γ(t) = Σ_j 4 g_j² (1 − cos ω_j t) / ω_j²`, evaluated as
/// `8 g_j² sin²(ω_j t / 2) / ω_j²` to avoid cancellation at small `t`.
pub fn decoherence_factor(c: &CouplingSpec, t: f64) -> f64 {
    c.iter()
        .map(|(g, w)| {
            let s = (0.5 * w * t).sin() / w;
            8.0 * g * g * s * s
        })
        .sum()
}

/// Per-mode displacements `λ_j = (g_j/ω_j)(1 − e^{iω_j t})` and the overlap
/// `Π_j <λ_j|−λ_j> = Π_j e^{−2|λ_j|²}`.
pub fn sb_total_overlap_elements(c: &CouplingSpec, t: f64) -> (Vec<Complex64>, f64) {
    let lambdas: Vec<Complex64> = c
        .iter()
        .map(|(g, w)| (1.0 - (I * w * t).exp()) * (g / w))
        .collect();
    let exponent: f64 = lambdas.iter().map(|l| 2.0 * l.norm_sqr()).sum();
    (lambdas, (-exponent).exp())
}

/// Reduced two-qubit state under pure dephasing at absolute time `t`.
pub fn sb_reduced(p: &WernerParams, c: &CouplingSpec, t: f64) -> Result<DensityMatrix> {
    sb_reduced_from_gamma(p, decoherence_factor(c, t))
}

pub(crate) fn sb_reduced_from_gamma(p: &WernerParams, gamma: f64) -> Result<DensityMatrix> {
    let (x, (s, c)) = (p.x(), p.phi().sin_cos());
    let w = (1.0 - x) / 4.0;
    let mut m = ComplexMatrix::from_real_diag(&[w + x * s * s, w, w, w + x * c * c]);
    let r14 = Complex64::new(x * s * c * (-gamma).exp(), 0.0);
    m[(0, 3)] = r14;
    m[(3, 0)] = r14;
    DensityMatrix::new(m.with_dims(vec![2, 2])?)
}
