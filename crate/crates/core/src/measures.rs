//! Purity, concurrence, and the closed-form time laws and purity-concurrence
//! relations of the three models.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::qmath::{eig_hermitian, singular_values, ComplexMatrix, DensityMatrix};
use crate::states::WernerParams;
use crate::{Error, Result};

/// Eigenvalues of `ρ` at or below this are treated as exact zeros when
/// factoring `ρ = W W†` for the concurrence.
pub const RANK_TOL: f64 = 1e-14;

const X_SUM_TOL: f64 = 1e-12;
const X_NEG_TOL: f64 = 1e-12;
const X_POS_TOL: f64 = 1e-10;
const X_SHAPE_TOL: f64 = 1e-12;
const PURITY_SLACK: f64 = 1e-12;

/// `tr ρ² = Σ |ρ_ij|²`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.matrix().as_slice().iter().map(|z| z.norm_sqr()).sum()
}

fn require_two_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() == 4 {
        Ok(())
    } else {
        Err(Error::Dimension(format!(
            "concurrence needs a two-qubit state, got dimension {}",
            rho.dim()
        )))
    }
}

// σ_y ⊗ σ_y in {ee, eg, ge, gg}.
fn sigma_yy() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        &[0.0, 0.0, 0.0, -1.0],
        &[0.0, 0.0, 1.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0],
        &[-1.0, 0.0, 0.0, 0.0],
    ])
}

/// Spin-flipped state `(σ_y ⊗ σ_y) ρ* (σ_y ⊗ σ_y)`, conjugating in the
/// `{ee, eg, ge, gg}` basis.
pub fn spin_flip(rho: &DensityMatrix) -> Result<ComplexMatrix> {
    require_two_qubits(rho)?;
    rho.matrix().conj().conjugate_by(&sigma_yy())
}

/// Wootters concurrence `max(0, λ̃₁ − λ̃₂ − λ̃₃ − λ̃₄)`.
///
/// The `λ̃_i` are the square roots of the spectrum of `ρ ρ̃`. Writing
/// `ρ = W W†` with `W = V √Λ`, they equal the singular values of
/// `Wᵀ (σ_y ⊗ σ_y) W`. This avoids square-rooting rounding noise in the
/// zero eigenvalues of rank-deficient states.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubits(rho)?;
    let eig = eig_hermitian(rho.matrix())?;
    let kept: Vec<usize> = (0..4).filter(|&k| eig.values[k] > RANK_TOL).collect();
    if kept.is_empty() {
        return Err(Error::NumericalFailure("state has no positive eigenvalue".into()));
    }
    let mut w = ComplexMatrix::zeros(4, kept.len());
    for (col, &k) in kept.iter().enumerate() {
        let scale = eig.values[k].sqrt();
        for row in 0..4 {
            w[(row, col)] = eig.vectors[(row, k)] * scale;
        }
    }
    let tau = w.transpose().matmul(&sigma_yy().matmul(&w)?)?;
    let mut sv = singular_values(&tau);
    sv.resize(4, 0.0);
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok((sv[0] - sv[1] - sv[2] - sv[3]).clamp(0.0, 1.0))
}

/// Populations and the two anti-diagonal coherences of an X state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct XStateElements {
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub d4: f64,
    /// `<ee|ρ|gg>`
    pub ad14: Complex64,
    /// `<eg|ρ|ge>`
    pub ad23: Complex64,
}

impl XStateElements {
    pub fn new(d: [f64; 4], ad14: Complex64, ad23: Complex64) -> Result<Self> {
        let sum: f64 = d.iter().sum();
        if (sum - 1.0).abs() > X_SUM_TOL {
            return Err(Error::NotDensityMatrix(format!("populations sum to {sum}")));
        }
        if let Some(v) = d.iter().find(|&&v| v < -X_NEG_TOL || !v.is_finite()) {
            return Err(Error::NotDensityMatrix(format!("population {v} is negative")));
        }
        if ad14.norm_sqr() > d[0] * d[3] + X_POS_TOL || ad23.norm_sqr() > d[1] * d[2] + X_POS_TOL {
            return Err(Error::NotDensityMatrix(
                "coherence exceeds the geometric mean of its populations".into(),
            ));
        }
        Ok(Self {
            d1: d[0],
            d2: d[1],
            d3: d[2],
            d4: d[3],
            ad14,
            ad23,
        })
    }

    /// Reads the X elements; fails with `Unsupported` if any entry off the
    /// diagonal and anti-diagonal exceeds `1e-12`.
    pub fn from_density(rho: &DensityMatrix) -> Result<Self> {
        require_two_qubits(rho)?;
        for i in 0..4 {
            for j in 0..4 {
                if i != j && i + j != 3 && rho.get(i, j).norm() > X_SHAPE_TOL {
                    return Err(Error::Unsupported(format!(
                        "state is not X-shaped (|rho[{i}][{j}]| = {:e})",
                        rho.get(i, j).norm()
                    )));
                }
            }
        }
        Self::new(
            [0, 1, 2, 3].map(|i| rho.get(i, i).re),
            rho.get(0, 3),
            rho.get(1, 2),
        )
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        let mut m = ComplexMatrix::from_real_diag(&[self.d1, self.d2, self.d3, self.d4]);
        m[(0, 3)] = self.ad14;
        m[(3, 0)] = self.ad14.conj();
        m[(1, 2)] = self.ad23;
        m[(2, 1)] = self.ad23.conj();
        DensityMatrix::new(m.with_dims(vec![2, 2])?)
    }
}

/// `2 max(0, |ρ₁₄| − √(ρ₂₂ρ₃₃), |ρ₂₃| − √(ρ₁₁ρ₄₄))`.
pub fn concurrence_x(x: &XStateElements) -> f64 {
    let outer = x.ad14.norm() - (x.d2.max(0.0) * x.d3.max(0.0)).sqrt();
    let inner = x.ad23.norm() - (x.d1.max(0.0) * x.d4.max(0.0)).sqrt();
    (2.0 * outer.max(inner).max(0.0)).min(1.0)
}

// Purity and concurrence of the Bell input under a number-state field with
// arguments a = gt f(n), b = gt f(n+1).
fn bell_number_laws(a: f64, b: f64) -> (f64, f64) {
    let (ca, cb) = (a.cos(), b.cos());
    let p = 0.5
        + 0.125 * (4.0 * ca * ca * cb * cb - 1.0)
        + (1.0 / 16.0) * ((4.0 * a).cos() + (4.0 * b).cos());
    let c = 2.0 * (0.5 * ((ca * cb).abs() - (a.sin() * b.sin()).abs())).max(0.0);
    (p, c)
}

/// Closed-form `(P, C)` for the Bell input and Tavis-Cummings coupling to
/// `|n>`.
pub fn tc_bell_number_laws(n: usize, gt: f64) -> (f64, f64) {
    bell_number_laws(gt * (n as f64).sqrt(), gt * ((n + 1) as f64).sqrt())
}

/// Closed-form `(P, C)` for the Bell input and Buck-Sukumar coupling to
/// `|n>`; π-periodic in `gt`.
pub fn bs_bell_number_laws(n: usize, gt: f64) -> (f64, f64) {
    bell_number_laws(gt * n as f64, gt * (n + 1) as f64)
}

fn check_purity_domain(p: f64) -> Result<()> {
    if p.is_finite() && (0.25 - PURITY_SLACK..=1.0 + PURITY_SLACK).contains(&p) {
        Ok(())
    } else {
        Err(Error::Domain(format!("purity {p} outside [1/4, 1]")))
    }
}

/// `C = (2P − 1)^{1/4}`, zero for `P < 1/2`.
pub fn homogenization_relation(p: f64) -> Result<f64> {
    check_purity_domain(p)?;
    Ok((2.0 * p - 1.0).max(0.0).powf(0.25).min(1.0))
}

/// `C = √(2P − 2(sin⁴φ + cos⁴φ))`, zero below the threshold purity.
pub fn dephasing_relation(p: f64, phi: f64) -> Result<f64> {
    check_purity_domain(p)?;
    Ok((2.0 * p - 2.0 * dephasing_floor(phi)).max(0.0).sqrt().min(1.0))
}

/// `sin⁴φ + cos⁴φ`: the purity at which dephasing removes all
/// concurrence of `sin φ |ee> + cos φ |gg>`.
pub fn dephasing_floor(phi: f64) -> f64 {
    let (s, c) = phi.sin_cos();
    s.powi(4) + c.powi(4)
}

/// `C = max(0, x |sin 2φ| e^{−Γ} − (1 − x)/2)`.
pub fn sb_concurrence_law(p: &WernerParams, gamma: f64) -> f64 {
    let x = p.x();
    (x * (2.0 * p.phi()).sin().abs() * (-gamma).exp() - 0.5 * (1.0 - x)).max(0.0)
}
