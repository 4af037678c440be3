//! Resonant interaction-picture propagators on qubit A ⊗ Fock space and
//! the interaction Hamiltonians they exponentiate.

use num_complex::Complex64;

use crate::qmath::{tensor, ComplexMatrix, I, ONE, ZERO};

/// Photon-number dependence of the Rabi frequency: `√k` for
/// Tavis-Cummings, `k` for Buck-Sukumar.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RabiProfile {
    SquareRoot,
    Linear,
}

impl RabiProfile {
    #[inline]
    pub fn rate(self, k: usize) -> f64 {
        match self {
            RabiProfile::SquareRoot => (k as f64).sqrt(),
            RabiProfile::Linear => k as f64,
        }
    }
}

/// Truncated Susskind-Glogower pair `(V, V†)` with `V = Σ_{n<cutoff} |n><n+1|`
/// on `cutoff + 1` levels.
pub fn susskind_glogower(cutoff: usize) -> (ComplexMatrix, ComplexMatrix) {
    let d = cutoff + 1;
    let mut v = ComplexMatrix::zeros(d, d);
    for n in 0..cutoff {
        v[(n, n + 1)] = ONE;
    }
    let vdag = v.adjoint();
    (v, vdag)
}

fn diag_fn(d: usize, f: impl Fn(usize) -> f64) -> ComplexMatrix {
    let values: Vec<f64> = (0..d).map(f).collect();
    ComplexMatrix::from_real_diag(&values)
}

fn block_propagator(profile: RabiProfile, gt: f64, cutoff: usize) -> ComplexMatrix {
    let d = cutoff + 1;
    let (v, vdag) = susskind_glogower(cutoff);
    // f(N+1) and f(N) evaluated on the number basis.
    let cos_up = diag_fn(d, |m| (gt * profile.rate(m + 1)).cos());
    let cos_n = diag_fn(d, |m| (gt * profile.rate(m)).cos());
    let sin_up = diag_fn(d, |m| (gt * profile.rate(m + 1)).sin());
    let sin_n = diag_fn(d, |m| (gt * profile.rate(m)).sin());
    let top_right = (&v * &sin_n).scale(-I);
    let bottom_left = (&vdag * &sin_up).scale(-I);

    let mut u = ComplexMatrix::zeros(2 * d, 2 * d);
    for i in 0..d {
        for j in 0..d {
            u[(i, j)] = cos_up[(i, j)];
            u[(i, d + j)] = top_right[(i, j)];
            u[(d + i, j)] = bottom_left[(i, j)];
            u[(d + i, d + j)] = cos_n[(i, j)];
        }
    }
    u.with_dims(vec![2, d]).expect("dims match by construction")
}

/// Tavis-Cummings propagator for the coupled qubit, on `A ⊗ F` with
/// `cutoff + 1` Fock levels. Index `a·(cutoff+1) + m`, `a = 0` for `e`.
pub fn tc_propagator(g: f64, t: f64, cutoff: usize) -> ComplexMatrix {
    block_propagator(RabiProfile::SquareRoot, g * t, cutoff)
}

/// Buck-Sukumar (intensity-dependent coupling) propagator, same layout as
/// [`tc_propagator`].
pub fn bs_propagator(g: f64, t: f64, cutoff: usize) -> ComplexMatrix {
    block_propagator(RabiProfile::Linear, g * t, cutoff)
}

pub(crate) fn propagator(profile: RabiProfile, gt: f64, cutoff: usize) -> ComplexMatrix {
    block_propagator(profile, gt, cutoff)
}

/// Truncated annihilation operator on `cutoff + 1` levels.
pub fn annihilation(cutoff: usize) -> ComplexMatrix {
    let d = cutoff + 1;
    let mut a = ComplexMatrix::zeros(d, d);
    for m in 0..cutoff {
        a[(m, m + 1)] = Complex64::new(((m + 1) as f64).sqrt(), 0.0);
    }
    a
}

fn raising() -> ComplexMatrix {
    let mut s = ComplexMatrix::zeros(2, 2);
    s[(0, 1)] = ONE;
    s
}

/// `g (a σ₊ + a† σ₋)` on `A ⊗ F`.
pub fn tc_hamiltonian(g: f64, cutoff: usize) -> ComplexMatrix {
    let a = annihilation(cutoff);
    interaction(g, &a)
}

/// `g (a √N σ₊ + √N a† σ₋)` on `A ⊗ F`.
pub fn bs_hamiltonian(g: f64, cutoff: usize) -> ComplexMatrix {
    let a = annihilation(cutoff);
    let sqrt_n = diag_fn(cutoff + 1, |m| (m as f64).sqrt());
    interaction(g, &(&a * &sqrt_n))
}

pub(crate) fn hamiltonian(profile: RabiProfile, cutoff: usize) -> ComplexMatrix {
    match profile {
        RabiProfile::SquareRoot => tc_hamiltonian(1.0, cutoff),
        RabiProfile::Linear => bs_hamiltonian(1.0, cutoff),
    }
}

// g (σ₊ ⊗ lower + σ₋ ⊗ lower†)
fn interaction(g: f64, lower: &ComplexMatrix) -> ComplexMatrix {
    let sp = raising();
    let h = &tensor(&sp, lower) + &tensor(&sp.adjoint(), &lower.adjoint());
    h.scale_real(g)
        .with_dims(vec![2, lower.rows()])
        .expect("dims match by construction")
}

/// Lifts an operator on `A ⊗ F` to `A ⊗ B ⊗ F` as `U ⊗ 1_B` in the
/// project ordering (index `(2a + b)·d + m`).
pub fn lift_to_abf(u_af: &ComplexMatrix) -> ComplexMatrix {
    let d = u_af.rows() / 2;
    let mut out = ComplexMatrix::zeros(4 * d, 4 * d);
    for a_out in 0..2 {
        for a_in in 0..2 {
            for m_out in 0..d {
                for m_in in 0..d {
                    let x = u_af[(a_out * d + m_out, a_in * d + m_in)];
                    if x == ZERO {
                        continue;
                    }
                    for b in 0..2 {
                        out[((2 * a_out + b) * d + m_out, (2 * a_in + b) * d + m_in)] = x;
                    }
                }
            }
        }
    }
    out.with_dims(vec![2, 2, d]).expect("dims match by construction")
}
