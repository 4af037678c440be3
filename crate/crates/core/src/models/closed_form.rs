//! Reduced two-qubit states written directly as sums over Fock amplitudes,
//! without building the qubit-field state.

use num_complex::Complex64;

use super::propagators::RabiProfile;
use crate::qmath::{ComplexMatrix, DensityMatrix, I, ZERO};
use crate::states::{coherent_amplitudes, FieldSpec, WernerParams};
use crate::{Error, Result};

fn x_state(d: [f64; 4], r14: Complex64) -> Result<DensityMatrix> {
    let mut m = ComplexMatrix::from_real_diag(&d);
    m[(0, 3)] = r14;
    m[(3, 0)] = r14.conj();
    DensityMatrix::new(m.with_dims(vec![2, 2])?)
}

/// Tavis-Cummings reduced state for a Werner-like input and field `|n>`.
/// The X shape is preserved.
pub fn tc_number_reduced(p: &WernerParams, n: usize, gt: f64) -> Result<DensityMatrix> {
    number_reduced(RabiProfile::SquareRoot, p, n, gt)
}

fn number_reduced(profile: RabiProfile, p: &WernerParams, n: usize, gt: f64) -> Result<DensityMatrix> {
    let (x, phi) = (p.x(), p.phi());
    let w = (1.0 - x) / 4.0;
    let (s_phi, c_phi) = phi.sin_cos();
    let up = w + x * s_phi * s_phi;
    let down = w + x * c_phi * c_phi;
    let (sa, ca) = (gt * profile.rate(n)).sin_cos();
    let (sb, cb) = (gt * profile.rate(n + 1)).sin_cos();
    x_state(
        [
            up * cb * cb + w * sa * sa,
            down * sa * sa + w * cb * cb,
            up * sb * sb + w * ca * ca,
            down * ca * ca + w * sb * sb,
        ],
        Complex64::new(x * s_phi * c_phi * cb * ca, 0.0),
    )
}

fn normalized_amplitudes(alpha: Complex64, cutoff: usize) -> Result<Vec<Complex64>> {
    let mut amps = coherent_amplitudes(alpha, cutoff)?;
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for a in amps.iter_mut() {
        *a /= norm;
    }
    Ok(amps)
}

/// Tavis-Cummings reduced state for the Bell input `(|ee> + |gg>)/√2` and a
/// coherent field, from the ten independent element sums truncated at
/// `cutoff` (`0` selects the default cutoff). The truncated amplitudes are
/// renormalized.
pub fn tc_coherent_reduced(alpha: Complex64, cutoff: usize, gt: f64) -> Result<DensityMatrix> {
    let c = normalized_amplitudes(alpha, cutoff)?;
    let k = c.len();
    let amp = |m: usize| if m < k { c[m] } else { ZERO };
    let cs = |m: usize| (gt * (m as f64).sqrt()).cos();
    let sn = |m: usize| (gt * (m as f64).sqrt()).sin();

    let mut d = [0.0; 4];
    let mut r12 = ZERO;
    let mut r13 = ZERO;
    let mut r14 = ZERO;
    let mut r23 = ZERO;
    let mut r24 = ZERO;
    let mut r34 = ZERO;
    for (m, &cm) in c.iter().enumerate().take(k) {
        let w = cm.norm_sqr();
        let (c0, c1, c2) = (cs(m), cs(m + 1), cs(m + 2));
        let (s0, s1, s2) = (sn(m), sn(m + 1), sn(m + 2));
        d[0] += w * c1 * c1;
        d[1] += w * s0 * s0;
        d[2] += w * s1 * s1;
        d[3] += w * c0 * c0;
        let double = (2.0 * gt * ((m + 1) as f64).sqrt()).sin();
        let next = amp(m + 1);
        r12 += next.conj() * cm * double;
        r13 += next * cm.conj() * s1 * c2;
        r14 += w * c0 * c1;
        r23 += cm.conj() * amp(m + 2) * s1 * s2;
        r24 += cm.conj() * next * s1 * c0;
        r34 += next.conj() * cm * double;
    }
    let mut rho = ComplexMatrix::from_real_diag(&d.map(|v| 0.5 * v));
    let upper = [
        (0, 1, r12 * I * 0.25),
        (0, 2, r13 * I * 0.5),
        (0, 3, Complex64::new(0.5 * r14.re, 0.0)),
        (1, 2, r23 * 0.5),
        (1, 3, r24 * (-I) * 0.5),
        (2, 3, r34 * (-I) * 0.25),
    ];
    for (i, j, z) in upper {
        rho[(i, j)] = z;
        rho[(j, i)] = z.conj();
    }
    DensityMatrix::new(rho.with_dims(vec![2, 2])?)
}

/// Buck-Sukumar reduced state for a Werner-like input and a number or
/// coherent field.
pub fn bs_reduced(p: &WernerParams, field: &FieldSpec, gt: f64) -> Result<DensityMatrix> {
    match field {
        FieldSpec::Fock { n } => number_reduced(RabiProfile::Linear, p, *n, gt),
        FieldSpec::Coherent { alpha, cutoff } => {
            let amps = normalized_amplitudes(*alpha, *cutoff)?;
            let mut rho = ComplexMatrix::zeros(4, 4);
            for (weight, state) in werner_branches(p) {
                if weight > 0.0 {
                    accumulate_branch(&mut rho, RabiProfile::Linear, weight, &state, &amps, gt);
                }
            }
            DensityMatrix::new(rho.with_dims(vec![2, 2])?)
        }
        FieldSpec::MultimodeVacuum { .. } => Err(Error::Config(
            "Buck-Sukumar dynamics needs a number or coherent field".into(),
        )),
    }
}

// Spectral decomposition of the Werner-like state.
fn werner_branches(p: &WernerParams) -> [(f64, [Complex64; 4]); 4] {
    let w = (1.0 - p.x()) / 4.0;
    let (s, c) = p.phi().sin_cos();
    let re = |v: f64| Complex64::new(v, 0.0);
    let one = re(1.0);
    [
        (w + p.x(), [re(s), ZERO, ZERO, re(c)]),
        (w, [re(c), ZERO, ZERO, re(-s)]),
        (w, [ZERO, one, ZERO, ZERO]),
        (w, [ZERO, ZERO, one, ZERO]),
    ]
}

// Adds `weight · tr_F |Ψ(t)><Ψ(t)|` for `|Ψ(0)> = |state> ⊗ Σ C_k |k>`,
// using the closed-form branch amplitudes
//   A_eB(k) = a_eB C_k c_{k+1} − i a_gB C_{k+1} s_{k+1}
//   A_gB(k) = a_gB C_k c_k − i a_eB C_{k−1} s_k.
fn accumulate_branch(
    rho: &mut ComplexMatrix,
    profile: RabiProfile,
    weight: f64,
    state: &[Complex64; 4],
    amps: &[Complex64],
    gt: f64,
) {
    let k_max = amps.len();
    let amp = |k: isize| {
        if k >= 0 && (k as usize) < k_max {
            amps[k as usize]
        } else {
            ZERO
        }
    };
    let trig = |k: usize| (gt * profile.rate(k)).sin_cos();
    for k in 0..=k_max {
        let (s_k, c_k) = trig(k);
        let (s_k1, c_k1) = trig(k + 1);
        let ki = k as isize;
        let mut a = [ZERO; 4];
        for b in 0..2 {
            let (a_e, a_g) = (state[b], state[2 + b]);
            a[b] = a_e * amp(ki) * c_k1 - I * a_g * amp(ki + 1) * s_k1;
            a[2 + b] = a_g * amp(ki) * c_k - I * a_e * amp(ki - 1) * s_k;
        }
        for i in 0..4 {
            if a[i] == ZERO {
                continue;
            }
            for j in 0..4 {
                rho[(i, j)] += a[i] * a[j].conj() * weight;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::werner_like;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};

    #[test]
    fn tc_number_identity_at_zero() {
        for (x, phi) in [(1.0, FRAC_PI_4), (0.48, 0.3), (0.1, 1.2)] {
            let p = WernerParams::new(x, phi).unwrap();
            for n in [0, 3] {
                let rho = tc_number_reduced(&p, n, 0.0).unwrap();
                assert!(rho.matrix().max_abs_diff(werner_like(&p).unwrap().matrix()) < 1e-15);
            }
        }
    }

    #[test]
    fn tc_vacuum_at_third_pi() {
        let rho = tc_number_reduced(&WernerParams::bell(), 0, FRAC_PI_3).unwrap();
        let d: Vec<f64> = (0..4).map(|i| rho.get(i, i).re).collect();
        let expected = [0.125, 0.0, 0.375, 0.5];
        for (a, b) in d.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!((rho.get(0, 3).re - 0.25).abs() < 1e-15);
    }

    #[test]
    fn tc_coherent_starts_at_bell() {
        let rho = tc_coherent_reduced(Complex64::new(15f64.sqrt(), 0.0), 0, 0.0).unwrap();
        let bell = werner_like(&WernerParams::bell()).unwrap();
        assert!(rho.matrix().max_abs_diff(bell.matrix()) < 1e-14);
    }

    #[test]
    fn tc_coherent_vacuum_reduces_to_number_state() {
        for gt in [0.3, 1.1, FRAC_PI_2, 4.0] {
            let a = tc_coherent_reduced(ZERO, 3, gt).unwrap();
            let b = tc_number_reduced(&WernerParams::bell(), 0, gt).unwrap();
            assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-15);
        }
    }

    #[test]
    fn bs_fock_period() {
        let p = WernerParams::bell();
        let field = FieldSpec::Fock { n: 10 };
        let start = bs_reduced(&p, &field, 0.0).unwrap();
        // After π only the sign of the coherence differs; after 2π the
        // state itself returns.
        let half = bs_reduced(&p, &field, PI).unwrap();
        for i in 0..4 {
            assert!((half.get(i, i) - start.get(i, i)).norm() < 1e-12);
        }
        assert!((half.get(0, 3) + start.get(0, 3)).norm() < 1e-12);
        let full = bs_reduced(&p, &field, 2.0 * PI).unwrap();
        assert!(start.matrix().max_abs_diff(full.matrix()) < 1e-12);
    }

    #[test]
    fn bs_coherent_branches_match_number_formula_for_vacuum() {
        let p = WernerParams::new(0.7, 0.4).unwrap();
        let coherent = FieldSpec::Coherent { alpha: ZERO, cutoff: 2 };
        for gt in [0.2, 1.3, 2.9] {
            let a = bs_reduced(&p, &coherent, gt).unwrap();
            let b = bs_reduced(&p, &FieldSpec::Fock { n: 0 }, gt).unwrap();
            assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-15);
        }
    }

    #[test]
    fn bs_rejects_multimode_field() {
        let field = FieldSpec::MultimodeVacuum {
            couplings: crate::states::CouplingSpec::identical(2, 1.0, 1.0).unwrap(),
        };
        assert!(matches!(bs_reduced(&WernerParams::bell(), &field, 1.0), Err(Error::Config(_))));
    }
}
