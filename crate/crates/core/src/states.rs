//! Initial states: Werner-like two-qubit states and the field states
//! (number, coherent, multimode vacuum).

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::qmath::{ComplexMatrix, DensityMatrix, ZERO};
use crate::{Error, Result};

/// Largest coherent-state norm deficit tolerated after truncation.
pub const COHERENT_NORM_TOL: f64 = 1e-10;

// Slack for angles parsed from decimal input such as 1.5707963268.
const ANGLE_SLACK: f64 = 1e-9;

/// Parameters `(x, φ)` of `(1-x)/4 · 1 + x |ψ><ψ|` with
/// `|ψ> = sin φ |ee> + cos φ |gg>`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawWerner")]
pub struct WernerParams {
    x: f64,
    phi: f64,
}

#[derive(Deserialize)]
struct RawWerner {
    x: f64,
    phi: f64,
}

impl TryFrom<RawWerner> for WernerParams {
    type Error = Error;

    fn try_from(raw: RawWerner) -> Result<Self> {
        Self::new(raw.x, raw.phi)
    }
}

impl WernerParams {
    /// `x ∈ [0, 1]`, `φ ∈ [0, π/2]`. Angles outside the quarter turn are
    /// rejected rather than wrapped.
    pub fn new(x: f64, phi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::Domain(format!("purity parameter x = {x} outside [0, 1]")));
        }
        if !(phi.is_finite() && (-ANGLE_SLACK..=FRAC_PI_2 + ANGLE_SLACK).contains(&phi)) {
            return Err(Error::Domain(format!("angle phi = {phi} outside [0, pi/2]")));
        }
        Ok(Self {
            x,
            phi: phi.clamp(0.0, FRAC_PI_2),
        })
    }

    /// The Bell state `(|ee> + |gg>)/√2`.
    pub fn bell() -> Self {
        Self {
            x: 1.0,
            phi: std::f64::consts::FRAC_PI_4,
        }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `true` for `x = 1, φ = π/4` up to `1e-12`.
    pub fn is_bell(&self) -> bool {
        (self.x - 1.0).abs() < 1e-12 && (self.phi - std::f64::consts::FRAC_PI_4).abs() < 1e-12
    }

    /// Amplitudes of `|ψ>` in `{ee, eg, ge, gg}`.
    pub fn pure_amplitudes(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.phi.sin(), 0.0),
            ZERO,
            ZERO,
            Complex64::new(self.phi.cos(), 0.0),
        ]
    }
}

/// Couplings `g_j` and frequencies `ω_j` of `M` oscillator modes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCoupling")]
pub struct CouplingSpec {
    g: Vec<f64>,
    omega: Vec<f64>,
}

#[derive(Deserialize)]
struct RawCoupling {
    g: Vec<f64>,
    omega: Vec<f64>,
}

impl TryFrom<RawCoupling> for CouplingSpec {
    type Error = Error;

    fn try_from(raw: RawCoupling) -> Result<Self> {
        Self::new(raw.g, raw.omega)
    }
}

impl CouplingSpec {
    pub fn new(g: Vec<f64>, omega: Vec<f64>) -> Result<Self> {
        if g.is_empty() || g.len() != omega.len() {
            return Err(Error::Domain(format!(
                "need equal, nonzero numbers of couplings and frequencies (got {} and {})",
                g.len(),
                omega.len()
            )));
        }
        if let Some(w) = omega.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::Domain(format!("mode frequency {w} must be positive")));
        }
        if let Some(c) = g.iter().find(|c| !c.is_finite()) {
            return Err(Error::Domain(format!("coupling {c} is not finite")));
        }
        Ok(Self { g, omega })
    }

    /// `M` identical modes.
    pub fn identical(modes: usize, g: f64, omega: f64) -> Result<Self> {
        Self::new(vec![g; modes], vec![omega; modes])
    }

    pub fn g(&self) -> &[f64] {
        &self.g
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn modes(&self) -> usize {
        self.g.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.g.iter().copied().zip(self.omega.iter().copied())
    }
}

/// Initial environment state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum FieldSpec {
    /// Number state `|n>`.
    Fock { n: usize },
    /// Coherent state `|α>`; `cutoff = 0` selects [`default_cutoff`].
    Coherent { alpha: Complex64, cutoff: usize },
    /// All oscillators of a multimode environment in their ground state.
    MultimodeVacuum { couplings: CouplingSpec },
}

impl FieldSpec {
    /// Coherent state with real amplitude `√n̄` and automatic cutoff.
    pub fn coherent_mean(mean_photons: f64) -> Self {
        FieldSpec::Coherent {
            alpha: Complex64::new(mean_photons.sqrt(), 0.0),
            cutoff: 0,
        }
    }

    /// Cutoff actually used for a coherent state.
    pub fn effective_cutoff(&self) -> Option<usize> {
        match self {
            FieldSpec::Coherent { alpha, cutoff } => Some(if *cutoff == 0 {
                default_cutoff(*alpha)
            } else {
                *cutoff
            }),
            _ => None,
        }
    }
}

/// The Werner-like two-qubit state as a 4x4 X-shaped density matrix.
pub fn werner_like(p: &WernerParams) -> Result<DensityMatrix> {
    let p = WernerParams::new(p.x, p.phi)?;
    let (s, c) = p.phi.sin_cos();
    let w = (1.0 - p.x) / 4.0;
    let m = ComplexMatrix::from_real_rows(&[
        &[w + p.x * s * s, 0.0, 0.0, p.x * s * c],
        &[0.0, w, 0.0, 0.0],
        &[0.0, 0.0, w, 0.0],
        &[p.x * s * c, 0.0, 0.0, w + p.x * c * c],
    ])
    .with_dims(vec![2, 2])?;
    DensityMatrix::new(m)
}

/// `⌈|α|² + 10|α| + 20⌉`.
pub fn default_cutoff(alpha: Complex64) -> usize {
    let mean = alpha.norm_sqr();
    (mean + 10.0 * mean.sqrt() + 20.0).ceil() as usize
}

/// Fock amplitudes `C_m = e^{-|α|²/2} α^m / √m!` for `m = 0..=cutoff`,
/// generated by the recurrence `C_{m+1} = C_m α / √(m+1)`.
///
/// `cutoff = 0` selects [`default_cutoff`]. Fails if the retained norm
/// falls short of one by more than [`COHERENT_NORM_TOL`].
pub fn coherent_amplitudes(alpha: Complex64, cutoff: usize) -> Result<Vec<Complex64>> {
    if !(alpha.re.is_finite() && alpha.im.is_finite()) {
        return Err(Error::Domain(format!("coherent amplitude {alpha} is not finite")));
    }
    let cutoff = if cutoff == 0 { default_cutoff(alpha) } else { cutoff };
    let mut amps = Vec::with_capacity(cutoff + 1);
    let mut c = Complex64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    amps.push(c);
    for m in 0..cutoff {
        c = c * alpha / ((m + 1) as f64).sqrt();
        amps.push(c);
    }
    let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
    let deficit = 1.0 - norm;
    if deficit > COHERENT_NORM_TOL {
        return Err(Error::Truncation {
            cutoff,
            deficit,
            suggested: default_cutoff(alpha).max(cutoff + 1),
        });
    }
    Ok(amps)
}

/// Normalized field amplitudes for a single-mode [`FieldSpec`], padded with
/// zeros to `dim` levels.
pub(crate) fn field_vector(field: &FieldSpec, dim: usize) -> Result<Vec<Complex64>> {
    let mut v = vec![ZERO; dim];
    match field {
        FieldSpec::Fock { n } => {
            if *n >= dim {
                return Err(Error::Dimension(format!("Fock level {n} beyond {dim} levels")));
            }
            v[*n] = Complex64::new(1.0, 0.0);
        }
        FieldSpec::Coherent { alpha, cutoff } => {
            let amps = coherent_amplitudes(*alpha, *cutoff)?;
            if amps.len() > dim {
                return Err(Error::Dimension(format!(
                    "{} coherent amplitudes do not fit in {dim} levels",
                    amps.len()
                )));
            }
            // Condition on the retained subspace so traces stay exactly one.
            let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            for (slot, a) in v.iter_mut().zip(amps) {
                *slot = a / norm;
            }
        }
        FieldSpec::MultimodeVacuum { .. } => {
            return Err(Error::Unsupported(
                "multimode vacuum has no single-mode state vector".into(),
            ))
        }
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{concurrence, purity};
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn bell_limit() {
        let rho = werner_like(&WernerParams::new(1.0, FRAC_PI_4).unwrap()).unwrap();
        let expected = ComplexMatrix::from_real_rows(&[
            &[0.5, 0.0, 0.0, 0.5],
            &[0.0; 4],
            &[0.0; 4],
            &[0.5, 0.0, 0.0, 0.5],
        ]);
        assert!(rho.matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn x_zero_is_maximally_mixed() {
        for phi in [0.0, 0.4, FRAC_PI_2] {
            let rho = werner_like(&WernerParams::new(0.0, phi).unwrap()).unwrap();
            assert!(rho.matrix().max_abs_diff(&ComplexMatrix::from_real_diag(&[0.25; 4])) < 1e-16);
        }
    }

    #[test]
    fn fig1b_setting() {
        let rho = werner_like(&WernerParams::new(0.48, FRAC_PI_4).unwrap()).unwrap();
        assert!((purity(&rho) - 0.4228).abs() < 1e-12);
        assert!((concurrence(&rho).unwrap() - 0.22).abs() < 1e-12);
    }

    #[test]
    fn out_of_range_parameters() {
        assert!(matches!(WernerParams::new(1.2, 0.3), Err(Error::Domain(_))));
        assert!(matches!(WernerParams::new(-0.1, 0.3), Err(Error::Domain(_))));
        assert!(matches!(WernerParams::new(0.5, 2.0), Err(Error::Domain(_))));
        assert!(matches!(WernerParams::new(0.5, -0.5), Err(Error::Domain(_))));
        assert!(matches!(WernerParams::new(0.5, f64::NAN), Err(Error::Domain(_))));
    }

    #[test]
    fn werner_json_is_validated() {
        let ok: WernerParams = serde_json::from_str(r#"{"x":0.5,"phi":0.2}"#).unwrap();
        assert_eq!((ok.x(), ok.phi()), (0.5, 0.2));
        assert!(serde_json::from_str::<WernerParams>(r#"{"x":1.5,"phi":0.2}"#).is_err());
        assert!(serde_json::from_str::<CouplingSpec>(r#"{"g":[1.0],"omega":[0.0]}"#).is_err());
    }

    #[test]
    fn vacuum_amplitudes() {
        let amps = coherent_amplitudes(ZERO, 5).unwrap();
        assert_eq!(amps[0], Complex64::new(1.0, 0.0));
        assert!(amps[1..].iter().all(|z| *z == ZERO));
    }

    #[test]
    fn fig2_mean_photon_number() {
        let amps = coherent_amplitudes(Complex64::new(15f64.sqrt(), 0.0), 60).unwrap();
        let mean: f64 = amps.iter().enumerate().map(|(m, c)| m as f64 * c.norm_sqr()).sum();
        assert!((mean - 15.0).abs() < 1e-8);
    }

    #[test]
    fn poisson_mode_is_doubled_at_integer_mean() {
        let amps = coherent_amplitudes(Complex64::new(10f64.sqrt(), 0.0), 0).unwrap();
        let w: Vec<f64> = amps.iter().map(|c| c.norm_sqr()).collect();
        assert!((w[9] - w[10]).abs() < 1e-15);
        let max = w.iter().cloned().fold(0.0, f64::max);
        assert!((max - w[10]).abs() < 1e-15);
        assert!(w.iter().enumerate().all(|(m, &v)| m == 9 || m == 10 || v < w[10]));
    }

    #[test]
    fn default_cutoff_formula() {
        assert_eq!(default_cutoff(ZERO), 20);
        assert_eq!(default_cutoff(Complex64::new(15f64.sqrt(), 0.0)), 74);
        assert_eq!(default_cutoff(Complex64::new(10.0, 0.0)), 220);
    }

    #[test]
    fn short_cutoff_reports_truncation() {
        let err = coherent_amplitudes(Complex64::new(4.0, 0.0), 10).unwrap_err();
        match err {
            Error::Truncation { cutoff, suggested, .. } => {
                assert_eq!(cutoff, 10);
                assert_eq!(suggested, default_cutoff(Complex64::new(4.0, 0.0)));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn coupling_spec_validation() {
        assert!(CouplingSpec::new(vec![], vec![]).is_err());
        assert!(CouplingSpec::new(vec![1.0], vec![1.0, 2.0]).is_err());
        assert!(CouplingSpec::new(vec![1.0], vec![0.0]).is_err());
        assert_eq!(CouplingSpec::identical(3, 0.5, 1.0).unwrap().modes(), 3);
    }

    #[test]
    fn werner_grid_is_valid_x_state() {
        for i in 0..50 {
            for j in 0..50 {
                let x = i as f64 / 49.0;
                let phi = FRAC_PI_2 * j as f64 / 49.0;
                let rho = werner_like(&WernerParams::new(x, phi).unwrap()).unwrap();
                for r in 0..4 {
                    for c in 0..4 {
                        let on_x = r == c || r + c == 3;
                        let off_antidiag = (r, c) == (1, 2) || (r, c) == (2, 1);
                        if !on_x || off_antidiag {
                            assert_eq!(rho.get(r, c), ZERO);
                        }
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn coherent_norm_and_mean(re in -14.0f64..14.0, im in -14.0f64..14.0) {
            let alpha = Complex64::new(re, im);
            prop_assume!(alpha.norm_sqr() <= 200.0);
            let amps = coherent_amplitudes(alpha, 0).unwrap();
            let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
            prop_assert!((1.0 - 1e-10..=1.0 + 1e-12).contains(&norm));
            let mean: f64 = amps.iter().enumerate().map(|(m, c)| m as f64 * c.norm_sqr()).sum();
            prop_assert!((mean - alpha.norm_sqr()).abs() < 1e-8);
        }
    }
}
