use num_complex::Complex64;

use super::{ComplexMatrix, ZERO};
use crate::{Error, Result};

/// Input Hermiticity slack accepted by the eigen-solvers, relative to
/// `max(1, max|m_ij|)`.
const EIG_HERMITIAN_TOL: f64 = 1e-10;
const MAX_SWEEPS: usize = 100;
const IMAG_TOL: f64 = 1e-8;
const NEGATIVE_SLACK: f64 = 1e-10;

/// Eigenvalues sorted in descending order with matching column eigenvectors.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V f(Λ) V†` for a complex function of the eigenvalues.
    pub fn apply(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let n = self.values.len();
        let fv: Vec<Complex64> = self.values.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = ZERO;
                for (k, &f) in fv.iter().enumerate() {
                    acc += self.vectors[(i, k)] * f * self.vectors[(j, k)].conj();
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    /// `exp(-i H t)` from the cached decomposition of `H`.
    pub fn exp_i(&self, t: f64) -> ComplexMatrix {
        self.apply(|l| Complex64::from_polar(1.0, -l * t))
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply(|l| Complex64::new(l, 0.0))
    }
}

fn require_square(m: &ComplexMatrix) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        })
    }
}

/// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<HermitianEigen> {
    require_square(m)?;
    let deviation = m.hermiticity_deviation();
    if deviation > EIG_HERMITIAN_TOL * m.max_abs().max(1.0) {
        return Err(Error::NotHermitian { deviation });
    }
    let n = m.rows();
    let mut a = m.clone();
    for i in 0..n {
        a[(i, i)].im = 0.0;
        for j in i + 1..n {
            let avg = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
    }
    let mut v = ComplexMatrix::identity(n);
    let thresh = f64::EPSILON * a.frobenius_norm();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= thresh {
                    continue;
                }
                rotated = true;
                let phase = apq / r;
                let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * r);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                rotate_columns(&mut a, p, q, c, s, phase);
                rotate_rows(&mut a, p, q, c, s, phase);
                rotate_columns(&mut v, p, q, c, s, phase);
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NumericalFailure(format!(
            "Jacobi eigensolver did not converge in {MAX_SWEEPS} sweeps"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            vectors[(row, col)] = v[(row, src)];
        }
    }
    Ok(HermitianEigen { values, vectors })
}

// Column update X <- X W for the unitary W with W_pp = c, W_pq = s,
// W_qp = -s e^{-iθ}, W_qq = c e^{-iθ}, where e^{iθ} = phase.
fn rotate_columns(x: &mut ComplexMatrix, p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
    let ph = phase.conj();
    for k in 0..x.rows() {
        let xp = x[(k, p)];
        let xq = x[(k, q)];
        x[(k, p)] = xp * c - ph * xq * s;
        x[(k, q)] = xp * s + ph * xq * c;
    }
}

// Row update X <- W† X for the same W.
fn rotate_rows(x: &mut ComplexMatrix, p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
    for k in 0..x.cols() {
        let xp = x[(p, k)];
        let xq = x[(q, k)];
        x[(p, k)] = xp * c - phase * xq * s;
        x[(q, k)] = xp * s + phase * xq * c;
    }
}

/// `exp(-i h t)` for Hermitian `h`, via eigendecomposition.
pub fn expm_i_hermitian(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    Ok(eig_hermitian(h)?.exp_i(t))
}

/// Square root of a positive semidefinite Hermitian matrix. Eigenvalues in
/// `[-1e-10, 0)` are treated as zero.
pub fn sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = eig_hermitian(m)?;
    if let Some(&min) = eig.values.last() {
        if min < -NEGATIVE_SLACK {
            return Err(Error::NumericalFailure(format!(
                "matrix square root of indefinite matrix (eigenvalue {min:e})"
            )));
        }
    }
    Ok(eig.apply(|l| Complex64::new(l.max(0.0).sqrt(), 0.0)))
}

fn clamp_and_sort(mut values: Vec<f64>) -> Result<Vec<f64>> {
    for v in values.iter_mut() {
        if *v < -NEGATIVE_SLACK {
            return Err(Error::NumericalFailure(format!(
                "eigenvalue {v:e} of a positive product is negative"
            )));
        }
        *v = v.max(0.0);
    }
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// Eigenvalues of a product `a b` of two positive semidefinite Hermitian
/// matrices, computed as the spectrum of the Hermitian sandwich
/// `√a b √a` (similar to `a b` up to zero eigenvalues of equal count).
pub fn eigvals_psd_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Vec<f64>> {
    let root = sqrt_psd(a)?;
    let sandwich = b.conjugate_by(&root)?;
    clamp_and_sort(eig_hermitian(&sandwich)?.values)
}

/// Eigenvalues of a general square matrix whose spectrum is known to be
/// real and nonnegative (such as `ρ ρ̃`). Uses a shifted complex QR
/// iteration on the Hessenberg form. Eigenvalues above `-1e-10` are
/// clamped to zero; an imaginary part above `1e-8` is a numerical failure.
pub fn eigvals_general_psd(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let eigs = eigvals_general(m)?;
    let scale = m.max_abs().max(1.0);
    if let Some(bad) = eigs.iter().find(|z| z.im.abs() > IMAG_TOL * scale) {
        return Err(Error::NumericalFailure(format!(
            "eigenvalue {bad} has a significant imaginary part"
        )));
    }
    clamp_and_sort(eigs.iter().map(|z| z.re).collect())
}

// Unitary Givens pair (c, s) with [c s; -s̄ c] [a; b] = [r; 0].
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let na = a.norm();
    let nb = b.norm();
    if nb == 0.0 {
        return (1.0, ZERO);
    }
    if na == 0.0 {
        return (0.0, b.conj() / nb);
    }
    let r = na.hypot(nb);
    (na / r, (a / na) * b.conj() / r)
}

/// All eigenvalues of a square complex matrix, unordered.
pub(crate) fn eigvals_general(m: &ComplexMatrix) -> Result<Vec<Complex64>> {
    require_square(m)?;
    let n = m.rows();
    let mut h = m.clone();

    // Hessenberg reduction by Givens similarity transforms.
    for j in 0..n.saturating_sub(2) {
        for i in j + 2..n {
            if h[(i, j)] == ZERO {
                continue;
            }
            let (c, s) = givens(h[(j + 1, j)], h[(i, j)]);
            apply_rows(&mut h, j + 1, i, c, s, 0, n);
            apply_cols(&mut h, j + 1, i, c, s, 0, n);
            h[(i, j)] = ZERO;
        }
    }

    let mut eigs = Vec::with_capacity(n);
    let mut hi = n;
    let mut iterations = 0usize;
    while hi > 0 {
        if hi == 1 {
            eigs.push(h[(0, 0)]);
            break;
        }
        // Deflate negligible subdiagonal entries.
        let mut lo = hi - 1;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let diag = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
            if sub <= f64::EPSILON * diag.max(f64::MIN_POSITIVE) || sub < 1e-300 {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi - 1 {
            eigs.push(h[(hi - 1, hi - 1)]);
            hi -= 1;
            iterations = 0;
            continue;
        }
        iterations += 1;
        if iterations > 60 * n {
            return Err(Error::NumericalFailure("QR iteration did not converge".into()));
        }

        // Wilkinson shift from the trailing 2x2 block, with an occasional
        // exceptional shift to break cycles.
        let a = h[(hi - 2, hi - 2)];
        let b = h[(hi - 2, hi - 1)];
        let c = h[(hi - 1, hi - 2)];
        let d = h[(hi - 1, hi - 1)];
        let mu = if iterations.is_multiple_of(11) {
            d + h[(hi - 1, hi - 2)].norm() * 0.75
        } else {
            let tr_half = (a + d) * 0.5;
            let disc = ((a - d) * 0.5 * ((a - d) * 0.5) + b * c).sqrt();
            let l1 = tr_half + disc;
            let l2 = tr_half - disc;
            if (l1 - d).norm() < (l2 - d).norm() {
                l1
            } else {
                l2
            }
        };

        for k in lo..hi {
            h[(k, k)] -= mu;
        }
        let mut rotations = Vec::with_capacity(hi - lo - 1);
        for k in lo..hi - 1 {
            let (cs, sn) = givens(h[(k, k)], h[(k + 1, k)]);
            apply_rows(&mut h, k, k + 1, cs, sn, lo, hi);
            h[(k + 1, k)] = ZERO;
            rotations.push((k, cs, sn));
        }
        for &(k, cs, sn) in &rotations {
            apply_cols(&mut h, k, k + 1, cs, sn, lo, (k + 2).min(hi));
        }
        for k in lo..hi {
            h[(k, k)] += mu;
        }
    }
    Ok(eigs)
}

// Rows i, k over columns [from, to): row_i <- c row_i + s row_k,
// row_k <- -s̄ row_i + c row_k.
fn apply_rows(h: &mut ComplexMatrix, i: usize, k: usize, c: f64, s: Complex64, from: usize, to: usize) {
    for j in from..to {
        let hi = h[(i, j)];
        let hk = h[(k, j)];
        h[(i, j)] = hi * c + s * hk;
        h[(k, j)] = -s.conj() * hi + hk * c;
    }
}

// Columns i, k over rows [from, to): multiply on the right by the adjoint
// of the rotation used in `apply_rows`.
fn apply_cols(h: &mut ComplexMatrix, i: usize, k: usize, c: f64, s: Complex64, from: usize, to: usize) {
    for r in from..to {
        let hi = h[(r, i)];
        let hk = h[(r, k)];
        h[(r, i)] = hi * c + s.conj() * hk;
        h[(r, k)] = -s * hi + hk * c;
    }
}

/// Singular values in descending order by one-sided (Hestenes) Jacobi.
/// Small singular values are resolved to roughly `eps * max σ` in
/// absolute terms, with no squaring of the spectrum.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let rows = m.rows();
    let cols = m.cols();
    // Work on columns; transpose wide matrices so the column count is small.
    let mut u = if cols > rows { m.adjoint() } else { m.clone() };
    let (n_rows, n_cols) = (u.rows(), u.cols());

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n_cols {
            for q in p + 1..n_cols {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = ZERO;
                for i in 0..n_rows {
                    let up = u[(i, p)];
                    let uq = u[(i, q)];
                    alpha += up.norm_sqr();
                    beta += uq.norm_sqr();
                    gamma += up.conj() * uq;
                }
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let tau = (beta - alpha) / (2.0 * g);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                rotate_columns(&mut u, p, q, c, t * c, phase);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sv: Vec<f64> = (0..n_cols)
        .map(|j| (0..n_rows).map(|i| u[(i, j)].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::{I, ONE};
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn random_hermitian(entries: &[f64], n: usize) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(n, n);
        let mut it = entries.iter().copied().cycle();
        for i in 0..n {
            m[(i, i)] = Complex64::new(it.next().unwrap(), 0.0);
            for j in i + 1..n {
                let z = Complex64::new(it.next().unwrap(), it.next().unwrap());
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        m
    }

    #[test]
    fn sigma_z_spectrum() {
        let eig = eig_hermitian(&ComplexMatrix::from_real_diag(&[1.0, -1.0])).unwrap();
        assert_eq!(eig.values, vec![1.0, -1.0]);
    }

    #[test]
    fn maximally_mixed_spectrum() {
        let eig = eig_hermitian(&ComplexMatrix::from_real_diag(&[0.25; 4])).unwrap();
        assert_eq!(eig.values, vec![0.25; 4]);
    }

    #[test]
    fn werner_spectrum() {
        // x = 0.48, φ = π/4: (1+3x)/4 once and (1-x)/4 three times.
        let x = 0.48;
        let w = (1.0 - x) / 4.0;
        let m = ComplexMatrix::from_real_rows(&[
            &[w + x / 2.0, 0.0, 0.0, x / 2.0],
            &[0.0, w, 0.0, 0.0],
            &[0.0, 0.0, w, 0.0],
            &[x / 2.0, 0.0, 0.0, w + x / 2.0],
        ]);
        let eig = eig_hermitian(&m).unwrap();
        let expected = [0.61, 0.13, 0.13, 0.13];
        for (got, want) in eig.values.iter().zip(expected) {
            assert!((got - want).abs() < 1e-14, "{got} vs {want}");
        }
    }

    #[test]
    fn non_hermitian_is_rejected() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[0.0, 1.0]]);
        assert!(matches!(eig_hermitian(&m), Err(Error::NotHermitian { .. })));
        let rect = ComplexMatrix::zeros(2, 3);
        assert!(matches!(eig_hermitian(&rect), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn exponential_of_zero_is_identity() {
        let u = expm_i_hermitian(&ComplexMatrix::zeros(3, 3), 2.5).unwrap();
        assert!(u.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-15);
    }

    #[test]
    fn rabi_flip() {
        let sx = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let u = expm_i_hermitian(&sx, FRAC_PI_2).unwrap();
        let expected = sx.scale(-I);
        assert!(u.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn one_excitation_block_rotation() {
        // g(aσ₊ + a†σ₋) on {|e,0>, |g,1>} is g σ_x.
        let g = 0.7;
        let h = ComplexMatrix::from_real_rows(&[&[0.0, g], &[g, 0.0]]);
        for t in [0.0, 0.3, 1.9, 4.4] {
            let u = expm_i_hermitian(&h, t).unwrap();
            let (c, s) = ((g * t).cos(), (g * t).sin());
            assert!((u[(0, 0)] - c).norm() < 1e-14);
            assert!((u[(1, 1)] - c).norm() < 1e-14);
            assert!((u[(0, 1)] + I * s).norm() < 1e-14);
            assert!((u[(1, 0)] + I * s).norm() < 1e-14);
        }
    }

    #[test]
    fn psd_product_trivial_cases() {
        let mixed = ComplexMatrix::from_real_diag(&[0.25; 4]);
        let vals = eigvals_general_psd(&(&mixed * &mixed)).unwrap();
        for v in vals {
            assert!((v - 1.0 / 16.0).abs() < 1e-15);
        }
        let sandwich = eigvals_psd_product(&mixed, &mixed).unwrap();
        for v in sandwich {
            assert!((v - 1.0 / 16.0).abs() < 1e-15);
        }

        // Bell state: spin flip leaves it invariant, so ρρ̃ = ρ².
        let bell = ComplexMatrix::from_real_rows(&[
            &[0.5, 0.0, 0.0, 0.5],
            &[0.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0],
            &[0.5, 0.0, 0.0, 0.5],
        ]);
        let vals = eigvals_general_psd(&(&bell * &bell)).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-14);
        assert!(vals[1..].iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn general_eigvals_reject_complex_spectrum() {
        let rotation = ComplexMatrix::from_real_rows(&[&[0.0, -1.0], &[1.0, 0.0]]);
        assert!(matches!(
            eigvals_general_psd(&rotation),
            Err(Error::NumericalFailure(_))
        ));
    }

    #[test]
    fn general_eigvals_of_triangular_matrix() {
        let mut m = ComplexMatrix::from_real_rows(&[
            &[3.0, 1.0, 2.0, 0.5],
            &[0.0, 1.0, 4.0, 1.0],
            &[0.0, 0.0, 2.0, 7.0],
            &[0.0, 0.0, 0.0, 0.25],
        ]);
        m[(0, 3)] = Complex64::new(0.5, 1.0);
        let vals = eigvals_general_psd(&m).unwrap();
        let expected = [3.0, 2.0, 1.0, 0.25];
        for (g, w) in vals.iter().zip(expected) {
            assert!((g - w).abs() < 1e-12);
        }
    }

    #[test]
    fn singular_values_of_rank_one() {
        let u = [Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)];
        let v = [ONE, ZERO, ONE];
        let m = ComplexMatrix::outer(&u, &v).scale_real(2.0);
        let sv = singular_values(&m);
        assert!((sv[0] - 2.0 * 2f64.sqrt()).abs() < 1e-14);
        assert!(sv[1].abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn hermitian_reconstruction(entries in prop::collection::vec(-1.0f64..1.0, 40), n in 2usize..7) {
            let m = random_hermitian(&entries, n);
            let eig = eig_hermitian(&m).unwrap();
            prop_assert!(eig.reconstruct().max_abs_diff(&m) < 1e-12);
            prop_assert!(eig.values.windows(2).all(|w| w[0] >= w[1]));
            let vvh = &eig.vectors * &eig.vectors.adjoint();
            prop_assert!(vvh.max_abs_diff(&ComplexMatrix::identity(n)) < 1e-12);
        }

        #[test]
        fn exponential_is_unitary(entries in prop::collection::vec(-2.0f64..2.0, 40), n in 2usize..7, t in -5.0f64..5.0) {
            let u = expm_i_hermitian(&random_hermitian(&entries, n), t).unwrap();
            let uu = &u.adjoint() * &u;
            prop_assert!(uu.max_abs_diff(&ComplexMatrix::identity(n)) < 1e-9);
        }

        #[test]
        fn singular_values_match_hermitian_route(entries in prop::collection::vec(-1.0f64..1.0, 32)) {
            let mut m = ComplexMatrix::zeros(4, 4);
            for (k, pair) in entries.chunks(2).enumerate() {
                m[(k / 4, k % 4)] = Complex64::new(pair[0], pair[1]);
            }
            let sv = singular_values(&m);
            let gram = eig_hermitian(&(&m.adjoint() * &m)).unwrap().values;
            for (s, g) in sv.iter().zip(gram) {
                prop_assert!((s * s - g).abs() < 1e-12);
            }
        }
    }
}
