//! Dense complex linear algebra sized for two qubits plus a truncated
//! Fock space: construction, Kronecker products, partial traces and the
//! Hermitian / small general eigenvalue problems.

mod eigen;

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::{Error, Result};

pub use eigen::{
    eig_hermitian, eigvals_general_psd, eigvals_psd_product, expm_i_hermitian, singular_values,
    sqrt_psd, HermitianEigen,
};

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

/// Tolerances attached to the [`DensityMatrix`] contract.
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const POSITIVITY_TOL: f64 = 1e-10;

/// Row-major dense complex matrix.
///
/// `dims` records how the row space factorizes into subsystems; the
/// product of `dims` always equals `rows`. A freshly built matrix is a
/// single subsystem, and [`tensor`] concatenates the factor lists.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
    dims: Vec<usize>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
            dims: vec![rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension("matrix must be at least 1x1".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries cannot fill a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self {
            rows,
            cols,
            data,
            dims: vec![rows],
        })
    }

    /// Builds a matrix from real row slices. Panics on ragged input.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        let m = rows[0].len();
        let mut out = Self::zeros(n, m);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), m, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                out[(i, j)] = Complex64::new(v, 0.0);
            }
        }
        out
    }

    pub fn from_diag(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// Outer product `|u><v|`.
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        let mut m = Self::zeros(u.len(), v.len());
        for (i, &ui) in u.iter().enumerate() {
            for (j, &vj) in v.iter().enumerate() {
                m[(i, j)] = ui * vj.conj();
            }
        }
        m
    }

    /// Replaces the subsystem factorization of the row space.
    pub fn with_dims(mut self, dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::Dimension("subsystem dimensions must be positive".into()));
        }
        let product: usize = dims.iter().product();
        if product != self.rows {
            return Err(Error::Dimension(format!(
                "subsystem dimensions {dims:?} multiply to {product}, matrix has {} rows",
                self.rows
            )));
        }
        self.dims = dims;
        Ok(self)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        if self.is_square() {
            out.dims = self.dims.clone();
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = self.adjoint();
        out.data.iter_mut().for_each(|z| *z = z.conj());
        out
    }

    pub fn conj(&self) -> Self {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|z| *z = z.conj());
        out
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|z| *z *= factor);
        out
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|z| *z *= factor);
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |m - m†|` entrywise; infinite for non-square input.
    pub fn hermiticity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut dev = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// Matrix product. Zero entries of `self` are skipped, which makes
    /// products with the sparse propagators cost O(nnz * n).
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let b_row = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        if self.rows == other.cols && self.dims.iter().product::<usize>() == self.rows {
            out.dims = self.dims.clone();
        }
        Ok(out)
    }

    /// `u * self * u†`.
    pub fn conjugate_by(&self, u: &Self) -> Result<Self> {
        let left = u.matmul(self)?;
        // (u * left†)† = left * u†
        let mut out = u.matmul(&left.adjoint())?.adjoint();
        out.dims = self.dims.clone();
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Kronecker product; see [`tensor`].
    pub fn kron(&self, other: &Self) -> Self {
        tensor(self, other)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        out.data.iter_mut().zip(&rhs.data).for_each(|(a, b)| *a += b);
        out
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        out.data.iter_mut().zip(&rhs.data).for_each(|(a, b)| *a -= b);
        out
    }
}

/// Panics on a shape mismatch; use [`ComplexMatrix::matmul`] for a checked product.
impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix shapes do not match")
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} dims={:?}", self.rows, self.cols, self.dims)?;
        for i in 0..self.rows {
            let row: Vec<String> = self
                .row(i)
                .iter()
                .map(|z| format!("{:+.4}{:+.4}i", z.re, z.im))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Kronecker product `a ⊗ b`. Shapes multiply and the subsystem lists
/// concatenate.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut out = ComplexMatrix::zeros(rows, cols);
    for ai in 0..a.rows {
        for aj in 0..a.cols {
            let x = a[(ai, aj)];
            if x == ZERO {
                continue;
            }
            for bi in 0..b.rows {
                for bj in 0..b.cols {
                    out[(ai * b.rows + bi, aj * b.cols + bj)] = x * b[(bi, bj)];
                }
            }
        }
    }
    out.dims = a.dims.iter().chain(&b.dims).copied().collect();
    out
}

/// Traces out every subsystem not listed in `keep`.
///
/// `keep` must be a nonempty proper subset of the subsystem indices of
/// `m.dims()`. The kept factors stay in their original order.
pub fn partial_trace_matrix(m: &ComplexMatrix, keep: &[usize]) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let dims = m.dims();
    if dims.iter().product::<usize>() != m.rows {
        return Err(Error::Dimension("subsystem metadata inconsistent with matrix size".into()));
    }
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    if keep_sorted.len() != keep.len() {
        return Err(Error::Dimension(format!("duplicate subsystem index in {keep:?}")));
    }
    if keep_sorted.is_empty() || keep_sorted.len() >= dims.len() {
        return Err(Error::Dimension(format!(
            "keep set {keep:?} must be a nonempty proper subset of {} subsystems",
            dims.len()
        )));
    }
    if let Some(&bad) = keep_sorted.iter().find(|&&k| k >= dims.len()) {
        return Err(Error::Dimension(format!(
            "subsystem index {bad} out of range for {} subsystems",
            dims.len()
        )));
    }

    let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep_sorted.contains(k)).collect();
    let kept_dims: Vec<usize> = keep_sorted.iter().map(|&k| dims[k]).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&k| dims[k]).collect();
    let kept_size: usize = kept_dims.iter().product();
    let traced_size: usize = traced_dims.iter().product();

    // Row-major strides of the full index.
    let mut strides = vec![1usize; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }
    let offsets = |sub: &[usize], sub_dims: &[usize], size: usize| -> Vec<usize> {
        (0..size)
            .map(|mut flat| {
                let mut offset = 0;
                for pos in (0..sub.len()).rev() {
                    let digit = flat % sub_dims[pos];
                    flat /= sub_dims[pos];
                    offset += digit * strides[sub[pos]];
                }
                offset
            })
            .collect()
    };
    let kept_off = offsets(&keep_sorted, &kept_dims, kept_size);
    let traced_off = offsets(&traced, &traced_dims, traced_size);

    let mut out = ComplexMatrix::zeros(kept_size, kept_size);
    for (i, &ki) in kept_off.iter().enumerate() {
        for (j, &kj) in kept_off.iter().enumerate() {
            out[(i, j)] = traced_off.iter().map(|&t| m[(ki + t, kj + t)]).sum();
        }
    }
    out.dims = kept_dims;
    Ok(out)
}

/// Partial trace of a density matrix; see [`partial_trace_matrix`].
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    partial_trace_matrix(rho.matrix(), keep).map(DensityMatrix::from_matrix_unchecked)
}

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates the density-matrix contract: Hermitian within
    /// [`HERMITIAN_TOL`], trace one within [`TRACE_TOL`], smallest
    /// eigenvalue at least `-`[`POSITIVITY_TOL`].
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows,
                cols: matrix.cols,
            });
        }
        let dev = matrix.hermiticity_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotDensityMatrix(format!(
                "Hermiticity violated by {dev:e}"
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::NotDensityMatrix(format!("trace is {tr}")));
        }
        let eig = eig_hermitian(&matrix)?;
        let min = eig.values.last().copied().unwrap_or(0.0);
        if min < -POSITIVITY_TOL {
            return Err(Error::NotDensityMatrix(format!(
                "minimum eigenvalue {min:e} is negative"
            )));
        }
        Ok(Self { matrix })
    }

    /// Skips validation. Used where the construction guarantees the contract.
    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        Self { matrix }
    }

    /// Projector onto a normalized state vector.
    pub fn pure(state: &[Complex64]) -> Result<Self> {
        let norm: f64 = state.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > TRACE_TOL {
            return Err(Error::NotDensityMatrix(format!("state norm squared is {norm}")));
        }
        Ok(Self {
            matrix: ComplexMatrix::outer(state, state),
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows
    }

    pub fn dims(&self) -> &[usize] {
        self.matrix.dims()
    }

    pub fn with_dims(self, dims: Vec<usize>) -> Result<Self> {
        Ok(Self {
            matrix: self.matrix.with_dims(dims)?,
        })
    }

    /// Entry `(i, j)`, zero-based.
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.matrix[(i, j)]
    }

    /// Tensor product of two density matrices.
    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            matrix: tensor(&self.matrix, &other.matrix),
        }
    }

    /// Fidelity `<psi|rho|psi>` with a pure state.
    pub fn overlap_with_pure(&self, state: &[Complex64]) -> f64 {
        let rho_psi = self.matrix.mul_vec(state);
        state
            .iter()
            .zip(&rho_psi)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .re
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn sigma_z() -> ComplexMatrix {
        ComplexMatrix::from_real_diag(&[1.0, -1.0])
    }

    fn bell() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::pure(&[c(s), ZERO, ZERO, c(s)])
            .unwrap()
            .with_dims(vec![2, 2])
            .unwrap()
    }

    #[test]
    fn identity_tensor_identity() {
        let i4 = tensor(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2));
        assert_eq!(i4.as_slice(), ComplexMatrix::identity(4).as_slice());
        assert_eq!(i4.dims(), &[2, 2]);
    }

    #[test]
    fn basis_projector_lands_on_eg() {
        let e = ComplexMatrix::from_real_diag(&[1.0, 0.0]);
        let g = ComplexMatrix::from_real_diag(&[0.0, 1.0]);
        let eg = tensor(&e, &g);
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == 1 && j == 1 { ONE } else { ZERO };
                assert_eq!(eg[(i, j)], expected);
            }
        }
    }

    #[test]
    fn sigma_z_squared_sign_pattern() {
        let zz = tensor(&sigma_z(), &sigma_z());
        assert_eq!(zz.as_slice(), ComplexMatrix::from_real_diag(&[1.0, -1.0, -1.0, 1.0]).as_slice());
    }

    #[test]
    fn tensor_is_associative() {
        let a = ComplexMatrix::from_vec(2, 2, vec![c(1.0), I, c(-2.0), c(0.5)]).unwrap();
        let b = ComplexMatrix::from_vec(2, 2, vec![c(0.0), c(3.0), I, c(1.0)]).unwrap();
        let d = ComplexMatrix::from_real_diag(&[1.0, 2.0, 3.0]);
        let left = tensor(&tensor(&a, &b), &d);
        let right = tensor(&a, &tensor(&b, &d));
        assert_eq!(left.as_slice(), right.as_slice());
        assert_eq!(left.dims(), &[2, 2, 3]);
        assert_eq!(right.dims(), &[2, 2, 3]);
    }

    #[test]
    fn trace_out_field_of_product_state() {
        let e = DensityMatrix::pure(&[ONE, ZERO]).unwrap();
        let one_photon = DensityMatrix::pure(&[ZERO, ONE, ZERO]).unwrap();
        let reduced = partial_trace(&e.tensor(&one_photon), &[0]).unwrap();
        assert_eq!(reduced.matrix().as_slice(), e.matrix().as_slice());
    }

    #[test]
    fn bell_marginals_are_maximally_mixed() {
        let half = ComplexMatrix::from_real_diag(&[0.5, 0.5]);
        for keep in [[0], [1]] {
            let r = partial_trace(&bell(), &keep).unwrap();
            assert!(r.matrix().max_abs_diff(&half) < 1e-15);
        }
    }

    #[test]
    fn partial_trace_rejects_bad_keep_sets() {
        let b = bell();
        assert!(matches!(partial_trace(&b, &[]), Err(Error::Dimension(_))));
        assert!(matches!(partial_trace(&b, &[0, 1]), Err(Error::Dimension(_))));
        assert!(matches!(partial_trace(&b, &[2]), Err(Error::Dimension(_))));
        let flat = DensityMatrix::new(ComplexMatrix::from_real_diag(&[0.25; 4])).unwrap();
        assert!(matches!(partial_trace(&flat, &[0]), Err(Error::Dimension(_))));
    }

    #[test]
    fn partial_trace_keeps_middle_factor() {
        // |0><0| ⊗ diag(0.2, 0.8) ⊗ |1><1| on 2 x 2 x 3
        let a = ComplexMatrix::from_real_diag(&[1.0, 0.0]);
        let b = ComplexMatrix::from_real_diag(&[0.2, 0.8]);
        let f = ComplexMatrix::from_real_diag(&[0.0, 1.0, 0.0]);
        let rho = DensityMatrix::new(tensor(&tensor(&a, &b), &f)).unwrap();
        let mid = partial_trace(&rho, &[1]).unwrap();
        assert!(mid.matrix().max_abs_diff(&b) < 1e-15);
        let outer = partial_trace(&rho, &[0, 2]).unwrap();
        assert!(outer.matrix().max_abs_diff(&tensor(&a, &f)) < 1e-15);
        assert_eq!(outer.dims(), &[2, 3]);
    }

    #[test]
    fn density_validation_catches_each_violation() {
        let not_unit = ComplexMatrix::from_real_diag(&[0.5, 0.4]);
        assert!(matches!(DensityMatrix::new(not_unit), Err(Error::NotDensityMatrix(_))));
        let negative = ComplexMatrix::from_real_diag(&[1.5, -0.5]);
        assert!(matches!(DensityMatrix::new(negative), Err(Error::NotDensityMatrix(_))));
        let mut skew = ComplexMatrix::from_real_diag(&[0.5, 0.5]);
        skew[(0, 1)] = c(0.1);
        assert!(matches!(DensityMatrix::new(skew), Err(Error::NotDensityMatrix(_))));
    }

    #[test]
    fn conjugate_by_matches_dense_product() {
        let u = ComplexMatrix::from_vec(2, 2, vec![c(0.6), c(0.8) * I, c(0.8) * I, c(0.6)]).unwrap();
        let rho = ComplexMatrix::from_vec(2, 2, vec![c(0.7), c(0.1) + I * 0.2, c(0.1) - I * 0.2, c(0.3)])
            .unwrap();
        let direct = &(&u * &rho) * &u.adjoint();
        assert!(rho.conjugate_by(&u).unwrap().max_abs_diff(&direct) < 1e-15);
    }
}
