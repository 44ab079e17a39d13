//! Dense complex linear algebra used throughout the crate.
//!
//! [`ComplexMatrix`] is a thin newtype over a `nalgebra` dense matrix. The
//! spectral routines here add the pieces the boundary-triplet constructions
//! need on top of it: a tolerance-checked Hermitian eigensolver with a
//! reproducible eigenpair ordering, relative numerical rank, a scaled
//! positive-semidefiniteness test, and reduced spectral factorizations of
//! Hermitian and skew-Hermitian matrices.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Default relative threshold for numerical rank decisions.
pub const DEFAULT_RANK_RTOL: f64 = 1e-10;

/// Relative tolerance for accepting a matrix as Hermitian.
pub const HERMITIAN_RTOL: f64 = 1e-10;

pub(crate) const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows(), self.cols())?;
        for i in 0..self.rows() {
            write!(f, "  ")?;
            for j in 0..self.cols() {
                let z = self[(i, j)];
                write!(f, "{:>10.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    /// Builds a matrix from row-major entries, rejecting NaN/Inf.
    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        Ok(Self(DMatrix::from_row_slice(rows, cols, &entries)))
    }

    /// Builds a matrix from a list of equally long rows.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::from_row_major(rows.len(), cols, rows.concat())
    }

    /// Real-valued convenience constructor; panics on ragged input.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged rows");
            for (j, &x) in r.iter().enumerate() {
                m[(i, j)] = re(x);
            }
        }
        m
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn scalar(z: C64) -> Self {
        Self::from_diagonal(&[z])
    }

    pub fn from_columns(rows: usize, columns: &[Vec<C64>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, &z) in col.iter().enumerate() {
                m[(i, j)] = z;
            }
        }
        m
    }

    pub fn from_nalgebra(m: DMatrix<C64>) -> Self {
        Self(m)
    }

    pub fn as_nalgebra(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|z| *z == C64::new(0.0, 0.0))
    }

    pub fn to_row_major(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self[(i, j)]);
            }
        }
        out
    }

    pub fn to_rows(&self) -> Vec<Vec<C64>> {
        (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| self[(i, j)]).collect())
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        self.0.column(j).iter().copied().collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn scale(&self, z: C64) -> Self {
        Self(&self.0 * z)
    }

    pub fn scale_real(&self, x: f64) -> Self {
        self.scale(re(x))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> f64 {
        singular_values(self).first().copied().unwrap_or(0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn mat_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.cols(), "matrix-vector dimension mismatch");
        (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Copy of the `rows x cols` block starting at (`r0`, `c0`).
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self(self.0.view((r0, c0), (rows, cols)).into_owned())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &ComplexMatrix) {
        self.0
            .view_mut((r0, c0), (b.rows(), b.cols()))
            .copy_from(&b.0);
    }

    pub fn add_to_block(&mut self, r0: usize, c0: usize, b: &ComplexMatrix) {
        let mut v = self.0.view_mut((r0, c0), (b.rows(), b.cols()));
        v += &b.0;
    }

    /// Horizontal concatenation `[a b ...]`.
    pub fn hstack(parts: &[&ComplexMatrix]) -> Self {
        let rows = parts.first().map_or(0, |p| p.rows());
        let cols = parts.iter().map(|p| p.cols()).sum();
        let mut out = Self::zeros(rows, cols);
        let mut c0 = 0;
        for p in parts {
            assert_eq!(p.rows(), rows, "hstack row mismatch");
            out.set_block(0, c0, p);
            c0 += p.cols();
        }
        out
    }

    /// Vertical concatenation.
    pub fn vstack(parts: &[&ComplexMatrix]) -> Self {
        let cols = parts.first().map_or(0, |p| p.cols());
        let rows = parts.iter().map(|p| p.rows()).sum();
        let mut out = Self::zeros(rows, cols);
        let mut r0 = 0;
        for p in parts {
            assert_eq!(p.cols(), cols, "vstack column mismatch");
            out.set_block(r0, 0, p);
            r0 += p.rows();
        }
        out
    }

    pub fn block_diag(parts: &[&ComplexMatrix]) -> Self {
        let rows = parts.iter().map(|p| p.rows()).sum();
        let cols = parts.iter().map(|p| p.cols()).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for p in parts {
            out.set_block(r0, c0, p);
            r0 += p.rows();
            c0 += p.cols();
        }
        out
    }

    /// `‖M − M^H‖_F`.
    pub fn hermitian_defect(&self) -> f64 {
        (self - &self.adjoint()).frobenius_norm()
    }

    /// `‖M + M^H‖_F`.
    pub fn skew_hermitian_defect(&self) -> f64 {
        (self + &self.adjoint()).frobenius_norm()
    }

    pub fn try_inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        if self.rows() == 0 {
            return Some(Self::zeros(0, 0));
        }
        self.0.clone().try_inverse().map(Self)
    }

    pub fn determinant(&self) -> C64 {
        assert!(self.is_square(), "determinant of a non-square matrix");
        if self.rows() == 0 {
            return re(1.0);
        }
        self.0.clone().lu().determinant()
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.0[idx]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, idx: (usize, usize)) -> &mut C64 {
        &mut self.0[idx]
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols(), rhs.rows(), "matrix product dimension mismatch");
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

/// Which symmetry class a [`ReducedFactorization`] was computed for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralKind {
    /// `a = −a^H`; eigenvalues are purely imaginary.
    SkewHermitian,
    /// `a = a^H`; eigenvalues are real.
    Hermitian,
}

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

/// `a = U_r · diag(d_r) · U_r^H` restricted to the nonzero spectrum.
#[derive(Debug, Clone)]
pub struct ReducedFactorization {
    pub kind: SpectralKind,
    /// `m x r` with orthonormal columns.
    pub u_r: ComplexMatrix,
    /// The `r` nonzero eigenvalues, in the column order of `u_r`.
    pub d_r: Vec<C64>,
    pub rank: usize,
}

impl ReducedFactorization {
    pub fn d_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_diagonal(&self.d_r)
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        &(&self.u_r * &self.d_matrix()) * &self.u_r.adjoint()
    }
}

fn check_finite(m: &ComplexMatrix) -> Result<()> {
    if m.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// Makes the first non-negligible component real and positive.
fn normalize_phase(v: &mut [C64]) {
    let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return;
    }
    if let Some(pivot) = v.iter().find(|z| z.norm() > 1e-8 * scale) {
        let phase = pivot.conj() / pivot.norm();
        for z in v.iter_mut() {
            *z *= phase;
        }
    }
}

fn lexicographic(a: &[C64], b: &[C64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let ord = x.re.total_cmp(&y.re).then_with(|| x.im.total_cmp(&y.im));
        if ord != Ordering::Equal {
            return ord;
        }
    }
    Ordering::Equal
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues are returned in ascending order. Each eigenvector is phase
/// normalized (first significant component real positive) and ties between
/// numerically equal eigenvalues are broken by lexicographic order of the
/// normalized eigenvectors, so repeated runs give identical output.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<HermitianEigen> {
    check_finite(h)?;
    if !h.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "hermitian_eig needs a square matrix, got {}x{}",
            h.rows(),
            h.cols()
        )));
    }
    let n = h.rows();
    if n == 0 {
        return Ok(HermitianEigen {
            values: vec![],
            vectors: ComplexMatrix::zeros(0, 0),
        });
    }
    let defect = h.hermitian_defect();
    let allowed = HERMITIAN_RTOL * h.frobenius_norm();
    if defect > allowed {
        return Err(Error::NotHermitian { defect, allowed });
    }
    let sym = (h + &h.adjoint()).scale_real(0.5);
    let eig = sym.0.symmetric_eigen();

    let mut pairs: Vec<(f64, Vec<C64>)> = (0..n)
        .map(|j| {
            let mut v: Vec<C64> = eig.eigenvectors.column(j).iter().copied().collect();
            normalize_phase(&mut v);
            (eig.eigenvalues[j], v)
        })
        .collect();
    let spread = pairs.iter().map(|p| p.0.abs()).fold(0.0, f64::max);
    let tie = 1e-12 * spread.max(f64::MIN_POSITIVE);
    pairs.sort_by(|a, b| {
        if (a.0 - b.0).abs() <= tie {
            lexicographic(&a.1, &b.1)
        } else {
            a.0.total_cmp(&b.0)
        }
    });

    let values = pairs.iter().map(|p| p.0).collect();
    let columns: Vec<Vec<C64>> = pairs.into_iter().map(|p| p.1).collect();
    Ok(HermitianEigen {
        values,
        vectors: ComplexMatrix::from_columns(n, &columns),
    })
}

/// Singular values in descending order.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    if m.rows() == 0 || m.cols() == 0 {
        return vec![];
    }
    let mut s: Vec<f64> = m.0.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Number of singular values exceeding `rtol` times the largest one.
pub fn numerical_rank(m: &ComplexMatrix, rtol: f64) -> Result<usize> {
    check_finite(m)?;
    if rtol <= 0.0 {
        return Err(Error::InvalidInput(
            "rank tolerance must be positive".into(),
        ));
    }
    let s = singular_values(m);
    let Some(&smax) = s.first() else {
        return Ok(0);
    };
    if smax == 0.0 {
        return Ok(0);
    }
    Ok(s.iter().filter(|&&x| x > rtol * smax).count())
}

/// True iff the smallest eigenvalue is `>= −tol · max(1, ‖h‖₂)`.
pub fn is_psd(h: &ComplexMatrix, tol: f64) -> Result<bool> {
    let values = hermitian_eig(h)?.values;
    let Some(&min) = values.first() else {
        return Ok(true);
    };
    let norm = values.iter().map(|x| x.abs()).fold(0.0, f64::max);
    Ok(min >= -tol * norm.max(1.0))
}

/// Smallest eigenvalue of a Hermitian matrix (`+∞` for the empty matrix).
pub fn min_eigenvalue(h: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eig(h)?
        .values
        .first()
        .copied()
        .unwrap_or(f64::INFINITY))
}

/// Reduced spectral factorization of a Hermitian or skew-Hermitian matrix.
///
/// Skew-Hermitian input is factorized through the Hermitian matrix `i·a`:
/// if `i·a·v = λ v` then `a·v = −iλ v`. Eigenvalues whose magnitude does not
/// exceed `rtol` times the spectral norm are dropped. Hermitian input takes
/// precedence when a matrix is both (only the zero matrix is).
pub fn reduced_spectral_factorization(
    a: &ComplexMatrix,
    rtol: f64,
) -> Result<ReducedFactorization> {
    check_finite(a)?;
    if !a.is_square() {
        return Err(Error::NeitherHermitianNorSkew);
    }
    let allowed = HERMITIAN_RTOL * a.frobenius_norm();
    let (kind, hermitian) = if a.hermitian_defect() <= allowed {
        (SpectralKind::Hermitian, a.clone())
    } else if a.skew_hermitian_defect() <= allowed {
        (SpectralKind::SkewHermitian, a.scale(I))
    } else {
        return Err(Error::NeitherHermitianNorSkew);
    };
    let eig = hermitian_eig(&hermitian)?;
    let norm = eig.values.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let keep: Vec<usize> = (0..eig.values.len())
        .filter(|&j| norm > 0.0 && eig.values[j].abs() > rtol * norm)
        .collect();
    let m = a.rows();
    let columns: Vec<Vec<C64>> = keep.iter().map(|&j| eig.vectors.column(j)).collect();
    let d_r = keep
        .iter()
        .map(|&j| match kind {
            SpectralKind::Hermitian => re(eig.values[j]),
            SpectralKind::SkewHermitian => -I * eig.values[j],
        })
        .collect();
    Ok(ReducedFactorization {
        kind,
        u_r: ComplexMatrix::from_columns(m, &columns),
        d_r,
        rank: keep.len(),
    })
}

/// Orthonormal basis of the column space (rank decided by `rtol`).
pub fn column_space(m: &ComplexMatrix, rtol: f64) -> ComplexMatrix {
    if m.rows() == 0 || m.cols() == 0 {
        return ComplexMatrix::zeros(m.rows(), 0);
    }
    let svd = m.0.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&j| smax > 0.0 && svd.singular_values[j] > rtol * smax)
        .collect();
    let columns: Vec<Vec<C64>> = keep
        .iter()
        .map(|&j| u.column(j).iter().copied().collect())
        .collect();
    ComplexMatrix::from_columns(m.rows(), &columns)
}

/// Orthonormal basis of the kernel (rank decided by `rtol`).
pub fn null_space(m: &ComplexMatrix, rtol: f64) -> ComplexMatrix {
    let cols = m.cols();
    if cols == 0 {
        return ComplexMatrix::zeros(0, 0);
    }
    if m.rows() == 0 || m.is_zero() {
        return ComplexMatrix::identity(cols);
    }
    // Pad to at least `cols` rows so the thin SVD yields a full right basis.
    let padded = if m.rows() < cols {
        ComplexMatrix::vstack(&[m, &ComplexMatrix::zeros(cols - m.rows(), cols)])
    } else {
        m.clone()
    };
    let svd = padded.0.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let columns: Vec<Vec<C64>> = (0..svd.singular_values.len())
        .filter(|&j| svd.singular_values[j] <= rtol * smax)
        .map(|j| v_t.row(j).iter().map(|z| z.conj()).collect())
        .collect();
    ComplexMatrix::from_columns(cols, &columns)
}

/// Orthogonal projector `B·B^H` onto the span of orthonormal columns `B`.
pub fn projector(basis: &ComplexMatrix) -> ComplexMatrix {
    basis * &basis.adjoint()
}

/// Spectral-norm distance between the projectors onto two spans.
pub fn subspace_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (&projector(a) - &projector(b)).spectral_norm()
}
