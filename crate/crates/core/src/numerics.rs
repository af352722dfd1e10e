//! Dense complex linear algebra consumed by the alignment updates.
//!
//! Every routine here is a pure function of its inputs. Hermitian inputs are
//! symmetrized as `(A + Aᴴ)/2` before decomposition so that round-off
//! accumulated in sums of Gram matrices cannot leak into the eigenvectors.
//! Eigenvectors are returned with a fixed phase: the largest-magnitude entry
//! of each column is real and positive (lowest index wins on ties).

use std::ops::Deref;

use nalgebra::{Cholesky, Complex, DMatrix, SymmetricEigen, SVD};
use thiserror::Error;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

/// Maximum `‖BᴴB − I‖_F` accepted for an orthonormal basis.
pub const ORTHONORMAL_TOL: f64 = 1e-10;
/// Maximum relative asymmetry `‖A − Aᴴ‖_F / ‖A‖_F` accepted for a Hermitian input.
pub const HERMITIAN_TOL: f64 = 1e-10;

const EIG_MAX_ITER: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not Hermitian (relative asymmetry {asymmetry:.3e})")]
    NotHermitian { asymmetry: f64 },
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("columns are not orthonormal (deviation {deviation:.3e})")]
    NotOrthonormal { deviation: f64 },
    #[error("decomposition did not converge")]
    NoConvergence,
}

pub type Result<T> = std::result::Result<T, NumericsError>;

/// Tolerances used by the input checks. The free functions in this module use
/// [`Tolerances::default`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub orthonormal: f64,
    pub hermitian: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            orthonormal: ORTHONORMAL_TOL,
            hermitian: HERMITIAN_TOL,
        }
    }
}

/// A matrix whose columns are orthonormal.
#[derive(Debug, Clone, PartialEq)]
pub struct Orthonormal(CMatrix);

impl Orthonormal {
    pub fn new(basis: CMatrix) -> Result<Self> {
        Self::with_tolerance(basis, ORTHONORMAL_TOL)
    }

    pub fn with_tolerance(basis: CMatrix, tol: f64) -> Result<Self> {
        ensure_finite(&basis)?;
        if basis.ncols() > basis.nrows() {
            return Err(NumericsError::Dimension(format!(
                "orthonormal basis cannot have more columns ({}) than rows ({})",
                basis.ncols(),
                basis.nrows()
            )));
        }
        let deviation = orthonormality_deviation(&basis);
        if deviation > tol {
            return Err(NumericsError::NotOrthonormal { deviation });
        }
        Ok(Self(basis))
    }

    pub(crate) fn new_unchecked(basis: CMatrix) -> Self {
        debug_assert!(orthonormality_deviation(&basis) <= 1e-8);
        Self(basis)
    }

    /// The first `m` columns of `I_n`.
    pub fn identity_columns(n: usize, m: usize) -> Self {
        assert!(m <= n, "identity_columns: m = {m} > n = {n}");
        Self(CMatrix::identity(n, m))
    }

    pub fn basis(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_inner(self) -> CMatrix {
        self.0
    }

    /// `B·Bᴴ`.
    pub fn projector(&self) -> CMatrix {
        &self.0 * self.0.adjoint()
    }
}

impl Deref for Orthonormal {
    type Target = CMatrix;

    fn deref(&self) -> &CMatrix {
        &self.0
    }
}

impl AsRef<CMatrix> for Orthonormal {
    fn as_ref(&self) -> &CMatrix {
        &self.0
    }
}

/// `‖BᴴB − I‖_F`.
pub fn orthonormality_deviation(basis: &CMatrix) -> f64 {
    let m = basis.ncols();
    (basis.adjoint() * basis - CMatrix::identity(m, m)).norm()
}

/// Eigenvectors selected from one end of a Hermitian spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSelection {
    pub basis: Orthonormal,
    /// Eigenvalues in column order.
    pub values: Vec<f64>,
}

/// Full Hermitian eigendecomposition, eigenvalues ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl Tolerances {
    pub fn eigh(&self, a: &CMatrix) -> Result<HermitianEigen> {
        let sym = self.hermitian_part(a)?;
        let n = sym.nrows();
        let eig = SymmetricEigen::try_new(sym, f64::EPSILON, EIG_MAX_ITER)
            .ok_or(NumericsError::NoConvergence)?;

        let mut order: Vec<usize> = (0..n).collect();
        // stable: ties keep the solver's order
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));

        let mut vectors = CMatrix::zeros(n, n);
        let mut values = Vec::with_capacity(n);
        for (dst, &src) in order.iter().enumerate() {
            values.push(eig.eigenvalues[src]);
            let mut col = eig.eigenvectors.column(src).into_owned();
            fix_phase(col.as_mut_slice());
            vectors.set_column(dst, &col);
        }
        Ok(HermitianEigen { values, vectors })
    }

    pub fn eig_smallest(&self, a: &CMatrix, count: usize) -> Result<EigenSelection> {
        check_selection(a, count)?;
        let full = self.eigh(a)?;
        let basis = full.vectors.columns(0, count).into_owned();
        Ok(EigenSelection {
            basis: Orthonormal::new_unchecked(basis),
            values: full.values[..count].to_vec(),
        })
    }

    pub fn eig_largest(&self, a: &CMatrix, count: usize) -> Result<EigenSelection> {
        check_selection(a, count)?;
        let full = self.eigh(a)?;
        let n = full.values.len();
        let mut basis = CMatrix::zeros(n, count);
        let mut values = Vec::with_capacity(count);
        for j in 0..count {
            let src = n - 1 - j;
            basis.set_column(j, &full.vectors.column(src));
            values.push(full.values[src]);
        }
        Ok(EigenSelection {
            basis: Orthonormal::new_unchecked(basis),
            values,
        })
    }

    pub fn logdet2(&self, a: &CMatrix) -> Result<f64> {
        let sym = self.hermitian_part(a)?;
        let n = sym.nrows();
        let diag_max = (0..n).map(|i| sym[(i, i)].re).fold(0.0, f64::max);
        // pivots at round-off level mean the matrix is singular in floating point
        let floor = (n as f64 * f64::EPSILON * diag_max).sqrt();
        let chol = Cholesky::new(sym).ok_or(NumericsError::NotPositiveDefinite)?;
        let l = chol.l_dirty();
        let mut acc = 0.0;
        for i in 0..n {
            let pivot = l[(i, i)].re;
            if pivot.is_nan() || pivot <= floor {
                return Err(NumericsError::NotPositiveDefinite);
            }
            acc += pivot.log2();
        }
        Ok(2.0 * acc)
    }

    /// `(A + Aᴴ)/2` after checking squareness, finiteness and asymmetry.
    fn hermitian_part(&self, a: &CMatrix) -> Result<CMatrix> {
        if a.nrows() != a.ncols() || a.nrows() == 0 {
            return Err(NumericsError::Dimension(format!(
                "expected a non-empty square matrix, got {}x{}",
                a.nrows(),
                a.ncols()
            )));
        }
        ensure_finite(a)?;
        let adj = a.adjoint();
        let scale = a.norm();
        if scale > 0.0 {
            let asymmetry = (a - &adj).norm() / scale;
            if asymmetry > self.hermitian {
                return Err(NumericsError::NotHermitian { asymmetry });
            }
        }
        Ok((a + adj).scale(0.5))
    }
}

pub fn eigh(a: &CMatrix) -> Result<HermitianEigen> {
    Tolerances::default().eigh(a)
}

/// Orthonormal eigenvectors of the `count` algebraically smallest eigenvalues.
pub fn eig_smallest(a: &CMatrix, count: usize) -> Result<EigenSelection> {
    Tolerances::default().eig_smallest(a, count)
}

/// Orthonormal eigenvectors of the `count` largest eigenvalues, largest first.
pub fn eig_largest(a: &CMatrix, count: usize) -> Result<EigenSelection> {
    Tolerances::default().eig_largest(a, count)
}

/// `log₂ det A` for Hermitian positive-definite `A`, via Cholesky.
pub fn logdet2(a: &CMatrix) -> Result<f64> {
    Tolerances::default().logdet2(a)
}

/// Full singular value decomposition `A = Φ·diag(σ)·Ξᴴ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Svd {
    /// `Φ`, p×p.
    pub left: Orthonormal,
    /// `σ`, descending, length `min(p, q)`.
    pub singular_values: Vec<f64>,
    /// `Ξ`, q×q.
    pub right: Orthonormal,
}

impl Svd {
    pub fn reconstruct(&self) -> CMatrix {
        let (p, q) = (self.left.nrows(), self.right.nrows());
        let mut sigma = CMatrix::zeros(p, q);
        for (i, &s) in self.singular_values.iter().enumerate() {
            sigma[(i, i)] = C64::new(s, 0.0);
        }
        self.left.basis() * sigma * self.right.adjoint()
    }
}

pub fn svd(a: &CMatrix) -> Result<Svd> {
    ensure_finite(a)?;
    let (p, q) = a.shape();
    if p == 0 || q == 0 {
        return Err(NumericsError::Dimension(format!("empty {p}x{q} matrix")));
    }
    let dec =
        SVD::try_new(a.clone(), true, true, f64::EPSILON, 0).ok_or(NumericsError::NoConvergence)?;
    let u = dec.u.ok_or(NumericsError::NoConvergence)?;
    let v = dec.v_t.ok_or(NumericsError::NoConvergence)?.adjoint();
    let singular_values = dec.singular_values.iter().copied().collect();
    Ok(Svd {
        left: complete_basis(u)?,
        singular_values,
        right: complete_basis(v)?,
    })
}

fn complete_basis(thin: CMatrix) -> Result<Orthonormal> {
    let (n, r) = thin.shape();
    if r == n {
        return Ok(Orthonormal::new_unchecked(thin));
    }
    let thin = Orthonormal::new_unchecked(thin);
    let rest = orthonormal_complement(&thin)?;
    let mut full = CMatrix::zeros(n, n);
    full.columns_mut(0, r).copy_from(thin.basis());
    full.columns_mut(r, n - r).copy_from(rest.basis());
    Ok(Orthonormal::new_unchecked(full))
}

/// Orthonormal basis `W` of the orthogonal complement of `span(U)`.
pub fn orthonormal_complement(u: &Orthonormal) -> Result<Orthonormal> {
    let (n, m) = u.shape();
    if m >= n {
        return Err(NumericsError::Dimension(format!(
            "complement of a {n}x{m} basis is empty"
        )));
    }
    let projector = u.projector();
    let sel = eig_smallest(&projector, n - m)?;
    // one Gram-Schmidt sweep against U to clean the 1e-16 residue
    let w = sel.basis.basis();
    let w = w - u.basis() * (u.adjoint() * w);
    let qr = w.qr();
    let mut q = qr.q();
    for j in 0..q.ncols() {
        let mut col = q.column(j).into_owned();
        fix_phase(col.as_mut_slice());
        q.set_column(j, &col);
    }
    Ok(Orthonormal::new_unchecked(q))
}

/// `‖A − U·Uᴴ·A‖_F²`: energy of `A` outside `span(U)`.
pub fn projection_residual(a: &CMatrix, u: &Orthonormal) -> Result<f64> {
    if a.nrows() != u.nrows() {
        return Err(NumericsError::Dimension(format!(
            "projection of {}-row matrix onto {}-row basis",
            a.nrows(),
            u.nrows()
        )));
    }
    let outside = a - u.basis() * (u.adjoint() * a);
    Ok(outside.norm_squared())
}

/// Largest principal angle (radians) between two equal-dimension subspaces,
/// computed from `‖(I − A·Aᴴ)·B‖₂` so that tiny angles keep full precision.
pub fn max_principal_angle(a: &Orthonormal, b: &Orthonormal) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(NumericsError::Dimension(format!(
            "subspaces of shape {:?} and {:?}",
            a.shape(),
            b.shape()
        )));
    }
    let outside = b.basis() - a.basis() * (a.adjoint() * b.basis());
    let sines = svd(&outside)?.singular_values;
    let largest = sines.first().copied().unwrap_or(0.0);
    Ok(largest.clamp(0.0, 1.0).asin())
}

fn check_selection(a: &CMatrix, count: usize) -> Result<()> {
    if count == 0 || count > a.nrows() {
        return Err(NumericsError::Dimension(format!(
            "cannot select {count} eigenvectors of a {}x{} matrix",
            a.nrows(),
            a.ncols()
        )));
    }
    Ok(())
}

fn ensure_finite(a: &CMatrix) -> Result<()> {
    if a.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(NumericsError::NonFinite)
    }
}

/// Rotate `v` so its largest-magnitude entry is real and positive.
fn fix_phase(v: &mut [C64]) {
    let mut pivot = 0;
    let mut best = -1.0;
    for (i, z) in v.iter().enumerate() {
        let mag = z.norm_sqr();
        if mag > best {
            best = mag;
            pivot = i;
        }
    }
    if best <= 0.0 {
        return;
    }
    let z = v[pivot];
    let rot = z.conj() / z.norm();
    for x in v.iter_mut() {
        *x *= rot;
    }
    v[pivot] = C64::new(v[pivot].norm(), 0.0);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn diag(values: &[f64]) -> CMatrix {
        let n = values.len();
        CMatrix::from_fn(n, n, |i, j| if i == j { c(values[i]) } else { c(0.0) })
    }

    fn lcg_matrix(rows: usize, cols: usize, mut state: u64) -> CMatrix {
        let mut next = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        CMatrix::from_fn(rows, cols, |_, _| C64::new(next(), next()))
    }

    #[test]
    fn diagonal_smallest_and_largest() {
        let a = diag(&[3.0, 2.0, 1.0]);
        let s = eig_smallest(&a, 1).unwrap();
        assert_eq!(s.values, vec![1.0]);
        assert!((s.basis[(2, 0)] - c(1.0)).norm() < 1e-14);

        let l = eig_largest(&a, 2).unwrap();
        assert_eq!(l.values, vec![3.0, 2.0]);
        let p = l.basis.projector();
        let expected = diag(&[1.0, 1.0, 0.0]);
        assert!((p - expected).norm() < 1e-12);
    }

    #[test]
    fn identity_degeneracy_residual() {
        let a = CMatrix::identity(3, 3);
        let s = eig_smallest(&a, 2).unwrap();
        let lambda = diag(&s.values);
        assert!((&a * s.basis.basis() - s.basis.basis() * lambda).norm() <= 1e-10);
        assert!(orthonormality_deviation(s.basis.basis()) < 1e-12);
    }

    #[test]
    fn selection_errors() {
        let a = CMatrix::identity(3, 3);
        assert!(matches!(
            eig_smallest(&a, 4),
            Err(NumericsError::Dimension(_))
        ));
        assert!(matches!(
            eig_largest(&a, 0),
            Err(NumericsError::Dimension(_))
        ));
        let mut skew = CMatrix::identity(2, 2);
        skew[(0, 1)] = c(1.0);
        assert!(matches!(
            eig_smallest(&skew, 1),
            Err(NumericsError::NotHermitian { .. })
        ));
        let rect = CMatrix::zeros(2, 3);
        assert!(matches!(logdet2(&rect), Err(NumericsError::Dimension(_))));
    }

    #[test]
    fn phase_convention_makes_pivot_real_positive() {
        let g = lcg_matrix(5, 5, 3);
        let a = &g + g.adjoint();
        let full = eigh(&a).unwrap();
        for j in 0..5 {
            let col = full.vectors.column(j);
            let (pivot, _) = col.iter().enumerate().fold((0, -1.0), |(bi, bm), (i, z)| {
                if z.norm_sqr() > bm {
                    (i, z.norm_sqr())
                } else {
                    (bi, bm)
                }
            });
            assert_eq!(col[pivot].im, 0.0);
            assert!(col[pivot].re > 0.0);
        }
    }

    #[test]
    fn deterministic_bitwise() {
        let g = lcg_matrix(6, 6, 11);
        let a = &g * g.adjoint();
        assert_eq!(eigh(&a).unwrap(), eigh(&a).unwrap());
        assert_eq!(svd(&g).unwrap(), svd(&g).unwrap());
    }

    #[test]
    fn svd_identity_and_zero() {
        let s = svd(&CMatrix::identity(3, 3)).unwrap();
        assert_eq!(s.singular_values.len(), 3);
        for v in &s.singular_values {
            assert!((v - 1.0).abs() < 1e-14);
        }
        let z = svd(&CMatrix::zeros(2, 3)).unwrap();
        assert_eq!(z.singular_values, vec![0.0, 0.0]);
        assert_eq!(z.left.shape(), (2, 2));
        assert_eq!(z.right.shape(), (3, 3));
        assert!(orthonormality_deviation(z.right.basis()) < 1e-12);
    }

    #[test]
    fn svd_wide_and_tall_are_full() {
        for (p, q) in [(3, 5), (5, 3), (4, 4)] {
            let a = lcg_matrix(p, q, (p * 10 + q) as u64);
            let s = svd(&a).unwrap();
            assert_eq!(s.left.shape(), (p, p));
            assert_eq!(s.right.shape(), (q, q));
            assert!((s.reconstruct() - &a).norm() <= 1e-12 * a.norm());
            assert!(s.singular_values.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn complement_of_canonical_columns() {
        let u = Orthonormal::identity_columns(4, 2);
        let w = orthonormal_complement(&u).unwrap();
        assert_eq!(w.shape(), (4, 2));
        let p = w.projector();
        assert!((p - diag(&[0.0, 0.0, 1.0, 1.0])).norm() < 1e-12);
        assert!(orthonormal_complement(&Orthonormal::identity_columns(3, 3)).is_err());
    }

    #[test]
    fn projection_residual_cases() {
        let u = Orthonormal::identity_columns(4, 2);
        let inside = CMatrix::from_fn(4, 3, |i, j| {
            if i < 2 {
                c((i + j) as f64 + 1.0)
            } else {
                c(0.0)
            }
        });
        assert!(projection_residual(&inside, &u).unwrap() <= 1e-12);
        let outside = CMatrix::from_fn(4, 3, |i, j| {
            if i >= 2 {
                c((i * j) as f64 + 1.0)
            } else {
                c(0.0)
            }
        });
        let r = projection_residual(&outside, &u).unwrap();
        assert!((r - outside.norm_squared()).abs() < 1e-12);
        assert!(projection_residual(&CMatrix::zeros(3, 1), &u).is_err());
    }

    #[test]
    fn logdet_trivial() {
        assert_eq!(logdet2(&CMatrix::identity(4, 4)).unwrap(), 0.0);
        assert!((logdet2(&diag(&[2.0, 4.0])).unwrap() - 3.0).abs() < 1e-14);
        assert_eq!(
            logdet2(&diag(&[1.0, -1.0])),
            Err(NumericsError::NotPositiveDefinite)
        );
        assert_eq!(
            logdet2(&diag(&[1.0, 0.0])),
            Err(NumericsError::NotPositiveDefinite)
        );
    }

    #[test]
    fn non_finite_rejected() {
        let mut a = CMatrix::identity(2, 2);
        a[(0, 0)] = c(f64::NAN);
        assert_eq!(svd(&a), Err(NumericsError::NonFinite));
        assert_eq!(eigh(&a), Err(NumericsError::NonFinite));
    }

    #[test]
    fn orthonormal_constructor_checks() {
        assert!(Orthonormal::new(CMatrix::identity(3, 2)).is_ok());
        assert!(matches!(
            Orthonormal::new(CMatrix::identity(3, 2).scale(2.0)),
            Err(NumericsError::NotOrthonormal { .. })
        ));
        assert!(Orthonormal::new(CMatrix::identity(2, 3)).is_err());
    }

    #[test]
    fn principal_angle_of_rotated_basis_is_zero() {
        let g = lcg_matrix(6, 3, 5);
        let q = Orthonormal::new(g.qr().q()).unwrap();
        let rot = lcg_matrix(3, 3, 9).qr().q();
        let q2 = Orthonormal::new(q.basis() * rot).unwrap();
        assert!(max_principal_angle(&q, &q2).unwrap() < 1e-14);
        let e1 = Orthonormal::identity_columns(3, 1);
        let e2 = Orthonormal::new(CMatrix::from_fn(3, 1, |i, _| {
            c(if i == 1 { 1.0 } else { 0.0 })
        }))
        .unwrap();
        assert!(
            (max_principal_angle(&e1, &e2).unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-12
        );
    }
}
