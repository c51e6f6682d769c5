//! Dense complex *-algebra kernel: adjoints, the Loewner order, positive
//! square roots, operator norms, Hermitian spectra, and PSD generalized
//! eigenvalue pencils.
//!
//! Everything downstream (module vectors, frames, certifiers) reduces to
//! these operations on small dense matrices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Square complex matrix treated as an element of a matrix *-algebra.
///
/// The same type carries both d×d algebra elements and the (n·d)×(n·d)
/// Gram matrices the frame machinery feeds into the pencil solvers.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    entries: DMatrix<Complex64>,
}

/// Relative tolerance plus an absolute floor guarding scale-free quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs_floor: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rel: 1e-9,
            abs_floor: 1e-12,
        }
    }
}

impl Tolerance {
    pub fn new(rel: f64, abs_floor: f64) -> Result<Self> {
        if rel.is_nan() || rel <= 0.0 || abs_floor.is_nan() || abs_floor <= 0.0 {
            return Err(Error::BadParameter(format!(
                "tolerance components must be positive, got rel={rel}, abs_floor={abs_floor}"
            )));
        }
        Ok(Tolerance { rel, abs_floor })
    }
}

/// Extremal value of a PSD pencil; `Unbounded` when the numerator has mass
/// on the kernel of the denominator, so no finite constant exists.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PencilValue {
    Finite(f64),
    Unbounded,
}

impl PencilValue {
    pub fn is_unbounded(&self) -> bool {
        matches!(self, PencilValue::Unbounded)
    }

    pub fn finite(&self) -> Option<f64> {
        match self {
            PencilValue::Finite(v) => Some(*v),
            PencilValue::Unbounded => None,
        }
    }
}

/// Result of a pencil extremum: the value, the retained rank of the
/// denominator, and a unit vector attaining the extremum (for finite
/// values) or carrying numerator mass inside the kernel (for unbounded
/// ones).
#[derive(Debug, Clone, PartialEq)]
pub struct PencilResult {
    pub value: PencilValue,
    pub effective_rank: usize,
    pub witness: Option<DVector<Complex64>>,
}

impl PencilResult {
    pub fn expect_finite(&self) -> Result<f64> {
        self.value.finite().ok_or(Error::DegenerateDenominator)
    }
}

impl AlgebraElement {
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "algebra element must be square, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        Ok(AlgebraElement { entries })
    }

    pub fn identity(dim: usize) -> Self {
        AlgebraElement {
            entries: DMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        AlgebraElement {
            entries: DMatrix::zeros(dim, dim),
        }
    }

    /// Real diagonal matrix.
    pub fn from_diagonal(diag: &[f64]) -> Self {
        let d = diag.len();
        AlgebraElement {
            entries: DMatrix::from_fn(d, d, |i, j| {
                if i == j {
                    Complex64::new(diag[i], 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<Complex64> {
        self.entries
    }

    /// Conjugate transpose. An exact involution.
    pub fn adjoint(&self) -> Self {
        AlgebraElement {
            entries: self.entries.adjoint(),
        }
    }

    /// (a + a*)/2.
    pub fn hermitian_part(&self) -> Self {
        let h = (&self.entries + self.entries.adjoint()).scale(0.5);
        AlgebraElement { entries: h }
    }

    /// Largest singular value.
    pub fn op_norm(&self) -> f64 {
        op_norm(&self.entries)
    }

    /// Hermitian within tolerance with spectrum of the Hermitian part
    /// bounded below by `-rel * max(1, lambda_max)`.
    pub fn is_positive(&self, tol: &Tolerance) -> bool {
        let skew = (&self.entries - self.entries.adjoint()).norm();
        if skew > tol.rel * f64::max(1.0, self.entries.norm()) {
            return false;
        }
        let eigs = hermitian_eigenvalues(self);
        match (eigs.first(), eigs.last()) {
            (Some(&lo), Some(&hi)) => lo >= -tol.rel * f64::max(1.0, hi),
            _ => true, // zero-dimensional
        }
    }

    /// PSD square root. Fails with `NotPositive` unless `is_positive`.
    pub fn psd_sqrt(&self, tol: &Tolerance) -> Result<Self> {
        if !self.is_positive(tol) {
            return Err(Error::NotPositive("psd_sqrt input".into()));
        }
        Ok(self.sqrt_of_clamped())
    }

    /// |a| = (a* a)^{1/2}. Defined for every element.
    pub fn abs(&self) -> Self {
        let prod = self.entries.adjoint() * &self.entries;
        AlgebraElement { entries: prod }.sqrt_of_clamped()
    }

    pub fn scale(&self, s: f64) -> Self {
        AlgebraElement {
            entries: self.entries.scale(s),
        }
    }

    /// Square root of the Hermitian part with negative eigenvalues clamped
    /// to zero; the clamp only absorbs round-off on inputs that are PSD up
    /// to tolerance.
    fn sqrt_of_clamped(&self) -> Self {
        let (vals, vecs) = hermitian_eig(&self.hermitian_part().entries);
        let d = self.dim();
        let mut root = DMatrix::zeros(d, d);
        for (k, &v) in vals.iter().enumerate() {
            let s = v.max(0.0).sqrt();
            if s > 0.0 {
                let col = vecs.column(k);
                for i in 0..d {
                    for j in 0..d {
                        root[(i, j)] += col[i] * col[j].conj() * Complex64::new(s, 0.0);
                    }
                }
            }
        }
        AlgebraElement { entries: root }
    }
}

impl std::ops::Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            entries: &self.entries + &rhs.entries,
        }
    }
}

impl std::ops::Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            entries: &self.entries - &rhs.entries,
        }
    }
}

/// Largest singular value of a rectangular complex matrix.
pub(crate) fn op_norm(m: &DMatrix<Complex64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

/// Smallest singular value.
pub(crate) fn sigma_min(m: &DMatrix<Complex64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

/// Ascending eigenvalues and matching eigenvectors of a Hermitian matrix.
/// The input is symmetrized first, so skew round-off cannot leak in.
pub(crate) fn hermitian_eig(m: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let h = (m + m.adjoint()).scale(0.5);
    let eig = h.symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vecs = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vecs.set_column(dst, &eig.eigenvectors.column(src));
    }
    (vals, vecs)
}

/// Ascending eigenvalues of the Hermitian part of `a`.
pub fn hermitian_eigenvalues(a: &AlgebraElement) -> Vec<f64> {
    hermitian_eig(a.entries()).0
}

/// a ⪯ b in the Loewner order: b − a is PSD within tolerance.
pub fn loewner_leq(a: &AlgebraElement, b: &AlgebraElement, tol: &Tolerance) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "loewner_leq on dims {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok((b - a).is_positive(tol))
}

struct Whitened {
    /// Columns span the retained range of Q, scaled by 1/sqrt(eigenvalue).
    basis: DMatrix<Complex64>,
    /// Orthonormal columns spanning the retained range of Q.
    range: DMatrix<Complex64>,
    rank: usize,
}

/// Eigendecompose Q, drop eigenvalues at or below `rel * lambda_max`, and
/// return the whitening basis. `None` when Q vanishes within tolerance.
fn whiten(q: &AlgebraElement, tol: &Tolerance) -> Option<Whitened> {
    let (vals, vecs) = hermitian_eig(q.entries());
    let n = vals.len();
    let lam_max = *vals.last()?;
    if lam_max <= tol.abs_floor {
        return None;
    }
    let cut = tol.rel * lam_max;
    let retained: Vec<usize> = (0..n).filter(|&k| vals[k] > cut).collect();
    let rank = retained.len();
    let mut basis = DMatrix::zeros(n, rank);
    let mut range = DMatrix::zeros(n, rank);
    for (dst, &src) in retained.iter().enumerate() {
        let col = vecs.column(src);
        range.set_column(dst, &col);
        basis.set_column(dst, &(col * Complex64::new(1.0 / vals[src].sqrt(), 0.0)));
    }
    Some(Whitened { basis, range, rank })
}

fn check_pencil_inputs(p: &AlgebraElement, q: &AlgebraElement, tol: &Tolerance) -> Result<()> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch(format!(
            "pencil on dims {} and {}",
            p.dim(),
            q.dim()
        )));
    }
    if !p.is_positive(tol) {
        return Err(Error::NotPositive("pencil numerator".into()));
    }
    if !q.is_positive(tol) {
        return Err(Error::NotPositive("pencil denominator".into()));
    }
    Ok(())
}

/// Numerator mass outside the retained range of the denominator:
/// ‖(I−Π) P (I−Π)‖ together with its top eigenvector.
fn kernel_mass(p: &AlgebraElement, range: &DMatrix<Complex64>) -> (f64, DVector<Complex64>) {
    let n = p.dim();
    let proj = range * range.adjoint();
    let co = DMatrix::identity(n, n) - proj;
    let residual = &co * p.entries() * &co;
    let (vals, vecs) = hermitian_eig(&residual);
    let top = vals.last().copied().unwrap_or(0.0);
    let v = vecs.column(vals.len().saturating_sub(1)).into_owned();
    (top.max(0.0), v)
}

fn unit(v: DVector<Complex64>) -> DVector<Complex64> {
    let n = v.norm();
    if n > 0.0 {
        v / Complex64::new(n, 0.0)
    } else {
        v
    }
}

/// sup of v*Pv / v*Qv over directions carried by Q.
///
/// Eigendecomposes Q, discards eigenvalues ≤ rel·λ_max(Q), whitens, and
/// takes the top eigenvalue of the compressed numerator. Reports
/// `Unbounded` when P has mass on the kernel of Q, in which case no finite
/// constant c with P ⪯ cQ exists.
pub fn pencil_sup(p: &AlgebraElement, q: &AlgebraElement, tol: &Tolerance) -> Result<PencilResult> {
    check_pencil_inputs(p, q, tol)?;
    let p_scale = f64::max(1.0, p.op_norm());
    let Some(w) = whiten(q, tol) else {
        // Q vanishes: any numerator mass is kernel mass.
        if p.op_norm() > tol.rel * p_scale {
            let (_, v) = hermitian_eig(p.entries());
            let n = p.dim();
            let witness = unit(v.column(n - 1).into_owned());
            return Ok(PencilResult {
                value: PencilValue::Unbounded,
                effective_rank: 0,
                witness: Some(witness),
            });
        }
        return Ok(PencilResult {
            value: PencilValue::Finite(0.0),
            effective_rank: 0,
            witness: None,
        });
    };
    let (mass, kernel_dir) = if w.rank < p.dim() {
        kernel_mass(p, &w.range)
    } else {
        (0.0, DVector::zeros(p.dim()))
    };
    if mass > tol.rel * p_scale {
        return Ok(PencilResult {
            value: PencilValue::Unbounded,
            effective_rank: w.rank,
            witness: Some(unit(kernel_dir)),
        });
    }
    let compressed = w.basis.adjoint() * p.entries() * &w.basis;
    let (vals, vecs) = hermitian_eig(&compressed);
    let top = vals.last().copied().unwrap_or(0.0).max(0.0);
    let witness = unit(&w.basis * vecs.column(w.rank - 1));
    Ok(PencilResult {
        value: PencilValue::Finite(top),
        effective_rank: w.rank,
        witness: Some(witness),
    })
}

/// inf of v*Pv / v*Qv over the retained range of Q.
///
/// Same whitening as [`pencil_sup`], bottom eigenvalue instead of top.
/// Directions in the kernel of Q impose no constraint and are excluded.
/// Fails with `DegenerateDenominator` when Q vanishes within tolerance.
pub fn pencil_inf(p: &AlgebraElement, q: &AlgebraElement, tol: &Tolerance) -> Result<PencilResult> {
    check_pencil_inputs(p, q, tol)?;
    let Some(w) = whiten(q, tol) else {
        return Err(Error::DegenerateDenominator);
    };
    let compressed = w.basis.adjoint() * p.entries() * &w.basis;
    let (vals, vecs) = hermitian_eig(&compressed);
    let bottom = vals.first().copied().unwrap_or(0.0).max(0.0);
    let witness = unit(&w.basis * vecs.column(0));
    Ok(PencilResult {
        value: PencilValue::Finite(bottom),
        effective_rank: w.rank,
        witness: Some(witness),
    })
}
