//! The concrete Hilbert module over the d×d matrix algebra.
//!
//! A vector is a d×(n·d) complex matrix X with algebra-valued inner
//! product ⟨x,y⟩ = X·Yᴴ and module action a·x = a·X. Adjointable
//! operators are (n·d)×(n·d) matrices acting on the right, X ↦ X·T, so
//! the operator adjoint is the conjugate transpose and every operator is
//! automatically adjointable and module-linear.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::cstar::{op_norm, sigma_min, AlgebraElement, Tolerance};
use crate::error::{Error, Result};

/// Element of the module: a d×(n·d) complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleVector {
    entries: DMatrix<Complex64>,
    algebra_dim: usize,
    module_rank: usize,
}

/// Adjointable operator on the module: an (n·d)×(n·d) matrix applied on
/// the right of the vector entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleOperator {
    matrix: DMatrix<Complex64>,
    algebra_dim: usize,
    module_rank: usize,
}

/// Ordered family of module vectors, one per measure point.
#[derive(Debug, Clone, PartialEq)]
pub struct L2Family {
    members: Vec<ModuleVector>,
}

impl ModuleVector {
    /// `entries` must be d×(n·d) for some n ≥ 1.
    pub fn new(entries: DMatrix<Complex64>, algebra_dim: usize) -> Result<Self> {
        if algebra_dim == 0 || entries.nrows() != algebra_dim {
            return Err(Error::DimensionMismatch(format!(
                "module vector must have {} rows, got {}",
                algebra_dim,
                entries.nrows()
            )));
        }
        if entries.ncols() == 0 || !entries.ncols().is_multiple_of(algebra_dim) {
            return Err(Error::DimensionMismatch(format!(
                "module vector width {} is not a positive multiple of d={}",
                entries.ncols(),
                algebra_dim
            )));
        }
        let module_rank = entries.ncols() / algebra_dim;
        Ok(ModuleVector {
            entries,
            algebra_dim,
            module_rank,
        })
    }

    pub fn zeros(algebra_dim: usize, module_rank: usize) -> Self {
        ModuleVector {
            entries: DMatrix::zeros(algebra_dim, algebra_dim * module_rank),
            algebra_dim,
            module_rank,
        }
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn algebra_dim(&self) -> usize {
        self.algebra_dim
    }

    pub fn module_rank(&self) -> usize {
        self.module_rank
    }

    /// ‖x‖ = ‖⟨x,x⟩‖^{1/2}, the largest singular value of the entries.
    pub fn norm(&self) -> f64 {
        op_norm(&self.entries)
    }

    pub fn is_zero(&self, tol: &Tolerance) -> bool {
        self.norm() <= tol.abs_floor
    }

    fn same_shape(&self, other: &ModuleVector) -> bool {
        self.algebra_dim == other.algebra_dim && self.module_rank == other.module_rank
    }
}

impl std::ops::Add for &ModuleVector {
    type Output = ModuleVector;
    fn add(self, rhs: &ModuleVector) -> ModuleVector {
        assert!(self.same_shape(rhs), "module vector shape mismatch");
        ModuleVector {
            entries: &self.entries + &rhs.entries,
            algebra_dim: self.algebra_dim,
            module_rank: self.module_rank,
        }
    }
}

/// ⟨x,y⟩ = X·Yᴴ, a d×d algebra element.
pub fn inner_product(x: &ModuleVector, y: &ModuleVector) -> Result<AlgebraElement> {
    if !x.same_shape(y) {
        return Err(Error::DimensionMismatch(format!(
            "inner product of (d={},n={}) with (d={},n={})",
            x.algebra_dim, x.module_rank, y.algebra_dim, y.module_rank
        )));
    }
    AlgebraElement::new(&x.entries * y.entries.adjoint())
}

/// Module action a·x, left multiplication by the algebra element.
pub fn module_action(a: &AlgebraElement, x: &ModuleVector) -> Result<ModuleVector> {
    if a.dim() != x.algebra_dim {
        return Err(Error::DimensionMismatch(format!(
            "algebra element of dim {} acting on vector with d={}",
            a.dim(),
            x.algebra_dim
        )));
    }
    Ok(ModuleVector {
        entries: a.entries() * &x.entries,
        algebra_dim: x.algebra_dim,
        module_rank: x.module_rank,
    })
}

impl ModuleOperator {
    /// `matrix` must be (n·d)×(n·d) for some n ≥ 1.
    pub fn new(matrix: DMatrix<Complex64>, algebra_dim: usize) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "operator matrix must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if algebra_dim == 0 || matrix.nrows() == 0 || !matrix.nrows().is_multiple_of(algebra_dim) {
            return Err(Error::DimensionMismatch(format!(
                "operator side {} is not a positive multiple of d={}",
                matrix.nrows(),
                algebra_dim
            )));
        }
        let module_rank = matrix.nrows() / algebra_dim;
        Ok(ModuleOperator {
            matrix,
            algebra_dim,
            module_rank,
        })
    }

    pub fn identity(algebra_dim: usize, module_rank: usize) -> Self {
        let side = algebra_dim * module_rank;
        ModuleOperator {
            matrix: DMatrix::identity(side, side),
            algebra_dim,
            module_rank,
        }
    }

    pub fn zeros(algebra_dim: usize, module_rank: usize) -> Self {
        let side = algebra_dim * module_rank;
        ModuleOperator {
            matrix: DMatrix::zeros(side, side),
            algebra_dim,
            module_rank,
        }
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn algebra_dim(&self) -> usize {
        self.algebra_dim
    }

    pub fn module_rank(&self) -> usize {
        self.module_rank
    }

    pub fn side(&self) -> usize {
        self.matrix.nrows()
    }

    /// X ↦ X·T.
    pub fn apply(&self, x: &ModuleVector) -> Result<ModuleVector> {
        if x.algebra_dim != self.algebra_dim || x.module_rank != self.module_rank {
            return Err(Error::DimensionMismatch(format!(
                "operator (d={},n={}) applied to vector (d={},n={})",
                self.algebra_dim, self.module_rank, x.algebra_dim, x.module_rank
            )));
        }
        Ok(ModuleVector {
            entries: &x.entries * &self.matrix,
            algebra_dim: x.algebra_dim,
            module_rank: x.module_rank,
        })
    }

    /// T*, the conjugate transpose. ⟨Tx,y⟩ = ⟨x,T*y⟩ holds by matrix
    /// associativity.
    pub fn adjoint(&self) -> Self {
        ModuleOperator {
            matrix: self.matrix.adjoint(),
            algebra_dim: self.algebra_dim,
            module_rank: self.module_rank,
        }
    }

    /// Operator norm: the largest singular value, which equals
    /// sup ‖Tx‖/‖x‖ in this model.
    pub fn norm(&self) -> f64 {
        op_norm(&self.matrix)
    }

    /// Smallest singular value; ‖T*x‖ ≥ σ_min·‖x‖ for every x.
    pub fn lower_bound(&self) -> f64 {
        sigma_min(&self.matrix)
    }

    /// Surjectivity of X ↦ X·T, equivalent to T* being bounded below.
    pub fn is_surjective(&self, tol: &Tolerance) -> bool {
        self.lower_bound() > tol.rel * self.norm() + tol.abs_floor
    }

    pub fn scale(&self, s: Complex64) -> Self {
        ModuleOperator {
            matrix: self.matrix.map(|e| e * s),
            algebra_dim: self.algebra_dim,
            module_rank: self.module_rank,
        }
    }
}

impl std::ops::Add for &ModuleOperator {
    type Output = ModuleOperator;
    fn add(self, rhs: &ModuleOperator) -> ModuleOperator {
        assert!(
            self.algebra_dim == rhs.algebra_dim && self.module_rank == rhs.module_rank,
            "operator shape mismatch"
        );
        ModuleOperator {
            matrix: &self.matrix + &rhs.matrix,
            algebra_dim: self.algebra_dim,
            module_rank: self.module_rank,
        }
    }
}

impl std::ops::Sub for &ModuleOperator {
    type Output = ModuleOperator;
    fn sub(self, rhs: &ModuleOperator) -> ModuleOperator {
        assert!(
            self.algebra_dim == rhs.algebra_dim && self.module_rank == rhs.module_rank,
            "operator shape mismatch"
        );
        ModuleOperator {
            matrix: &self.matrix - &rhs.matrix,
            algebra_dim: self.algebra_dim,
            module_rank: self.module_rank,
        }
    }
}

impl L2Family {
    /// All members must share (d, n).
    pub fn new(members: Vec<ModuleVector>) -> Result<Self> {
        if let Some(first) = members.first() {
            let (d, n) = (first.algebra_dim, first.module_rank);
            for (k, m) in members.iter().enumerate() {
                if m.algebra_dim != d || m.module_rank != n {
                    return Err(Error::DimensionMismatch(format!(
                        "family member {k} has shape (d={},n={}), expected (d={d},n={n})",
                        m.algebra_dim, m.module_rank
                    )));
                }
            }
        }
        Ok(L2Family { members })
    }

    pub fn point_count(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[ModuleVector] {
        &self.members
    }
}

/// Weighted family inner product Σ_j w_j ⟨f_j, g_j⟩. Weights must be the
/// strictly positive masses of the underlying measure.
pub fn l2_inner(f: &L2Family, g: &L2Family, weights: &[f64]) -> Result<AlgebraElement> {
    if f.point_count() != g.point_count() || f.point_count() != weights.len() {
        return Err(Error::DimensionMismatch(format!(
            "family inner product over {} vs {} members with {} weights",
            f.point_count(),
            g.point_count(),
            weights.len()
        )));
    }
    debug_assert!(weights.iter().all(|&w| w > 0.0));
    let Some(first) = f.members.first() else {
        return Err(Error::DimensionMismatch("empty family".into()));
    };
    let d = first.algebra_dim;
    let mut acc = DMatrix::<Complex64>::zeros(d, d);
    for ((fj, gj), &w) in f.members.iter().zip(&g.members).zip(weights) {
        let ip = inner_product(fj, gj)?;
        acc += ip.entries().scale(w);
    }
    AlgebraElement::new(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{random_complex, rng, TOL};
    use rand::Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn row(data: &[f64]) -> ModuleVector {
        let entries = DMatrix::from_iterator(1, data.len(), data.iter().map(|&x| c(x, 0.0)));
        ModuleVector::new(entries, 1).unwrap()
    }

    #[test]
    fn inner_product_cases() {
        // d=1, n=2 orthogonal rows.
        let x = row(&[1.0, 0.0]);
        let y = row(&[0.0, 1.0]);
        assert!(inner_product(&x, &y).unwrap().op_norm() < 1e-15);

        let x = row(&[1.0, 1.0]);
        let ip = inner_product(&x, &x).unwrap();
        assert!((ip.entries()[(0, 0)].re - 2.0).abs() < 1e-15);

        // d=2, n=1 matrix product.
        let x2 = ModuleVector::new(DMatrix::identity(2, 2), 2).unwrap();
        let y2 = ModuleVector::new(
            DMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.)]),
            2,
        )
        .unwrap();
        let ip = inner_product(&x2, &y2).unwrap();
        assert!((&ip - &AlgebraElement::from_diagonal(&[1.0, 0.0])).op_norm() < 1e-15);

        assert!(inner_product(&x, &x2).is_err());
    }

    #[test]
    fn module_action_cases() {
        let x = ModuleVector::new(DMatrix::identity(2, 2), 2).unwrap();
        let id = AlgebraElement::identity(2);
        assert_eq!(module_action(&id, &x).unwrap(), x);
        assert!(module_action(&AlgebraElement::zeros(2), &x).unwrap().norm() < 1e-15);

        let a = AlgebraElement::from_diagonal(&[2.0, 3.0]);
        let ax = module_action(&a, &x).unwrap();
        assert_eq!(ax.entries()[(0, 0)], c(2., 0.));
        assert_eq!(ax.entries()[(1, 1)], c(3., 0.));
    }

    #[test]
    fn vec_norm_cases() {
        assert_eq!(ModuleVector::zeros(2, 2).norm(), 0.0);
        assert!((row(&[3.0, 4.0]).norm() - 5.0).abs() < 1e-12);
        let x = ModuleVector::new(
            DMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(2., 0.)]),
            2,
        )
        .unwrap();
        assert!((x.norm() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn operator_apply_and_adjoint() {
        let t = ModuleOperator::new(
            DMatrix::from_row_slice(2, 2, &[c(2., 0.), c(0., 0.), c(0., 0.), c(3., 0.)]),
            1,
        )
        .unwrap();
        let x = row(&[1.0, 1.0]);
        let tx = t.apply(&x).unwrap();
        assert_eq!(tx.entries()[(0, 0)], c(2., 0.));
        assert_eq!(tx.entries()[(0, 1)], c(3., 0.));

        let id = ModuleOperator::identity(1, 2);
        assert_eq!(id.apply(&x).unwrap(), x);
        assert!(ModuleOperator::zeros(1, 2).apply(&x).unwrap().norm() < 1e-15);

        let nil = ModuleOperator::new(
            DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)]),
            1,
        )
        .unwrap();
        assert_eq!(nil.adjoint().matrix()[(1, 0)], c(1., 0.));
        assert_eq!(nil.adjoint().matrix()[(0, 1)], c(0., 0.));
        assert_eq!(t.adjoint(), t);
    }

    #[test]
    fn operator_norm_and_lower_bound() {
        assert!((ModuleOperator::identity(1, 2).norm() - 1.0).abs() < 1e-12);
        let t = ModuleOperator::new(
            DMatrix::from_row_slice(2, 2, &[c(2., 0.), c(0., 0.), c(0., 0.), c(-3., 0.)]),
            1,
        )
        .unwrap();
        assert!((t.norm() - 3.0).abs() < 1e-12);
        let nil = ModuleOperator::new(
            DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(5., 0.), c(0., 0.), c(0., 0.)]),
            1,
        )
        .unwrap();
        assert!((nil.norm() - 5.0).abs() < 1e-12);

        assert!(
            (ModuleOperator::identity(1, 2)
                .scale(c(2., 0.))
                .lower_bound()
                - 2.0)
                .abs()
                < 1e-12
        );
        let sing = ModuleOperator::new(
            DMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.)]),
            1,
        )
        .unwrap();
        assert!(sing.lower_bound() < 1e-15);
    }

    #[test]
    fn surjectivity_cases() {
        let tol = TOL;
        assert!(ModuleOperator::identity(2, 2).is_surjective(&tol));
        let sing = ModuleOperator::new(
            DMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.)]),
            1,
        )
        .unwrap();
        assert!(!sing.is_surjective(&tol));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u = ModuleOperator::new(
            DMatrix::from_row_slice(2, 2, &[c(s, 0.), c(s, 0.), c(-s, 0.), c(s, 0.)]),
            1,
        )
        .unwrap()
        .scale(c(3.0, 0.0));
        assert!(u.is_surjective(&tol));
    }

    #[test]
    fn l2_inner_cases() {
        let x = row(&[1.0, 0.0]);
        let f = L2Family::new(vec![x.clone()]).unwrap();
        let v = l2_inner(&f, &f, &[2.0]).unwrap();
        assert!((v.entries()[(0, 0)].re - 2.0).abs() < 1e-15);

        let zeros = L2Family::new(vec![ModuleVector::zeros(1, 2)]).unwrap();
        assert!(l2_inner(&f, &zeros, &[2.0]).unwrap().op_norm() < 1e-15);

        let f2 = L2Family::new(vec![row(&[1.0, 0.0]), row(&[0.0, 1.0])]).unwrap();
        let v = l2_inner(&f2, &f2, &[1.0, 1.0]).unwrap();
        assert!((v.entries()[(0, 0)].re - 2.0).abs() < 1e-15);

        assert!(l2_inner(&f, &f2, &[1.0]).is_err());
    }

    #[test]
    fn defining_adjoint_identity_seeded() {
        // ⟨Tx, y⟩ = ⟨x, T*y⟩ across random instances.
        let mut r = rng(31);
        for _ in 0..200 {
            let d = 1 + (r.random_range(0..3usize));
            let n = 1 + (r.random_range(0..3usize));
            let t = ModuleOperator::new(random_complex(&mut r, n * d, n * d), d).unwrap();
            let x = ModuleVector::new(random_complex(&mut r, d, n * d), d).unwrap();
            let y = ModuleVector::new(random_complex(&mut r, d, n * d), d).unwrap();
            let lhs = inner_product(&t.apply(&x).unwrap(), &y).unwrap();
            let rhs = inner_product(&x, &t.adjoint().apply(&y).unwrap()).unwrap();
            let scale = f64::max(1.0, lhs.op_norm());
            assert!((&lhs - &rhs).op_norm() <= 1e-12 * scale);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn entryv(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
            proptest::collection::vec((-50i32..=50, -50i32..=50), len).prop_map(|v| {
                v.into_iter()
                    .map(|(re, im)| Complex64::new(f64::from(re) / 8.0, f64::from(im) / 8.0))
                    .collect()
            })
        }

        proptest! {
            #[test]
            fn self_inner_product_is_psd(data in entryv(2 * 6)) {
                let x = ModuleVector::new(DMatrix::from_row_slice(2, 6, &data), 2).unwrap();
                let ip = inner_product(&x, &x).unwrap();
                prop_assert!(ip.is_positive(&Tolerance::default()));
                // ⟨x,x⟩ = 0 iff x = 0.
                let tol = Tolerance::default();
                prop_assert_eq!(ip.op_norm() <= tol.abs_floor, x.is_zero(&tol));
            }

            #[test]
            fn family_self_inner_is_psd(a in entryv(3), b in entryv(3), w1 in 1u32..10, w2 in 1u32..10) {
                let f = L2Family::new(vec![
                    ModuleVector::new(DMatrix::from_row_slice(1, 3, &a), 1).unwrap(),
                    ModuleVector::new(DMatrix::from_row_slice(1, 3, &b), 1).unwrap(),
                ]).unwrap();
                let v = l2_inner(&f, &f, &[f64::from(w1), f64::from(w2)]).unwrap();
                prop_assert!(v.is_positive(&Tolerance::default()));
            }
        }
    }
}
