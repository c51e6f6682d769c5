//! Seeded helpers shared by the unit tests.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cstar::{AlgebraElement, Tolerance};

pub(crate) const TOL: Tolerance = Tolerance {
    rel: 1e-9,
    abs_floor: 1e-12,
};

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn cmat(dim: usize, data: &[Complex64]) -> DMatrix<Complex64> {
    DMatrix::from_row_slice(dim, dim, data)
}

pub(crate) fn random_complex(rng: &mut impl Rng, rows: usize, cols: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

pub(crate) fn random_element(rng: &mut impl Rng, dim: usize) -> AlgebraElement {
    AlgebraElement::new(random_complex(rng, dim, dim)).unwrap()
}

pub(crate) fn random_psd(rng: &mut impl Rng, dim: usize) -> AlgebraElement {
    let c = random_complex(rng, dim, dim);
    AlgebraElement::new(&c * c.adjoint()).unwrap()
}
