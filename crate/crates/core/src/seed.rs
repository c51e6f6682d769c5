//! Deterministic seed derivation for sampling paths.
//!
//! Certifiers and campaign trials derive their generators from stable
//! hashes of the instance data, so results do not depend on execution
//! order or on anything outside the inputs.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// splitmix64 step.
pub(crate) fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Fold a sequence of words into one seed.
pub(crate) fn seed_from_parts<I: IntoIterator<Item = u64>>(parts: I) -> u64 {
    let mut acc = 0x243f_6a88_85a3_08d3u64;
    for p in parts {
        acc = mix64(acc ^ p);
    }
    acc
}

/// Stable hash of a complex matrix through the bit patterns of its entries.
pub(crate) fn hash_matrix(m: &DMatrix<Complex64>) -> u64 {
    let mut acc = mix64(((m.nrows() as u64) << 32) ^ m.ncols() as u64);
    for e in m.iter() {
        acc = mix64(acc ^ e.re.to_bits());
        acc = mix64(acc ^ e.im.to_bits());
    }
    acc
}
