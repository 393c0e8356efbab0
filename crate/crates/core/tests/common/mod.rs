//! Shared helpers for the integration tests: seeded random inputs and
//! conversions into nalgebra, which serves as the independent dense oracle.
#![allow(dead_code)]

use nalgebra::DMatrix;
use precoderlab::{ChannelSet, Complex64, ComplexMatrix, ComplexVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

pub type Oracle = DMatrix<Complex64>;

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn gaussian<R: Rng>(rng: &mut R) -> Complex64 {
    // Box-Muller, kept separate from the crate's sampler
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen::<f64>();
    let r = (-u1.ln()).sqrt();
    Complex64::from_polar(r, std::f64::consts::TAU * u2)
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

pub fn random_vector<R: Rng>(rng: &mut R, dim: usize) -> ComplexVector {
    (0..dim).map(|_| gaussian(rng)).collect()
}

pub fn random_channel<R: Rng>(rng: &mut R, nt: usize, k: usize) -> ChannelSet {
    ChannelSet::from_matrix(random_matrix(rng, nt, k)).unwrap()
}

/// `G·Gᴴ + shift·I` for a random square `G`.
pub fn random_hpd<R: Rng>(rng: &mut R, n: usize, shift: f64) -> ComplexMatrix {
    random_matrix(rng, n, n).outer_gram(shift)
}

pub fn to_na(m: &ComplexMatrix) -> Oracle {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}

pub fn vec_to_na(v: &ComplexVector) -> Oracle {
    DMatrix::from_fn(v.dim(), 1, |i, _| v[i])
}

pub fn na_to_vec(m: &Oracle) -> ComplexVector {
    assert_eq!(m.ncols(), 1);
    m.iter().copied().collect()
}

pub fn unit(v: &ComplexVector) -> ComplexVector {
    v.normalized().unwrap().0
}

/// `|aᴴb| / (‖a‖‖b‖)` without requiring unit inputs.
pub fn cos_angle(a: &ComplexVector, b: &ComplexVector) -> f64 {
    a.dot(b).norm() / (a.norm() * b.norm())
}

pub fn max_abs_diff(a: &ComplexVector, b: &ComplexVector) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
