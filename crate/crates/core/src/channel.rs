//! i.i.d. flat Rayleigh fading channels with reproducible seeding.
//!
//! Every random draw in the crate goes through an [`RngStream`]: a
//! `(master_seed, stream_index)` pair mapped onto a ChaCha8 key and stream id.
//! Distinct stream indices select disjoint keystreams, so trials can run in any
//! order (or concurrently) and still reproduce bit-for-bit.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::numerics::{ComplexMatrix, ComplexVector};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    #[error("invalid channel dimension: nt = {nt}, users = {k_users}")]
    InvalidDimension { nt: usize, k_users: usize },
    #[error("user index {index} out of range for {k_users} users")]
    IndexOutOfRange { index: usize, k_users: usize },
    #[error("channel column {0} is identically zero")]
    ZeroColumn(usize),
}

/// Identifies one reproducible random sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        Self {
            master_seed,
            stream_index,
        }
    }

    /// Fresh generator positioned at the start of this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_index);
        rng
    }
}

/// Derives an independent master seed for a labelled sub-experiment
/// (e.g. one SNR point of a sweep). SplitMix64 finalizer over the pair.
pub fn derive_seed(master_seed: u64, label: u64) -> u64 {
    let mut z = master_seed ^ label.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// One circularly-symmetric CN(0, variance) sample.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let s = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * s, im * s)
}

/// Downlink channel `H = [h_1, ..., h_K]`, one column per single-antenna user.
///
/// User indices are zero-based throughout the crate.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    h: ComplexMatrix,
}

impl ChannelSet {
    /// Wraps an `nt x K` matrix, rejecting empty shapes and all-zero columns.
    pub fn from_matrix(h: ComplexMatrix) -> Result<Self, ChannelError> {
        if h.rows() == 0 || h.cols() == 0 {
            return Err(ChannelError::InvalidDimension {
                nt: h.rows(),
                k_users: h.cols(),
            });
        }
        if let Some(k) = (0..h.cols()).find(|&k| h.column(k).norm_sqr() == 0.0) {
            return Err(ChannelError::ZeroColumn(k));
        }
        Ok(Self { h })
    }

    pub fn from_columns(columns: &[ComplexVector]) -> Result<Self, ChannelError> {
        let nt = columns.first().map_or(0, ComplexVector::dim);
        let h = ComplexMatrix::from_columns(nt, columns).map_err(|_| {
            ChannelError::InvalidDimension {
                nt,
                k_users: columns.len(),
            }
        })?;
        Self::from_matrix(h)
    }

    /// Draws every entry i.i.d. CN(0, 1) from `rng`.
    pub fn sample_with<R: Rng + ?Sized>(
        nt: usize,
        k_users: usize,
        rng: &mut R,
    ) -> Result<Self, ChannelError> {
        if nt == 0 || k_users == 0 {
            return Err(ChannelError::InvalidDimension { nt, k_users });
        }
        loop {
            let h = ComplexMatrix::from_fn(nt, k_users, |_, _| complex_gaussian(rng, 1.0));
            // an all-zero column has probability zero; redraw if it happens anyway
            if let Ok(ch) = Self::from_matrix(h) {
                return Ok(ch);
            }
        }
    }

    pub fn nt(&self) -> usize {
        self.h.rows()
    }

    pub fn k_users(&self) -> usize {
        self.h.cols()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.h
    }

    /// Channel vector `h_k`.
    pub fn user(&self, k: usize) -> Result<ComplexVector, ChannelError> {
        self.check_user(k)?;
        Ok(self.h.column(k))
    }

    pub fn check_user(&self, k: usize) -> Result<(), ChannelError> {
        if k < self.k_users() {
            Ok(())
        } else {
            Err(ChannelError::IndexOutOfRange {
                index: k,
                k_users: self.k_users(),
            })
        }
    }

    /// `H_{-k}`: all columns except user `k`, order preserved. For a single
    /// user this is an `nt x 0` matrix.
    pub fn leave_one_out(&self, k: usize) -> Result<ComplexMatrix, ChannelError> {
        self.check_user(k)?;
        Ok(self.h.without_column(k))
    }
}

/// Samples an `nt x k_users` CN(0, 1) channel from the start of `stream`.
pub fn sample_channel(
    nt: usize,
    k_users: usize,
    stream: RngStream,
) -> Result<ChannelSet, ChannelError> {
    ChannelSet::sample_with(nt, k_users, &mut stream.rng())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_stream_same_channel() {
        let a = sample_channel(4, 3, RngStream::new(7, 11)).unwrap();
        let b = sample_channel(4, 3, RngStream::new(7, 11)).unwrap();
        assert_eq!(a, b);
        let bits = |c: &ChannelSet| -> Vec<(u64, u64)> {
            c.matrix()
                .as_slice()
                .iter()
                .map(|z| (z.re.to_bits(), z.im.to_bits()))
                .collect()
        };
        assert_eq!(bits(&a), bits(&b));
        assert_ne!(a, sample_channel(4, 3, RngStream::new(7, 12)).unwrap());
        assert_ne!(a, sample_channel(4, 3, RngStream::new(8, 11)).unwrap());
    }

    #[test]
    fn zero_dimensions_rejected() {
        assert_eq!(
            sample_channel(0, 2, RngStream::new(1, 0)).unwrap_err(),
            ChannelError::InvalidDimension { nt: 0, k_users: 2 }
        );
        assert_eq!(
            sample_channel(2, 0, RngStream::new(1, 0)).unwrap_err(),
            ChannelError::InvalidDimension { nt: 2, k_users: 0 }
        );
    }

    #[test]
    fn zero_column_rejected() {
        let h = ComplexMatrix::from_fn(2, 2, |i, j| Complex64::new((i * j) as f64, 0.0));
        assert_eq!(
            ChannelSet::from_matrix(h).unwrap_err(),
            ChannelError::ZeroColumn(0)
        );
    }

    #[test]
    fn leave_one_out_two_users() {
        let ch = sample_channel(3, 2, RngStream::new(3, 0)).unwrap();
        let m = ch.leave_one_out(0).unwrap();
        assert_eq!(m.cols(), 1);
        assert_eq!(m.column(0), ch.user(1).unwrap());
    }

    #[test]
    fn leave_one_out_single_user_is_empty() {
        let ch = sample_channel(3, 1, RngStream::new(3, 0)).unwrap();
        let m = ch.leave_one_out(0).unwrap();
        assert_eq!((m.rows(), m.cols()), (3, 0));
        // the Gram of an empty matrix is the zero matrix
        assert_eq!(m.outer_gram(0.0), ComplexMatrix::zeros(3, 3));
    }

    #[test]
    fn leave_one_out_middle_user() {
        let ch = sample_channel(4, 4, RngStream::new(5, 9)).unwrap();
        let m = ch.leave_one_out(2).unwrap();
        assert_eq!(m.column(0), ch.user(0).unwrap());
        assert_eq!(m.column(1), ch.user(1).unwrap());
        assert_eq!(m.column(2), ch.user(3).unwrap());
    }

    #[test]
    fn out_of_range_user() {
        let ch = sample_channel(2, 2, RngStream::new(1, 1)).unwrap();
        assert_eq!(
            ch.leave_one_out(2).unwrap_err(),
            ChannelError::IndexOutOfRange { index: 2, k_users: 2 }
        );
        assert!(ch.user(5).is_err());
    }

    #[test]
    fn derived_seeds_differ() {
        let seeds: Vec<u64> = (0..64).map(|i| derive_seed(42, i)).collect();
        let mut sorted = seeds.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), seeds.len());
        assert_eq!(derive_seed(42, 3), derive_seed(42, 3));
    }
}
