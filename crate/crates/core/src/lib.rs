//! Linear precoding for the multi-user MIMO downlink.
//!
//! A base station with `nt` antennas serves `K` single-antenna users over a
//! flat Rayleigh fading channel. This crate builds zero-forcing (ZF),
//! regularized zero-forcing (RZF) and SLNR-maximizing precoders, certifies
//! numerically that the SLNR precoder with noise variance `σ²` is the RZF
//! precoder with `α = σ²`, and runs seeded Monte-Carlo sum-rate and QPSK BER
//! studies.
//!
//! | module | contents |
//! |---|---|
//! | [`numerics`] | complex matrices, Cholesky solves, rank-one update solve, power iteration |
//! | [`channel`] | reproducible Rayleigh channel sampling |
//! | [`precoders`] | ZF / RZF / SLNR constructions, alignment checks |
//! | [`metrics`] | SLNR, SINR, sum rate |
//! | [`linksim`] | QPSK BER simulation |
//! | [`experiments`] | sum-rate, BER and equivalence studies with CSV output |
//!
//! The `examples/` directory has one runnable program per capability, and the
//! `precoderlab` binary exposes the three studies on the command line.

pub mod channel;
pub mod experiments;
pub mod linksim;
pub mod metrics;
pub mod numerics;
pub mod precoders;

pub use num_complex::Complex64;

pub use channel::{sample_channel, ChannelSet, RngStream};
pub use metrics::{sinr, slnr_value, sum_rate, NoisePowerModel};
pub use numerics::{ComplexMatrix, ComplexVector};
pub use precoders::{
    alignment, build_precoder_matrix, canonical_phase, rzf_direction, slnr_closed_form, slnr_eig,
    zf_direction, Method, PrecoderMatrix, SlnrSolution,
};
