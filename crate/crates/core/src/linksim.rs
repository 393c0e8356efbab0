//! Monte-Carlo QPSK bit-error-rate simulation of the precoded downlink.
//!
//! Each trial draws a fresh block-fading channel, precodes one Gray-mapped
//! QPSK symbol per user, adds CN(0, σ²) noise at every receiver and detects
//! after single-tap equalization by the known effective gain
//! `√p_k h_kᴴ w_k`. Residual multi-user interference is treated as noise.
//!
//! Trial `t` of a point with seed `s` uses only `RngStream(s, t)`, drawing the
//! channel first, then the bits, then the noise. Every method therefore sees
//! the same channels, bits and noise, and trials can be evaluated in parallel
//! and merged in index order without changing the result.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::channel::{complex_gaussian, ChannelError, ChannelSet, RngStream};
use crate::metrics::{MetricsError, NoisePowerModel};
use crate::precoders::{build_precoder_matrix, Method, PrecoderError};

/// Stop once this many bit errors have been seen (and `min_bits` were sent).
pub const TARGET_ERRORS: u64 = 100;
pub const DEFAULT_MIN_BITS: u64 = 100_000;
pub const DEFAULT_MAX_BITS: u64 = 10_000_000;
/// Bounds on the number of trials evaluated per parallel batch.
const MIN_BATCH_TRIALS: u64 = 256;
const MAX_BATCH_TRIALS: u64 = 8192;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("invalid simulation parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("trial {trial} (seed {seed}): {source}")]
    Trial {
        trial: u64,
        seed: u64,
        #[source]
        source: PrecoderError,
    },
}

/// Two bits carried by one QPSK symbol.
pub type BitPair = [bool; 2];

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Gray-coded, unit-energy QPSK constellation. The first bit selects the
/// sign of the real part, the second the sign of the imaginary part.
#[derive(Debug, Clone, Copy, Default)]
pub struct QpskMap;

impl QpskMap {
    /// Constellation in bit order `00, 01, 11, 10`.
    pub const TABLE: [(BitPair, Complex64); 4] = [
        ([false, false], Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2)),
        ([false, true], Complex64::new(FRAC_1_SQRT_2, -FRAC_1_SQRT_2)),
        ([true, true], Complex64::new(-FRAC_1_SQRT_2, -FRAC_1_SQRT_2)),
        ([true, false], Complex64::new(-FRAC_1_SQRT_2, FRAC_1_SQRT_2)),
    ];
}

pub fn modulate(bits: BitPair) -> Complex64 {
    let re = if bits[0] { -FRAC_1_SQRT_2 } else { FRAC_1_SQRT_2 };
    let im = if bits[1] { -FRAC_1_SQRT_2 } else { FRAC_1_SQRT_2 };
    Complex64::new(re, im)
}

/// Quadrant decision; an exact zero decides bit 0.
pub fn demodulate(y: Complex64) -> BitPair {
    [y.re < 0.0, y.im < 0.0]
}

/// How the RZF regularization is chosen for each simulated point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaPolicy {
    /// `α` equal to the design noise variance `σ²/p_k`.
    Sigma2,
    Fixed(f64),
}

impl AlphaPolicy {
    pub fn resolve(self, design_sigma2: f64) -> f64 {
        match self {
            AlphaPolicy::Sigma2 => design_sigma2,
            AlphaPolicy::Fixed(a) => a,
        }
    }
}

/// Noise variance handed to the precoder design at a given power model.
///
/// The precoders work with unit-norm vectors and unit-power symbols, so the
/// transmit power enters only through the ratio `σ²/p_k`. With equal
/// allocation this is `K·σ²/P` for every user.
pub fn design_sigma2(pw: &NoisePowerModel) -> f64 {
    pw.noise_to_power(0)
}

/// Monte-Carlo BER result at one SNR.
#[derive(Debug, Clone, PartialEq)]
pub struct BerEstimate {
    pub snr_db: f64,
    pub method: Method,
    pub bit_errors: u64,
    pub bits_sent: u64,
    pub ber: f64,
    pub nt: usize,
    pub k_users: usize,
    pub seed: u64,
}

/// Outcome of one channel draw.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub bit_errors: u64,
    pub bits: u64,
    /// `|h_kᴴ w_k|²` for each user.
    pub effective_gains: Vec<f64>,
}

/// One BER operating point: link geometry, precoder, SNR and stopping rule.
#[derive(Debug, Clone, PartialEq)]
pub struct BerPoint {
    pub nt: usize,
    pub k_users: usize,
    pub method: Method,
    pub snr_db: f64,
    pub sigma2: f64,
    pub alpha: AlphaPolicy,
    pub min_bits: u64,
    pub max_bits: u64,
    pub seed: u64,
}

impl BerPoint {
    pub fn new(nt: usize, k_users: usize, method: Method, snr_db: f64, seed: u64) -> Self {
        Self {
            nt,
            k_users,
            method,
            snr_db,
            sigma2: 1.0,
            alpha: AlphaPolicy::Sigma2,
            min_bits: DEFAULT_MIN_BITS,
            max_bits: DEFAULT_MAX_BITS,
            seed,
        }
    }

    fn validate(&self) -> Result<NoisePowerModel, SimError> {
        if self.nt == 0 || self.k_users == 0 {
            return Err(ChannelError::InvalidDimension {
                nt: self.nt,
                k_users: self.k_users,
            }
            .into());
        }
        if self.method == Method::Zf && self.nt < self.k_users {
            return Err(SimError::InvalidParameter(format!(
                "zf needs nt >= users (nt = {}, users = {})",
                self.nt, self.k_users
            )));
        }
        if self.max_bits == 0 {
            return Err(SimError::InvalidParameter("max_bits must be > 0".into()));
        }
        if !self.snr_db.is_finite() {
            return Err(SimError::InvalidParameter(format!(
                "snr_db must be finite, got {}",
                self.snr_db
            )));
        }
        Ok(NoisePowerModel::from_snr_db(
            self.snr_db,
            self.sigma2,
            self.k_users,
        )?)
    }

    /// Runs trial `index` in isolation.
    pub fn trial(&self, index: u64) -> Result<TrialOutcome, SimError> {
        let pw = self.validate()?;
        self.run_trial(&pw, index)
    }

    fn run_trial(&self, pw: &NoisePowerModel, index: u64) -> Result<TrialOutcome, SimError> {
        let mut rng = RngStream::new(self.seed, index).rng();
        let ch = ChannelSet::sample_with(self.nt, self.k_users, &mut rng)?;
        let design = design_sigma2(pw);
        let precoder = build_precoder_matrix(&ch, self.method, design, self.alpha.resolve(design))
            .map_err(|source| SimError::Trial {
                trial: index,
                seed: self.seed,
                source,
            })?;

        let k_users = self.k_users;
        let bits: Vec<BitPair> = (0..k_users).map(|_| [rng.gen(), rng.gen()]).collect();
        let noise: Vec<Complex64> = (0..k_users)
            .map(|_| complex_gaussian(&mut rng, pw.sigma2()))
            .collect();
        let tx: Vec<Complex64> = bits
            .iter()
            .enumerate()
            .map(|(j, b)| modulate(*b) * pw.power(j).sqrt())
            .collect();

        let mut bit_errors = 0;
        let mut effective_gains = Vec::with_capacity(k_users);
        for k in 0..k_users {
            let hk = ch.matrix().column(k);
            let mut y = noise[k];
            let mut own = Complex64::new(0.0, 0.0);
            for (j, wj) in precoder.columns().iter().enumerate() {
                let g = hk.dot(wj);
                if j == k {
                    own = g;
                }
                y += g * tx[j];
            }
            effective_gains.push(own.norm_sqr());
            let decided = demodulate(y / (own * pw.power(k).sqrt()));
            bit_errors += decided.iter().zip(&bits[k]).filter(|(a, b)| a != b).count() as u64;
        }
        Ok(TrialOutcome {
            bit_errors,
            bits: 2 * k_users as u64,
            effective_gains,
        })
    }

    /// Runs trials `0, 1, 2, ...` until at least `min_bits` bits and
    /// [`TARGET_ERRORS`] errors have accumulated, or `max_bits` is reached.
    ///
    /// Batches of trials are evaluated in parallel and merged in index order,
    /// so the result does not depend on the number of worker threads.
    pub fn run(&self) -> Result<BerEstimate, SimError> {
        let pw = self.validate()?;
        let mut bit_errors = 0u64;
        let mut bits_sent = 0u64;
        let mut next = 0u64;
        let done = |bits: u64, errors: u64| {
            bits >= self.max_bits || (bits >= self.min_bits && errors >= TARGET_ERRORS)
        };
        let bits_per_trial = 2 * self.k_users as u64;
        'outer: while !done(bits_sent, bit_errors) {
            let to_min = self.min_bits.saturating_sub(bits_sent).div_ceil(bits_per_trial);
            let to_max = (self.max_bits - bits_sent).div_ceil(bits_per_trial);
            let size = to_min.clamp(MIN_BATCH_TRIALS, MAX_BATCH_TRIALS).min(to_max);
            let batch: Vec<Result<TrialOutcome, SimError>> = (next..next + size)
                .into_par_iter()
                .map(|t| self.run_trial(&pw, t))
                .collect();
            for outcome in batch {
                let outcome = outcome?;
                bit_errors += outcome.bit_errors;
                bits_sent += outcome.bits;
                next += 1;
                if done(bits_sent, bit_errors) {
                    break 'outer;
                }
            }
        }
        Ok(BerEstimate {
            snr_db: self.snr_db,
            method: self.method,
            bit_errors,
            bits_sent,
            ber: bit_errors as f64 / bits_sent as f64,
            nt: self.nt,
            k_users: self.k_users,
            seed: self.seed,
        })
    }
}

/// BER at one SNR with `σ² = 1` and `α = σ²/p_k`.
pub fn simulate_ber_point(
    nt: usize,
    k_users: usize,
    method: Method,
    snr_db: f64,
    min_bits: u64,
    max_bits: u64,
    seed: u64,
) -> Result<BerEstimate, SimError> {
    BerPoint {
        min_bits,
        max_bits,
        ..BerPoint::new(nt, k_users, method, snr_db, seed)
    }
    .run()
}

#[cfg(test)]
mod tests {
    use super::*;

    const ALL_BITS: [BitPair; 4] = [[false, false], [false, true], [true, false], [true, true]];

    #[test]
    fn mapping_table() {
        let s = modulate([false, false]);
        assert!((s.re - 0.7071067811865476).abs() < 1e-15);
        assert!((s.im - 0.7071067811865476).abs() < 1e-15);
        let s = modulate([true, true]);
        assert!((s.re + 0.7071067811865476).abs() < 1e-15);
        assert!((s.im + 0.7071067811865476).abs() < 1e-15);
        for (bits, sym) in QpskMap::TABLE {
            assert_eq!(modulate(bits), sym);
            assert!((sym.norm_sqr() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn gray_neighbours_differ_in_one_bit() {
        // TABLE walks the constellation counter-clockwise
        for i in 0..4 {
            let (a, _) = QpskMap::TABLE[i];
            let (b, _) = QpskMap::TABLE[(i + 1) % 4];
            let diff = a.iter().zip(&b).filter(|(x, y)| x != y).count();
            assert_eq!(diff, 1);
        }
    }

    #[test]
    fn noiseless_round_trip() {
        for b in ALL_BITS {
            assert_eq!(demodulate(modulate(b)), b);
        }
    }

    #[test]
    fn quadrant_decisions() {
        assert_eq!(demodulate(Complex64::new(0.1, -3.0)), [false, true]);
        assert_eq!(demodulate(Complex64::new(0.0, 0.0)), [false, false]);
        assert_eq!(demodulate(Complex64::new(-2.0, 0.5)), [true, false]);
    }

    #[test]
    fn vanishing_noise_zf_is_error_free() {
        let est = simulate_ber_point(4, 4, Method::Zf, 120.0, 20_000, 20_000, 5).unwrap();
        assert_eq!(est.bit_errors, 0);
        assert_eq!(est.bits_sent, 20_000);
        assert_eq!(est.ber, 0.0);
    }

    #[test]
    fn deterministic_and_thread_independent() {
        let point = BerPoint {
            min_bits: 5_000,
            max_bits: 50_000,
            ..BerPoint::new(4, 4, Method::Rzf, 6.0, 99)
        };
        let a = point.run().unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let b = pool.install(|| point.run()).unwrap();
        assert_eq!(a, b);
        assert!(a.bits_sent >= 5_000 && a.bit_errors >= TARGET_ERRORS);
    }

    #[test]
    fn slnr_matches_rzf_counters() {
        for (nt, snr) in [(4, 0.0), (6, 5.0), (2, 10.0)] {
            let rzf = simulate_ber_point(nt, 4, Method::Rzf, snr, 10_000, 200_000, 17).unwrap();
            let slnr =
                simulate_ber_point(nt, 4, Method::SlnrClosed, snr, 10_000, 200_000, 17).unwrap();
            assert_eq!(
                (rzf.bit_errors, rzf.bits_sent),
                (slnr.bit_errors, slnr.bits_sent)
            );
        }
    }

    #[test]
    fn stopping_rule() {
        // low SNR: errors come quickly, so min_bits decides
        let est = simulate_ber_point(2, 2, Method::Rzf, -5.0, 1_000, 1_000_000, 1).unwrap();
        assert!(est.bits_sent >= 1_000 && est.bits_sent < 1_000 + 4);
        // cap wins when errors are rare
        let est = simulate_ber_point(4, 4, Method::Zf, 120.0, 1_000, 4_000, 1).unwrap();
        assert_eq!(est.bits_sent, 4_000);
    }

    #[test]
    fn rejects_invalid_points() {
        assert!(matches!(
            simulate_ber_point(2, 4, Method::Zf, 10.0, 100, 100, 0),
            Err(SimError::InvalidParameter(_))
        ));
        assert!(matches!(
            simulate_ber_point(0, 4, Method::Rzf, 10.0, 100, 100, 0),
            Err(SimError::Channel(_))
        ));
        assert!(simulate_ber_point(2, 2, Method::Rzf, 10.0, 100, 0, 0).is_err());
        assert!(simulate_ber_point(2, 2, Method::Rzf, f64::NAN, 100, 10, 0).is_err());
    }

    #[test]
    fn fixed_alpha_policy() {
        assert_eq!(AlphaPolicy::Fixed(0.3).resolve(2.0), 0.3);
        assert_eq!(AlphaPolicy::Sigma2.resolve(2.0), 2.0);
    }
}
