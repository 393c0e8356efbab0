//! Figures of merit: SLNR, receive-side SINR and Shannon sum rate.

use thiserror::Error;

use crate::channel::{ChannelError, ChannelSet};
use crate::numerics::ComplexVector;
use crate::precoders::{PrecoderMatrix, UNIT_NORM_TOL};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error("vector norm {0} is not unit")]
    NotUnitNorm(f64),
    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Noise variance and per-user transmit powers.
#[derive(Debug, Clone, PartialEq)]
pub struct NoisePowerModel {
    sigma2: f64,
    total_power: f64,
    powers: Vec<f64>,
}

impl NoisePowerModel {
    /// Splits `total_power` equally over `k_users`.
    pub fn equal(sigma2: f64, total_power: f64, k_users: usize) -> Result<Self, MetricsError> {
        if k_users == 0 {
            return Err(MetricsError::InvalidParameter("k_users must be >= 1".into()));
        }
        if !(total_power >= 0.0) || !total_power.is_finite() {
            return Err(MetricsError::InvalidParameter(format!(
                "total power must be finite and >= 0, got {total_power}"
            )));
        }
        Self::with_powers(sigma2, vec![total_power / k_users as f64; k_users])
    }

    /// Equal allocation with `P = σ²·10^(snr_db/10)`.
    pub fn from_snr_db(snr_db: f64, sigma2: f64, k_users: usize) -> Result<Self, MetricsError> {
        Self::equal(sigma2, sigma2 * 10f64.powf(snr_db / 10.0), k_users)
    }

    pub fn with_powers(sigma2: f64, powers: Vec<f64>) -> Result<Self, MetricsError> {
        if !(sigma2 > 0.0) || !sigma2.is_finite() {
            return Err(MetricsError::InvalidParameter(format!(
                "sigma2 must be positive and finite, got {sigma2}"
            )));
        }
        if let Some(p) = powers.iter().find(|p| !(**p >= 0.0) || !p.is_finite()) {
            return Err(MetricsError::InvalidParameter(format!(
                "per-user power must be finite and >= 0, got {p}"
            )));
        }
        let total_power = powers.iter().sum();
        Ok(Self {
            sigma2,
            total_power,
            powers,
        })
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn total_power(&self) -> f64 {
        self.total_power
    }

    pub fn powers(&self) -> &[f64] {
        &self.powers
    }

    pub fn power(&self, k: usize) -> f64 {
        self.powers[k]
    }

    /// `σ² / p_k`: the noise variance seen by a unit-power design for user `k`.
    pub fn noise_to_power(&self, k: usize) -> f64 {
        self.sigma2 / self.powers[k]
    }

    /// `10·log10(P/σ²)`.
    pub fn snr_db(&self) -> f64 {
        10.0 * (self.total_power / self.sigma2).log10()
    }
}

fn check_unit(w: &ComplexVector) -> Result<(), MetricsError> {
    let n = w.norm();
    if (n - 1.0).abs() > UNIT_NORM_TOL || !n.is_finite() {
        Err(MetricsError::NotUnitNorm(n))
    } else {
        Ok(())
    }
}

/// `|h_kᴴ w|² / (σ² + ‖H_{-k}ᴴ w‖²)` for a unit-norm `w`.
pub fn slnr_value(
    ch: &ChannelSet,
    k: usize,
    w: &ComplexVector,
    sigma2: f64,
) -> Result<f64, MetricsError> {
    check_unit(w)?;
    if !(sigma2 > 0.0) || !sigma2.is_finite() {
        return Err(MetricsError::InvalidParameter(format!(
            "sigma2 must be positive and finite, got {sigma2}"
        )));
    }
    if w.dim() != ch.nt() {
        return Err(MetricsError::DimensionMismatch {
            what: "precoder length",
            expected: ch.nt(),
            found: w.dim(),
        });
    }
    let hk = ch.user(k)?;
    let others = ch.leave_one_out(k)?;
    let leakage = others
        .adjoint_mul_vec(w)
        .expect("dimension checked above")
        .norm_sqr();
    Ok(hk.dot(w).norm_sqr() / (sigma2 + leakage))
}

fn check_dims(
    ch: &ChannelSet,
    precoder: &PrecoderMatrix,
    pw: &NoisePowerModel,
) -> Result<(), MetricsError> {
    if precoder.k_users() != ch.k_users() {
        return Err(MetricsError::DimensionMismatch {
            what: "precoder users",
            expected: ch.k_users(),
            found: precoder.k_users(),
        });
    }
    if precoder.nt() != ch.nt() {
        return Err(MetricsError::DimensionMismatch {
            what: "precoder antennas",
            expected: ch.nt(),
            found: precoder.nt(),
        });
    }
    if pw.powers().len() != ch.k_users() {
        return Err(MetricsError::DimensionMismatch {
            what: "power allocation",
            expected: ch.k_users(),
            found: pw.powers().len(),
        });
    }
    Ok(())
}

/// Receive SINR of user `k`:
/// `p_k|h_kᴴw_k|² / (σ² + Σ_{j≠k} p_j|h_kᴴw_j|²)`.
pub fn sinr(
    ch: &ChannelSet,
    precoder: &PrecoderMatrix,
    pw: &NoisePowerModel,
    k: usize,
) -> Result<f64, MetricsError> {
    check_dims(ch, precoder, pw)?;
    let hk = ch.user(k)?;
    let mut signal = 0.0;
    let mut interference = 0.0;
    for (j, wj) in precoder.columns().iter().enumerate() {
        let g = pw.power(j) * hk.dot(wj).norm_sqr();
        if j == k {
            signal = g;
        } else {
            interference += g;
        }
    }
    Ok(signal / (pw.sigma2() + interference))
}

/// SINR of every user, in user order.
pub fn per_user_sinr(
    ch: &ChannelSet,
    precoder: &PrecoderMatrix,
    pw: &NoisePowerModel,
) -> Result<Vec<f64>, MetricsError> {
    (0..ch.k_users()).map(|k| sinr(ch, precoder, pw, k)).collect()
}

/// `Σ_k log2(1 + SINR_k)` in bits per channel use.
pub fn sum_rate(
    ch: &ChannelSet,
    precoder: &PrecoderMatrix,
    pw: &NoisePowerModel,
) -> Result<f64, MetricsError> {
    Ok(rate_from_sinr(&per_user_sinr(ch, precoder, pw)?))
}

pub fn rate_from_sinr(sinrs: &[f64]) -> f64 {
    sinrs.iter().map(|s| (1.0 + s).log2()).sum()
}

/// Sum rate of one channel realization together with where it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct RateSample {
    pub snr_db: f64,
    pub per_user_sinr: Vec<f64>,
    pub sum_rate_bits: f64,
    pub trial_index: u64,
    pub seed: u64,
}

impl RateSample {
    pub fn measure(
        ch: &ChannelSet,
        precoder: &PrecoderMatrix,
        pw: &NoisePowerModel,
        trial_index: u64,
        seed: u64,
    ) -> Result<Self, MetricsError> {
        let per_user_sinr = per_user_sinr(ch, precoder, pw)?;
        Ok(Self {
            snr_db: pw.snr_db(),
            sum_rate_bits: rate_from_sinr(&per_user_sinr),
            per_user_sinr,
            trial_index,
            seed,
        })
    }
}
