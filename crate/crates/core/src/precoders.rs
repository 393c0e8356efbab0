//! Linear downlink precoders: zero-forcing (ZF), regularized zero-forcing
//! (RZF) and the SLNR-maximizing precoder.
//!
//! The SLNR precoder for user `k` maximizes
//! `|h_kᴴ w|² / (σ² + ‖H_{-k}ᴴ w‖²)` over unit-norm `w`, i.e. it is the
//! dominant eigenvector of `(σ²I + H_{-k}H_{-k}ᴴ)⁻¹ h_k h_kᴴ`. That operator
//! has rank one, so its only nonzero eigenpair is known in closed form:
//!
//! ```text
//! w ∝ (σ²I + H_{-k}H_{-k}ᴴ)⁻¹ h_k,      λ = h_kᴴ (σ²I + H_{-k}H_{-k}ᴴ)⁻¹ h_k
//! ```
//!
//! Since `σ²I + HHᴴ = (σ²I + H_{-k}H_{-k}ᴴ) + h_k h_kᴴ`, the Sherman-Morrison
//! identity makes this direction a positive multiple of the RZF direction
//! `(σ²I + HHᴴ)⁻¹ h_k` with `α = σ²`. Both SLNR routes ([`slnr_closed_form`],
//! [`slnr_eig`]) are kept separate from [`rzf_direction`] so the equivalence
//! can be checked rather than assumed.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

use crate::channel::{ChannelError, ChannelSet};
use crate::numerics::{
    dominant_eigvec, Cholesky, ComplexMatrix, ComplexVector, Eigenpair, LinalgError,
    DEFAULT_EIG_MAX_ITER, DEFAULT_EIG_TOL,
};

/// Largest accepted 1-norm condition number of `HᴴH` for ZF.
pub const ZF_CONDITION_LIMIT: f64 = 1e12;
/// Allowed deviation from unit norm for inputs of [`alignment`].
pub const UNIT_NORM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PrecoderError {
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("zero-forcing needs nt >= users, got nt = {nt}, users = {k_users}")]
    DimensionMismatch { nt: usize, k_users: usize },
    #[error("channel Gram matrix is rank deficient (condition number {condition:e})")]
    RankDeficient { condition: f64 },
    #[error("HH^H is singular; alpha = 0 needs an invertible HH^H")]
    SingularSystem,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("vector norm {0} is not unit")]
    NotUnitNorm(f64),
    #[error("user {user}: {source}")]
    User {
        user: usize,
        #[source]
        source: Box<PrecoderError>,
    },
}

impl PrecoderError {
    fn for_user(self, user: usize) -> Self {
        PrecoderError::User {
            user,
            source: Box::new(self),
        }
    }
}

/// Which construction produced a precoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Zf,
    Rzf,
    /// SLNR direction from the closed-form eigenvector.
    SlnrClosed,
    /// SLNR direction from power iteration on the SLNR operator.
    SlnrEig,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Zf, Method::Rzf, Method::SlnrClosed, Method::SlnrEig];

    pub fn name(self) -> &'static str {
        match self {
            Method::Zf => "zf",
            Method::Rzf => "rzf",
            Method::SlnrClosed => "slnr",
            Method::SlnrEig => "slnr_eig",
        }
    }

    pub fn is_slnr(self) -> bool {
        matches!(self, Method::SlnrClosed | Method::SlnrEig)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "zf" => Ok(Method::Zf),
            "rzf" => Ok(Method::Rzf),
            "slnr" | "slnr_closed" => Ok(Method::SlnrClosed),
            "slnr_eig" => Ok(Method::SlnrEig),
            other => Err(format!(
                "unknown method '{other}' (expected zf, rzf, slnr, slnr_closed or slnr_eig)"
            )),
        }
    }
}

/// Parameters a [`PrecoderMatrix`] was built with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecoderParams {
    /// RZF regularization; unused by ZF and SLNR.
    pub alpha: f64,
    /// Noise variance in the SLNR denominator.
    pub sigma2: f64,
}

/// One unit-norm precoding vector per user.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecoderMatrix {
    method: Method,
    columns: Vec<ComplexVector>,
    params: PrecoderParams,
}

impl PrecoderMatrix {
    /// Wraps caller-provided columns; each must be unit norm within [`UNIT_NORM_TOL`].
    pub fn new(
        method: Method,
        columns: Vec<ComplexVector>,
        params: PrecoderParams,
    ) -> Result<Self, PrecoderError> {
        for (k, w) in columns.iter().enumerate() {
            check_unit(w).map_err(|e| e.for_user(k))?;
        }
        Ok(Self {
            method,
            columns,
            params,
        })
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn params(&self) -> PrecoderParams {
        self.params
    }

    pub fn k_users(&self) -> usize {
        self.columns.len()
    }

    pub fn nt(&self) -> usize {
        self.columns.first().map_or(0, ComplexVector::dim)
    }

    pub fn column(&self, k: usize) -> &ComplexVector {
        &self.columns[k]
    }

    pub fn columns(&self) -> &[ComplexVector] {
        &self.columns
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_columns(self.nt(), &self.columns).expect("columns share dimension")
    }
}

/// Closed-form SLNR solution for one user.
#[derive(Debug, Clone, PartialEq)]
pub struct SlnrSolution {
    /// Unit-norm precoder.
    pub w: ComplexVector,
    /// Squared norm of `(σ²I + H_{-k}H_{-k}ᴴ)⁻¹ h_k` before normalization.
    pub gamma: f64,
    /// Maximum SLNR, `h_kᴴ (σ²I + H_{-k}H_{-k}ᴴ)⁻¹ h_k`.
    pub lambda: f64,
}

fn check_unit(w: &ComplexVector) -> Result<(), PrecoderError> {
    let n = w.norm();
    if (n - 1.0).abs() > UNIT_NORM_TOL || !n.is_finite() {
        Err(PrecoderError::NotUnitNorm(n))
    } else {
        Ok(())
    }
}

fn check_positive(name: &str, value: f64) -> Result<(), PrecoderError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(PrecoderError::InvalidParameter(format!(
            "{name} must be positive and finite, got {value}"
        )))
    }
}

fn unit(v: &ComplexVector) -> Result<ComplexVector, PrecoderError> {
    v.normalized()
        .map(|(u, _)| u)
        .ok_or_else(|| PrecoderError::Linalg(LinalgError::NonFinite(0)))
}

/// All ZF columns: column `k` of `H(HᴴH)⁻¹`, each normalized.
fn zf_columns(ch: &ChannelSet) -> Result<Vec<ComplexVector>, PrecoderError> {
    let (nt, k_users) = (ch.nt(), ch.k_users());
    if nt < k_users {
        return Err(PrecoderError::DimensionMismatch { nt, k_users });
    }
    let h = ch.matrix();
    let gram = h.inner_gram(0.0);
    let chol = Cholesky::factor(&gram).map_err(|e| match e {
        LinalgError::NotPositiveDefinite { .. } => PrecoderError::RankDeficient {
            condition: f64::INFINITY,
        },
        other => other.into(),
    })?;
    let gram_inv = chol.inverse();
    let condition = gram.norm_one() * gram_inv.norm_one();
    if !(condition <= ZF_CONDITION_LIMIT) {
        return Err(PrecoderError::RankDeficient { condition });
    }
    (0..k_users)
        .map(|k| unit(&h.mul_vec(&gram_inv.column(k))?))
        .collect()
}

/// Zero-forcing direction for user `k`: column `k` of the pseudo-inverse
/// `H(HᴴH)⁻¹`, normalized. Nulls every other user's channel.
pub fn zf_direction(ch: &ChannelSet, k: usize) -> Result<ComplexVector, PrecoderError> {
    ch.check_user(k)?;
    Ok(zf_columns(ch)?.swap_remove(k))
}

fn rzf_factor(ch: &ChannelSet, alpha: f64) -> Result<Cholesky, PrecoderError> {
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(PrecoderError::InvalidParameter(format!(
            "alpha must be finite and >= 0, got {alpha}"
        )));
    }
    if alpha == 0.0 && ch.k_users() < ch.nt() {
        return Err(PrecoderError::SingularSystem);
    }
    let a = ch.matrix().outer_gram(alpha);
    Cholesky::factor(&a).map_err(|e| match e {
        LinalgError::NotPositiveDefinite { .. } => PrecoderError::SingularSystem,
        other => other.into(),
    })
}

/// Regularized ZF direction `(αI + HHᴴ)⁻¹ h_k`, normalized.
pub fn rzf_direction(ch: &ChannelSet, k: usize, alpha: f64) -> Result<ComplexVector, PrecoderError> {
    let hk = ch.user(k)?;
    let chol = rzf_factor(ch, alpha)?;
    unit(&chol.solve(&hk)?)
}

fn slnr_factor(ch: &ChannelSet, k: usize, sigma2: f64) -> Result<(ComplexVector, Cholesky), PrecoderError> {
    check_positive("sigma2", sigma2)?;
    let hk = ch.user(k)?;
    let others = ch.leave_one_out(k)?;
    let chol = Cholesky::factor(&others.outer_gram(sigma2))?;
    Ok((hk, chol))
}

/// SLNR precoder for user `k` from the closed-form eigenvector of the
/// rank-one SLNR operator.
pub fn slnr_closed_form(ch: &ChannelSet, k: usize, sigma2: f64) -> Result<SlnrSolution, PrecoderError> {
    let (hk, chol) = slnr_factor(ch, k, sigma2)?;
    let direction = chol.solve(&hk)?;
    let (w, norm) = direction
        .normalized()
        .ok_or(PrecoderError::Linalg(LinalgError::NonFinite(0)))?;
    Ok(SlnrSolution {
        w,
        gamma: norm * norm,
        lambda: hk.dot(&direction).re,
    })
}

/// Dominant eigenpair of `v ↦ (σ²I + H_{-k}H_{-k}ᴴ)⁻¹ h_k (h_kᴴ v)` by power
/// iteration started from `h_k`.
pub fn slnr_eigenpair(ch: &ChannelSet, k: usize, sigma2: f64) -> Result<Eigenpair, PrecoderError> {
    let (hk, chol) = slnr_factor(ch, k, sigma2)?;
    let image = chol.solve(&hk)?;
    let pair = dominant_eigvec(
        |v| image.scale(hk.dot(v)),
        hk.dim(),
        &hk,
        DEFAULT_EIG_TOL,
        DEFAULT_EIG_MAX_ITER,
    )?;
    Ok(pair)
}

/// SLNR precoder for user `k` via the eigen-solver path.
pub fn slnr_eig(ch: &ChannelSet, k: usize, sigma2: f64) -> Result<ComplexVector, PrecoderError> {
    Ok(slnr_eigenpair(ch, k, sigma2)?.vector)
}

/// `|w1ᴴ w2|` for unit vectors: 1 when they agree up to a phase, 0 when orthogonal.
pub fn alignment(w1: &ComplexVector, w2: &ComplexVector) -> Result<f64, PrecoderError> {
    check_unit(w1)?;
    check_unit(w2)?;
    if w1.dim() != w2.dim() {
        return Err(LinalgError::DimensionMismatch {
            expected: w1.dim(),
            found: w2.dim(),
        }
        .into());
    }
    Ok(w1.dot(w2).norm().min(1.0))
}

/// Rotates `w` by a unit-modulus scalar so that its largest-magnitude entry
/// (first one on ties) is real and positive. Idempotent.
pub fn canonical_phase(w: &ComplexVector) -> ComplexVector {
    let Some((pivot, mag)) = w
        .iter()
        .map(|z| z.norm())
        .enumerate()
        .fold(None, |best: Option<(usize, f64)>, (i, m)| match best {
            Some((_, bm)) if bm >= m => best,
            _ => Some((i, m)),
        })
    else {
        return w.clone();
    };
    if mag == 0.0 {
        return w.clone();
    }
    let rotation = w[pivot].conj() / mag;
    let mut out = w.scale(rotation);
    out[pivot] = Complex64::new(mag, 0.0);
    out
}

/// Builds the full precoder for every user with the chosen method.
///
/// `sigma2` is the noise variance used by the SLNR methods; `alpha` is the
/// RZF regularization. Per-user failures carry the user index.
pub fn build_precoder_matrix(
    ch: &ChannelSet,
    method: Method,
    sigma2: f64,
    alpha: f64,
) -> Result<PrecoderMatrix, PrecoderError> {
    let k_users = ch.k_users();
    let columns = match method {
        Method::Zf => zf_columns(ch).map_err(|e| e.for_user(0))?,
        Method::Rzf => {
            let chol = rzf_factor(ch, alpha).map_err(|e| e.for_user(0))?;
            (0..k_users)
                .map(|k| {
                    chol.solve(&ch.matrix().column(k))
                        .map_err(PrecoderError::from)
                        .and_then(|d| unit(&d))
                        .map_err(|e| e.for_user(k))
                })
                .collect::<Result<_, _>>()?
        }
        Method::SlnrClosed => (0..k_users)
            .map(|k| {
                slnr_closed_form(ch, k, sigma2)
                    .map(|s| s.w)
                    .map_err(|e| e.for_user(k))
            })
            .collect::<Result<_, _>>()?,
        Method::SlnrEig => (0..k_users)
            .map(|k| slnr_eig(ch, k, sigma2).map_err(|e| e.for_user(k)))
            .collect::<Result<_, _>>()?,
    };
    Ok(PrecoderMatrix {
        method,
        columns,
        params: PrecoderParams { alpha, sigma2 },
    })
}
