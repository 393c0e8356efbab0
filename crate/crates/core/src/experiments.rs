//! Batch studies behind the `precoderlab` binary: sum rate versus SNR, QPSK
//! BER versus SNR, and the SLNR/RZF equivalence certification.
//!
//! Every study is a pure function of its [`ExperimentConfig`]. Trials are
//! keyed by `(seed, trial_index)` and fanned out with rayon, then reduced in
//! index order, so the CSV output is byte-identical whatever the thread count.
//!
//! In the sum-rate and BER sweeps the precoders are designed with the noise
//! variance normalized to the per-user transmit power, `σ²/p_k = K·σ²/P`
//! (see [`linksim::design_sigma2`]), and `--alpha sigma2` sets the RZF
//! regularization to that same value. The equivalence study works directly at
//! channel level with the configured `σ²`.

use std::fmt::{self, Write as _};
use std::io;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::channel::{derive_seed, sample_channel, ChannelError, RngStream};
use crate::linksim::{
    self, AlphaPolicy, BerEstimate, BerPoint, SimError, DEFAULT_MAX_BITS, DEFAULT_MIN_BITS,
};
use crate::metrics::{self, MetricsError, NoisePowerModel};
use crate::precoders::{
    alignment, build_precoder_matrix, rzf_direction, slnr_closed_form, slnr_eigenpair, Method,
    PrecoderError,
};

/// Minimum alignment for the equivalence certification to pass.
pub const ALIGNMENT_THRESHOLD: f64 = 1.0 - 1e-10;
/// Largest relative SLNR eigenvalue error for the certification to pass.
pub const LAMBDA_REL_TOL: f64 = 1e-9;
/// Trials evaluated per parallel chunk in the sum-rate and equivalence studies.
const CHUNK_TRIALS: u64 = 1024;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid {field}: {message}")]
    Config { field: &'static str, message: String },
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error("trial {trial} (seed {seed}), user {user}: {source}")]
    Precoder {
        trial: u64,
        seed: u64,
        user: usize,
        #[source]
        source: PrecoderError,
    },
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl ExperimentError {
    fn config(field: &'static str, message: impl Into<String>) -> Self {
        ExperimentError::Config {
            field,
            message: message.into(),
        }
    }

    pub fn is_config(&self) -> bool {
        matches!(self, ExperimentError::Config { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    SumRate,
    Ber,
    Equiv,
}

impl FromStr for Command {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sumrate" => Ok(Command::SumRate),
            "ber" => Ok(Command::Ber),
            "equiv" => Ok(Command::Equiv),
            other => Err(ExperimentError::config(
                "command",
                format!("'{other}' (expected sumrate, ber or equiv)"),
            )),
        }
    }
}

/// Named configurations for the four reference scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Sum rate, `nt = K = 4`.
    Fig1a,
    /// Sum rate, `nt = K = 2`.
    Fig1b,
    /// QPSK BER, `nt = 4`, `K = 4`.
    Fig2a,
    /// QPSK BER, `nt = 6`, `K = 4`.
    Fig2b,
}

impl Preset {
    pub fn geometry(self) -> (usize, usize) {
        match self {
            Preset::Fig1a => (4, 4),
            Preset::Fig1b => (2, 2),
            Preset::Fig2a => (4, 4),
            Preset::Fig2b => (6, 4),
        }
    }

    pub fn command(self) -> Command {
        match self {
            Preset::Fig1a | Preset::Fig1b => Command::SumRate,
            Preset::Fig2a | Preset::Fig2b => Command::Ber,
        }
    }

    pub fn config(self) -> ExperimentConfig {
        let (nt, k_users) = self.geometry();
        ExperimentConfig {
            nt,
            k_users,
            ..ExperimentConfig::new(self.command())
        }
    }
}

impl FromStr for Preset {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fig1a" => Ok(Preset::Fig1a),
            "fig1b" => Ok(Preset::Fig1b),
            "fig2a" => Ok(Preset::Fig2a),
            "fig2b" => Ok(Preset::Fig2b),
            other => Err(ExperimentError::config(
                "preset",
                format!("'{other}' (expected fig1a, fig1b, fig2a or fig2b)"),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub command: Command,
    pub nt: usize,
    pub k_users: usize,
    pub snr_db: Vec<f64>,
    /// Channel draws per point (sum rate) or in total (equivalence).
    pub trials: u64,
    pub min_bits: u64,
    pub max_bits: u64,
    pub methods: Vec<Method>,
    pub alpha: AlphaPolicy,
    pub sigma2: f64,
    pub seed: u64,
}

pub const DEFAULT_SNRS: &str = "-5:5:30";

impl ExperimentConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            nt: 4,
            k_users: 4,
            snr_db: parse_snr_list(DEFAULT_SNRS).expect("default SNR list parses"),
            trials: match command {
                Command::Equiv => 1000,
                _ => 2000,
            },
            min_bits: DEFAULT_MIN_BITS,
            max_bits: DEFAULT_MAX_BITS,
            methods: vec![Method::Zf, Method::Rzf, Method::SlnrClosed],
            alpha: AlphaPolicy::Sigma2,
            sigma2: 1.0,
            seed: 1,
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.nt == 0 {
            return Err(ExperimentError::config("nt", "must be >= 1"));
        }
        if self.k_users == 0 {
            return Err(ExperimentError::config("users", "must be >= 1"));
        }
        if !(self.sigma2 > 0.0) || !self.sigma2.is_finite() {
            return Err(ExperimentError::config(
                "sigma2",
                format!("must be positive and finite, got {}", self.sigma2),
            ));
        }
        if let AlphaPolicy::Fixed(a) = self.alpha {
            if !(a >= 0.0) || !a.is_finite() {
                return Err(ExperimentError::config(
                    "alpha",
                    format!("must be finite and >= 0, got {a}"),
                ));
            }
        }
        if self.command == Command::Equiv {
            if self.trials == 0 {
                return Err(ExperimentError::config("trials", "must be >= 1"));
            }
            return Ok(());
        }
        if self.snr_db.is_empty() {
            return Err(ExperimentError::config("snrs", "list is empty"));
        }
        if self.snr_db.iter().any(|s| !s.is_finite()) {
            return Err(ExperimentError::config("snrs", "values must be finite"));
        }
        if self.snr_db.windows(2).any(|w| w[1] <= w[0]) {
            return Err(ExperimentError::config("snrs", "must be strictly increasing"));
        }
        if self.methods.is_empty() {
            return Err(ExperimentError::config("methods", "list is empty"));
        }
        if self.methods.contains(&Method::Zf) && self.nt < self.k_users {
            return Err(ExperimentError::config(
                "methods",
                format!(
                    "zf needs nt >= users (nt = {}, users = {})",
                    self.nt, self.k_users
                ),
            ));
        }
        match self.command {
            Command::SumRate if self.trials == 0 => {
                Err(ExperimentError::config("trials", "must be >= 1"))
            }
            Command::Ber if self.max_bits == 0 => {
                Err(ExperimentError::config("max-bits", "must be >= 1"))
            }
            _ => Ok(()),
        }
    }
}

/// Parses `start:step:stop` (inclusive) or a comma-separated list of dB values.
pub fn parse_snr_list(s: &str) -> Result<Vec<f64>, ExperimentError> {
    let bad = |msg: String| ExperimentError::config("snrs", msg);
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| bad(format!("'{t}' is not a number")))
    };
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, step, stop] = parts[..] else {
            return Err(bad(format!("'{s}' is not start:step:stop")));
        };
        let (start, step, stop) = (num(start)?, num(step)?, num(stop)?);
        if !(step > 0.0) || !step.is_finite() || !start.is_finite() || !stop.is_finite() {
            return Err(bad(format!("'{s}' needs a positive step and finite bounds")));
        }
        if stop < start {
            return Err(bad(format!("'{s}' has stop < start")));
        }
        let count = ((stop - start) / step + 1e-9).floor() as u64;
        Ok((0..=count).map(|i| start + i as f64 * step).collect())
    } else {
        s.split(',').filter(|t| !t.trim().is_empty()).map(num).collect()
    }
}

pub fn parse_methods(s: &str) -> Result<Vec<Method>, ExperimentError> {
    let mut out = Vec::new();
    for part in s.split(',').filter(|p| !p.trim().is_empty()) {
        let m: Method = part
            .parse()
            .map_err(|e: String| ExperimentError::config("methods", e))?;
        if !out.contains(&m) {
            out.push(m);
        }
    }
    Ok(out)
}

pub fn parse_alpha(s: &str) -> Result<AlphaPolicy, ExperimentError> {
    if s.trim().eq_ignore_ascii_case("sigma2") {
        return Ok(AlphaPolicy::Sigma2);
    }
    s.trim()
        .parse::<f64>()
        .map(AlphaPolicy::Fixed)
        .map_err(|_| ExperimentError::config("alpha", format!("'{s}' (expected sigma2 or a number)")))
}

/// Fixed-schema CSV output.
pub trait CsvRecord {
    const HEADER: &'static str;
    fn write_fields(&self, out: &mut String) -> fmt::Result;
}

/// Shortest round-trip decimal, switching to exponent form for very small
/// or very large magnitudes.
pub fn fmt_float(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-4..1e15).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn to_csv<R: CsvRecord>(rows: &[R]) -> String {
    let mut out = String::from(R::HEADER);
    out.push('\n');
    for r in rows {
        r.write_fields(&mut out).expect("writing to a String");
        out.push('\n');
    }
    out
}

/// Mean sum rate of one method at one SNR.
#[derive(Debug, Clone, PartialEq)]
pub struct SumRateRow {
    pub snr_db: f64,
    pub method: Method,
    pub trials: u64,
    pub mean_sum_rate_bits: f64,
    pub stderr_bits: f64,
    pub seed: u64,
}

impl CsvRecord for SumRateRow {
    const HEADER: &'static str = "snr_db,method,trials,mean_sum_rate_bits,stderr_bits,seed";
    fn write_fields(&self, out: &mut String) -> fmt::Result {
        write!(
            out,
            "{},{},{},{},{},{}",
            fmt_float(self.snr_db),
            self.method,
            self.trials,
            fmt_float(self.mean_sum_rate_bits),
            fmt_float(self.stderr_bits),
            self.seed
        )
    }
}

impl CsvRecord for BerEstimate {
    const HEADER: &'static str = "snr_db,method,bits_sent,bit_errors,ber,seed";
    fn write_fields(&self, out: &mut String) -> fmt::Result {
        write!(
            out,
            "{},{},{},{},{},{}",
            fmt_float(self.snr_db),
            self.method,
            self.bits_sent,
            self.bit_errors,
            fmt_float(self.ber),
            self.seed
        )
    }
}

/// Per-(trial, user) certification record.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivRow {
    pub trial: u64,
    pub user: usize,
    /// `|w_slnrᴴ w_rzf|`.
    pub alignment_slnr_rzf: f64,
    /// `|w_eigᴴ w_closed|`.
    pub alignment_eig_closed: f64,
    /// Worst of `|SLNR(w) − λ|/λ` and `|λ_eig − λ|/λ`.
    pub lambda_rel_err: f64,
    pub seed: u64,
}

impl EquivRow {
    pub fn passes(&self) -> bool {
        self.alignment_slnr_rzf >= ALIGNMENT_THRESHOLD
            && self.alignment_eig_closed >= ALIGNMENT_THRESHOLD
            && self.lambda_rel_err <= LAMBDA_REL_TOL
    }
}

impl CsvRecord for EquivRow {
    const HEADER: &'static str =
        "trial,user,alignment_slnr_rzf,alignment_eig_closed,lambda_rel_err,seed";
    fn write_fields(&self, out: &mut String) -> fmt::Result {
        write!(
            out,
            "{},{},{},{},{},{}",
            self.trial,
            self.user,
            fmt_float(self.alignment_slnr_rzf),
            fmt_float(self.alignment_eig_closed),
            fmt_float(self.lambda_rel_err),
            self.seed
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivReport {
    pub rows: Vec<EquivRow>,
    pub min_alignment_slnr_rzf: f64,
    pub min_alignment_eig_closed: f64,
    pub max_lambda_rel_err: f64,
    /// First `(trial, user)` that missed a threshold, in trial order.
    pub first_failure: Option<(u64, usize)>,
}

impl EquivReport {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// Processes trials `0..trials` in parallel chunks and hands the results to
/// `sink` in index order.
fn for_each_trial_ordered<T, F, S>(trials: u64, work: F, mut sink: S) -> Result<(), ExperimentError>
where
    T: Send,
    F: Fn(u64) -> Result<T, ExperimentError> + Sync,
    S: FnMut(u64, T),
{
    let mut start = 0;
    while start < trials {
        let end = (start + CHUNK_TRIALS).min(trials);
        let chunk: Vec<Result<T, ExperimentError>> =
            (start..end).into_par_iter().map(&work).collect();
        for (t, item) in (start..end).zip(chunk) {
            sink(t, item?);
        }
        start = end;
    }
    Ok(())
}

/// Mean sum rate per `(snr, method)` over `trials` channel draws. Trial `t`
/// uses the same channel for every SNR and method.
pub fn run_sumrate(config: &ExperimentConfig) -> Result<Vec<SumRateRow>, ExperimentError> {
    config.validate()?;
    let points: Vec<(NoisePowerModel, f64, f64)> = config
        .snr_db
        .iter()
        .map(|&snr| {
            let pw = NoisePowerModel::from_snr_db(snr, config.sigma2, config.k_users)?;
            let design = linksim::design_sigma2(&pw);
            let alpha = config.alpha.resolve(design);
            Ok((pw, design, alpha))
        })
        .collect::<Result<_, MetricsError>>()?;
    let n_methods = config.methods.len();
    let cells = points.len() * n_methods;

    let work = |t: u64| -> Result<Vec<f64>, ExperimentError> {
        let ch = sample_channel(config.nt, config.k_users, RngStream::new(config.seed, t))?;
        let mut rates = Vec::with_capacity(cells);
        for (pw, design, alpha) in &points {
            for &method in &config.methods {
                let w = build_precoder_matrix(&ch, method, *design, *alpha).map_err(|e| {
                    precoder_error(t, config.seed, e)
                })?;
                rates.push(metrics::sum_rate(&ch, &w, pw)?);
            }
        }
        Ok(rates)
    };

    let mut sum = vec![0.0; cells];
    let mut sum_sq = vec![0.0; cells];
    for_each_trial_ordered(config.trials, work, |_, rates| {
        for (i, r) in rates.into_iter().enumerate() {
            sum[i] += r;
            sum_sq[i] += r * r;
        }
    })?;

    let n = config.trials as f64;
    let mut rows = Vec::with_capacity(cells);
    for (p, &snr_db) in config.snr_db.iter().enumerate() {
        for (m, &method) in config.methods.iter().enumerate() {
            let i = p * n_methods + m;
            let mean = sum[i] / n;
            let stderr = if config.trials > 1 {
                ((sum_sq[i] - n * mean * mean).max(0.0) / (n - 1.0) / n).sqrt()
            } else {
                0.0
            };
            rows.push(SumRateRow {
                snr_db,
                method,
                trials: config.trials,
                mean_sum_rate_bits: mean,
                stderr_bits: stderr,
                seed: config.seed,
            });
        }
    }
    Ok(rows)
}

fn precoder_error(trial: u64, seed: u64, e: PrecoderError) -> ExperimentError {
    match e {
        PrecoderError::User { user, source } => ExperimentError::Precoder {
            trial,
            seed,
            user,
            source: *source,
        },
        source => ExperimentError::Precoder {
            trial,
            seed,
            user: 0,
            source,
        },
    }
}

/// Seed of the `index`-th SNR point of a BER sweep. Shared by all methods.
pub fn ber_point_seed(master_seed: u64, index: usize) -> u64 {
    derive_seed(master_seed, index as u64)
}

/// One BER estimate per `(snr, method)`.
pub fn run_ber(config: &ExperimentConfig) -> Result<Vec<BerEstimate>, ExperimentError> {
    config.validate()?;
    let mut rows = Vec::with_capacity(config.snr_db.len() * config.methods.len());
    for (i, &snr_db) in config.snr_db.iter().enumerate() {
        let seed = ber_point_seed(config.seed, i);
        for &method in &config.methods {
            let point = BerPoint {
                sigma2: config.sigma2,
                alpha: config.alpha,
                min_bits: config.min_bits,
                max_bits: config.max_bits,
                ..BerPoint::new(config.nt, config.k_users, method, snr_db, seed)
            };
            rows.push(point.run()?);
        }
    }
    Ok(rows)
}

/// Certifies, for every user of `trials` random channels, that the SLNR
/// precoder matches RZF with `α = σ²`, that the eigen-solver agrees with the
/// closed form, and that the achieved SLNR equals the eigenvalue `λ`.
pub fn run_equiv(config: &ExperimentConfig) -> Result<EquivReport, ExperimentError> {
    config.validate()?;
    let sigma2 = config.sigma2;
    let alpha = config.alpha.resolve(sigma2);
    let seed = config.seed;

    let work = |t: u64| -> Result<Vec<EquivRow>, ExperimentError> {
        let ch = sample_channel(config.nt, config.k_users, RngStream::new(seed, t))?;
        (0..config.k_users)
            .map(|k| {
                let wrap = |source| ExperimentError::Precoder {
                    trial: t,
                    seed,
                    user: k,
                    source,
                };
                let closed = slnr_closed_form(&ch, k, sigma2).map_err(wrap)?;
                let rzf = rzf_direction(&ch, k, alpha).map_err(wrap)?;
                let eig = slnr_eigenpair(&ch, k, sigma2).map_err(wrap)?;
                let achieved = metrics::slnr_value(&ch, k, &closed.w, sigma2)?;
                let lambda = closed.lambda;
                let lambda_rel_err = ((achieved - lambda).abs() / lambda)
                    .max((eig.value.re - lambda).abs() / lambda)
                    .max(eig.value.im.abs() / lambda);
                Ok(EquivRow {
                    trial: t,
                    user: k,
                    alignment_slnr_rzf: alignment(&closed.w, &rzf).map_err(wrap)?,
                    alignment_eig_closed: alignment(&eig.vector, &closed.w).map_err(wrap)?,
                    lambda_rel_err,
                    seed,
                })
            })
            .collect()
    };

    let mut report = EquivReport {
        rows: Vec::with_capacity(config.trials as usize * config.k_users),
        min_alignment_slnr_rzf: 1.0,
        min_alignment_eig_closed: 1.0,
        max_lambda_rel_err: 0.0,
        first_failure: None,
    };
    for_each_trial_ordered(config.trials, work, |_, rows| {
        for row in rows {
            report.min_alignment_slnr_rzf = report.min_alignment_slnr_rzf.min(row.alignment_slnr_rzf);
            report.min_alignment_eig_closed =
                report.min_alignment_eig_closed.min(row.alignment_eig_closed);
            report.max_lambda_rel_err = report.max_lambda_rel_err.max(row.lambda_rel_err);
            if report.first_failure.is_none() && !row.passes() {
                report.first_failure = Some((row.trial, row.user));
            }
            report.rows.push(row);
        }
    })?;
    Ok(report)
}

/// Output of any of the three studies.
#[derive(Debug, Clone, PartialEq)]
pub enum StudyOutput {
    SumRate(Vec<SumRateRow>),
    Ber(Vec<BerEstimate>),
    Equiv(EquivReport),
}

impl StudyOutput {
    pub fn to_csv(&self) -> String {
        match self {
            StudyOutput::SumRate(rows) => to_csv(rows),
            StudyOutput::Ber(rows) => to_csv(rows),
            StudyOutput::Equiv(report) => to_csv(&report.rows),
        }
    }
}

/// Runs whichever study `config.command` selects.
pub fn run(config: &ExperimentConfig) -> Result<StudyOutput, ExperimentError> {
    Ok(match config.command {
        Command::SumRate => StudyOutput::SumRate(run_sumrate(config)?),
        Command::Ber => StudyOutput::Ber(run_ber(config)?),
        Command::Equiv => StudyOutput::Equiv(run_equiv(config)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snr_ranges() {
        assert_eq!(
            parse_snr_list("-5:5:30").unwrap(),
            vec![-5.0, 0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0]
        );
        assert_eq!(parse_snr_list("0:2.5:5").unwrap(), vec![0.0, 2.5, 5.0]);
        assert_eq!(parse_snr_list("0:0.1:0.3").unwrap().len(), 4);
        assert_eq!(parse_snr_list("3, 7,12").unwrap(), vec![3.0, 7.0, 12.0]);
        for bad in ["1:2", "0:0:5", "5:1:0", "a,b", "0:-1:5"] {
            assert!(parse_snr_list(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn methods_and_alpha() {
        assert_eq!(
            parse_methods("zf,rzf,slnr").unwrap(),
            vec![Method::Zf, Method::Rzf, Method::SlnrClosed]
        );
        assert_eq!(parse_methods("slnr_eig,slnr_eig").unwrap(), vec![Method::SlnrEig]);
        assert!(parse_methods("zf,dpc").is_err());
        assert_eq!(parse_alpha("sigma2").unwrap(), AlphaPolicy::Sigma2);
        assert_eq!(parse_alpha("0.5").unwrap(), AlphaPolicy::Fixed(0.5));
        assert!(parse_alpha("big").is_err());
    }

    #[test]
    fn validation_names_field() {
        let mut c = ExperimentConfig::new(Command::SumRate);
        c.snr_db = vec![0.0, 0.0];
        assert!(matches!(c.validate(), Err(ExperimentError::Config { field: "snrs", .. })));
        c.snr_db.clear();
        assert!(matches!(c.validate(), Err(ExperimentError::Config { field: "snrs", .. })));
        let mut c = ExperimentConfig::new(Command::Ber);
        c.methods.clear();
        assert!(matches!(c.validate(), Err(ExperimentError::Config { field: "methods", .. })));
        let mut c = ExperimentConfig::new(Command::SumRate);
        c.nt = 2;
        assert!(matches!(c.validate(), Err(ExperimentError::Config { field: "methods", .. })));
        c.methods = vec![Method::Rzf];
        assert!(c.validate().is_ok());
        c.sigma2 = 0.0;
        assert!(matches!(c.validate(), Err(ExperimentError::Config { field: "sigma2", .. })));
        let mut c = ExperimentConfig::new(Command::Equiv);
        c.trials = 0;
        assert!(matches!(c.validate(), Err(ExperimentError::Config { field: "trials", .. })));
    }

    #[test]
    fn presets() {
        assert_eq!(Preset::Fig1a.config().command, Command::SumRate);
        assert_eq!(Preset::Fig2b.config().nt, 6);
        assert_eq!(Preset::Fig2b.config().k_users, 4);
        assert_eq!("fig1b".parse::<Preset>().unwrap().geometry(), (2, 2));
        assert!("fig3".parse::<Preset>().is_err());
    }

    #[test]
    fn float_format() {
        assert_eq!(fmt_float(-5.0), "-5");
        assert_eq!(fmt_float(0.0021), "0.0021");
        assert_eq!(fmt_float(2.9e-6), "2.9e-6");
        assert_eq!(fmt_float(0.0), "0");
        assert_eq!(fmt_float(1.0 - 1e-16), "0.9999999999999999");
    }

    #[test]
    fn csv_shape() {
        let c = ExperimentConfig {
            trials: 20,
            snr_db: vec![0.0, 10.0],
            ..ExperimentConfig::new(Command::SumRate)
        };
        let csv = to_csv(&run_sumrate(&c).unwrap());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], SumRateRow::HEADER);
        assert_eq!(lines.len(), 1 + 2 * 3);
        assert!(lines[1].starts_with("0,zf,20,"));
        assert!(lines[6].starts_with("10,slnr,20,"));
    }
}
