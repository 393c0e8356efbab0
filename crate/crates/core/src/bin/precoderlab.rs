use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use precoderlab::experiments::{
    self, parse_alpha, parse_methods, parse_snr_list, Command, ExperimentConfig, ExperimentError,
    Preset, StudyOutput,
};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Study {
    Sumrate,
    Ber,
    Equiv,
}

/// Monte-Carlo studies of ZF, RZF and SLNR precoding in the MU-MIMO downlink.
#[derive(Debug, Parser)]
#[command(name = "precoderlab", version)]
struct Args {
    study: Study,
    /// Transmit antennas.
    #[arg(long)]
    nt: Option<usize>,
    /// Single-antenna users.
    #[arg(long)]
    users: Option<usize>,
    /// SNR points in dB: "start:step:stop" or "a,b,c".
    #[arg(long, allow_hyphen_values = true)]
    snrs: Option<String>,
    /// Channel draws (sumrate: per point, equiv: total).
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    min_bits: Option<u64>,
    #[arg(long)]
    max_bits: Option<u64>,
    /// Comma-separated subset of zf, rzf, slnr, slnr_eig.
    #[arg(long)]
    methods: Option<String>,
    /// RZF regularization: "sigma2" or a number.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    sigma2: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// fig1a | fig1b | fig2a | fig2b
    #[arg(long)]
    preset: Option<String>,
}

fn build_config(args: &Args) -> Result<ExperimentConfig, ExperimentError> {
    let command = match args.study {
        Study::Sumrate => Command::SumRate,
        Study::Ber => Command::Ber,
        Study::Equiv => Command::Equiv,
    };
    let mut config = match &args.preset {
        Some(name) => {
            let preset: Preset = name.parse()?;
            ExperimentConfig {
                command,
                ..preset.config()
            }
        }
        None => ExperimentConfig::new(command),
    };
    if let Some(nt) = args.nt {
        config.nt = nt;
    }
    if let Some(k) = args.users {
        config.k_users = k;
    }
    if let Some(s) = &args.snrs {
        config.snr_db = parse_snr_list(s)?;
    }
    if let Some(t) = args.trials {
        config.trials = t;
    }
    if let Some(b) = args.min_bits {
        config.min_bits = b;
    }
    if let Some(b) = args.max_bits {
        config.max_bits = b;
    }
    if let Some(m) = &args.methods {
        config.methods = parse_methods(m)?;
    }
    if let Some(a) = &args.alpha {
        config.alpha = parse_alpha(a)?;
    }
    if let Some(s) = args.sigma2 {
        config.sigma2 = s;
    }
    if let Some(s) = args.seed {
        config.seed = s;
    }
    config.validate()?;
    Ok(config)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let config = match build_config(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let output = match experiments::run(&config) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(if e.is_config() { 2 } else { 1 });
        }
    };

    let csv = output.to_csv();
    match &args.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &csv) {
                eprintln!("error: writing {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{csv}"),
    }

    if let StudyOutput::Equiv(report) = &output {
        eprintln!(
            "min alignment slnr/rzf = 1 - {:.3e}, eig/closed = 1 - {:.3e}, max lambda rel err = {:.3e}",
            1.0 - report.min_alignment_slnr_rzf,
            1.0 - report.min_alignment_eig_closed,
            report.max_lambda_rel_err
        );
        if let Some((trial, user)) = report.first_failure {
            eprintln!(
                "equivalence FAILED at seed {}, trial {trial}, user {user}",
                config.seed
            );
            return ExitCode::from(3);
        }
    }
    ExitCode::SUCCESS
}
