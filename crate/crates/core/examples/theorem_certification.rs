//! Checks on random channels that the SLNR precoder and RZF with `α = σ²`
//! point in the same direction, and that the power-iteration solver agrees.
//!
//! cargo run --release --example theorem_certification -- 6 4 1000

use precoderlab::experiments::{run_equiv, Command, ExperimentConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<usize> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let (nt, k, trials) = match args.as_slice() {
        [nt, k, t] => (*nt, *k, *t as u64),
        _ => (4, 4, 1000),
    };
    let config = ExperimentConfig {
        nt,
        k_users: k,
        trials,
        ..ExperimentConfig::new(Command::Equiv)
    };
    let report = run_equiv(&config)?;
    println!("{nt}x{k}, {trials} channels, sigma2 = {}", config.sigma2);
    println!("  min |w_slnr^H w_rzf|     = 1 - {:.2e}", 1.0 - report.min_alignment_slnr_rzf);
    println!("  min |w_eig^H w_closed|   = 1 - {:.2e}", 1.0 - report.min_alignment_eig_closed);
    println!("  max lambda relative err  = {:.2e}", report.max_lambda_rel_err);
    println!("  {}", if report.passed() { "certified" } else { "FAILED" });
    Ok(())
}
