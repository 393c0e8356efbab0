//! Average sum rate versus SNR for ZF, RZF and SLNR as a CSV table.
//!
//! cargo run --release --example sum_rate_sweep -- fig1b

use precoderlab::experiments::{run_sumrate, to_csv, Preset};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let preset: Preset = std::env::args().nth(1).as_deref().unwrap_or("fig1a").parse()?;
    let config = preset.config();
    let rows = run_sumrate(&config)?;
    eprintln!("{}x{}, {} trials per point", config.nt, config.k_users, config.trials);
    print!("{}", to_csv(&rows));
    Ok(())
}
