//! Uncoded QPSK bit error rate versus SNR, with a short bit budget so it
//! finishes quickly.
//!
//! cargo run --release --example ber_sweep -- fig2b

use precoderlab::experiments::{parse_snr_list, run_ber, Preset};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let preset: Preset = std::env::args().nth(1).as_deref().unwrap_or("fig2a").parse()?;
    let mut config = preset.config();
    config.snr_db = parse_snr_list("0:5:20")?;
    config.max_bits = 1_000_000;

    println!("{:>6} {:>9} {:>10} {:>10} {:>12}", "snr", "method", "bits", "errors", "ber");
    for e in run_ber(&config)? {
        println!(
            "{:>6} {:>9} {:>10} {:>10} {:>12.4e}",
            e.snr_db, e.method.name(), e.bits_sent, e.bit_errors, e.ber
        );
    }
    Ok(())
}
