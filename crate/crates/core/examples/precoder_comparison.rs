//! Builds ZF, RZF and SLNR precoders for one channel and prints their SINRs.

use precoderlab::channel::{sample_channel, RngStream};
use precoderlab::metrics::per_user_sinr;
use precoderlab::{build_precoder_matrix, canonical_phase, sum_rate, Method, NoisePowerModel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (nt, k) = (4, 4);
    let ch = sample_channel(nt, k, RngStream::new(2024, 0))?;

    for snr_db in [0.0, 20.0] {
        let pw = NoisePowerModel::from_snr_db(snr_db, 1.0, k)?;
        // the regularizer that matches SLNR is σ²/p_k
        let design = pw.noise_to_power(0);
        println!("SNR {snr_db} dB (design sigma2 {design:.4})");
        for method in [Method::Zf, Method::Rzf, Method::SlnrClosed, Method::SlnrEig] {
            let w = build_precoder_matrix(&ch, method, design, design)?;
            let sinrs = per_user_sinr(&ch, &w, &pw)?;
            let first = canonical_phase(w.column(0));
            println!(
                "  {:<8} sum rate {:7.3} bits  sinr {:?}  w0[0] {:.4}",
                method.name(),
                sum_rate(&ch, &w, &pw)?,
                sinrs.iter().map(|s| (s * 100.0).round() / 100.0).collect::<Vec<_>>(),
                first[0]
            );
        }
    }
    Ok(())
}
