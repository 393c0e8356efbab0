//! One downlink channel use: modulate, precode, add noise, equalize, detect.

use precoderlab::linksim::{demodulate, modulate, BerPoint, QpskMap};
use precoderlab::Method;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (bits, symbol) in QpskMap::TABLE {
        println!("{bits:?} -> {symbol:.4} -> {:?}", demodulate(modulate(bits)));
    }

    let point = BerPoint::new(4, 4, Method::SlnrClosed, 10.0, 99);
    for t in 0..5 {
        let outcome = point.trial(t)?;
        println!(
            "trial {t}: {} of {} bits wrong, gains {:?}",
            outcome.bit_errors,
            outcome.bits,
            outcome.effective_gains.iter().map(|g| (g * 1000.0).round() / 1000.0).collect::<Vec<_>>()
        );
    }
    Ok(())
}
