//! The SLNR problem as a generalized eigenproblem: the dominant eigenvalue
//! equals the closed-form λ and no other direction does better.

use precoderlab::channel::{sample_channel, RngStream};
use precoderlab::precoders::slnr_eigenpair;
use precoderlab::{alignment, slnr_closed_form, slnr_value, ComplexVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sigma2 = 0.5;
    let ch = sample_channel(6, 4, RngStream::new(17, 0))?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);

    for k in 0..ch.k_users() {
        let sol = slnr_closed_form(&ch, k, sigma2)?;
        let pair = slnr_eigenpair(&ch, k, sigma2)?;
        let measured = slnr_value(&ch, k, &sol.w, sigma2)?;

        let mut best_random = 0.0f64;
        for _ in 0..1000 {
            let v: ComplexVector = (0..ch.nt())
                .map(|_| {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    precoderlab::Complex64::new(re, im)
                })
                .collect();
            let (v, _) = v.normalized().unwrap();
            best_random = best_random.max(slnr_value(&ch, k, &v, sigma2)?);
        }
        println!(
            "user {k}: lambda {:.6}  eig {:.6} ({} iter, align {:.15})  slnr(w) {:.6}  best random {:.6}",
            sol.lambda,
            pair.value.re,
            pair.iterations,
            alignment(&sol.w, &pair.vector)?,
            measured,
            best_random
        );
    }
    Ok(())
}
