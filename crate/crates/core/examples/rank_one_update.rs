//! Solving `(A + x xᴴ) y = x` with only a solver for `A`.

use precoderlab::numerics::{hpd_solve, rank_one_update_solve, Cholesky};
use precoderlab::{Complex64, ComplexMatrix, ComplexVector};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let a = ComplexMatrix::from_row_major(
        3,
        3,
        vec![
            Complex64::new(4.0, 0.0), Complex64::new(1.0, 1.0), Complex64::new(0.0, 0.0),
            Complex64::new(1.0, -1.0), Complex64::new(3.0, 0.0), Complex64::new(0.5, 0.0),
            Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0), Complex64::new(2.0, 0.0),
        ],
    )?;
    let x = ComplexVector::new(vec![
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 2.0),
        Complex64::new(-1.0, 1.0),
    ]);

    // factor once, reuse for the update
    let chol = Cholesky::factor(&a)?;
    let update = rank_one_update_solve(|b| chol.solve(b), &x)?;
    let y: Vec<String> = update.y.iter().map(|v| format!("{v:.6}")).collect();
    println!("y     = [{}]", y.join(", "));
    println!("scale = 1 / (1 + x^H A^-1 x) = {:.6}", update.scale);

    // compare with forming A + x xᴴ explicitly
    let full = ComplexMatrix::from_fn(3, 3, |i, j| a[(i, j)] + x[i] * x[j].conj());
    let direct = hpd_solve(&full, &x)?;
    println!("|y - direct| = {:.2e}", update.y.sub(&direct).norm());
    Ok(())
}
