//! Log-factorials, the Beta function and the Gauss hypergeometric function.
//!
//! Run with `cargo run --example special_functions`.

use rcgc_kit::halfint_algebra::{beta, factorial_ln, gauss_2f1};
use rcgc_kit::integrals::pinchon_check;
use rcgc_kit::HalfInt;

fn main() -> rcgc_kit::Result<()> {
    for s in ["0", "5", "20", "170"] {
        let n: HalfInt = s.parse()?;
        println!("ln({n})! = {:.15}", factorial_ln(n)?);
    }
    println!("B(3/2, 1/2) = {:.15} (pi/2)", beta(1.5, 0.5)?);
    // Half-integer ranks are rejected, since only integer factorials are defined.
    println!("ln(1/2)! -> {}", factorial_ln("1/2".parse()?).unwrap_err());
    // A terminating series: 2F1(-3, 2; 1; z) = 1 - 6z + 9z^2 - 4z^3.
    println!(
        "2F1(-3, 2; 1; -0.25) = {:.15}",
        gauss_2f1(-3.0, 2.0, 1.0, -0.25)?
    );
    println!(
        "2F1(1, 1; 2; -0.5)   = {:.15} (ln 1.5 / 0.5)",
        gauss_2f1(1.0, 1.0, 2.0, -0.5)?
    );
    for g in 0..4 {
        let k = HalfInt::int(2);
        println!(
            "int sin^5 cos^{g} over [0, pi] = {:.15}",
            pinchon_check(k, g)?
        );
    }
    Ok(())
}
