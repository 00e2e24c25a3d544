//! Clebsch-Gordan coefficients in floating point and in exact rational arithmetic.
//!
//! Run with `cargo run --example clebsch_gordan`.

use rcgc_kit::halfint_algebra::{cgc, Triangle};
use rcgc_kit::oracle::cgc_exact;
use rcgc_kit::HalfInt;

fn main() -> rcgc_kit::Result<()> {
    let h = |s: &str| s.parse::<HalfInt>();
    let (j1, j2) = (h("3/2")?, h("1")?);
    let (m1, m2) = (h("1/2")?, h("0")?);
    let m = m1 + m2;
    println!("<{j1} {m1} {j2} {m2} | j {m}>");
    for j in Triangle::coupled_ranks(j1, j2) {
        if m.twice.abs() > j.twice {
            continue;
        }
        let exact = cgc_exact(j1, m1, j2, m2, j, m);
        println!(
            "  j = {j:<4} {:>+.15}   exact: sign {:+}, square {}",
            cgc(j1, m1, j2, m2, j, m)?,
            exact.sign,
            exact.squared
        );
    }
    Ok(())
}
