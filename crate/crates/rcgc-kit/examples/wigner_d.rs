//! Wigner D-functions by the finite sum and by a single Gauss `2F1` call.
//!
//! Run with `cargo run --example wigner_d`.

use std::f64::consts::PI;

use rcgc_kit::wigner::{wigner_d, wigner_d_hyp, wigner_d_matrix, EulerAngles};
use rcgc_kit::{CNum, HalfInt};

fn main() -> rcgc_kit::Result<()> {
    let (k, q, qp): (HalfInt, HalfInt, HalfInt) = ("5/2".parse()?, "-1/2".parse()?, "3/2".parse()?);

    let omega = EulerAngles::new(1.5 * PI, PI / 6.0, 1.25 * PI);
    let by_sum = wigner_d(k, q, qp, omega)?;
    let by_hyp = wigner_d_hyp(k, q, qp, omega)?;
    let expected = CNum::from_polar((13.0 - 3.0 * 3f64.sqrt()) / 32.0, PI / 8.0);
    println!("D^{k}_{{{q},{qp}}}(3pi/2, pi/6, 5pi/4)");
    println!("  finite sum      {by_sum:.15}");
    println!("  2F1             {by_hyp:.15}");
    println!("  closed form     {expected:.15}");

    // The full matrix is unitary: its rows are orthonormal.
    let m = wigner_d_matrix(k, EulerAngles::new(0.4, 2.5, 5.9))?;
    let mut worst: f64 = 0.0;
    for (a, ra) in m.iter().enumerate() {
        for (b, rb) in m.iter().enumerate() {
            let dot: CNum = ra.iter().zip(rb).map(|(x, y)| x * y.conj()).sum();
            worst = worst.max((dot - if a == b { 1.0 } else { 0.0 }).norm());
        }
    }
    println!("rank {k} matrix, max deviation from unitarity {worst:.2e}");
    Ok(())
}
