//! Carrying the components of a spherical tensor from frame `K1` to frame `K2`.
//!
//! Run with `cargo run --example tensor_transform`.

use rcgc_kit::sphfun::{transform_tensor, Family};
use rcgc_kit::wigner::c_harmonic_vector;
use rcgc_kit::{HalfInt, SpherePoint};

fn main() -> rcgc_kit::Result<()> {
    let x1 = SpherePoint::new(1.1, 0.3)?;
    let x2 = SpherePoint::new(0.4, 5.0)?;
    let k = HalfInt::int(2);

    // The components of C^2 at the pole of K1 are (0, 0, 1, 0, 0).
    let t1 = c_harmonic_vector(k, SpherePoint::new(0.0, 0.0)?)?;
    let t2 = transform_tensor(Family::Eta, k, &t1, x1, x2)?;
    for (q, v) in k.projections().zip(&t2) {
        println!("T_{q:>2}(K2) = {v:.12}");
    }
    let norm1: f64 = t1.iter().map(|c| c.norm_sqr()).sum();
    let norm2: f64 = t2.iter().map(|c| c.norm_sqr()).sum();
    println!("norm before {norm1:.15}, after {norm2:.15}");
    Ok(())
}
