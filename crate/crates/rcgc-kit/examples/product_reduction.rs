//! A product of two spherical functions expanded into single functions of coupled rank.
//!
//! Run with `cargo run --example product_reduction`.

use rcgc_kit::sphfun::{sphfun_named, sphfun_reduce, Family};
use rcgc_kit::{CNum, HalfInt, SpherePoint};

fn main() -> rcgc_kit::Result<()> {
    let x1 = SpherePoint::new(0.7, 1.9)?;
    let x2 = SpherePoint::new(2.2, 4.0)?;
    let h = |s: &str| s.parse::<HalfInt>();
    let (k1, q1, q1p) = (h("1")?, h("1")?, h("0")?);
    let (k2, q2, q2p) = (h("3/2")?, h("-1/2")?, h("1/2")?);

    let terms = sphfun_reduce(Family::XiP, k1, q1, q1p, k2, q2, q2p, x1, x2)?;
    for (k, v) in &terms {
        println!("rank {k:<4} {v:.15}");
    }
    let sum: CNum = terms.values().sum();
    let product = sphfun_named(Family::XiP, k1, q1, q1p, x1, x2)?
        * sphfun_named(Family::XiP, k2, q2, q2p, x1, x2)?;
    println!("sum of terms {sum:.15}");
    println!("product      {product:.15}");
    Ok(())
}
