//! Rotated Clebsch-Gordan coefficients of both types and the product reduction of the first type.
//!
//! Run with `cargo run --example rotated_coefficients`.

use rcgc_kit::rcgc::{rcgc1, rcgc1_product_reduce, rcgc2, RcgcIndices};
use rcgc_kit::{CNum, HalfInt, SpherePoint};

fn main() -> rcgc_kit::Result<()> {
    let x1 = SpherePoint::new(0.9, 2.4)?;
    let x2 = SpherePoint::new(2.0, 0.6)?;
    let h = |s: &str| s.parse::<HalfInt>();

    let first = rcgc1(
        h("1")?,
        h("1/2")?,
        h("3/2")?,
        h("1")?,
        h("-1/2")?,
        h("1/2")?,
        x1,
        x2,
    )?;
    println!("c^{{1 1/2 3/2}}_{{1 -1/2 1/2}}   = {first:.15}");
    let second = rcgc2(h("1")?, h("1")?, h("2")?, h("1")?, h("0")?, h("1")?, x1, x2)?;
    println!("C^{{1 1 2 1}}_{{0 1}}           = {second:.15}");

    let a = RcgcIndices {
        l1: h("1")?,
        l2: h("1")?,
        l: h("1")?,
        m1: h("0")?,
        m2: h("1")?,
        m: h("1")?,
    };
    let b = RcgcIndices {
        l1: h("1/2")?,
        l2: h("1/2")?,
        l: h("1")?,
        m1: h("1/2")?,
        m2: h("-1/2")?,
        m: h("0")?,
    };
    let terms = rcgc1_product_reduce(&a, &b, x1, x2)?;
    for (rank, v) in &terms {
        println!("  rank {rank:<3} {v:.15}");
    }
    let sum: CNum = terms.values().sum();
    println!("sum     {sum:.15}");
    println!("product {:.15}", a.eval(x1, x2)? * b.eval(x1, x2)?);
    Ok(())
}
