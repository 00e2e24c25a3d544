//! Sphere integrals of the spherical functions over the second coordinate, against quadrature.
//!
//! Run with `cargo run --release --example s_integral`.

use rcgc_kit::cli::verify::s_integral_quadrature;
use rcgc_kit::integrals::{eta_sphere_integral, s_integral};
use rcgc_kit::oracle::{eta_integral_oracle, s_integral_oracle};
use rcgc_kit::{HalfInt, SpherePoint};

fn main() -> rcgc_kit::Result<()> {
    let x1 = SpherePoint::new(1.2, 0.8)?;
    let spec = s_integral_quadrature();
    let h = |s: &str| s.parse::<HalfInt>();
    for (k, q, qp) in [
        ("0", "0", "0"),
        ("1", "1", "0"),
        ("2", "0", "2"),
        ("3/2", "1/2", "-3/2"),
    ] {
        let (k, q, qp) = (h(k)?, h(q)?, h(qp)?);
        let closed = s_integral(k, q, qp, x1)?;
        let quad = s_integral_oracle(k, q, qp, x1, &spec)?;
        println!("S^{k}_{{{q},{qp}}}  closed {closed:.12}  quadrature {quad:.12}");
    }
    let (k, q, qp) = (h("2")?, h("0")?, h("1")?);
    println!(
        "eta integral k=2 q=0 q'=1: closed {:.12}  quadrature {:.12}",
        eta_sphere_integral(k, q, qp, x1)?,
        eta_integral_oracle(k, q, qp, x1, &spec)?
    );
    Ok(())
}
