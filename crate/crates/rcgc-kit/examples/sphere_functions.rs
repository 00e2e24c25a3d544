//! The coordinate-parametrized spherical functions and their agreement with `D(Omega)`.
//!
//! Run with `cargo run --example sphere_functions`.

use std::f64::consts::PI;

use rcgc_kit::geometry::euler_from_points;
use rcgc_kit::sphfun::{eta, sphfun_named, Family};
use rcgc_kit::wigner::wigner_d;
use rcgc_kit::{HalfInt, SpherePoint};

fn main() -> rcgc_kit::Result<()> {
    let (k, q, qp): (HalfInt, HalfInt, HalfInt) = ("5/2".parse()?, "-1/2".parse()?, "3/2".parse()?);
    let x1 = SpherePoint::new(PI / 6.0, PI / 4.0)?;
    let x2 = SpherePoint::new(PI / 3.0, PI)?;

    for family in Family::ALL {
        let v = sphfun_named(family, k, q, qp, x1, x2)?;
        println!("{:<8} {v:.15}", family.name());
    }
    println!(
        "eta through its own entry point {:.15}",
        eta(k, q, qp, x1, x2)?
    );

    // Each applicable branch gives the same value as D at its Euler angles.
    for s in euler_from_points(x1, x2)? {
        println!(
            "{:?}: D = {:.15}",
            s.branch.label,
            wigner_d(k, q, qp, s.omega)?
        );
    }
    Ok(())
}
