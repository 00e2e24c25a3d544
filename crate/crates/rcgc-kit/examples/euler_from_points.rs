//! Euler angles of every rotation branch that carries `x1` (in `K1`) to `x2` (in `K2`).
//!
//! Run with `cargo run --example euler_from_points`.

use std::f64::consts::PI;

use rcgc_kit::geometry::{
    all_branches, mat_vec, optimal_psi, partial_solutions, rotation_matrix_zxz,
};
use rcgc_kit::SpherePoint;

fn main() -> rcgc_kit::Result<()> {
    let x1 = SpherePoint::new(PI / 6.0, PI / 4.0)?;
    let x2 = SpherePoint::new(PI / 3.0, PI)?;
    let target = x2.unit_vector();

    println!("branch  applies   Phi        Theta      Psi        |R r1 - r2|");
    for s in all_branches(x1, x2)? {
        let v = mat_vec(&rotation_matrix_zxz(s.omega), x1.unit_vector());
        let err = (0..3).map(|i| (v[i] - target[i]).abs()).fold(0.0, f64::max);
        println!(
            "{:<7} {:<9} {:>9.6}  {:>9.6}  {:>9.6}  {err:.1e}",
            format!("{:?}", s.branch.label),
            s.applicable,
            s.omega.phi,
            s.omega.theta,
            s.omega.psi
        );
    }

    // Fixing the gauge angle Psi leaves a finite set of (Theta, Phi) candidates.
    let psi = optimal_psi(x1);
    println!("gauge angles with x1' = 0: {:?}", psi.values);
    let partial = partial_solutions(x1, x2, psi.values[0]);
    for (theta, phi) in &partial.verified {
        println!(
            "  Psi = {:.6}: Theta = {theta:.6}, Phi = {phi:.6}",
            partial.psi
        );
    }
    Ok(())
}
