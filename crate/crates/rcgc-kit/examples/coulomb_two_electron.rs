//! The angular part of the two-electron Coulomb matrix element, closed form against 4-D quadrature.
//!
//! Run with `cargo run --release --example coulomb_two_electron`.

use std::time::Instant;

use rcgc_kit::cli::verify::coulomb_quadrature;
use rcgc_kit::oracle::coulomb_oracle;
use rcgc_kit::rcgc::{coulomb_2e_angular, RadialWeight};
use rcgc_kit::HalfInt;

fn main() -> rcgc_kit::Result<()> {
    let spec = coulomb_quadrature();
    for (l, m, lp, mp) in [(0, 0, 0, 0), (1, 0, 1, 0), (1, 1, 1, 1), (0, 0, 1, 0)] {
        let (l, m, lp, mp) = (
            HalfInt::int(l),
            HalfInt::int(m),
            HalfInt::int(lp),
            HalfInt::int(mp),
        );
        let (g, gp) = (RadialWeight::delta0(l), RadialWeight::delta0(lp));
        let k_max = l.twice / 2 + lp.twice / 2;

        let start = Instant::now();
        let closed = coulomb_2e_angular(l, m, lp, mp, &g, &gp, k_max)?;
        let t_closed = start.elapsed();
        let start = Instant::now();
        let quad = coulomb_oracle(l, m, lp, mp, &g, &gp, k_max as u32, &spec)?;
        let t_quad = start.elapsed();
        println!(
            "l={l} m={m} l'={lp} m'={mp}: closed {closed:.10} ({t_closed:?})  quadrature {quad:.10} ({t_quad:?})"
        );
    }
    Ok(())
}
