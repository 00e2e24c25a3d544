//! Reduced matrix elements of `C^k` between spherical harmonics, checked against Gaunt quadrature.
//!
//! Run with `cargo run --release --example reduced_matrix_element`.

use rcgc_kit::halfint_algebra::{cgc, sign_pow};
use rcgc_kit::oracle::{gaunt_oracle, QuadratureSpec};
use rcgc_kit::rcgc::reduced_matrix_element;
use rcgc_kit::wigner::c_harmonic_vector;
use rcgc_kit::{HalfInt, SpherePoint};

fn main() -> rcgc_kit::Result<()> {
    let north = SpherePoint::new(0.0, 0.0)?;
    let spec = QuadratureSpec::default();
    let (l, k, lb) = (HalfInt::int(2), HalfInt::int(2), HalfInt::int(2));
    let reduced = reduced_matrix_element(l, k, lb, &c_harmonic_vector(k, north)?)?;
    println!("[{l}||C^{k}||{lb}] = {:.15}", reduced.re);

    // Wigner-Eckart: <l m|C^k_q|lb mb> = (-1)^{2k} [l||C^k||lb] <lb mb k q|l m>.
    for (m, q) in [(2, 1), (0, 0), (-1, -2)] {
        let (m, q) = (HalfInt::int(m), HalfInt::int(q));
        let mb = m - q;
        let assembled = reduced * sign_pow(i64::from(k.twice)) * cgc(lb, mb, k, q, l, m)?;
        let quad = gaunt_oracle(l, m, k, q, lb, mb, &spec)?;
        println!("m={m:>2} q={q:>2}: assembled {assembled:.12}  quadrature {quad:.12}");
    }
    Ok(())
}
