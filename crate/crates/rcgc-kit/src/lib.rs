//! Wigner D-functions parametrized by a pair of points on the sphere.
//!
//! A rotation that carries one unit vector from a fixed frame `K1` into a
//! rotated frame `K2` can be written through the spherical coordinates of that
//! vector in both frames instead of through explicit Euler angles. This crate
//! evaluates the resulting functions and the tools built on them:
//!
//! * [`halfint_algebra`]: half-integers, factorials, Beta, Gauss `2F1`, Clebsch-Gordan coefficients.
//! * [`wigner`]: `D^k_{qq'}(Phi, Theta, Psi)` by the finite sum and by a single `2F1` call.
//! * [`geometry`]: Euler-angle branches from a coordinate pair, rotation matrices.
//! * [`sphfun`]: the coordinate-parametrized spherical functions and their reduction.
//! * [`integrals`]: sphere integrals of those functions in closed form.
//! * [`rcgc`]: rotated Clebsch-Gordan coefficients, reduced matrix elements and a
//!   two-electron Coulomb angular matrix element.
//! * [`oracle`]: brute-force quadrature and exact-arithmetic references.
//! * [`cli`]: the command-line front end used by the `rcgc-kit` binary.
//!
//! Run `cargo run --example <name>` for a tour of each capability; the list is in
//! the crate README.
//!
//! ```
//! use rcgc_kit::{wigner::{wigner_d, EulerAngles}, HalfInt};
//! use std::f64::consts::PI;
//!
//! let h = |t| HalfInt::from_twice(t);
//! let omega = EulerAngles::new(1.5 * PI, PI / 6.0, 1.25 * PI);
//! let d = wigner_d(h(5), h(-1), h(3), omega).unwrap();
//! let expected = num_complex::Complex64::from_polar((13.0 - 3.0 * 3f64.sqrt()) / 32.0, PI / 8.0);
//! assert!((d - expected).norm() < 1e-12);
//! ```

pub mod cli;
pub mod error;
pub mod geometry;
pub mod halfint_algebra;
pub mod integrals;
pub mod oracle;
pub mod rcgc;
pub mod sphfun;
pub mod wigner;

pub use error::{Error, Result};
pub use geometry::SpherePoint;
pub use halfint_algebra::{CNum, HalfInt};
