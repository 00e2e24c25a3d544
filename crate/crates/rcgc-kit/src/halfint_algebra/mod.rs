//! Exact half-integer arithmetic and the special functions every other module builds on.
//!
//! * [`HalfInt`] stores ranks and projections as twice their value.
//! * [`factorial_ln`], [`beta`] and [`gauss_2f1`] cover the real-argument special
//!   functions that appear in the closed forms.
//! * [`cgc`] evaluates Clebsch-Gordan coefficients exactly before rounding once.

mod cgc;
mod halfint;
mod special;

pub use cgc::{cgc, Triangle};
pub use halfint::{check_projection, i_pow, minus_one_pow, sign_pow, HalfInt};
pub use special::{beta, factorial_ln, gauss_2f1};

pub(crate) use cgc::cgc_unchecked;
pub(crate) use special::{factorial, factorial_ln_int, gauss_2f1_with_magnitude};

/// Complex value type of every evaluator.
pub type CNum = num_complex::Complex64;
