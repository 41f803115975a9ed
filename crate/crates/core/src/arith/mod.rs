//! Exact rational and integer linear algebra plus certified real arithmetic.

pub mod factor;
pub mod interval;
pub mod matrix;
pub mod radical;
pub mod rational;
pub mod real;

pub use interval::{Dyadic, Interval, Round};
pub use matrix::{det, hermite_normal_form, integer_kernel_basis, smith_normal_form, IntMatrix, RatMatrix};
pub use radical::RadicalSum;
pub use rational::Rational;
pub use real::{certified_compare, Comparison, Precision, Real};
