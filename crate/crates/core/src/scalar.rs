//! Exact rational scalars.
//!
//! Every quantity in the engine (structure constants, Gram entries, operator
//! matrices, Casimir eigenvalues) is an exact `BigInt`-backed rational. There
//! is no floating point anywhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// The scalar field used throughout: arbitrary-precision rationals.
pub type Q = BigRational;

/// Rational from an integer.
pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Rational `n/d`.
pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Zero.
pub fn q0() -> Q {
    Q::zero()
}

/// One.
pub fn q1() -> Q {
    Q::one()
}

/// `(-1)^k` as a rational.
pub fn sign_pow(k: u32) -> Q {
    if k % 2 == 0 {
        q(1)
    } else {
        q(-1)
    }
}

/// Render a rational compactly (`3`, `-1/2`).
pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else if x.numer().is_negative() && x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}
