//! Exact sparse polynomials on phase space `T*R^n`.
//!
//! A [`PhasePolynomial`] lives in the ring `Q[x_1..x_n, p_1..p_D]`, where the
//! `x_i` are base coordinates and the `p_i` fiber momenta. Terms are kept in a
//! `BTreeMap` keyed by graded-lexicographic monomials, so iteration order (and
//! therefore every matrix built downstream) is deterministic.
//!
//! The canonical Poisson bracket is fixed as
//!
//! ```text
//! {f, g} = sum_i ( df/dx_i * dg/dp_i - df/dp_i * dg/dx_i )
//! ```
//!
//! so that `dF/dt = {F, H}` along `x' = dH/dp`, `p' = -dH/dx`.

mod monomial;
mod parse;
mod poly;

pub use monomial::Monomial;
pub use parse::{parse_polynomial, ParseError};
pub use poly::{PhasePolynomial, Var};

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

/// Exact rational coefficient. Always stored reduced with a positive denominator.
pub type Rational = BigRational;

/// Errors raised by polynomial arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable-count mismatch: ({0} base, {1} momenta) vs ({2} base, {3} momenta)")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("unknown variable {0} (polynomial has {1} base variables and {2} momenta)")]
    UnknownVariable(Var, usize, usize),
    #[error("exact division failed: remainder is nonzero")]
    InexactDivision,
    #[error("division by the zero polynomial")]
    DivisionByZero,
}

/// Build a rational from a numerator and a nonzero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Build an integral rational.
pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Exact rational -> f64 (nearest, via numerator/denominator as floats).
pub fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // very large parts: scale both down by the same power of two
            let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
            let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}
