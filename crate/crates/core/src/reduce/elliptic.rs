//! The extra integral for `a = b`: in polar coordinates `x = r cos ψ`,
//! `y = r sin ψ`, `s = z - ψ`,
//! `F = ¼ a r⁴ + ½ c r² - r sin s`.
//! Since `r sin s = x sin z - y cos z` it is polynomial in `(x, y, S, C)`.

use crate::exactpoly::{PhasePolynomial, Rational};

use super::contact::{along_x, k, v, C, S};
use super::{quadratic, ReduceError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticInvariant {
    pub a: f64,
    pub c: f64,
}

impl EllipticInvariant {
    pub fn new(a: f64, c: f64) -> Self {
        EllipticInvariant { a, c }
    }

    /// `F(x, y, z)`; the polar angle is undefined at `r = 0`.
    pub fn eval(&self, x: f64, y: f64, z: f64) -> Result<f64, ReduceError> {
        let r = x.hypot(y);
        if r == 0.0 {
            return Err(ReduceError::Singular);
        }
        let s = z - y.atan2(x);
        Ok(0.25 * self.a * r.powi(4) + 0.5 * self.c * r * r - r * s.sin())
    }
}

/// `F` as a polynomial in `(x, y, S, C)`.
pub fn elliptic_polynomial(a: &Rational, c: &Rational) -> PhasePolynomial {
    let r2 = &v(1).pow(2) + &v(2).pow(2);
    let quarter = k(crate::exactpoly::rat(1, 4));
    let half = k(crate::exactpoly::rat(1, 2));
    let r_sin_s = &(&v(1) * &v(S)) - &(&v(2) * &v(C));
    &(&(&quarter * &(&k(a.clone()) * &r2.pow(2))) + &(&half * &(&k(c.clone()) * &r2))) - &r_sin_s
}

/// `dF/dt` along `x' = C, y' = S, z' = a x² + b y² + c`, reduced modulo
/// `S² + C² - 1`, for `F` built from `(a, c)`. Zero exactly when `a = b`.
pub fn elliptic_drift_polynomial(a: &Rational, b: &Rational, c: &Rational) -> PhasePolynomial {
    let z = Rational::default;
    let q = quadratic([c.clone(), z(), z(), a.clone(), z(), b.clone()]);
    along_x(&elliptic_polynomial(a, c), &q)
}
