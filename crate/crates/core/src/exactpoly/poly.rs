use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Monomial, PolyError, Rational};

/// A phase-space variable, 1-based as written in formulas: `X(1)` is `x_1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X(usize),
    P(usize),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X(i) => write!(f, "x{i}"),
            Var::P(i) => write!(f, "p{i}"),
        }
    }
}

/// Sparse polynomial in `x_1..x_n, p_1..p_D` with rational coefficients.
///
/// No stored coefficient is zero, so structural equality is mathematical
/// equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PhasePolynomial {
    num_base: usize,
    num_momenta: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl PhasePolynomial {
    pub fn zero(num_base: usize, num_momenta: usize) -> Self {
        PhasePolynomial {
            num_base,
            num_momenta,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_base: usize, num_momenta: usize, c: Rational) -> Self {
        let mut p = Self::zero(num_base, num_momenta);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(num_base + num_momenta), c);
        }
        p
    }

    pub fn var(num_base: usize, num_momenta: usize, v: Var) -> Result<Self, PolyError> {
        let mut p = Self::zero(num_base, num_momenta);
        let slot = p.slot(v)?;
        let m = Monomial::one(num_base + num_momenta).with_exponent(slot, 1);
        p.terms.insert(m, Rational::one());
        Ok(p)
    }

    /// Collects `(exponents, coefficient)` pairs, summing repeated exponents.
    ///
    /// Panics if an exponent vector has the wrong length.
    pub fn from_terms<I>(num_base: usize, num_momenta: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Self::zero(num_base, num_momenta);
        for (exps, c) in terms {
            assert_eq!(exps.len(), num_base + num_momenta, "exponent vector length");
            p.add_term(Monomial::from_exponents(exps), c);
        }
        p
    }

    pub fn num_base_vars(&self) -> usize {
        self.num_base
    }

    pub fn num_momenta(&self) -> usize {
        self.num_momenta
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Storage slot of a variable (x's first, then p's).
    pub fn slot(&self, v: Var) -> Result<usize, PolyError> {
        match v {
            Var::X(i) if i >= 1 && i <= self.num_base => Ok(i - 1),
            Var::P(i) if i >= 1 && i <= self.num_momenta => Ok(self.num_base + i - 1),
            _ => Err(PolyError::UnknownVariable(
                v,
                self.num_base,
                self.num_momenta,
            )),
        }
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_same_shape(&self, other: &Self) -> Result<(), PolyError> {
        if self.num_base != other.num_base || self.num_momenta != other.num_momenta {
            return Err(PolyError::DimensionMismatch(
                self.num_base,
                self.num_momenta,
                other.num_base,
                other.num_momenta,
            ));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_same_shape(other)?;
        let mut out = Self::zero(self.num_base, self.num_momenta);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.num_base, self.num_momenta);
        }
        PhasePolynomial {
            num_base: self.num_base,
            num_momenta: self.num_momenta,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(self.num_base, self.num_momenta, Rational::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn partial_derivative(&self, v: Var) -> Result<Self, PolyError> {
        let slot = self.slot(v)?;
        let mut out = Self::zero(self.num_base, self.num_momenta);
        for (m, c) in &self.terms {
            let e = m.exponent(slot);
            if e > 0 {
                out.add_term(m.with_exponent(slot, e - 1), c * BigInt::from(e));
            }
        }
        Ok(out)
    }

    /// `{self, other}` under the fixed convention `sum(f_x g_p - f_p g_x)`.
    ///
    /// Only base coordinates paired with a momentum of the same index
    /// contribute; surplus coordinates on either side are treated as
    /// parameters.
    pub fn poisson_bracket(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_same_shape(other)?;
        let mut out = Self::zero(self.num_base, self.num_momenta);
        for i in 1..=self.num_base.min(self.num_momenta) {
            let fx = self.partial_derivative(Var::X(i))?;
            let gp = other.partial_derivative(Var::P(i))?;
            let fp = self.partial_derivative(Var::P(i))?;
            let gx = other.partial_derivative(Var::X(i))?;
            if !fx.is_zero() && !gp.is_zero() {
                out = &out + &(&fx * &gp);
            }
            if !fp.is_zero() && !gx.is_zero() {
                out = &out - &(&fp * &gx);
            }
        }
        Ok(out)
    }

    /// Returns `(factor * self, factor)` where `factor` is the lcm of the
    /// coefficient denominators; the returned polynomial has integer
    /// coefficients.
    pub fn clear_denominators(&self) -> (Self, BigInt) {
        let mut lcm = BigInt::one();
        for c in self.terms.values() {
            lcm = lcm.lcm(c.denom());
        }
        let factor = BigRational::from_integer(lcm.clone());
        (self.scale(&factor), lcm)
    }

    /// Integer coefficients, if every coefficient is integral.
    pub fn integer_terms(&self) -> Option<Vec<(&Monomial, &BigInt)>> {
        self.terms
            .iter()
            .map(|(m, c)| c.is_integer().then(|| (m, c.numer())))
            .collect()
    }

    /// Substitutes exact values for some variables; the rest stay symbolic.
    pub fn evaluate_partial(&self, assignments: &[(Var, Rational)]) -> Result<Self, PolyError> {
        let mut slots = Vec::with_capacity(assignments.len());
        for (v, val) in assignments {
            slots.push((self.slot(*v)?, val));
        }
        let mut out = Self::zero(self.num_base, self.num_momenta);
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut mono = m.clone();
            for (slot, val) in &slots {
                let e = mono.exponent(*slot);
                if e > 0 {
                    coeff *= pow_rational(val, e);
                    mono = mono.with_exponent(*slot, 0);
                }
            }
            out.add_term(mono, coeff);
        }
        Ok(out)
    }

    /// Full evaluation; `point` lists x-values then p-values.
    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational, PolyError> {
        if point.len() != self.num_base + self.num_momenta {
            return Err(PolyError::DimensionMismatch(
                self.num_base,
                self.num_momenta,
                point.len(),
                0,
            ));
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (slot, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t *= pow_rational(&point[slot], e);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Floating-point evaluation (`point` as in [`evaluate`](Self::evaluate)).
    pub fn evaluate_f64(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = super::rational_to_f64(c);
                for (slot, &e) in m.exponents().iter().enumerate() {
                    if e > 0 {
                        t *= point[slot].powi(e as i32);
                    }
                }
                t
            })
            .sum()
    }

    pub fn depends_on(&self, v: Var) -> bool {
        match self.slot(v) {
            Ok(slot) => self.terms.keys().any(|m| m.exponent(slot) > 0),
            Err(_) => false,
        }
    }

    /// Distinct total momentum degrees occurring in the terms.
    pub fn momentum_degrees(&self) -> Vec<u32> {
        let range = self.num_base..self.num_base + self.num_momenta;
        let mut ds: Vec<u32> = self
            .terms
            .keys()
            .map(|m| m.degree_in(range.clone()))
            .collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    pub fn is_homogeneous_in_momenta(&self, degree: u32) -> bool {
        self.momentum_degrees().iter().all(|&d| d == degree)
    }

    /// Degree at most one in the momenta and no momentum-free terms.
    pub fn is_fiber_linear(&self) -> bool {
        self.is_homogeneous_in_momenta(1)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Highest exponent of `v` in any term.
    pub fn degree_in(&self, v: Var) -> Result<u32, PolyError> {
        let slot = self.slot(v)?;
        Ok(self
            .terms
            .keys()
            .map(|m| m.exponent(slot))
            .max()
            .unwrap_or(0))
    }

    /// Exact quotient `self / divisor`; errors if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self, PolyError> {
        self.check_same_shape(divisor)?;
        let (lead_m, lead_c) = divisor
            .terms
            .iter()
            .next_back()
            .ok_or(PolyError::DivisionByZero)?;
        let mut rem = self.clone();
        let mut quot = Self::zero(self.num_base, self.num_momenta);
        while let Some((m, c)) = rem.terms.iter().next_back() {
            let q_m = m.div(lead_m).ok_or(PolyError::InexactDivision)?;
            let q_c = c / lead_c;
            let mut step = Self::zero(self.num_base, self.num_momenta);
            step.add_term(q_m, q_c);
            rem = &rem - &(&step * divisor);
            quot = &quot + &step;
        }
        Ok(quot)
    }

    /// Re-embeds into a space with more (or equally many) variables.
    pub fn widen(&self, num_base: usize, num_momenta: usize) -> Self {
        assert!(num_base >= self.num_base && num_momenta >= self.num_momenta);
        let mut out = Self::zero(num_base, num_momenta);
        for (m, c) in &self.terms {
            let e = m.exponents();
            let mut v = vec![0u32; num_base + num_momenta];
            v[..self.num_base].copy_from_slice(&e[..self.num_base]);
            v[num_base..num_base + self.num_momenta].copy_from_slice(&e[self.num_base..]);
            out.terms.insert(Monomial::from_exponents(v), c.clone());
        }
        out
    }

    pub(crate) fn var_of_slot(&self, slot: usize) -> Var {
        if slot < self.num_base {
            Var::X(slot + 1)
        } else {
            Var::P(slot - self.num_base + 1)
        }
    }
}

fn pow_rational(r: &Rational, e: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= r;
    }
    acc
}

impl fmt::Display for PhasePolynomial {
    /// Writes the polynomial in the text grammar accepted by
    /// [`parse_polynomial`](super::parse_polynomial), highest terms first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if n == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            let is_const = m.degree() == 0;
            if !abs.is_one() || is_const {
                write!(f, "{abs}")?;
            }
            let mut first = abs.is_one() && !is_const;
            for (slot, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    write!(f, " ")?;
                }
                first = false;
                write!(f, "{}", self.var_of_slot(slot))?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&PhasePolynomial> for &PhasePolynomial {
            type Output = PhasePolynomial;
            /// Panics on a variable-count mismatch; use the `checked_*` form to recover.
            fn $method(self, rhs: &PhasePolynomial) -> PhasePolynomial {
                self.$checked(rhs)
                    .expect("polynomial variable counts differ")
            }
        }
        impl $tr<PhasePolynomial> for PhasePolynomial {
            type Output = PhasePolynomial;
            fn $method(self, rhs: PhasePolynomial) -> PhasePolynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &PhasePolynomial {
    type Output = PhasePolynomial;
    fn neg(self) -> PhasePolynomial {
        self.scale(&-Rational::one())
    }
}

impl Neg for PhasePolynomial {
    type Output = PhasePolynomial;
    fn neg(self) -> PhasePolynomial {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{int, parse_polynomial, rat};

    fn p(s: &str, nb: usize, nm: usize) -> PhasePolynomial {
        parse_polynomial(s, nb, nm).unwrap()
    }

    #[test]
    fn additive_cancellation() {
        let a = p("x1 + p2", 2, 3);
        let b = p("-x1", 2, 3);
        assert_eq!(&a + &b, p("p2", 2, 3));
    }

    #[test]
    fn heisenberg_square() {
        let w = p("p1 + x2 p3", 3, 3);
        assert_eq!(&w * &w, p("p1^2 + 2 x2 p1 p3 + x2^2 p3^2", 3, 3));
    }

    #[test]
    fn scale_identity() {
        assert_eq!(p("2 p1", 1, 1).scale(&rat(1, 2)), p("p1", 1, 1));
        assert!(p("2 p1", 1, 1).scale(&int(0)).is_zero());
    }

    #[test]
    fn mismatch_is_error() {
        let a = p("x1", 1, 1);
        let b = p("x1", 2, 1);
        assert!(matches!(
            a.checked_add(&b),
            Err(PolyError::DimensionMismatch(..))
        ));
        assert!(a.poisson_bracket(&b).is_err());
    }

    #[test]
    fn derivatives() {
        assert_eq!(
            p("p1 + x2 p3", 2, 3).partial_derivative(Var::X(2)).unwrap(),
            p("p3", 2, 3)
        );
        assert!(matches!(
            p("x1", 2, 3).partial_derivative(Var::X(7)),
            Err(PolyError::UnknownVariable(Var::X(7), 2, 3))
        ));
        assert!(p("x1", 2, 3).partial_derivative(Var::P(0)).is_err());
    }

    #[test]
    fn canonical_pairs() {
        let x1 = p("x1", 2, 2);
        let p1 = p("p1", 2, 2);
        assert_eq!(x1.poisson_bracket(&p1).unwrap(), p("1", 2, 2));
        assert_eq!(p1.poisson_bracket(&x1).unwrap(), p("-1", 2, 2));
    }

    #[test]
    fn heisenberg_bracket() {
        let w1 = p("p1 + x2 p3", 3, 3);
        let w2 = p("p2", 3, 3);
        assert_eq!(w1.poisson_bracket(&w2).unwrap(), p("p3", 3, 3));
    }

    #[test]
    fn clearing() {
        let (f, k) = p("1/2 p1 + 1/3 p2", 1, 2).clear_denominators();
        assert_eq!(k, BigInt::from(6));
        assert_eq!(f, p("3 p1 + 2 p2", 1, 2));
        let (g, k) = p("p1^2", 1, 2).clear_denominators();
        assert_eq!(k, BigInt::one());
        assert_eq!(g, p("p1^2", 1, 2));
    }

    #[test]
    fn partial_evaluation() {
        let f = p("p1 + x2 p3", 2, 3);
        assert_eq!(
            f.evaluate_partial(&[(Var::X(2), int(0))]).unwrap(),
            p("p1", 2, 3)
        );
        let g = p("x1 p5 + 1/2 x1^2 p6", 2, 6);
        assert_eq!(
            g.evaluate_partial(&[(Var::P(5), int(3)), (Var::P(6), int(4))])
                .unwrap(),
            p("3 x1 + 2 x1^2", 2, 6)
        );
        assert!(f.evaluate_partial(&[(Var::P(9), int(1))]).is_err());
    }

    #[test]
    fn exact_division() {
        let f = p("x1^2 p1 - p1 p2^2", 2, 2);
        let g = p("x1 - p2", 2, 2);
        assert_eq!(f.div_exact(&g).unwrap(), p("x1 p1 + p1 p2", 2, 2));
        assert_eq!(
            p("x1 + 1", 2, 2).div_exact(&p("x2", 2, 2)),
            Err(PolyError::InexactDivision)
        );
    }

    #[test]
    fn display_round_trip() {
        let f = p("-1/2 x1^2 x2 p6 + p1 - 3", 2, 6);
        assert_eq!(parse_polynomial(&f.to_string(), 2, 6).unwrap(), f);
        assert_eq!(PhasePolynomial::zero(1, 1).to_string(), "0");
    }
}
