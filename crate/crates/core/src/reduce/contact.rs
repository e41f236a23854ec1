//! Contact-form cross-check: the field `X = (cos z, sin z, Q)` spans the
//! kernel of `dα` for a suitable 1-form `α`, hence is proportional to its
//! Reeb field. Computations are polynomial in `(x, y, S, C)` with
//! `S = sin z`, `C = cos z` taken modulo `S² + C² - 1`.

use num_traits::{One, Zero};

use crate::exactpoly::{rat, PhasePolynomial, Rational, Var};

/// Ring `Q[x, y, S, C]`.
pub(crate) fn v(i: usize) -> PhasePolynomial {
    PhasePolynomial::var(4, 0, Var::X(i)).expect("slot")
}

pub(crate) fn k(c: Rational) -> PhasePolynomial {
    PhasePolynomial::constant(4, 0, c)
}

pub(crate) const S: usize = 3;
pub(crate) const C: usize = 4;

/// Normal form modulo `S² + C² - 1`: every power `S^e` with `e >= 2` is
/// rewritten through `S² = 1 - C²`.
pub(crate) fn reduce_trig(p: &PhasePolynomial) -> PhasePolynomial {
    let one_minus_c2 = &k(Rational::one()) - &v(C).pow(2);
    let mut out = PhasePolynomial::zero(4, 0);
    for (m, c) in p.terms() {
        let e = m.exponents();
        let mut t = k(c.clone());
        t = &t * &v(1).pow(e[0]);
        t = &t * &v(2).pow(e[1]);
        t = &t * &v(S).pow(e[2] % 2);
        t = &t * &one_minus_c2.pow(e[2] / 2);
        t = &t * &v(C).pow(e[3]);
        out = &out + &t;
    }
    out
}

fn d(p: &PhasePolynomial, i: usize) -> PhasePolynomial {
    p.partial_derivative(Var::X(i)).expect("slot")
}

/// `∂/∂z` on `Q[x, y, S, C]`.
pub(crate) fn dz(p: &PhasePolynomial) -> PhasePolynomial {
    &(&v(C) * &d(p, S)) - &(&v(S) * &d(p, C))
}

/// Lifts `Q(x, y)` into `Q[x, y, S, C]`.
pub(crate) fn lift(q: &PhasePolynomial) -> PhasePolynomial {
    PhasePolynomial::from_terms(
        4,
        0,
        q.terms().map(|(m, c)| {
            let e = m.exponents();
            (vec![e[0], e[1], 0, 0], c.clone())
        }),
    )
}

/// Derivative of `f` along `X = (C, S, Q)`.
pub(crate) fn along_x(f: &PhasePolynomial, q: &PhasePolynomial) -> PhasePolynomial {
    let q = lift(q);
    reduce_trig(&(&(&(&v(C) * &d(f, 1)) + &(&v(S) * &d(f, 2))) + &(&q * &dz(f))))
}

#[derive(Debug, Clone)]
pub struct ReebReport {
    /// The sign `ε` for which `i_X dα_ε ≡ 0`, if any.
    pub epsilon: Option<i8>,
    /// `(ε, components of i_X dα_ε)` for both signs tried.
    pub tried: Vec<(i8, [PhasePolynomial; 3])>,
    /// `α_ε(X)` in `Q[x, y, S, C]` for the closing sign.
    pub alpha_of_x: Option<PhasePolynomial>,
}

impl ReebReport {
    pub fn closes(&self) -> bool {
        self.epsilon.is_some()
    }
}

/// `α_ε = ε(A dx + B dy) + C dx + S dy` with `∂B/∂x - ∂A/∂y = Q`.
fn check_form(
    q: &PhasePolynomial,
    a_form: &PhasePolynomial,
    b_form: &PhasePolynomial,
) -> ReebReport {
    let ql = lift(q);
    let mut tried = Vec::new();
    let mut found = None;
    for eps in [1i8, -1] {
        let e = k(Rational::from_integer(eps.into()));
        let ax = &(&e * a_form) + &v(C);
        let ay = &(&e * b_form) + &v(S);
        // dα = f_xy dx∧dy + f_xz dx∧dz + f_yz dy∧dz (α_z = 0)
        let f_xy = &d(&ay, 1) - &d(&ax, 2);
        let f_xz = -dz(&ax);
        let f_yz = -dz(&ay);
        // (i_X dα)_j = Σ_i X^i f_ij with X = (C, S, Q)
        let ix = reduce_trig(&(&(&-&v(S) * &f_xy) - &(&ql * &f_xz)));
        let iy = reduce_trig(&(&(&v(C) * &f_xy) - &(&ql * &f_yz)));
        let iz = reduce_trig(&(&(&v(C) * &f_xz) + &(&v(S) * &f_yz)));
        let closes = ix.is_zero() && iy.is_zero() && iz.is_zero();
        if closes && found.is_none() {
            found = Some((eps, reduce_trig(&(&(&ax * &v(C)) + &(&ay * &v(S))))));
        }
        tried.push((eps, [ix, iy, iz]));
    }
    ReebReport {
        epsilon: found.as_ref().map(|f| f.0),
        alpha_of_x: found.map(|f| f.1),
        tried,
    }
}

/// The contact form for `Q2 = a x² + b y² + c`:
/// `α = ε(⅓(a x³ dy - b y³ dx) + ½c(x dy - y dx)) + cos z dx + sin z dy`.
pub fn reeb_check(a: &Rational, b: &Rational, c: &Rational) -> ReebReport {
    let third = k(rat(1, 3));
    let half = k(rat(1, 2));
    let a_form =
        -&(&(&third * &(&k(b.clone()) * &v(2).pow(3))) + &(&half * &(&k(c.clone()) * &v(2))));
    let b_form = &(&third * &(&k(a.clone()) * &v(1).pow(3))) + &(&half * &(&k(c.clone()) * &v(1)));
    let q = super::quadratic([
        c.clone(),
        Rational::zero(),
        Rational::zero(),
        a.clone(),
        Rational::zero(),
        b.clone(),
    ]);
    check_form(&q, &a_form, &b_form)
}

/// The same check for any `Q(x, y)`, with `A = 0` and `B = ∫_0^x Q dx`
/// (the modified form the Q1 case needs).
pub fn reeb_check_poly(q: &PhasePolynomial) -> ReebReport {
    let mut b_form = PhasePolynomial::zero(4, 0);
    for (m, c) in q.terms() {
        let e = m.exponents();
        let t = PhasePolynomial::from_terms(
            4,
            0,
            [(
                vec![e[0] + 1, e[1], 0, 0],
                c / Rational::from_integer((e[0] + 1).into()),
            )],
        );
        b_form = &b_form + &t;
    }
    check_form(q, &PhasePolynomial::zero(4, 0), &b_form)
}

/// Divergence of `X = (cos z, sin z, Q(x, y))` in `Q[x, y, S, C]`.
pub fn divergence(q: &PhasePolynomial) -> PhasePolynomial {
    let ql = lift(q);
    reduce_trig(&(&(&d(&v(C), 1) + &d(&v(S), 2)) + &dz(&ql)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::int;

    #[test]
    fn generic_parameters_close_with_negative_sign() {
        for (a, b, c) in [(2, 1, 0), (-1000, 10000, 3), (5, 5, -7), (1, -2, 1)] {
            let r = reeb_check(&int(a), &int(b), &int(c));
            assert_eq!(r.epsilon, Some(-1), "{a} {b} {c}");
            // the literal sign leaves (1 + ε) Q (S, -C, 0)
            assert!(!r.tried[0].1[0].is_zero());
            let alpha = r.alpha_of_x.unwrap();
            assert_eq!(
                alpha.evaluate(&[int(0), int(0), int(0), int(1)]).unwrap(),
                int(1)
            );
        }
    }

    #[test]
    fn zero_parameters() {
        let r = reeb_check(&int(0), &int(0), &int(0));
        // with Q = 0 both signs close and α(X) = S² + C² = 1
        assert_eq!(r.epsilon, Some(1));
        assert_eq!(r.alpha_of_x.unwrap(), k(Rational::one()));
    }

    #[test]
    fn q1_with_modified_form() {
        let q = super::super::quadratic([int(0), int(0), int(-1), int(10), int(0), int(0)]);
        let r = reeb_check_poly(&q);
        assert_eq!(r.epsilon, Some(-1));
    }

    #[test]
    fn divergence_vanishes() {
        let q = super::super::quadratic([int(1), int(2), int(3), int(4), int(5), int(6)]);
        assert!(divergence(&q).is_zero());
    }

    #[test]
    fn trig_reduction() {
        let p = &v(S).pow(3) + &(&v(S) * &v(C).pow(2));
        assert_eq!(reduce_trig(&p), v(S));
    }
}
