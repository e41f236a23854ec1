//! Claimed integrals for each catalog system, written in the `omega`/`theta`
//! forms where those are the published ones.

use super::{IntegralSet, NamedPoly};
use crate::carnot::{verify_realization, CarnotError, SRSystem};
use crate::exactpoly::{rat, PhasePolynomial, Var};

#[derive(Debug, Clone)]
pub struct ClaimedIdentity {
    pub name: String,
    pub lhs: PhasePolynomial,
    pub rhs: PhasePolynomial,
}

#[derive(Debug, Clone)]
pub struct Claims {
    pub system: String,
    pub sets: Vec<IntegralSet>,
    pub identities: Vec<ClaimedIdentity>,
}

struct Builder<'a> {
    sys: &'a SRSystem,
    omegas: Vec<Option<PhasePolynomial>>,
    claims: Claims,
}

impl<'a> Builder<'a> {
    fn w(&self, i: usize) -> &PhasePolynomial {
        self.omegas[i - 1].as_ref().expect("omega available")
    }

    fn th(&self, i: usize) -> &PhasePolynomial {
        self.sys
            .realization
            .as_ref()
            .and_then(|r| r.theta(i))
            .expect("theta transcribed")
    }

    fn p(&self, i: usize) -> PhasePolynomial {
        self.sys.var(Var::P(i))
    }

    fn poly(&self, s: &str) -> PhasePolynomial {
        self.sys.parse(s).expect("claim formula parses")
    }

    fn h(&self) -> NamedPoly {
        NamedPoly::new("H", self.sys.hamiltonian())
    }

    /// `H` followed by `p_from..=p_D`, labelled `I_2, I_3, ...`.
    fn noether(&self, from: usize) -> Vec<NamedPoly> {
        let mut m = vec![self.h()];
        for (n, i) in (from..=self.sys.dim()).enumerate() {
            m.push(NamedPoly::new(format!("I{}", n + 2), self.p(i)));
        }
        m
    }

    fn set(
        &mut self,
        label: &str,
        members: Vec<NamedPoly>,
        involutive: bool,
        independent: usize,
        extras: Vec<NamedPoly>,
    ) {
        self.claims.sets.push(IntegralSet {
            system: self.sys.name.clone(),
            label: label.into(),
            members,
            claimed_involutive: involutive,
            claimed_independent_count: independent,
            extras,
        });
    }

    fn identity(&mut self, name: &str, lhs: PhasePolynomial, rhs: PhasePolynomial) {
        self.claims.identities.push(ClaimedIdentity {
            name: name.into(),
            lhs,
            rhs,
        });
    }

    /// `w_a w_b - w_c w_d + 1/2 w_e^2`.
    fn quad(
        &self,
        f: impl Fn(usize) -> PhasePolynomial,
        a: usize,
        b: usize,
        c: usize,
        d: usize,
        e: usize,
    ) -> PhasePolynomial {
        let half = rat(1, 2);
        &(&(&f(a) * &f(b)) - &(&f(c) * &f(d))) + &(&f(e) * &f(e)).scale(&half)
    }
}

/// Claimed integral sets and identities for a catalog system. Systems without
/// published claims beyond their Noether momenta get the Noether set alone.
pub fn claims_for(sys: &SRSystem) -> Result<Claims, CarnotError> {
    let omegas = match &sys.realization {
        Some(_) => verify_realization(sys)?.omegas,
        None => vec![None; sys.dim()],
    };
    let mut b = Builder {
        sys,
        omegas,
        claims: Claims {
            system: sys.name.clone(),
            sets: Vec::new(),
            identities: Vec::new(),
        },
    };
    let half = rat(1, 2);
    let base = sys.name.as_str();
    match base {
        "heis3" => {
            let members = vec![
                b.h(),
                NamedPoly::new("I2", b.th(1).clone()),
                NamedPoly::new("I3", b.th(3).clone()),
            ];
            let extras = vec![NamedPoly::new("I4", b.th(2).clone())];
            b.set("liouville", members, true, 3, extras);
            let members = vec![
                b.h(),
                NamedPoly::new("C", b.w(3).clone()),
                NamedPoly::new("theta2", b.th(2).clone()),
            ];
            b.set("casimir_and_theta", members, true, 3, vec![]);
            b.identity("I2 = p1", b.th(1).clone(), b.p(1));
            b.identity("I3 = p3", b.th(3).clone(), b.p(3));
            b.identity("I3 = omega3", b.th(3).clone(), b.w(3).clone());
            b.identity("I4 = p2 + x1 p3", b.th(2).clone(), b.poly("p2 + x1 p3"));
        }
        "engel" => {
            let members = vec![
                b.h(),
                NamedPoly::new("I2", b.th(2).clone()),
                NamedPoly::new("I3", b.th(3).clone()),
                NamedPoly::new("I4", b.th(4).clone()),
            ];
            let i5 = b.th(1).scale(&rat(-1, 1));
            let extras = vec![NamedPoly::new("I5", i5.clone())];
            b.set("theta", members, true, 4, extras);
            let j4 = &(b.w(3) * b.w(3)) - &(b.w(2) * b.w(4)).scale(&rat(2, 1));
            let members = vec![
                b.h(),
                NamedPoly::new("J2", i5.clone()),
                NamedPoly::new("J3", b.th(4).clone()),
                NamedPoly::new("J4", j4.clone()),
            ];
            b.set("involutive_J", members, true, 4, vec![]);
            b.identity("I5 = p1", i5, b.p(1));
            b.identity("J4 = p3^2 - 2 p2 p4", j4.clone(), b.poly("p3^2 - 2 p2 p4"));
            let rhs = &(b.th(3) * b.th(3)) - &(b.th(2) * b.th(4)).scale(&rat(2, 1));
            b.identity("J4 = I3^2 - 2 I2 I4", j4, rhs);
        }
        "cartan5" => {
            let jm = b.poly("x1 p4 - x2 p5");
            let jp = b.poly("x1 p4 + x2 p5");
            let i2 = &(&b.poly("p1 p5 - p2 p4 + 1/2 p3^2") + &(&jm * &jm).scale(&half))
                + &(&b.p(3) * &jp).scale(&half);
            let mut members = vec![b.h(), NamedPoly::new("I2", i2.clone())];
            members.extend(
                b.noether(3)
                    .into_iter()
                    .skip(1)
                    .enumerate()
                    .map(|(n, m)| NamedPoly::new(format!("I{}", n + 3), m.poly)),
            );
            let extras = vec![
                NamedPoly::new("I6", b.th(1).clone()),
                NamedPoly::new("I6'", b.th(2).clone()),
            ];
            b.set("liouville", members, true, 5, extras);
            let omega_form = b.quad(|i| b.w(i).clone(), 1, 5, 2, 4, 3);
            b.identity(
                "I2 = omega1 omega5 - omega2 omega4 + 1/2 omega3^2",
                i2.clone(),
                omega_form,
            );
            let theta_form = b.quad(|i| b.th(i).clone(), 1, 5, 2, 4, 3);
            b.identity(
                "I2 = theta1 theta5 - theta2 theta4 + 1/2 theta3^2",
                i2,
                theta_form,
            );
        }
        "ell6" => {
            let f = |s: &str| b.poly(s);
            let g3 = f("p3 + x1 p4 + x2 p5 + 1/2 x1^2 p6 + 1/2 x2^2 p6");
            let i2 = &(&(&f("p1 - 1/2 x2 p3 - x1 x2 p4 - 1/2 x1^2 x2 p6") * &f("p5 + x2 p6"))
                - &(&f("p2 + 1/2 x1 p3 + x1 x2 p5 + 1/2 x1 x2^2 p6") * &f("p4 + x1 p6")))
                + &(&g3 * &g3).scale(&half);
            let mut members = vec![b.h(), NamedPoly::new("I2", i2.clone())];
            for i in 3..=6 {
                members.push(NamedPoly::new(format!("I{i}"), b.p(i)));
            }
            let c = &(&(b.w(4) * b.w(4)) + &(b.w(5) * b.w(5))).scale(&half) - &(b.w(3) * b.w(6));
            let extras = vec![NamedPoly::new("C", c.clone())];
            b.set("liouville", members, true, 6, extras);
            let omega_form = b.quad(|i| b.w(i).clone(), 1, 5, 2, 4, 3);
            b.identity(
                "I2 = omega1 omega5 - omega2 omega4 + 1/2 omega3^2",
                i2,
                omega_form,
            );
            b.identity("I6 = omega6", b.p(6), b.w(6).clone());
            let rhs =
                &(&(&b.p(4) * &b.p(4)) + &(&b.p(5) * &b.p(5))).scale(&half) - &(&b.p(3) * &b.p(6));
            b.identity("C = 1/2 (I4^2 + I5^2) - I3 I6", c, rhs);
        }
        "par6" => {
            let members = b.noether(3);
            b.set("noether", members, true, 5, vec![]);
            b.identity("omega5 = theta5", b.w(5).clone(), b.th(5).clone());
            b.identity("omega6 = theta6", b.w(6).clone(), b.th(6).clone());
        }
        "hyp6" => {
            let c = &(b.w(4) * b.w(5)) - &(b.w(3) * b.w(6));
            let mut members = b.noether(3);
            members.push(NamedPoly::new("C", c.clone()));
            b.set("involutive_dependent", members, true, 5, vec![]);
            let rhs = &(&b.p(4) * &b.p(5)) - &(&b.p(3) * &b.p(6));
            b.identity("C = I4 I5 - I3 I6", c, rhs);
            b.identity("theta6 = omega6", b.th(6).clone(), b.w(6).clone());
        }
        "dim7" => {
            let members = b.noether(3);
            let cubic = &(&(b.w(3) * &(&(b.w(6) * b.w(6)) + &(b.w(7) * b.w(7))))
                - &(&(&(b.w(4) * b.w(4)) - &(b.w(5) * b.w(5))) * b.w(6)).scale(&half))
                - &(&(b.w(4) * b.w(5)) * b.w(7));
            let extras = vec![
                NamedPoly::new("omega6", b.w(6).clone()),
                NamedPoly::new("omega7", b.w(7).clone()),
                NamedPoly::new("C3", cubic),
            ];
            b.set("noether", members, true, 6, extras);
        }
        "dim8_23568" => {
            let mut members = vec![b.h()];
            for (n, i) in (4..=8).enumerate() {
                members.push(NamedPoly::new(format!("I{}", n + 2), b.th(i).clone()));
            }
            let i7 = &(&(&(b.w(1) * b.w(8)) - &(b.w(2) * b.w(7))) + &(b.w(3) * b.w(6)))
                - &(&(b.w(4) * b.w(4)) + &(b.w(5) * b.w(5))).scale(&half);
            let i8 = b.quad(|i| b.w(i).clone(), 1, 5, 2, 4, 3);
            members.push(NamedPoly::new("I7", i7));
            members.push(NamedPoly::new("I8", i8));
            let c = &(&(b.w(4) * b.w(7)) + &(b.w(5) * b.w(8))) - &(b.w(6) * b.w(6)).scale(&half);
            let extras = vec![NamedPoly::new("C", c.clone())];
            b.set("liouville", members, true, 8, extras);
            let rhs =
                &(&(b.th(4) * b.th(7)) + &(b.th(5) * b.th(8))) - &(b.th(6) * b.th(6)).scale(&half);
            b.identity("C = theta4 theta7 + theta5 theta8 - 1/2 theta6^2", c, rhs);
        }
        _ => {
            let members = b.noether(3);
            let n = members.len();
            b.set("noether", members, true, n, vec![]);
        }
    }
    Ok(b.claims)
}
