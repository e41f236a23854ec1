//! Properties of the reduced flow checked against closed forms and
//! structural identities.

use std::f64::consts::TAU;

use proptest::prelude::*;

use srint::dynamics::{
    integrate, invariant_monitor, poincare_section, Coordinate, Direction, Flow, IntegratorConfig,
    SectionSpec, State, SECTION_TOL,
};
use srint::reduce::{QKind, ReducedSystem};

fn q1(a: f64, b: f64) -> ReducedSystem {
    ReducedSystem::from_normal_form(QKind::Q1, &[a, b])
}

fn q2(a: f64, b: f64, c: f64) -> ReducedSystem {
    ReducedSystem::from_normal_form(QKind::Q2, &[a, b, c])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn speed_identity_and_zero_trace(a in -10.0f64..10.0, b in -10.0f64..10.0, c in -5.0f64..5.0,
                                     x in -3.0f64..3.0, y in -3.0f64..3.0, z in -4.0f64..4.0) {
        for sys in [q1(a, b), q2(a, b, c)] {
            let f = Flow::from_reduced(&sys);
            let tr = integrate(&f, &State::new(0.0, x, y, z), 3.0, &IntegratorConfig::default()).unwrap();
            for s in &tr.states {
                prop_assert!(f.speed_defect(s).abs() < 1e-14);
                prop_assert_eq!(f.jacobian_trace(s), 0.0);
            }
        }
    }

    /// Constant `Q = c` moves on circles of radius `1/c` centred at
    /// `(-sin z0 / c, cos z0 / c)` relative to the start.
    #[test]
    fn constant_q_closed_form(c in 0.2f64..5.0, z0 in -3.0f64..3.0, t in 0.1f64..20.0) {
        let f = Flow::constant(c);
        let tr = integrate(&f, &State::new(0.0, 0.0, 0.0, z0), t, &IntegratorConfig::default()).unwrap();
        let s = tr.states.last().unwrap();
        let z = z0 + c * t;
        prop_assert!((s.z - z).abs() < 1e-10);
        prop_assert!((s.x - (z.sin() - z0.sin()) / c).abs() < 1e-9);
        prop_assert!((s.y - (z0.cos() - z.cos()) / c).abs() < 1e-9);
    }

    #[test]
    fn section_signs(a in 1.0f64..10.0, b in -1.0f64..1.0, y0 in -3.0f64..3.0) {
        let f = Flow::from_reduced(&q1(a, b));
        let cfg = IntegratorConfig { max_steps: 2_000_000, ..Default::default() };
        let ic = State::new(0.0, 0.0, y0, 0.0);
        let zs = poincare_section(&f, &ic, &SectionSpec::new(Coordinate::Z, 0.0, Direction::Increasing, 30), &cfg).unwrap();
        for p in &zs.points {
            prop_assert!(f.q(p.x, p.y) > 0.0);
            let off = (p.z / TAU).round() * TAU;
            prop_assert!((p.z - off).abs() < SECTION_TOL);
        }
        let xs = poincare_section(&f, &ic, &SectionSpec::new(Coordinate::X, 0.0, Direction::Increasing, 30), &cfg).unwrap();
        for p in &xs.points {
            prop_assert!(p.z.cos() > 0.0);
            prop_assert!(p.x.abs() < SECTION_TOL);
        }
        let down = poincare_section(&f, &ic, &SectionSpec::new(Coordinate::X, 0.0, Direction::Decreasing, 10), &cfg).unwrap();
        for p in &down.points {
            prop_assert!(p.z.cos() < 0.0);
        }
    }
}

fn round_trip(f: &Flow, ic: State, t: f64) -> f64 {
    let cfg = IntegratorConfig::default();
    let fw = integrate(f, &ic, t, &cfg).unwrap();
    let end = *fw.states.last().unwrap();
    let bw = integrate(f, &end, ic.t, &cfg).unwrap();
    let b = bw.states.last().unwrap();
    (b.x - ic.x)
        .abs()
        .max((b.y - ic.y).abs())
        .max((b.z - ic.z).abs())
}

#[test]
fn reversibility_on_regular_orbits() {
    assert!(round_trip(&Flow::constant(1.0), State::new(0.0, 0.0, 0.0, 0.0), 100.0) < 1e-6);
    assert!(
        round_trip(
            &Flow::from_reduced(&q2(1.0, 1.0, 0.0)),
            State::new(0.0, 1.0, 0.0, 0.0),
            20.0
        ) < 1e-6
    );
}

#[test]
fn elliptic_invariant_is_conserved() {
    let sys = q2(1.0, 1.0, 0.0);
    let tr = integrate(
        &Flow::from_reduced(&sys),
        &State::new(0.0, 1.0, 0.0, 0.0),
        1000.0,
        &IntegratorConfig::default(),
    )
    .unwrap();
    assert!(invariant_monitor(&sys, &tr.states).unwrap() < 1e-8);
    // and it is not conserved when a differs from b
    let other = q2(1.0, 2.0, 0.0);
    let tr = integrate(
        &Flow::from_reduced(&other),
        &State::new(0.0, 1.0, 0.0, 0.0),
        50.0,
        &IntegratorConfig::default(),
    )
    .unwrap();
    assert!(invariant_monitor(&sys, &tr.states).unwrap() > 1e-3);
}
