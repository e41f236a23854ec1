//! Reduction checked against a floating-point bracket computed by central
//! differences, plus the normal-form and contact-geometry properties.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use srint::carnot::{lookup, SRSystem};
use srint::exactpoly::{int, rat, rational_to_f64, PhasePolynomial, Rational};
use srint::reduce::{
    apply_map, divergence, normal_form_polynomial, reduce_and_normalize, reeb_check,
    symplectic_reduce, QKind,
};

/// `-{ω1, ω2}` at one phase point, from finite differences of the frame.
fn fd_bracket(w1: &PhasePolynomial, w2: &PhasePolynomial, point: &[f64]) -> f64 {
    let n = w1.num_base_vars();
    let h = 1e-4;
    let d = |w: &PhasePolynomial, slot: usize| {
        let (mut a, mut b) = (point.to_vec(), point.to_vec());
        a[slot] += h;
        b[slot] -= h;
        (w.evaluate_f64(&a) - w.evaluate_f64(&b)) / (2.0 * h)
    };
    -(0..n)
        .map(|i| d(w1, i) * d(w2, n + i) - d(w1, n + i) * d(w2, i))
        .sum::<f64>()
}

fn check_against_oracle(sys: &SRSystem, rng: &mut ChaCha8Rng) {
    let n = sys.dim();
    let consts: Vec<Rational> = (3..=n)
        .map(|_| rat(rng.gen_range(-20..=20), rng.gen_range(1..=7)))
        .collect();
    let q = symplectic_reduce(sys, &consts).unwrap();
    let (w1, w2) = sys.frame.clone().unwrap();
    for _ in 0..10 {
        let mut point: Vec<f64> = (0..2 * n).map(|_| rng.gen_range(-2.0..2.0)).collect();
        for (i, c) in consts.iter().enumerate() {
            point[n + 2 + i] = rational_to_f64(c);
        }
        let exact = q.evaluate_f64(&point[..2]);
        let approx = fd_bracket(&w1, &w2, &point);
        assert!(
            (exact - approx).abs() < 1e-6 * (1.0 + exact.abs()),
            "{}: {exact} vs {approx}",
            sys.name
        );
    }
}

#[test]
fn reduced_q_matches_difference_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for name in ["heis3", "par6", "dim7", "dim8_2358"] {
        let sys = lookup(name, None).unwrap();
        for _ in 0..5 {
            check_against_oracle(&sys, &mut rng);
        }
    }
}

#[test]
fn higher_systems_give_q2_generically() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for name in ["dim7", "dim8_2358"] {
        let sys = lookup(name, None).unwrap();
        let n = sys.dim();
        for _ in 0..20 {
            let consts: Vec<Rational> = (3..=n)
                .map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=4)))
                .collect();
            let r = reduce_and_normalize(&sys, &consts).unwrap();
            assert!(
                r.kind == QKind::Q2 || r.kind == QKind::Degenerate,
                "{name} {consts:?}: {r}"
            );
            if let Some(nf) = normal_form_polynomial(&r) {
                assert_eq!(apply_map(&r.q, &r.map).unwrap(), nf);
            }
            assert!(divergence(&r.q).is_zero());
            if name == "dim7" {
                // the quadratic part of Q is trace-free: Q(±1,0) + Q(0,±1) = 4 Q(0,0)
                let e = |x: i64, y: i64| r.q.evaluate(&[int(x), int(y)]).unwrap();
                assert_eq!(e(1, 0) + e(-1, 0) + e(0, 1) + e(0, -1), e(0, 0) * int(4));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn par6_normalizes_to_q1(c3 in -50i64..50, c4 in -50i64..50, c5 in 1i64..40, c6 in 1i64..40,
                             d in 1i64..9, s5 in any::<bool>(), s6 in any::<bool>()) {
        let sys = lookup("par6", None).unwrap();
        let c5 = rat(if s5 { c5 } else { -c5 }, d);
        let c6 = rat(if s6 { c6 } else { -c6 }, d + 1);
        let consts = vec![rat(c3, d), int(c4), c5.clone(), c6.clone()];
        let r = reduce_and_normalize(&sys, &consts).unwrap();
        prop_assert_eq!(r.kind, QKind::Q1);
        prop_assert_eq!(r.params.exact().unwrap().to_vec(), vec![c6 / int(2), c5]);
    }

    #[test]
    fn reeb_field_closes(a in -30i64..30, b in -30i64..30, c in -30i64..30, d in 1i64..6) {
        let rep = reeb_check(&rat(a, d), &rat(b, d), &rat(c, d));
        prop_assert!(rep.closes());
    }
}
