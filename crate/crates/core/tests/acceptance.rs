//! Acceptance criteria, one PASS/FAIL line each. Tolerances are pinned
//! below. A criterion listed in `KNOWN_FAILURES` is reported as FAIL like
//! any other; the target only fails on unexpected outcomes, including a
//! known failure that starts passing.

use std::f64::consts::TAU;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use srint::carnot::{lookup, verify_realization, CatalogParams, SRSystem, CATALOG_NAMES};
use srint::dynamics::{
    integrate, invariant_monitor, poincare_section, Coordinate, Direction, Flow, IntegratorConfig,
    SectionSpec, State,
};
use srint::exactpoly::{int, rat, Rational};
use srint::integrals::{check_commute, claims_for, verify_claims};
use srint::obstruct::{decide, num_cols, num_rows, trivial_count, Mode, Verdict};
use srint::reduce::{divergence, reduce_and_normalize, reeb_check, QKind};

/// Period error of the unit circle over ten turns.
const CIRCLE_PERIOD_TOL: f64 = 1e-9;
/// Drift of the elliptic invariant over `t = 1000`.
const ELLIPTIC_DRIFT_TOL: f64 = 1e-8;

/// Criteria whose failure is analysed in the decisions ledger.
const KNOWN_FAILURES: &[&str] = &["3f"];

struct Suite {
    results: Vec<(String, bool)>,
}

impl Suite {
    fn check(&mut self, id: &str, what: &str, f: impl FnOnce() -> Result<String, String>) {
        let start = Instant::now();
        let (ok, detail) = match f() {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        let tag = if ok { "PASS" } else { "FAIL" };
        println!(
            "{tag} [{id}] {what}: {detail} ({:.1} s)",
            start.elapsed().as_secs_f64()
        );
        self.results.push((id.to_string(), ok));
    }
}

fn sys(name: &str) -> SRSystem {
    let params = CatalogParams {
        a: int(1),
        b: int(2),
    };
    let p = matches!(name, "gen6" | "gen6h").then_some(&params);
    lookup(name, p).expect("catalog entry")
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn delta_of(name: &str, d: usize, mode: Mode) -> Result<(usize, usize, Verdict), String> {
    let r = decide(&sys(name), d, mode).map_err(|e| e.to_string())?;
    Ok((r.delta, r.lambda0, r.verdict))
}

fn counts() -> Result<String, String> {
    for (dim, d, want) in [(6, 6, 130), (7, 5, 166), (7, 6, 296), (8, 5, 314)] {
        ensure(
            trivial_count(dim, d) == want,
            format!("trivial_count({dim},{d}) = {}", trivial_count(dim, d)),
        )?;
    }
    for (dim, d, k, rows, cols) in [
        (6, 6, 7, 28512, 20790),
        (7, 5, 6, 25872, 16632),
        (7, 6, 7, 61776, 41580),
        (8, 5, 6, 48048, 28512),
    ] {
        let got = (num_rows(dim, d, k), num_cols(dim, d, k));
        ensure(got == (rows, cols), format!("D={dim} d={d} k={k}: {got:?}"))?;
    }
    Ok("130, 166, 296, 314 and all four matrix shapes".into())
}

fn desk_verdicts() -> Result<String, String> {
    let mut seen = Vec::new();
    for d in 1..=4 {
        let (delta, l0, v) = delta_of("par6", d, Mode::Exact)?;
        ensure(
            v == Verdict::NoFinalIntegral(d) && delta == l0,
            format!("par6 d={d}: delta {delta} vs {l0}"),
        )?;
        seen.push(delta);
    }
    ensure(seen == [4, 11, 24, 46], format!("par6 deltas {seen:?}"))?;
    for name in ["dim7", "dim8_2358"] {
        for d in 1..=3 {
            let (delta, l0, v) = delta_of(name, d, Mode::AutoPrimes)?;
            ensure(
                v == Verdict::NoFinalIntegral(d),
                format!("{name} d={d}: delta {delta} vs {l0}"),
            )?;
        }
    }
    Ok(format!("par6 deltas {seen:?}; dim7, dim8_2358 d <= 3 NO"))
}

fn long_run(name: &str, d: usize, mode: Mode, want: usize) -> Result<String, String> {
    let (delta, l0, v) = delta_of(name, d, mode)?;
    ensure(
        delta == want && l0 == want && v == Verdict::NoFinalIntegral(d),
        format!("delta {delta}, lambda0 {l0}, {v}"),
    )?;
    Ok(format!("delta = {delta}"))
}

fn prime_sweep(primes: &[u64], expect_no: bool) -> Result<String, String> {
    let mut out = Vec::new();
    let mut bad = Vec::new();
    for &p in primes {
        let (delta, _, v) = delta_of("dim7", 5, Mode::ModP(p))?;
        out.push(format!("{p}:{delta}"));
        if (v != Verdict::Inconclusive) != expect_no {
            bad.push(p);
        }
    }
    let detail = format!("delta[p] = {}", out.join(" "));
    if bad.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{detail}; unexpected verdict for p in {bad:?}"))
    }
}

fn positive_controls() -> Result<String, String> {
    let mut parts = Vec::new();
    for name in ["ell6", "cartan5"] {
        let (delta, l0, v) = delta_of(name, 2, Mode::Exact)?;
        ensure(
            v == Verdict::Inconclusive && delta > l0,
            format!("{name}: delta {delta}, lambda0 {l0}"),
        )?;
        let s = sys(name);
        let claims = claims_for(&s).map_err(|e| e.to_string())?;
        let i2 = claims.sets[0]
            .members
            .iter()
            .find(|m| m.name == "I2")
            .ok_or("no I2")?;
        ensure(
            check_commute(&s.hamiltonian(), &i2.poly).map_err(|e| e.to_string())?,
            format!("{name}: {{H, I2}} != 0"),
        )?;
        parts.push(format!("{name} delta {delta} > {l0}"));
    }
    Ok(parts.join("; ") + "; I2 commutes with H exactly")
}

fn integral_suite() -> Result<String, String> {
    let mut ids = 0;
    for &name in CATALOG_NAMES {
        let rep = verify_claims(&claims_for(&sys(name)).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        ensure(rep.passed(), format!("{name}: {rep:?}"))?;
        ids += rep.identities.len() + rep.sets.len();
        let want = match name {
            "ell6" => Some(6),
            "dim8_23568" => Some(8),
            _ => None,
        };
        if let Some(w) = want {
            let r = rep.sets[0].jacobian_rank;
            ensure(r == w, format!("{name}: Jacobian rank {r}, expected {w}"))?;
        }
    }
    Ok(format!(
        "{ids} sets and identities on {} systems; ranks 6 (ell6) and 8 (dim8_23568)",
        CATALOG_NAMES.len()
    ))
}

fn realizations() -> Result<String, String> {
    let mut engel_thetas = 0;
    for &name in CATALOG_NAMES {
        let s = sys(name);
        if s.realization.is_none() {
            continue;
        }
        let rep = verify_realization(&s).map_err(|e| format!("{name}: {e}"))?;
        ensure(
            rep.sign == 1 || rep.sign == -1,
            format!("{name}: sign {}", rep.sign),
        )?;
        if name == "engel" {
            engel_thetas = rep.theta_checks;
        }
    }
    ensure(engel_thetas > 0, "no Engel theta relations checked")?;
    Ok(format!(
        "all realizations close with one sign; {engel_thetas} Engel theta relations"
    ))
}

fn reduction() -> Result<String, String> {
    let par6 = sys("par6");
    let mut rng = ChaCha8Rng::seed_from_u64(0x00ac_ce97);
    let mut r = |lo: i64, hi: i64| -> Rational {
        let n = rng.gen_range(lo..=hi);
        let n = if n == 0 { 1 } else { n };
        rat(n, rng.gen_range(1..=9))
    };
    for _ in 0..100 {
        let c: Vec<Rational> = (0..4).map(|_| r(-30, 30)).collect();
        let red = reduce_and_normalize(&par6, &c).map_err(|e| e.to_string())?;
        let want = [&c[3] / int(2), c[2].clone()];
        ensure(
            red.kind == QKind::Q1 && red.params.exact() == Some(&want[..]),
            format!("{c:?}: {red}"),
        )?;
        ensure(divergence(&red.q).is_zero(), "nonzero divergence")?;
    }
    for _ in 0..100 {
        let (a, b, c) = (r(-20, 20), r(-20, 20), r(-20, 20));
        ensure(
            reeb_check(&a, &b, &c).closes(),
            format!("Reeb check fails at {a}, {b}, {c}"),
        )?;
    }
    Ok("100 par6 reductions give a = c6/2, b = c5; divergence 0; 100 Reeb checks close".into())
}

fn dynamics_props() -> Result<String, String> {
    let cfg = IntegratorConfig::default();
    let circle = Flow::constant(1.0);
    let spec = SectionSpec::new(Coordinate::X, 0.0, Direction::Increasing, 10);
    let sec = poincare_section(&circle, &State::new(0.0, 0.0, 0.0, 0.0), &spec, &cfg)
        .map_err(|e| e.to_string())?;
    let err = sec
        .points
        .iter()
        .enumerate()
        .map(|(k, p)| (p.t - TAU * (k + 1) as f64).abs())
        .fold(0.0, f64::max);
    ensure(
        sec.points.len() == 10 && err < CIRCLE_PERIOD_TOL,
        format!("period error {err:e}"),
    )?;

    let ell = srint::reduce::ReducedSystem::from_normal_form(QKind::Q2, &[1.0, 1.0, 0.0]);
    let tr = integrate(
        &Flow::from_reduced(&ell),
        &State::new(0.0, 1.0, 0.0, 0.0),
        1000.0,
        &cfg,
    )
    .map_err(|e| e.to_string())?;
    let drift = invariant_monitor(&ell, &tr.states).map_err(|e| e.to_string())?;
    ensure(
        drift < ELLIPTIC_DRIFT_TOL,
        format!("elliptic drift {drift:e}"),
    )?;

    let q1 = Flow::new("Q1", |x, y| 10.0 * x * x - 0.1 * y);
    let zs = SectionSpec::new(Coordinate::Z, 0.0, Direction::Increasing, 100_000);
    let fig2 = poincare_section(&q1, &State::new(0.0, 0.0, 0.0, 0.0), &zs, &cfg)
        .map_err(|e| e.to_string())?;
    ensure(
        fig2.points.len() == 100_000 && !fig2.truncated,
        format!("{} section points", fig2.points.len()),
    )?;
    ensure(
        fig2.points.iter().all(|p| q1.q(p.x, p.y) > 0.0),
        "a z-section point has Q <= 0",
    )?;
    let q1b = Flow::new("Q1", |x, y| 10.0 * x * x + 0.1 * y);
    let xs = SectionSpec::new(Coordinate::X, 0.0, Direction::Increasing, 2000);
    let mut xcount = 0;
    for ic in [
        State::new(0.0, 0.0, -20.0, 0.0),
        State::new(0.0, 0.0, -30.0, 0.0),
    ] {
        let s = poincare_section(&q1b, &ic, &xs, &cfg).map_err(|e| e.to_string())?;
        ensure(
            s.points.iter().all(|p| p.z.cos() > 0.0),
            "an x-section point has cos z <= 0",
        )?;
        xcount += s.points.len();
    }
    Ok(format!(
        "period error {err:.1e}; elliptic drift {drift:.1e}; {} z-section points with Q > 0; {xcount} x-section points with cos z > 0",
        fig2.points.len()
    ))
}

fn main() {
    let mut s = Suite {
        results: Vec::new(),
    };
    s.check("1", "trivial counts and prolonged matrix shapes", counts);
    s.check(
        "2",
        "desk-scale verdicts (par6 d<=4 exact, dim7/dim8_2358 d<=3 auto-primes)",
        desk_verdicts,
    );
    s.check("3a", "par6 d=6 exact", || {
        long_run("par6", 6, Mode::Exact, 130)
    });
    s.check("3b", "dim7 d=5 exact", || {
        long_run("dim7", 5, Mode::Exact, 166)
    });
    s.check("3c", "dim7 d=6 mod 101", || {
        long_run("dim7", 6, Mode::ModP(101), 296)
    });
    s.check("3d", "dim8_2358 d=5 exact", || {
        long_run("dim8_2358", 5, Mode::Exact, 314)
    });
    s.check("3e", "dim7 d=5 inconclusive mod p, p in {2,3,5,7}", || {
        prime_sweep(&[2, 3, 5, 7], false)
    });
    s.check(
        "3f",
        "dim7 d=5 inconclusive mod p, p in {11,...,29}",
        || prime_sweep(&[11, 13, 17, 19, 23, 29], false),
    );
    s.check(
        "3g",
        "dim7 d=5 NoFinalIntegral mod p, p in {31,37,41}",
        || prime_sweep(&[31, 37, 41], true),
    );
    s.check(
        "4",
        "positive controls ell6 and cartan5 at d=2",
        positive_controls,
    );
    s.check("5", "integral verification suite", integral_suite);
    s.check("6", "realization suite", realizations);
    s.check("7", "reduction correctness", reduction);
    s.check("8", "dynamics properties", dynamics_props);

    let failed: Vec<&str> = s
        .results
        .iter()
        .filter(|r| !r.1)
        .map(|r| r.0.as_str())
        .collect();
    let unexpected_fail: Vec<&&str> = failed
        .iter()
        .filter(|id| !KNOWN_FAILURES.contains(id))
        .collect();
    let unexpected_pass: Vec<&&str> = KNOWN_FAILURES
        .iter()
        .filter(|id| !failed.contains(id))
        .collect();
    println!(
        "acceptance: {} PASS, {} FAIL (known failures: {:?})",
        s.results.len() - failed.len(),
        failed.len(),
        KNOWN_FAILURES
    );
    if !unexpected_fail.is_empty() || !unexpected_pass.is_empty() {
        println!("unexpected failures {unexpected_fail:?}, unexpected passes {unexpected_pass:?}");
        std::process::exit(1);
    }
}
