//! Nonexistence of polynomial integrals by prolongation and rank.
//!
//! A candidate integral `F = Σ a_τ(x1, x2) p^τ` of degree `d` commuting with
//! the Noether momenta turns `{H, F} = 0` into a first order linear PDE system
//! for the `a_τ`. Prolonging `k` times and evaluating at the origin gives an
//! integer matrix whose corank `delta` bounds the dimension of the space of
//! degree-`d` integrals. Every trivial integral (`H^i` times Noether
//! monomials) contributes, so `delta >= Λ⁰`, and equality rules out a final
//! integral. Working mod `p` can only lower the rank, so a single prime with
//! `delta[p] = Λ⁰` is already a proof.

mod counts;
mod pde;
mod pipeline;

use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::carnot::SRSystem;
use crate::exactpoly::{PhasePolynomial, Var};
use crate::sparserank::{next_prime, RankError, SparseIntMatrix};

pub use counts::{binomial, num_ansatz, num_cols, num_pde_equations, num_rows, trivial_count};
pub use pde::{
    build_pde_system, jet_orders, jet_position, jet_vector, momentum_indices, prolong_evaluate,
    AnsatzIndex, JetIndex, PdeEquation, PdeSystem, PdeTerm,
};
pub use pipeline::{reduce_system, ReducedMatrix, ReductionCounts};

/// Version string embedded in reports.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Seed of the auto-primes sequence.
pub const AUTO_PRIME_SEED: u64 = 0x0b57_2023;
/// Maximum number of primes tried in auto-primes mode.
pub const AUTO_PRIME_ATTEMPTS: usize = 8;

#[derive(Debug, thiserror::Error)]
pub enum ObstructError {
    #[error(
        "system {0} is not obstruct-ready: its Hamiltonian depends on base variables beyond x1, x2"
    )]
    NotObstructReady(String),
    #[error("system {0}: 2H is not homogeneous quadratic in the momenta")]
    NotQuadratic(String),
    #[error(transparent)]
    Rank(#[from] RankError),
    #[error("internal inconsistency: delta = {delta} below the trivial count {lambda0}")]
    Inconsistent { delta: usize, lambda0: usize },
    #[error("internal inconsistency: the jet of trivial integral {0} is not in the kernel")]
    TrivialNotInKernel(String),
    #[error(
        "internal inconsistency: {v_spfl} superfluous unknowns below the trivial count {lambda0}"
    )]
    SpflBelowLambda { v_spfl: usize, lambda0: usize },
}

/// Arithmetic used for the rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    ModP(u64),
    AutoPrimes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// No polynomial integral of this degree beyond the trivial ones.
    NoFinalIntegral(usize),
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::NoFinalIntegral(d) => write!(f, "NoFinalIntegral({d})"),
            Verdict::Inconclusive => f.write_str("Inconclusive"),
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// One rank computation for a single modulus (or over Q).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Attempt {
    pub modulus: Option<u64>,
    pub delta: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ObstructionReport {
    pub system: String,
    #[serde(rename = "D")]
    pub dim: usize,
    pub degree: usize,
    pub prolongations: usize,
    pub num_equations: usize,
    pub num_unknowns: usize,
    pub v_spfl: usize,
    pub v_mon: usize,
    pub v_bimon: usize,
    pub v_red: usize,
    pub rank_red: usize,
    pub delta: usize,
    pub lambda0: usize,
    pub modulus: Option<u64>,
    pub verdict: Verdict,
    pub elapsed_s: f64,
    pub tool_version: String,
    /// Rows of the reduced matrix.
    #[serde(skip)]
    pub num_equations_red: usize,
    /// Zero columns before monomial/bimonomial elimination.
    #[serde(skip)]
    pub v_spfl_initial: usize,
    /// Every modulus tried, in order; a single entry outside auto-primes mode.
    #[serde(skip)]
    pub attempts: Vec<Attempt>,
}

impl ObstructionReport {
    /// `delta - Λ⁰`; zero exactly for a nonexistence verdict.
    pub fn gap(&self) -> usize {
        self.delta - self.lambda0
    }
}

/// The deterministic prime sequence used by [`Mode::AutoPrimes`]: distinct
/// primes in `[31, 2^31)`, increasing.
pub fn auto_primes() -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(AUTO_PRIME_SEED);
    let mut out: Vec<u64> = Vec::with_capacity(AUTO_PRIME_ATTEMPTS);
    while out.len() < AUTO_PRIME_ATTEMPTS {
        let p = next_prime(rng.gen_range(31..(1u64 << 31) - 1));
        if p < (1 << 31) && !out.contains(&p) {
            out.push(p);
        }
    }
    out.sort_unstable();
    out
}

/// The trivial integrals `(2H)^i p^tau` of degree `d`, `tau` over the Noether
/// momenta `p_3..p_D`, with a display name each.
pub fn trivial_integrals(sys: &SRSystem, d: usize) -> Vec<(String, PhasePolynomial)> {
    let dim = sys.dim();
    let one = |p: &PhasePolynomial| {
        PhasePolynomial::constant(p.num_base_vars(), p.num_momenta(), crate::exactpoly::int(1))
    };
    let h2 = &sys.hamiltonian2;
    let mut out = Vec::new();
    for i in 0..=d / 2 {
        let hi = h2.pow(i as u32);
        for tau in momentum_indices(dim - 2, d - 2 * i) {
            let mut f = hi.clone();
            let mut name = if i == 0 {
                String::new()
            } else {
                format!("(2H)^{i}")
            };
            for (j, &e) in tau.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pj = sys.var(Var::P(j + 3)).pow(e);
                f = f.checked_mul(&pj).expect("same ring");
                if !name.is_empty() {
                    name.push('*');
                }
                name.push_str(&format!("p{}^{e}", j + 3));
            }
            if name.is_empty() {
                name.push('1');
                f = one(h2);
            }
            out.push((name, f));
        }
    }
    out
}

/// Jets at the origin of the trivial integrals, as sparse rows over the
/// columns of `M_d^(k)`. Each one is checked to lie in the kernel.
pub fn trivial_jets(
    sys: &SRSystem,
    pde: &PdeSystem,
    m: &SparseIntMatrix,
    k: usize,
) -> Result<Vec<Vec<(u32, BigInt)>>, ObstructError> {
    let mut out = Vec::new();
    for (name, f) in trivial_integrals(sys, pde.degree) {
        let jet = jet_vector(&f, &pde.ansatz, k)
            .ok_or_else(|| ObstructError::TrivialNotInKernel(name.clone()))?;
        if m.mul_vec(&jet).iter().any(|v| !v.is_zero()) {
            return Err(ObstructError::TrivialNotInKernel(name));
        }
        out.push(
            jet.into_iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(c, v)| (c as u32, v))
                .collect(),
        );
    }
    Ok(out)
}

/// The prolonged matrix `M_d^(k)` of a system.
pub fn prolonged_matrix(
    sys: &SRSystem,
    d: usize,
    k: usize,
) -> Result<SparseIntMatrix, ObstructError> {
    let pde = build_pde_system(sys, d)?;
    Ok(prolong_evaluate(&pde, k))
}

struct Stage {
    counts: ReductionCounts,
    rows_red: usize,
    rank_red: usize,
    delta: usize,
}

/// Reduces and ranks, returning the counts, `rank_red` and
/// `delta = v_red + v_spfl - rank_red`.
pub fn rank_and_delta(
    m: &SparseIntMatrix,
    modulus: Option<u64>,
    kernel: &[Vec<(u32, BigInt)>],
) -> Result<(ReductionCounts, usize, usize), ObstructError> {
    let s = stage(m, modulus, kernel)?;
    Ok((s.counts, s.rank_red, s.delta))
}

fn stage(
    m: &SparseIntMatrix,
    modulus: Option<u64>,
    kernel: &[Vec<(u32, BigInt)>],
) -> Result<Stage, ObstructError> {
    let (red, counts) = reduce_system(m, modulus, kernel)?;
    let rank_red = red.rank();
    Ok(Stage {
        delta: counts.v_red + counts.v_spfl - rank_red,
        rows_red: red.num_rows(),
        rank_red,
        counts,
    })
}

/// Runs the obstruction test with `k = d + 1` prolongations.
pub fn decide(sys: &SRSystem, d: usize, mode: Mode) -> Result<ObstructionReport, ObstructError> {
    decide_with(sys, d, d + 1, mode)
}

/// Runs the obstruction test with an explicit prolongation order.
pub fn decide_with(
    sys: &SRSystem,
    d: usize,
    k: usize,
    mode: Mode,
) -> Result<ObstructionReport, ObstructError> {
    let start = Instant::now();
    let dim = sys.dim();
    let lambda0 = trivial_count(dim, d) as usize;
    let pde = build_pde_system(sys, d)?;
    let m = prolong_evaluate(&pde, k);
    let kernel = trivial_jets(sys, &pde, &m, k)?;
    let moduli: Vec<Option<u64>> = match mode {
        Mode::Exact => vec![None],
        Mode::ModP(p) => vec![Some(p)],
        Mode::AutoPrimes => auto_primes().into_iter().map(Some).collect(),
    };
    let mut attempts = Vec::new();
    let mut last = None;
    for modulus in moduli {
        let s = stage(&m, modulus, &kernel)?;
        if s.counts.v_spfl < lambda0 {
            return Err(ObstructError::SpflBelowLambda {
                v_spfl: s.counts.v_spfl,
                lambda0,
            });
        }
        if s.delta < lambda0 {
            return Err(ObstructError::Inconsistent {
                delta: s.delta,
                lambda0,
            });
        }
        attempts.push(Attempt {
            modulus,
            delta: s.delta,
        });
        let done = s.delta == lambda0;
        last = Some((modulus, s));
        if done {
            break;
        }
    }
    let (modulus, s) = last.expect("at least one modulus");
    let verdict = if s.delta == lambda0 {
        Verdict::NoFinalIntegral(d)
    } else {
        Verdict::Inconclusive
    };
    Ok(ObstructionReport {
        system: sys.name.clone(),
        dim,
        degree: d,
        prolongations: k,
        num_equations: m.num_rows(),
        num_unknowns: m.num_cols(),
        v_spfl: s.counts.v_spfl,
        v_mon: s.counts.v_mon,
        v_bimon: s.counts.v_bimon,
        v_red: s.counts.v_red,
        rank_red: s.rank_red,
        delta: s.delta,
        lambda0,
        modulus,
        verdict,
        elapsed_s: start.elapsed().as_secs_f64(),
        tool_version: TOOL_VERSION.to_string(),
        num_equations_red: s.rows_red,
        v_spfl_initial: s.counts.v_spfl_initial,
        attempts,
    })
}

/// Nonexistence at `d_high` implies nonexistence at every lower degree: a
/// final integral `F` of degree `d_low` would give the final integral
/// `F p_D^(d_high - d_low)` of degree `d_high`.
pub fn degree_reduction_note(
    d_low: usize,
    d_high: usize,
    sys: &SRSystem,
    high: Verdict,
) -> Option<Verdict> {
    if d_low > d_high || sys.dim() < 3 || high != Verdict::NoFinalIntegral(d_high) {
        return None;
    }
    Some(Verdict::NoFinalIntegral(d_low))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carnot::lookup;

    #[test]
    fn par6_desk_degrees() {
        let sys = lookup("par6", None).unwrap();
        for (d, l) in [(1, 4), (2, 11), (3, 24)] {
            let r = decide(&sys, d, Mode::Exact).unwrap();
            assert_eq!(r.lambda0, l);
            assert_eq!(r.delta, l, "d = {d}");
            assert_eq!(r.verdict, Verdict::NoFinalIntegral(d));
        }
    }

    #[test]
    fn quadratic_casimirs_are_detected() {
        for (name, l) in [("ell6", 11), ("cartan5", 7)] {
            let sys = lookup(name, None).unwrap();
            let r = decide(&sys, 2, Mode::Exact).unwrap();
            assert_eq!(r.lambda0, l);
            assert!(r.delta > l, "{name}: delta {}", r.delta);
            assert_eq!(r.verdict, Verdict::Inconclusive);
        }
    }

    #[test]
    fn kernel_witness_for_quadratic_integral() {
        use crate::integrals::claims_for;
        for name in ["ell6", "cartan5"] {
            let sys = lookup(name, None).unwrap();
            let claims = claims_for(&sys).unwrap();
            let i2 = claims.sets[0]
                .members
                .iter()
                .find(|m| m.name == "I2")
                .expect("I2 claimed");
            let pde = build_pde_system(&sys, 2).unwrap();
            let m = prolong_evaluate(&pde, 3);
            let jet = jet_vector(&i2.poly, &pde.ansatz, 3).expect("ansatz form");
            assert!(m.mul_vec(&jet).iter().all(Zero::is_zero), "{name}");
            let mut span = SparseIntMatrix::new(m.num_cols());
            for w in trivial_jets(&sys, &pde, &m, 3).unwrap() {
                span.push_row(w.into_iter().map(|(c, v)| (c as usize, v)))
                    .unwrap();
            }
            let l0 = span.rank_exact();
            span.push_row(jet.into_iter().enumerate()).unwrap();
            assert_eq!(span.rank_exact(), l0 + 1, "{name}");
            // the kernel is exactly the trivial jets plus I2
            let r = decide(&sys, 2, Mode::Exact).unwrap();
            assert_eq!((r.lambda0, r.delta), (l0, l0 + 1), "{name}");
        }
    }

    #[test]
    fn pipeline_independence() {
        for name in [
            "heis3",
            "cartan5",
            "par6",
            "ell6",
            "hyp6",
            "dim7",
            "dim8_2358",
        ] {
            let sys = lookup(name, None).unwrap();
            for d in 1..=2 {
                let pde = build_pde_system(&sys, d).unwrap();
                let m = prolong_evaluate(&pde, d + 1);
                let kernel = trivial_jets(&sys, &pde, &m, d + 1).unwrap();
                let direct = m.num_cols() - m.rank_exact();
                let direct_p = m.num_cols() - m.rank_mod_p(101).unwrap();
                for known in [&[][..], &kernel[..]] {
                    let (_, _, delta) = rank_and_delta(&m, None, known).unwrap();
                    assert_eq!(delta, direct, "{name} d={d}");
                    let (_, _, delta_p) = rank_and_delta(&m, Some(101), known).unwrap();
                    assert_eq!(delta_p, direct_p, "{name} d={d} mod 101");
                }
            }
        }
    }

    fn delta_profile(name: &str, d: usize) -> Vec<usize> {
        let sys = lookup(name, None).unwrap();
        (0..=d + 2)
            .map(|k| decide_with(&sys, d, k, Mode::Exact).unwrap().delta)
            .collect()
    }

    #[test]
    fn monotone_stabilization() {
        for d in 1..=3 {
            let deltas = delta_profile("par6", d);
            assert!(deltas.windows(2).all(|w| w[0] >= w[1]), "d={d}: {deltas:?}");
            assert!(
                deltas[d + 1..].windows(2).all(|w| w[0] == w[1]),
                "d={d}: {deltas:?}"
            );
        }
    }

    #[test]
    fn heis3_low_order_jets_undercount() {
        // Heisenberg integrals (products of right-invariant fields and the
        // rotation) carry x-dependence of order d, so short jets cannot
        // separate them: delta rises until k = d - 1, then stays put.
        assert_eq!(delta_profile("heis3", 1), vec![4, 4, 4, 4]);
        assert_eq!(delta_profile("heis3", 2), vec![9, 10, 10, 10, 10]);
        assert_eq!(delta_profile("heis3", 3), vec![16, 19, 20, 20, 20, 20]);
    }

    #[test]
    fn auto_primes_are_fixed() {
        let ps = auto_primes();
        assert_eq!(ps.len(), AUTO_PRIME_ATTEMPTS);
        assert!(ps.windows(2).all(|w| w[0] < w[1]));
        assert!(ps
            .iter()
            .all(|&p| (31..1 << 31).contains(&p) && crate::sparserank::is_prime(p)));
        assert_eq!(ps, auto_primes());
    }

    #[test]
    fn degree_reduction() {
        let sys = lookup("par6", None).unwrap();
        let hi = Verdict::NoFinalIntegral(6);
        assert_eq!(
            degree_reduction_note(3, 6, &sys, hi),
            Some(Verdict::NoFinalIntegral(3))
        );
        assert_eq!(degree_reduction_note(6, 6, &sys, hi), Some(hi));
        assert_eq!(degree_reduction_note(7, 6, &sys, hi), None);
        assert_eq!(
            degree_reduction_note(3, 6, &sys, Verdict::Inconclusive),
            None
        );
    }

    #[test]
    fn report_json_keys() {
        let sys = lookup("par6", None).unwrap();
        let r = decide(&sys, 1, Mode::ModP(101)).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        keys.sort_unstable();
        let mut want = vec![
            "system",
            "D",
            "degree",
            "prolongations",
            "num_equations",
            "num_unknowns",
            "v_spfl",
            "v_mon",
            "v_bimon",
            "v_red",
            "rank_red",
            "delta",
            "lambda0",
            "modulus",
            "verdict",
            "elapsed_s",
            "tool_version",
        ];
        want.sort_unstable();
        assert_eq!(keys, want);
        assert_eq!(v["verdict"], "NoFinalIntegral(1)");
        assert_eq!(v["modulus"], 101);
    }
}
