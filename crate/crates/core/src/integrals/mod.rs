//! Checks of claimed first integrals: commutation with `H`, involutivity,
//! polynomial identities, and functional independence through the exact
//! Jacobian rank at rational points.

mod claims;

pub use claims::{claims_for, ClaimedIdentity, Claims};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dense;
use crate::exactpoly::{rat, PhasePolynomial, PolyError, Rational, Var};

/// Seed of the default independence sample.
pub const SAMPLE_SEED: u64 = 0x5eed_1a7e;
/// Number of default sample points.
pub const SAMPLE_POINTS: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedPoly {
    pub name: String,
    pub poly: PhasePolynomial,
}

impl NamedPoly {
    pub fn new(name: impl Into<String>, poly: PhasePolynomial) -> Self {
        NamedPoly {
            name: name.into(),
            poly,
        }
    }
}

/// `I_1 = H, I_2, ...` as claimed for one system, plus extra integrals that
/// commute with `H` but are not part of the involutive family.
#[derive(Debug, Clone)]
pub struct IntegralSet {
    pub system: String,
    pub label: String,
    pub members: Vec<NamedPoly>,
    pub claimed_involutive: bool,
    pub claimed_independent_count: usize,
    pub extras: Vec<NamedPoly>,
}

/// `{H, F} == 0` identically.
pub fn check_commute(h: &PhasePolynomial, f: &PhasePolynomial) -> Result<bool, PolyError> {
    Ok(h.poisson_bracket(f)?.is_zero())
}

/// Entry `(j, k)` is true iff `{I_j, I_k} == 0`.
#[allow(clippy::needless_range_loop)] // pairs (j, k) index a symmetric table
pub fn check_involutive(set: &IntegralSet) -> Result<Vec<Vec<bool>>, PolyError> {
    let n = set.members.len();
    let mut m = vec![vec![true; n]; n];
    for j in 0..n {
        for k in j + 1..n {
            let z = set.members[j]
                .poly
                .poisson_bracket(&set.members[k].poly)?
                .is_zero();
            m[j][k] = z;
            m[k][j] = z;
        }
    }
    Ok(m)
}

pub fn check_identity(lhs: &PhasePolynomial, rhs: &PhasePolynomial) -> bool {
    lhs == rhs
}

/// `count` points with small rational coordinates (numerators in `-9..=9`,
/// denominators in `1..=7`), `len` coordinates each.
pub fn sample_points(len: usize, count: usize, seed: u64) -> Vec<Vec<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (0..len)
                .map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=7)))
                .collect()
        })
        .collect()
}

fn jacobian_at(members: &[&PhasePolynomial], point: &[Rational]) -> Result<usize, PolyError> {
    let Some(first) = members.first() else {
        return Ok(0);
    };
    let (nb, nm) = (first.num_base_vars(), first.num_momenta());
    let vars: Vec<Var> = (1..=nb).map(Var::X).chain((1..=nm).map(Var::P)).collect();
    let mut rows = Vec::with_capacity(members.len());
    for f in members {
        let row: Result<Vec<Rational>, PolyError> = vars
            .iter()
            .map(|&v| f.partial_derivative(v)?.evaluate(point))
            .collect();
        rows.push(row?);
    }
    Ok(dense::rank(rows))
}

/// Maximum over `points` of the exact rank of the Jacobian of `set.members`
/// with respect to all phase variables. A lower bound for the generic rank.
pub fn jacobian_rank_at(set: &IntegralSet, points: &[Vec<Rational>]) -> Result<usize, PolyError> {
    let members: Vec<&PhasePolynomial> = set.members.iter().map(|m| &m.poly).collect();
    let ranks: Result<Vec<usize>, PolyError> = points
        .par_iter()
        .map(|p| jacobian_at(&members, p))
        .collect();
    Ok(ranks?.into_iter().max().unwrap_or(0))
}

#[derive(Debug, Clone, Serialize)]
pub struct SetReport {
    pub label: String,
    /// Members failing `{H, I} = 0`.
    pub not_commuting_with_h: Vec<String>,
    /// Member pairs with nonzero bracket.
    pub non_involutive_pairs: Vec<(String, String)>,
    pub claimed_involutive: bool,
    pub jacobian_rank: usize,
    pub claimed_independent_count: usize,
    /// Extras failing `{H, E} = 0`.
    pub extras_not_commuting_with_h: Vec<String>,
    /// For each extra, the members it does not commute with.
    pub extras_non_involutive_with: Vec<(String, Vec<String>)>,
}

impl SetReport {
    pub fn passed(&self) -> bool {
        self.not_commuting_with_h.is_empty()
            && (!self.claimed_involutive || self.non_involutive_pairs.is_empty())
            && self.jacobian_rank == self.claimed_independent_count
            && self.extras_not_commuting_with_h.is_empty()
    }
}

/// Runs every check on one set at the default sample points.
#[allow(clippy::needless_range_loop)] // pairs (j, k) index a symmetric table
pub fn verify_set(set: &IntegralSet) -> Result<SetReport, PolyError> {
    let h = &set.members[0].poly;
    let mut not_commuting = Vec::new();
    for m in &set.members[1..] {
        if !check_commute(h, &m.poly)? {
            not_commuting.push(m.name.clone());
        }
    }
    let inv = check_involutive(set)?;
    let mut pairs = Vec::new();
    for j in 0..set.members.len() {
        for k in j + 1..set.members.len() {
            if !inv[j][k] {
                pairs.push((set.members[j].name.clone(), set.members[k].name.clone()));
            }
        }
    }
    let points = sample_points(
        h.num_base_vars() + h.num_momenta(),
        SAMPLE_POINTS,
        SAMPLE_SEED,
    );
    let rank = jacobian_rank_at(set, &points)?;
    let mut extras_bad = Vec::new();
    let mut extras_nc = Vec::new();
    for e in &set.extras {
        if !check_commute(h, &e.poly)? {
            extras_bad.push(e.name.clone());
        }
        let mut with = Vec::new();
        for m in &set.members {
            if !m.poly.poisson_bracket(&e.poly)?.is_zero() {
                with.push(m.name.clone());
            }
        }
        extras_nc.push((e.name.clone(), with));
    }
    Ok(SetReport {
        label: set.label.clone(),
        not_commuting_with_h: not_commuting,
        non_involutive_pairs: pairs,
        claimed_involutive: set.claimed_involutive,
        jacobian_rank: rank,
        claimed_independent_count: set.claimed_independent_count,
        extras_not_commuting_with_h: extras_bad,
        extras_non_involutive_with: extras_nc,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub name: String,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClaimsReport {
    pub system: String,
    pub sets: Vec<SetReport>,
    pub identities: Vec<IdentityReport>,
}

impl ClaimsReport {
    pub fn passed(&self) -> bool {
        self.sets.iter().all(SetReport::passed) && self.identities.iter().all(|i| i.holds)
    }
}

pub fn verify_claims(claims: &Claims) -> Result<ClaimsReport, PolyError> {
    let sets = claims
        .sets
        .iter()
        .map(verify_set)
        .collect::<Result<Vec<_>, _>>()?;
    let identities = claims
        .identities
        .iter()
        .map(|c| IdentityReport {
            name: c.name.clone(),
            holds: check_identity(&c.lhs, &c.rhs),
        })
        .collect();
    Ok(ClaimsReport {
        system: claims.system.clone(),
        sets,
        identities,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{int, parse_polynomial};

    fn p3(s: &str) -> PhasePolynomial {
        parse_polynomial(s, 3, 3).unwrap()
    }

    fn heis_set(extra: bool) -> IntegralSet {
        let mut members = vec![
            NamedPoly::new("H", p3("1/2 p1^2 + x2 p1 p3 + 1/2 x2^2 p3^2 + 1/2 p2^2")),
            NamedPoly::new("I2", p3("p1")),
            NamedPoly::new("I3", p3("p3")),
        ];
        if extra {
            members.push(NamedPoly::new("I4", p3("p2 + x1 p3")));
        }
        IntegralSet {
            system: "heis3".into(),
            label: "test".into(),
            members,
            claimed_involutive: true,
            claimed_independent_count: 3,
            extras: vec![],
        }
    }

    #[test]
    fn heisenberg_commute_and_noncommute() {
        let s = heis_set(true);
        let m = check_involutive(&s).unwrap();
        assert!(m[0].iter().all(|&b| b));
        assert!(!m[1][3] && !m[3][1]);
        // {p1, p2 + x1 p3} = -p3 under {f,g} = f_x g_p - f_p g_x
        assert_eq!(
            s.members[1]
                .poly
                .poisson_bracket(&s.members[3].poly)
                .unwrap(),
            p3("-p3")
        );
    }

    #[test]
    fn rank_at_origin_degenerates() {
        let s = heis_set(false);
        let origin = vec![vec![int(0); 6]];
        assert_eq!(jacobian_rank_at(&s, &origin).unwrap(), 2);
        let pts = sample_points(6, SAMPLE_POINTS, SAMPLE_SEED);
        assert_eq!(jacobian_rank_at(&s, &pts).unwrap(), 3);
        let rep = verify_set(&s).unwrap();
        assert!(rep.passed(), "{rep:?}");
    }

    #[test]
    fn samples_are_deterministic() {
        assert_eq!(sample_points(4, 3, 7), sample_points(4, 3, 7));
        assert_ne!(sample_points(4, 3, 7), sample_points(4, 3, 8));
    }
}
