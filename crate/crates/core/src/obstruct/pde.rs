//! The first-order system `S_d` from `{H, F} = 0` and its prolongation at the
//! origin.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use super::ObstructError;
use crate::carnot::SRSystem;
use crate::exactpoly::PhasePolynomial;
use crate::sparserank::SparseIntMatrix;

/// Momentum multi-indices of total degree `d` over `dim` momenta, in
/// descending lexicographic order (`p_1^d` first).
pub fn momentum_indices(dim: usize, d: usize) -> Vec<Vec<u32>> {
    fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos + 1 == cur.len() {
            cur[pos] = left;
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur[pos] = e;
            rec(pos + 1, left - e, cur, out);
        }
        cur[pos] = 0;
    }
    let mut out = Vec::new();
    if dim == 0 {
        return out;
    }
    rec(0, d as u32, &mut vec![0; dim], &mut out);
    out
}

/// Position of `(s1, s2)` in the order `(0,0), (1,0), (0,1), (2,0), (1,1), ...`.
pub fn jet_position(s: (u32, u32)) -> usize {
    let n = (s.0 + s.1) as usize;
    n * (n + 1) / 2 + s.1 as usize
}

/// All `(s1, s2)` with `s1 + s2 <= order` in [`jet_position`] order.
pub fn jet_orders(order: usize) -> Vec<(u32, u32)> {
    let mut v = Vec::new();
    for n in 0..=order as u32 {
        for s2 in 0..=n {
            v.push((n - s2, s2));
        }
    }
    v
}

/// The unknown `d^sigma a_tau (0)`: column `tau * C(k+3, 2) + pos(sigma)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JetIndex {
    pub tau: usize,
    pub sigma: (u32, u32),
}

/// Enumeration of the ansatz `F = sum_tau a_tau(x1, x2) p^tau`.
#[derive(Debug, Clone)]
pub struct AnsatzIndex {
    pub dim: usize,
    pub degree: usize,
    pub taus: Vec<Vec<u32>>,
    lookup: HashMap<Vec<u32>, usize>,
}

impl AnsatzIndex {
    pub fn new(dim: usize, degree: usize) -> Self {
        let taus = momentum_indices(dim, degree);
        let lookup = taus
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        AnsatzIndex {
            dim,
            degree,
            taus,
            lookup,
        }
    }

    pub fn len(&self) -> usize {
        self.taus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taus.is_empty()
    }

    pub fn position(&self, tau: &[u32]) -> Option<usize> {
        self.lookup.get(tau).copied()
    }
}

/// `c(x1, x2) * d^sigma a_tau` with `|sigma| <= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PdeTerm {
    pub tau: usize,
    pub sigma: (u32, u32),
    /// Integer coefficients keyed by `(beta1, beta2)`.
    pub coeff: BTreeMap<(u32, u32), BigInt>,
}

#[derive(Debug, Clone)]
pub struct PdeEquation {
    /// Momentum monomial (degree `d + 1`) this equation is the coefficient of.
    pub mu: Vec<u32>,
    pub terms: Vec<PdeTerm>,
}

#[derive(Debug, Clone)]
pub struct PdeSystem {
    pub dim: usize,
    pub degree: usize,
    pub ansatz: AnsatzIndex,
    /// One per momentum monomial of degree `d + 1`, in descending lex order;
    /// equations with no terms are kept.
    pub equations: Vec<PdeEquation>,
    /// Integer multiple of `2H` used for the coefficients.
    pub scale: BigInt,
}

fn x12(m: &[u32]) -> (u32, u32) {
    (m[0], m.get(1).copied().unwrap_or(0))
}

/// Coefficients of `{G, F}` in the momentum monomials of degree `d + 1`, with
/// `G` the integer multiple of `2H` from `clear_denominators`.
pub fn build_pde_system(sys: &SRSystem, d: usize) -> Result<PdeSystem, ObstructError> {
    if !sys.obstruct_ready() {
        return Err(ObstructError::NotObstructReady(sys.name.clone()));
    }
    let h2 = &sys.hamiltonian2;
    if !h2.is_homogeneous_in_momenta(2) {
        return Err(ObstructError::NotQuadratic(sys.name.clone()));
    }
    let (g, scale) = h2.clear_denominators();
    Ok(build_from_integer(&g, sys.dim(), d, scale))
}

fn build_from_integer(g: &PhasePolynomial, dim: usize, d: usize, scale: BigInt) -> PdeSystem {
    let nb = g.num_base_vars();
    let ansatz = AnsatzIndex::new(dim, d);
    let mus = momentum_indices(dim, d + 1);
    let mu_pos: HashMap<Vec<u32>, usize> = mus
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i))
        .collect();
    // (equation, tau, sigma) -> x-polynomial
    type Acc = BTreeMap<(usize, usize, (u32, u32)), BTreeMap<(u32, u32), BigInt>>;
    let mut acc: Acc = BTreeMap::new();
    let mut add = |eq: usize, tau: usize, sigma: (u32, u32), beta: (u32, u32), v: BigInt| {
        let e = acc
            .entry((eq, tau, sigma))
            .or_default()
            .entry(beta)
            .or_insert_with(BigInt::zero);
        *e += v;
    };
    let terms = g.integer_terms().expect("integer coefficients");
    for (mono, coef) in terms {
        let ex = mono.exponents();
        let beta = x12(&ex[..nb]);
        let nu = &ex[nb..];
        for (i, bi) in [beta.0, beta.1].into_iter().enumerate() {
            // G_{x_i} F_{p_i}
            if bi > 0 {
                let b2 = if i == 0 {
                    (bi - 1, beta.1)
                } else {
                    (beta.0, bi - 1)
                };
                for (t, tau) in ansatz.taus.iter().enumerate() {
                    if tau[i] == 0 {
                        continue;
                    }
                    let mut mu: Vec<u32> = nu.iter().zip(tau).map(|(a, b)| a + b).collect();
                    mu[i] -= 1;
                    let v = coef * BigInt::from(bi) * BigInt::from(tau[i]);
                    add(mu_pos[&mu], t, (0, 0), b2, v);
                }
            }
            // -G_{p_i} F_{x_i}
            if nu[i] > 0 {
                let sigma = if i == 0 { (1, 0) } else { (0, 1) };
                for (t, tau) in ansatz.taus.iter().enumerate() {
                    let mut mu: Vec<u32> = nu.iter().zip(tau).map(|(a, b)| a + b).collect();
                    mu[i] -= 1;
                    let v = -(coef * BigInt::from(nu[i]));
                    add(mu_pos[&mu], t, sigma, beta, v);
                }
            }
        }
    }
    let mut equations: Vec<PdeEquation> = mus
        .into_iter()
        .map(|mu| PdeEquation {
            mu,
            terms: Vec::new(),
        })
        .collect();
    for ((eq, tau, sigma), mut coeff) in acc {
        coeff.retain(|_, v| !v.is_zero());
        if !coeff.is_empty() {
            equations[eq].terms.push(PdeTerm { tau, sigma, coeff });
        }
    }
    PdeSystem {
        dim,
        degree: d,
        ansatz,
        equations,
        scale,
    }
}

fn falling(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::from(1), |a, i| a * BigInt::from(n - i))
}

/// `M_d^(k)`: every equation differentiated by `d^alpha`, `|alpha| <= k`, and
/// evaluated at the origin. Row `eq * C(k+2, 2) + pos(alpha)`.
pub fn prolong_evaluate(sys: &PdeSystem, k: usize) -> SparseIntMatrix {
    let alphas = jet_orders(k);
    let per_tau = jet_orders(k + 1).len();
    let ncols = sys.ansatz.len() * per_tau;
    let rows: Vec<Vec<Vec<(usize, BigInt)>>> = sys
        .equations
        .par_iter()
        .map(|eq| {
            alphas
                .iter()
                .map(|&alpha| {
                    let mut row = Vec::new();
                    for term in &eq.terms {
                        for (&beta, c) in &term.coeff {
                            if beta.0 > alpha.0 || beta.1 > alpha.1 {
                                continue;
                            }
                            // d^alpha (x^beta g) at 0 picks alpha!/(alpha-beta)! * g^(alpha-beta)
                            let v = c * falling(alpha.0, beta.0) * falling(alpha.1, beta.1);
                            let s = (
                                term.sigma.0 + alpha.0 - beta.0,
                                term.sigma.1 + alpha.1 - beta.1,
                            );
                            row.push((term.tau * per_tau + jet_position(s), v));
                        }
                    }
                    row
                })
                .collect()
        })
        .collect();
    let mut m = SparseIntMatrix::new(ncols);
    for r in rows.into_iter().flatten() {
        m.push_row(r).expect("columns in range");
    }
    m
}

/// Jet vector of an ansatz-shaped polynomial `F` at the origin, scaled to
/// integers (for kernel checks). `None` if `F` is not of the ansatz form.
pub fn jet_vector(f: &PhasePolynomial, ansatz: &AnsatzIndex, k: usize) -> Option<Vec<BigInt>> {
    let (fi, _) = f.clear_denominators();
    let nb = fi.num_base_vars();
    let per_tau = jet_orders(k + 1).len();
    let mut v = vec![BigInt::zero(); ansatz.len() * per_tau];
    for (mono, c) in fi.integer_terms()? {
        let ex = mono.exponents();
        if ex[2.min(nb)..nb].iter().any(|&e| e > 0) {
            return None;
        }
        let s = x12(&ex[..nb]);
        let t = ansatz.position(&ex[nb..])?;
        if (s.0 + s.1) as usize > k + 1 {
            continue;
        }
        // d^s (c x^s) = s! c
        let fact = falling(s.0, s.0) * falling(s.1, s.1);
        v[t * per_tau + jet_position(s)] = c * fact;
    }
    Some(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carnot::lookup;
    use crate::obstruct::counts;

    #[test]
    fn index_orders() {
        assert_eq!(
            momentum_indices(3, 2),
            vec![
                vec![2, 0, 0],
                vec![1, 1, 0],
                vec![1, 0, 1],
                vec![0, 2, 0],
                vec![0, 1, 1],
                vec![0, 0, 2]
            ]
        );
        let js = jet_orders(2);
        assert_eq!(js, vec![(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]);
        for (i, s) in js.into_iter().enumerate() {
            assert_eq!(jet_position(s), i);
        }
    }

    #[test]
    fn equation_counts() {
        for (name, d) in [("heis3", 1), ("par6", 6), ("dim8_2358", 5), ("cartan5", 3)] {
            let sys = lookup(name, None).unwrap();
            let pde = build_pde_system(&sys, d).unwrap();
            assert_eq!(
                pde.equations.len() as u64,
                counts::num_pde_equations(sys.dim(), d)
            );
            assert_eq!(pde.ansatz.len() as u64, counts::num_ansatz(sys.dim(), d));
        }
    }

    #[test]
    fn prolonged_shape() {
        let sys = lookup("par6", None).unwrap();
        let pde = build_pde_system(&sys, 2).unwrap();
        let m = prolong_evaluate(&pde, 3);
        assert_eq!(m.num_rows() as u64, counts::num_rows(6, 2, 3));
        assert_eq!(m.num_cols() as u64, counts::num_cols(6, 2, 3));
    }

    #[test]
    fn not_ready() {
        let sys = lookup("engel", None).unwrap();
        assert!(matches!(
            build_pde_system(&sys, 1),
            Err(ObstructError::NotObstructReady(_))
        ));
    }
}
