//! Row normalization, superfluous columns, and iterated elimination of
//! monomial and bimonomial equations. Exact mode works over Z with primitive
//! rows; modular mode works entirely in GF(p) with monic rows.

use std::collections::{HashSet, VecDeque};
use std::hash::Hash;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::sparserank::{inv_mod, monic, mul_mod, RankError, SparseIntMatrix, SparseModPMatrix};

type Row<V> = Vec<(u32, V)>;

pub(crate) trait RedRing {
    type V: Clone + Eq + Hash + Send + Sync;
    fn normalize(&self, row: &mut Row<Self::V>);
    /// `b s - t_v (a e_u + b e_v)` where `t_v` is the entry of `s` at `v`.
    fn subst(&self, s: &Row<Self::V>, u: u32, a: &Self::V, v: u32, b: &Self::V) -> Row<Self::V>;
    /// Removes column `c` from `s` using `pivot`, whose entry at `c` is nonzero.
    fn eliminate(&self, s: &Row<Self::V>, pivot: &Row<Self::V>, c: u32) -> Row<Self::V>;
    fn lift_int(&self, v: &BigInt) -> Self::V;
    fn is_zero(&self, v: &Self::V) -> bool;
}

fn entry<V>(row: &[(u32, V)], c: u32) -> Option<&V> {
    row.binary_search_by_key(&c, |e| e.0)
        .ok()
        .map(|i| &row[i].1)
}

/// `x * s + y * t` over sorted sparse rows, dropping zeros.
fn axpy<V: Clone>(
    s: &Row<V>,
    x: &V,
    t: &Row<V>,
    y: &V,
    mul: impl Fn(&V, &V) -> V,
    add: impl Fn(&V, &V) -> V,
    is_zero: impl Fn(&V) -> bool,
) -> Row<V> {
    let mut out = Vec::with_capacity(s.len() + t.len());
    let (mut i, mut j) = (0, 0);
    while i < s.len() || j < t.len() {
        let (c, v) = match (s.get(i), t.get(j)) {
            (Some(a), Some(b)) if a.0 == b.0 => {
                i += 1;
                j += 1;
                (a.0, add(&mul(x, &a.1), &mul(y, &b.1)))
            }
            (Some(a), Some(b)) if a.0 < b.0 => {
                i += 1;
                (a.0, mul(x, &a.1))
            }
            (Some(a), None) => {
                i += 1;
                (a.0, mul(x, &a.1))
            }
            (_, Some(b)) => {
                j += 1;
                (b.0, mul(y, &b.1))
            }
            (None, None) => unreachable!(),
        };
        if !is_zero(&v) {
            out.push((c, v));
        }
    }
    out
}

pub(crate) struct Integers;

impl RedRing for Integers {
    type V = BigInt;

    fn normalize(&self, row: &mut Row<BigInt>) {
        let r = std::mem::take(row);
        *row = crate::sparserank::primitive(r);
    }

    fn subst(&self, s: &Row<BigInt>, u: u32, a: &BigInt, v: u32, b: &BigInt) -> Row<BigInt> {
        let tv = &s[s.binary_search_by_key(&v, |e| e.0).expect("has v")].1;
        let mut out: Row<BigInt> = Vec::with_capacity(s.len() + 1);
        let mut seen_u = false;
        for (c, x) in s {
            if *c == v {
                continue;
            }
            let val = if *c == u {
                seen_u = true;
                b * x - tv * a
            } else {
                b * x
            };
            if !val.is_zero() {
                out.push((*c, val));
            }
        }
        if !seen_u {
            let val = -(tv * a);
            let pos = out.partition_point(|e| e.0 < u);
            out.insert(pos, (u, val));
        }
        self.normalize(&mut out);
        out
    }

    fn eliminate(&self, s: &Row<BigInt>, pivot: &Row<BigInt>, c: u32) -> Row<BigInt> {
        let (Some(a), Some(b)) = (entry(s, c), entry(pivot, c)) else {
            return s.clone();
        };
        let g = num_integer::Integer::gcd(a, b);
        let (x, y) = (b / &g, -(a / &g));
        let mut out = axpy(s, &x, pivot, &y, |u, v| u * v, |u, v| u + v, Zero::is_zero);
        self.normalize(&mut out);
        out
    }

    fn lift_int(&self, v: &BigInt) -> BigInt {
        v.clone()
    }

    fn is_zero(&self, v: &BigInt) -> bool {
        v.is_zero()
    }
}

pub(crate) struct Field(pub u64);

impl RedRing for Field {
    type V = u64;

    fn normalize(&self, row: &mut Row<u64>) {
        monic(row, self.0);
    }

    fn subst(&self, s: &Row<u64>, u: u32, a: &u64, v: u32, b: &u64) -> Row<u64> {
        let p = self.0;
        let tv = s[s.binary_search_by_key(&v, |e| e.0).expect("has v")].1;
        // x_v = -(a / b) x_u, so t_u += t_v * (-(a / b))
        let f = mul_mod(p - tv, mul_mod(*a, inv_mod(*b, p), p), p);
        let mut out: Row<u64> = Vec::with_capacity(s.len() + 1);
        let mut seen_u = false;
        for &(c, x) in s {
            if c == v {
                continue;
            }
            let val = if c == u {
                seen_u = true;
                (x + f) % p
            } else {
                x
            };
            if val != 0 {
                out.push((c, val));
            }
        }
        if !seen_u && f != 0 {
            let pos = out.partition_point(|e| e.0 < u);
            out.insert(pos, (u, f));
        }
        self.normalize(&mut out);
        out
    }

    fn eliminate(&self, s: &Row<u64>, pivot: &Row<u64>, c: u32) -> Row<u64> {
        let p = self.0;
        let (Some(&a), Some(&b)) = (entry(s, c), entry(pivot, c)) else {
            return s.clone();
        };
        let y = p - mul_mod(a, inv_mod(b, p), p);
        let mut out = axpy(
            s,
            &1,
            pivot,
            &y,
            |u, v| mul_mod(*u, *v, p),
            |u, v| (u + v) % p,
            |v| *v == 0,
        );
        self.normalize(&mut out);
        out
    }

    fn lift_int(&self, v: &BigInt) -> u64 {
        crate::sparserank::reduce_mod(v, self.0)
    }

    fn is_zero(&self, v: &u64) -> bool {
        *v == 0
    }
}

/// Output of the reduction stage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Reduced<V> {
    pub rows: Vec<Row<V>>,
    pub v_spfl: usize,
    pub v_spfl_initial: usize,
    pub v_mon: usize,
    pub v_bimon: usize,
    pub v_red: usize,
    pub rows_after_dedupe: usize,
}

fn dedupe<V: Clone + Eq + Hash>(rows: Vec<Row<V>>) -> Vec<Row<V>> {
    let mut seen: HashSet<Row<V>> = HashSet::new();
    rows.into_iter()
        .filter(|r| !r.is_empty() && seen.insert(r.clone()))
        .collect()
}

/// Pivot columns for a set of kernel vectors, one per independent vector,
/// such that the vectors restricted to the pivots form an invertible block.
/// Columns flagged in `prefer` are chosen first, then the lowest index.
pub(crate) fn clearing_pivots<R: RedRing>(
    ring: &R,
    vectors: &[Row<BigInt>],
    prefer: &[bool],
) -> Vec<u32> {
    let mut basis: Vec<(u32, Row<R::V>)> = Vec::new();
    for w in vectors {
        let mut r: Row<R::V> = w
            .iter()
            .map(|(c, v)| (*c, ring.lift_int(v)))
            .filter(|(_, v)| !ring.is_zero(v))
            .collect();
        for (c, b) in &basis {
            if r.is_empty() {
                break;
            }
            r = ring.eliminate(&r, b, *c);
        }
        let pivot = r
            .iter()
            .map(|e| e.0)
            .min_by_key(|&c| (!prefer[c as usize], c));
        if let Some(c) = pivot {
            // keep the basis reduced at the new pivot
            for (_, b) in basis.iter_mut() {
                *b = ring.eliminate(b, &r, c);
            }
            basis.push((c, r));
        }
    }
    basis.into_iter().map(|(c, _)| c).collect()
}

pub(crate) fn reduce<R: RedRing>(
    ring: &R,
    ncols: usize,
    rows: Vec<Row<R::V>>,
    cleared: &[bool],
) -> Reduced<R::V> {
    let rows: Vec<Row<R::V>> = rows
        .into_iter()
        .map(|mut r| {
            r.retain(|e| !cleared[e.0 as usize]);
            ring.normalize(&mut r);
            r
        })
        .collect();
    let mut rows = dedupe(rows);
    let rows_after_dedupe = rows.len();

    let mut used = vec![false; ncols];
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); ncols];
    for (i, r) in rows.iter().enumerate() {
        for (c, _) in r {
            used[*c as usize] = true;
            col_rows[*c as usize].push(i as u32);
        }
    }
    let v_spfl_initial = used.iter().filter(|&&u| !u).count();

    let mut alive = vec![true; rows.len()];
    let mut eliminated = vec![false; ncols];
    let mut work: VecDeque<usize> = (0..rows.len()).filter(|&i| rows[i].len() <= 2).collect();
    let (mut v_mon, mut v_bimon) = (0, 0);

    let has = |row: &Row<R::V>, c: u32| row.binary_search_by_key(&c, |e| e.0).is_ok();
    while let Some(r) = work.pop_front() {
        if !alive[r] || rows[r].len() > 2 {
            continue;
        }
        alive[r] = false;
        let row = std::mem::take(&mut rows[r]);
        match row.len() {
            0 => {}
            1 => {
                let c = row[0].0;
                v_mon += 1;
                eliminated[c as usize] = true;
                let mut targets = std::mem::take(&mut col_rows[c as usize]);
                targets.sort_unstable();
                targets.dedup();
                for s in targets {
                    let s = s as usize;
                    if !alive[s] || !has(&rows[s], c) {
                        continue;
                    }
                    rows[s].retain(|e| e.0 != c);
                    ring.normalize(&mut rows[s]);
                    if rows[s].len() <= 2 {
                        work.push_back(s);
                    }
                }
            }
            _ => {
                let ((u, a), (v, b)) = (row[0].clone(), row[1].clone());
                v_bimon += 1;
                eliminated[v as usize] = true;
                let mut targets = std::mem::take(&mut col_rows[v as usize]);
                targets.sort_unstable();
                targets.dedup();
                for s in targets {
                    let s = s as usize;
                    if !alive[s] || !has(&rows[s], v) {
                        continue;
                    }
                    let had_u = has(&rows[s], u);
                    rows[s] = ring.subst(&rows[s], u, &a, v, &b);
                    if !had_u && has(&rows[s], u) {
                        col_rows[u as usize].push(s as u32);
                    }
                    if rows[s].len() <= 2 {
                        work.push_back(s);
                    }
                }
            }
        }
    }

    let remaining: Vec<Row<R::V>> = rows
        .into_iter()
        .zip(alive)
        .filter_map(|(r, a)| a.then_some(r))
        .collect();
    let remaining = dedupe(remaining);
    let mut used = vec![false; ncols];
    for r in &remaining {
        for (c, _) in r {
            used[*c as usize] = true;
        }
    }
    let v_red = used.iter().filter(|&&u| u).count();
    let v_spfl = (0..ncols).filter(|&c| !used[c] && !eliminated[c]).count();
    debug_assert_eq!(v_spfl + v_red + v_mon + v_bimon, ncols);
    Reduced {
        rows: remaining,
        v_spfl,
        v_spfl_initial,
        v_mon,
        v_bimon,
        v_red,
        rows_after_dedupe,
    }
}

/// Reduced matrix in the arithmetic of the chosen mode.
#[derive(Debug, Clone)]
pub enum ReducedMatrix {
    Exact(SparseIntMatrix),
    ModP(SparseModPMatrix),
}

impl ReducedMatrix {
    pub fn num_rows(&self) -> usize {
        match self {
            ReducedMatrix::Exact(m) => m.num_rows(),
            ReducedMatrix::ModP(m) => m.num_rows(),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            ReducedMatrix::Exact(m) => m.rank_exact(),
            ReducedMatrix::ModP(m) => m.rank(),
        }
    }
}

/// Counts produced by [`reduce_system`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionCounts {
    pub v_spfl: usize,
    /// Columns cleared by the known kernel vectors (part of `v_spfl`).
    pub v_cleared: usize,
    /// Zero or cleared columns before monomial/bimonomial elimination.
    pub v_spfl_initial: usize,
    pub v_mon: usize,
    pub v_bimon: usize,
    pub v_red: usize,
    /// Rows left after primitive normalization and deduplication.
    pub rows_after_dedupe: usize,
}

/// Normalizes and deduplicates rows, then iteratively eliminates monomial and
/// bimonomial rows. `modulus = None` works over Z (rank over Q), otherwise
/// all arithmetic is in GF(p).
///
/// `kernel` lists known kernel vectors of `m` (the jets of the trivial
/// integrals). Adding multiples of them to a solution lets one pivot unknown
/// per independent vector be set to zero; those columns are dropped and
/// counted as superfluous. This leaves `v_red + v_spfl - rank` unchanged.
pub fn reduce_system(
    m: &SparseIntMatrix,
    modulus: Option<u64>,
    kernel: &[Vec<(u32, BigInt)>],
) -> Result<(ReducedMatrix, ReductionCounts), RankError> {
    let ncols = m.num_cols();
    match modulus {
        None => {
            let cleared = cleared_columns(&Integers, ncols, m.rows(), kernel);
            let red = reduce(&Integers, ncols, m.rows().to_vec(), &cleared);
            let mut out = SparseIntMatrix::new(ncols);
            for r in &red.rows {
                debug_assert!(r.first().is_none_or(|e| e.1.is_positive()));
            }
            let counts = counts_of(&red, &cleared);
            for r in red.rows {
                out.push_canonical(r);
            }
            Ok((ReducedMatrix::Exact(out), counts))
        }
        Some(p) => {
            let mp = SparseModPMatrix::from_int(m, p)?;
            let cleared = cleared_columns(&Field(p), ncols, mp.rows(), kernel);
            let red = reduce(&Field(p), ncols, mp.rows().to_vec(), &cleared);
            let counts = counts_of(&red, &cleared);
            let mut out = SparseModPMatrix::new(p, ncols)?;
            for r in red.rows {
                out.push_canonical(r);
            }
            Ok((ReducedMatrix::ModP(out), counts))
        }
    }
}

fn cleared_columns<R: RedRing>(
    ring: &R,
    ncols: usize,
    rows: &[Row<R::V>],
    kernel: &[Row<BigInt>],
) -> Vec<bool> {
    let mut zero = vec![true; ncols];
    for r in rows {
        for (c, _) in r {
            zero[*c as usize] = false;
        }
    }
    let mut cleared = vec![false; ncols];
    for c in clearing_pivots(ring, kernel, &zero) {
        cleared[c as usize] = true;
    }
    cleared
}

fn counts_of<V>(r: &Reduced<V>, cleared: &[bool]) -> ReductionCounts {
    ReductionCounts {
        v_cleared: cleared.iter().filter(|&&c| c).count(),
        v_spfl: r.v_spfl,
        v_spfl_initial: r.v_spfl_initial,
        v_mon: r.v_mon,
        v_bimon: r.v_bimon,
        v_red: r.v_red,
        rows_after_dedupe: r.rows_after_dedupe,
    }
}
