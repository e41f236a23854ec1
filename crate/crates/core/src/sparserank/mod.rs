//! Sparse integer matrices and their rank over GF(p) and over Q.
//!
//! Both rank routines split the matrix into connected components of its
//! row/column incidence graph, rank the components in parallel and sum the
//! results in component order. Within a component elimination is Markowitz
//! style: the shortest remaining row is the pivot row and, within it, the
//! column with the fewest remaining entries (lowest index on ties). The result
//! does not depend on the number of threads.

mod elim;
mod exact;
mod io;
mod modp;
mod prime;

pub use io::{parse_triplets, write_dump, write_triplets};
pub(crate) use modp::{inv_mod, monic, reduce as reduce_mod};
pub(crate) use prime::mul_mod;
pub use prime::{is_prime, next_prime};

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RankError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("modulus {0} exceeds 2^62")]
    ModulusTooLarge(u64),
    #[error("row {row}: {msg}")]
    BadRow { row: usize, msg: String },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Sparse matrix with arbitrary-precision integer entries. Each row is sorted
/// by column with no stored zeros; rows may be empty.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparseIntMatrix {
    num_cols: usize,
    rows: Vec<Vec<(u32, BigInt)>>,
}

impl SparseIntMatrix {
    pub fn new(num_cols: usize) -> Self {
        SparseIntMatrix {
            num_cols,
            rows: Vec::new(),
        }
    }

    /// Appends a row given as `(column, value)` pairs in any order; repeated
    /// columns are summed and zeros dropped.
    pub fn push_row<I>(&mut self, entries: I) -> Result<(), RankError>
    where
        I: IntoIterator<Item = (usize, BigInt)>,
    {
        let mut row: Vec<(u32, BigInt)> = Vec::new();
        for (c, v) in entries {
            if c >= self.num_cols {
                return Err(RankError::BadRow {
                    row: self.rows.len(),
                    msg: format!("column {c} outside 0..{}", self.num_cols),
                });
            }
            row.push((c as u32, v));
        }
        row.sort_by_key(|(c, _)| *c);
        let mut merged: Vec<(u32, BigInt)> = Vec::with_capacity(row.len());
        for (c, v) in row {
            match merged.last_mut() {
                Some((lc, lv)) if *lc == c => *lv += v,
                _ => merged.push((c, v)),
            }
        }
        merged.retain(|(_, v)| !v.is_zero());
        self.rows.push(merged);
        Ok(())
    }

    /// Appends a row known to be canonical (sorted, no zeros, in range).
    pub(crate) fn push_canonical(&mut self, row: Vec<(u32, BigInt)>) {
        debug_assert!(row.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(row
            .iter()
            .all(|(c, v)| !v.is_zero() && (*c as usize) < self.num_cols));
        self.rows.push(row);
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let ncols = rows.iter().map(Vec::len).max().unwrap_or(0);
        let mut m = SparseIntMatrix::new(ncols);
        for r in rows {
            m.push_row(r.iter().enumerate().map(|(c, &v)| (c, BigInt::from(v))))
                .expect("in range");
        }
        m
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.num_cols
    }

    pub fn rows(&self) -> &[Vec<(u32, BigInt)>] {
        &self.rows
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Row-major dense copy (for tests and small oracles).
    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        self.rows
            .iter()
            .map(|r| {
                let mut d = vec![BigInt::zero(); self.num_cols];
                for (c, v) in r {
                    d[*c as usize] = v.clone();
                }
                d
            })
            .collect()
    }

    /// Columns that carry at least one entry.
    pub fn used_columns(&self) -> Vec<bool> {
        let mut used = vec![false; self.num_cols];
        for r in &self.rows {
            for (c, _) in r {
                used[*c as usize] = true;
            }
        }
        used
    }

    /// `M v` for an integer vector.
    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|(c, x)| x * &v[*c as usize]).sum())
            .collect()
    }

    /// Rank over GF(p).
    pub fn rank_mod_p(&self, p: u64) -> Result<usize, RankError> {
        check_modulus(p)?;
        let comps = components(self.num_cols, &self.rows);
        Ok(comps
            .par_iter()
            .map(|rows| {
                let reduced: Vec<Vec<(u32, u64)>> = rows
                    .iter()
                    .map(|&i| modp::reduce_row(&self.rows[i], p))
                    .filter(|r| !r.is_empty())
                    .collect();
                modp::rank(reduced, p)
            })
            .collect::<Vec<_>>()
            .into_iter()
            .sum())
    }

    /// Rank over Q by fraction-free elimination.
    pub fn rank_exact(&self) -> usize {
        let comps = components(self.num_cols, &self.rows);
        comps
            .par_iter()
            .map(|rows| exact::rank(rows.iter().map(|&i| self.rows[i].clone()).collect()))
            .collect::<Vec<_>>()
            .into_iter()
            .sum()
    }

    /// Primitive normal form of every row (content removed, first entry
    /// positive), with empty rows and repeated rows dropped. First occurrence
    /// order is kept.
    pub fn dedupe_rows(&self) -> SparseIntMatrix {
        let mut seen: HashSet<Vec<(u32, BigInt)>> = HashSet::new();
        let mut out = SparseIntMatrix::new(self.num_cols);
        for r in &self.rows {
            let p = primitive(r.clone());
            if !p.is_empty() && seen.insert(p.clone()) {
                out.rows.push(p);
            }
        }
        out
    }
}

/// Sparse matrix over GF(p) with entries in `1..p`, rows sorted by column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseModPMatrix {
    p: u64,
    num_cols: usize,
    rows: Vec<Vec<(u32, u64)>>,
}

impl SparseModPMatrix {
    pub fn new(p: u64, num_cols: usize) -> Result<Self, RankError> {
        check_modulus(p)?;
        Ok(SparseModPMatrix {
            p,
            num_cols,
            rows: Vec::new(),
        })
    }

    /// Entrywise reduction of an integer matrix.
    pub fn from_int(m: &SparseIntMatrix, p: u64) -> Result<Self, RankError> {
        let mut out = Self::new(p, m.num_cols)?;
        out.rows = m.rows.iter().map(|r| modp::reduce_row(r, p)).collect();
        Ok(out)
    }

    pub(crate) fn push_canonical(&mut self, row: Vec<(u32, u64)>) {
        debug_assert!(row.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(row
            .iter()
            .all(|(c, v)| *v != 0 && *v < self.p && (*c as usize) < self.num_cols));
        self.rows.push(row);
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.num_cols
    }

    pub fn rows(&self) -> &[Vec<(u32, u64)>] {
        &self.rows
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn rank(&self) -> usize {
        let comps = components(self.num_cols, &self.rows);
        comps
            .par_iter()
            .map(|rows| modp::rank(rows.iter().map(|&i| self.rows[i].clone()).collect(), self.p))
            .collect::<Vec<_>>()
            .into_iter()
            .sum()
    }
}

pub(crate) fn check_modulus(p: u64) -> Result<(), RankError> {
    if p >= 1 << 62 {
        return Err(RankError::ModulusTooLarge(p));
    }
    if !is_prime(p) {
        return Err(RankError::NotPrime(p));
    }
    Ok(())
}

/// Divides a row by the gcd of its entries and makes the first entry positive.
pub(crate) fn primitive(mut row: Vec<(u32, BigInt)>) -> Vec<(u32, BigInt)> {
    let Some(first) = row.first() else {
        return row;
    };
    let mut g = first.1.abs();
    for (_, v) in &row[1..] {
        if g == BigInt::from(1) {
            break;
        }
        g = g.gcd(v);
    }
    let negate = first.1.is_negative();
    if g != BigInt::from(1) || negate {
        let g = if negate { -g } else { g };
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
    row
}

/// Row index sets of the connected components of the incidence graph,
/// ordered by smallest row index; empty rows are dropped.
pub(crate) fn components<T>(num_cols: usize, rows: &[Vec<(u32, T)>]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..num_cols).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for r in rows {
        if let Some((c0, _)) = r.first() {
            let a = find(&mut parent, *c0 as usize);
            for (c, _) in &r[1..] {
                let b = find(&mut parent, *c as usize);
                if a != b {
                    parent[b] = a;
                }
            }
        }
    }
    let mut by_root: std::collections::HashMap<usize, usize> = Default::default();
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let Some((c0, _)) = r.first() else { continue };
        let root = find(&mut parent, *c0 as usize);
        let idx = *by_root.entry(root).or_insert_with(|| {
            comps.push(Vec::new());
            comps.len() - 1
        });
        comps[idx].push(i);
    }
    // largest first so the parallel schedule starts with the long tasks
    comps.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    comps
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_rank() {
        let id: Vec<Vec<i64>> = (0..5)
            .map(|i| (0..5).map(|j| i64::from(i == j)).collect())
            .collect();
        let m = SparseIntMatrix::from_dense(&id);
        assert_eq!(m.rank_exact(), 5);
        for p in [2, 3, 101, 1_000_000_007] {
            assert_eq!(m.rank_mod_p(p).unwrap(), 5);
        }
    }

    #[test]
    fn single_row_mod_small_primes() {
        let m = SparseIntMatrix::from_dense(&[vec![6, 10, 15]]);
        assert_eq!(m.rank_mod_p(7).unwrap(), 1);
        assert_eq!(m.rank_mod_p(2).unwrap(), 1);
        let z = SparseIntMatrix::from_dense(&[vec![7, 14, 21]]);
        assert_eq!(z.rank_mod_p(7).unwrap(), 0);
    }

    #[test]
    fn determinant_six() {
        // det = 6
        let m = SparseIntMatrix::from_dense(&[vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 3]]);
        assert_eq!(m.rank_mod_p(5).unwrap(), 3);
        assert!(m.rank_mod_p(2).unwrap() <= 2);
        assert!(m.rank_mod_p(3).unwrap() <= 2);
        let m = SparseIntMatrix::from_dense(&[vec![2, 1, 1], vec![1, 2, 1], vec![1, 1, 2]]);
        // det = 4; mod 2 the rows sum to zero
        assert_eq!(m.rank_exact(), 3);
        assert_eq!(m.rank_mod_p(2).unwrap(), 2);
        assert_eq!(m.rank_mod_p(3).unwrap(), 3);
    }

    #[test]
    fn moduli_checked() {
        let m = SparseIntMatrix::from_dense(&[vec![1]]);
        assert_eq!(m.rank_mod_p(15), Err(RankError::NotPrime(15)));
        assert_eq!(m.rank_mod_p(1), Err(RankError::NotPrime(1)));
        assert!(matches!(
            m.rank_mod_p(1 << 62),
            Err(RankError::ModulusTooLarge(_))
        ));
    }

    #[test]
    fn dedupe_examples() {
        let m = SparseIntMatrix::from_dense(&[vec![2, 4], vec![-1, -2], vec![3, 6], vec![0, 0]]);
        let d = m.dedupe_rows();
        assert_eq!(d.to_dense(), vec![vec![BigInt::from(1), BigInt::from(2)]]);
    }

    #[test]
    fn zero_and_multiples_of_97() {
        assert_eq!(SparseIntMatrix::new(4).rank_exact(), 0);
        let m = SparseIntMatrix::from_dense(&[vec![97, 194], vec![0, 97]]);
        assert_eq!(m.rank_exact(), 2);
        assert_eq!(m.rank_mod_p(97).unwrap(), 0);
    }

    #[test]
    fn push_row_merges() {
        let mut m = SparseIntMatrix::new(3);
        m.push_row([
            (2, BigInt::from(1)),
            (0, BigInt::from(2)),
            (2, BigInt::from(-1)),
        ])
        .unwrap();
        assert_eq!(m.rows()[0], vec![(0, BigInt::from(2))]);
        assert!(m.push_row([(3, BigInt::from(1))]).is_err());
    }
}
