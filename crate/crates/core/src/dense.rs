//! Small dense exact linear algebra over Q.

use num_traits::Zero;

use crate::exactpoly::Rational;

/// Rank of a dense rational matrix by Gaussian elimination.
pub fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let ncols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        let pivot_row = rows[rank].clone();
        for r in rows.iter_mut().skip(rank + 1) {
            if r[col].is_zero() {
                continue;
            }
            let f = &r[col] / &pivot_row[col];
            for (c, v) in r.iter_mut().enumerate().skip(col) {
                if !pivot_row[c].is_zero() {
                    *v -= &f * &pivot_row[c];
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Reduced row echelon basis of the row space (nonzero rows only).
pub fn row_basis(rows: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    let mut rows: Vec<Vec<Rational>> = rows;
    let ncols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = rows[rank][col].recip();
        for v in rows[rank].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[rank].clone();
        for (i, r) in rows.iter_mut().enumerate() {
            if i == rank || r[col].is_zero() {
                continue;
            }
            let f = r[col].clone();
            for (c, v) in r.iter_mut().enumerate() {
                if !pivot_row[c].is_zero() {
                    *v -= &f * &pivot_row[c];
                }
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rows
}
