use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::elim::{self, Arith, Row};
use super::prime::{mul_mod, pow_mod};

pub(crate) struct ModP(pub u64);

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

impl ModP {
    pub(crate) fn inv(&self, a: u64) -> u64 {
        pow_mod(a, self.0 - 2, self.0)
    }
}

/// Reduces an integer into `[0, p)`.
pub(crate) fn reduce(v: &BigInt, p: u64) -> u64 {
    let r = v % BigInt::from(p);
    let r = r.to_i128().expect("remainder fits");
    r.rem_euclid(p as i128) as u64
}

pub(crate) fn reduce_row(row: &[(u32, BigInt)], p: u64) -> Row<u64> {
    row.iter()
        .filter_map(|(c, v)| {
            let r = reduce(v, p);
            (r != 0).then_some((*c, r))
        })
        .collect()
}

/// Scales a row so that its first entry is 1.
pub(crate) fn monic(row: &mut Row<u64>, p: u64) {
    if let Some(&(_, f)) = row.first() {
        if f != 1 {
            let inv = ModP(p).inv(f);
            for (_, v) in row.iter_mut() {
                *v = mul_mod(*v, inv, p);
            }
        }
    }
}

impl Arith for ModP {
    type V = u64;

    fn prepare_pivot(&self, row: &mut Row<u64>, pos: usize) {
        let inv = self.inv(row[pos].1);
        for (_, v) in row.iter_mut() {
            *v = mul_mod(*v, inv, self.0);
        }
    }

    fn combine(&self, s: &Row<u64>, s_pos: usize, pivot: &Row<u64>, _p_pos: usize) -> Row<u64> {
        let p = self.0;
        // s - f * pivot, pivot entry is 1
        let f = p - s[s_pos].1;
        let mut out = Vec::with_capacity(s.len() + pivot.len());
        let (mut i, mut j) = (0, 0);
        while i < s.len() && j < pivot.len() {
            let (a, b) = (s[i].0, pivot[j].0);
            if a < b {
                out.push(s[i]);
                i += 1;
            } else if b < a {
                out.push((b, mul_mod(f, pivot[j].1, p)));
                j += 1;
            } else {
                let v = (s[i].1 + mul_mod(f, pivot[j].1, p)) % p;
                if v != 0 {
                    out.push((a, v));
                }
                i += 1;
                j += 1;
            }
        }
        out.extend_from_slice(&s[i..]);
        out.extend(pivot[j..].iter().map(|&(c, v)| (c, mul_mod(f, v, p))));
        out
    }

    fn dense_rank(&self, rows: &[Row<u64>], ncols: usize) -> Option<usize> {
        let mut used = vec![usize::MAX; ncols];
        let mut n = 0;
        for r in rows {
            for (c, _) in r {
                if used[*c as usize] == usize::MAX {
                    used[*c as usize] = n;
                    n += 1;
                }
            }
        }
        let mut m: Vec<Vec<u64>> = rows
            .iter()
            .map(|r| {
                let mut d = vec![0u64; n];
                for (c, v) in r {
                    d[used[*c as usize]] = *v;
                }
                d
            })
            .collect();
        Some(dense_rank(&mut m, self.0))
    }
}

/// Gaussian elimination on a dense block.
pub(crate) fn dense_rank(m: &mut [Vec<u64>], p: u64) -> usize {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..nrows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = ModP(p).inv(m[rank][col]);
        for v in m[rank][col..].iter_mut() {
            *v = mul_mod(*v, inv, p);
        }
        let (head, tail) = m.split_at_mut(rank + 1);
        let prow = &head[rank];
        for r in tail.iter_mut() {
            let f = r[col];
            if f == 0 {
                continue;
            }
            let f = p - f;
            for (x, &y) in r[col..].iter_mut().zip(&prow[col..]) {
                if y != 0 {
                    *x = (*x + mul_mod(f, y, p)) % p;
                }
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

pub(crate) fn rank(rows: Vec<Row<u64>>, p: u64) -> usize {
    elim::rank(&ModP(p), rows)
}
