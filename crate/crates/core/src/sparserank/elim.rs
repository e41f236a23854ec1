//! Markowitz-style sparse elimination shared by the modular and exact ranks.

use std::collections::BTreeSet;

pub(crate) type Row<V> = Vec<(u32, V)>;

pub(crate) trait Arith {
    type V: Clone + Send + Sync;
    /// Prepares a chosen pivot row (entry `pos` is the pivot).
    fn prepare_pivot(&self, row: &mut Row<Self::V>, pos: usize);
    /// `s` with the pivot column eliminated using `pivot`; the result has no
    /// entry in that column.
    fn combine(
        &self,
        s: &Row<Self::V>,
        s_pos: usize,
        pivot: &Row<Self::V>,
        p_pos: usize,
    ) -> Row<Self::V>;
    /// Optional dense finish for the active block; `None` keeps it sparse.
    fn dense_rank(&self, _rows: &[Row<Self::V>], _ncols: usize) -> Option<usize> {
        None
    }
}

/// Dense switch: active block area at most this many entries...
const DENSE_MAX_AREA: usize = 40_000_000;
/// ...and at least this fraction filled.
const DENSE_MIN_FILL: f64 = 0.12;

fn position(row: &[(u32, impl Sized)], c: u32) -> Option<usize> {
    row.binary_search_by_key(&c, |(k, _)| *k).ok()
}

/// Rank of the rows; column indices may be arbitrary `u32`s.
pub(crate) fn rank<A: Arith>(arith: &A, rows: Vec<Row<A::V>>) -> usize {
    // compress columns to 0..nc preserving order
    let mut cols: Vec<u32> = rows
        .iter()
        .flat_map(|r| r.iter().map(|(c, _)| *c))
        .collect();
    cols.sort_unstable();
    cols.dedup();
    let nc = cols.len();
    let mut rows: Vec<Row<A::V>> = rows
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|(c, v)| (cols.binary_search(&c).expect("present") as u32, v))
                .collect()
        })
        .collect();

    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); nc];
    let mut col_count: Vec<u32> = vec![0; nc];
    let mut queue: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut nnz = 0usize;
    for (i, r) in rows.iter().enumerate() {
        for (c, _) in r {
            col_rows[*c as usize].push(i as u32);
            col_count[*c as usize] += 1;
        }
        nnz += r.len();
        queue.insert((r.len(), i));
    }
    let mut active_cols = col_count.iter().filter(|&&n| n > 0).count();
    let mut alive = vec![true; rows.len()];
    let mut rank = 0;
    let mut steps = 0usize;

    while let Some((len, r)) = queue.pop_first() {
        if len == 0 {
            alive[r] = false;
            continue;
        }
        steps += 1;
        if steps.is_multiple_of(32) {
            let area = queue.len().saturating_add(1).saturating_mul(active_cols);
            if area <= DENSE_MAX_AREA && nnz as f64 >= DENSE_MIN_FILL * area as f64 {
                let mut block: Vec<Row<A::V>> = Vec::with_capacity(queue.len() + 1);
                block.push(std::mem::take(&mut rows[r]));
                for &(_, s) in &queue {
                    block.push(std::mem::take(&mut rows[s]));
                }
                if let Some(rk) = arith.dense_rank(&block, nc) {
                    return rank + rk;
                }
                // put the rows back and continue sparse
                let mut it = block.into_iter();
                rows[r] = it.next().expect("pivot row");
                for ((_, s), row) in queue.iter().zip(it) {
                    rows[*s] = row;
                }
            }
        }

        let pivot_pos = rows[r]
            .iter()
            .enumerate()
            .min_by_key(|(_, (c, _))| (col_count[*c as usize], *c))
            .map(|(i, _)| i)
            .expect("nonempty row");
        let mut pivot = std::mem::take(&mut rows[r]);
        arith.prepare_pivot(&mut pivot, pivot_pos);
        let pc = pivot[pivot_pos].0;
        alive[r] = false;
        for (c, _) in &pivot {
            col_count[*c as usize] -= 1;
            if col_count[*c as usize] == 0 {
                active_cols -= 1;
            }
        }
        nnz -= pivot.len();
        rank += 1;

        let mut targets = std::mem::take(&mut col_rows[pc as usize]);
        targets.sort_unstable();
        targets.dedup();
        for s in targets {
            let s = s as usize;
            if !alive[s] {
                continue;
            }
            let Some(s_pos) = position(&rows[s], pc) else {
                continue;
            };
            let old = std::mem::take(&mut rows[s]);
            let new = arith.combine(&old, s_pos, &pivot, pivot_pos);
            // column bookkeeping by merging old and new supports
            let (mut i, mut j) = (0, 0);
            while i < old.len() || j < new.len() {
                let oc = old.get(i).map(|e| e.0);
                let ncol = new.get(j).map(|e| e.0);
                match (oc, ncol) {
                    (Some(a), Some(b)) if a == b => {
                        i += 1;
                        j += 1;
                    }
                    (Some(a), b) if b.is_none_or(|b| a < b) => {
                        col_count[a as usize] -= 1;
                        if col_count[a as usize] == 0 {
                            active_cols -= 1;
                        }
                        i += 1;
                    }
                    (_, Some(b)) => {
                        if col_count[b as usize] == 0 {
                            active_cols += 1;
                        }
                        col_count[b as usize] += 1;
                        col_rows[b as usize].push(s as u32);
                        j += 1;
                    }
                    _ => unreachable!(),
                }
            }
            nnz = nnz - old.len() + new.len();
            queue.remove(&(old.len(), s));
            queue.insert((new.len(), s));
            rows[s] = new;
        }
    }
    rank
}
