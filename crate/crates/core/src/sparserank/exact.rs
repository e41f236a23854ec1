use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::elim::{self, Arith, Row};
use super::primitive;

struct FractionFree;

impl Arith for FractionFree {
    type V = BigInt;

    fn prepare_pivot(&self, _row: &mut Row<BigInt>, _pos: usize) {}

    fn combine(
        &self,
        s: &Row<BigInt>,
        s_pos: usize,
        pivot: &Row<BigInt>,
        p_pos: usize,
    ) -> Row<BigInt> {
        // (a/g) s - (b/g) pivot with a = pivot entry, b = s entry
        let a = &pivot[p_pos].1;
        let b = &s[s_pos].1;
        let g = a.gcd(b);
        let fa = a / &g;
        let fb = b / &g;
        let mut out = Vec::with_capacity(s.len() + pivot.len());
        let (mut i, mut j) = (0, 0);
        while i < s.len() || j < pivot.len() {
            let sc = s.get(i).map(|e| e.0);
            let pc = pivot.get(j).map(|e| e.0);
            match (sc, pc) {
                (Some(x), Some(y)) if x == y => {
                    let v = &fa * &s[i].1 - &fb * &pivot[j].1;
                    if !v.is_zero() {
                        out.push((x, v));
                    }
                    i += 1;
                    j += 1;
                }
                (Some(x), y) if y.is_none_or(|y| x < y) => {
                    out.push((x, &fa * &s[i].1));
                    i += 1;
                }
                (_, Some(y)) => {
                    out.push((y, -(&fb * &pivot[j].1)));
                    j += 1;
                }
                _ => unreachable!(),
            }
        }
        primitive(out)
    }
}

pub(crate) fn rank(rows: Vec<Row<BigInt>>) -> usize {
    let rows = rows.into_iter().map(primitive).collect();
    elim::rank(&FractionFree, rows)
}
