//! Text formats: a readable row dump and `i j value` triplets.

use std::io::{self, Write};
use std::str::FromStr;

use num_bigint::BigInt;

use super::{RankError, SparseIntMatrix};

/// One line per row: `row i: (col,coeff) (col,coeff) ...`.
pub fn write_dump<W: Write>(m: &SparseIntMatrix, mut out: W) -> io::Result<()> {
    for (i, r) in m.rows().iter().enumerate() {
        write!(out, "row {i}:")?;
        for (c, v) in r {
            write!(out, " ({c},{v})")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

/// Header line `rows cols`, then one `i j value` line per nonzero entry.
pub fn write_triplets<W: Write>(m: &SparseIntMatrix, mut out: W) -> io::Result<()> {
    writeln!(out, "{} {}", m.num_rows(), m.num_cols())?;
    for (i, r) in m.rows().iter().enumerate() {
        for (c, v) in r {
            writeln!(out, "{i} {c} {v}")?;
        }
    }
    Ok(())
}

pub fn parse_triplets(text: &str) -> Result<SparseIntMatrix, RankError> {
    let err = |line: usize, msg: &str| RankError::Parse {
        line,
        msg: msg.to_string(),
    };
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| err(1, "missing header"))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(usize::from_str)
        .collect::<Result<_, _>>()
        .map_err(|_| err(1, "header must be `rows cols`"))?;
    let [nrows, ncols] = dims[..] else {
        return Err(err(1, "header must be `rows cols`"));
    };
    let mut entries: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); nrows];
    for (n, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let [i, j, v] = toks[..] else {
            return Err(err(n + 1, "expected `i j value`"));
        };
        let i: usize = i.parse().map_err(|_| err(n + 1, "bad row index"))?;
        let j: usize = j.parse().map_err(|_| err(n + 1, "bad column index"))?;
        let v = BigInt::from_str(v).map_err(|_| err(n + 1, "bad value"))?;
        if i >= nrows || j >= ncols {
            return Err(err(n + 1, "index out of range"));
        }
        entries[i].push((j, v));
    }
    let mut m = SparseIntMatrix::new(ncols);
    for r in entries {
        m.push_row(r)?;
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplet_round_trip() {
        let m = SparseIntMatrix::from_dense(&[vec![1, 0, -3], vec![0, 0, 0], vec![0, 12, 0]]);
        let mut buf = Vec::new();
        write_triplets(&m, &mut buf).unwrap();
        let back = parse_triplets(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(back, m);
        let mut dump = Vec::new();
        write_dump(&m, &mut dump).unwrap();
        assert_eq!(
            String::from_utf8(dump).unwrap(),
            "row 0: (0,1) (2,-3)\nrow 1:\nrow 2: (1,12)\n"
        );
        assert!(parse_triplets("2 2\n5 0 1\n").is_err());
    }
}
