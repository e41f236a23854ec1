use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use super::CarnotError;
use crate::dense;
use crate::exactpoly::Rational;

/// One structure constant: `[e_i, e_j] += c * e_k` with `i < j` (1-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bracket {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub c: Rational,
}

impl Bracket {
    pub fn new(i: usize, j: usize, k: usize, c: Rational) -> Self {
        Bracket { i, j, k, c }
    }
}

/// Graded nilpotent Lie algebra given by structure constants on a basis
/// `e_1..e_D` ordered by layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CarnotAlgebra {
    pub name: String,
    pub dim: usize,
    /// Layer dimensions `dim g_1, dim g_2, ...`.
    pub grading: Vec<usize>,
    pub brackets: Vec<Bracket>,
}

/// Sparse vector in the algebra, keyed by 1-based basis index.
pub type AlgebraVector = BTreeMap<usize, Rational>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub check: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub algebra: String,
    pub checks: Vec<CheckOutcome>,
    pub growth_vector: Vec<usize>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl CarnotAlgebra {
    /// Builds an algebra after structural checks (index ranges, `i < j`,
    /// grading summing to `dim`).
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        grading: Vec<usize>,
        brackets: Vec<Bracket>,
    ) -> Result<Self, CarnotError> {
        let name = name.into();
        if grading.iter().sum::<usize>() != dim || grading.contains(&0) {
            return Err(CarnotError::Malformed(format!(
                "grading {grading:?} does not partition dimension {dim}"
            )));
        }
        for b in &brackets {
            if b.i == 0 || b.j == 0 || b.k == 0 || b.i > dim || b.j > dim || b.k > dim {
                return Err(CarnotError::Malformed(format!(
                    "bracket [e{}, e{}] -> e{} has an index outside 1..={dim}",
                    b.i, b.j, b.k
                )));
            }
            if b.i >= b.j {
                return Err(CarnotError::Malformed(format!(
                    "bracket [e{}, e{}] must be stored with i < j",
                    b.i, b.j
                )));
            }
        }
        Ok(CarnotAlgebra {
            name,
            dim,
            grading,
            brackets,
        })
    }

    /// Shorthand for integer structure constants `(i, j, k, c)`.
    pub fn from_int_brackets(
        name: &str,
        grading: &[usize],
        brackets: &[(usize, usize, usize, i64)],
    ) -> Result<Self, CarnotError> {
        let dim = grading.iter().sum();
        let bs = brackets
            .iter()
            .map(|&(i, j, k, c)| Bracket::new(i, j, k, crate::exactpoly::int(c)))
            .collect();
        Self::new(name, dim, grading.to_vec(), bs)
    }

    /// 1-based layer of basis element `i`.
    pub fn layer(&self, i: usize) -> usize {
        let mut acc = 0;
        for (l, n) in self.grading.iter().enumerate() {
            acc += n;
            if i <= acc {
                return l + 1;
            }
        }
        unreachable!("basis index {i} outside the grading")
    }

    /// `[e_i, e_j]` for any ordered pair (antisymmetric extension).
    pub fn bracket_basis(&self, i: usize, j: usize) -> AlgebraVector {
        let mut out = AlgebraVector::new();
        if i == j {
            return out;
        }
        let (a, b, sign) = if i < j { (i, j, 1) } else { (j, i, -1) };
        for br in self.brackets.iter().filter(|br| br.i == a && br.j == b) {
            let c = if sign > 0 {
                br.c.clone()
            } else {
                -br.c.clone()
            };
            add_into(&mut out, br.k, c);
        }
        out
    }

    pub fn bracket(&self, u: &AlgebraVector, v: &AlgebraVector) -> AlgebraVector {
        let mut out = AlgebraVector::new();
        for (i, a) in u {
            for (j, b) in v {
                for (k, c) in self.bracket_basis(*i, *j) {
                    add_into(&mut out, k, a * b * c);
                }
            }
        }
        out
    }

    fn basis_vector(i: usize) -> AlgebraVector {
        let mut v = AlgebraVector::new();
        v.insert(i, crate::exactpoly::int(1));
        v
    }

    /// Dimensions of the weak derived flag generated by the first layer,
    /// stopping when it stabilizes.
    pub fn growth_vector(&self) -> Vec<usize> {
        let first: Vec<AlgebraVector> = (1..=self.grading[0]).map(Self::basis_vector).collect();
        let mut span = first.clone();
        let mut dims = vec![self.span_rank(&span)];
        loop {
            let mut next = span.clone();
            for g in &first {
                for s in &span {
                    let b = self.bracket(g, s);
                    if !b.is_empty() {
                        next.push(b);
                    }
                }
            }
            let basis = self.span_basis(&next);
            let r = basis.len();
            if r == *dims.last().expect("nonempty") {
                return dims;
            }
            dims.push(r);
            span = basis;
        }
    }

    fn to_dense(&self, v: &AlgebraVector) -> Vec<Rational> {
        let mut row = vec![Rational::zero(); self.dim];
        for (k, c) in v {
            row[k - 1] = c.clone();
        }
        row
    }

    fn span_rank(&self, vs: &[AlgebraVector]) -> usize {
        dense::rank(vs.iter().map(|v| self.to_dense(v)).collect())
    }

    fn span_basis(&self, vs: &[AlgebraVector]) -> Vec<AlgebraVector> {
        dense::row_basis(vs.iter().map(|v| self.to_dense(v)).collect())
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| (k + 1, c))
                    .collect()
            })
            .collect()
    }

    /// Runs every structural check and reports each one.
    pub fn validate(&self) -> ValidationReport {
        let mut checks = Vec::new();

        let mut seen = BTreeMap::new();
        let mut dupes = Vec::new();
        for b in &self.brackets {
            if seen.insert((b.i, b.j, b.k), ()).is_some() {
                dupes.push(format!("[e{}, e{}] -> e{}", b.i, b.j, b.k));
            }
        }
        checks.push(CheckOutcome {
            check: "antisymmetry",
            passed: dupes.is_empty(),
            detail: if dupes.is_empty() {
                "each (i<j, k) stored once".into()
            } else {
                format!("duplicate entries: {}", dupes.join(", "))
            },
        });

        let mut jacobi_fail = None;
        'outer: for a in 1..=self.dim {
            for b in a + 1..=self.dim {
                for c in b + 1..=self.dim {
                    let (ea, eb, ec) = (
                        Self::basis_vector(a),
                        Self::basis_vector(b),
                        Self::basis_vector(c),
                    );
                    let mut sum = self.bracket(&self.bracket(&ea, &eb), &ec);
                    for (k, v) in self.bracket(&self.bracket(&eb, &ec), &ea) {
                        add_into(&mut sum, k, v);
                    }
                    for (k, v) in self.bracket(&self.bracket(&ec, &ea), &eb) {
                        add_into(&mut sum, k, v);
                    }
                    if !sum.is_empty() {
                        jacobi_fail = Some((a, b, c));
                        break 'outer;
                    }
                }
            }
        }
        checks.push(CheckOutcome {
            check: "jacobi",
            passed: jacobi_fail.is_none(),
            detail: match jacobi_fail {
                None => "all triples satisfy the Jacobi identity".into(),
                Some((a, b, c)) => format!("Jacobi identity fails on (e{a}, e{b}, e{c})"),
            },
        });

        let bad: Vec<String> = self
            .brackets
            .iter()
            .filter(|b| !b.c.is_zero() && self.layer(b.i) + self.layer(b.j) != self.layer(b.k))
            .map(|b| {
                format!(
                    "[e{}, e{}] -> e{} maps layers {}+{} into {}",
                    b.i,
                    b.j,
                    b.k,
                    self.layer(b.i),
                    self.layer(b.j),
                    self.layer(b.k)
                )
            })
            .collect();
        checks.push(CheckOutcome {
            check: "grading",
            passed: bad.is_empty(),
            detail: if bad.is_empty() {
                "[g_i, g_j] lies in g_(i+j)".into()
            } else {
                bad.join("; ")
            },
        });

        let growth = self.growth_vector();
        let generated = growth.last().copied() == Some(self.dim);
        checks.push(CheckOutcome {
            check: "bracket_generation",
            passed: generated,
            detail: format!("growth vector {growth:?}"),
        });

        ValidationReport {
            algebra: self.name.clone(),
            checks,
            growth_vector: growth,
        }
    }
}

fn add_into(v: &mut AlgebraVector, k: usize, c: Rational) {
    if c.is_zero() {
        return;
    }
    let e = v.entry(k).or_insert_with(Rational::zero);
    *e += c;
    if e.is_zero() {
        v.remove(&k);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heisenberg_passes() {
        let h = CarnotAlgebra::from_int_brackets("heis3", &[2, 1], &[(1, 2, 3, 1)]).unwrap();
        let r = h.validate();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.growth_vector, vec![2, 3]);
    }

    #[test]
    fn grading_violation_detected() {
        let h = CarnotAlgebra::from_int_brackets("bad", &[2, 1], &[(1, 2, 3, 1), (1, 3, 2, 1)])
            .unwrap();
        let r = h.validate();
        assert!(!r.passed());
        let fails: Vec<_> = r.failures().map(|c| c.check).collect();
        assert!(fails.contains(&"grading"));
    }

    #[test]
    fn jacobi_violation_named() {
        // [e1,e2]=e3, [e1,e3]=e4, [e2,e3]=e5 plus [e2,e4]=e6 without [e1,e5]=e6.
        let a = CarnotAlgebra::from_int_brackets(
            "broken",
            &[2, 1, 2, 1],
            &[
                (1, 2, 3, 1),
                (1, 3, 4, 1),
                (2, 3, 5, 1),
                (2, 4, 6, 1),
                (1, 5, 6, 1),
            ],
        )
        .unwrap();
        // hyperbolic relations: consistent
        assert!(a.validate().passed());
        let b = CarnotAlgebra::from_int_brackets(
            "broken",
            &[2, 1, 2, 1],
            &[(1, 2, 3, 1), (1, 3, 4, 1), (2, 3, 5, 1), (2, 4, 6, 1)],
        )
        .unwrap();
        let r = b.validate();
        let jac = r.checks.iter().find(|c| c.check == "jacobi").unwrap();
        assert!(!jac.passed);
        assert!(jac.detail.contains("(e1, e2, e3)"), "{}", jac.detail);
    }

    #[test]
    fn malformed_indices() {
        assert!(matches!(
            CarnotAlgebra::from_int_brackets("x", &[2, 1], &[(2, 1, 3, 1)]),
            Err(CarnotError::Malformed(_))
        ));
        assert!(matches!(
            CarnotAlgebra::from_int_brackets("x", &[2, 1], &[(1, 2, 4, 1)]),
            Err(CarnotError::Malformed(_))
        ));
        assert!(CarnotAlgebra::from_int_brackets("x", &[2, 0, 1], &[]).is_err());
    }

    #[test]
    fn non_generating() {
        let a = CarnotAlgebra::from_int_brackets("abelian", &[2, 1], &[]).unwrap();
        let r = a.validate();
        assert!(!r.passed());
        assert_eq!(r.growth_vector, vec![2]);
    }
}
