//! Plain-text algebra definitions.
//!
//! ```text
//! # Heisenberg
//! dim 3
//! grading 2 1
//! bracket 1 2 3 1
//! omega 1 = p1 + x2 p3
//! omega 2 = p2
//! hamiltonian2 = (omega squares expanded)
//! ```
//!
//! When `hamiltonian2` is absent but `omega 1` and `omega 2` are present,
//! `2H = omega_1^2 + omega_2^2`.

use std::str::FromStr;

use super::{Bracket, CarnotAlgebra, CarnotError, CoordinateRealization, SRSystem};
use crate::exactpoly::{parse_polynomial, PhasePolynomial, Rational};

#[derive(Debug, Clone)]
pub struct AlgebraFile {
    pub algebra: CarnotAlgebra,
    pub omegas: Vec<Option<PhasePolynomial>>,
    pub thetas: Vec<Option<PhasePolynomial>>,
    pub hamiltonian2: Option<PhasePolynomial>,
}

fn err(line: usize, msg: impl Into<String>) -> CarnotError {
    CarnotError::File {
        line,
        msg: msg.into(),
    }
}

fn parse_index(line: usize, tok: Option<&str>, what: &str) -> Result<usize, CarnotError> {
    tok.ok_or_else(|| err(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| err(line, format!("invalid {what}")))
}

/// Parses the algebra text format; `name` labels the resulting algebra.
pub fn parse_algebra_file(name: &str, text: &str) -> Result<AlgebraFile, CarnotError> {
    let mut dim: Option<usize> = None;
    let mut grading: Option<Vec<usize>> = None;
    let mut brackets = Vec::new();
    // (line, is_omega, index, expr)
    let mut forms: Vec<(usize, bool, usize, String)> = Vec::new();
    let mut h2: Option<(usize, String)> = None;

    for (n, raw) in text.lines().enumerate() {
        let lineno = n + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match head {
            "dim" => {
                if dim.is_some() {
                    return Err(err(lineno, "duplicate dim"));
                }
                dim = Some(parse_index(lineno, Some(rest), "dimension")?);
            }
            "grading" => {
                let g: Result<Vec<usize>, _> = rest.split_whitespace().map(str::parse).collect();
                grading = Some(g.map_err(|_| err(lineno, "invalid grading"))?);
            }
            "bracket" => {
                let toks: Vec<&str> = rest.split_whitespace().collect();
                if toks.len() != 4 {
                    return Err(err(lineno, "expected `bracket i j k c`"));
                }
                let i = parse_index(lineno, Some(toks[0]), "index i")?;
                let j = parse_index(lineno, Some(toks[1]), "index j")?;
                let k = parse_index(lineno, Some(toks[2]), "index k")?;
                let c = Rational::from_str(toks[3])
                    .map_err(|_| err(lineno, format!("invalid coefficient {:?}", toks[3])))?;
                brackets.push(Bracket::new(i, j, k, c));
            }
            "omega" | "theta" => {
                let (idx, expr) = rest
                    .split_once('=')
                    .ok_or_else(|| err(lineno, format!("expected `{head} i = <expr>`")))?;
                let i = parse_index(lineno, Some(idx.trim()), "index")?;
                forms.push((lineno, head == "omega", i, expr.trim().to_string()));
            }
            _ if line.starts_with("hamiltonian2") => {
                let expr = line["hamiltonian2".len()..]
                    .trim()
                    .strip_prefix('=')
                    .ok_or_else(|| err(lineno, "expected `hamiltonian2 = <expr>`"))?;
                h2 = Some((lineno, expr.trim().to_string()));
            }
            _ => return Err(err(lineno, format!("unknown directive {head:?}"))),
        }
    }

    let dim = dim.ok_or_else(|| err(0, "missing `dim` line"))?;
    let grading = grading.ok_or_else(|| err(0, "missing `grading` line"))?;
    let algebra = CarnotAlgebra::new(name, dim, grading, brackets)?;

    let parse =
        |line: usize, s: &str| parse_polynomial(s, dim, dim).map_err(|e| err(line, e.to_string()));
    let mut omegas = vec![None; dim];
    let mut thetas = vec![None; dim];
    for (line, is_omega, i, expr) in forms {
        if i == 0 || i > dim {
            return Err(err(line, format!("index {i} outside 1..={dim}")));
        }
        let slot = if is_omega { &mut omegas } else { &mut thetas };
        if slot[i - 1].is_some() {
            return Err(err(line, format!("index {i} given twice")));
        }
        slot[i - 1] = Some(parse(line, &expr)?);
    }
    let hamiltonian2 = h2.map(|(line, s)| parse(line, &s)).transpose()?;
    Ok(AlgebraFile {
        algebra,
        omegas,
        thetas,
        hamiltonian2,
    })
}

impl AlgebraFile {
    /// Builds a system; `2H` comes from the file or from `omega_1, omega_2`.
    pub fn into_system(self) -> Result<SRSystem, CarnotError> {
        let frame = match (&self.omegas[0], self.omegas.get(1).and_then(Option::as_ref)) {
            (Some(u), Some(v)) => Some((u.clone(), v.clone())),
            _ => None,
        };
        let hamiltonian2 = match (self.hamiltonian2, &frame) {
            (Some(h), _) => h,
            (None, Some((u, v))) => &(u * u) + &(v * v),
            (None, None) => {
                return Err(err(
                    0,
                    "need `hamiltonian2` or both `omega 1` and `omega 2`",
                ))
            }
        };
        if !hamiltonian2.is_homogeneous_in_momenta(2) {
            return Err(err(0, "2H must be homogeneous of degree 2 in the momenta"));
        }
        let has_forms = self.omegas.iter().chain(&self.thetas).any(Option::is_some);
        let realization = has_forms.then_some(CoordinateRealization {
            omegas: self.omegas,
            thetas: self.thetas,
            sign: None,
        });
        Ok(SRSystem {
            name: self.algebra.name.clone(),
            algebra: self.algebra,
            hamiltonian2,
            frame,
            realization,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carnot::{lookup, verify_realization};

    const HEIS: &str = "\
# Heisenberg
dim 3
grading 2 1
bracket 1 2 3 1
omega 1 = p1 + x2 p3
omega 2 = p2
theta 2 = p2 + x1 p3
";

    #[test]
    fn heisenberg_round_trip() {
        let sys = parse_algebra_file("heis", HEIS)
            .unwrap()
            .into_system()
            .unwrap();
        assert_eq!(
            sys.hamiltonian2,
            lookup("heis3", None).unwrap().hamiltonian2
        );
        let rep = verify_realization(&sys).unwrap();
        assert_eq!(rep.sign, 1);
        assert_eq!(rep.derived, vec![3]);
        assert!(sys.algebra.validate().passed());
    }

    #[test]
    fn rational_bracket_and_h2() {
        let f = parse_algebra_file(
            "t",
            "dim 3\ngrading 2 1\nbracket 1 2 3 -1/2\nhamiltonian2 = p1^2 + p2^2\n",
        )
        .unwrap();
        assert_eq!(f.algebra.brackets[0].c, crate::exactpoly::rat(-1, 2));
        let s = f.into_system().unwrap();
        assert!(s.realization.is_none());
        assert!(s.frame.is_none());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_algebra_file("t", "dim 3\ngrading 2 1\nbracket 1 2\n").unwrap_err();
        assert_eq!(e, err(3, "expected `bracket i j k c`"));
        let e = parse_algebra_file("t", "dim 3\ngrading 2 1\nomega 4 = p1\n").unwrap_err();
        assert!(matches!(e, CarnotError::File { line: 3, .. }));
        let e = parse_algebra_file("t", "dim 3\ngrading 2 1\nomega 1 = q1\n").unwrap_err();
        assert!(matches!(e, CarnotError::File { line: 3, .. }));
        let e = parse_algebra_file("t", "dim 3\nfoo\n").unwrap_err();
        assert!(matches!(e, CarnotError::File { line: 2, .. }));
        assert!(matches!(
            parse_algebra_file("t", "dim 3\ngrading 2 1\nbracket 2 1 3 1\n"),
            Err(CarnotError::Malformed(_))
        ));
        let f = parse_algebra_file("t", "dim 3\ngrading 2 1\nhamiltonian2 = p1\n").unwrap();
        assert!(f.into_system().is_err());
    }
}
