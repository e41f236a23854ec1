//! Parsers for the compact command-line notations.

use std::str::FromStr;

use srint::carnot::CatalogParams;
use srint::dynamics::{Coordinate, Direction, IntegratorConfig, State};
use srint::exactpoly::Rational;
use srint::reduce::{QKind, ReducedSystem};

use crate::args::NumericArgs;
use crate::report::CliError;

fn floats(s: &str, what: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|v| v.trim().parse::<f64>().ok().filter(|x| x.is_finite()))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| {
            CliError::input(format!(
                "{what}: expected comma-separated numbers, got {s:?}"
            ))
        })
}

fn rational(s: &str) -> Result<Rational, CliError> {
    Rational::from_str(s.trim())
        .map_err(|_| CliError::input(format!("not a rational number: {s:?}")))
}

/// `Q1:a,b`, `Q2:a,b,c` or `C:c`.
pub fn q_spec(s: &str) -> Result<ReducedSystem, CliError> {
    let (kind, rest) = s
        .split_once(':')
        .ok_or_else(|| CliError::input(format!("--Q: expected KIND:params, got {s:?}")))?;
    let p = floats(rest, "--Q")?;
    let (kind, n) = match kind.to_ascii_uppercase().as_str() {
        "Q1" => (QKind::Q1, 2),
        "Q2" => (QKind::Q2, 3),
        "C" | "CONST" => (QKind::Constant, 1),
        other => {
            return Err(CliError::input(format!(
                "--Q: unknown kind {other:?} (Q1, Q2 or C)"
            )))
        }
    };
    if p.len() != n {
        return Err(CliError::input(format!(
            "--Q: {kind} takes {n} parameters, got {}",
            p.len()
        )));
    }
    Ok(ReducedSystem::from_normal_form(kind, &p))
}

pub fn initial_state(s: &str) -> Result<State, CliError> {
    match floats(s, "--ic")?.as_slice() {
        &[x, y, z] => Ok(State::new(0.0, x, y, z)),
        v => Err(CliError::input(format!(
            "--ic: expected x,y,z, got {} values",
            v.len()
        ))),
    }
}

/// `z=0:+` style section surfaces.
pub fn surface(s: &str) -> Result<(Coordinate, f64, Direction), CliError> {
    let bad = || CliError::input(format!("--surface: expected e.g. z=0:+, got {s:?}"));
    let (lhs, dir) = s.rsplit_once(':').ok_or_else(bad)?;
    let (coord, level) = lhs.split_once('=').ok_or_else(bad)?;
    let coord = match coord.trim() {
        "x" => Coordinate::X,
        "y" => Coordinate::Y,
        "z" => Coordinate::Z,
        _ => return Err(bad()),
    };
    let level: f64 = level.trim().parse().map_err(|_| bad())?;
    let dir = match dir.trim() {
        "+" => Direction::Increasing,
        "-" => Direction::Decreasing,
        _ => return Err(bad()),
    };
    Ok((coord, level, dir))
}

/// `t0:t1`.
pub fn window(s: &str) -> Result<(f64, f64), CliError> {
    let bad = || CliError::input(format!("--window: expected t0:t1, got {s:?}"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

/// `key=value` pairs separated by commas.
fn pairs(s: &str) -> Result<Vec<(String, Rational)>, CliError> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| CliError::input(format!("expected key=value, got {p:?}")))?;
            Ok((k.trim().to_string(), rational(v)?))
        })
        .collect()
}

/// Constants `c3..cD` from `c5=-1/10,c6=20`; unspecified ones are zero.
pub fn constants(s: Option<&str>, dim: usize) -> Result<Vec<Rational>, CliError> {
    let mut out = vec![Rational::default(); dim.saturating_sub(2)];
    for (k, v) in pairs(s.unwrap_or(""))? {
        let i: usize = k
            .strip_prefix('c')
            .and_then(|n| n.parse().ok())
            .filter(|&i| (3..=dim).contains(&i))
            .ok_or_else(|| {
                CliError::input(format!("--c: unknown constant {k:?}; expected c3..c{dim}"))
            })?;
        out[i - 3] = v;
    }
    Ok(out)
}

pub fn catalog_params(s: Option<&str>) -> Result<Option<CatalogParams>, CliError> {
    let Some(s) = s else {
        return Ok(None);
    };
    let (mut a, mut b) = (None, None);
    for (k, v) in pairs(s)? {
        match k.as_str() {
            "a" => a = Some(v),
            "b" => b = Some(v),
            _ => return Err(CliError::input(format!("--params: unknown key {k:?}"))),
        }
    }
    match (a, b) {
        (Some(a), Some(b)) => Ok(Some(CatalogParams { a, b })),
        _ => Err(CliError::input("--params needs both a and b")),
    }
}

pub fn config(n: &NumericArgs) -> Result<IntegratorConfig, CliError> {
    let cfg = IntegratorConfig {
        rel_tol: n.rtol,
        abs_tol: n.atol,
        h_init: n.h_init.min(n.hmax),
        h_max: n.hmax,
        max_steps: n.max_steps,
    };
    cfg.validate().map_err(|e| CliError::input(e.to_string()))?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use srint::exactpoly::rat;

    #[test]
    fn notations() {
        let q = q_spec("Q1:10,-0.1").unwrap();
        assert_eq!(q.kind, QKind::Q1);
        assert_eq!(q.params.as_f64(), vec![10.0, -0.1]);
        assert!(q_spec("Q2:1,2").is_err());
        assert!(q_spec("Q3:1").is_err());
        assert_eq!(
            initial_state("0,-5,0").unwrap(),
            State::new(0.0, 0.0, -5.0, 0.0)
        );
        assert!(initial_state("0,0").is_err());
        assert_eq!(
            surface("x=0:+").unwrap(),
            (Coordinate::X, 0.0, Direction::Increasing)
        );
        assert_eq!(
            surface("z=-1.5:-").unwrap(),
            (Coordinate::Z, -1.5, Direction::Decreasing)
        );
        assert!(surface("w=0:+").is_err());
        assert_eq!(
            constants(Some("c5=-1/10,c6=20"), 6).unwrap(),
            vec![rat(0, 1), rat(0, 1), rat(-1, 10), rat(20, 1)]
        );
        assert!(constants(Some("c7=1"), 6).is_err());
        assert_eq!(window("0:1").unwrap(), (0.0, 1.0));
        assert!(catalog_params(Some("a=1")).is_err());
    }
}
