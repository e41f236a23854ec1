//! Reduction by the Noether momenta to the planar system
//! `x' = cos z, y' = sin z, z' = Q(x, y)`.
//!
//! With `2H = ω1² + ω2²`, `ω1 = p1 + ...`, `ω2 = p2 + ...`, fixing
//! `p_i = c_i` (`i >= 3`) and the energy shell `ω1 = cos z`, `ω2 = sin z`
//! gives `z' = {ω2, ω1} = -{ω1, ω2}` with the constants substituted.

mod contact;
mod elliptic;

pub use contact::{divergence, reeb_check, reeb_check_poly, ReebReport};
pub use elliptic::{elliptic_drift_polynomial, elliptic_polynomial, EllipticInvariant};

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::carnot::SRSystem;
use crate::exactpoly::{rational_to_f64, PhasePolynomial, PolyError, Rational, Var};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReduceError {
    #[error("system {0} is not obstruct-ready")]
    NotObstructReady(String),
    #[error("system {0}: {1}")]
    Structure(String, String),
    #[error("expected {expected} constants c3..cD, got {got}")]
    ConstantCount { expected: usize, got: usize },
    #[error("internal error: reduced Q still depends on {0}")]
    Residual(String),
    #[error("Q has degree {0}; normal forms need degree at most 2")]
    DegreeTooHigh(u32),
    #[error("elliptic invariant is singular at r = 0")]
    Singular,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

fn xy_var(i: usize) -> PhasePolynomial {
    PhasePolynomial::var(2, 0, Var::X(i)).expect("x or y")
}

/// Builds `Q(x, y)` from the six coefficients
/// `[1, x, y, x², xy, y²]`.
pub fn quadratic(coeffs: [Rational; 6]) -> PhasePolynomial {
    let exps = [[0, 0], [1, 0], [0, 1], [2, 0], [1, 1], [0, 2]];
    PhasePolynomial::from_terms(
        2,
        0,
        exps.into_iter().zip(coeffs).map(|(e, c)| (e.to_vec(), c)),
    )
}

fn coeff(q: &PhasePolynomial, i: u32, j: u32) -> Rational {
    q.coefficient(&crate::exactpoly::Monomial::from_exponents(vec![i, j]))
}

/// `Q = -{ω1, ω2}` with `p_i = c_i` for `i >= 3`, as a polynomial in
/// `(x, y) = (x1, x2)`.
pub fn symplectic_reduce(
    sys: &SRSystem,
    constants: &[Rational],
) -> Result<PhasePolynomial, ReduceError> {
    let dim = sys.dim();
    if !sys.obstruct_ready() {
        return Err(ReduceError::NotObstructReady(sys.name.clone()));
    }
    if constants.len() != dim - 2 {
        return Err(ReduceError::ConstantCount {
            expected: dim - 2,
            got: constants.len(),
        });
    }
    let structure = |msg: &str| ReduceError::Structure(sys.name.clone(), msg.to_string());
    let (w1, w2) = sys
        .frame
        .clone()
        .ok_or_else(|| structure("2H is not stored as a sum of two squares"))?;
    let nb = w1.num_base_vars();
    let nm = w1.num_momenta();
    let one = PhasePolynomial::constant(nb, nm, Rational::one());
    let zero = PhasePolynomial::zero(nb, nm);
    if w1.partial_derivative(Var::P(1))? != one
        || w2.partial_derivative(Var::P(2))? != one
        || w1.partial_derivative(Var::P(2))? != zero
        || w2.partial_derivative(Var::P(1))? != zero
    {
        return Err(structure(
            "the frame is not of the form (p1 + ..., p2 + ...)",
        ));
    }
    let q = -w1.poisson_bracket(&w2)?;
    let assignments: Vec<(Var, Rational)> = constants
        .iter()
        .enumerate()
        .map(|(i, c)| (Var::P(i + 3), c.clone()))
        .collect();
    let q = q.evaluate_partial(&assignments)?;
    for v in [Var::P(1), Var::P(2)]
        .into_iter()
        .chain((3..=nb).map(Var::X))
    {
        if q.depends_on(v) {
            return Err(ReduceError::Residual(v.to_string()));
        }
    }
    Ok(PhasePolynomial::from_terms(
        2,
        0,
        q.terms()
            .map(|(m, c)| (m.exponents()[..2].to_vec(), c.clone())),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QKind {
    /// `a x² + b y`
    Q1,
    /// `a x² + b y² + c`
    Q2,
    Constant,
    /// `a = 0` or `b = 0`: the flow fibers over a planar flow.
    Degenerate,
}

impl fmt::Display for QKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QKind::Q1 => "Q1",
            QKind::Q2 => "Q2",
            QKind::Constant => "constant",
            QKind::Degenerate => "degenerate",
        })
    }
}

/// Rotation of the plane, `(x, y) = R (X, Y)` together with `z = Z + θ`,
/// which preserves the form of the system.
#[derive(Debug, Clone, PartialEq)]
pub enum Rotation {
    Identity,
    /// Rational `cos θ`, `sin θ`.
    Exact {
        cos: Rational,
        sin: Rational,
    },
    /// Only known in floating point; parameters are then approximate.
    Numeric {
        angle: f64,
    },
}

impl Rotation {
    pub fn cos_sin(&self) -> (f64, f64) {
        match self {
            Rotation::Identity => (1.0, 0.0),
            Rotation::Exact { cos, sin } => (rational_to_f64(cos), rational_to_f64(sin)),
            Rotation::Numeric { angle } => (angle.cos(), angle.sin()),
        }
    }

    pub fn angle(&self) -> f64 {
        let (c, s) = self.cos_sin();
        s.atan2(c)
    }
}

/// `(x, y) = R (X, Y) + shift`, `z = Z + angle(R)`, where `(X, Y, Z)` are
/// the normal-form coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap {
    pub rotation: Rotation,
    /// Exact when the rotation is; otherwise the f64 shift is authoritative.
    pub shift: Option<(Rational, Rational)>,
    pub shift_f64: (f64, f64),
}

impl AffineMap {
    /// Maps normal-form coordinates back to the original ones.
    pub fn to_original(&self, xn: f64, yn: f64, zn: f64) -> (f64, f64, f64) {
        let (c, s) = self.rotation.cos_sin();
        (
            c * xn - s * yn + self.shift_f64.0,
            s * xn + c * yn + self.shift_f64.1,
            zn + self.rotation.angle(),
        )
    }
}

/// Normal-form parameters: `(a, b)` for Q1, `(a, b, c)` for Q2, `(c)` for a
/// constant, the diagonal data `(a, b, c)` for a degenerate form.
#[derive(Debug, Clone, PartialEq)]
pub enum Params {
    Exact(Vec<Rational>),
    Numeric(Vec<f64>),
}

impl Params {
    pub fn as_f64(&self) -> Vec<f64> {
        match self {
            Params::Exact(v) => v.iter().map(rational_to_f64).collect(),
            Params::Numeric(v) => v.clone(),
        }
    }

    pub fn exact(&self) -> Option<&[Rational]> {
        match self {
            Params::Exact(v) => Some(v),
            Params::Numeric(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReducedSystem {
    /// `Q` in the original coordinates.
    pub q: PhasePolynomial,
    pub kind: QKind,
    pub params: Params,
    pub map: AffineMap,
    /// Explanations for degenerate forms and numeric rotations.
    pub flags: Vec<String>,
    /// The constants `c3..cD` used, when produced from a system.
    pub constants: Vec<Rational>,
}

impl ReducedSystem {
    /// A normal form given directly by its parameters.
    pub fn from_normal_form(kind: QKind, params: &[f64]) -> Self {
        let map = AffineMap {
            rotation: Rotation::Identity,
            shift: None,
            shift_f64: (0.0, 0.0),
        };
        ReducedSystem {
            q: PhasePolynomial::zero(2, 0),
            kind,
            params: Params::Numeric(params.to_vec()),
            map,
            flags: Vec::new(),
            constants: Vec::new(),
        }
    }

    /// `Q` in normal-form coordinates, in floating point.
    pub fn q_normal_f64(&self) -> impl Fn(f64, f64) -> f64 + Send + Sync + 'static {
        let p = self.params.as_f64();
        let get = move |i: usize| p.get(i).copied().unwrap_or(0.0);
        let (a, b, c) = (get(0), get(1), get(2));
        match self.kind {
            QKind::Q1 => Box::new(move |x: f64, y: f64| a * x * x + b * y)
                as Box<dyn Fn(f64, f64) -> f64 + Send + Sync>,
            QKind::Q2 | QKind::Degenerate => {
                Box::new(move |x: f64, y: f64| a * x * x + b * y * y + c)
            }
            QKind::Constant => Box::new(move |_: f64, _: f64| a),
        }
    }
}

impl fmt::Display for ReducedSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "kind {}", self.kind)?;
        let names: &[&str] = match self.kind {
            QKind::Q1 => &["a", "b"],
            QKind::Q2 | QKind::Degenerate => &["a", "b", "c"],
            QKind::Constant => &["c"],
        };
        match &self.params {
            Params::Exact(v) => {
                for (n, x) in names.iter().zip(v) {
                    write!(f, "; {n}={x}")?;
                }
            }
            Params::Numeric(v) => {
                for (n, x) in names.iter().zip(v) {
                    write!(f, "; {n}~{x:e}")?;
                }
            }
        }
        write!(f, "; map: {}", map_text(&self.map))?;
        for fl in &self.flags {
            write!(f, "; note: {fl}")?;
        }
        Ok(())
    }
}

fn signed_term(v: &Rational) -> String {
    if v.is_negative() {
        format!(" - {}", -v)
    } else {
        format!(" + {v}")
    }
}

fn map_text(m: &AffineMap) -> String {
    let lin = match &m.rotation {
        Rotation::Identity => ("x".to_string(), "y".to_string(), None),
        Rotation::Exact { cos, sin } => (
            format!("({cos})x - ({sin})y"),
            format!("({sin})x + ({cos})y"),
            Some(format!("z -> z + atan2({sin}, {cos})")),
        ),
        Rotation::Numeric { angle } => (
            format!("{:.17}x - {:.17}y", angle.cos(), angle.sin()),
            format!("{:.17}x + {:.17}y", angle.sin(), angle.cos()),
            Some(format!("z -> z + {angle:.17}")),
        ),
    };
    let (sx, sy) = match &m.shift {
        Some((a, b)) => (
            if a.is_zero() {
                String::new()
            } else {
                signed_term(a)
            },
            if b.is_zero() {
                String::new()
            } else {
                signed_term(b)
            },
        ),
        None => (
            format!(" + {:.17}", m.shift_f64.0),
            format!(" + {:.17}", m.shift_f64.1),
        ),
    };
    let mut s = format!("x->{}{sx}, y->{}{sy}", lin.0, lin.1);
    if let Some(z) = lin.2 {
        s.push_str(", ");
        s.push_str(&z);
    }
    s
}

/// Exact square root of a nonnegative rational, when it is rational.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let root = |n: &BigInt| {
        let s = n.sqrt();
        (&s * &s == *n).then_some(s)
    };
    Some(Rational::new(root(r.numer())?, root(r.denom())?))
}

/// Brings `Q` (degree at most 2) to a normal form by a rotation (removing
/// the `xy` term) and translations.
pub fn normalize_q(q: &PhasePolynomial) -> Result<ReducedSystem, ReduceError> {
    if q.num_base_vars() != 2 || q.num_momenta() != 0 {
        return Err(ReduceError::Structure(
            "Q".into(),
            "expected a polynomial in (x, y) only".into(),
        ));
    }
    if let Some(d) = q.total_degree().filter(|&d| d > 2) {
        return Err(ReduceError::DegreeTooHigh(d));
    }
    let (a, b, c) = (coeff(q, 2, 0), coeff(q, 1, 1), coeff(q, 0, 2));
    let (d, e, f0) = (coeff(q, 1, 0), coeff(q, 0, 1), coeff(q, 0, 0));
    let mut flags = Vec::new();

    let rotation = rotation_for(&a, &b, &c);
    match &rotation {
        Rotation::Numeric { angle } => {
            flags.push(format!(
                "xy term removed by an irrational rotation (angle {angle:.17}); parameters are floating point"
            ));
            let (cs, sn) = (angle.cos(), angle.sin());
            let f = |r: &Rational| rational_to_f64(r);
            let (a, b, c, d, e, f0) = (f(&a), f(&b), f(&c), f(&d), f(&e), f(&f0));
            let a2 = a * cs * cs + b * cs * sn + c * sn * sn;
            let c2 = a * sn * sn - b * cs * sn + c * cs * cs;
            let d2 = d * cs + e * sn;
            let e2 = -d * sn + e * cs;
            let tol = 1e-12 * (a.abs() + b.abs() + c.abs()).max(f64::MIN_POSITIVE);
            let nz = |v: f64| v.abs() > tol;
            let (kind, params, shift) = finish_f64(a2, c2, d2, e2, f0, nz, &mut flags);
            let (sx, sy) = (cs * shift.0 - sn * shift.1, sn * shift.0 + cs * shift.1);
            Ok(ReducedSystem {
                q: q.clone(),
                kind,
                params: Params::Numeric(params),
                map: AffineMap {
                    rotation,
                    shift: None,
                    shift_f64: (sx, sy),
                },
                flags,
                constants: Vec::new(),
            })
        }
        _ => {
            let (cs, sn) = match &rotation {
                Rotation::Exact { cos, sin } => (cos.clone(), sin.clone()),
                _ => (Rational::one(), Rational::zero()),
            };
            let a2 = &a * &cs * &cs + &b * &cs * &sn + &c * &sn * &sn;
            let b2 = (&c - &a) * &cs * &sn * Rational::from_integer(2.into())
                + &b * (&cs * &cs - &sn * &sn);
            let c2 = &a * &sn * &sn - &b * &cs * &sn + &c * &cs * &cs;
            debug_assert!(b2.is_zero());
            let d2 = &d * &cs + &e * &sn;
            let e2 = -&d * &sn + &e * &cs;
            let (kind, params, shift) = finish_exact(a2, c2, d2, e2, f0, &mut flags);
            let sx = &cs * &shift.0 - &sn * &shift.1;
            let sy = &sn * &shift.0 + &cs * &shift.1;
            Ok(ReducedSystem {
                q: q.clone(),
                kind,
                params: Params::Exact(params),
                map: AffineMap {
                    rotation,
                    shift_f64: (rational_to_f64(&sx), rational_to_f64(&sy)),
                    shift: Some((sx, sy)),
                },
                flags,
                constants: Vec::new(),
            })
        }
    }
}

/// Rotation removing the `xy` term of `a x² + b xy + c y²`; in the rank-one
/// case it leaves the square in `X`.
fn rotation_for(a: &Rational, b: &Rational, c: &Rational) -> Rotation {
    if b.is_zero() {
        if a.is_zero() && !c.is_zero() {
            // quarter turn: x = -Y, y = X
            return Rotation::Exact {
                cos: Rational::zero(),
                sin: Rational::one(),
            };
        }
        return Rotation::Identity;
    }
    let two = Rational::from_integer(2.into());
    let det = a * c * Rational::from_integer(4.into()) - b * b;
    let amc = a - c;
    // cos 2θ = (a - c) / R, sin 2θ = b / R; rank one takes R = a + c so the
    // square lands on X
    let r = if det.is_zero() {
        Some(a + c)
    } else {
        rational_sqrt(&(&amc * &amc + b * b))
    };
    if let Some(r) = r {
        let cos2 = &amc / &r;
        let sin2 = b / &r;
        if let Some(cs) = rational_sqrt(&((Rational::one() + &cos2) / &two)) {
            if !cs.is_zero() {
                let sn = &sin2 / (&two * &cs);
                return Rotation::Exact { cos: cs, sin: sn };
            }
        }
        if let Some(sn) = rational_sqrt(&((Rational::one() - &cos2) / &two)) {
            if !sn.is_zero() {
                let cs = &sin2 / (&two * &sn);
                return Rotation::Exact { cos: cs, sin: sn };
            }
        }
    }
    let f = rational_to_f64;
    let angle = if det.is_zero() {
        let s = f(&(a + c));
        0.5 * (f(b) / s).atan2(f(&amc) / s)
    } else {
        0.5 * f(b).atan2(f(&amc))
    };
    Rotation::Numeric { angle }
}

type Finish<T> = (QKind, Vec<T>, (T, T));

/// Completes squares in `a X² + c Y² + d X + e Y + f`; returns the shift
/// `(X, Y) -> (X + s_x, Y + s_y)` in rotated coordinates.
fn finish_exact(
    a: Rational,
    c: Rational,
    d: Rational,
    e: Rational,
    f: Rational,
    flags: &mut Vec<String>,
) -> Finish<Rational> {
    let two = Rational::from_integer(2.into());
    let four = Rational::from_integer(4.into());
    let z = Rational::zero;
    match (a.is_zero(), c.is_zero()) {
        (false, false) => {
            let sx = -&d / (&two * &a);
            let sy = -&e / (&two * &c);
            let cc = &f - &d * &d / (&four * &a) - &e * &e / (&four * &c);
            (QKind::Q2, vec![a, c, cc], (sx, sy))
        }
        (false, true) => {
            let sx = -&d / (&two * &a);
            let rest = &f - &d * &d / (&four * &a);
            if e.is_zero() {
                flags.push("b = 0: Q depends on x only; the flow fibers over a 2D flow".into());
                (QKind::Degenerate, vec![a, z(), rest], (sx, z()))
            } else {
                let sy = -&rest / &e;
                (QKind::Q1, vec![a, e], (sx, sy))
            }
        }
        _ => {
            if d.is_zero() && e.is_zero() {
                (QKind::Constant, vec![f], (z(), z()))
            } else {
                flags.push("a = 0: Q is affine; the flow fibers over a 2D flow".into());
                (QKind::Degenerate, vec![z(), z(), f], (z(), z()))
            }
        }
    }
}

fn finish_f64(
    a: f64,
    c: f64,
    d: f64,
    e: f64,
    f: f64,
    nz: impl Fn(f64) -> bool,
    flags: &mut Vec<String>,
) -> Finish<f64> {
    match (nz(a), nz(c)) {
        (true, true) => (
            QKind::Q2,
            vec![a, c, f - d * d / (4.0 * a) - e * e / (4.0 * c)],
            (-d / (2.0 * a), -e / (2.0 * c)),
        ),
        (true, false) => {
            let rest = f - d * d / (4.0 * a);
            if nz(e) {
                (QKind::Q1, vec![a, e], (-d / (2.0 * a), -rest / e))
            } else {
                flags.push("b = 0: Q depends on x only; the flow fibers over a 2D flow".into());
                (QKind::Degenerate, vec![a, 0.0, rest], (-d / (2.0 * a), 0.0))
            }
        }
        _ => {
            if nz(d) || nz(e) {
                flags.push("a = 0: Q is affine; the flow fibers over a 2D flow".into());
                (QKind::Degenerate, vec![0.0, 0.0, f], (0.0, 0.0))
            } else {
                (QKind::Constant, vec![f], (0.0, 0.0))
            }
        }
    }
}

/// `Q` composed with the normal-form map, `Q(R (X, Y) + shift)`; equals the
/// normal form exactly when the map is exact.
pub fn apply_map(q: &PhasePolynomial, map: &AffineMap) -> Option<PhasePolynomial> {
    let (cs, sn) = match &map.rotation {
        Rotation::Identity => (Rational::one(), Rational::zero()),
        Rotation::Exact { cos, sin } => (cos.clone(), sin.clone()),
        Rotation::Numeric { .. } => return None,
    };
    let (sx, sy) = map.shift.clone()?;
    let k = |r: Rational| PhasePolynomial::constant(2, 0, r);
    let (x, y) = (xy_var(1), xy_var(2));
    let xo = &(&(&k(cs.clone()) * &x) - &(&k(sn.clone()) * &y)) + &k(sx);
    let yo = &(&(&k(sn) * &x) + &(&k(cs) * &y)) + &k(sy);
    let mut out = PhasePolynomial::zero(2, 0);
    for (m, c) in q.terms() {
        let e = m.exponents();
        let t = &xo.pow(e[0]) * &yo.pow(e[1]);
        out = &out + &t.scale(c);
    }
    Some(out)
}

/// The normal form as a polynomial in `(X, Y)` (exact parameters only).
pub fn normal_form_polynomial(r: &ReducedSystem) -> Option<PhasePolynomial> {
    let p = r.params.exact()?;
    let z = Rational::zero;
    Some(match r.kind {
        QKind::Q1 => quadratic([z(), z(), p[1].clone(), p[0].clone(), z(), z()]),
        QKind::Q2 | QKind::Degenerate => {
            quadratic([p[2].clone(), z(), z(), p[0].clone(), z(), p[1].clone()])
        }
        QKind::Constant => quadratic([p[0].clone(), z(), z(), z(), z(), z()]),
    })
}

/// Reduces a system and normalizes the result.
pub fn reduce_and_normalize(
    sys: &SRSystem,
    constants: &[Rational],
) -> Result<ReducedSystem, ReduceError> {
    let q = symplectic_reduce(sys, constants)?;
    let mut r = normalize_q(&q)?;
    r.constants = constants.to_vec();
    Ok(r)
}
