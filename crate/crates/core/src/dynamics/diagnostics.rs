//! Accuracy, conservation and pendulum-form checks on computed orbits.

use crate::reduce::{EllipticInvariant, Params, QKind, ReducedSystem};

use super::rk::integrate_sampled;
use super::{DynamicsError, Failure, Flow, IntegratorConfig, State};

/// Number of shared sample times used by [`accuracy_check`].
const ACCURACY_SAMPLES: usize = 1000;

/// Maximum state deviation between a run at `cfg` and one with
/// tolerances and step bounds ten times smaller.
pub fn accuracy_check(
    flow: &Flow,
    ic: &State,
    t_end: f64,
    cfg: &IntegratorConfig,
) -> Result<f64, Failure> {
    if t_end == ic.t {
        return Ok(0.0);
    }
    let n = ACCURACY_SAMPLES;
    let times: Vec<f64> = (1..=n)
        .map(|i| ic.t + (t_end - ic.t) * i as f64 / n as f64)
        .collect();
    let coarse = integrate_sampled(flow, ic, &times, cfg)?;
    let fine = integrate_sampled(flow, ic, &times, &cfg.tightened(10.0))?;
    Ok(coarse
        .iter()
        .zip(&fine)
        .map(|(a, b)| {
            (a.x - b.x)
                .abs()
                .max((a.y - b.y).abs())
                .max((a.z - b.z).abs())
        })
        .fold(0.0, f64::max))
}

/// `(a, b, c)` of `a x² + b y² + c` when the system has that shape.
fn diagonal(sys: &ReducedSystem) -> Option<[f64; 3]> {
    let p = sys.params.as_f64();
    match sys.kind {
        QKind::Q2 | QKind::Degenerate if p.len() == 3 => Some([p[0], p[1], p[2]]),
        QKind::Constant if p.len() == 1 => Some([0.0, 0.0, p[0]]),
        _ => None,
    }
}

fn a_equals_b(sys: &ReducedSystem) -> bool {
    match (&sys.params, sys.kind) {
        (Params::Exact(v), QKind::Q2 | QKind::Degenerate) => v.len() == 3 && v[0] == v[1],
        _ => diagonal(sys).is_some_and(|[a, b, _]| a == b),
    }
}

/// Largest `|F(t) - F(0)|` of the elliptic invariant along `traj`, which
/// must be in normal-form coordinates.
pub fn invariant_monitor(sys: &ReducedSystem, traj: &[State]) -> Result<f64, DynamicsError> {
    let Some([a, _, c]) = diagonal(sys).filter(|_| a_equals_b(sys)) else {
        return Err(DynamicsError::Precondition(format!(
            "the elliptic invariant needs a x² + a y² + c, got {sys}"
        )));
    };
    let f = EllipticInvariant::new(a, c);
    let eval = |s: &State| {
        f.eval(s.x, s.y, s.z)
            .map_err(|_| DynamicsError::Singular { t: s.t })
    };
    let Some(first) = traj.first() else {
        return Ok(0.0);
    };
    let f0 = eval(first)?;
    traj.iter()
        .try_fold(0.0f64, |m, s| Ok(m.max((eval(s)? - f0).abs())))
}

/// How `z''` is obtained in [`pendulum_residual`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZSecond {
    /// `Q_x cos z + Q_y sin z`.
    Analytic,
    /// Central second difference of re-integrated `z` with step `h`.
    FiniteDifference { h: f64, cfg: IntegratorConfig },
}

/// Largest `|z'' - b sin z - 2 a x cos z|` over `traj` for a Q1 system.
/// With `x(0) = 0`, `x` is the antiderivative of `cos z`, which turns the
/// third equation into a driven pendulum.
pub fn pendulum_residual(
    sys: &ReducedSystem,
    traj: &[State],
    mode: ZSecond,
) -> Result<f64, DynamicsError> {
    if sys.kind != QKind::Q1 {
        return Err(DynamicsError::Precondition(format!(
            "pendulum form needs Q1, got {}",
            sys.kind
        )));
    }
    let Some(first) = traj.first() else {
        return Ok(0.0);
    };
    if first.x.abs() > 1e-12 {
        return Err(DynamicsError::Precondition(format!(
            "pendulum form needs x(0) = 0, got {}",
            first.x
        )));
    }
    let p = sys.params.as_f64();
    let (a, b) = (p[0], p[1]);
    let pendulum = |s: &State| b * s.z.sin() + 2.0 * a * s.x * s.z.cos();
    let flow = Flow::from_reduced(sys);
    let mut worst = 0.0f64;
    for s in traj {
        let zpp = match mode {
            ZSecond::Analytic => (2.0 * a * s.x) * s.z.cos() + b * s.z.sin(),
            ZSecond::FiniteDifference { h, cfg } => {
                let fwd = integrate_sampled(&flow, s, &[s.t + h], &cfg).map_err(|f| f.error)?;
                let bwd = integrate_sampled(&flow, s, &[s.t - h], &cfg).map_err(|f| f.error)?;
                ((fwd[0].z - s.z) - (s.z - bwd[0].z)) / (h * h)
            }
        };
        worst = worst.max((zpp - pendulum(s)).abs());
    }
    Ok(worst)
}
