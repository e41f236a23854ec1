//! Numerical flow of the reduced system
//! `x' = cos z, y' = sin z, z' = Q(x, y)`.
//!
//! Integration uses the embedded Cash-Karp 4(5) pair with local
//! extrapolation. Internally `z` is kept in `[-π, π)` with a separate
//! winding count, so that section tests on `z` keep full precision over
//! long runs. Reported states carry the unwrapped angle.
//!
//! All flows are written in the normal-form coordinates of a
//! [`ReducedSystem`]; [`AffineMap::to_original`](crate::reduce::AffineMap::to_original)
//! maps states back.

mod diagnostics;
mod io;
mod rk;
mod section;

use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::reduce::ReducedSystem;

pub use diagnostics::{accuracy_check, invariant_monitor, pendulum_residual, ZSecond};
pub use io::{write_section_csv, write_trajectory_csv, RunMetadata};
pub use rk::{integrate, integrate_sampled, Trajectory};
pub use section::{
    poincare_many, poincare_section, poincare_section_until, Coordinate, Direction, Section,
    SectionSpec,
};

/// Bisection target for section crossings, in the section coordinate.
pub const SECTION_TOL: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct State {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl State {
    pub fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        State { t, x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub h_init: f64,
    pub h_max: f64,
    /// Attempted steps, accepted or rejected.
    pub max_steps: u64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            h_init: 1e-3,
            h_max: 0.1,
            max_steps: 500_000_000,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<(), DynamicsError> {
        let pos = |v: f64| v.is_finite() && v > 0.0;
        if !(pos(self.rel_tol) && pos(self.abs_tol) && pos(self.h_init) && pos(self.h_max)) {
            return Err(DynamicsError::Precondition(
                "tolerances and step sizes must be positive and finite".into(),
            ));
        }
        if self.h_init > self.h_max {
            return Err(DynamicsError::Precondition("h_init exceeds h_max".into()));
        }
        if self.max_steps == 0 {
            return Err(DynamicsError::Precondition(
                "max_steps must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Tolerances and step bounds divided by `factor`.
    pub fn tightened(&self, factor: f64) -> Self {
        IntegratorConfig {
            rel_tol: self.rel_tol / factor,
            abs_tol: self.abs_tol / factor,
            h_init: self.h_init / factor,
            h_max: self.h_max / factor,
            max_steps: self.max_steps,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, thiserror::Error)]
pub enum DynamicsError {
    #[error("step limit {max_steps} exceeded at t = {}", last.t)]
    MaxSteps { max_steps: u64, last: State },
    #[error("step size underflow at t = {}", last.t)]
    StepUnderflow { last: State },
    #[error("non-finite state after t = {}", last.t)]
    NonFinite { last: State },
    #[error("invalid input: {0}")]
    Precondition(String),
    #[error("trajectory meets r = 0 at t = {t}")]
    Singular { t: f64 },
}

/// A failed run together with everything computed before the failure.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{error}")]
pub struct Failure {
    pub error: DynamicsError,
    pub partial: Vec<State>,
}

impl From<DynamicsError> for Failure {
    fn from(error: DynamicsError) -> Self {
        Failure {
            error,
            partial: Vec::new(),
        }
    }
}

type QFn = dyn Fn(f64, f64) -> f64 + Send + Sync;

/// The right-hand side `(cos z, sin z, Q(x, y))`.
#[derive(Clone)]
pub struct Flow {
    q: Arc<QFn>,
    label: String,
}

impl fmt::Debug for Flow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Flow").field("label", &self.label).finish()
    }
}

impl Flow {
    pub fn new(
        label: impl Into<String>,
        q: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Flow {
            q: Arc::new(q),
            label: label.into(),
        }
    }

    /// The flow of a reduced system in its normal-form coordinates.
    pub fn from_reduced(sys: &ReducedSystem) -> Self {
        Flow::new(sys.to_string(), sys.q_normal_f64())
    }

    pub fn constant(c: f64) -> Self {
        Flow::new(format!("Q = {c}"), move |_, _| c)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn q(&self, x: f64, y: f64) -> f64 {
        (self.q)(x, y)
    }

    #[inline]
    pub fn rhs(&self, y: &[f64; 3]) -> [f64; 3] {
        let (s, c) = y[2].sin_cos();
        [c, s, (self.q)(y[0], y[1])]
    }

    pub fn rhs_state(&self, s: &State) -> [f64; 3] {
        self.rhs(&[s.x, s.y, s.z])
    }

    /// `ẋ² + ẏ² - 1`, zero up to rounding.
    pub fn speed_defect(&self, s: &State) -> f64 {
        let f = self.rhs_state(s);
        f[0] * f[0] + f[1] * f[1] - 1.0
    }

    /// Trace of the Jacobian by central differences. Each slot of the
    /// right-hand side ignores its own coordinate, so every term vanishes.
    pub fn jacobian_trace(&self, s: &State) -> f64 {
        let h = 1e-6;
        let p = [s.x, s.y, s.z];
        (0..3)
            .map(|i| {
                let (mut a, mut b) = (p, p);
                a[i] += h;
                b[i] -= h;
                (self.rhs(&a)[i] - self.rhs(&b)[i]) / (2.0 * h)
            })
            .sum()
    }
}

/// Angle in `(-π, π]`.
pub fn wrap_angle(z: f64) -> f64 {
    let w = z - TAU * ((z + std::f64::consts::PI) / TAU).floor();
    if w <= -std::f64::consts::PI {
        w + TAU
    } else {
        w
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn speed_and_trace() {
        let f = Flow::new("q", |x, y| 10.0 * x * x - 0.1 * y);
        for s in [
            State::new(0.0, 1.0, -2.0, 0.3),
            State::new(1.0, -5.0, 7.0, 12.0),
        ] {
            assert!(f.speed_defect(&s).abs() < 1e-15);
            assert_eq!(f.jacobian_trace(&s), 0.0);
        }
    }

    #[test]
    fn config_checks() {
        assert!(IntegratorConfig::default().validate().is_ok());
        let bad = IntegratorConfig {
            h_init: 1.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = IntegratorConfig {
            rel_tol: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn wrapping() {
        for z in [0.0, 3.0, -3.0, 7.0, -7.0, 100.0] {
            let w = wrap_angle(z);
            assert!(w > -std::f64::consts::PI && w <= std::f64::consts::PI);
            assert!((w.sin() - z.sin()).abs() < 1e-12 && (w.cos() - z.cos()).abs() < 1e-12);
        }
    }
}
