//! Poincaré sections. Crossings are bracketed by a sign change over an
//! accepted step and refined by bisection on a fresh Cash-Karp step from
//! the step's start, which serves as dense output.
//!
//! A section on `z` is taken modulo `2π`, as `z` is an angle: every level
//! `level + 2πn` counts.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::rk::{ck_step, Step, Stepper};
use super::{wrap_angle, DynamicsError, Flow, IntegratorConfig, State, SECTION_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coordinate {
    X,
    Y,
    Z,
}

impl Coordinate {
    fn index(self) -> usize {
        match self {
            Coordinate::X => 0,
            Coordinate::Y => 1,
            Coordinate::Z => 2,
        }
    }

    pub fn name(self) -> &'static str {
        ["x", "y", "z"][self.index()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Increasing,
    Decreasing,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectionSpec {
    pub coordinate: Coordinate,
    pub level: f64,
    pub direction: Direction,
    pub count: usize,
}

impl SectionSpec {
    pub fn new(coordinate: Coordinate, level: f64, direction: Direction, count: usize) -> Self {
        SectionSpec {
            coordinate,
            level,
            direction,
            count,
        }
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        if self.count == 0 || !self.level.is_finite() {
            return Err(DynamicsError::Precondition(
                "section needs count >= 1 and a finite level".into(),
            ));
        }
        Ok(())
    }

    /// Column names of the section plane.
    pub fn axes(&self) -> [&'static str; 2] {
        match self.coordinate {
            Coordinate::Z => ["x", "y"],
            Coordinate::X => ["z", "y"],
            Coordinate::Y => ["x", "z"],
        }
    }

    /// A point of the section plane; angles are reported in `(-π, π]`.
    pub fn project(&self, s: &State) -> [f64; 2] {
        match self.coordinate {
            Coordinate::Z => [s.x, s.y],
            Coordinate::X => [wrap_angle(s.z), s.y],
            Coordinate::Y => [s.x, wrap_angle(s.z)],
        }
    }

    /// Section levels crossed between `a` and `b`, in the order met.
    fn targets(&self, a: f64, b: f64) -> Vec<f64> {
        let inc = self.direction == Direction::Increasing;
        if self.coordinate != Coordinate::Z {
            let (ga, gb) = (a - self.level, b - self.level);
            let hit = if inc {
                ga < 0.0 && gb >= 0.0
            } else {
                ga > 0.0 && gb <= 0.0
            };
            return if hit { vec![self.level] } else { Vec::new() };
        }
        let (ua, ub) = ((a - self.level) / TAU, (b - self.level) / TAU);
        let lv = |n: f64| self.level + TAU * n;
        if inc && ub > ua {
            // integers n with ua < n <= ub
            let (lo, hi) = (ua.floor() as i64 + 1, ub.floor() as i64);
            (lo..=hi).map(|n| lv(n as f64)).collect()
        } else if !inc && ub < ua {
            // integers n with ub <= n < ua, met from the top
            let (lo, hi) = (ub.ceil() as i64, ua.ceil() as i64 - 1);
            (lo..=hi).rev().map(|n| lv(n as f64)).collect()
        } else {
            Vec::new()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Section {
    pub spec: SectionSpec,
    pub points: Vec<State>,
    /// Fewer than `spec.count` points were produced.
    pub truncated: bool,
    pub flags: Vec<String>,
    pub failure: Option<DynamicsError>,
    pub attempts: u64,
    /// Time reached by the integration.
    pub t_final: f64,
}

/// Locates the crossing of `target` inside an accepted step.
fn refine(flow: &Flow, step: &Step, idx: usize, target: f64) -> ([f64; 3], f64, f64) {
    let g = |tau: f64| {
        let y = if tau == step.h {
            step.next
        } else {
            ck_step(flow, &step.prev.y, &step.k1, tau).0
        };
        (y, y[idx] - target)
    };
    let (mut lo, mut hi) = (0.0, step.h);
    let g_lo = step.prev.y[idx] - target;
    let (mut best_y, mut best_g) = g(hi);
    let mut best_tau = hi;
    for _ in 0..200 {
        if best_g.abs() < SECTION_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let (y, gm) = g(mid);
        if gm.abs() < best_g.abs() {
            (best_y, best_g, best_tau) = (y, gm, mid);
        }
        if (gm < 0.0) == (g_lo < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (best_y, best_tau, best_g)
}

/// Runs until `spec.count` crossings are found or the integration stops.
/// Only precondition violations are errors; integrator failures truncate
/// the section and are recorded in it.
pub fn poincare_section(
    flow: &Flow,
    ic: &State,
    spec: &SectionSpec,
    cfg: &IntegratorConfig,
) -> Result<Section, DynamicsError> {
    poincare_section_until(flow, ic, spec, cfg, f64::INFINITY)
}

/// As [`poincare_section`], but also stops at time `t_max`, e.g. to show
/// the stretch of orbit behind another section on a second surface.
pub fn poincare_section_until(
    flow: &Flow,
    ic: &State,
    spec: &SectionSpec,
    cfg: &IntegratorConfig,
    t_max: f64,
) -> Result<Section, DynamicsError> {
    spec.validate()?;
    if t_max.is_nan() || t_max < ic.t {
        return Err(DynamicsError::Precondition(
            "t_max precedes the initial time".into(),
        ));
    }
    let mut st = Stepper::new(flow, cfg, ic, 1.0)?;
    let idx = spec.coordinate.index();
    let want_pos = spec.direction == Direction::Increasing;
    let mut points = Vec::with_capacity(spec.count.min(1 << 20));
    let (mut grazing, mut loose) = (0usize, 0usize);
    let mut failure = None;
    while points.len() < spec.count && st.cur.t < t_max {
        let step = match st.step(t_max) {
            Ok(s) => s,
            Err(e) => {
                failure = Some(e);
                break;
            }
        };
        for target in spec.targets(step.prev.y[idx], step.next[idx]) {
            let (y, tau, gap) = refine(flow, &step, idx, target);
            if gap.abs() >= SECTION_TOL {
                loose += 1;
            }
            let d = flow.rhs(&y)[idx];
            if (d > 0.0) != want_pos || d == 0.0 {
                grazing += 1;
                continue;
            }
            points.push(step.prev.state_in_frame(step.prev.t + tau, &y));
            if points.len() == spec.count {
                break;
            }
        }
    }
    let mut flags = Vec::new();
    if points.is_empty() {
        flags.push("no crossings".to_string());
    }
    if grazing > 0 {
        flags.push(format!("{grazing} grazing crossings skipped"));
    }
    if loose > 0 {
        flags.push(format!(
            "{loose} crossings refined only to machine resolution"
        ));
    }
    if let Some(e) = &failure {
        flags.push(format!("integration stopped: {e}"));
    } else if points.len() < spec.count {
        flags.push(format!("time limit {t_max} reached"));
    }
    Ok(Section {
        spec: *spec,
        truncated: points.len() < spec.count,
        points,
        flags,
        failure,
        attempts: st.attempts,
        t_final: st.cur.t,
    })
}

/// Independent sections for several initial conditions, in parallel.
pub fn poincare_many(
    flow: &Flow,
    ics: &[State],
    spec: &SectionSpec,
    cfg: &IntegratorConfig,
) -> Vec<Result<Section, DynamicsError>> {
    ics.par_iter()
        .map(|ic| poincare_section(flow, ic, spec, cfg))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn targets_modulo_two_pi() {
        let s = SectionSpec::new(Coordinate::Z, 0.0, Direction::Increasing, 1);
        assert_eq!(s.targets(-0.1, 0.1), vec![0.0]);
        assert_eq!(s.targets(0.0, 0.1), Vec::<f64>::new());
        assert_eq!(s.targets(-0.1, 2.0 * TAU), vec![0.0, TAU, 2.0 * TAU]);
        assert!(s.targets(0.1, -0.1).is_empty());
        let d = SectionSpec::new(Coordinate::Z, 1.0, Direction::Decreasing, 1);
        assert_eq!(d.targets(1.1, 0.9), vec![1.0]);
        assert_eq!(d.targets(1.0 + TAU + 0.1, 0.9), vec![1.0 + TAU, 1.0]);
        let x = SectionSpec::new(Coordinate::X, 2.0, Direction::Decreasing, 1);
        assert_eq!(x.targets(2.5, 2.0), vec![2.0]);
        assert!(x.targets(1.5, 2.5).is_empty());
        assert_eq!(x.project(&State::new(0.0, 2.0, 3.0, 3.0 * PI)), [PI, 3.0]);
    }

    #[test]
    fn circle_returns_each_period() {
        let f = Flow::constant(1.0);
        let spec = SectionSpec::new(Coordinate::X, 0.0, Direction::Increasing, 10);
        let sec = poincare_section(
            &f,
            &State::new(0.0, 0.0, 0.0, 0.0),
            &spec,
            &Default::default(),
        )
        .unwrap();
        assert!(!sec.truncated && sec.flags.is_empty());
        for (k, p) in sec.points.iter().enumerate() {
            assert!((p.t - TAU * (k + 1) as f64).abs() < 1e-9, "{p:?}");
            assert!(p.x.abs() < SECTION_TOL && p.z.cos() > 0.0);
        }
        let zs = SectionSpec::new(Coordinate::Z, 0.0, Direction::Increasing, 3);
        let sec = poincare_section(
            &f,
            &State::new(0.0, 0.0, 0.0, 0.0),
            &zs,
            &Default::default(),
        )
        .unwrap();
        assert!((sec.points[2].t - 3.0 * TAU).abs() < 1e-9);
    }

    #[test]
    fn no_crossings_is_flagged() {
        let f = Flow::constant(0.0);
        let spec = SectionSpec::new(Coordinate::Z, 0.0, Direction::Increasing, 1);
        let cfg = IntegratorConfig {
            max_steps: 1000,
            ..Default::default()
        };
        let sec = poincare_section(&f, &State::new(0.0, 0.0, 0.0, 1.0), &spec, &cfg).unwrap();
        assert!(sec.truncated && sec.points.is_empty());
        assert!(matches!(sec.failure, Some(DynamicsError::MaxSteps { .. })));
        assert!(sec.flags.iter().any(|f| f == "no crossings"));
        let five = SectionSpec { count: 5, ..spec };
        let until = poincare_section_until(
            &Flow::constant(1.0),
            &State::new(0.0, 0.0, 0.0, 0.0),
            &five,
            &cfg,
            20.0,
        )
        .unwrap();
        assert_eq!(until.points.len(), 3);
        assert!(until.truncated && until.failure.is_none() && until.t_final == 20.0);
        let bad = SectionSpec { count: 0, ..spec };
        assert!(poincare_section(&f, &State::new(0.0, 0.0, 0.0, 1.0), &bad, &cfg).is_err());
    }
}
