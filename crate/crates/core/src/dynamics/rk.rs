//! Cash-Karp stepping and the fixed-end / sampled drivers.

use std::f64::consts::{PI, TAU};

use super::{DynamicsError, Failure, Flow, IntegratorConfig, State};

const A2: f64 = 1.0 / 5.0;
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [3.0 / 10.0, -9.0 / 10.0, 6.0 / 5.0];
const A5: [f64; 4] = [-11.0 / 54.0, 5.0 / 2.0, -70.0 / 27.0, 35.0 / 27.0];
const A6: [f64; 5] = [
    1631.0 / 55296.0,
    175.0 / 512.0,
    575.0 / 13824.0,
    44275.0 / 110592.0,
    253.0 / 4096.0,
];
const B5: [f64; 6] = [
    37.0 / 378.0,
    0.0,
    250.0 / 621.0,
    125.0 / 594.0,
    0.0,
    512.0 / 1771.0,
];
const B4: [f64; 6] = [
    2825.0 / 27648.0,
    0.0,
    18575.0 / 48384.0,
    13525.0 / 55296.0,
    277.0 / 14336.0,
    1.0 / 4.0,
];

fn comb(y: &[f64; 3], h: f64, ks: &[[f64; 3]], w: &[f64]) -> [f64; 3] {
    let mut out = *y;
    for (k, &c) in ks.iter().zip(w) {
        for i in 0..3 {
            out[i] += h * c * k[i];
        }
    }
    out
}

/// One Cash-Karp step of size `h` from `y` with `k1 = f(y)`. Returns the
/// fifth-order solution and the embedded error estimate.
pub(crate) fn ck_step(flow: &Flow, y: &[f64; 3], k1: &[f64; 3], h: f64) -> ([f64; 3], [f64; 3]) {
    let k2 = flow.rhs(&comb(y, h, &[*k1], &[A2]));
    let k3 = flow.rhs(&comb(y, h, &[*k1, k2], &A3));
    let k4 = flow.rhs(&comb(y, h, &[*k1, k2, k3], &A4));
    let k5 = flow.rhs(&comb(y, h, &[*k1, k2, k3, k4], &A5));
    let k6 = flow.rhs(&comb(y, h, &[*k1, k2, k3, k4, k5], &A6));
    let ks = [*k1, k2, k3, k4, k5, k6];
    let y5 = comb(y, h, &ks, &B5);
    let mut err = [0.0; 3];
    for (j, k) in ks.iter().enumerate() {
        for i in 0..3 {
            err[i] += h * (B5[j] - B4[j]) * k[i];
        }
    }
    (y5, err)
}

/// A point with `z` wrapped into `[-π, π)` and its winding count.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Local {
    pub t: f64,
    pub y: [f64; 3],
    pub winds: i64,
}

impl Local {
    pub fn from_state(s: &State) -> Self {
        let mut l = Local {
            t: s.t,
            y: [s.x, s.y, s.z],
            winds: 0,
        };
        l.wrap();
        l
    }

    pub fn wrap(&mut self) {
        if self.y[2] >= PI || self.y[2] < -PI {
            let k = ((self.y[2] + PI) / TAU).floor();
            self.y[2] -= TAU * k;
            self.winds += k as i64;
        }
    }

    /// State for a point `y` expressed in this point's winding frame.
    pub fn state_in_frame(&self, t: f64, y: &[f64; 3]) -> State {
        State::new(t, y[0], y[1], y[2] + TAU * self.winds as f64)
    }

    pub fn state(&self) -> State {
        self.state_in_frame(self.t, &self.y)
    }
}

/// An accepted step: the start point, the end point in the start's frame,
/// and the derivative at the start.
pub(crate) struct Step {
    pub prev: Local,
    pub k1: [f64; 3],
    pub h: f64,
    pub next: [f64; 3],
}

pub(crate) struct Stepper<'a> {
    flow: &'a Flow,
    cfg: IntegratorConfig,
    pub cur: Local,
    h: f64,
    dir: f64,
    pub attempts: u64,
}

impl<'a> Stepper<'a> {
    pub fn new(
        flow: &'a Flow,
        cfg: &IntegratorConfig,
        ic: &State,
        dir: f64,
    ) -> Result<Self, DynamicsError> {
        cfg.validate()?;
        if !ic.is_finite() {
            return Err(DynamicsError::Precondition(
                "initial state is not finite".into(),
            ));
        }
        Ok(Stepper {
            flow,
            cfg: *cfg,
            cur: Local::from_state(ic),
            h: cfg.h_init,
            dir,
            attempts: 0,
        })
    }

    /// Takes one accepted step, landing exactly on `t_limit` if it is
    /// within reach.
    pub fn step(&mut self, t_limit: f64) -> Result<Step, DynamicsError> {
        let k1 = self.flow.rhs(&self.cur.y);
        loop {
            if self.attempts >= self.cfg.max_steps {
                return Err(DynamicsError::MaxSteps {
                    max_steps: self.cfg.max_steps,
                    last: self.cur.state(),
                });
            }
            self.attempts += 1;
            let remaining = (t_limit - self.cur.t) * self.dir;
            let mut h = self.h.min(self.cfg.h_max);
            let clipped = h >= remaining;
            if clipped {
                h = remaining;
            }
            let hs = h * self.dir;
            let (y5, e) = ck_step(self.flow, &self.cur.y, &k1, hs);
            if !y5.iter().all(|v| v.is_finite()) {
                return Err(DynamicsError::NonFinite {
                    last: self.cur.state(),
                });
            }
            let err = (0..3)
                .map(|i| {
                    let scale =
                        self.cfg.abs_tol + self.cfg.rel_tol * self.cur.y[i].abs().max(y5[i].abs());
                    e[i].abs() / scale
                })
                .fold(0.0, f64::max);
            if err <= 1.0 {
                let fac = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                };
                let grown = (h * fac).min(self.cfg.h_max);
                // a step shortened to hit t_limit says nothing against the old size
                self.h = if clipped { self.h.max(grown) } else { grown };
                let prev = self.cur;
                let t = if clipped { t_limit } else { prev.t + hs };
                self.cur = Local {
                    t,
                    y: y5,
                    winds: prev.winds,
                };
                self.cur.wrap();
                return Ok(Step {
                    prev,
                    k1,
                    h: hs,
                    next: y5,
                });
            }
            self.h = h * (0.9 * err.powf(-0.25)).max(0.1);
            if self.h < 4.0 * f64::EPSILON * self.cur.t.abs().max(1.0) {
                return Err(DynamicsError::StepUnderflow {
                    last: self.cur.state(),
                });
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// The initial state followed by every accepted step.
    pub states: Vec<State>,
    pub attempts: u64,
}

fn direction(t0: f64, t1: f64) -> f64 {
    if t1 >= t0 {
        1.0
    } else {
        -1.0
    }
}

/// Integrates from `ic` to `t_end` (forwards or backwards), recording
/// every accepted step.
pub fn integrate(
    flow: &Flow,
    ic: &State,
    t_end: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory, Failure> {
    if !t_end.is_finite() {
        return Err(DynamicsError::Precondition("t_end is not finite".into()).into());
    }
    let mut st = Stepper::new(flow, cfg, ic, direction(ic.t, t_end))?;
    let mut states = vec![*ic];
    while st.cur.t != t_end {
        match st.step(t_end) {
            Ok(_) => states.push(st.cur.state()),
            Err(error) => {
                return Err(Failure {
                    error,
                    partial: states,
                })
            }
        }
    }
    Ok(Trajectory {
        states,
        attempts: st.attempts,
    })
}

/// States at the given times, which must be monotone away from `ic.t`.
pub fn integrate_sampled(
    flow: &Flow,
    ic: &State,
    times: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Vec<State>, Failure> {
    let Some(&last) = times.last() else {
        return Ok(Vec::new());
    };
    let dir = direction(ic.t, last);
    let mut prev = ic.t;
    for &t in times {
        if !t.is_finite() || (t - prev) * dir < 0.0 {
            return Err(DynamicsError::Precondition(
                "sample times must be finite and monotone".into(),
            )
            .into());
        }
        prev = t;
    }
    let mut st = Stepper::new(flow, cfg, ic, dir)?;
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        while st.cur.t != t {
            if let Err(error) = st.step(t) {
                return Err(Failure {
                    error,
                    partial: out,
                });
            }
        }
        out.push(st.cur.state());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_3;

    #[test]
    fn straight_line_for_zero_q() {
        let f = Flow::constant(0.0);
        let tr = integrate(
            &f,
            &State::new(0.0, 0.0, 0.0, FRAC_PI_3),
            10.0,
            &Default::default(),
        )
        .unwrap();
        let s = tr.states.last().unwrap();
        assert_eq!(s.t, 10.0);
        assert!((s.x - 10.0 * FRAC_PI_3.cos()).abs() < 1e-12);
        assert!((s.y - 10.0 * FRAC_PI_3.sin()).abs() < 1e-12);
        assert!((s.z - FRAC_PI_3).abs() < 1e-15);
        assert!(tr.states.windows(2).all(|w| w[1].t > w[0].t));
    }

    #[test]
    fn unit_circle_for_unit_q() {
        let f = Flow::constant(1.0);
        let times: Vec<f64> = (1..=50).map(|i| i as f64 * 0.7).collect();
        let out = integrate_sampled(
            &f,
            &State::new(0.0, 0.0, 0.0, 0.0),
            &times,
            &Default::default(),
        )
        .unwrap();
        for s in out {
            assert!((s.x - s.t.sin()).abs() < 1e-10);
            assert!((s.y - (1.0 - s.t.cos())).abs() < 1e-10);
            assert!((s.z - s.t).abs() < 1e-12);
        }
    }

    #[test]
    fn backwards_and_limits() {
        let f = Flow::new("q", |x, y| x * x + y * y);
        let ic = State::new(0.0, 1.0, 0.0, 0.0);
        let fw = integrate(&f, &ic, 3.0, &Default::default()).unwrap();
        let end = *fw.states.last().unwrap();
        let bw = integrate(&f, &end, 0.0, &Default::default()).unwrap();
        let back = bw.states.last().unwrap();
        assert!((back.x - 1.0).abs() < 1e-8 && back.y.abs() < 1e-8 && back.z.abs() < 1e-8);

        let cfg = IntegratorConfig {
            max_steps: 5,
            ..Default::default()
        };
        let err = integrate(&f, &ic, 3.0, &cfg).unwrap_err();
        assert!(matches!(err.error, DynamicsError::MaxSteps { .. }));
        assert!(!err.partial.is_empty());

        let blow = Flow::new("blow", |x, _| 1e300 * x.exp());
        assert!(integrate(
            &blow,
            &State::new(0.0, 800.0, 0.0, 0.0),
            1.0,
            &Default::default()
        )
        .is_err());
    }
}
