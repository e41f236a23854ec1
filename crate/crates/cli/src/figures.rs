//! Parameter sets of the numerical figures. Where initial data are not
//! stated, `z(0) = 0` is used; the figure-3 orbits start on a grid of
//! `y` values around the regular and the unstable points named in the
//! text. Chaos is not asserted; the portraits are for visual comparison.

use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use srint::dynamics::{
    integrate, poincare_section_until, Coordinate, Direction, Flow, IntegratorConfig, Section,
    SectionSpec, State,
};
use srint::reduce::{QKind, ReducedSystem};

use crate::args::FigureArgs;
use crate::commands::{run_sections, write_sections, write_trajectory};
use crate::report::{tool_version, write_json, CliError, CliResult, Exit};

#[derive(Serialize)]
struct Entry {
    file: String,
    q: String,
    initial_conditions: Vec<State>,
    section: Option<SectionSpec>,
    t_end: Option<f64>,
    points: Vec<usize>,
    flags: Vec<String>,
}

#[derive(Serialize)]
struct FigureReport {
    figure: u8,
    quick: bool,
    config: IntegratorConfig,
    entries: Vec<Entry>,
    notes: Vec<&'static str>,
    elapsed_s: f64,
    tool_version: String,
}

fn ic(x: f64, y: f64, z: f64) -> State {
    State::new(0.0, x, y, z)
}

/// Extra curve drawn over the section points.
type Overlay<'a> = &'a dyn Fn(&[Section]) -> Vec<[f64; 2]>;

struct Ctx<'a> {
    dir: &'a Path,
    scale: usize,
    cfg: IntegratorConfig,
    entries: Vec<Entry>,
    failed: bool,
}

impl Ctx<'_> {
    fn count(&self, n: usize) -> usize {
        (n / self.scale).max(1)
    }

    fn trajectory(
        &mut self,
        name: &str,
        q: (QKind, &[f64]),
        start: State,
        t_end: f64,
    ) -> Result<(), CliError> {
        let sys = ReducedSystem::from_normal_form(q.0, q.1);
        let flow = Flow::from_reduced(&sys);
        let (states, flag) = match integrate(&flow, &start, t_end / self.scale as f64, &self.cfg) {
            Ok(t) => (t.states, None),
            Err(f) => (f.partial, Some(f.error.to_string())),
        };
        self.failed |= flag.is_some();
        let csv = self.dir.join(format!("{name}.csv"));
        write_trajectory(
            &states,
            &flow,
            Some(&csv),
            Some((0.0, 1.0)),
            Some(&self.dir.join(format!("{name}.svg"))),
        )?;
        self.entries.push(Entry {
            file: format!("{name}.csv"),
            q: format!("{} {:?}", q.0, q.1),
            initial_conditions: vec![start],
            section: None,
            t_end: Some(t_end / self.scale as f64),
            points: vec![states.len()],
            flags: flag.into_iter().collect(),
        });
        Ok(())
    }

    fn sections(
        &mut self,
        name: &str,
        q: (QKind, &[f64]),
        starts: Vec<State>,
        spec: SectionSpec,
        overlay: Option<Overlay>,
    ) -> Result<f64, CliError> {
        let sys = ReducedSystem::from_normal_form(q.0, q.1);
        let secs = run_sections(&sys, &starts, &spec, &self.cfg)?;
        self.record(name, q, starts, spec, secs, overlay)
    }

    fn sections_until(
        &mut self,
        name: &str,
        q: (QKind, &[f64]),
        start: State,
        spec: SectionSpec,
        t_max: f64,
    ) -> Result<f64, CliError> {
        let flow = Flow::from_reduced(&ReducedSystem::from_normal_form(q.0, q.1));
        let sec = poincare_section_until(&flow, &start, &spec, &self.cfg, t_max)
            .map_err(|e| CliError::input(e.to_string()))?;
        let mut sec = sec;
        // reaching the time limit is the intended stop here
        sec.flags.retain(|f| !f.starts_with("time limit"));
        self.record(name, q, vec![start], spec, vec![sec], None)
    }

    /// Writes the data and returns the latest time reached.
    fn record(
        &mut self,
        name: &str,
        q: (QKind, &[f64]),
        starts: Vec<State>,
        spec: SectionSpec,
        secs: Vec<Section>,
        overlay: Option<Overlay>,
    ) -> Result<f64, CliError> {
        let overlay = overlay.map(|f| (f(&secs), "#d62728"));
        let csv = self.dir.join(format!("{name}.csv"));
        write_sections(
            &secs,
            Some(&csv),
            Some(&self.dir.join(format!("{name}.svg"))),
            overlay,
        )?;
        self.failed |= secs.iter().any(|s| s.failure.is_some());
        self.entries.push(Entry {
            file: format!("{name}.csv"),
            q: format!("{} {:?}", q.0, q.1),
            initial_conditions: starts,
            section: Some(spec),
            t_end: None,
            points: secs.iter().map(|s| s.points.len()).collect(),
            flags: secs.iter().flat_map(|s| s.flags.clone()).collect(),
        });
        Ok(secs.iter().map(|s| s.t_final).fold(0.0, f64::max))
    }
}

/// The curve `Q1 = a x² + b y = 0` over the x-range of the data.
fn q1_zero_curve(a: f64, b: f64, secs: &[Section]) -> Vec<[f64; 2]> {
    let xs = secs.iter().flat_map(|s| s.points.iter().map(|p| p.x));
    let (lo, hi) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), x| {
        (l.min(x), h.max(x))
    });
    if !lo.is_finite() || b == 0.0 {
        return Vec::new();
    }
    (0..=400)
        .map(|i| lo + (hi - lo) * i as f64 / 400.0)
        .map(|x| [x, -a * x * x / b])
        .collect()
}

pub fn figure(a: &FigureArgs) -> CliResult {
    let start = Instant::now();
    std::fs::create_dir_all(&a.out_dir).map_err(|e| CliError::io(&a.out_dir, e))?;
    let mut cx = Ctx {
        dir: &a.out_dir,
        scale: if a.quick { 20 } else { 1 },
        cfg: IntegratorConfig::default(),
        entries: Vec::new(),
        failed: false,
    };
    let z_up = |n| SectionSpec::new(Coordinate::Z, 0.0, Direction::Increasing, n);
    let mut notes = vec!["z(0) = 0 where the initial angle is not stated"];
    match a.number {
        1 => {
            cx.trajectory(
                "fig1_left",
                (QKind::Q1, &[10.0, -0.1]),
                ic(0.0, -5.0, 0.0),
                1000.0,
            )?;
            cx.trajectory(
                "fig1_middle",
                (QKind::Q1, &[10.0, -1.0]),
                ic(0.0, -5.0, 0.0),
                1000.0,
            )?;
            cx.trajectory(
                "fig1_right",
                (QKind::Q1, &[10.0, 1.0]),
                ic(0.0, 0.0, 0.0),
                1000.0,
            )?;
            notes.push("the portraits plot (z, z'); the window 0 <= t <= 1 is written to *.window.csv and drawn in red");
        }
        2 => {
            let n = cx.count(100_000);
            let curve = |secs: &[Section]| q1_zero_curve(10.0, -0.1, secs);
            cx.sections(
                "fig2",
                (QKind::Q1, &[10.0, -0.1]),
                vec![ic(0.0, 0.0, 0.0)],
                z_up(n),
                Some(&curve),
            )?;
            notes.push("the red curve is Q1 = 0, the boundary of the section");
        }
        3 => {
            let n = cx.count(400);
            let x_up = SectionSpec::new(Coordinate::X, 0.0, Direction::Increasing, n);
            let irregular = SectionSpec {
                count: cx.count(4000),
                ..x_up
            };
            cx.cfg.max_steps = 20_000_000;
            for (name, b, sign) in [("fig3_left", -0.1, 1.0), ("fig3_right", 0.1, -1.0)] {
                let regular: Vec<State> = (0..9)
                    .map(|i| ic(0.0, sign * (12.0 + 2.0 * i as f64), 0.0))
                    .collect();
                cx.sections(
                    &format!("{name}_regular"),
                    (QKind::Q1, &[10.0, b]),
                    regular,
                    x_up,
                    None,
                )?;
                cx.sections(
                    &format!("{name}_irregular"),
                    (QKind::Q1, &[10.0, b]),
                    vec![ic(0.0, sign * 30.0, 0.0)],
                    irregular,
                    None,
                )?;
            }
            notes.push(
                "regular orbits start at y = ±12..±28, irregular at y = ±30, all with x = z = 0",
            );
        }
        4 => {
            let starts = [
                (0.1, 0.0),
                (0.3, 0.0),
                (0.6, 0.0),
                (0.9, 0.0),
                (1.2, 0.0),
                (0.0, 0.5),
                (0.0, 1.0),
            ]
            .into_iter()
            .map(|(x, y)| ic(x, y, 0.0))
            .collect();
            let n = cx.count(2000);
            cx.sections("fig4", (QKind::Q2, &[2.0, 1.0, 0.0]), starts, z_up(n), None)?;
            notes.push("initial conditions are not stated; seven orbits on the axes are used");
        }
        5 => {
            let n = cx.count(10_000);
            let q: &[f64] = &[-1000.0, 10000.0, 0.0];
            let t_end = cx.sections(
                "fig5_z",
                (QKind::Q2, q),
                vec![ic(0.0, 0.0, 0.0)],
                z_up(n),
                None,
            )?;
            // the same stretch of orbit on the second surface
            let y_up = SectionSpec::new(Coordinate::Y, 0.0, Direction::Increasing, usize::MAX);
            cx.sections_until("fig5_y", (QKind::Q2, q), ic(0.0, 0.0, 0.0), y_up, t_end)?;
            notes.push("the y = 0 section covers the time span of the 10^4 z = 0 crossings");
        }
        _ => unreachable!("clap restricts the figure number"),
    }
    let code = if cx.failed { Exit::Numeric } else { Exit::Ok };
    let rep = FigureReport {
        figure: a.number,
        quick: a.quick,
        config: cx.cfg,
        entries: cx.entries,
        notes,
        elapsed_s: start.elapsed().as_secs_f64(),
        tool_version: tool_version(),
    };
    write_json(&a.out_dir.join(format!("fig{}.json", a.number)), &rep)?;
    for e in &rep.entries {
        println!(
            "{}: {:?} points{}",
            e.file,
            e.points,
            if e.flags.is_empty() {
                String::new()
            } else {
                format!(" ({})", e.flags.join("; "))
            }
        );
    }
    Ok(code)
}
