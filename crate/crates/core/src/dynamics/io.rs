//! CSV output with 17 significant digits and the run metadata record.

use std::io::{self, Write};

use serde::Serialize;

use super::{IntegratorConfig, Section, SectionSpec, State};

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Header `t,x,y,z`, one row per state.
pub fn write_trajectory_csv<W: Write>(mut w: W, states: &[State]) -> io::Result<()> {
    writeln!(w, "t,x,y,z")?;
    for s in states {
        writeln!(w, "{},{},{},{}", num(s.t), num(s.x), num(s.y), num(s.z))?;
    }
    Ok(())
}

/// Two columns named after the section plane.
pub fn write_section_csv<W: Write>(mut w: W, section: &Section) -> io::Result<()> {
    let [a, b] = section.spec.axes();
    writeln!(w, "{a},{b}")?;
    for p in &section.points {
        let [u, v] = section.spec.project(p);
        writeln!(w, "{},{}", num(u), num(v))?;
    }
    Ok(())
}

/// Sidecar describing a numerical run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunMetadata {
    pub system: String,
    pub kind: String,
    pub params: Vec<f64>,
    pub initial_conditions: Vec<State>,
    pub t_end: Option<f64>,
    pub section: Option<SectionSpec>,
    pub config: IntegratorConfig,
    /// Points written per initial condition.
    pub counts: Vec<usize>,
    pub flags: Vec<String>,
    pub notes: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{Coordinate, Direction};

    #[test]
    fn formats() {
        let mut buf = Vec::new();
        write_trajectory_csv(&mut buf, &[State::new(0.0, 1.0 / 3.0, -2.0, 1e-20)]).unwrap();
        let s = String::from_utf8(buf).unwrap();
        let mut lines = s.lines();
        assert_eq!(lines.next(), Some("t,x,y,z"));
        let row: Vec<f64> = lines
            .next()
            .unwrap()
            .split(',')
            .map(|v| v.parse().unwrap())
            .collect();
        assert_eq!(row, vec![0.0, 1.0 / 3.0, -2.0, 1e-20]);

        let spec = SectionSpec::new(Coordinate::X, 0.0, Direction::Increasing, 1);
        let sec = Section {
            spec,
            points: vec![State::new(1.0, 0.0, 2.0, 0.5)],
            truncated: false,
            flags: vec![],
            failure: None,
            attempts: 1,
            t_final: 1.0,
        };
        let mut buf = Vec::new();
        write_section_csv(&mut buf, &sec).unwrap();
        assert!(String::from_utf8(buf)
            .unwrap()
            .starts_with("z,y\n5.0000000000000000e-1,2.0"));
    }
}
