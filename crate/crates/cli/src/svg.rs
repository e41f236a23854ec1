//! Minimal scatter plots: a fixed 1000 x 1000 canvas, linear axes scaled
//! to the data, one mark per point.

use std::fmt::Write;

const SIZE: f64 = 1000.0;
const MARGIN: f64 = 70.0;
const COLORS: [&str; 8] = [
    "#000000", "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf",
];

pub struct Plot {
    x_label: String,
    y_label: String,
    series: Vec<(Vec<[f64; 2]>, &'static str)>,
    curves: Vec<(Vec<[f64; 2]>, &'static str)>,
}

impl Plot {
    pub fn new(x_label: &str, y_label: &str) -> Self {
        Plot {
            x_label: x_label.into(),
            y_label: y_label.into(),
            series: Vec::new(),
            curves: Vec::new(),
        }
    }

    /// Points drawn as dots; series are coloured in turn.
    pub fn points(mut self, pts: Vec<[f64; 2]>) -> Self {
        let c = COLORS[self.series.len() % COLORS.len()];
        self.series.push((pts, c));
        self
    }

    pub fn points_colored(mut self, pts: Vec<[f64; 2]>, color: &'static str) -> Self {
        self.series.push((pts, color));
        self
    }

    /// A polyline that does not influence the axis ranges.
    pub fn curve(mut self, pts: Vec<[f64; 2]>, color: &'static str) -> Self {
        self.curves.push((pts, color));
        self
    }

    fn range(&self, axis: usize) -> (f64, f64) {
        let vals = self
            .series
            .iter()
            .flat_map(|(p, _)| p.iter().map(move |q| q[axis]))
            .filter(|v| v.is_finite());
        let (lo, hi) = vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
            (a.min(v), b.max(v))
        });
        if !lo.is_finite() {
            return (-1.0, 1.0);
        }
        if hi - lo < 1e-12 * (1.0 + lo.abs()) {
            let pad = 0.5 * (1.0 + lo.abs());
            return (lo - pad, hi + pad);
        }
        let pad = 0.02 * (hi - lo);
        (lo - pad, hi + pad)
    }

    pub fn render(&self) -> String {
        let (x0, x1) = self.range(0);
        let (y0, y1) = self.range(1);
        let span = SIZE - 2.0 * MARGIN;
        let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * span;
        let py = |y: f64| SIZE - MARGIN - (y - y0) / (y1 - y0) * span;
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="1000" height="1000" viewBox="0 0 1000 1000">"#
        );
        let _ = writeln!(s, r#"<rect width="1000" height="1000" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<rect x="{MARGIN}" y="{MARGIN}" width="{span}" height="{span}" fill="none" stroke="black"/>"#
        );
        for (i, (v, at)) in [(x0, MARGIN), (x1, SIZE - MARGIN)].into_iter().enumerate() {
            let anchor = if i == 0 { "start" } else { "end" };
            let _ = writeln!(
                s,
                r#"<text x="{at}" y="{}" font-size="14" text-anchor="{anchor}">{v:.4e}</text>"#,
                SIZE - MARGIN + 20.0
            );
        }
        for (v, at) in [(y0, SIZE - MARGIN), (y1, MARGIN + 12.0)] {
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{at}" font-size="14" text-anchor="end">{v:.3e}</text>"#,
                MARGIN - 4.0
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="500" y="{}" font-size="18" text-anchor="middle">{}</text>"#,
            SIZE - 20.0,
            self.x_label
        );
        let _ = writeln!(
            s,
            r#"<text x="22" y="500" font-size="18" text-anchor="middle" transform="rotate(-90 22 500)">{}</text>"#,
            self.y_label
        );
        for (pts, color) in &self.series {
            let _ = writeln!(s, r#"<g fill="{color}">"#);
            for p in pts.iter().filter(|p| p[0].is_finite() && p[1].is_finite()) {
                let _ = writeln!(
                    s,
                    r#"<circle cx="{:.2}" cy="{:.2}" r="1.2"/>"#,
                    px(p[0]),
                    py(p[1])
                );
            }
            s.push_str("</g>\n");
        }
        for (pts, color) in &self.curves {
            let inside: Vec<String> = pts
                .iter()
                .filter(|p| p[0] >= x0 && p[0] <= x1 && p[1] >= y0 && p[1] <= y1)
                .map(|p| format!("{:.2},{:.2}", px(p[0]), py(p[1])))
                .collect();
            if inside.len() > 1 {
                let _ = writeln!(
                    s,
                    r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                    inside.join(" ")
                );
            }
        }
        s.push_str("</svg>\n");
        s
    }

    pub fn save(&self, path: &std::path::Path) -> Result<(), crate::report::CliError> {
        std::fs::write(path, self.render()).map_err(|e| crate::report::CliError::io(path, e))
    }
}
