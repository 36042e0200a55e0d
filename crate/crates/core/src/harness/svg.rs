use std::fmt::Write;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 160.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 55.0;
const TICKS: usize = 5;

struct Series {
    label: String,
    color: String,
    points: Vec<(f64, f64)>,
}

/// Minimal line-and-marker chart written directly as SVG text.
#[derive(Default)]
pub struct Plot {
    title: String,
    x_label: String,
    y_label: String,
    lines: Vec<Series>,
    markers: Vec<Series>,
    hlines: Vec<(f64, String)>,
    vlines: Vec<(f64, String)>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

impl Plot {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Self { title: title.into(), x_label: x_label.into(), y_label: y_label.into(), ..Self::default() }
    }

    pub fn line(mut self, label: &str, color: &str, points: Vec<(f64, f64)>) -> Self {
        self.lines.push(Series { label: label.into(), color: color.into(), points });
        self
    }

    pub fn markers(mut self, label: &str, color: &str, points: Vec<(f64, f64)>) -> Self {
        self.markers.push(Series { label: label.into(), color: color.into(), points });
        self
    }

    pub fn hline(mut self, y: f64, label: &str) -> Self {
        self.hlines.push((y, label.into()));
        self
    }

    pub fn vline(mut self, x: f64, label: &str) -> Self {
        self.vlines.push((x, label.into()));
        self
    }

    fn bounds(&self) -> ((f64, f64), (f64, f64)) {
        let pts = self.lines.iter().chain(&self.markers).flat_map(|s| s.points.iter());
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for &(x, y) in pts.filter(|p| p.0.is_finite() && p.1.is_finite()) {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        for &(y, _) in &self.hlines {
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        for &(x, _) in &self.vlines {
            x0 = x0.min(x);
            x1 = x1.max(x);
        }
        if !x0.is_finite() {
            return ((0.0, 1.0), (0.0, 1.0));
        }
        let pad = |lo: f64, hi: f64| {
            let span = if hi > lo { hi - lo } else { lo.abs().max(1.0) };
            (lo - 0.05 * span, hi + 0.05 * span)
        };
        (pad(x0, x1), pad(y0, y1))
    }

    pub fn render(&self) -> String {
        let ((x0, x1), (y0, y1)) = self.bounds();
        let pw = WIDTH - LEFT - RIGHT;
        let ph = HEIGHT - TOP - BOTTOM;
        let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
        let sy = |y: f64| TOP + (y1 - y) / (y1 - y0) * ph;
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(s, r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#, LEFT + pw / 2.0, escape(&self.title));
        let _ = writeln!(
            s,
            r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
        );
        for i in 0..=TICKS {
            let t = i as f64 / TICKS as f64;
            let (xv, yv) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
            let (px, py) = (sx(xv), sy(yv));
            let _ = writeln!(s, r#"<line x1="{px:.2}" y1="{}" x2="{px:.2}" y2="{}" stroke="black"/>"#, TOP + ph, TOP + ph + 5.0);
            let _ = writeln!(s, r#"<text x="{px:.2}" y="{}" text-anchor="middle">{}</text>"#, TOP + ph + 18.0, tick_label(xv));
            let _ = writeln!(s, r#"<line x1="{}" y1="{py:.2}" x2="{LEFT}" y2="{py:.2}" stroke="black"/>"#, LEFT - 5.0);
            let _ = writeln!(s, r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#, LEFT - 8.0, py + 4.0, tick_label(yv));
        }
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, LEFT + pw / 2.0, HEIGHT - 12.0, escape(&self.x_label));
        let _ = writeln!(
            s,
            r#"<text x="18" y="{0}" text-anchor="middle" transform="rotate(-90 18 {0})">{1}</text>"#,
            TOP + ph / 2.0,
            escape(&self.y_label)
        );
        for (y, label) in &self.hlines {
            let py = sy(*y);
            let _ = writeln!(s, r##"<line x1="{LEFT}" y1="{py:.2}" x2="{}" y2="{py:.2}" stroke="#888" stroke-dasharray="6 4"/>"##, LEFT + pw);
            let _ = writeln!(s, r##"<text x="{}" y="{:.2}" fill="#555">{}</text>"##, LEFT + pw + 6.0, py + 4.0, escape(label));
        }
        for (x, label) in &self.vlines {
            let px = sx(*x);
            let _ = writeln!(s, r##"<line x1="{px:.2}" y1="{TOP}" x2="{px:.2}" y2="{}" stroke="#888" stroke-dasharray="2 3"/>"##, TOP + ph);
            let _ = writeln!(s, r##"<text x="{:.2}" y="{}" fill="#555">{}</text>"##, px + 4.0, TOP + 14.0, escape(label));
        }
        for line in &self.lines {
            let pts: Vec<String> = line
                .points
                .iter()
                .filter(|p| p.0.is_finite() && p.1.is_finite())
                .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                .collect();
            let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.6"/>"#, pts.join(" "), line.color);
        }
        for m in &self.markers {
            for &(x, y) in m.points.iter().filter(|p| p.0.is_finite() && p.1.is_finite()) {
                let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3.5" fill="{}"/>"#, sx(x), sy(y), m.color);
            }
        }
        let legend_x = LEFT + pw + 10.0;
        for (i, series) in self.lines.iter().chain(&self.markers).enumerate() {
            let y = TOP + 40.0 + 20.0 * i as f64;
            if i < self.lines.len() {
                let _ = writeln!(s, r#"<line x1="{legend_x}" y1="{y}" x2="{}" y2="{y}" stroke="{}" stroke-width="2"/>"#, legend_x + 18.0, series.color);
            } else {
                let _ = writeln!(s, r#"<circle cx="{}" cy="{y}" r="3.5" fill="{}"/>"#, legend_x + 9.0, series.color);
            }
            let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, legend_x + 24.0, y + 4.0, escape(&series.label));
        }
        s.push_str("</svg>\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_all_elements() {
        let svg = Plot::new("t", "x", "y < z")
            .line("curve", "blue", vec![(0.0, 1.0), (1.0, 2.0)])
            .markers("data", "red", vec![(0.5, 1.5), (f64::NAN, 1.0)])
            .hline(1.25, "ref")
            .vline(0.3, "mark")
            .render();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert_eq!(svg.matches("<circle").count(), 2);
        assert!(svg.contains("y &lt; z"));
        assert!(svg.contains("stroke-dasharray=\"6 4\""));
    }

    #[test]
    fn empty_plot_is_valid() {
        let svg = Plot::new("empty", "x", "y").render();
        assert!(svg.contains("</svg>"));
    }
}
