//! Boundary curves as SVG polylines and `t,re,im` CSV tables.

use std::f64::consts::TAU;
use std::fmt::Write;

use schlicht::Complex64;

/// Side length of the SVG canvas.
pub const CANVAS: f64 = 1024.0;
const MARGIN: f64 = 32.0;

/// `t_k = 2 pi k / n`, matching `geometry::boundary_curve`.
pub fn sample_angle(k: usize, n: usize) -> f64 {
    TAU * k as f64 / n as f64
}

pub fn curve_csv(points: &[Complex64]) -> Result<String, csv::Error> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(["t", "re", "im"])?;
    for (k, p) in points.iter().enumerate() {
        let t = sample_angle(k, points.len());
        w.write_record([t.to_string(), p.re.to_string(), p.im.to_string()])?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("ascii"))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Viewport {
    pub min: Complex64,
    pub max: Complex64,
    pub scale: f64,
}

impl Viewport {
    /// Uniform scale fitting every finite point inside the canvas margins.
    pub fn fit(points: &[Complex64]) -> Self {
        let finite = points.iter().filter(|p| p.is_finite());
        let (mut lo, mut hi) = (
            Complex64::new(f64::INFINITY, f64::INFINITY),
            Complex64::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        );
        for p in finite {
            lo = Complex64::new(lo.re.min(p.re), lo.im.min(p.im));
            hi = Complex64::new(hi.re.max(p.re), hi.im.max(p.im));
        }
        if !lo.re.is_finite() {
            lo = Complex64::new(-1.0, -1.0);
            hi = Complex64::new(1.0, 1.0);
        }
        let span = (hi.re - lo.re).max(hi.im - lo.im).max(1e-12);
        Self {
            min: lo,
            max: hi,
            scale: (CANVAS - 2.0 * MARGIN) / span,
        }
    }

    /// Canvas coordinates, y pointing down, drawing centered.
    pub fn map(&self, p: Complex64) -> (f64, f64) {
        let cx = (self.min.re + self.max.re) / 2.0;
        let cy = (self.min.im + self.max.im) / 2.0;
        (
            CANVAS / 2.0 + (p.re - cx) * self.scale,
            CANVAS / 2.0 - (p.im - cy) * self.scale,
        )
    }
}

pub fn curve_svg(points: &[Complex64], title: &str) -> String {
    let vp = Viewport::fit(points);
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{c}" height="{c}" viewBox="0 0 {c} {c}">"#,
        c = CANVAS
    );
    let _ = writeln!(s, "<title>{}</title>", escape(title));
    let (x0, y0) = vp.map(Complex64::new(0.0, 0.0));
    if (0.0..=CANVAS).contains(&y0) {
        let _ = writeln!(
            s,
            r##"<line x1="0" y1="{y0:.3}" x2="{CANVAS}" y2="{y0:.3}" stroke="#999" stroke-width="1"/>"##
        );
    }
    if (0.0..=CANVAS).contains(&x0) {
        let _ = writeln!(
            s,
            r##"<line x1="{x0:.3}" y1="0" x2="{x0:.3}" y2="{CANVAS}" stroke="#999" stroke-width="1"/>"##
        );
    }
    s.push_str(r#"<polygon fill="none" stroke="black" stroke-width="1" points=""#);
    let mut first = true;
    for p in points.iter().filter(|p| p.is_finite()) {
        let (x, y) = vp.map(*p);
        if !first {
            s.push(' ');
        }
        first = false;
        let _ = write!(s, "{x:.3},{y:.3}");
    }
    s.push_str("\"/>\n</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
