//! Hand-emitted SVG diagnostics: half-map graphs, the displacement function,
//! and the contact picture in the `(Y0, Y1)` plane.

use std::fmt::Write as _;

use crate::contact::{ContactPolynomials, RegionSpec};
use crate::displacement::delta_sample;
use crate::poly::BivarPoly;
use crate::report::AnalysisReport;
use crate::{Error, Result};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 48.0;
/// Curve samples per plot.
const SAMPLES: usize = 600;
/// Cells per side of the contouring grid.
const CONTOUR_GRID: usize = 240;

/// What to draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    HalfMaps,
    Delta,
    Contact,
}

impl std::str::FromStr for PlotKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "halfmaps" => Ok(PlotKind::HalfMaps),
            "delta" => Ok(PlotKind::Delta),
            "contact" => Ok(PlotKind::Contact),
            _ => Err(Error::InvalidInput(format!("unknown plot `{s}`; expected halfmaps, delta or contact"))),
        }
    }
}

/// A data window mapped onto the fixed canvas.
struct Canvas {
    x: (f64, f64),
    y: (f64, f64),
    body: String,
}

impl Canvas {
    fn new(x: (f64, f64), y: (f64, f64)) -> Self {
        let widen = |(lo, hi): (f64, f64)| if hi > lo { (lo, hi) } else { (lo - 1.0, lo + 1.0) };
        Canvas {
            x: widen(x),
            y: widen(y),
            body: String::new(),
        }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - 2.0 * MARGIN)
    }

    fn inside(&self, x: f64, y: f64) -> bool {
        x >= self.x.0 && x <= self.x.1 && y >= self.y.0 && y <= self.y.1
    }

    /// Draws a polyline, breaking it wherever it leaves the window.
    fn polyline(&mut self, pts: &[(f64, f64)], class: &str, color: &str) {
        let mut run: Vec<String> = Vec::new();
        let flush = |run: &mut Vec<String>, body: &mut String| {
            if run.len() >= 2 {
                let _ = writeln!(
                    body,
                    r#"<polyline class="{class}" fill="none" stroke="{color}" stroke-width="1.6" points="{}"/>"#,
                    run.join(" ")
                );
            }
            run.clear();
        };
        for &(x, y) in pts {
            if x.is_finite() && y.is_finite() && self.inside(x, y) {
                run.push(format!("{:.2},{:.2}", self.px(x), self.py(y)));
            } else {
                flush(&mut run, &mut self.body);
            }
        }
        flush(&mut run, &mut self.body);
    }

    fn segments(&mut self, segs: &[[(f64, f64); 2]], class: &str, color: &str) {
        if segs.is_empty() {
            return;
        }
        let mut d = String::new();
        for [a, b] in segs {
            let _ = write!(
                d,
                "M{:.2},{:.2}L{:.2},{:.2}",
                self.px(a.0),
                self.py(a.1),
                self.px(b.0),
                self.py(b.1)
            );
        }
        let _ = writeln!(
            self.body,
            r#"<path class="{class}" fill="none" stroke="{color}" stroke-width="1.6" d="{d}"/>"#
        );
    }

    fn marker(&mut self, x: f64, y: f64, class: &str, color: &str, label: &str) {
        if !self.inside(x, y) {
            return;
        }
        let _ = writeln!(
            self.body,
            r#"<circle class="{class}" cx="{:.2}" cy="{:.2}" r="4.5" fill="{color}"><title>{label}</title></circle>"#,
            self.px(x),
            self.py(y)
        );
    }

    fn polygon(&mut self, pts: &[(f64, f64)], class: &str, fill: &str) {
        let p: Vec<String> = pts
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", self.px(x), self.py(y)))
            .collect();
        let _ = writeln!(
            self.body,
            r#"<polygon class="{class}" fill="{fill}" fill-opacity="0.18" stroke="none" points="{}"/>"#,
            p.join(" ")
        );
    }

    fn axes(&mut self, xlabel: &str, ylabel: &str) {
        let (x0, x1, y0, y1) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
        let _ = writeln!(
            self.body,
            r##"<rect x="{x0}" y="{y0}" width="{}" height="{}" fill="none" stroke="#444"/>"##,
            x1 - x0,
            y1 - y0
        );
        if self.y.0 < 0.0 && self.y.1 > 0.0 {
            let y = self.py(0.0);
            let _ = writeln!(self.body, r##"<line x1="{x0}" y1="{y:.2}" x2="{x1}" y2="{y:.2}" stroke="#bbb"/>"##);
        }
        if self.x.0 < 0.0 && self.x.1 > 0.0 {
            let x = self.px(0.0);
            let _ = writeln!(self.body, r##"<line x1="{x:.2}" y1="{y0}" x2="{x:.2}" y2="{y1}" stroke="#bbb"/>"##);
        }
        let _ = writeln!(
            self.body,
            r#"<text x="{}" y="{}" font-size="13" text-anchor="middle">{xlabel}</text>"#,
            WIDTH / 2.0,
            HEIGHT - 12.0
        );
        let _ = writeln!(
            self.body,
            r#"<text x="14" y="{}" font-size="13" text-anchor="middle" transform="rotate(-90 14 {})">{ylabel}</text>"#,
            HEIGHT / 2.0,
            HEIGHT / 2.0
        );
        for (v, x, y, anchor) in [
            (self.x.0, x0, y1 + 16.0, "start"),
            (self.x.1, x1, y1 + 16.0, "end"),
            (self.y.0, x0 - 4.0, y1, "end"),
            (self.y.1, x0 - 4.0, y0 + 10.0, "end"),
        ] {
            let _ = writeln!(
                self.body,
                r#"<text x="{x:.2}" y="{y:.2}" font-size="11" text-anchor="{anchor}">{v:.3}</text>"#
            );
        }
    }

    fn finish(self, title: &str) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" width=\"{WIDTH}\" height=\"{HEIGHT}\">\n\
             <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
             <text x=\"{}\" y=\"24\" font-size=\"15\" text-anchor=\"middle\">{title}</text>\n{}</svg>\n",
            WIDTH / 2.0,
            self.body
        )
    }
}

/// Zero set of `f` on the window as line segments (marching squares).
fn contour(f: impl Fn(f64, f64) -> f64, x: (f64, f64), y: (f64, f64)) -> Vec<[(f64, f64); 2]> {
    let n = CONTOUR_GRID;
    let gx = |i: usize| x.0 + (x.1 - x.0) * i as f64 / n as f64;
    let gy = |j: usize| y.0 + (y.1 - y.0) * j as f64 / n as f64;
    let vals: Vec<Vec<f64>> = (0..=n).map(|i| (0..=n).map(|j| f(gx(i), gy(j))).collect()).collect();
    let lerp = |a: (f64, f64), fa: f64, b: (f64, f64), fb: f64| {
        let t = fa / (fa - fb);
        (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1))
    };
    let mut segs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let corners = [
                ((gx(i), gy(j)), vals[i][j]),
                ((gx(i + 1), gy(j)), vals[i + 1][j]),
                ((gx(i + 1), gy(j + 1)), vals[i + 1][j + 1]),
                ((gx(i), gy(j + 1)), vals[i][j + 1]),
            ];
            let mut cross = Vec::with_capacity(4);
            for k in 0..4 {
                let (a, fa) = corners[k];
                let (b, fb) = corners[(k + 1) % 4];
                if (fa < 0.0) != (fb < 0.0) && fa.is_finite() && fb.is_finite() {
                    cross.push(lerp(a, fa, b, fb));
                }
            }
            // saddle cells pair crossings in edge order
            for pair in cross.chunks_exact(2) {
                segs.push([pair[0], pair[1]]);
            }
        }
    }
    segs
}

/// Right end of the plotted `y0` range: past the outermost cycle, within `I_b`.
fn y0_window(report: &AnalysisReport) -> Option<(f64, f64)> {
    let iv = report.scan.interval?;
    let outer = report.cycles.iter().map(|c| c.y0_star).fold(0.0, f64::max);
    let want = if outer > 0.0 { 1.3 * outer } else { 5.0_f64.max(iv.lo + 1.0) };
    Some((iv.lo, iv.hi.min(want)))
}

fn sample_range(lo: f64, hi: f64) -> impl Iterator<Item = f64> {
    (1..SAMPLES).map(move |i| lo + (hi - lo) * i as f64 / SAMPLES as f64)
}

/// Forward and backward half-maps in the fourth quadrant with `F_b = 0` overlaid.
pub fn plot_halfmaps(report: &AnalysisReport) -> Result<String> {
    let c = report.canonical;
    let cfg = report.config;
    let (lo, hi) = y0_window(report).ok_or(Error::NotApplicable("empty half-map domain"))?;
    let mut left = Vec::new();
    let mut right = Vec::new();
    for y0 in sample_range(lo, hi) {
        let s = delta_sample(&c, y0, &cfg.halfmap);
        left.push((y0, s.as_ref().map_or(f64::NAN, |s| s.y_left)));
        right.push((y0, s.as_ref().map_or(f64::NAN, |s| s.y_right)));
    }
    let ymin = left
        .iter()
        .chain(right.iter())
        .map(|p| p.1)
        .filter(|v| v.is_finite())
        .fold(0.0, f64::min);
    let mut cv = Canvas::new((0.0, hi), (1.1 * ymin.min(-1e-3), 0.0));
    if let Ok(f) = crate::contact::derive_f(&c) {
        if !f.is_zero() {
            let segs = contour(|a, b| f.eval_f64(a, b), cv.x, cv.y);
            cv.segments(&segs, "gamma", "#2a9d3a");
        }
    }
    cv.polyline(&left, "y-left", "#1f5fbf");
    cv.polyline(&right, "y-right", "#c0392b");
    for cy in &report.cycles {
        cv.marker(cy.y0_star, cy.y1_star, "cycle", "#000", &format!("cycle y0 = {:.6}", cy.y0_star));
    }
    cv.axes("y0", "y1");
    Ok(cv.finish("half-maps: y_L (blue), y_R^b (red), F_b = 0 (green)"))
}

/// Displacement function over the plotted part of `int(I_b)`, zeros marked.
pub fn plot_delta(report: &AnalysisReport) -> Result<String> {
    let c = report.canonical;
    let (lo, hi) = y0_window(report).ok_or(Error::NotApplicable("empty half-map domain"))?;
    let pts: Vec<(f64, f64)> = sample_range(lo, hi)
        .map(|y0| (y0, delta_sample(&c, y0, &report.config.halfmap).map_or(f64::NAN, |s| s.delta)))
        .collect();
    let mut vals: Vec<f64> = pts.iter().map(|p| p.1).filter(|v| v.is_finite()).collect();
    vals.sort_by(f64::total_cmp);
    // clip to the central 96% so endpoint blow-ups do not flatten the picture
    let q = |t: f64| vals.get(((vals.len().saturating_sub(1)) as f64 * t) as usize).copied().unwrap_or(0.0);
    let (a, b) = (q(0.02).min(0.0), q(0.98).max(0.0));
    let pad = 0.08 * (b - a).max(1e-6);
    let mut cv = Canvas::new((lo, hi), (a - pad, b + pad));
    cv.polyline(&pts, "delta", "#1f5fbf");
    for cy in &report.cycles {
        cv.marker(cy.y0_star, 0.0, "zero", "#c0392b", &format!("{:?} cycle at y0 = {:.6}", cy.stability, cy.y0_star));
    }
    cv.axes("y0", "δ_b(y0)");
    Ok(cv.finish(&format!("displacement function, {} zero(s)", report.cycles.len())))
}

/// `F̃_b = 0`, `G̃_b = 0`, the shaded quadrant containing `φ(U)`, and the excluded point.
pub fn plot_contact(report: &AnalysisReport) -> Result<String> {
    let c = report.canonical;
    let polys = ContactPolynomials::derive(&c)?;
    let region = RegionSpec::for_system(&c, report.config.halfmap.cap);
    let mut extent: f64 = 3.0;
    let mut note = |x: f64, y: f64| {
        if x.is_finite() && y.is_finite() {
            extent = extent.max(1.2 * x.abs()).max(1.2 * y.abs());
        }
    };
    if let Some(e) = &report.count.excluded_point {
        note(e.approx[0], e.approx[1]);
    }
    if let Some(set) = &report.count.contacts {
        for s in &set.solutions {
            note(s.big_y0, s.big_y1);
        }
    }
    let r = extent.min(50.0);
    let mut cv = Canvas::new((-r, r), (-r, r));
    let s = region.y0_sign();
    if s != 0.0 {
        cv.polygon(&[(0.0, 0.0), (s * r, 0.0), (s * r, -r), (0.0, -r)], "region", "#f1c40f");
    }
    let draw = |p: &BivarPoly, cv: &mut Canvas, class: &str, color: &str| {
        if !p.is_zero() {
            let segs = contour(|a, b| p.eval_f64(a, b), cv.x, cv.y);
            cv.segments(&segs, class, color);
        }
    };
    draw(&polys.f_tilde, &mut cv, "f-tilde", "#1f5fbf");
    draw(&polys.g_tilde, &mut cv, "g-tilde", "#c0392b");
    if let Some(set) = &report.count.contacts {
        for sol in &set.solutions {
            let color = if sol.in_region { "#000" } else { "#888" };
            cv.marker(sol.big_y0, sol.big_y1, "contact", color, "common zero");
        }
    }
    if let Some(e) = &report.count.excluded_point {
        cv.marker(e.approx[0], e.approx[1], "excluded", "#8e44ad", &format!("excluded point ({:?})", e.case));
    }
    cv.axes("Y0 = y0 + y1", "Y1 = y0 y1");
    Ok(cv.finish("F̃_b = 0 (blue), G̃_b = 0 (red), quadrant of φ(U) shaded"))
}

/// Renders `kind`; declines when the report has a continuum of cycles.
pub fn plot(report: &AnalysisReport, kind: PlotKind) -> Result<String> {
    if report.continuum {
        return Err(Error::NotApplicable("δ_b vanishes on an interval; plot skipped"));
    }
    match kind {
        PlotKind::HalfMaps => plot_halfmaps(report),
        PlotKind::Delta => plot_delta(report),
        PlotKind::Contact => plot_contact(report),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lienard::CanonicalPWL;
    use crate::displacement::ScanConfig;
    use crate::report::{analyze, SystemSpec};

    fn report(p: [f64; 7]) -> AnalysisReport {
        analyze(&SystemSpec::Canonical(CanonicalPWL::from_array(p)), &ScanConfig::default()).unwrap()
    }

    #[test]
    fn contour_of_a_circle_closes() {
        let segs = contour(|x, y| x * x + y * y - 1.0, (-2.0, 2.0), (-2.0, 2.0));
        assert!(!segs.is_empty());
        for [a, _] in &segs {
            assert!((a.0.hypot(a.1) - 1.0).abs() < 0.02);
        }
    }

    #[test]
    fn continuum_is_not_plotted() {
        let r = report([0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        assert!(plot(&r, PlotKind::Delta).is_err());
    }

    #[test]
    fn delta_plot_marks_each_cycle() {
        let r = report([-0.5, 1.0, 1.0, 0.2, 1.0, 1.0, 0.0]);
        let svg = plot(&r, PlotKind::Delta).unwrap();
        assert_eq!(svg.matches(r#"class="zero""#).count(), 1);
        assert!(svg.starts_with("<svg"));
    }
}
