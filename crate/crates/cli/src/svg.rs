//! Static SVG plot of the boundary image.

use std::f64::consts::PI;
use std::fmt::Write;

use sphrect::developing::BoundaryImageReport;

const HALF_WIDTH: f64 = 3.0;
const SIZE: f64 = 600.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

fn px(x: f64, y: f64) -> (f64, f64) {
    let s = SIZE / (2.0 * HALF_WIDTH);
    ((x + HALF_WIDTH) * s, (HALF_WIDTH - y) * s)
}

fn inside(x: f64, y: f64) -> bool {
    x.abs() <= HALF_WIDTH && y.abs() <= HALF_WIDTH
}

/// Splits the samples into runs that stay in the window without jumping.
fn runs(points: &[(f64, f64)]) -> Vec<Vec<(f64, f64)>> {
    let mut out: Vec<Vec<(f64, f64)>> = Vec::new();
    let mut current = Vec::new();
    for &(x, y) in points {
        let jump = current.last().is_some_and(|&(a, b): &(f64, f64)| (x - a).hypot(y - b) > HALF_WIDTH);
        if !x.is_finite() || !y.is_finite() || !inside(x, y) || jump {
            if current.len() > 1 {
                out.push(std::mem::take(&mut current));
            }
            current.clear();
            if x.is_finite() && y.is_finite() && inside(x, y) {
                current.push((x, y));
            }
            continue;
        }
        current.push((x, y));
    }
    if current.len() > 1 {
        out.push(current);
    }
    out
}

fn polyline(svg: &mut String, run: &[(f64, f64)], color: &str, extra: &str) {
    let pts: Vec<String> = run
        .iter()
        .map(|&(x, y)| {
            let (u, v) = px(x, y);
            format!("{u:.2},{v:.2}")
        })
        .collect();
    let _ = writeln!(
        svg,
        r#"  <polyline fill="none" stroke="{color}" stroke-width="2"{extra} points="{}"/>"#,
        pts.join(" ")
    );
}

/// Renders the sampled `f`-images of the four sides with the three reference circles.
pub fn render(report: &BoundaryImageReport) -> String {
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(svg, r#"  <rect width="100%" height="100%" fill="white"/>"#);
    let (cx, cy) = px(0.0, 0.0);
    let r = SIZE / (2.0 * HALF_WIDTH);
    let guide = r##" stroke="#999" stroke-width="1" stroke-dasharray="4 4" fill="none""##;
    let _ = writeln!(svg, r#"  <circle cx="{cx}" cy="{cy}" r="{r}"{guide}/>"#);
    let _ = writeln!(svg, r#"  <line x1="0" y1="{cy}" x2="{SIZE}" y2="{cy}"{guide}/>"#);
    let (s, c) = (PI * report.alpha).sin_cos();
    let (x1, y1) = px(-2.0 * HALF_WIDTH * c, -2.0 * HALF_WIDTH * s);
    let (x2, y2) = px(2.0 * HALF_WIDTH * c, 2.0 * HALF_WIDTH * s);
    let _ = writeln!(svg, r#"  <line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"{guide}/>"#);
    for (i, side) in report.sides.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let _ = writeln!(svg, "  <!-- side {}: {} -> {:?} -->", i, side.name, side.circle);
        let points: Vec<(f64, f64)> = side.images.iter().map(|w| (w.re, w.im)).collect();
        for run in runs(&points) {
            polyline(&mut svg, &run, color, "");
        }
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn runs_break_at_window_and_jumps() {
        let pts = [(0.0, 0.0), (0.5, 0.0), (10.0, 0.0), (1.0, 0.0), (1.1, 0.0), (-2.5, 2.5), (-2.6, 2.5)];
        let r = runs(&pts);
        assert_eq!(r, vec![vec![(0.0, 0.0), (0.5, 0.0)], vec![(1.0, 0.0), (1.1, 0.0)], vec![(-2.5, 2.5), (-2.6, 2.5)]]);
    }

    #[test]
    fn pixel_corners() {
        assert_eq!(px(-HALF_WIDTH, HALF_WIDTH), (0.0, 0.0));
        assert_eq!(px(HALF_WIDTH, -HALF_WIDTH), (SIZE, SIZE));
    }
}
