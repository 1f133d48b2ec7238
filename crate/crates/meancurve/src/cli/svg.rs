//! Standalone SVG rendering of a solution with its bounding arcs.
//!
//! The output is self-contained SVG 1.1: no external resources, fixed
//! 800 x 600 canvas, data mapped linearly into the plot area with 5%
//! padding on each side. Coordinates are written with three decimals so
//! identical runs render byte-identical files.

use std::fmt::Write;

use crate::error::Error;
use crate::geometry::ComparisonCircle;
use crate::solver::SolutionGrid;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
/// Plot area: left, top, right, bottom canvas coordinates.
const AREA: (f64, f64, f64, f64) = (70.0, 20.0, 780.0, 550.0);
const PAD_FRACTION: f64 = 0.05;

/// What the vertical companion curves are.
pub enum Companions<'a> {
    /// Upper and lower comparison arcs.
    Arcs(&'a ComparisonCircle, &'a ComparisonCircle),
    /// Degenerate endpoint slope: a single horizontal reference line.
    Flat(f64),
}

struct Frame {
    r_lo: f64,
    r_span: f64,
    v_lo: f64,
    v_span: f64,
}

impl Frame {
    fn x(&self, r: f64) -> f64 {
        AREA.0 + (r - self.r_lo) / self.r_span * (AREA.2 - AREA.0)
    }

    /// Canvas y grows downward; data heights grow upward.
    fn y(&self, v: f64) -> f64 {
        AREA.3 - (v - self.v_lo) / self.v_span * (AREA.3 - AREA.1)
    }
}

/// Renders the grid (solid), the companions (dashed), axes, legend, and
/// endpoint markers at r = 0 and r = c_eff.
pub fn render_svg(grid: &SolutionGrid, companions: &Companions) -> Result<String, Error> {
    let mut v_min = f64::INFINITY;
    let mut v_max = f64::NEG_INFINITY;
    let mut take = |v: f64| {
        v_min = v_min.min(v);
        v_max = v_max.max(v);
    };
    for &u in &grid.u {
        take(u);
    }
    let mut y_pts = Vec::new();
    let mut w_pts = Vec::new();
    match companions {
        Companions::Arcs(y, w) => {
            for &r in &grid.nodes {
                let yv = y.eval(r)?.0;
                let wv = w.eval(r)?.0;
                take(yv);
                take(wv);
                y_pts.push((r, yv));
                w_pts.push((r, wv));
            }
        }
        Companions::Flat(height) => take(*height),
    }

    let r_pad = (grid.c_eff * PAD_FRACTION).max(1e-12);
    let v_pad = ((v_max - v_min) * PAD_FRACTION).max(1e-12);
    let frame = Frame {
        r_lo: -r_pad,
        r_span: grid.c_eff + 2.0 * r_pad,
        v_lo: v_min - v_pad,
        v_span: (v_max - v_min) + 2.0 * v_pad,
    };

    let mut svg = String::with_capacity(32 * 1024);
    write!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .expect("string write");
    svg.push('\n');
    svg.push_str(r#"<rect width="100%" height="100%" fill="white"/>"#);
    svg.push('\n');

    axes(&mut svg, &frame, grid, v_min, v_max);

    match companions {
        Companions::Arcs(..) => {
            polyline(&mut svg, &frame, &y_pts, "#b02a2a", Some("8 5"));
            polyline(&mut svg, &frame, &w_pts, "#2a7a2a", Some("3 4"));
        }
        Companions::Flat(height) => {
            let pts = [(0.0, *height), (grid.c_eff, *height)];
            polyline(&mut svg, &frame, &pts, "#b02a2a", Some("8 5"));
        }
    }
    let u_pts: Vec<(f64, f64)> = grid
        .nodes
        .iter()
        .copied()
        .zip(grid.u.iter().copied())
        .collect();
    polyline(&mut svg, &frame, &u_pts, "#1f4e9e", None);

    for (r, v) in [(0.0, grid.u0), (grid.c_eff, grid.u_end())] {
        writeln!(
            svg,
            r##"<circle cx="{:.3}" cy="{:.3}" r="4" fill="#1f4e9e"/>"##,
            frame.x(r),
            frame.y(v)
        )
        .expect("string write");
    }

    legend(&mut svg, companions);
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn axes(svg: &mut String, frame: &Frame, grid: &SolutionGrid, v_min: f64, v_max: f64) {
    let (l, t, r, b) = AREA;
    writeln!(
        svg,
        r#"<path d="M {l} {t} L {l} {b} L {r} {b}" fill="none" stroke="black" stroke-width="1"/>"#
    )
    .expect("string write");
    let label = |svg: &mut String, x: f64, y: f64, anchor: &str, text: String| {
        writeln!(
            svg,
            r#"<text x="{x:.3}" y="{y:.3}" font-family="sans-serif" font-size="13" text-anchor="{anchor}">{text}</text>"#
        )
        .expect("string write");
    };
    label(svg, frame.x(0.0), b + 18.0, "middle", "0".into());
    label(
        svg,
        frame.x(grid.c_eff),
        b + 18.0,
        "middle",
        format!("{:.4}", grid.c_eff),
    );
    label(svg, (l + r) / 2.0, b + 36.0, "middle", "r".into());
    label(svg, l - 8.0, frame.y(v_min) + 4.0, "end", format!("{v_min:.4}"));
    label(svg, l - 8.0, frame.y(v_max) + 4.0, "end", format!("{v_max:.4}"));
    label(svg, l - 8.0, (t + b) / 2.0, "end", "height".into());
}

fn polyline(svg: &mut String, frame: &Frame, pts: &[(f64, f64)], color: &str, dash: Option<&str>) {
    let mut d = String::with_capacity(16 * pts.len());
    for (i, (r, v)) in pts.iter().enumerate() {
        let cmd = if i == 0 { 'M' } else { 'L' };
        write!(d, "{cmd} {:.3} {:.3} ", frame.x(*r), frame.y(*v)).expect("string write");
    }
    let dash = dash
        .map(|p| format!(r#" stroke-dasharray="{p}""#))
        .unwrap_or_default();
    writeln!(
        svg,
        r#"<path d="{}" fill="none" stroke="{color}" stroke-width="2"{dash}/>"#,
        d.trim_end()
    )
    .expect("string write");
}

fn legend(svg: &mut String, companions: &Companions) {
    let entries: &[(&str, &str, Option<&str>)] = match companions {
        Companions::Arcs(..) => &[
            ("u (solution)", "#1f4e9e", None),
            ("y (upper arc)", "#b02a2a", Some("8 5")),
            ("w (lower arc)", "#2a7a2a", Some("3 4")),
        ],
        Companions::Flat(_) => &[
            ("u (solution)", "#1f4e9e", None),
            ("flat reference", "#b02a2a", Some("8 5")),
        ],
    };
    let (x, mut y) = (AREA.0 + 14.0, AREA.1 + 16.0);
    for (name, color, dash) in entries {
        let dash = dash
            .map(|p| format!(r#" stroke-dasharray="{p}""#))
            .unwrap_or_default();
        writeln!(
            svg,
            r#"<path d="M {x} {y} L {} {y}" stroke="{color}" stroke-width="2"{dash}/>"#,
            x + 30.0
        )
        .expect("string write");
        writeln!(
            svg,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="13">{name}</text>"#,
            x + 38.0,
            y + 4.0
        )
        .expect("string write");
        y += 20.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{lower_circle, upper_circle};
    use crate::profiles::Profile;
    use crate::solver::solve_radial_quadrature;

    #[test]
    fn renders_self_contained_svg_with_three_curves() {
        let g = solve_radial_quadrature(&Profile::Linear { a: 1.0, b: 0.0 }, 1.0, 0.0, 64).unwrap();
        let y = upper_circle(&g).unwrap();
        let w = lower_circle(&g, &y).unwrap();
        let svg = render_svg(&g, &Companions::Arcs(&y, &w)).unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<path").count(), 1 + 3 + 3, "axes + curves + legend");
        assert!(!svg.contains("http://") || svg.contains("http://www.w3.org/2000/svg"));
        assert!(!svg.contains("href"), "no external references");
        assert_eq!(svg.matches("<circle").count(), 2, "endpoint markers");
    }

    #[test]
    fn degenerate_render_uses_flat_reference() {
        let g = solve_radial_quadrature(&Profile::Constant { k: 0.0 }, 1.0, 0.5, 32).unwrap();
        let svg = render_svg(&g, &Companions::Flat(0.5)).unwrap();
        assert!(svg.contains("flat reference"));
        assert!(!svg.contains("upper arc"));
    }

    #[test]
    fn identical_inputs_render_identical_bytes() {
        let g = solve_radial_quadrature(&Profile::Sine, 1.2, 0.0, 64).unwrap();
        let y = upper_circle(&g).unwrap();
        let w = lower_circle(&g, &y).unwrap();
        let a = render_svg(&g, &Companions::Arcs(&y, &w)).unwrap();
        let b = render_svg(&g, &Companions::Arcs(&y, &w)).unwrap();
        assert_eq!(a, b);
    }
}
