//! CSV and SVG renderings of a traced boundary.

use std::fmt::Write;

use super::NumRangeBoundary;

const PX_PER_UNIT: f64 = 100.0;
const MARGIN_PX: f64 = 20.0;
const CROSSHAIR_PX: f64 = 8.0;

/// Rows `theta,h,re,im`, one per grid angle, after a header line.
pub fn to_csv(boundary: &NumRangeBoundary) -> String {
    let mut out = String::from("theta,h,re,im\n");
    for ((t, h), b) in boundary.thetas.iter().zip(&boundary.support_values).zip(&boundary.boundary_points) {
        writeln!(out, "{t:.17e},{h:.17e},{:.17e},{:.17e}", b.re, b.im).expect("write to String");
    }
    out
}

/// Closed polyline of the boundary at 100 px per unit with the origin marked.
/// The imaginary axis points up.
pub fn to_svg(boundary: &NumRangeBoundary) -> String {
    let poly = boundary.polyline();
    let (mut x0, mut x1, mut y0, mut y1) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for p in &poly {
        x0 = x0.min(p.re);
        x1 = x1.max(p.re);
        y0 = y0.min(p.im);
        y1 = y1.max(p.im);
    }
    let width = (x1 - x0) * PX_PER_UNIT + 2.0 * MARGIN_PX;
    let height = (y1 - y0) * PX_PER_UNIT + 2.0 * MARGIN_PX;
    let px = |re: f64| (re - x0) * PX_PER_UNIT + MARGIN_PX;
    let py = |im: f64| (y1 - im) * PX_PER_UNIT + MARGIN_PX;

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.2}" height="{height:.2}" viewBox="0 0 {width:.2} {height:.2}">"#
    )
    .expect("write to String");
    let points: Vec<String> = poly.iter().map(|p| format!("{:.3},{:.3}", px(p.re), py(p.im))).collect();
    writeln!(out, r#"  <polygon points="{}" fill="none" stroke="black" stroke-width="1"/>"#, points.join(" "))
        .expect("write to String");
    let (ox, oy) = (px(0.0), py(0.0));
    writeln!(
        out,
        r#"  <path d="M {:.3} {oy:.3} H {:.3} M {ox:.3} {:.3} V {:.3}" stroke="red" stroke-width="1"/>"#,
        ox - CROSSHAIR_PX,
        ox + CROSSHAIR_PX,
        oy - CROSSHAIR_PX,
        oy + CROSSHAIR_PX
    )
    .expect("write to String");
    out.push_str("</svg>\n");
    out
}
