//! SVG frames: the 1/e contour, the centroid trail and a reference curve.
//!
//! Phase space [-8, 8]² maps onto a 480 px square with p pointing up.

use std::fmt::Write as _;

use phasespace_core::gaussian::contour_1e;
use phasespace_core::{GaussianState, PhaseVector};

use crate::format::fixed;

pub const VIEW_HALF: f64 = 8.0;
pub const VIEW_PX: f64 = 480.0;
const SCALE: f64 = VIEW_PX / (2.0 * VIEW_HALF);

#[derive(Clone, Debug, PartialEq)]
pub enum Reference {
    Circle { center: PhaseVector, radius: f64 },
    Curve(Vec<PhaseVector>),
    Line(PhaseVector, PhaseVector),
    /// Dotted contour of a fixed state, e.g. the initial one.
    Ellipse(GaussianState),
}

pub struct Frame<'a> {
    pub state: &'a GaussianState,
    pub trail: &'a [PhaseVector],
    pub references: &'a [Reference],
}

fn to_px(r: PhaseVector) -> (f64, f64) {
    ((r.x + VIEW_HALF) * SCALE, (VIEW_HALF - r.p) * SCALE)
}

fn points(path: &[PhaseVector]) -> String {
    path.iter()
        .map(|&r| {
            let (x, y) = to_px(r);
            format!("{},{}", fixed(x), fixed(y))
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn ellipse(out: &mut String, class: &str, state: &GaussianState, style: &str) {
    let c = contour_1e(state);
    let (cx, cy) = to_px(c.center);
    let (cx, cy) = (fixed(cx), fixed(cy));
    let _ = writeln!(
        out,
        r#"<ellipse class="{class}" cx="{cx}" cy="{cy}" rx="{}" ry="{}" transform="rotate({} {cx} {cy})" {style}/>"#,
        fixed(c.semi_major * SCALE),
        fixed(c.semi_minor * SCALE),
        fixed(-c.orientation.to_degrees()),
    );
}

pub fn render_frame(frame: &Frame) -> String {
    let mut out = String::new();
    let size = fixed(VIEW_PX);
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let dashed = r##"fill="none" stroke="#888888" stroke-width="1" stroke-dasharray="6 4""##;
    for r in frame.references {
        match r {
            Reference::Circle { center, radius } => {
                let (cx, cy) = to_px(*center);
                let _ = writeln!(
                    out,
                    r#"<circle class="reference" cx="{}" cy="{}" r="{}" {dashed}/>"#,
                    fixed(cx),
                    fixed(cy),
                    fixed(radius * SCALE)
                );
            }
            Reference::Curve(path) => {
                let _ = writeln!(out, r#"<polyline class="reference" points="{}" {dashed}/>"#, points(path));
            }
            Reference::Line(a, b) => {
                let _ = writeln!(out, r#"<polyline class="reference" points="{}" {dashed}/>"#, points(&[*a, *b]));
            }
            Reference::Ellipse(s) => {
                ellipse(&mut out, "initial", s, r##"fill="none" stroke="#444444" stroke-width="1" stroke-dasharray="2 3""##)
            }
        }
    }
    if frame.trail.len() > 1 {
        let _ = writeln!(
            out,
            r##"<polyline class="trajectory" points="{}" fill="none" stroke="#1f77b4" stroke-width="1.5"/>"##,
            points(frame.trail)
        );
    }
    ellipse(&mut out, "contour", frame.state, r##"fill="none" stroke="#d62728" stroke-width="2""##);
    let (cx, cy) = to_px(frame.state.mean);
    let _ = writeln!(out, r##"<circle class="centroid" cx="{}" cy="{}" r="3.0000000000" fill="#d62728"/>"##, fixed(cx), fixed(cy));
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use phasespace_core::gaussian::vacuum;

    #[test]
    fn origin_maps_to_center_with_p_up() {
        assert_eq!(to_px(PhaseVector::new(0.0, 0.0)), (240.0, 240.0));
        assert_eq!(to_px(PhaseVector::new(-8.0, 8.0)), (0.0, 0.0));
        assert_eq!(to_px(PhaseVector::new(8.0, -8.0)), (480.0, 480.0));
    }

    #[test]
    fn frame_uses_only_geometry_primitives() {
        let s = vacuum();
        let svg = render_frame(&Frame {
            state: &s,
            trail: &[PhaseVector::new(0.0, 0.0), PhaseVector::new(1.0, 1.0)],
            references: &[Reference::Circle { center: PhaseVector::new(0.0, 0.0), radius: 1.0 }],
        });
        let tags: Vec<&str> = svg.lines().skip(2).filter_map(|l| l.strip_prefix('<')?.split([' ', '>']).next()).collect();
        assert!(tags.iter().all(|t| ["ellipse", "polyline", "circle", "/svg"].contains(t)), "{tags:?}");
        assert!(svg.contains(r#"r="30.0000000000""#));
    }
}
