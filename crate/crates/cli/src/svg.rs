//! SVG rendering of the two model foliations on a torus `T_i`.
//!
//! User coordinates are torus coordinates with `y` negated, so a point
//! `(x, y)` of `[0, 2i+2) × [0, 1]` is drawn at `(x, −y)`.

use anosov_core::model_torus::{compact_leaf_positions, period, reeb_annuli, sample_leaf, TorusPoint};
use anosov_core::Foliation;
use std::fmt::Write;

pub const S_COLOR: &str = "#1f6fb4";
pub const U_COLOR: &str = "#c8322b";

pub struct PlotOptions {
    pub leaves_per_annulus: usize,
    pub samples: usize,
    /// Points to mark, e.g. where a periodic orbit crosses the torus.
    pub marks: Vec<TorusPoint<f64>>,
}

impl Default for PlotOptions {
    fn default() -> Self {
        PlotOptions {
            leaves_per_annulus: 6,
            samples: 400,
            marks: Vec::new(),
        }
    }
}

fn color(f: Foliation) -> &'static str {
    match f {
        Foliation::S => S_COLOR,
        Foliation::U => U_COLOR,
    }
}

pub fn render(i: u32, opts: &PlotOptions) -> String {
    let p = period(i) as f64;
    let px = 90.0;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 -1 {p} 1" preserveAspectRatio="none">"#,
        w = p * px,
        h = 2.0 * px,
    );
    let _ = writeln!(svg, "<title>Model foliations on T_{i}</title>");
    let _ = writeln!(
        svg,
        r##"<rect x="0" y="-1" width="{p}" height="1" fill="#fdfdfb" stroke="#444" stroke-width="1" vector-effect="non-scaling-stroke"/>"##
    );
    for f in [Foliation::S, Foliation::U] {
        for annulus in reeb_annuli(i, f) {
            for l in 0..opts.leaves_per_annulus {
                let c = (l as f64 + 0.5) / opts.leaves_per_annulus as f64;
                let _ = writeln!(svg, r#"<g class="leaf {f}" data-annulus="{}" data-c="{c:.6}">"#, annulus.j);
                for piece in sample_leaf(i, f, annulus.j, c, opts.samples, 1e-3) {
                    polyline(&mut svg, &piece, color(f), 0.8);
                }
                svg.push_str("</g>\n");
            }
        }
        for x in compact_leaf_positions::<f64>(i, f) {
            let x = x.rem_euclid(p);
            let _ = writeln!(svg, r#"<g class="compact {f}">"#);
            polyline(&mut svg, &[(x, 0.0), (x, 1.0)], color(f), 2.5);
            svg.push_str("</g>\n");
        }
    }
    for m in &opts.marks {
        let _ = writeln!(
            svg,
            r##"<circle class="orbit" cx="{:.9}" cy="{:.9}" r="0.04" fill="#222"/>"##,
            m.x,
            -m.y
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn polyline(svg: &mut String, pts: &[(f64, f64)], stroke: &str, width: f64) {
    svg.push_str(r#"<polyline fill="none" stroke=""#);
    svg.push_str(stroke);
    let _ = write!(svg, r#"" stroke-width="{width}" vector-effect="non-scaling-stroke" points=""#);
    for (k, (x, y)) in pts.iter().enumerate() {
        if k > 0 {
            svg.push(' ');
        }
        let _ = write!(svg, "{x:.9},{:.9}", -y);
    }
    svg.push_str("\"/>\n");
}
