//! SVG 1.1 plot of a report: the input curve, one polyline per center, and a
//! strip showing the covered part of `[0, 1]` below the drawing.

use std::fmt::Write as _;

use subtraj_core::PolygonalCurve;

use crate::report::SolutionReport;

const WIDTH: f64 = 800.0;
const PLOT_H: f64 = 520.0;
const PAD: f64 = 20.0;
const STRIP_H: f64 = 24.0;
const PALETTE: [&str; 8] = ["#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

fn xy(v: &[f64]) -> (f64, f64) {
    (v[0], v.get(1).copied().unwrap_or(0.0))
}

pub fn render(input: &PolygonalCurve, report: &SolutionReport) -> String {
    let pts: Vec<(f64, f64)> = input.vertices().iter().map(|p| xy(p.coords())).collect();
    let all = pts.iter().copied().chain(report.centers.iter().flat_map(|c| c.vertices.iter().map(|v| xy(v))));
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for (x, y) in all {
        x0 = x0.min(x);
        y0 = y0.min(y);
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-12);
    let scale = ((WIDTH - 2.0 * PAD) / span).min((PLOT_H - 2.0 * PAD) / span);
    let map = |(x, y): (f64, f64)| (PAD + (x - x0) * scale, PLOT_H - PAD - (y - y0) * scale);
    let poly = |vs: &mut dyn Iterator<Item = (f64, f64)>| {
        vs.map(|p| {
            let (a, b) = map(p);
            format!("{a:.3},{b:.3}")
        })
        .collect::<Vec<_>>()
        .join(" ")
    };

    let height = PLOT_H + STRIP_H + 2.0 * PAD;
    let mut s = String::new();
    let w = &mut s;
    writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}">"#
    )
    .unwrap();
    writeln!(w, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##).unwrap();
    writeln!(w, r#"<g class="input">"#).unwrap();
    writeln!(
        w,
        r##"<polyline class="input-curve" points="{}" fill="none" stroke="#555555" stroke-width="1.5"/>"##,
        poly(&mut pts.iter().copied())
    )
    .unwrap();
    writeln!(w, "</g>").unwrap();
    writeln!(w, r#"<g class="centers">"#).unwrap();
    for (k, c) in report.centers.iter().enumerate() {
        writeln!(
            w,
            r#"<polyline class="center" data-index="{k}" points="{}" fill="none" stroke="{}" stroke-width="3" stroke-opacity="0.8"/>"#,
            poly(&mut c.vertices.iter().map(|v| xy(v))),
            PALETTE[k % PALETTE.len()]
        )
        .unwrap();
    }
    writeln!(w, "</g>").unwrap();

    let top = PLOT_H + PAD;
    let sx = |t: f64| PAD + t * (WIDTH - 2.0 * PAD);
    writeln!(w, r#"<g class="coverage-strip">"#).unwrap();
    writeln!(
        w,
        r##"<rect class="strip-background" x="{:.3}" y="{top:.3}" width="{:.3}" height="{STRIP_H}" fill="#eeeeee" stroke="#999999"/>"##,
        sx(0.0),
        sx(1.0) - sx(0.0)
    )
    .unwrap();
    for &(a, b) in &report.coverage {
        writeln!(
            w,
            r##"<rect class="covered" x="{:.3}" y="{top:.3}" width="{:.3}" height="{STRIP_H}" fill="#4c9a2a"/>"##,
            sx(a),
            (sx(b) - sx(a)).max(0.5)
        )
        .unwrap();
    }
    writeln!(w, "</g>").unwrap();
    writeln!(w, "</svg>").unwrap();
    s
}
