//! Static SVG rate-distortion plots.

use std::fmt::Write as _;
use std::io::Write;

use crate::error::{Error, Result};
use crate::metrics::RdCurve;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 160.0;
const MARGIN_TOP: f64 = 20.0;
const MARGIN_BOTTOM: f64 = 50.0;
const TICKS: usize = 5;

const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn padded_range(lo: f64, hi: f64) -> (f64, f64) {
    if hi > lo {
        let pad = 0.05 * (hi - lo);
        (lo - pad, hi + pad)
    } else {
        (lo - 1.0, hi + 1.0)
    }
}

/// Renders the curves as an SVG line chart: rate (bits per input point) on
/// x, D1 PSNR on y. Infinite PSNR values are drawn at the top of the y axis
/// with a triangle marker and an infinity annotation.
pub fn render_svg(curves: &[RdCurve]) -> Result<String> {
    if curves.is_empty() || curves.iter().all(|c| c.is_empty()) {
        return Err(Error::RdCurve("nothing to plot".into()));
    }
    let all = curves.iter().flat_map(|c| c.points());
    let (rmin, rmax) = all.clone().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.rate), b.max(p.rate)));
    let finite = all.filter(|p| p.quality.is_finite()).map(|p| p.quality);
    let (qmin, qmax) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), q| (a.min(q), b.max(q)));
    let (qmin, qmax) = if qmin.is_finite() { (qmin, qmax) } else { (0.0, 0.0) };
    let (x0, x1) = padded_range(rmin, rmax);
    let (y0, y1) = padded_range(qmin, qmax);

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = |r: f64| MARGIN_LEFT + (r - x0) / (x1 - x0) * plot_w;
    let sy = |q: f64| {
        let q = if q.is_finite() { q } else { y1 };
        MARGIN_TOP + (y1 - q) / (y1 - y0) * plot_h
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<rect class="frame" x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    for i in 0..=TICKS {
        let f = i as f64 / TICKS as f64;
        let (r, q) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
        let (x, y) = (sx(r), sy(q));
        let base = MARGIN_TOP + plot_h;
        let _ = writeln!(svg, r#"<line x1="{x:.2}" y1="{base}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#, base + 5.0);
        let _ = writeln!(svg, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{r:.3}</text>"#, base + 20.0);
        let _ = writeln!(svg, r#"<line x1="{:.2}" y1="{y:.2}" x2="{MARGIN_LEFT}" y2="{y:.2}" stroke="black"/>"#, MARGIN_LEFT - 5.0);
        let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{q:.2}</text>"#, MARGIN_LEFT - 8.0, y + 4.0);
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">rate (bits per input point)</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 10.0
    );
    let _ = writeln!(
        svg,
        r#"<text transform="translate(16 {:.2}) rotate(-90)" text-anchor="middle">D1 PSNR (dB)</text>"#,
        MARGIN_TOP + plot_h / 2.0
    );

    for (i, curve) in curves.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let coords: Vec<String> =
            curve.points().iter().map(|p| format!("{:.2},{:.2}", sx(p.rate), sy(p.quality))).collect();
        let _ = writeln!(
            svg,
            r#"<polyline class="curve" data-label="{}" points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            escape(curve.label()),
            coords.join(" ")
        );
        for p in curve.points() {
            let (x, y) = (sx(p.rate), sy(p.quality));
            if p.quality.is_finite() {
                let _ = writeln!(svg, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="{color}"/>"#);
            } else {
                let _ = writeln!(
                    svg,
                    r#"<path class="clipped" d="M {x:.2} {:.2} l -5 8 l 10 0 z" fill="{color}"/>"#,
                    y - 2.0
                );
                let _ = writeln!(
                    svg,
                    r#"<text class="clipped-label" x="{:.2}" y="{:.2}" fill="{color}">&#8734;</text>"#,
                    x + 6.0,
                    y + 12.0
                );
            }
        }
        let ly = MARGIN_TOP + 10.0 + 18.0 * i as f64;
        let lx = WIDTH - MARGIN_RIGHT + 12.0;
        let _ = writeln!(
            svg,
            r#"<g class="legend-entry"><line x1="{lx}" y1="{ly}" x2="{:.2}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{}</text></g>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            escape(curve.label())
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn emit_plot<W: Write>(curves: &[RdCurve], mut w: W) -> Result<()> {
    w.write_all(render_svg(curves)?.as_bytes())?;
    Ok(())
}
