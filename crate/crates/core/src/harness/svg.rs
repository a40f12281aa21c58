//! Minimal standalone SVG line charts.

use std::fmt::Write;

#[derive(Clone, Debug)]
pub struct PlotOptions {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    /// Base-10 logarithmic y axis; values `<= 0` are drawn at the axis floor.
    pub log_y: bool,
    pub width: f64,
    pub height: f64,
}

impl Default for PlotOptions {
    fn default() -> Self {
        Self {
            title: String::new(),
            x_label: "step".into(),
            y_label: String::new(),
            log_y: false,
            width: 800.0,
            height: 500.0,
        }
    }
}

const MARGIN: (f64, f64, f64, f64) = (70.0, 20.0, 40.0, 50.0); // left, right, top, bottom

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn nice_range(lo: f64, hi: f64) -> (f64, f64) {
    if lo < hi {
        (lo, hi)
    } else {
        let pad = if lo == 0.0 { 1.0 } else { lo.abs() * 0.1 };
        (lo - pad, hi + pad)
    }
}

/// Renders `(x, y)` points as a polyline with axes, ticks and labels.
/// Non-finite points are skipped. Every finite point becomes a polyline vertex.
pub fn line_chart(points: &[(f64, f64)], opts: &PlotOptions) -> String {
    let pts: Vec<(f64, f64)> = points.iter().copied().filter(|(x, y)| x.is_finite() && y.is_finite()).collect();
    let floor = if opts.log_y {
        let min_pos = pts.iter().map(|p| p.1).filter(|y| *y > 0.0).fold(f64::INFINITY, f64::min);
        if min_pos.is_finite() {
            min_pos.log10().floor()
        } else {
            0.0
        }
    } else {
        0.0
    };
    let ty = |y: f64| if opts.log_y { if y > 0.0 { y.log10().max(floor) } else { floor } } else { y };
    let xs = pts.iter().map(|p| p.0);
    let ys = pts.iter().map(|p| ty(p.1));
    let (x0, x1) = nice_range(xs.clone().fold(f64::INFINITY, f64::min), xs.fold(f64::NEG_INFINITY, f64::max));
    let (y0, y1) = nice_range(ys.clone().fold(f64::INFINITY, f64::min), ys.fold(f64::NEG_INFINITY, f64::max));
    let (x0, x1, y0, y1) = if pts.is_empty() { (0.0, 1.0, 0.0, 1.0) } else { (x0, x1, y0, y1) };

    let (ml, mr, mt, mb) = MARGIN;
    let pw = opts.width - ml - mr;
    let ph = opts.height - mt - mb;
    let sx = |x: f64| ml + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| mt + ph - (y - y0) / (y1 - y0) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = opts.width,
        h = opts.height
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"#,
        opts.width / 2.0,
        mt / 2.0 + 6.0,
        escape(&opts.title)
    );
    let _ = writeln!(
        s,
        r#"<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let xv = x0 + f * (x1 - x0);
        let yv = y0 + f * (y1 - y0);
        let ylabel = if opts.log_y { format!("1e{yv:.1}") } else { format!("{yv:.3e}") };
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="11">{:.0}</text>"#,
            sx(xv),
            mt + ph + 16.0,
            xv
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-family="sans-serif" font-size="11">{}</text>"#,
            ml - 4.0,
            sy(yv) + 4.0,
            ylabel
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="13">{}</text>"#,
        ml + pw / 2.0,
        opts.height - 10.0,
        escape(&opts.x_label)
    );
    let y_label = if opts.log_y { format!("{} (log10)", opts.y_label) } else { opts.y_label.clone() };
    let _ = writeln!(
        s,
        r#"<text x="14" y="{:.2}" transform="rotate(-90 14 {:.2})" text-anchor="middle" font-family="sans-serif" font-size="13">{}</text>"#,
        mt + ph / 2.0,
        mt + ph / 2.0,
        escape(&y_label)
    );
    let coords: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.3},{:.3}", sx(x), sy(ty(y)))).collect();
    let _ = writeln!(
        s,
        r#"<polyline fill="none" stroke="steelblue" stroke-width="1.2" data-points="{}" points="{}"/>"#,
        coords.len(),
        coords.join(" ")
    );
    s.push_str("</svg>\n");
    s
}
