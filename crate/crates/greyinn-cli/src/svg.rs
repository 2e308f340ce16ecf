//! Minimal SVG line chart: plain polylines in a fixed 800x480 viewport.

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 50.0;

const PALETTE: [&str; 6] = [
    "#000000", "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e",
];

/// One plotted line: name plus (1-based time index, value) points.
pub struct ChartSeries {
    pub name: String,
    pub points: Vec<(usize, f64)>,
}

pub fn render_chart(series: &[ChartSeries]) -> String {
    let xs: Vec<f64> = series
        .iter()
        .flat_map(|s| s.points.iter().map(|&(k, _)| k as f64))
        .collect();
    let ys: Vec<f64> = series
        .iter()
        .flat_map(|s| s.points.iter().map(|&(_, v)| v))
        .collect();
    let (xmin, xmax) = bounds(&xs);
    let (ymin, ymax) = bounds(&ys);
    let sx = |x: f64| MARGIN + (x - xmin) / (xmax - xmin).max(1e-12) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - ymin) / (ymax - ymin).max(1e-12) * (HEIGHT - 2.0 * MARGIN);

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    out.push_str(&format!(
        "  <rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));
    // Axes.
    out.push_str(&format!(
        "  <path d=\"M {m} {m} L {m} {b} L {r} {b}\" stroke=\"#333333\" fill=\"none\"/>\n",
        m = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    ));
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<String> = s
            .points
            .iter()
            .map(|&(k, v)| format!("{:.2},{:.2}", sx(k as f64), sy(v)))
            .collect();
        out.push_str(&format!(
            "  <polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            pts.join(" ")
        ));
        // Legend entry.
        let ly = 20.0 + 16.0 * i as f64;
        out.push_str(&format!(
            "  <line x1=\"{x}\" y1=\"{ly}\" x2=\"{x2}\" y2=\"{ly}\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
            x = WIDTH - 150.0,
            x2 = WIDTH - 130.0,
        ));
        out.push_str(&format!(
            "  <text x=\"{x}\" y=\"{y}\" font-size=\"12\" font-family=\"monospace\">{}</text>\n",
            escape(&s.name),
            x = WIDTH - 124.0,
            y = ly + 4.0,
        ));
    }
    out.push_str("</svg>\n");
    out
}

fn bounds(values: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if lo == hi {
        (lo - 1.0, hi + 1.0)
    } else {
        (lo, hi)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
