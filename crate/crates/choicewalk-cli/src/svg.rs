//! Hand-rolled SVG line charts.
//!
//! The CLI draws two kinds of pictures: activation curves (probability
//! against step count) and ratio trends (rho against instance scale).
//! Both are polyline charts with axes, ticks, and a legend.  The renderer
//! writes plain SVG text with all coordinates rounded to two decimals, so
//! identical inputs produce byte-identical files; nothing external is
//! referenced and no timestamp is embedded.

use choicewalk::{Error, Result};

/// One named polyline.
#[derive(Debug, Clone)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 55.0;
const MAX_SERIES: usize = 8;

/// Fixed palette; charts are capped at eight series so every curve keeps a
/// distinguishable color.
const PALETTE: [&str; MAX_SERIES] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

fn fmt(value: f64) -> String {
    // Two decimals are plenty at chart resolution and keep output stable.
    let rounded = (value * 100.0).round() / 100.0;
    // Avoid "-0" artifacts from rounding tiny negatives.
    let rounded = if rounded == 0.0 { 0.0 } else { rounded };
    format!("{rounded}")
}

/// Pick a "nice" tick spacing (1, 2, or 5 times a power of ten) that yields
/// roughly `target` intervals over `span`.
fn nice_step(span: f64, target: usize) -> f64 {
    let raw = span / target as f64;
    let magnitude = 10f64.powf(raw.log10().floor());
    let residual = raw / magnitude;
    let factor = if residual <= 1.5 {
        1.0
    } else if residual <= 3.5 {
        2.0
    } else if residual <= 7.5 {
        5.0
    } else {
        10.0
    };
    factor * magnitude
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    if hi <= lo {
        return vec![lo];
    }
    let step = nice_step(hi - lo, 5);
    let first = (lo / step).ceil();
    let last = (hi / step).floor();
    let mut out = Vec::new();
    let mut k = first;
    while k <= last + 0.5 {
        out.push(k * step);
        k += 1.0;
    }
    out
}

fn tick_label(value: f64) -> String {
    // Ticks come from nice_step, so a short decimal form always exists.
    let rounded = (value * 1e6).round() / 1e6;
    format!("{rounded}")
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Render a line chart.  Fails with a usage error when there are no series,
/// more than eight, or no finite data points.
pub fn render_chart(
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[Series],
) -> Result<String> {
    if series.is_empty() || series.len() > MAX_SERIES {
        return Err(Error::InvalidParameter(format!(
            "charts need between 1 and {MAX_SERIES} series, got {}",
            series.len()
        )));
    }
    let finite = series
        .iter()
        .flat_map(|s| s.points.iter())
        .filter(|(x, y)| x.is_finite() && y.is_finite());
    let mut x_lo = f64::INFINITY;
    let mut x_hi = f64::NEG_INFINITY;
    let mut y_lo = f64::INFINITY;
    let mut y_hi = f64::NEG_INFINITY;
    for (x, y) in finite {
        x_lo = x_lo.min(*x);
        x_hi = x_hi.max(*x);
        y_lo = y_lo.min(*y);
        y_hi = y_hi.max(*y);
    }
    if !x_lo.is_finite() || !y_lo.is_finite() {
        return Err(Error::InvalidParameter(
            "chart has no finite data points".to_string(),
        ));
    }
    if x_hi - x_lo < 1e-12 {
        x_lo -= 0.5;
        x_hi += 0.5;
    }
    if y_hi - y_lo < 1e-12 {
        y_lo -= 0.5;
        y_hi += 0.5;
    }
    // Five percent breathing room on the value axis.
    let pad = 0.05 * (y_hi - y_lo);
    let y_lo = y_lo - pad;
    let y_hi = y_hi + pad;

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let to_px = |x: f64, y: f64| -> (f64, f64) {
        let px = MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
        let py = MARGIN_TOP + (y_hi - y) / (y_hi - y_lo) * plot_h;
        (px, py)
    };

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" \
         width=\"{WIDTH}\" height=\"{HEIGHT}\" font-family=\"sans-serif\">\n"
    ));
    svg.push_str(&format!(
        "  <rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));
    svg.push_str(&format!(
        "  <text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">{}</text>\n",
        fmt(WIDTH / 2.0),
        escape(title)
    ));

    // Grid and ticks.
    for tx in ticks(x_lo, x_hi) {
        let (px, _) = to_px(tx, y_lo);
        svg.push_str(&format!(
            "  <line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#dddddd\"/>\n",
            fmt(px),
            fmt(MARGIN_TOP),
            fmt(MARGIN_TOP + plot_h)
        ));
        svg.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"11\">{}</text>\n",
            fmt(px),
            fmt(MARGIN_TOP + plot_h + 18.0),
            tick_label(tx)
        ));
    }
    for ty in ticks(y_lo, y_hi) {
        let (_, py) = to_px(x_lo, ty);
        svg.push_str(&format!(
            "  <line x1=\"{0}\" y1=\"{2}\" x2=\"{1}\" y2=\"{2}\" stroke=\"#dddddd\"/>\n",
            fmt(MARGIN_LEFT),
            fmt(MARGIN_LEFT + plot_w),
            fmt(py)
        ));
        svg.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-size=\"11\">{}</text>\n",
            fmt(MARGIN_LEFT - 8.0),
            fmt(py + 4.0),
            tick_label(ty)
        ));
    }

    // Axes on top of the grid.
    svg.push_str(&format!(
        "  <line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n",
        fmt(MARGIN_LEFT),
        fmt(MARGIN_TOP),
        fmt(MARGIN_TOP + plot_h)
    ));
    svg.push_str(&format!(
        "  <line x1=\"{0}\" y1=\"{2}\" x2=\"{1}\" y2=\"{2}\" stroke=\"black\"/>\n",
        fmt(MARGIN_LEFT),
        fmt(MARGIN_LEFT + plot_w),
        fmt(MARGIN_TOP + plot_h)
    ));
    svg.push_str(&format!(
        "  <text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"13\">{}</text>\n",
        fmt(MARGIN_LEFT + plot_w / 2.0),
        fmt(HEIGHT - 12.0),
        escape(x_label)
    ));
    svg.push_str(&format!(
        "  <text x=\"18\" y=\"{}\" text-anchor=\"middle\" font-size=\"13\" \
         transform=\"rotate(-90 18 {})\">{}</text>\n",
        fmt(MARGIN_TOP + plot_h / 2.0),
        fmt(MARGIN_TOP + plot_h / 2.0),
        escape(y_label)
    ));

    // Data polylines.
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i];
        let pts: Vec<String> = s
            .points
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| {
                let (px, py) = to_px(x, y);
                format!("{},{}", fmt(px), fmt(py))
            })
            .collect();
        if pts.len() == 1 {
            // A single point would render an invisible polyline.
            let coord = pts[0].split(',').collect::<Vec<_>>();
            svg.push_str(&format!(
                "  <circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"{color}\"/>\n",
                coord[0], coord[1]
            ));
        } else {
            svg.push_str(&format!(
                "  <polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.8\" points=\"{}\"/>\n",
                pts.join(" ")
            ));
        }
    }

    // Legend, top-right inside the plot.
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i];
        let y = MARGIN_TOP + 14.0 + 18.0 * i as f64;
        let x = MARGIN_LEFT + plot_w - 190.0;
        svg.push_str(&format!(
            "  <line x1=\"{}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"{color}\" stroke-width=\"1.8\"/>\n",
            fmt(x),
            fmt(y),
            fmt(x + 24.0)
        ));
        svg.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-size=\"12\">{}</text>\n",
            fmt(x + 30.0),
            fmt(y + 4.0),
            escape(&s.name)
        ));
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn demo_series() -> Vec<Series> {
        vec![
            Series {
                name: "solo".to_string(),
                points: (0..=10).map(|t| (t as f64, t as f64 / 10.0)).collect(),
            },
            Series {
                name: "greedy <r=2>".to_string(),
                points: (0..=10)
                    .map(|t| (t as f64, (t as f64 / 10.0).sqrt()))
                    .collect(),
            },
        ]
    }

    #[test]
    fn renders_identical_bytes_for_identical_input() {
        let a = render_chart("demo", "t", "p", &demo_series()).unwrap();
        let b = render_chart("demo", "t", "p", &demo_series()).unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.ends_with("</svg>\n"));
        assert!(a.contains("polyline"));
    }

    #[test]
    fn escapes_markup_in_names() {
        let svg = render_chart("demo", "t", "p", &demo_series()).unwrap();
        assert!(svg.contains("greedy &lt;r=2&gt;"));
        assert!(!svg.contains("greedy <r=2>"));
    }

    #[test]
    fn rejects_empty_and_oversized_charts() {
        assert!(render_chart("x", "a", "b", &[]).is_err());
        let many: Vec<Series> = (0..9)
            .map(|i| Series {
                name: format!("s{i}"),
                points: vec![(0.0, 0.0), (1.0, 1.0)],
            })
            .collect();
        assert!(render_chart("x", "a", "b", &many).is_err());
    }

    #[test]
    fn tick_spacing_is_a_nice_number() {
        assert_eq!(nice_step(10.0, 5), 2.0);
        assert_eq!(nice_step(1.0, 5), 0.2);
        assert_eq!(nice_step(800.0, 5), 200.0);
        let t = ticks(0.0, 1.05);
        assert_eq!(t, vec![0.0, 0.2, 0.4, 0.6000000000000001, 0.8, 1.0]);
    }
}
