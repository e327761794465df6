//! Static SVG rendering of regret curves. A convenience view over the CSV
//! output, never the source of truth.

use std::fmt::Write as _;

use crate::experiment::RegretCurve;

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

#[derive(Debug, Clone)]
pub struct PlotOptions {
    pub title: String,
    /// Logarithmic x axis (budget), matching the usual presentation of
    /// regret-vs-budget curves.
    pub log_x: bool,
    pub width: u32,
    pub height: u32,
}

impl Default for PlotOptions {
    fn default() -> Self {
        PlotOptions {
            title: "mean regret proxy vs budget spent".into(),
            log_x: true,
            width: 820,
            height: 520,
        }
    }
}

struct Frame {
    x0: f64,
    y0: f64,
    x1: f64,
    y1: f64,
}

/// Render the curve to a standalone SVG document.
pub fn render_regret_svg(curve: &RegretCurve, opts: &PlotOptions) -> String {
    let margin_left = 70.0;
    let margin_right = 20.0;
    let margin_top = 40.0;
    let margin_bottom = 55.0;
    let w = opts.width as f64;
    let h = opts.height as f64;
    let frame = Frame {
        x0: margin_left,
        y0: margin_top,
        x1: w - margin_right,
        y1: h - margin_bottom,
    };

    let xs = &curve.checkpoint_budgets;
    let (x_min, x_max) = data_range(xs);
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for s in &curve.series {
        for &v in &s.mean {
            y_min = y_min.min(v);
            y_max = y_max.max(v);
        }
    }
    if !y_min.is_finite() || !y_max.is_finite() {
        y_min = 0.0;
        y_max = 1.0;
    }
    y_min = y_min.min(0.0);
    if (y_max - y_min).abs() < 1e-12 {
        y_max = y_min + 1.0;
    }

    let x_pos = |x: f64| -> f64 {
        let (v, lo, hi) = if opts.log_x {
            (
                x.max(f64::MIN_POSITIVE).log10(),
                x_min.log10(),
                x_max.log10(),
            )
        } else {
            (x, x_min, x_max)
        };
        let t = if hi > lo { (v - lo) / (hi - lo) } else { 0.5 };
        frame.x0 + t * (frame.x1 - frame.x0)
    };
    let y_pos = |y: f64| -> f64 {
        let t = (y - y_min) / (y_max - y_min);
        frame.y1 - t * (frame.y1 - frame.y0)
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        opts.width, opts.height, opts.width, opts.height
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="24" font-family="sans-serif" font-size="15" text-anchor="middle">{}</text>"#,
        w / 2.0,
        escape(&opts.title)
    );

    // gridlines and ticks
    for (x_tick, label) in x_ticks(x_min, x_max, opts.log_x) {
        let px = x_pos(x_tick);
        let _ = writeln!(
            svg,
            r##"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="#dddddd"/>"##,
            frame.y0, frame.y1
        );
        let _ = writeln!(
            svg,
            r#"<text x="{px:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="middle">{label}</text>"#,
            frame.y1 + 16.0
        );
    }
    for y_tick in linear_ticks(y_min, y_max, 6) {
        let py = y_pos(y_tick);
        let _ = writeln!(
            svg,
            r##"<line x1="{:.2}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="#dddddd"/>"##,
            frame.x0, frame.x1
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{py:.2}" font-family="sans-serif" font-size="11" text-anchor="end" dominant-baseline="middle">{}</text>"#,
            frame.x0 - 6.0,
            tick_label(y_tick)
        );
    }

    // axes
    let _ = writeln!(
        svg,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black"/>"#,
        frame.x0, frame.y1, frame.x1, frame.y1
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black"/>"#,
        frame.x0, frame.y0, frame.x0, frame.y1
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="13" text-anchor="middle">budget spent{}</text>"#,
        (frame.x0 + frame.x1) / 2.0,
        frame.y1 + 38.0,
        if opts.log_x { " (log scale)" } else { "" }
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{:.2}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 16 {:.2})">regret proxy</text>"#,
        (frame.y0 + frame.y1) / 2.0,
        (frame.y0 + frame.y1) / 2.0
    );

    // series
    for (i, series) in curve.series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut points = String::new();
        for (&x, &y) in xs.iter().zip(&series.mean) {
            let _ = write!(points, "{:.2},{:.2} ", x_pos(x), y_pos(y));
        }
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.8"/>"#,
            points.trim_end()
        );
        // legend entry
        let ly = frame.y0 + 8.0 + 18.0 * i as f64;
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2.5"/>"#,
            frame.x0 + 10.0,
            frame.x0 + 34.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{ly:.2}" font-family="sans-serif" font-size="12" dominant-baseline="middle">{}</text>"#,
            frame.x0 + 40.0,
            escape(&series.policy)
        );
    }

    svg.push_str("</svg>\n");
    svg
}

fn data_range(xs: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &x in xs {
        lo = lo.min(x);
        hi = hi.max(x);
    }
    if !lo.is_finite() || !hi.is_finite() {
        return (1.0, 10.0);
    }
    if lo == hi {
        hi = lo + 1.0;
    }
    (lo, hi)
}

fn x_ticks(lo: f64, hi: f64, log: bool) -> Vec<(f64, String)> {
    if log {
        let d0 = lo.log10().floor() as i32;
        let d1 = hi.log10().ceil() as i32;
        (d0..=d1)
            .map(|d| {
                let v = 10f64.powi(d);
                (v, tick_label(v))
            })
            .filter(|(v, _)| *v >= lo * 0.999 && *v <= hi * 1.001)
            .collect()
    } else {
        linear_ticks(lo, hi, 6)
            .into_iter()
            .map(|v| (v, tick_label(v)))
            .collect()
    }
}

fn linear_ticks(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let span = hi - lo;
    let raw = span / count as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| span / s <= count as f64)
        .unwrap_or(mag * 10.0);
    let first = (lo / step).ceil() * step;
    let mut ticks = Vec::new();
    let mut v = first;
    while v <= hi + 1e-9 * span {
        ticks.push(v);
        v += step;
    }
    ticks
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if !(0.01..10_000.0).contains(&a) {
        format!("{v:.0e}")
    } else if a >= 10.0 {
        format!("{v:.0}")
    } else {
        format!("{v}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::PolicyCurve;

    fn curve() -> RegretCurve {
        RegretCurve {
            checkpoint_budgets: vec![100.0, 1000.0, 10000.0],
            series: vec![
                PolicyCurve {
                    policy: "cucb-v".into(),
                    replications: 5,
                    mean: vec![10.0, 25.0, 40.0],
                    stderr: vec![1.0, 2.0, 3.0],
                },
                PolicyCurve {
                    policy: "cucb".into(),
                    replications: 5,
                    mean: vec![12.0, 60.0, 160.0],
                    stderr: vec![1.0, 4.0, 9.0],
                },
            ],
        }
    }

    #[test]
    fn renders_one_polyline_per_policy() {
        for log_x in [false, true] {
            let svg = render_regret_svg(
                &curve(),
                &PlotOptions {
                    log_x,
                    ..PlotOptions::default()
                },
            );
            assert_eq!(svg.matches("<polyline").count(), 2);
            assert!(svg.contains("cucb-v"));
            assert!(svg.contains("</svg>"));
            assert!(svg.starts_with("<svg"));
        }
    }

    #[test]
    fn log_ticks_cover_decades() {
        let svg = render_regret_svg(&curve(), &PlotOptions::default());
        assert!(svg.contains(">100<") || svg.contains(">1e2<"));
        assert!(svg.contains(">1e4<") || svg.contains(">10000<"));
    }

    #[test]
    fn degenerate_single_point_does_not_panic() {
        let c = RegretCurve {
            checkpoint_budgets: vec![5.0],
            series: vec![PolicyCurve {
                policy: "ts".into(),
                replications: 1,
                mean: vec![0.0],
                stderr: vec![0.0],
            }],
        };
        let svg = render_regret_svg(&c, &PlotOptions::default());
        assert!(svg.contains("<polyline"));
    }
}
