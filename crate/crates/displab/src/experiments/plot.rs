use std::fmt::Write as _;

use super::fit::SlopeFit;
use super::output::Series;

const W: f64 = 640.0;
const H: f64 = 420.0;
const ML: f64 = 70.0;
const MR: f64 = 160.0;
const MT: f64 = 30.0;
const MB: f64 = 50.0;
const COLORS: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#7f7f7f"];

struct Curve {
    label: String,
    pts: Vec<(f64, f64)>,
    dashed: bool,
    markers: bool,
}

fn bounds(curves: &[Curve]) -> Option<(f64, f64, f64, f64)> {
    let mut it = curves.iter().flat_map(|c| c.pts.iter()).filter(|(x, y)| x.is_finite() && y.is_finite());
    let &(x0, y0) = it.next()?;
    let (mut a, mut b, mut c, mut d) = (x0, x0, y0, y0);
    for &(x, y) in it {
        a = a.min(x);
        b = b.max(x);
        c = c.min(y);
        d = d.max(y);
    }
    if b - a <= 0.0 {
        a -= 0.5;
        b += 0.5;
    }
    if d - c <= 0.0 {
        c -= 0.5;
        d += 0.5;
    }
    let pad = 0.05 * (d - c);
    Some((a, b, c - pad, d + pad))
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn render(title: &str, xlabel: &str, ylabel: &str, curves: &[Curve], log: bool) -> String {
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="18" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#, (ML + W - MR) / 2.0, esc(title));
    let Some((x0, x1, y0, y1)) = bounds(curves) else {
        let _ = writeln!(s, r#"<text x="{}" y="{}" font-family="sans-serif" font-size="16" text-anchor="middle">no data</text>"#, W / 2.0, H / 2.0);
        s.push_str("</svg>\n");
        return s;
    };
    let (pw, ph) = (W - ML - MR, H - MT - MB);
    let px = |x: f64| ML + (x - x0) / (x1 - x0) * pw;
    let py = |y: f64| MT + ph - (y - y0) / (y1 - y0) * ph;
    let _ = writeln!(s, r#"<rect x="{ML}" y="{MT}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#);
    for k in 0..=4 {
        let f = k as f64 / 4.0;
        let (xv, yv) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
        let (tx, ty) = if log { (format!("e^{xv:.2}"), format!("e^{yv:.2}")) } else { (format!("{xv:.3}"), format!("{yv:.3}")) };
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="10" text-anchor="middle">{}</text>"#, px(xv), MT + ph + 14.0, tx);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="10" text-anchor="end">{}</text>"#, ML - 4.0, py(yv) + 3.0, ty);
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"#, ML + pw / 2.0, H - 12.0, esc(xlabel));
    let _ = writeln!(s, r#"<text x="14" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 14 {})">{}</text>"#, MT + ph / 2.0, MT + ph / 2.0, esc(ylabel));
    for (i, c) in curves.iter().enumerate() {
        let col = COLORS[i % COLORS.len()];
        let pts: Vec<String> = c
            .pts
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        if c.markers {
            for p in &pts {
                let (a, b) = p.split_once(',').expect("formatted pair");
                let _ = writeln!(s, r#"<circle cx="{a}" cy="{b}" r="3" fill="{col}"/>"#);
            }
        } else {
            let dash = if c.dashed { r#" stroke-dasharray="6,4""# } else { "" };
            let _ = writeln!(s, r#"<polyline fill="none" stroke="{col}" stroke-width="1.5"{dash} points="{}"/>"#, pts.join(" "));
        }
        let ly = MT + 14.0 + 16.0 * i as f64;
        let _ = writeln!(s, r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{col}" stroke-width="2"/>"#, W - MR + 8.0, W - MR + 28.0);
        let _ = writeln!(s, r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11">{}</text>"#, W - MR + 32.0, ly + 4.0, esc(&c.label));
    }
    s.push_str("</svg>\n");
    s
}

/// First column against every other column.
pub fn series_svg(series: &Series) -> String {
    let xk = series.columns.first().cloned().unwrap_or_default();
    let tr = |v: f64| if series.loglog { if v > 0.0 { v.ln() } else { f64::NAN } } else { v };
    let curves: Vec<Curve> = (1..series.columns.len())
        .map(|k| Curve {
            label: series.columns[k].clone(),
            pts: series.rows.iter().map(|r| (tr(r[0]), tr(r[k]))).collect(),
            dashed: series.columns[k].contains("ref") || series.columns[k].contains("pred") || series.columns[k].contains("model"),
            markers: false,
        })
        .collect();
    render(&series.name, &xk, "value", &curves, series.loglog)
}

/// Data points, fitted line and predicted slope through the data centroid.
pub fn fit_svg(fit: &SlopeFit) -> String {
    let mut curves = vec![Curve { label: "measured".into(), pts: fit.log_x.iter().cloned().zip(fit.log_y.iter().cloned()).collect(), dashed: false, markers: true }];
    if let (Some(&a), Some(&b)) = (fit.log_x.first(), fit.log_x.last()) {
        curves.push(Curve {
            label: format!("fit {:.3}", fit.slope),
            pts: vec![(a, fit.intercept + fit.slope * a), (b, fit.intercept + fit.slope * b)],
            dashed: false,
            markers: false,
        });
        if let Some(p) = fit.predicted {
            let n = fit.log_x.len() as f64;
            let (mx, my) = (fit.log_x.iter().sum::<f64>() / n, fit.log_y.iter().sum::<f64>() / n);
            curves.push(Curve {
                label: format!("predicted {p:.3}"),
                pts: vec![(a, my + p * (a - mx)), (b, my + p * (b - mx))],
                dashed: true,
                markers: false,
            });
        }
    }
    render(&fit.name, "ln x", "ln y", &curves, true)
}
