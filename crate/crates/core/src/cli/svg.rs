//! Minimal SVG line plot with an optional ±1 std band.

use crate::verify::fmt_sig6;

const W: f64 = 640.0;
const H: f64 = 400.0;
const PAD: f64 = 50.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Plots `ys` against `xs`; `band` gives a symmetric half-width per point.
pub fn line_plot(title: &str, y_label: &str, xs: &[f64], ys: &[f64], band: Option<&[f64]>) -> String {
    let (lo, hi) = ys.iter().enumerate().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (i, &y)| {
        let b = band.map(|b| b[i]).unwrap_or(0.0);
        (lo.min(y - b), hi.max(y + b))
    });
    let (lo, hi) = if hi - lo < 1e-12 { (lo - 0.5, hi + 0.5) } else { (lo, hi) };
    let x_min = xs.first().copied().unwrap_or(0.0);
    let x_max = xs.last().copied().unwrap_or(1.0);
    let x_span = if x_max > x_min { x_max - x_min } else { 1.0 };
    let px = |x: f64| PAD + (x - x_min) / x_span * (W - 2.0 * PAD);
    let py = |y: f64| H - PAD - (y - lo) / (hi - lo) * (H - 2.0 * PAD);

    let mut s = String::new();
    s.push_str(&format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n"
    ));
    s.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    s.push_str(&format!(
        "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">{}</text>\n",
        W / 2.0,
        escape(title)
    ));
    if let Some(b) = band {
        let upper = xs.iter().zip(ys).zip(b).map(|((x, y), d)| format!("{:.2},{:.2}", px(*x), py(y + d)));
        let lower = xs.iter().zip(ys).zip(b).rev().map(|((x, y), d)| format!("{:.2},{:.2}", px(*x), py(y - d)));
        let pts: Vec<String> = upper.chain(lower).collect();
        s.push_str(&format!(
            "<polygon points=\"{}\" fill=\"#4477aa\" fill-opacity=\"0.25\" stroke=\"none\"/>\n",
            pts.join(" ")
        ));
    }
    let line: Vec<String> = xs.iter().zip(ys).map(|(x, y)| format!("{:.2},{:.2}", px(*x), py(*y))).collect();
    s.push_str(&format!(
        "<polyline points=\"{}\" fill=\"none\" stroke=\"#224488\" stroke-width=\"2\"/>\n",
        line.join(" ")
    ));
    // axes
    s.push_str(&format!(
        "<line x1=\"{PAD}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        H - PAD,
        W - PAD,
        H - PAD
    ));
    s.push_str(&format!(
        "<line x1=\"{PAD}\" y1=\"{PAD}\" x2=\"{PAD}\" y2=\"{}\" stroke=\"black\"/>\n",
        H - PAD
    ));
    for (label, y) in [(fmt_sig6(lo), H - PAD), (fmt_sig6(hi), PAD)] {
        s.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">{}</text>\n",
            PAD - 4.0,
            y + 4.0,
            label
        ));
    }
    for (label, x) in [(fmt_sig6(x_min), PAD), (fmt_sig6(x_max), W - PAD)] {
        s.push_str(&format!(
            "<text x=\"{x}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">{label}</text>\n",
            H - PAD + 16.0
        ));
    }
    s.push_str(&format!(
        "<text x=\"14\" y=\"{}\" transform=\"rotate(-90 14 {})\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n",
        H / 2.0,
        H / 2.0,
        escape(y_label)
    ));
    s.push_str("</svg>\n");
    s
}
