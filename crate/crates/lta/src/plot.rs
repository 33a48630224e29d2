//! Minimal SVG charts for learning curves and CIR summaries.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 56.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"];

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(out, r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#, WIDTH / 2.0, escape(title));
}

fn axes(out: &mut String, x_label: &str, y_label: &str, y_lo: f64, y_hi: f64) {
    let (x0, y0, x1, y1) = (MARGIN, HEIGHT - MARGIN, WIDTH - MARGIN / 2.0, MARGIN);
    let _ = writeln!(out, r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>"#);
    let _ = writeln!(out, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#);
    for t in 0..=4 {
        let v = y_lo + (y_hi - y_lo) * t as f64 / 4.0;
        let y = y0 - (y0 - y1) * t as f64 / 4.0;
        let _ = writeln!(out, r#"<text x="{}" y="{:.1}" text-anchor="end">{:.4}</text>"#, x0 - 6.0, y + 4.0, v);
    }
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, (x0 + x1) / 2.0, HEIGHT - 14.0, escape(x_label));
    let _ = writeln!(
        out,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(y_label)
    );
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Line chart of `(iteration, Q)`.
pub fn q_history_svg(history: &[(usize, f64)]) -> String {
    let mut out = String::new();
    header(&mut out, "Learning curve");
    let lo = history.iter().map(|h| h.1).fold(f64::INFINITY, f64::min);
    let hi = history.iter().map(|h| h.1).fold(f64::NEG_INFINITY, f64::max);
    let (lo, hi) = if history.is_empty() { (0.0, 1.0) } else if hi > lo { (lo, hi) } else { (lo - 0.5, hi + 0.5) };
    axes(&mut out, "iteration", "Q", lo, hi);
    let last = history.last().map_or(1, |h| h.0.max(1)) as f64;
    let mut points = String::new();
    for (it, q) in history {
        let x = MARGIN + (WIDTH - 1.5 * MARGIN) * (*it as f64 / last);
        let y = (HEIGHT - MARGIN) - (HEIGHT - 2.0 * MARGIN) * ((q - lo) / (hi - lo));
        let _ = write!(points, "{x:.2},{y:.2} ");
    }
    let _ = writeln!(out, r#"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#, PALETTE[0], points.trim_end());
    out.push_str("</svg>\n");
    out
}

/// Grouped bar chart of mean CIR, one group per front and one bar per method.
pub fn cir_svg(rows: &[(String, String, f64)]) -> String {
    let mut methods: Vec<&str> = Vec::new();
    let mut fronts: Vec<&str> = Vec::new();
    for (m, f, _) in rows {
        if !methods.contains(&m.as_str()) {
            methods.push(m);
        }
        if !fronts.contains(&f.as_str()) {
            fronts.push(f);
        }
    }
    let mut out = String::new();
    header(&mut out, "Correct identification rate");
    axes(&mut out, "front", "CIR", 0.0, 1.0);
    let plot_w = WIDTH - 1.5 * MARGIN;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let group = plot_w / fronts.len().max(1) as f64;
    let bar = group * 0.8 / methods.len().max(1) as f64;
    for (fi, front) in fronts.iter().enumerate() {
        let gx = MARGIN + group * fi as f64 + group * 0.1;
        for (mi, method) in methods.iter().enumerate() {
            if let Some((_, _, v)) = rows.iter().find(|(m, f, _)| m == method && f == front) {
                let h = plot_h * v.clamp(0.0, 1.0);
                let _ = writeln!(
                    out,
                    r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                    gx + bar * mi as f64,
                    HEIGHT - MARGIN - h,
                    bar,
                    h,
                    PALETTE[mi % PALETTE.len()]
                );
            }
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{}" text-anchor="middle" font-size="10">{}</text>"#,
            gx + group * 0.4,
            HEIGHT - MARGIN + 14.0,
            escape(front)
        );
    }
    for (mi, method) in methods.iter().enumerate() {
        let y = MARGIN + 14.0 * mi as f64;
        let _ = writeln!(out, r#"<rect x="{}" y="{}" width="10" height="10" fill="{}"/>"#, WIDTH - 150.0, y, PALETTE[mi % PALETTE.len()]);
        let _ = writeln!(out, r#"<text x="{}" y="{}">{}</text>"#, WIDTH - 134.0, y + 9.0, escape(method));
    }
    out.push_str("</svg>\n");
    out
}
