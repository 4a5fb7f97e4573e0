//! Minimal SVG writers for heatmaps and line plots.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 560.0;
const MARGIN: f64 = 70.0;

fn header(out: &mut String, w: f64, h: f64) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
}

/// Linear blue-white-red ramp on `t` in [0, 1].
fn color(t: f64) -> String {
    let t = if t.is_finite() {
        t.clamp(0.0, 1.0)
    } else {
        0.0
    };
    let (r, g, b) = if t < 0.5 {
        let s = t / 0.5;
        (40.0 + 215.0 * s, 70.0 + 185.0 * s, 160.0 + 95.0 * s)
    } else {
        let s = (t - 0.5) / 0.5;
        (255.0 - 35.0 * s, 255.0 - 205.0 * s, 255.0 - 215.0 * s)
    };
    format!(
        "#{:02x}{:02x}{:02x}",
        r.round() as u8,
        g.round() as u8,
        b.round() as u8
    )
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// `values[i][j]` is drawn at column `j` (x axis) and row `i` (y axis, upwards).
pub fn heatmap(
    title: &str,
    x_label: &str,
    xs: &[f64],
    y_label: &str,
    ys: &[f64],
    values: &[Vec<f64>],
) -> String {
    let mut out = String::new();
    header(&mut out, WIDTH + 90.0, HEIGHT);
    let finite = values.iter().flatten().copied().filter(|v| v.is_finite());
    let (lo, hi) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
        (a.min(v), b.max(v))
    });
    let (lo, hi) = if lo.is_finite() { (lo, hi) } else { (0.0, 0.0) };
    let span = if hi > lo { hi - lo } else { 1.0 };

    let pw = WIDTH - 2.0 * MARGIN;
    let ph = HEIGHT - 2.0 * MARGIN;
    let nx = xs.len().max(1);
    let ny = ys.len().max(1);
    let cw = pw / nx as f64;
    let ch = ph / ny as f64;
    for (i, row) in values.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            let x = MARGIN + j as f64 * cw;
            let y = MARGIN + ph - (i + 1) as f64 * ch;
            let _ = writeln!(
                out,
                r#"<rect x="{x:.3}" y="{y:.3}" width="{:.3}" height="{:.3}" fill="{}"/>"#,
                cw + 0.05,
                ch + 0.05,
                color((v - lo) / span)
            );
        }
    }
    axes(&mut out, title, x_label, xs, y_label, ys);

    // color bar with min and max
    let bx = WIDTH - MARGIN + 20.0;
    let steps = 50;
    for s in 0..steps {
        let t = s as f64 / (steps - 1) as f64;
        let y = MARGIN + ph - (s + 1) as f64 * ph / steps as f64;
        let _ = writeln!(
            out,
            r#"<rect x="{bx}" y="{y:.3}" width="18" height="{:.3}" fill="{}"/>"#,
            ph / steps as f64 + 0.05,
            color(t)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}">max {hi:.4e}</text>"#,
        bx,
        MARGIN - 8.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}">min {lo:.4e}</text>"#,
        bx,
        MARGIN + ph + 18.0
    );
    out.push_str("</svg>\n");
    out
}

fn axes(out: &mut String, title: &str, x_label: &str, xs: &[f64], y_label: &str, ys: &[f64]) {
    let pw = WIDTH - 2.0 * MARGIN;
    let ph = HEIGHT - 2.0 * MARGIN;
    let _ = writeln!(
        out,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        MARGIN / 2.0,
        escape(title)
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 20.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="20" y="{}" text-anchor="middle" transform="rotate(-90 20 {})">{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(y_label)
    );
    if let (Some(a), Some(b)) = (xs.first(), xs.last()) {
        let _ = writeln!(
            out,
            r#"<text x="{MARGIN}" y="{}" text-anchor="start">{a:.3}</text>"#,
            MARGIN + ph + 16.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="end">{b:.3}</text>"#,
            MARGIN + pw,
            MARGIN + ph + 16.0
        );
    }
    if let (Some(a), Some(b)) = (ys.first(), ys.last()) {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="end">{a:.3}</text>"#,
            MARGIN - 6.0,
            MARGIN + ph
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="end">{b:.3}</text>"#,
            MARGIN - 6.0,
            MARGIN + 10.0
        );
    }
}

/// Several named series sharing one x axis.
pub fn line_plot(
    title: &str,
    x_label: &str,
    xs: &[f64],
    y_label: &str,
    series: &[(String, Vec<f64>)],
) -> String {
    const PALETTE: [&str; 6] = [
        "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
    ];
    let mut out = String::new();
    header(&mut out, WIDTH, HEIGHT);
    let all = series
        .iter()
        .flat_map(|(_, v)| v.iter().copied())
        .filter(|v| v.is_finite());
    let (mut lo, mut hi) = all.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
        (a.min(v), b.max(v))
    });
    if !lo.is_finite() {
        (lo, hi) = (0.0, 1.0);
    }
    if hi <= lo {
        hi = lo + 1.0;
    }
    let (x0, x1) = match (xs.first(), xs.last()) {
        (Some(&a), Some(&b)) if b > a => (a, b),
        (Some(&a), _) => (a, a + 1.0),
        _ => (0.0, 1.0),
    };
    let pw = WIDTH - 2.0 * MARGIN;
    let ph = HEIGHT - 2.0 * MARGIN;
    let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * pw;
    let py = |y: f64| MARGIN + ph - (y - lo) / (hi - lo) * ph;
    axes(&mut out, title, x_label, xs, y_label, &[lo, hi]);
    for (k, (name, ys)) in series.iter().enumerate() {
        let c = PALETTE[k % PALETTE.len()];
        let pts: Vec<String> = xs
            .iter()
            .zip(ys)
            .filter(|(_, y)| y.is_finite())
            .map(|(&x, &y)| format!("{:.3},{:.3}", px(x), py(y)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{c}" stroke-width="1.5" points="{}"/>"#,
            pts.join(" ")
        );
        let ly = MARGIN + 16.0 * (k + 1) as f64;
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{ly}" fill="{c}">{}</text>"#,
            MARGIN + pw - 8.0 - 0.0,
            escape(name)
        );
    }
    out.push_str("</svg>\n");
    out
}
