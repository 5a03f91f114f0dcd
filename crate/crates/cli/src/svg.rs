//! Minimal stem plots, one panel per series, stacked vertically.

use std::fmt::Write as _;

const WIDTH: f64 = 720.0;
const PANEL: f64 = 180.0;
const MARGIN: f64 = 40.0;

pub struct Series<'a> {
    pub label: &'a str,
    pub values: &'a [f64],
}

pub fn stem_plot(title: &str, series: &[Series<'_>]) -> String {
    let height = MARGIN + series.len() as f64 * (PANEL + MARGIN);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{MARGIN}" y="24" font-size="14">{}</text>"#, escape(title));
    for (i, ser) in series.iter().enumerate() {
        let top = MARGIN + i as f64 * (PANEL + MARGIN);
        panel(&mut s, ser, top);
    }
    s.push_str("</svg>\n");
    s
}

fn panel(s: &mut String, ser: &Series<'_>, top: f64) {
    let n = ser.values.len();
    let lo = ser.values.iter().copied().fold(0.0f64, f64::min);
    let hi = ser.values.iter().copied().fold(0.0f64, f64::max);
    let span = if hi - lo > 0.0 { hi - lo } else { 1.0 };
    let (lo, hi) = (lo - 0.05 * span, hi + 0.05 * span);
    let plot_w = WIDTH - 2.0 * MARGIN;
    let x = |k: usize| MARGIN + if n > 1 { plot_w * k as f64 / (n - 1) as f64 } else { plot_w / 2.0 };
    let y = |v: f64| top + PANEL * (hi - v) / (hi - lo);
    let zero = y(0.0);
    let radius = if n > 100 { 1.2 } else { 2.5 };

    let _ = writeln!(s, r#"<text x="{MARGIN}" y="{:.2}">{}</text>"#, top + 14.0, escape(ser.label));
    let _ = writeln!(
        s,
        r##"<rect x="{MARGIN}" y="{top:.2}" width="{plot_w:.2}" height="{PANEL:.2}" fill="none" stroke="#bbb"/>"##
    );
    let _ = writeln!(
        s,
        r##"<line x1="{MARGIN}" y1="{zero:.2}" x2="{:.2}" y2="{zero:.2}" stroke="#888"/>"##,
        MARGIN + plot_w
    );
    let _ = writeln!(s, r#"<text x="4" y="{:.2}">{hi:.3}</text>"#, top + 10.0);
    let _ = writeln!(s, r#"<text x="4" y="{:.2}">{lo:.3}</text>"#, top + PANEL);
    let _ = writeln!(s, r##"<g stroke="#1f5fa8" fill="#1f5fa8">"##);
    for (k, &v) in ser.values.iter().enumerate() {
        let (px, py) = (x(k), y(v));
        let _ = writeln!(
            s,
            r#"<line x1="{px:.2}" y1="{zero:.2}" x2="{px:.2}" y2="{py:.2}"/><circle cx="{px:.2}" cy="{py:.2}" r="{radius}"/>"#
        );
    }
    s.push_str("</g>\n");
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
