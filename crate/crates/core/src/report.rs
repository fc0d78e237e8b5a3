//! Text surfaces: `%.9g` number formatting, sweep CSVs and the SVG chart.

use std::fmt::Write;

use crate::game::SweepTable;

/// Format like C's `%.9g`: 9 significant digits, trailing zeros trimmed.
pub fn fmt_g9(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..9).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{m}e{sign}{:02}", exp.abs());
    }
    let decimals = (8 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Long form: one line per `(w, n)` with `n` in `table.ns`.
pub fn sweep_csv_long(table: &SweepTable) -> String {
    let mut out = String::from("w,n,E_w_n\n");
    for row in &table.rows {
        for (n, e) in table.ns.iter().zip(&row.values) {
            writeln!(out, "{},{},{}", fmt_g9(row.w), n, fmt_g9(*e)).unwrap();
        }
    }
    out
}

pub fn sweep_csv_summary(table: &SweepTable) -> String {
    let mut out = String::from("w,optimal_n,E_w\n");
    for row in &table.rows {
        writeln!(
            out,
            "{},{},{}",
            fmt_g9(row.w),
            row.optimal_n,
            fmt_g9(row.expected_reward)
        )
        .unwrap();
    }
    out
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

/// Line chart of `E_w(n)` against `w`, one polyline per `n`.
pub fn sweep_svg(table: &SweepTable) -> String {
    let (width, height) = (640.0, 420.0);
    let (left, right, top, bottom) = (70.0, 110.0, 30.0, 55.0);
    let plot_w = width - left - right;
    let plot_h = height - top - bottom;

    let ws: Vec<f64> = table.rows.iter().map(|r| r.w).collect();
    let (w_lo, w_hi) = bounds(ws.iter().copied());
    let (e_lo, e_hi) = bounds(table.rows.iter().flat_map(|r| r.values.iter().copied()));
    let x = |w: f64| left + (w - w_lo) / (w_hi - w_lo) * plot_w;
    let y = |e: f64| top + (e_hi - e) / (e_hi - e_lo) * plot_h;

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(svg, "<title>{}</title>", escape(&table.space)).unwrap();
    writeln!(
        svg,
        r#"<rect x="{left}" y="{top}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    )
    .unwrap();

    for i in 0..=4 {
        let t = i as f64 / 4.0;
        let w = w_lo + t * (w_hi - w_lo);
        let e = e_lo + t * (e_hi - e_lo);
        let (px, py) = (x(w), y(e));
        writeln!(
            svg,
            r#"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            top + plot_h,
            top + plot_h + 5.0,
            top + plot_h + 18.0,
            fmt_tick(w)
        )
        .unwrap();
        writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{py:.2}" x2="{left}" y2="{py:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            left - 5.0,
            left - 8.0,
            py + 4.0,
            fmt_tick(e)
        )
        .unwrap();
    }
    writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">w</text>"#,
        left + plot_w / 2.0,
        height - 12.0
    )
    .unwrap();
    writeln!(
        svg,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">expected reward</text>"#,
        top + plot_h / 2.0,
        top + plot_h / 2.0
    )
    .unwrap();

    for (k, n) in table.ns.iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        let points: Vec<String> = table
            .rows
            .iter()
            .map(|r| format!("{:.2},{:.2}", x(r.w), y(r.values[k])))
            .collect();
        writeln!(
            svg,
            r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{}"/>"#,
            points.join(" ")
        )
        .unwrap();
        let ly = top + 10.0 + 18.0 * k as f64;
        let lx = left + plot_w + 15.0;
        writeln!(
            svg,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{colour}" stroke-width="2"/><text x="{:.2}" y="{:.2}">n = {n}</text>"#,
            lx + 20.0,
            lx + 25.0,
            ly + 4.0
        )
        .unwrap();
    }
    svg.push_str("</svg>\n");
    svg
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn fmt_tick(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = trim_zeros(&s);
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
