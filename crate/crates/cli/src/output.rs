//! CSV logs and a minimal log-scale SVG chart.

use std::fmt::Write as _;
use std::io::{self, Write};

pub enum Values {
    Float(Vec<Option<f64>>),
    Flag(Vec<Option<bool>>),
}

pub struct Column {
    pub name: String,
    pub values: Values,
}

impl Column {
    pub fn float(name: impl Into<String>, values: Vec<Option<f64>>) -> Self {
        Self {
            name: name.into(),
            values: Values::Float(values),
        }
    }

    pub fn flag(name: impl Into<String>, values: Vec<Option<bool>>) -> Self {
        Self {
            name: name.into(),
            values: Values::Flag(values),
        }
    }

    fn cell(&self, i: usize) -> String {
        match &self.values {
            Values::Float(v) => v[i].map(format_number).unwrap_or_default(),
            Values::Flag(v) => v[i].map(|f| if f { "1" } else { "0" }.to_string()).unwrap_or_default(),
        }
    }

    pub fn floats(&self) -> Option<&[Option<f64>]> {
        match &self.values {
            Values::Float(v) => Some(v),
            Values::Flag(_) => None,
        }
    }
}

/// 17 significant digits: enough to round-trip every `f64`.
pub fn format_number(v: f64) -> String {
    format!("{v:.16e}")
}

/// One row per entry of `ks`; empty cells for missing values.
pub fn write_csv<W: Write>(out: &mut W, ks: &[usize], columns: &[Column]) -> io::Result<()> {
    write!(out, "k")?;
    for c in columns {
        write!(out, ",{}", c.name)?;
    }
    writeln!(out)?;
    for (i, k) in ks.iter().enumerate() {
        write!(out, "{k}")?;
        for c in columns {
            write!(out, ",{}", c.cell(i))?;
        }
        writeln!(out)?;
    }
    Ok(())
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 200.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;
const COLORS: [&str; 8] = ["#000000", "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2"];

/// Line chart of `series` against `ks` with a log-scale y axis. Missing,
/// zero and negative values break the line.
pub fn svg_chart(title: &str, ks: &[usize], series: &[(&str, &[Option<f64>])]) -> String {
    let positive = |v: &Option<f64>| v.filter(|x| *x > 0.0 && x.is_finite());
    let logs: Vec<f64> = series
        .iter()
        .flat_map(|(_, vals)| vals.iter().filter_map(positive))
        .map(f64::log10)
        .collect();
    let (mut lo, mut hi) = logs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        (lo, hi) = (-1.0, 1.0);
    }
    lo = lo.floor();
    hi = hi.ceil().max(lo + 1.0);
    let kmax = ks.iter().copied().max().unwrap_or(1).max(1) as f64;
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let x = |k: usize| LEFT + pw * k as f64 / kmax;
    let y = |v: f64| TOP + ph * (hi - v.log10()) / (hi - lo);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="18" text-anchor="middle">{}</text>"#, LEFT + pw / 2.0, escape(title));
    for e in (lo as i32)..=(hi as i32) {
        let yy = y(10f64.powi(e));
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT}" y1="{yy:.1}" x2="{:.1}" y2="{yy:.1}" stroke="#dddddd"/><text x="{:.1}" y="{:.1}" text-anchor="end">1e{e}</text>"##,
            LEFT + pw,
            LEFT - 6.0,
            yy + 4.0
        );
    }
    let ticks = 5;
    for t in 0..=ticks {
        let k = (kmax * t as f64 / ticks as f64).round() as usize;
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{k}</text>"#,
            x(k),
            TOP + ph + 18.0
        );
    }
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/><text x="{:.1}" y="{:.1}" text-anchor="middle">iteration k</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 12.0
    );
    for (i, (name, vals)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let mut segment: Vec<String> = Vec::new();
        let flush = |segment: &mut Vec<String>, s: &mut String| {
            if segment.len() > 1 {
                let _ = writeln!(
                    s,
                    r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                    segment.join(" ")
                );
            }
            segment.clear();
        };
        for (k, v) in ks.iter().zip(vals.iter()) {
            match positive(v) {
                Some(v) => segment.push(format!("{:.2},{:.2}", x(*k), y(v))),
                None => flush(&mut segment, &mut s),
            }
        }
        flush(&mut segment, &mut s);
        let ly = TOP + 10.0 + 18.0 * i as f64;
        let lx = WIDTH - RIGHT + 15.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            escape(name)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
