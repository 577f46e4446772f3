//! Minimal log-log line charts, emitted as plain SVG text.

use std::fmt::Write;

pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

pub struct Panel {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

const W: f64 = 420.0;
const H: f64 = 320.0;
const MARGIN: (f64, f64, f64, f64) = (60.0, 20.0, 30.0, 50.0); // left, right, top, bottom
const COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

/// Panels side by side in one document.
pub fn render(panels: &[Panel]) -> String {
    let mut s = String::new();
    let width = W * panels.len().max(1) as f64;
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{H}" viewBox="0 0 {width} {H}" font-family="sans-serif" font-size="11">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="{width}" height="{H}" fill="white"/>"#).unwrap();
    for (i, p) in panels.iter().enumerate() {
        panel(&mut s, p, i as f64 * W);
    }
    s.push_str("</svg>\n");
    s
}

fn log_range(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    let (lo, hi) = values
        .filter(|v| *v > 0.0 && v.is_finite())
        .map(f64::log10)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
            (a.min(v), b.max(v))
        });
    if lo > hi {
        return None;
    }
    let (lo, hi) = (lo.floor(), hi.ceil());
    Some(if lo == hi {
        (lo - 1.0, hi + 1.0)
    } else {
        (lo, hi)
    })
}

fn panel(s: &mut String, p: &Panel, x0: f64) {
    let (ml, mr, mt, mb) = MARGIN;
    let (pw, ph) = (W - ml - mr, H - mt - mb);
    writeln!(s, r#"<g transform="translate({x0},0)">"#).unwrap();
    writeln!(
        s,
        r#"<text x="{}" y="18" text-anchor="middle" font-size="13">{}</text>"#,
        W / 2.0,
        escape(&p.title)
    )
    .unwrap();
    let xs = log_range(p.series.iter().flat_map(|r| r.points.iter().map(|q| q.0)));
    let ys = log_range(p.series.iter().flat_map(|r| r.points.iter().map(|q| q.1)));
    writeln!(
        s,
        r##"<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="#333"/>"##
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        ml + pw / 2.0,
        H - 12.0,
        escape(&p.x_label)
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="14" y="{}" text-anchor="middle" transform="rotate(-90 14 {})">{}</text>"#,
        mt + ph / 2.0,
        mt + ph / 2.0,
        escape(&p.y_label)
    )
    .unwrap();
    let (Some((xl, xh)), Some((yl, yh))) = (xs, ys) else {
        s.push_str("</g>\n");
        return;
    };
    let px = |x: f64| ml + (x.log10() - xl) / (xh - xl) * pw;
    let py = |y: f64| mt + ph - (y.log10() - yl) / (yh - yl) * ph;
    for e in xl as i32..=xh as i32 {
        let x = px(10f64.powi(e));
        writeln!(
            s,
            r##"<line x1="{x:.1}" y1="{}" x2="{x:.1}" y2="{}" stroke="#ccc"/>"##,
            mt,
            mt + ph
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="{x:.1}" y="{}" text-anchor="middle">1e{e}</text>"#,
            mt + ph + 14.0
        )
        .unwrap();
    }
    for e in yl as i32..=yh as i32 {
        let y = py(10f64.powi(e));
        writeln!(
            s,
            r##"<line x1="{ml}" y1="{y:.1}" x2="{}" y2="{y:.1}" stroke="#ccc"/>"##,
            ml + pw
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="{}" y="{:.1}" text-anchor="end">1e{e}</text>"#,
            ml - 4.0,
            y + 4.0
        )
        .unwrap();
    }
    for (k, r) in p.series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let pts: Vec<String> = r
            .points
            .iter()
            .filter(|q| q.0 > 0.0 && q.1 > 0.0 && q.0.is_finite() && q.1.is_finite())
            .map(|q| format!("{:.1},{:.1}", px(q.0), py(q.1)))
            .collect();
        writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            pts.join(" ")
        )
        .unwrap();
        for q in &pts {
            let (x, y) = q.split_once(',').unwrap();
            writeln!(s, r#"<circle cx="{x}" cy="{y}" r="2.5" fill="{color}"/>"#).unwrap();
        }
        let ly = mt + 14.0 + 14.0 * k as f64;
        writeln!(
            s,
            r#"<text x="{}" y="{ly}" fill="{color}">{}</text>"#,
            ml + 8.0,
            escape(&r.name)
        )
        .unwrap();
    }
    s.push_str("</g>\n");
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_series() {
        let p = Panel {
            title: "n vs tolerance".into(),
            x_label: "tolerance".into(),
            y_label: "n".into(),
            series: vec![Series {
                name: "mc-clt".into(),
                points: vec![(1e-1, 1e3), (1e-2, 1e5)],
            }],
        };
        let svg = render(&[p]);
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("<polyline"));
        assert!(svg.trim_end().ends_with("</svg>"));
        // empty panels still close their group
        let empty = Panel {
            title: "t".into(),
            x_label: "x".into(),
            y_label: "y".into(),
            series: vec![],
        };
        assert_eq!(
            render(&[empty]).matches("<g").count(),
            render(&[]).matches("<g").count() + 1
        );
    }
}
