//! Minimal SVG plots on a fixed 600x600 canvas.

use std::fmt::Write as _;

const SIZE: f64 = 600.0;
const PAD: f64 = 40.0;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

/// One plotted point; `group` picks the colour.
#[derive(Debug, Clone, Copy)]
pub struct Mark {
    pub x: f64,
    pub y: f64,
    pub group: usize,
}

fn bounds(marks: &[Mark]) -> (f64, f64, f64, f64) {
    let (mut x0, mut x1, mut y0, mut y1) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for m in marks.iter().filter(|m| m.x.is_finite() && m.y.is_finite()) {
        x0 = x0.min(m.x);
        x1 = x1.max(m.x);
        y0 = y0.min(m.y);
        y1 = y1.max(m.y);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-300);
    let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
    (cx - span / 2.0, cy - span / 2.0, span, span)
}

/// Scatter (or polyline when `connect`) with equal axis scales and the
/// coordinate axes drawn through the origin.
pub fn plot(title: &str, marks: &[Mark], connect: bool) -> String {
    let (x0, y0, w, h) = bounds(marks);
    let inner = SIZE - 2.0 * PAD;
    let px = |x: f64| PAD + (x - x0) / w * inner;
    let py = |y: f64| SIZE - PAD - (y - y0) / h * inner;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 600 600\" width=\"600\" height=\"600\">"
    );
    let _ = writeln!(s, "<rect width=\"600\" height=\"600\" fill=\"white\"/>");
    let _ = writeln!(
        s,
        "<text x=\"300\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">{}</text>",
        escape(title)
    );
    let (ox, oy) = (px(0.0), py(0.0));
    let _ = writeln!(
        s,
        "<line x1=\"{PAD}\" y1=\"{oy:.2}\" x2=\"{}\" y2=\"{oy:.2}\" stroke=\"#999\"/>",
        SIZE - PAD
    );
    let _ = writeln!(
        s,
        "<line x1=\"{ox:.2}\" y1=\"{PAD}\" x2=\"{ox:.2}\" y2=\"{}\" stroke=\"#999\"/>",
        SIZE - PAD
    );
    if connect {
        for w in marks.windows(2) {
            let c = PALETTE[w[0].group % PALETTE.len()];
            let _ = writeln!(
                s,
                "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"{c}\"/>",
                px(w[0].x),
                py(w[0].y),
                px(w[1].x),
                py(w[1].y)
            );
        }
    } else {
        for m in marks.iter().filter(|m| m.x.is_finite() && m.y.is_finite()) {
            let c = PALETTE[m.group % PALETTE.len()];
            let _ = writeln!(
                s,
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"1.5\" fill=\"{c}\"/>",
                px(m.x),
                py(m.y)
            );
        }
    }
    s.push_str("</svg>\n");
    s
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
    fn fixed_viewbox() {
        let marks = [
            Mark {
                x: -1.0,
                y: 0.0,
                group: 0,
            },
            Mark {
                x: 1.0,
                y: 2.0,
                group: 1,
            },
        ];
        let s = plot("a<b", &marks, false);
        assert!(s.contains("viewBox=\"0 0 600 600\""));
        assert_eq!(s.matches("<circle").count(), 2);
        assert!(s.contains("a&lt;b"));
    }
}
