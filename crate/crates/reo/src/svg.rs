//! Standalone SVG budget–accuracy plots.
//!
//! x is the token budget on a linear `0..l_max` axis, y is accuracy on
//! `0..1`. Each curve is one polyline through its grid nodes; the frontier
//! is drawn thick, dashed and black. Output depends only on the input.

use std::fmt::Write;

use reo_core::{BudgetAccuracyCurve, FrontierCurve};

use crate::error::{ReoError, Result};

pub const WIDTH: f64 = 640.0;
pub const HEIGHT: f64 = 400.0;
const LEFT: f64 = 56.0;
const RIGHT: f64 = 16.0;
const TOP: f64 = 16.0;
const BOTTOM: f64 = 40.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

/// Affine map from data to pixel coordinates.
#[derive(Debug, Clone, Copy)]
pub struct Frame {
    pub l_max: u64,
}

impl Frame {
    pub fn x(&self, budget: u64) -> f64 {
        LEFT + budget as f64 / self.l_max as f64 * (WIDTH - LEFT - RIGHT)
    }

    pub fn y(&self, accuracy: f64) -> f64 {
        TOP + (1.0 - accuracy) * (HEIGHT - TOP - BOTTOM)
    }
}

pub fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn points(frame: &Frame, curve: &BudgetAccuracyCurve) -> String {
    let mut s = String::new();
    for (&b, &v) in curve.grid().budgets().iter().zip(curve.values()) {
        if b > frame.l_max {
            break;
        }
        if !s.is_empty() {
            s.push(' ');
        }
        write!(s, "{:.2},{:.2}", frame.x(b), frame.y(v)).unwrap();
    }
    s
}

/// Renders `curves` and an optional `frontier`; at least one of the two must
/// be present. The x axis spans the largest `l_max` among the inputs.
pub fn render(curves: &[BudgetAccuracyCurve], frontier: Option<&FrontierCurve>) -> Result<String> {
    let l_max = curves
        .iter()
        .chain(frontier.map(|f| f.curve()))
        .map(|c| c.grid().l_max())
        .max()
        .ok_or_else(|| ReoError::Usage("nothing to plot: pass at least one curve".into()))?;
    let frame = Frame { l_max };
    let (x0, x1) = (frame.x(0), frame.x(l_max));
    let (y0, y1) = (frame.y(0.0), frame.y(1.0));

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r#"<path d="M{x0:.2},{y1:.2} V{y0:.2} H{x1:.2}" fill="none" stroke="black"/>"#
    )
    .unwrap();
    for i in 0..=4u64 {
        let b = l_max * i / 4;
        let x = frame.x(b);
        writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{b}</text>"#,
            y0 + 14.0
        )
        .unwrap();
        let a = i as f64 / 4.0;
        let y = frame.y(a);
        writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{a:.2}</text>"#,
            x0 - 6.0,
            y + 4.0
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">token budget</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 6.0
    )
    .unwrap();

    let mut legend: Vec<(String, &str, bool)> = Vec::new();
    for (i, c) in curves.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            points(&frame, c)
        )
        .unwrap();
        legend.push((c.label().to_string(), color, false));
    }
    if let Some(f) = frontier {
        writeln!(
            s,
            r#"<polyline class="frontier" fill="none" stroke="black" stroke-width="3" stroke-dasharray="6,3" points="{}"/>"#,
            points(&frame, f.curve())
        )
        .unwrap();
        legend.push((format!("{} (frontier)", f.curve().label()), "black", true));
    }
    for (i, (label, color, dashed)) in legend.iter().enumerate() {
        let y = TOP + 12.0 + 14.0 * i as f64;
        let x = x1 - 150.0;
        let dash = if *dashed { r#" stroke-dasharray="6,3""# } else { "" };
        writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-width="2"{dash}/>"#,
            y - 4.0,
            x + 18.0,
            y - 4.0
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="{:.2}" y="{y:.2}">{}</text>"#,
            x + 24.0,
            escape(label)
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use reo_core::BudgetGrid;

    #[test]
    fn constant_curve_is_horizontal() {
        let grid = BudgetGrid::from_budgets(vec![0, 512, 1024]).unwrap();
        let c = BudgetAccuracyCurve::new(grid, vec![0.5; 3], "flat").unwrap();
        let svg = render(&[c], None).unwrap();
        let line = svg.lines().find(|l| l.starts_with("<polyline")).unwrap();
        let pts = line.split("points=\"").nth(1).unwrap().trim_end_matches("\"/>");
        let ys: Vec<&str> = pts.split(' ').map(|p| p.split(',').nth(1).unwrap()).collect();
        assert_eq!(ys.len(), 3);
        assert!(ys.iter().all(|y| *y == ys[0]));
    }

    #[test]
    fn labels_are_escaped() {
        let grid = BudgetGrid::from_budgets(vec![0, 1]).unwrap();
        let c = BudgetAccuracyCurve::new(grid, vec![0.0, 1.0], "a<b&\"c\"").unwrap();
        let svg = render(&[c], None).unwrap();
        assert!(svg.contains("a&lt;b&amp;&quot;c&quot;"));
        assert!(render(&[], None).is_err());
    }
}
