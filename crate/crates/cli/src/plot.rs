//! SVG barcode plots: the three flags side by side, each showing its `k`
//! longest bars.

use std::fmt::Write;

use strat_core::persistence::{Bar, Barcode};
use strat_core::strat_persistence::StratifiedBarcode;

const PANEL_W: f64 = 300.0;
const PANEL_GAP: f64 = 30.0;
const ROW_H: f64 = 12.0;
const TOP: f64 = 40.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/// `(degree, bar)` of the `k` longest bars, infinite ones first, ordered by
/// degree and birth for drawing.
pub fn top_bars(barcode: &Barcode, k: usize) -> Vec<(usize, Bar)> {
    let mut all: Vec<(usize, Bar)> = (0..barcode.num_degrees())
        .flat_map(|d| barcode.bars(d).iter().map(move |b| (d, *b)))
        .collect();
    all.sort_by(|a, b| b.1.length().total_cmp(&a.1.length()).then(a.0.cmp(&b.0)));
    all.truncate(k);
    all.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.birth.total_cmp(&b.1.birth)));
    all
}

pub fn render(barcode: &StratifiedBarcode, k: usize, stamp: Option<&str>) -> String {
    let panels: Vec<(&str, Vec<(usize, Bar)>)> = ["p", "pq", "q"]
        .into_iter()
        .zip(barcode.flags())
        .map(|(name, bc)| (name, top_bars(bc, k)))
        .collect();
    // horizontal scale: the radius cap, or the largest finite endpoint
    let finite_max = panels
        .iter()
        .flat_map(|(_, bars)| bars.iter().flat_map(|(_, b)| [b.birth, b.death]))
        .filter(|x| x.is_finite())
        .fold(0.0f64, f64::max);
    let right = if barcode.max_radius.is_finite() {
        barcode.max_radius
    } else {
        (finite_max * 1.1).max(1e-9)
    };
    let rows = panels
        .iter()
        .map(|(_, b)| b.len())
        .max()
        .unwrap_or(0)
        .max(1);
    let width = 3.0 * PANEL_W + 4.0 * PANEL_GAP;
    let height = TOP + rows as f64 * ROW_H + 30.0;

    let mut svg = String::new();
    writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    if let Some(s) = stamp {
        writeln!(svg, "<!-- generated {s} -->").unwrap();
    }
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )
    .unwrap();
    writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    for (i, (name, bars)) in panels.iter().enumerate() {
        let x0 = PANEL_GAP + i as f64 * (PANEL_W + PANEL_GAP);
        writeln!(
            svg,
            r#"<text x="{:.1}" y="20" font-family="sans-serif" font-size="14" text-anchor="middle">{name}</text>"#,
            x0 + PANEL_W / 2.0
        )
        .unwrap();
        let axis_y = TOP + rows as f64 * ROW_H + 5.0;
        writeln!(
            svg,
            r#"<line x1="{x0:.1}" y1="{axis_y:.1}" x2="{:.1}" y2="{axis_y:.1}" stroke="black"/>"#,
            x0 + PANEL_W
        )
        .unwrap();
        writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="10" text-anchor="end">{right:.3}</text>"#,
            x0 + PANEL_W,
            axis_y + 14.0
        )
        .unwrap();
        for (row, (degree, bar)) in bars.iter().enumerate() {
            let scale = |t: f64| x0 + PANEL_W * (t.min(right) / right);
            let y = TOP + row as f64 * ROW_H;
            let color = COLORS[(*degree).min(COLORS.len() - 1)];
            let death = if bar.is_infinite() { right } else { bar.death };
            writeln!(
                svg,
                r#"<line class="bar" data-degree="{degree}" x1="{:.2}" y1="{y:.1}" x2="{:.2}" y2="{y:.1}" stroke="{color}" stroke-width="6"/>"#,
                scale(bar.birth),
                scale(death)
            )
            .unwrap();
        }
    }
    writeln!(svg, "</svg>").unwrap();
    svg
}
