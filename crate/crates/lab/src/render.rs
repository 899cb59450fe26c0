//! SVG drawings of metric trees and metric silhouettes.

use std::fmt::Write as _;

use bst_limit::error::invalid;
use bst_limit::functionals::metric_silhouette;
use bst_limit::{BinaryTree, Ray};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN: f64 = 40.0;

/// A vertical edge drawn above `β(u)` from `d(ū,∅)` down to `d(u,∅)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub x: f64,
    pub y0: f64,
    pub y1: f64,
}

/// A horizontal line at the level of a parent, joining it to its children.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Connector {
    pub y: f64,
    pub x0: f64,
    pub x1: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TreeDrawing {
    pub segments: Vec<Segment>,
    pub connectors: Vec<Connector>,
    /// Largest distance to the root.
    pub depth: f64,
}

/// Layout of `x` in the `ρ`-weighted subtree-size metric.
pub fn tree_drawing(x: &BinaryTree, rho: f64) -> bst_limit::Result<TreeDrawing> {
    if rho.is_nan() || rho < 1.0 {
        return Err(invalid(format!("rho = {rho} must be at least 1")));
    }
    let mut dist = vec![0.0f64; x.len()];
    let mut segments = Vec::with_capacity(x.len().saturating_sub(1));
    for i in 1..x.len() {
        let u = x.node_at(i);
        let p = x.parent_index(i).expect("non-root has a parent");
        dist[i] = dist[p] + x.edge_weight(u, &rho)?;
        segments.push(Segment {
            x: u.beta(),
            y0: dist[p],
            y1: dist[i],
        });
    }
    let mut connectors = Vec::new();
    for (i, &y) in dist.iter().enumerate() {
        let xs: Vec<f64> = [0u8, 1]
            .iter()
            .filter_map(|&d| x.child_index(i, d))
            .map(|c| x.node_at(c).beta())
            .collect();
        if xs.is_empty() {
            continue;
        }
        let b = x.node_at(i).beta();
        let lo = xs.iter().copied().fold(b, f64::min);
        let hi = xs.iter().copied().fold(b, f64::max);
        connectors.push(Connector { y, x0: lo, x1: hi });
    }
    let depth = dist.iter().copied().fold(0.0, f64::max);
    Ok(TreeDrawing {
        segments,
        connectors,
        depth,
    })
}

fn px(x: f64) -> f64 {
    MARGIN + x * (WIDTH - 2.0 * MARGIN)
}

fn py(y: f64, scale: f64) -> f64 {
    MARGIN + y / scale * (HEIGHT - 2.0 * MARGIN)
}

fn open_svg(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{MARGIN}" y="20" font-family="sans-serif" font-size="14">{title}</text>"#
    );
}

/// Root at the top; distance to the root grows downwards.
pub fn tree_svg(d: &TreeDrawing, title: &str) -> String {
    let scale = if d.depth > 0.0 { d.depth } else { 1.0 };
    let mut s = String::new();
    open_svg(&mut s, title);
    let _ = writeln!(
        s,
        r#"<g fill="none" stroke="gray" stroke-width="0.5"><line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/><line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/></g>"#,
        px(0.0), py(0.0, scale) - 6.0, px(1.0), py(0.0, scale) - 6.0,
        px(0.0) - 6.0, py(0.0, scale), px(0.0) - 6.0, py(scale, scale),
    );
    let _ = writeln!(
        s,
        r#"<g font-family="sans-serif" font-size="11"><text x="{:.3}" y="{:.3}">0</text><text x="{:.3}" y="{:.3}">1</text><text x="2" y="{:.3}">{:.3}</text></g>"#,
        px(0.0), py(0.0, scale) - 10.0, px(1.0), py(0.0, scale) - 10.0, py(scale, scale), scale,
    );
    let _ = writeln!(s, r#"<g stroke="black" stroke-width="1">"#);
    for c in &d.connectors {
        let _ = writeln!(
            s,
            r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/>"#,
            px(c.x0), py(c.y, scale), px(c.x1), py(c.y, scale)
        );
    }
    for g in &d.segments {
        let _ = writeln!(
            s,
            r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/>"#,
            px(g.x), py(g.y0, scale), px(g.x), py(g.y1, scale)
        );
    }
    s.push_str("</g>\n</svg>\n");
    s
}

/// `t ↦ mSil(x)(Φ(t))/n` at the midpoints of a dyadic grid.
pub fn silhouette_profile(x: &BinaryTree, grid: usize) -> bst_limit::Result<Vec<(f64, f64)>> {
    if !grid.is_power_of_two() {
        return Err(invalid(format!("grid = {grid} must be a power of two")));
    }
    let n = x.len() as f64;
    (0..grid)
        .map(|i| {
            let t = (i as f64 + 0.5) / grid as f64;
            Ok((t, metric_silhouette(x, &Ray::from_unit(t)?) as f64 / n))
        })
        .collect()
}

pub struct Series<'a> {
    pub label: &'a str,
    pub color: &'a str,
    pub points: &'a [(f64, f64)],
}

pub fn silhouette_svg(series: &[Series<'_>], title: &str) -> String {
    let top = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.1))
        .fold(0.0f64, f64::max);
    let top = if top > 0.0 { top } else { 1.0 };
    let y = |v: f64| HEIGHT - MARGIN - v / top * (HEIGHT - 2.0 * MARGIN);
    let mut s = String::new();
    open_svg(&mut s, title);
    let _ = writeln!(
        s,
        r#"<g fill="none" stroke="gray" stroke-width="0.5"><line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/><line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/></g>"#,
        px(0.0), y(0.0), px(1.0), y(0.0), px(0.0), y(0.0), px(0.0), y(top),
    );
    let _ = writeln!(
        s,
        r#"<g font-family="sans-serif" font-size="11"><text x="{:.3}" y="{:.3}">0</text><text x="{:.3}" y="{:.3}">1</text><text x="2" y="{:.3}">{:.3}</text></g>"#,
        px(0.0), y(0.0) + 14.0, px(1.0), y(0.0) + 14.0, y(top), top,
    );
    for (i, ser) in series.iter().enumerate() {
        let pts: Vec<String> = ser
            .points
            .iter()
            .map(|&(t, v)| format!("{:.3},{:.3}", px(t), y(v)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{}" stroke-width="1" points="{}"/>"#,
            ser.color,
            pts.join(" ")
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="11" fill="{}">{}</text>"#,
            WIDTH - MARGIN - 80.0,
            MARGIN + 14.0 * i as f64,
            ser.color,
            ser.label
        );
    }
    s.push_str("</svg>\n");
    s
}
