//! Minimal hand-written SVG output: network path maps and line plots.

use std::fmt::Write;

use crate::network::{Network, NodeRef, Point};
use crate::planner::RoundResult;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 50.0;

const PALETTE: [&str; 8] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#17becf", "#bcbd22"];

struct Frame {
    min: Point,
    max: Point,
}

impl Frame {
    fn fit(points: impl Iterator<Item = Point>) -> Frame {
        let mut min = Point::new(f64::INFINITY, f64::INFINITY);
        let mut max = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in points {
            min = Point::new(min.x.min(p.x), min.y.min(p.y));
            max = Point::new(max.x.max(p.x), max.y.max(p.y));
        }
        if !min.x.is_finite() {
            return Frame { min: Point::new(0.0, 0.0), max: Point::new(1.0, 1.0) };
        }
        if max.x - min.x < 1e-12 {
            max.x = min.x + 1.0;
        }
        if max.y - min.y < 1e-12 {
            max.y = min.y + 1.0;
        }
        Frame { min, max }
    }

    fn map(&self, p: Point) -> (f64, f64) {
        let x = MARGIN + (p.x - self.min.x) / (self.max.x - self.min.x) * (WIDTH - 2.0 * MARGIN);
        let y = HEIGHT - MARGIN - (p.y - self.min.y) / (self.max.y - self.min.y) * (HEIGHT - 2.0 * MARGIN);
        (x, y)
    }
}

fn header(out: &mut String) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn hexagon(cx: f64, cy: f64, r: f64) -> String {
    (0..6)
        .map(|k| {
            let a = std::f64::consts::PI / 3.0 * k as f64;
            format!("{:.2},{:.2}", cx + r * a.cos(), cy + r * a.sin())
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Sinks as circles, bases as squares, one polyline per UAV (solid for
/// collection, dashed for delivery) and unvisited sinks as red hexagons.
pub fn render_paths(net: &Network, round: &RoundResult, title: &str) -> String {
    let frame = Frame::fit((0..net.node_count()).map(|i| net.position(i)));
    let at = |n: &NodeRef| frame.map(net.position(net.index_of(n).expect("plan nodes exist")));
    let mut out = String::new();
    header(&mut out);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );

    for e in net.edges() {
        let (x1, y1) = at(&e.a);
        let (x2, y2) = at(&e.b);
        let _ = writeln!(
            out,
            r##"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="#e6e6e6" stroke-width="0.5"/>"##
        );
    }
    for (k, plan) in round.plans.iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        // the flown route, transit hops included
        let mut pts: Vec<(f64, f64)> = Vec::new();
        let mut delivery: Vec<(f64, f64)> = Vec::new();
        for leg in &plan.legs {
            let target = if leg.kind == crate::cost::LegKind::Delivery { &mut delivery } else { &mut pts };
            if target.is_empty() {
                target.push(at(&leg.from));
            }
            target.push(at(&leg.to));
        }
        let join = |v: &[(f64, f64)]| v.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect::<Vec<_>>().join(" ");
        if pts.len() > 1 {
            let _ =
                writeln!(out, r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="2"/>"#, join(&pts));
        }
        if delivery.len() > 1 {
            let _ = writeln!(
                out,
                r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="2" stroke-dasharray="6 4"/>"#,
                join(&delivery)
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" fill="{colour}">UAV {}</text>"#,
            WIDTH - MARGIN - 40.0,
            40.0 + 14.0 * k as f64,
            plan.uav
        );
    }
    for s in net.sinks() {
        let (x, y) = frame.map(s.position);
        if round.unvisited.contains(&s.id) {
            let _ = writeln!(out, r##"<polygon points="{}" fill="#d62728"/>"##, hexagon(x, y, 7.0));
        } else {
            let _ = writeln!(out, r##"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="#333"/>"##);
        }
        let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, x + 6.0, y - 6.0, s.id);
    }
    for b in net.bases() {
        let (x, y) = frame.map(b.position);
        let _ = writeln!(out, r##"<rect x="{:.2}" y="{:.2}" width="10" height="10" fill="#000"/>"##, x - 5.0, y - 5.0);
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-weight="bold">{}</text>"#,
            x + 7.0,
            y + 12.0,
            escape(&b.id)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// A named series of `(x, y)` points.
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

/// Line plot with axes, tick labels and a legend. Non-finite points are
/// skipped.
pub fn line_plot(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let finite = |&(x, y): &(f64, f64)| x.is_finite() && y.is_finite();
    let mut frame =
        Frame::fit(series.iter().flat_map(|s| s.points.iter().filter(|p| finite(p)).map(|&(x, y)| Point::new(x, y))));
    frame.min.y = frame.min.y.min(0.0);
    let mut out = String::new();
    header(&mut out);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let (x0, y0) = (MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(out, r#"<line x1="{x0}" y1="{y0}" x2="{}" y2="{y0}" stroke="black"/>"#, WIDTH - MARGIN);
    let _ = writeln!(out, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{MARGIN}" stroke="black"/>"#);
    for k in 0..=4 {
        let f = k as f64 / 4.0;
        let xv = frame.min.x + f * (frame.max.x - frame.min.x);
        let yv = frame.min.y + f * (frame.max.y - frame.min.y);
        let (tx, _) = frame.map(Point::new(xv, frame.min.y));
        let (_, ty) = frame.map(Point::new(frame.min.x, yv));
        let _ = writeln!(out, r#"<text x="{tx:.2}" y="{}" text-anchor="middle">{}</text>"#, y0 + 15.0, tick(xv));
        let _ = writeln!(out, r#"<text x="{}" y="{ty:.2}" text-anchor="end">{}</text>"#, x0 - 5.0, tick(yv));
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 10.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="15" y="{}" text-anchor="middle" transform="rotate(-90 15 {})">{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(y_label)
    );
    for (k, s) in series.iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        let pts: Vec<String> = s
            .points
            .iter()
            .filter(|p| finite(p))
            .map(|&(x, y)| {
                let (px, py) = frame.map(Point::new(x, y));
                format!("{px:.2},{py:.2}")
            })
            .collect();
        let _ =
            writeln!(out, r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="1.5"/>"#, pts.join(" "));
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" fill="{colour}">{}</text>"#,
            WIDTH - MARGIN - 60.0,
            MARGIN + 14.0 * k as f64,
            escape(&s.name)
        );
    }
    out.push_str("</svg>\n");
    out
}

fn tick(v: f64) -> String {
    if v.abs() >= 1000.0 || v == v.round() {
        format!("{v:.0}")
    } else {
        format!("{v:.2}")
    }
}
