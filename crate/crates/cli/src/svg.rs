//! Minimal SVG writer for plane figures.
//!
//! Shapes are collected in plane coordinates and written with `y` negated,
//! so the figure reads with the usual orientation. The view box is the
//! bounding box of everything drawn plus a 10% margin.

use std::fmt::Write;

use ortho_core::{Circle, NormSpec, Vec2};

enum Shape {
    Path {
        points: Vec<Vec2>,
        closed: bool,
        color: &'static str,
        dashed: bool,
    },
    Dot {
        at: Vec2,
        color: &'static str,
    },
    Label {
        at: Vec2,
        text: String,
    },
}

pub struct Figure {
    shapes: Vec<Shape>,
    stroke: f64,
    size: u32,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

impl Figure {
    pub fn new(size: u32, stroke: f64) -> Self {
        Self {
            shapes: Vec::new(),
            stroke,
            size,
        }
    }

    /// Norm circle `C(center, radius)` as a closed polyline of `samples` points.
    pub fn circle(&mut self, spec: &NormSpec, circle: Circle, samples: usize, color: &'static str) {
        let points = (0..samples)
            .map(|k| spec.circle_point(&circle, std::f64::consts::TAU * k as f64 / samples as f64))
            .collect();
        self.shapes.push(Shape::Path {
            points,
            closed: true,
            color,
            dashed: false,
        });
    }

    pub fn polygon(&mut self, points: &[Vec2], color: &'static str) {
        self.shapes.push(Shape::Path {
            points: points.to_vec(),
            closed: true,
            color,
            dashed: false,
        });
    }

    pub fn segment(&mut self, a: Vec2, b: Vec2, color: &'static str, dashed: bool) {
        self.shapes.push(Shape::Path {
            points: vec![a, b],
            closed: false,
            color,
            dashed,
        });
    }

    pub fn dot(&mut self, at: Vec2, color: &'static str) {
        self.shapes.push(Shape::Dot { at, color });
    }

    pub fn label(&mut self, at: Vec2, text: &str) {
        self.shapes.push(Shape::Label {
            at,
            text: text.to_string(),
        });
    }

    fn bbox(&self) -> (Vec2, Vec2) {
        let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        let mut take = |p: Vec2| {
            lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
        };
        for s in &self.shapes {
            match s {
                Shape::Path { points, .. } => points.iter().copied().for_each(&mut take),
                Shape::Dot { at, .. } | Shape::Label { at, .. } => take(*at),
            }
        }
        if !lo.x.is_finite() {
            return (Vec2::new(-1.0, -1.0), Vec2::new(1.0, 1.0));
        }
        (lo, hi)
    }

    pub fn render(&self) -> String {
        let (lo, hi) = self.bbox();
        let span = (hi - lo).max_abs().max(1e-9);
        let margin = 0.1 * span;
        let (w, h) = (
            (hi.x - lo.x).max(1e-9) + 2.0 * margin,
            (hi.y - lo.y).max(1e-9) + 2.0 * margin,
        );
        let height = ((self.size as f64) * h / w).round().max(1.0) as u32;
        let dot_r = 0.006 * span;
        let font = 0.03 * span;
        let mut out = String::new();
        let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="{:.6} {:.6} {:.6} {:.6}">"#,
            self.size,
            height,
            lo.x - margin,
            -hi.y - margin,
            w,
            h
        );
        let _ = writeln!(
            out,
            r#"<rect x="{:.6}" y="{:.6}" width="{w:.6}" height="{h:.6}" fill="white"/>"#,
            lo.x - margin,
            -hi.y - margin
        );
        for s in &self.shapes {
            match s {
                Shape::Path {
                    points,
                    closed,
                    color,
                    dashed,
                } => {
                    let tag = if *closed { "polygon" } else { "polyline" };
                    let pts: Vec<String> = points
                        .iter()
                        .map(|p| format!("{:.6},{:.6}", p.x + 0.0, 0.0 - p.y))
                        .collect();
                    let dash = if *dashed {
                        r#" stroke-dasharray="6 4""#
                    } else {
                        ""
                    };
                    let _ = writeln!(
                        out,
                        r#"<{tag} points="{}" fill="none" stroke="{color}" stroke-width="{}" vector-effect="non-scaling-stroke"{dash}/>"#,
                        pts.join(" "),
                        self.stroke
                    );
                }
                Shape::Dot { at, color } => {
                    let _ = writeln!(
                        out,
                        r#"<circle cx="{:.6}" cy="{:.6}" r="{dot_r:.6}" fill="{color}"/>"#,
                        at.x + 0.0,
                        0.0 - at.y
                    );
                }
                Shape::Label { at, text } => {
                    let _ = writeln!(
                        out,
                        r#"<text x="{:.6}" y="{:.6}" font-size="{font:.6}" font-family="serif">{}</text>"#,
                        at.x + dot_r,
                        -at.y - dot_r,
                        escape(text)
                    );
                }
            }
        }
        out.push_str("</svg>\n");
        out
    }
}
