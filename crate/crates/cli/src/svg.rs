//! Minimal deterministic SVG writer: absolute coordinates, fixed-precision
//! numbers, no scripting. The y axis is flipped so figures read
//! mathematically.

use cavlab::Vec2;

pub struct Svg {
    elements: Vec<String>,
    min: Vec2,
    max: Vec2,
}

fn fmt(x: f64) -> String {
    // Fixed precision keeps output byte-stable across runs.
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".to_string()
    } else {
        s
    }
}

impl Svg {
    pub fn new() -> Svg {
        Svg {
            elements: Vec::new(),
            min: Vec2::new(f64::INFINITY, f64::INFINITY),
            max: Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        }
    }

    fn cover(&mut self, p: Vec2) {
        let q = Vec2::new(p.x, -p.y);
        self.min = Vec2::new(self.min.x.min(q.x), self.min.y.min(q.y));
        self.max = Vec2::new(self.max.x.max(q.x), self.max.y.max(q.y));
    }

    fn points_attr(&mut self, pts: &[Vec2]) -> String {
        let mut out = String::with_capacity(pts.len() * 20);
        for (i, p) in pts.iter().enumerate() {
            self.cover(*p);
            if i > 0 {
                out.push(' ');
            }
            out.push_str(&fmt(p.x));
            out.push(',');
            out.push_str(&fmt(-p.y));
        }
        out
    }

    pub fn polyline(&mut self, pts: &[Vec2], stroke: &str, width: f64) {
        let attr = self.points_attr(pts);
        self.elements.push(format!(
            "<polyline points=\"{attr}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"{}\"/>",
            fmt(width)
        ));
    }

    pub fn polygon(&mut self, pts: &[Vec2], fill: &str, stroke: &str, width: f64) {
        let attr = self.points_attr(pts);
        self.elements.push(format!(
            "<polygon points=\"{attr}\" fill=\"{fill}\" stroke=\"{stroke}\" stroke-width=\"{}\"/>",
            fmt(width)
        ));
    }

    pub fn dot(&mut self, center: Vec2, r: f64, fill: &str) {
        self.cover(center + Vec2::new(r, r));
        self.cover(center - Vec2::new(r, r));
        self.elements.push(format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{fill}\"/>",
            fmt(center.x),
            fmt(-center.y),
            fmt(r)
        ));
    }

    pub fn finish(self) -> String {
        let margin = 0.05 * (self.max.x - self.min.x).max(self.max.y - self.min.y).max(1e-9);
        let x0 = self.min.x - margin;
        let y0 = self.min.y - margin;
        let w = self.max.x - self.min.x + 2.0 * margin;
        let h = self.max.y - self.min.y + 2.0 * margin;
        let mut out = String::new();
        out.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n",
            fmt(x0),
            fmt(y0),
            fmt(w),
            fmt(h)
        ));
        for e in &self.elements {
            out.push_str(e);
            out.push('\n');
        }
        out.push_str("</svg>\n");
        out
    }
}

impl Default for Svg {
    fn default() -> Self {
        Svg::new()
    }
}
