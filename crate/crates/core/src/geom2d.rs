//! Exact planar primitives: vectors, circles, circular segments, polygon
//! areas, and star-shaped boundaries in closed polar form.

use crate::{Error, Result};
use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul, Neg, Sub};

/// Absolute tolerance for geometric degeneracy checks, in natural length
/// units. Bisection solvers land arbitrarily close to `d = rho` or
/// `t = ±rho`, so comparisons against those boundaries use this slack.
pub const DEGENERACY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm2().sqrt()
    }

    pub fn dist(self, o: Vec2) -> f64 {
        (self - o).norm()
    }

    /// Polar angle in `[0, 2π)`.
    pub fn angle(self) -> f64 {
        let a = self.y.atan2(self.x);
        if a < 0.0 {
            a + TAU
        } else {
            a
        }
    }

    pub fn unit(angle: f64) -> Vec2 {
        Vec2::new(angle.cos(), angle.sin())
    }

    /// Counter-clockwise perpendicular.
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Row-major 2x2 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 { a: 1.0, b: 0.0, c: 0.0, d: 1.0 };

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2 { a, b, c, d }
    }

    /// a ⊗ b (outer product).
    pub fn outer(u: Vec2, v: Vec2) -> Mat2 {
        Mat2::new(u.x * v.x, u.x * v.y, u.y * v.x, u.y * v.y)
    }

    pub fn det(self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn norm2_frobenius(self) -> f64 {
        self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
    }

    pub fn mul_vec(self, v: Vec2) -> Vec2 {
        Vec2::new(self.a * v.x + self.b * v.y, self.c * v.x + self.d * v.y)
    }

    /// Singular values, largest first.
    pub fn singular_values(self) -> (f64, f64) {
        let g = self;
        let t = g.norm2_frobenius();
        let d = g.det();
        let disc = (t * t - 4.0 * d * d).max(0.0).sqrt();
        let s1 = (0.5 * (t + disc)).sqrt();
        let s2 = (0.5 * (t - disc)).max(0.0).sqrt();
        (s1, s2)
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        Mat2::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }
}

impl Mul<f64> for Mat2 {
    type Output = Mat2;
    fn mul(self, s: f64) -> Mat2 {
        Mat2::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: Vec2,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Vec2, radius: f64) -> Result<Circle> {
        if !(radius > 0.0) || !center.is_finite() {
            return Err(Error::Domain(format!("invalid circle radius {radius}")));
        }
        Ok(Circle { center, radius })
    }

    pub fn area(&self) -> f64 {
        PI * self.radius * self.radius
    }

    pub fn contains(&self, p: Vec2) -> bool {
        p.dist(self.center) <= self.radius
    }
}

/// Area of the circular segment `{x ∈ B(0, rho) : x·e > t}` for signed `t`.
pub fn segment_area(rho: f64, t: f64) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(Error::Domain(format!("segment_area: radius {rho} <= 0")));
    }
    if t.abs() > rho + DEGENERACY_TOL {
        return Err(Error::Domain(format!(
            "segment_area: |t| = {} exceeds radius {rho}",
            t.abs()
        )));
    }
    let c = (t / rho).clamp(-1.0, 1.0);
    let alpha = c.acos();
    Ok(rho * rho * (alpha - alpha.sin() * c))
}

/// Distance from an off-center origin to the circle `∂B(center, rho)`,
/// where the origin sits at distance `d` from the center and `theta` is the
/// angle between the query direction and the center-to-origin axis.
///
/// Closed form: `q(θ) = −d cos θ + sqrt((ρ²−d²) + d² cos²θ)`.
pub fn polar_q_offcenter(rho: f64, d: f64, theta: f64) -> Result<f64> {
    if !(rho > 0.0) || d < -DEGENERACY_TOL {
        return Err(Error::Domain(format!("polar_q_offcenter: rho {rho}, d {d}")));
    }
    if d > rho + DEGENERACY_TOL {
        return Err(Error::Domain(format!(
            "polar_q_offcenter: origin offset {d} outside ball radius {rho}"
        )));
    }
    let d = d.clamp(0.0, rho);
    let c = theta.cos();
    let disc = (rho * rho - d * d) + d * d * c * c;
    Ok(-d * c + disc.max(0.0).sqrt())
}

/// Angular derivative `q′(θ)` of [`polar_q_offcenter`], obtained by implicit
/// differentiation of `q² + 2qd cos θ = ρ² − d²`:
/// `q′ = 2 d q² sin θ / (q² + (ρ² − d²))`.
pub fn polar_dq_offcenter(rho: f64, d: f64, theta: f64) -> Result<f64> {
    if d >= rho - DEGENERACY_TOL {
        return Err(Error::Domain(format!(
            "polar_dq_offcenter: requires d < rho, got d {d}, rho {rho}"
        )));
    }
    let q = polar_q_offcenter(rho, d, theta)?;
    Ok(2.0 * d * q * q * theta.sin() / (q * q + (rho * rho - d * d)))
}

/// Shoelace signed area; positive for counter-clockwise orientation.
pub fn polygon_area(vertices: &[Vec2]) -> Result<f64> {
    if vertices.len() < 3 {
        return Err(Error::Domain(format!(
            "polygon_area: need at least 3 vertices, got {}",
            vertices.len()
        )));
    }
    let mut acc = crate::util::Accumulator::new();
    for i in 0..vertices.len() {
        let p = vertices[i];
        let q = vertices[(i + 1) % vertices.len()];
        acc.add(p.cross(q));
    }
    Ok(0.5 * acc.value())
}

/// One closed-form boundary descriptor of a [`PolarShape`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolarPiece {
    /// Arc of a circle of radius `rho` whose center sits at distance
    /// `offset` from the shape origin; `axis` is the polar angle of
    /// (origin − center), so `q(axis) = rho − offset`.
    Arc { rho: f64, offset: f64, axis: f64 },
    /// Straight chord at distance `dist` from the origin with outward
    /// normal direction `axis`; `q(θ) = dist / cos(θ − axis)`.
    Chord { dist: f64, axis: f64 },
}

impl PolarPiece {
    pub fn q(&self, theta: f64) -> f64 {
        match *self {
            PolarPiece::Arc { rho, offset, axis } => {
                polar_q_offcenter(rho, offset, theta - axis).expect("validated piece")
            }
            PolarPiece::Chord { dist, axis } => dist / (theta - axis).cos(),
        }
    }

    pub fn dq(&self, theta: f64) -> f64 {
        match *self {
            PolarPiece::Arc { rho, offset, axis } => {
                let psi = theta - axis;
                let q = polar_q_offcenter(rho, offset, psi).expect("validated piece");
                let denom = q * q + (rho * rho - offset * offset);
                if denom <= 0.0 {
                    // Tangent arc through the origin (offset = rho): the
                    // quotient degenerates to 0/0 with limit 2 d sin ψ.
                    return 2.0 * offset * psi.sin();
                }
                2.0 * offset * q * q * psi.sin() / denom
            }
            PolarPiece::Chord { dist, axis } => {
                let c = (theta - axis).cos();
                dist * (theta - axis).sin() / (c * c)
            }
        }
    }

    /// Antiderivative of `q(θ)²` (smooth in `θ`, valid on the whole line).
    fn q2_primitive(&self, theta: f64) -> f64 {
        match *self {
            PolarPiece::Arc { rho, offset: d, axis } => {
                let psi = theta - axis;
                if d == 0.0 {
                    return rho * rho * psi;
                }
                let u = psi.sin();
                let root = (rho * rho - d * d * u * u).max(0.0).sqrt();
                let h = 0.5 * u * root + rho * rho / (2.0 * d) * ((d * u / rho).clamp(-1.0, 1.0)).asin();
                rho * rho * psi + d * d * psi.sin() * psi.cos() - 2.0 * d * h
            }
            PolarPiece::Chord { dist, axis } => dist * dist * (theta - axis).tan(),
        }
    }

    fn integral_q2(&self, a: f64, b: f64) -> f64 {
        self.q2_primitive(b) - self.q2_primitive(a)
    }
}

/// Star-shaped boundary about `origin`, stored as closed-form pieces over a
/// partition of `[0, 2π)` so that `q` and `q′` stay exact; sampling only
/// happens at quadrature time.
///
/// `starts[i]` is the first angle of piece `i`; piece `i` is active on the
/// half-open interval `[starts[i], starts[i+1])`, the last piece wrapping
/// around `2π` to `starts[0]`.
#[derive(Debug, Clone)]
pub struct PolarShape {
    pub origin: Vec2,
    starts: Vec<f64>,
    pieces: Vec<PolarPiece>,
    pub dim: u32,
}

impl PolarShape {
    pub fn new(origin: Vec2, parts: Vec<(f64, PolarPiece)>, dim: u32) -> Result<PolarShape> {
        if parts.is_empty() {
            return Err(Error::Domain("polar shape needs at least one piece".into()));
        }
        if dim < 2 {
            return Err(Error::Domain(format!("polar shape dimension {dim} < 2")));
        }
        let mut starts = Vec::with_capacity(parts.len());
        let mut pieces = Vec::with_capacity(parts.len());
        for (s, p) in parts {
            starts.push(normalize_angle(s));
            pieces.push(p);
        }
        for w in starts.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::Domain("polar shape piece starts must increase".into()));
            }
        }
        let shape = PolarShape { origin, starts, pieces, dim };
        shape.validate()?;
        Ok(shape)
    }

    fn validate(&self) -> Result<()> {
        // Interior positivity (sampled) and the overall scale for the
        // continuity tolerance. q may vanish exactly at a breakpoint
        // (tangent configurations) but not inside a piece.
        let mut scale: f64 = DEGENERACY_TOL;
        for (a, b, idx) in self.panels() {
            for k in 1..8 {
                let t = a + (b - a) * k as f64 / 8.0;
                let q = self.pieces[idx].q(t);
                if !(q > 0.0) {
                    return Err(Error::Domain(format!(
                        "polar shape q not positive at θ = {t}"
                    )));
                }
                scale = scale.max(q);
            }
        }
        for (ia, ib, theta) in self.breakpoint_pairs() {
            let qa = self.pieces[ia].q(theta);
            let qb = self.pieces[ib].q(theta);
            if (qa - qb).abs() > 1e-9 * scale {
                return Err(Error::Domain(format!(
                    "polar shape discontinuous at θ = {theta}: {qa} vs {qb}"
                )));
            }
            if qa < -DEGENERACY_TOL * scale {
                return Err(Error::Domain(format!("polar shape q < 0 at θ = {theta}")));
            }
        }
        Ok(())
    }

    /// (left piece, right piece, angle) at every piece boundary.
    fn breakpoint_pairs(&self) -> Vec<(usize, usize, f64)> {
        let n = self.pieces.len();
        if n == 1 {
            return Vec::new();
        }
        (0..n)
            .map(|i| {
                let prev = (i + n - 1) % n;
                (prev, i, self.starts[i])
            })
            .collect()
    }

    /// Angles at which `q′` may jump.
    pub fn corner_angles(&self) -> Vec<f64> {
        self.breakpoint_pairs().iter().map(|t| t.2).collect()
    }

    /// Piece index active at angle `theta`.
    pub fn piece_index(&self, theta: f64) -> usize {
        let t = normalize_angle(theta);
        // Pieces are few (at most 4 in this crate); linear scan.
        let n = self.starts.len();
        if t < self.starts[0] {
            return n - 1;
        }
        for i in (0..n).rev() {
            if t >= self.starts[i] {
                return i;
            }
        }
        n - 1
    }

    pub fn piece(&self, idx: usize) -> &PolarPiece {
        &self.pieces[idx]
    }

    pub fn q(&self, theta: f64) -> f64 {
        self.pieces[self.piece_index(theta)].q(theta)
    }

    pub fn dq(&self, theta: f64) -> f64 {
        self.pieces[self.piece_index(theta)].dq(theta)
    }

    pub fn q_by_piece(&self, idx: usize, theta: f64) -> f64 {
        self.pieces[idx].q(theta)
    }

    pub fn dq_by_piece(&self, idx: usize, theta: f64) -> f64 {
        self.pieces[idx].dq(theta)
    }

    /// Angular panels `(start, end, piece index)` tiling `[θ₀, θ₀ + 2π)`.
    pub fn panels(&self) -> Vec<(f64, f64, usize)> {
        let n = self.starts.len();
        (0..n)
            .map(|i| {
                let a = self.starts[i];
                let b = if i + 1 < n { self.starts[i + 1] } else { self.starts[0] + TAU };
                (a, b, i)
            })
            .collect()
    }

    /// `∫ q(θ)² dθ` over one full revolution, in closed form.
    pub fn integral_q2_full(&self) -> f64 {
        self.panels()
            .iter()
            .map(|&(a, b, i)| self.pieces[i].integral_q2(a, b))
            .sum()
    }

    /// Enclosed area `(1/2)∮ q²` (exact for the stored descriptors).
    pub fn area(&self) -> f64 {
        0.5 * self.integral_q2_full()
    }

    pub fn max_q(&self, samples: usize) -> f64 {
        let mut m: f64 = 0.0;
        for k in 0..samples {
            let t = TAU * k as f64 / samples as f64;
            m = m.max(self.q(t));
        }
        m
    }

    pub fn min_q(&self, samples: usize) -> f64 {
        let mut m = f64::INFINITY;
        for k in 0..samples {
            let t = TAU * k as f64 / samples as f64;
            m = m.min(self.q(t));
        }
        m
    }

    /// Boundary point at angle `theta` in world coordinates.
    pub fn boundary_point(&self, theta: f64) -> Vec2 {
        self.origin + Vec2::unit(theta) * self.q(theta)
    }
}

pub fn normalize_angle(theta: f64) -> f64 {
    let mut t = theta % TAU;
    if t < 0.0 {
        t += TAU;
    }
    if t >= TAU {
        t = 0.0;
    }
    t
}

/// Intersection angles (seen from `c.center`) of `∂c` with `∂other`.
pub fn circle_circle_angles(c: &Circle, other: &Circle) -> Vec<f64> {
    let delta = other.center - c.center;
    let d = delta.norm();
    if d < DEGENERACY_TOL {
        return Vec::new();
    }
    // cos of the half-aperture from the law of cosines.
    let cosg = (d * d + c.radius * c.radius - other.radius * other.radius) / (2.0 * d * c.radius);
    if cosg.abs() > 1.0 {
        return Vec::new();
    }
    let gamma = cosg.acos();
    let base = delta.angle();
    vec![normalize_angle(base + gamma), normalize_angle(base - gamma)]
}

/// Intersection angles of `∂c` with the vertical line `x = level`.
pub fn circle_vertical_line_angles(c: &Circle, level: f64) -> Vec<f64> {
    let dx = level - c.center.x;
    if dx.abs() > c.radius {
        return Vec::new();
    }
    let g = (dx / c.radius).clamp(-1.0, 1.0).acos();
    vec![normalize_angle(g), normalize_angle(-g)]
}

/// Intersection angles of `∂c` with the ray from `base` through `through`.
pub fn circle_ray_angles(c: &Circle, base: Vec2, through: Vec2) -> Vec<f64> {
    let dir = through - base;
    let len = dir.norm();
    if len < DEGENERACY_TOL {
        return Vec::new();
    }
    let d = dir * (1.0 / len);
    let oc = base - c.center;
    let b = oc.dot(d);
    let disc = b * b - (oc.norm2() - c.radius * c.radius);
    if disc < 0.0 {
        return Vec::new();
    }
    let root = disc.sqrt();
    [-b - root, -b + root]
        .iter()
        .filter(|&&t| t >= 0.0)
        .map(|&t| (base + d * t - c.center).angle())
        .collect()
}

/// Distance from `p` to the segment `[a, b]`.
pub fn dist_point_segment(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let ab = b - a;
    let len2 = ab.norm2();
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.dist(a + ab * t)
}

/// Distance from `p` to the ray starting at `a` in direction `dir`.
pub fn dist_point_ray(p: Vec2, a: Vec2, dir: Vec2) -> f64 {
    let len = dir.norm();
    if len == 0.0 {
        return p.dist(a);
    }
    let d = dir * (1.0 / len);
    let t = (p - a).dot(d).max(0.0);
    p.dist(a + d * t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn segment_area_trivial_cases() {
        assert_relative_eq!(segment_area(1.0, 0.0).unwrap(), PI / 2.0, max_relative = 1e-14);
        assert!(segment_area(1.0, 1.0).unwrap().abs() < 1e-14);
        assert!(segment_area(1.0, 1.5).is_err());
    }

    #[test]
    fn segment_area_half_strip_matches_quadrature_oracle() {
        // Independent oracle: strip width integrated over height, in the
        // angular variable t = cos φ so the integrand is smooth.
        let oracle = crate::util::simpson(|phi| 2.0 * phi.sin() * phi.sin(), 0.0, PI / 3.0, 2048);
        let exact = segment_area(1.0, 0.5).unwrap();
        assert_relative_eq!(exact, PI / 3.0 - 3f64.sqrt() / 4.0, max_relative = 1e-12);
        assert_relative_eq!(exact, oracle, max_relative = 1e-11);
    }

    #[test]
    fn segment_symmetry_and_monotonicity() {
        for k in 0..50 {
            let t = -0.98 + 0.04 * k as f64;
            let a = segment_area(1.0, t).unwrap();
            let b = segment_area(1.0, -t).unwrap();
            assert_relative_eq!(a + b, PI, max_relative = 1e-13);
            if k > 0 {
                let prev = segment_area(1.0, t - 0.04).unwrap();
                assert!(a <= prev);
            }
        }
    }

    #[test]
    fn polar_q_trivial_directions() {
        assert_relative_eq!(polar_q_offcenter(1.0, 0.3, 0.0).unwrap(), 0.7, max_relative = 1e-14);
        assert_relative_eq!(polar_q_offcenter(1.0, 0.3, PI).unwrap(), 1.3, max_relative = 1e-14);
        assert_relative_eq!(
            polar_q_offcenter(1.0, 0.3, PI / 2.0).unwrap(),
            0.91f64.sqrt(),
            max_relative = 1e-14
        );
        assert!(polar_q_offcenter(1.0, 1.2, 0.0).is_err());
    }

    #[test]
    fn polar_dq_matches_finite_differences() {
        assert_eq!(polar_dq_offcenter(1.0, 0.3, 0.0).unwrap(), 0.0);
        assert!(polar_dq_offcenter(1.0, 0.3, PI).unwrap().abs() < 1e-15);
        let h = 1e-6;
        for &theta in &[PI / 2.0, 0.3, 2.0, 4.5] {
            let fd = (polar_q_offcenter(1.0, 0.3, theta + h).unwrap()
                - polar_q_offcenter(1.0, 0.3, theta - h).unwrap())
                / (2.0 * h);
            let exact = polar_dq_offcenter(1.0, 0.3, theta).unwrap();
            assert!((fd - exact).abs() < 1e-8, "θ = {theta}: {fd} vs {exact}");
        }
        assert!(polar_dq_offcenter(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn polygon_area_squares_and_ngon() {
        let sq = [
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(0.0, 1.0),
        ];
        assert_relative_eq!(polygon_area(&sq).unwrap(), 1.0, max_relative = 1e-15);
        let mut rev = sq;
        rev.reverse();
        assert_relative_eq!(polygon_area(&rev).unwrap(), -1.0, max_relative = 1e-15);

        let n = 4096;
        let gon: Vec<Vec2> = (0..n).map(|k| Vec2::unit(TAU * k as f64 / n as f64)).collect();
        // Analytic inscribed n-gon area as the oracle.
        let analytic = 0.5 * n as f64 * (TAU / n as f64).sin();
        let shoelace = polygon_area(&gon).unwrap();
        assert_relative_eq!(shoelace, analytic, max_relative = 1e-12);
        assert!((shoelace - PI).abs() < 1e-5);

        assert!(polygon_area(&sq[..2]).is_err());
    }

    #[test]
    fn arc_q2_primitive_matches_quadrature() {
        let piece = PolarPiece::Arc { rho: 1.3, offset: 0.45, axis: 0.7 };
        for &(a, b) in &[(0.0, 1.0), (1.2, 4.0), (-1.0, 7.0)] {
            let quad = crate::util::simpson(|t| piece.q(t).powi(2), a, b, 4000);
            assert_relative_eq!(piece.integral_q2(a, b), quad, max_relative = 1e-10);
        }
    }

    #[test]
    fn off_center_disk_shape_area() {
        // Disk of radius 1 about an origin offset by 0.4: area must be π.
        let shape = PolarShape::new(
            Vec2::ZERO,
            vec![(0.0, PolarPiece::Arc { rho: 1.0, offset: 0.4, axis: 1.1 })],
            2,
        )
        .unwrap();
        assert_relative_eq!(shape.area(), PI, max_relative = 1e-12);
    }

    proptest! {
        // Implicit relation q² + 2qd cosθ = ρ² − d², relative 1e−12.
        #[test]
        fn q_satisfies_implicit_relation(rho in 0.2f64..5.0, frac in 0.0f64..0.999, theta in 0.0f64..TAU) {
            let d = rho * frac;
            let q = polar_q_offcenter(rho, d, theta).unwrap();
            let lhs = q * q + 2.0 * q * d * theta.cos();
            let rhs = rho * rho - d * d;
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rho * rho);
        }

        // Bounds: q ≤ 2ρ and |q′| ≤ 2d|sinθ|.
        #[test]
        fn q_and_dq_bounds(rho in 0.2f64..5.0, frac in 0.0f64..0.999, theta in 0.0f64..TAU) {
            let d = rho * frac;
            let q = polar_q_offcenter(rho, d, theta).unwrap();
            prop_assert!(q <= 2.0 * rho * (1.0 + 1e-12));
            if frac < 0.995 {
                let dq = polar_dq_offcenter(rho, d, theta).unwrap();
                prop_assert!(dq.abs() <= 2.0 * d * theta.sin().abs() + 1e-12);
            }
        }

        // Back-side comparison: 1 ≤ q/(d|cosθ| + sqrt(ρ(ρ−d))) ≤ 2 when cosθ < 0.
        #[test]
        fn q_backside_two_sided_bound(rho in 0.2f64..5.0, frac in 0.0f64..0.99, u in 0.001f64..0.999) {
            let d = rho * frac;
            let theta = PI / 2.0 + u * (PI / 2.0) * 0.999 + 1e-6;
            let q = polar_q_offcenter(rho, d, theta).unwrap();
            let denom = d * theta.cos().abs() + (rho * (rho - d)).sqrt();
            let ratio = q / denom;
            prop_assert!(ratio >= 1.0 - 1e-9 && ratio <= 2.0 + 1e-9);
        }
    }
}
