//! Explicit incompressible cavitation maps and their exact gradients: the
//! radial baseline and the three-piece angle-preserving construction.

use crate::geom2d::{
    circle_circle_angles, circle_ray_angles, circle_vertical_line_angles, dist_point_ray,
    dist_point_segment, normalize_angle, Circle, Mat2, PolarShape, Vec2, DEGENERACY_TOL,
};
use crate::twoball::TwoBallGeometry;
use crate::{Error, Result};
use std::f64::consts::PI;

/// Region of the plane relative to the two sub-domains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Omega1,
    Omega2,
    Outer,
}

/// Minimal distance below which gradients refuse to evaluate: the map is
/// only Lipschitz across piece interfaces, so one-sided derivatives are not
/// reported as if they were classical ones.
pub const INTERFACE_GUARD: f64 = 1e-9;

/// One angle-preserving piece `x ↦ λa + f(r, ζ)ζ` with
/// `f(r, ζ)ⁿ = rⁿ + (λⁿ − 1) q(ζ)ⁿ` about its own origin.
#[derive(Debug, Clone)]
pub struct AnglePreservingPiece {
    pub origin: Vec2,
    pub target_origin: Vec2,
    pub shape: PolarShape,
    /// `λⁿ − 1`; zero gives the identity.
    pub strength: f64,
}

impl AnglePreservingPiece {
    pub fn new(origin: Vec2, target_origin: Vec2, shape: PolarShape, strength: f64) -> Result<Self> {
        if strength < 0.0 {
            return Err(Error::Domain(format!("piece strength {strength} < 0")));
        }
        Ok(AnglePreservingPiece { origin, target_origin, shape, strength })
    }

    pub fn radial_stretch(&self, r: f64, theta: f64) -> f64 {
        let q = self.shape.q(theta);
        (r * r + self.strength * q * q).sqrt()
    }

    pub fn eval(&self, x: Vec2) -> Vec2 {
        let rel = x - self.origin;
        let r = rel.norm();
        if r == 0.0 {
            // Only reachable for the outer piece of a tangent configuration,
            // where continuity forces the value λa*.
            return self.target_origin;
        }
        let zeta = rel * (1.0 / r);
        let f = self.radial_stretch(r, rel.angle());
        self.target_origin + zeta * f
    }

    /// Exact gradient, with the boundary descriptor pinned to `piece_idx` so
    /// integrators can evaluate one-sided values exactly at panel ends.
    pub fn grad_pinned(&self, x: Vec2, piece_idx: usize) -> Mat2 {
        let rel = x - self.origin;
        let r = rel.norm();
        let theta = rel.angle();
        let q = self.shape.q_by_piece(piece_idx, theta);
        let dq = self.shape.dq_by_piece(piece_idx, theta);
        let f = (r * r + self.strength * q * q).sqrt();
        let fr = r / f;
        let ftheta = self.strength * q * dq / f;
        let zeta = rel * (1.0 / r);
        let tau = zeta.perp();
        Mat2::outer(zeta, zeta) * fr
            + Mat2::outer(zeta, tau) * (ftheta / r)
            + Mat2::outer(tau, tau) * (f / r)
    }

    pub fn grad(&self, x: Vec2) -> Mat2 {
        let theta = (x - self.origin).angle();
        self.grad_pinned(x, self.shape.piece_index(theta))
    }
}

/// The three-piece angle-preserving incompressible map opening cavities of
/// volumes `v1`, `v2` at the two cavitation points.
#[derive(Debug, Clone)]
pub struct PiecewiseCavityMap {
    pub geometry: TwoBallGeometry,
    pub piece_om1: AnglePreservingPiece,
    pub piece_om2: AnglePreservingPiece,
    pub piece_outer: AnglePreservingPiece,
}

impl PiecewiseCavityMap {
    pub fn new(geometry: TwoBallGeometry) -> Result<Self> {
        let s = geometry.strength();
        let lambda = geometry.lambda;
        let piece_om1 = AnglePreservingPiece::new(
            geometry.a1,
            geometry.a1 * lambda,
            geometry.shape_omega1(),
            s,
        )?;
        let piece_om2 = AnglePreservingPiece::new(
            geometry.a2,
            geometry.a2 * lambda,
            geometry.shape_omega2(),
            s,
        )?;
        let piece_outer = AnglePreservingPiece::new(
            geometry.a_star,
            geometry.a_star * lambda,
            geometry.shape_union(),
            s,
        )?;
        Ok(PiecewiseCavityMap { geometry, piece_om1, piece_om2, piece_outer })
    }

    /// Region classifier. Points exactly on the chord inside both balls are
    /// assigned to `Omega1`; the shared boundary is measure zero and both
    /// adjoining pieces agree there.
    pub fn classify(&self, x: Vec2) -> Region {
        let g = &self.geometry;
        if g.in_ball1(x) && x.x <= g.a_hat {
            Region::Omega1
        } else if g.in_ball2(x) && x.x > g.a_hat {
            Region::Omega2
        } else if g.in_ball1(x) {
            // Part of B1 beyond the chord lies inside B2.
            Region::Omega2
        } else {
            Region::Outer
        }
    }

    pub fn piece(&self, region: Region) -> &AnglePreservingPiece {
        match region {
            Region::Omega1 => &self.piece_om1,
            Region::Omega2 => &self.piece_om2,
            Region::Outer => &self.piece_outer,
        }
    }

    fn nearest_cavitation_distance(&self, x: Vec2) -> f64 {
        x.dist(self.geometry.a1).min(x.dist(self.geometry.a2))
    }

    /// Conservative distance from `x` to the set across which the map is not
    /// smooth: the two ball boundaries, the chord, and the corner rays.
    pub fn interface_distance(&self, x: Vec2) -> f64 {
        let g = &self.geometry;
        let h = g.chord_half_height();
        let mut dist = (x.dist(g.tilde_a1) - g.rho1).abs();
        dist = dist.min((x.dist(g.tilde_a2) - g.rho2).abs());
        if h > DEGENERACY_TOL * g.d {
            let top = g.corner_upper();
            let bot = g.corner_lower();
            dist = dist.min(dist_point_segment(x, bot, top));
            for corner in [top, bot] {
                dist = dist.min(dist_point_segment(x, g.a1, corner));
                dist = dist.min(dist_point_segment(x, g.a2, corner));
                dist = dist.min(dist_point_ray(x, corner, corner - g.a_star));
            }
        } else {
            // Tangent balls: the corner rays leave a_star vertically.
            dist = dist.min(dist_point_ray(x, g.a_star, Vec2::new(0.0, 1.0)));
            dist = dist.min(dist_point_ray(x, g.a_star, Vec2::new(0.0, -1.0)));
        }
        dist
    }
}

/// The radial baseline `u(x) = c + (Aⁿ + |x−c|ⁿ)^{1/n} (x−c)/|x−c|`.
#[derive(Debug, Clone, Copy)]
pub struct RadialCavityMap {
    pub center: Vec2,
    /// Cavity radius parameter; the opened volume is `ωₙ Aⁿ`.
    pub a: f64,
}

impl RadialCavityMap {
    pub fn new(center: Vec2, a: f64) -> Result<Self> {
        if a < 0.0 {
            return Err(Error::Domain(format!("cavity parameter {a} < 0")));
        }
        Ok(RadialCavityMap { center, a })
    }

    pub fn cavity_volume(&self) -> f64 {
        PI * self.a * self.a
    }

    pub fn stretch(&self, r: f64) -> f64 {
        (self.a * self.a + r * r).sqrt()
    }
}

/// Common evaluation surface of the explicit cavitation maps.
pub trait CavityMap {
    fn eval(&self, x: Vec2) -> Result<Vec2>;

    /// Exact gradient; errors near cavitation points and piece interfaces.
    fn grad(&self, x: Vec2) -> Result<Mat2>;

    /// Gradient without the proximity guard. Points exactly on an interface
    /// get the deterministic side chosen by the classifier.
    fn grad_unchecked(&self, x: Vec2) -> Mat2;

    /// Cavitation points with the volumes they open.
    fn cavities(&self) -> Vec<(Vec2, f64)>;

    /// Angles at which the circle `∂B(center, r)` crosses a surface of
    /// non-smoothness of the map; quadrature panels split there.
    fn circle_split_angles(&self, center: Vec2, r: f64) -> Vec<f64>;

    /// Image of `∂B(a_i, eps)` as an `n_points`-gon (1-based cavity index).
    fn cavity_boundary(&self, index: usize, eps: f64, n_points: usize) -> Result<Vec<Vec2>>;
}

impl CavityMap for PiecewiseCavityMap {
    fn eval(&self, x: Vec2) -> Result<Vec2> {
        let scale = self.geometry.d;
        if self.nearest_cavitation_distance(x) < 1e-15 * scale {
            return Err(Error::Singular("evaluation at a cavitation point".into()));
        }
        Ok(self.piece(self.classify(x)).eval(x))
    }

    fn grad(&self, x: Vec2) -> Result<Mat2> {
        let to_cavity = self.nearest_cavitation_distance(x);
        if to_cavity < INTERFACE_GUARD {
            return Err(Error::Singular(format!(
                "gradient within {to_cavity:.3e} of a cavitation point"
            )));
        }
        let distance = self.interface_distance(x);
        if distance < INTERFACE_GUARD {
            return Err(Error::InterfaceProximity { distance });
        }
        Ok(self.grad_unchecked(x))
    }

    fn grad_unchecked(&self, x: Vec2) -> Mat2 {
        self.piece(self.classify(x)).grad(x)
    }

    fn cavities(&self) -> Vec<(Vec2, f64)> {
        vec![(self.geometry.a1, self.geometry.v1), (self.geometry.a2, self.geometry.v2)]
    }

    fn circle_split_angles(&self, center: Vec2, r: f64) -> Vec<f64> {
        let g = &self.geometry;
        let circle = Circle { center, radius: r };
        let mut angles = Vec::new();
        let b1 = Circle { center: g.tilde_a1, radius: g.rho1 };
        let b2 = Circle { center: g.tilde_a2, radius: g.rho2 };
        angles.extend(circle_circle_angles(&circle, &b1));
        angles.extend(circle_circle_angles(&circle, &b2));
        angles.extend(circle_vertical_line_angles(&circle, g.a_hat));
        let h = g.chord_half_height();
        if h > DEGENERACY_TOL * g.d {
            for corner in [g.corner_upper(), g.corner_lower()] {
                angles.extend(circle_ray_angles(&circle, g.a1, corner));
                angles.extend(circle_ray_angles(&circle, g.a2, corner));
                angles.extend(circle_ray_angles(&circle, corner, corner + (corner - g.a_star) * 1e6));
            }
        } else {
            angles.extend(circle_ray_angles(&circle, g.a_star, g.a_star + Vec2::new(0.0, 1e6)));
            angles.extend(circle_ray_angles(&circle, g.a_star, g.a_star - Vec2::new(0.0, 1e6)));
        }
        angles.iter_mut().for_each(|a| *a = normalize_angle(*a));
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        angles.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        angles
    }

    fn cavity_boundary(&self, index: usize, eps: f64, n_points: usize) -> Result<Vec<Vec2>> {
        if n_points < 64 {
            return Err(Error::Domain(format!("cavity_boundary: N = {n_points} < 64")));
        }
        let g = &self.geometry;
        let (origin, inradius, piece) = match index {
            1 => (g.a1, g.d1, &self.piece_om1),
            2 => (g.a2, g.d2, &self.piece_om2),
            _ => return Err(Error::Domain(format!("cavity index {index} not in {{1, 2}}"))),
        };
        if !(eps > 0.0) || eps >= inradius * (1.0 - DEGENERACY_TOL) {
            return Err(Error::Domain(format!(
                "cavity_boundary: eps = {eps} does not fit inside the sub-domain (inradius {inradius})"
            )));
        }
        Ok((0..n_points)
            .map(|k| {
                let theta = 2.0 * PI * k as f64 / n_points as f64;
                piece.eval(origin + Vec2::unit(theta) * eps)
            })
            .collect())
    }
}

impl CavityMap for RadialCavityMap {
    fn eval(&self, x: Vec2) -> Result<Vec2> {
        let rel = x - self.center;
        let r = rel.norm();
        if r == 0.0 {
            return Err(Error::Singular("evaluation at the cavitation point".into()));
        }
        Ok(self.center + rel * (self.stretch(r) / r))
    }

    fn grad(&self, x: Vec2) -> Result<Mat2> {
        let r = (x - self.center).norm();
        if r < INTERFACE_GUARD {
            return Err(Error::Singular(format!("gradient within {r:.3e} of the cavitation point")));
        }
        Ok(self.grad_unchecked(x))
    }

    fn grad_unchecked(&self, x: Vec2) -> Mat2 {
        let rel = x - self.center;
        let r = rel.norm();
        let f = self.stretch(r);
        let zeta = rel * (1.0 / r);
        let tau = zeta.perp();
        Mat2::outer(zeta, zeta) * (r / f) + Mat2::outer(tau, tau) * (f / r)
    }

    fn cavities(&self) -> Vec<(Vec2, f64)> {
        vec![(self.center, self.cavity_volume())]
    }

    fn circle_split_angles(&self, _center: Vec2, _r: f64) -> Vec<f64> {
        Vec::new()
    }

    fn cavity_boundary(&self, index: usize, eps: f64, n_points: usize) -> Result<Vec<Vec2>> {
        if index != 1 {
            return Err(Error::Domain(format!("cavity index {index} not valid for a radial map")));
        }
        if n_points < 64 {
            return Err(Error::Domain(format!("cavity_boundary: N = {n_points} < 64")));
        }
        if !(eps > 0.0) {
            return Err(Error::Domain("cavity_boundary: eps must be positive".into()));
        }
        let f = self.stretch(eps);
        Ok((0..n_points)
            .map(|k| self.center + Vec2::unit(2.0 * PI * k as f64 / n_points as f64) * f)
            .collect())
    }
}
