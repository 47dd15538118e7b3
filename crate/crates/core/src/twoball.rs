//! Solver for the two-ball construction geometry: given the cavitation-point
//! distance, the overlap parameter, and the target cavity volumes, find the
//! unique pair of slab-tangent balls whose chord splits their union in the
//! prescribed area ratio.

use crate::geom2d::{segment_area, PolarPiece, PolarShape, Vec2, DEGENERACY_TOL};
use crate::util::bisect_increasing;
use crate::{Error, Result};
use std::f64::consts::PI;

const MAX_BISECT: usize = 200;

/// Volume of the unit ball in `R^n`.
pub fn unit_ball_volume(n: u32) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * PI / n as f64 * unit_ball_volume(n - 2),
    }
}

/// Smallest admissible radius of the first ball:
/// `rho_min = v1^{1/n} d / (v1^{1/n} + v2^{1/n})`.
pub fn rho_min(d: f64, v1: f64, v2: f64, n: u32) -> Result<f64> {
    if !(d > 0.0) {
        return Err(Error::Domain(format!("rho_min: d = {d} must be positive")));
    }
    if v1 < 0.0 || v2 < 0.0 || (v1 == 0.0 && v2 == 0.0) {
        return Err(Error::Domain("rho_min: volumes must be nonnegative, not both zero".into()));
    }
    let p = 1.0 / n as f64;
    let a = v1.powf(p);
    let b = v2.powf(p);
    Ok(a * d / (a + b))
}

/// Overlap threshold `delta0 = max{0, 1 − (|Ω| − 2ⁿ ωₙ dⁿ)/(4^{n+1} n ωₙ dⁿ)}`,
/// clamped to `[0, 1]`.
pub fn delta0(volume_omega: f64, d: f64, n: u32) -> Result<f64> {
    if !(volume_omega > 0.0) || !(d > 0.0) {
        return Err(Error::Domain("delta0: volume and distance must be positive".into()));
    }
    let omega_dn = unit_ball_volume(n) * d.powi(n as i32);
    let numerator = volume_omega - 2f64.powi(n as i32) * omega_dn;
    let denominator = 4f64.powi(n as i32 + 1) * n as f64 * omega_dn;
    Ok((1.0 - numerator / denominator).clamp(0.0, 1.0))
}

/// Solved two-ball configuration, in coordinates where the slab of width `2d`
/// is `{|x| < d}` and both balls are tangent to its walls. The chord plane
/// sits at `x = a_hat`; `d1 = (a_hat + d)/2` and `d2 = d − d1`.
#[derive(Debug, Clone)]
pub struct TwoBallGeometry {
    pub d: f64,
    pub delta: f64,
    pub v1: f64,
    pub v2: f64,
    pub rho1: f64,
    pub rho2: f64,
    pub d1: f64,
    pub d2: f64,
    pub tilde_a1: Vec2,
    pub tilde_a2: Vec2,
    pub a1: Vec2,
    pub a2: Vec2,
    pub a_star: Vec2,
    pub a_hat: f64,
    pub lambda: f64,
    pub area_om1: f64,
    pub area_om2: f64,
}

/// Normalized (d = 1) solve state.
struct Slab1 {
    rho1: f64,
    rho2: f64,
    a_hat: f64,
    area1: f64,
    area2: f64,
}

fn areas_from(rho1: f64, rho2: f64, a_hat: f64) -> (f64, f64) {
    let c1 = -1.0 + rho1;
    let c2 = 1.0 - rho2;
    let area1 = segment_area(rho1, c1 - a_hat).unwrap_or(0.0);
    let area2 = segment_area(rho2, a_hat - c2).unwrap_or(0.0);
    (area1, area2)
}

fn a_hat_from_radii(rho1: f64, rho2: f64) -> f64 {
    (rho1 - rho2) / (2.0 - rho1 - rho2)
}

fn rho2_from_a_hat(rho1: f64, a_hat: f64) -> f64 {
    let c1 = -1.0 + rho1;
    let h2 = (rho1 * rho1 - (a_hat - c1) * (a_hat - c1)).max(0.0);
    let gap = 1.0 - a_hat;
    (gap * gap + h2) / (2.0 * gap)
}

/// Inner solve: fixed `rho1`, find the chord coordinate so that
/// `area2/area1 = ratio` (the ratio decreases as the chord moves right).
fn solve_inner(rho1: f64, ratio: f64) -> Result<Slab1> {
    debug_assert!(ratio > 0.0 && ratio <= 1.0);
    if (ratio - 1.0).abs() < 1e-15 {
        let (area1, area2) = areas_from(rho1, rho1, 0.0);
        return Ok(Slab1 { rho1, rho2: rho1, a_hat: 0.0, area1, area2 });
    }
    let hi = (-1.0 + rho1) + rho1; // chord tangent to the right edge of B1
    let residual = |a_hat: f64| {
        let rho2 = rho2_from_a_hat(rho1, a_hat);
        let (area1, area2) = areas_from(rho1, rho2, a_hat);
        ratio * area1 - area2
    };
    let a_hat = bisect_increasing(residual, 0.0, hi, MAX_BISECT)?;
    let rho2 = rho2_from_a_hat(rho1, a_hat);

    if rho2 < 1e-6 {
        // Extreme volume ratios collapse rho2; redo the solve in log rho2 to
        // keep its relative accuracy.
        let lo = (1.0 - rho1).max(1e-300).ln();
        let hi = rho1.ln();
        let residual = |x: f64| {
            let rho2 = x.exp();
            let a_hat = a_hat_from_radii(rho1, rho2);
            let (area1, area2) = areas_from(rho1, rho2, a_hat);
            area2 - ratio * area1
        };
        let x = bisect_increasing(residual, lo, hi, MAX_BISECT)?;
        let rho2 = x.exp();
        let a_hat = a_hat_from_radii(rho1, rho2);
        let (area1, area2) = areas_from(rho1, rho2, a_hat);
        return Ok(Slab1 { rho1, rho2, a_hat, area1, area2 });
    }

    let (area1, area2) = areas_from(rho1, rho2, a_hat);
    Ok(Slab1 { rho1, rho2, a_hat, area1, area2 })
}

fn solve_normalized(delta: f64, ratio: f64) -> Result<Slab1> {
    let rho_min = 1.0 / (1.0 + ratio.sqrt());
    if delta < 1e-14 {
        // Tangent disks, known in closed form.
        let rho1 = rho_min;
        let rho2 = 1.0 - rho_min;
        let a_hat = 2.0 * rho_min - 1.0;
        let (area1, area2) = areas_from(rho1, rho2, a_hat);
        return Ok(Slab1 { rho1, rho2, a_hat, area1, area2 });
    }
    if delta > 1.0 - 1e-14 {
        // Coincident balls of radius d; the chord splits B(0, d) directly.
        let target = PI * ratio / (1.0 + ratio);
        let a_hat = bisect_increasing(
            |a| target - segment_area(1.0, a).unwrap(),
            -1.0,
            1.0,
            MAX_BISECT,
        )?;
        let (area1, area2) = areas_from(1.0, 1.0, a_hat);
        return Ok(Slab1 { rho1: 1.0, rho2: 1.0, a_hat, area1, area2 });
    }
    let residual = |rho1: f64| match solve_inner(rho1, ratio) {
        Ok(s) => (s.rho1 + s.rho2 - 1.0) - delta,
        Err(_) => f64::NAN,
    };
    let rho1 = bisect_increasing(residual, rho_min, 1.0 - 1e-15, MAX_BISECT)?;
    solve_inner(rho1, ratio)
}

/// Solve the full configuration. Works in normalized coordinates (d = 1) and
/// rescales, so all lengths are exactly covariant under `d ↦ c·d`,
/// `v ↦ c²·v`.
pub fn solve_geometry(d: f64, delta: f64, v1: f64, v2: f64) -> Result<TwoBallGeometry> {
    if !(d > 0.0) {
        return Err(Error::Domain(format!("solve_geometry: d = {d} must be positive")));
    }
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::Domain(format!("solve_geometry: delta = {delta} outside [0, 1]")));
    }
    if v2 > v1 || v2 < 0.0 {
        return Err(Error::Domain(format!(
            "solve_geometry: need v1 >= v2 >= 0, got v1 = {v1}, v2 = {v2}"
        )));
    }
    if v2 == 0.0 && v1 > 0.0 {
        return Err(Error::Degenerate(
            "solve_geometry: v2 = 0 makes the second sub-domain empty".into(),
        ));
    }
    // With both volumes zero the map is the identity and only the shapes
    // matter; any ratio gives a valid partition, so take the symmetric one.
    let ratio = if v1 == 0.0 { 1.0 } else { v2 / v1 };

    let s = solve_normalized(delta, ratio)?;

    let rho1 = s.rho1 * d;
    let rho2 = s.rho2 * d;
    let a_hat = s.a_hat * d;
    let area_om1 = s.area1 * d * d;
    let area_om2 = s.area2 * d * d;
    let d1 = 0.5 * (a_hat + d);
    let d2 = d - d1;
    let lambda = if v1 == 0.0 {
        1.0
    } else {
        (1.0 + (v1 + v2) / (area_om1 + area_om2)).sqrt()
    };
    Ok(TwoBallGeometry {
        d,
        delta: (rho1 + rho2 - d) / d,
        v1,
        v2,
        rho1,
        rho2,
        d1,
        d2,
        tilde_a1: Vec2::new(-d + rho1, 0.0),
        tilde_a2: Vec2::new(d - rho2, 0.0),
        a1: Vec2::new(-d2, 0.0),
        a2: Vec2::new(d1, 0.0),
        a_star: Vec2::new(rho1 - rho2, 0.0),
        a_hat,
        lambda,
        area_om1,
        area_om2,
    })
}

impl TwoBallGeometry {
    /// `λ² − 1 = (v1 + v2)/|Ω1 ∪ Ω2|`.
    pub fn strength(&self) -> f64 {
        self.lambda * self.lambda - 1.0
    }

    /// Half-height of the common chord, `h² = 4 d1 (rho1 − d1)`.
    pub fn chord_half_height(&self) -> f64 {
        (4.0 * self.d1 * (self.rho1 - self.d1)).max(0.0).sqrt()
    }

    pub fn corner_upper(&self) -> Vec2 {
        Vec2::new(self.a_hat, self.chord_half_height())
    }

    pub fn corner_lower(&self) -> Vec2 {
        Vec2::new(self.a_hat, -self.chord_half_height())
    }

    /// Largest distance from `a_star` to the union boundary,
    /// `q_max = 2 rho1 − δ d`.
    pub fn q_max(&self) -> f64 {
        2.0 * self.rho1 - self.delta * self.d
    }

    pub fn in_ball1(&self, x: Vec2) -> bool {
        x.dist(self.tilde_a1) < self.rho1
    }

    pub fn in_ball2(&self, x: Vec2) -> bool {
        x.dist(self.tilde_a2) < self.rho2
    }

    /// Polar description of `∂Ω1` about the cavitation point `a1`.
    pub fn shape_omega1(&self) -> PolarShape {
        let h = self.chord_half_height();
        let offset = self.rho1 - self.d1;
        if h < DEGENERACY_TOL * self.d {
            let arc = PolarPiece::Arc { rho: self.rho1, offset, axis: PI };
            return PolarShape::new(self.a1, vec![(0.0, arc)], 2).expect("full disk");
        }
        let phi = h.atan2(self.d1);
        let arc = PolarPiece::Arc { rho: self.rho1, offset, axis: PI };
        let chord = PolarPiece::Chord { dist: self.d1, axis: 0.0 };
        PolarShape::new(self.a1, vec![(phi, arc), (2.0 * PI - phi, chord)], 2)
            .expect("omega1 shape")
    }

    /// Polar description of `∂Ω2` about the cavitation point `a2`.
    pub fn shape_omega2(&self) -> PolarShape {
        let h = self.chord_half_height();
        let offset = self.rho2 - self.d2;
        if h < DEGENERACY_TOL * self.d {
            let arc = PolarPiece::Arc { rho: self.rho2, offset, axis: 0.0 };
            return PolarShape::new(self.a2, vec![(0.0, arc)], 2).expect("full disk");
        }
        let phi = h.atan2(-self.d2); // in (π/2, π)
        let arc = PolarPiece::Arc { rho: self.rho2, offset, axis: 0.0 };
        let chord = PolarPiece::Chord { dist: self.d2, axis: PI };
        PolarShape::new(self.a2, vec![(phi, chord), (2.0 * PI - phi, arc)], 2)
            .expect("omega2 shape")
    }

    /// Polar description of `∂(Ω1 ∪ Ω2)` about the star center `a_star`.
    pub fn shape_union(&self) -> PolarShape {
        if self.delta > 1.0 - 1e-12 {
            let arc = PolarPiece::Arc { rho: self.rho1, offset: 0.0, axis: 0.0 };
            return PolarShape::new(self.a_star, vec![(0.0, arc)], 2).expect("round union");
        }
        let h = self.chord_half_height();
        let dx = self.a_hat - self.a_star.x;
        let psi = if h < DEGENERACY_TOL * self.d {
            PI / 2.0 // tangent balls: the corner ray is vertical
        } else {
            h.atan2(dx)
        };
        let arc1 = PolarPiece::Arc { rho: self.rho1, offset: self.d - self.rho2, axis: 0.0 };
        let arc2 = PolarPiece::Arc { rho: self.rho2, offset: self.d - self.rho1, axis: PI };
        PolarShape::new(self.a_star, vec![(psi, arc1), (2.0 * PI - psi, arc2)], 2)
            .expect("union shape")
    }

    /// Residuals of the defining constraints, for diagnostics and tests:
    /// `(delta residual, area-ratio residual, chord-height residual,
    /// lambda residual)`.
    pub fn residuals(&self) -> (f64, f64, f64, f64) {
        let delta_res = (self.rho1 + self.rho2 - self.d) / self.d - self.delta;
        let ratio_res = if self.v1 > 0.0 {
            self.area_om2 / self.area_om1 - self.v2 / self.v1
        } else {
            0.0
        };
        let c1 = self.d1 * (self.rho1 - self.d1);
        let c2 = self.d2 * (self.rho2 - self.d2);
        let chord_res = (c1 - c2) / self.d / self.d;
        let lam_res = if self.v1 > 0.0 {
            (self.lambda * self.lambda - 1.0) - self.v1 / self.area_om1
        } else {
            0.0
        };
        (delta_res, ratio_res, chord_res, lam_res)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rho_min_examples() {
        assert_relative_eq!(rho_min(1.0, 1.0, 1.0, 2).unwrap(), 0.5, max_relative = 1e-15);
        assert_relative_eq!(rho_min(1.0, 1.0, 0.0, 2).unwrap(), 1.0, max_relative = 1e-15);
        assert_relative_eq!(rho_min(2.0, 4.0, 1.0, 2).unwrap(), 4.0 / 3.0, max_relative = 1e-15);
        assert!(rho_min(1.0, 0.0, 0.0, 2).is_err());
    }

    #[test]
    fn delta0_examples() {
        // Huge domain: clamped to zero.
        assert_eq!(delta0(1e9, 1.0, 2).unwrap(), 0.0);
        // Numerator zero: exactly one.
        let omega = unit_ball_volume(2);
        assert_relative_eq!(delta0(4.0 * omega, 1.0, 2).unwrap(), 1.0, max_relative = 1e-14);
        // |Ω| = 100π, d = 1, n = 2: 1 − 96π/128π = 0.25.
        assert_relative_eq!(delta0(100.0 * PI, 1.0, 2).unwrap(), 0.25, max_relative = 1e-13);
    }

    #[test]
    fn tangent_configuration_is_analytic() {
        let g = solve_geometry(1.0, 0.0, PI, PI).unwrap();
        assert_relative_eq!(g.rho1, 0.5, max_relative = 1e-14);
        assert_relative_eq!(g.rho2, 0.5, max_relative = 1e-14);
        assert_relative_eq!(g.d1, 0.5, max_relative = 1e-14);
        assert_relative_eq!(g.d2, 0.5, max_relative = 1e-14);
        assert_relative_eq!(g.area_om1, PI * 0.25, max_relative = 1e-12);
        assert!(g.chord_half_height() < 1e-9);
    }

    #[test]
    fn full_overlap_is_a_round_union() {
        let g = solve_geometry(1.0, 1.0, PI, 0.3 * PI).unwrap();
        assert_relative_eq!(g.rho1, 1.0, max_relative = 1e-14);
        assert_relative_eq!(g.rho2, 1.0, max_relative = 1e-14);
        assert!(g.a_star.norm() < 1e-14);
        assert_relative_eq!(g.area_om1 + g.area_om2, PI, max_relative = 1e-12);
        assert_relative_eq!(g.area_om2 / g.area_om1, 0.3, max_relative = 1e-11);
    }

    #[test]
    fn mid_overlap_residuals() {
        let v1 = 2.0;
        let g = solve_geometry(1.0, 0.4, v1, 0.3 * v1).unwrap();
        let (dres, rres, cres, lres) = g.residuals();
        assert!(dres.abs() < 1e-10, "delta residual {dres}");
        assert!(rres.abs() < 1e-10, "ratio residual {rres}");
        assert!(cres.abs() < 1e-10, "chord residual {cres}");
        assert!(lres.abs() < 1e-10, "lambda residual {lres}");
        assert!(g.rho2 <= g.rho1 && g.rho1 < g.d);
        assert_relative_eq!(g.a1.dist(g.a2), 1.0, max_relative = 1e-14);
    }

    #[test]
    fn v2_zero_is_degenerate_and_v_zero_is_identity() {
        assert!(matches!(solve_geometry(1.0, 0.5, 1.0, 0.0), Err(Error::Degenerate(_))));
        let g = solve_geometry(1.0, 0.3, 0.0, 0.0).unwrap();
        assert_eq!(g.lambda, 1.0);
        assert_eq!(g.strength(), 0.0);
    }

    #[test]
    fn shapes_close_up_and_match_segment_areas() {
        for &(delta, ratio) in &[(0.0, 1.0), (0.2, 0.5), (0.4, 0.3), (0.9, 0.3), (1.0, 0.1)] {
            let g = solve_geometry(1.3, delta, 2.0, 2.0 * ratio).unwrap();
            let s1 = g.shape_omega1();
            let s2 = g.shape_omega2();
            let su = g.shape_union();
            assert_relative_eq!(s1.area(), g.area_om1, max_relative = 1e-10);
            assert_relative_eq!(s2.area(), g.area_om2, max_relative = 1e-10);
            assert_relative_eq!(su.area(), g.area_om1 + g.area_om2, max_relative = 1e-10);
        }
    }

    #[test]
    fn union_shape_max_matches_q_max() {
        let g = solve_geometry(1.0, 0.4, 2.25 * PI / 1.3, 2.25 * PI * 0.3 / 1.3).unwrap();
        let su = g.shape_union();
        assert_relative_eq!(su.max_q(20000), g.q_max(), max_relative = 1e-6);
        // q is minimized in the overlap throat and is at least δ·d there.
        assert!(su.min_q(20000) >= g.delta * g.d - 1e-9);
    }
}
