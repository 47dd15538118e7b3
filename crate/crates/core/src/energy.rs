//! Singularity-aware quadrature of the elastic energy density
//! `(1/n)|Du/√(n−1)|ⁿ` (n = 2 throughout: `(1/2)|Du|²` with the Frobenius
//! norm), plus the closed-form upper-bound expression.

use crate::cavmap::{CavityMap, PiecewiseCavityMap, Region};
use crate::geom2d::Vec2;
use crate::util::{ls_slope, Accumulator};
use crate::{Error, Result};
use std::f64::consts::{PI, TAU};

/// Offset used to keep quadrature nodes strictly inside their smooth panel.
const PANEL_NUDGE: f64 = 1e-12;

#[derive(Debug, Clone, Copy)]
pub struct QuadratureParams {
    /// Angular node budget per full revolution.
    pub n_theta: usize,
    /// Radial nodes per decade of the geometric grid.
    pub radial_per_decade: usize,
    /// Re-run at half resolution to attach a Richardson error estimate.
    pub error_estimate: bool,
}

impl Default for QuadratureParams {
    fn default() -> Self {
        QuadratureParams { n_theta: 512, radial_per_decade: 32, error_estimate: true }
    }
}

/// Line integral of the energy density over `∂B(center, r)` together with
/// the length of the image curve. Trapezoid rule on uniform angles, panels
/// split where the circle crosses an interface of the map.
pub fn circle_integral<M: CavityMap>(
    map: &M,
    center: Vec2,
    r: f64,
    n: usize,
) -> Result<(f64, f64)> {
    if n < 256 {
        return Err(Error::Domain(format!("circle_integral: N = {n} < 256")));
    }
    if !(r > 0.0) {
        return Err(Error::Domain(format!("circle_integral: radius {r} <= 0")));
    }
    for (p, _) in map.cavities() {
        if (p.dist(center) - r).abs() < 1e-9 * r {
            return Err(Error::Domain("circle passes through a cavitation point".into()));
        }
    }
    let mut dens_acc = Accumulator::new();
    let mut len_acc = Accumulator::new();
    for (a, b) in circle_panels(map, center, r) {
        let m = (((b - a) / TAU * n as f64).ceil() as usize).max(4);
        let h = (b - a) / m as f64;
        let node = |k: usize| -> (f64, f64) {
            let theta = (a + k as f64 * h).clamp(a + PANEL_NUDGE, b - PANEL_NUDGE);
            let zeta = Vec2::unit(theta);
            let g = map.grad_unchecked(center + zeta * r);
            (0.5 * g.norm2_frobenius(), g.mul_vec(zeta.perp()).norm())
        };
        let mut prev = node(0);
        for k in 1..=m {
            let cur = node(k);
            dens_acc.add(0.5 * h * (prev.0 + cur.0) * r);
            len_acc.add(0.5 * h * (prev.1 + cur.1) * r);
            prev = cur;
        }
    }
    Ok((dens_acc.value(), len_acc.value()))
}

/// Area enclosed by the image of `∂B(center, r)`, by quadrature of
/// `(1/2)∮ u × du`. Uses the exact tangential derivative `Du·τ r`.
pub fn circle_image_area<M: CavityMap>(map: &M, center: Vec2, r: f64, n: usize) -> Result<f64> {
    if n < 256 {
        return Err(Error::Domain(format!("circle_image_area: N = {n} < 256")));
    }
    let mut acc = Accumulator::new();
    for (a, b) in circle_panels(map, center, r) {
        let m = (((b - a) / TAU * n as f64).ceil() as usize).max(4);
        let h = (b - a) / m as f64;
        let node = |k: usize| -> f64 {
            let theta = (a + k as f64 * h).clamp(a + PANEL_NUDGE, b - PANEL_NUDGE);
            let zeta = Vec2::unit(theta);
            let x = center + zeta * r;
            let u = map.eval(x).expect("node away from singularities");
            let du = map.grad_unchecked(x).mul_vec(zeta.perp() * r);
            u.cross(du)
        };
        let mut prev = node(0);
        for k in 1..=m {
            let cur = node(k);
            acc.add(0.25 * h * (prev + cur));
            prev = cur;
        }
    }
    Ok(acc.value())
}

fn circle_panels<M: CavityMap>(map: &M, center: Vec2, r: f64) -> Vec<(f64, f64)> {
    let splits = map.circle_split_angles(center, r);
    if splits.is_empty() {
        return vec![(0.0, TAU)];
    }
    let mut panels = Vec::with_capacity(splits.len());
    for i in 0..splits.len() {
        let a = splits[i];
        let b = if i + 1 < splits.len() { splits[i + 1] } else { splits[0] + TAU };
        if b - a > 1e-12 {
            panels.push((a, b));
        }
    }
    panels
}

#[derive(Debug, Clone, Copy)]
pub struct AnnulusEnergy {
    pub value: f64,
    pub error_estimate: f64,
}

/// Energy over the annulus `r_in < |x − center| < r_out`: a geometric
/// (log-spaced) Simpson grid in radius composed with the split-panel circle
/// rule in angle.
pub fn annulus_energy<M: CavityMap>(
    map: &M,
    center: Vec2,
    r_in: f64,
    r_out: f64,
    n_r: usize,
    n_theta: usize,
) -> Result<AnnulusEnergy> {
    if !(0.0 < r_in && r_in < r_out) {
        return Err(Error::Domain(format!("annulus_energy: invalid radii {r_in}, {r_out}")));
    }
    for (p, _) in map.cavities() {
        let dist = p.dist(center);
        if dist > r_in * (1.0 + 1e-12) && dist < r_out * (1.0 - 1e-12) {
            return Err(Error::Domain("annulus_energy: cavitation point inside the annulus".into()));
        }
    }
    let value = annulus_pass(map, center, r_in, r_out, n_r, n_theta)?;
    let coarse = annulus_pass(map, center, r_in, r_out, (n_r / 2).max(8), (n_theta / 2).max(256))?;
    Ok(AnnulusEnergy { value, error_estimate: (value - coarse).abs() / 3.0 })
}

fn annulus_pass<M: CavityMap>(
    map: &M,
    center: Vec2,
    r_in: f64,
    r_out: f64,
    n_r: usize,
    n_theta: usize,
) -> Result<f64> {
    let a = r_in.ln();
    let b = r_out.ln();
    let panels = (n_r / 2).max(4);
    let h = (b - a) / panels as f64;
    let line = |s: f64| -> Result<f64> {
        let r = s.exp();
        Ok(circle_integral(map, center, r, n_theta)?.0 * r)
    };
    let mut acc = Accumulator::new();
    let mut left = line(a)?;
    for k in 0..panels {
        let s0 = a + k as f64 * h;
        let mid = line(s0 + 0.5 * h)?;
        let right = line(s0 + h)?;
        acc.add(h / 6.0 * (left + 4.0 * mid + right));
        left = right;
    }
    Ok(acc.value())
}

/// Full energy account of a two-cavity map over
/// `B(a*, R) \ (B(a1, eps1) ∪ B(a2, eps2))`.
#[derive(Debug, Clone)]
pub struct EnergyReport {
    /// Plain integral of the density.
    pub total: f64,
    pub region_om1: f64,
    pub region_om2: f64,
    pub region_outer: f64,
    /// Analytic area of the integration domain.
    pub area: f64,
    /// `total − v1 log(1/eps1) − v2 log(1/eps2)`.
    pub renormalized: f64,
    pub quadrature_error_estimate: f64,
    /// Fitted slope of `total` against `log(1/eps)`, when a sweep was run.
    pub leading_coefficient: Option<f64>,
}

impl EnergyReport {
    pub fn per_region(&self) -> [(Region, f64); 3] {
        [
            (Region::Omega1, self.region_om1),
            (Region::Omega2, self.region_om2),
            (Region::Outer, self.region_outer),
        ]
    }

    /// `(1/n)∫(|Du/√(n−1)|ⁿ − 1) = total − area/n` with n = 2.
    pub fn excess(&self) -> f64 {
        self.total - 0.5 * self.area
    }
}

/// Assemble the energy from three exact polar regions: about `a1` inside
/// `Ω1`, about `a2` inside `Ω2`, and about `a*` outside the union. Radial
/// integration runs from the inner radius to the exact piecewise boundary
/// `q(ζ)` along every angle, so the decomposition has no overlap or gap.
pub fn domain_energy(
    map: &PiecewiseCavityMap,
    eps1: f64,
    eps2: f64,
    r_outer: f64,
    params: &QuadratureParams,
) -> Result<EnergyReport> {
    let g = &map.geometry;
    if !(eps1 > 0.0) || eps1 >= g.d1 * (1.0 - 1e-12) {
        return Err(Error::Domain(format!(
            "domain_energy: eps1 = {eps1} does not satisfy 0 < eps1 < d1 = {}",
            g.d1
        )));
    }
    if !(eps2 > 0.0) || eps2 >= g.d2 * (1.0 - 1e-12) {
        return Err(Error::Domain(format!(
            "domain_energy: eps2 = {eps2} does not satisfy 0 < eps2 < d2 = {}",
            g.d2
        )));
    }
    if r_outer <= g.q_max() {
        return Err(Error::Domain(format!(
            "domain_energy: R = {r_outer} must exceed the union reach {}",
            g.q_max()
        )));
    }

    let run = |p: &QuadratureParams| -> Result<(f64, f64, f64, f64)> {
        let e1 = region_energy(map, Region::Omega1, eps1, None, p)?;
        let e2 = region_energy(map, Region::Omega2, eps2, None, p)?;
        let eo = region_energy(map, Region::Outer, 0.0, Some(r_outer), p)?;
        // Region decomposition self-check: the same angular rule integrating
        // the constant density 1 must reproduce the analytic area. The
        // tolerance widens with the fourth power below the default angular
        // resolution (Simpson order).
        let analytic = PI * (r_outer * r_outer - eps1 * eps1 - eps2 * eps2);
        let measured = e1.1 + e2.1 + eo.1;
        let tol = 1e-8 * (512.0 / p.n_theta as f64).powi(4).max(1.0);
        if ((measured - analytic) / analytic).abs() > tol {
            return Err(Error::Numerical(format!(
                "region decomposition failed the area check: {measured} vs {analytic}"
            )));
        }
        Ok((e1.0, e2.0, eo.0, analytic))
    };

    let (r1, r2, ro, area) = run(params)?;
    let total = r1 + r2 + ro;
    let error_estimate = if params.error_estimate {
        let coarse = QuadratureParams {
            n_theta: (params.n_theta / 2).max(64),
            radial_per_decade: (params.radial_per_decade / 2).max(8),
            error_estimate: false,
        };
        let (c1, c2, co, _) = run(&coarse)?;
        (total - (c1 + c2 + co)).abs() / 3.0
    } else {
        0.0
    };
    Ok(EnergyReport {
        total,
        region_om1: r1,
        region_om2: r2,
        region_outer: ro,
        area,
        renormalized: total - g.v1 * (1.0 / eps1).ln() - g.v2 * (1.0 / eps2).ln(),
        quadrature_error_estimate: error_estimate,
        leading_coefficient: None,
    })
}

/// Energy and area-weight quadrature of one polar region.
fn region_energy(
    map: &PiecewiseCavityMap,
    region: Region,
    r_inner: f64,
    r_outer: Option<f64>,
    params: &QuadratureParams,
) -> Result<(f64, f64)> {
    let piece = map.piece(region);
    let shape = &piece.shape;
    let mut energy = Accumulator::new();
    let mut weight = Accumulator::new();
    for (a, b, idx) in shape.panels() {
        let m = (((b - a) / TAU * params.n_theta as f64 / 2.0).ceil() as usize).max(4);
        let h = (b - a) / m as f64;
        let radial = |theta: f64| -> (f64, f64) {
            let theta = theta.clamp(a + PANEL_NUDGE, b - PANEL_NUDGE);
            let q = shape.q_by_piece(idx, theta);
            let (lo, hi) = match r_outer {
                None => (r_inner, q),
                Some(out) => (q, out),
            };
            radial_integral(piece, idx, theta, lo, hi, params.radial_per_decade)
        };
        let mut left = radial(a);
        for k in 0..m {
            let t0 = a + k as f64 * h;
            let mid = radial(t0 + 0.5 * h);
            let right = radial(t0 + h);
            energy.add(h / 6.0 * (left.0 + 4.0 * mid.0 + right.0));
            weight.add(h / 6.0 * (left.1 + 4.0 * mid.1 + right.1));
            left = right;
        }
    }
    Ok((energy.value(), weight.value()))
}

/// `(∫ density(r, θ) r dr, ∫ r dr)` along one ray, log-spaced Simpson.
fn radial_integral(
    piece: &crate::cavmap::AnglePreservingPiece,
    piece_idx: usize,
    theta: f64,
    lo: f64,
    hi: f64,
    per_decade: usize,
) -> (f64, f64) {
    // Tangent configurations have rays where the region reaches the origin
    // (q = 0 up to rounding). The integrand is bounded there, so starting
    // the geometric grid at a negligible inner radius is exact to far below
    // the quadrature tolerance.
    let lo = lo.max(1e-9 * hi);
    if hi <= lo {
        return (0.0, 0.0);
    }
    let a = lo.ln();
    let b = hi.ln();
    let decades = (b - a) / std::f64::consts::LN_10;
    let panels = ((per_decade as f64 * decades / 2.0).ceil() as usize).max(4);
    let h = (b - a) / panels as f64;
    let zeta = Vec2::unit(theta);
    let f = |s: f64| -> f64 {
        let r = s.exp();
        let x = piece.origin + zeta * r;
        let g = piece.grad_pinned(x, piece_idx);
        0.5 * g.norm2_frobenius() * r * r
    };
    let mut acc = Accumulator::new();
    let mut left = f(a);
    for k in 0..panels {
        let s0 = a + k as f64 * h;
        let mid = f(s0 + 0.5 * h);
        let right = f(s0 + h);
        acc.add(h / 6.0 * (left + 4.0 * mid + right));
        left = right;
    }
    (acc.value(), 0.5 * (hi * hi - lo * lo))
}

/// Closed-form upper-bound expression with caller-supplied constants:
/// `C1(v1+v2+πR²) + v1(log R/eps1)₊ + v2(log R/eps2)₊`
/// `+ C2(v1+v2)((1−δ)(log R/d)₊ + δ(√(v2/v1) log d/eps1 + (v2/v1)^{1/4} log d/eps2))`.
#[allow(clippy::too_many_arguments)]
pub fn ub_formula(
    v1: f64,
    v2: f64,
    d: f64,
    eps1: f64,
    eps2: f64,
    r_outer: f64,
    delta: f64,
    c1: f64,
    c2: f64,
) -> f64 {
    let plus = |x: f64| x.max(0.0);
    let ratio = if v1 > 0.0 { v2 / v1 } else { 0.0 };
    c1 * (v1 + v2 + PI * r_outer * r_outer)
        + v1 * plus((r_outer / eps1).ln())
        + v2 * plus((r_outer / eps2).ln())
        + c2 * (v1 + v2)
            * ((1.0 - delta) * plus((r_outer / d).ln())
                + delta * (ratio.sqrt() * (d / eps1).ln() + ratio.powf(0.25) * (d / eps2).ln()))
}

/// Energy reports over a hole-radius grid (eps1 = eps2 = eps·d) with the
/// leading coefficient fitted against `log(1/eps)`.
pub fn domain_energy_sweep(
    map: &PiecewiseCavityMap,
    r_outer: f64,
    eps_over_d: &[f64],
    params: &QuadratureParams,
) -> Result<Vec<EnergyReport>> {
    let d = map.geometry.d;
    let mut reports = Vec::with_capacity(eps_over_d.len());
    let mut points = Vec::with_capacity(eps_over_d.len());
    for &e in eps_over_d {
        let eps = e * d;
        let rep = domain_energy(map, eps, eps, r_outer, params)?;
        points.push(((1.0 / eps).ln(), rep.total));
        reports.push(rep);
    }
    if points.len() >= 2 {
        let slope = ls_slope(&points);
        for rep in &mut reports {
            rep.leading_coefficient = Some(slope);
        }
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cavmap::RadialCavityMap;
    use crate::twoball::solve_geometry;
    use approx::assert_relative_eq;

    fn radial_unit() -> RadialCavityMap {
        RadialCavityMap::new(Vec2::ZERO, 1.0).unwrap()
    }

    #[test]
    fn circle_integral_radial_closed_form() {
        // (1/2)∮|Du|² = v/r + πr + πr³/(A²+r²) with v = πA².
        let map = radial_unit();
        for &r in &[0.3, 1.0, 2.5] {
            let (dens, len) = circle_integral(&map, Vec2::ZERO, r, 2048).unwrap();
            let expected = PI / r + PI * r + PI * r.powi(3) / (1.0 + r * r);
            assert_relative_eq!(dens, expected, max_relative = 1e-10);
            let f = (1.0 + r * r).sqrt();
            assert_relative_eq!(len, TAU * f, max_relative = 1e-10);
        }
    }

    #[test]
    fn circle_integral_identity_map() {
        // Identity: |Du|² = 2, so the density line integral is 2πr and the
        // image curve has length 2πr.
        let map = RadialCavityMap::new(Vec2::ZERO, 0.0).unwrap();
        let (dens, len) = circle_integral(&map, Vec2::ZERO, 0.7, 512).unwrap();
        assert_relative_eq!(dens, TAU * 0.7, max_relative = 1e-12);
        assert_relative_eq!(len, TAU * 0.7, max_relative = 1e-12);
    }

    #[test]
    fn image_isoperimetric_inequality_on_sampled_circles() {
        let v1 = 2.25 * PI / 1.3;
        let g = solve_geometry(1.0, 0.4, v1, 0.3 * v1).unwrap();
        let map = PiecewiseCavityMap::new(g).unwrap();
        let mid = (map.geometry.a1 + map.geometry.a2) * 0.5;
        for &r in &[0.1, 0.3, 1.5, 2.5] {
            let center = if r > 1.0 { mid } else { map.geometry.a1 };
            let (_, len) = circle_integral(&map, center, r, 2048).unwrap();
            let n = 4096;
            let poly: Vec<Vec2> = (0..n)
                .map(|k| map.eval(center + Vec2::unit(TAU * k as f64 / n as f64) * r).unwrap())
                .collect();
            let shoelace = crate::geom2d::polygon_area(&poly).unwrap();
            assert!(
                len * len >= 4.0 * PI * shoelace - 1e-9,
                "isoperimetric inequality violated at r = {r}"
            );
        }
    }

    #[test]
    fn annulus_energy_radial_antiderivative() {
        let map = radial_unit();
        let (eps, r) = (0.1, 1.0);
        let e = annulus_energy(&map, Vec2::ZERO, eps, r, 257, 512).unwrap();
        let v = PI;
        let expected = v * (r / eps).ln()
            + 0.5 * PI * (r * r - eps * eps)
            + PI * (0.5 * (r * r - eps * eps) - 0.5 * ((1.0 + r * r) / (1.0 + eps * eps)).ln());
        assert_relative_eq!(e.value, expected, max_relative = 1e-8);
        assert!((e.value - expected).abs() < 1e-6 * expected);
    }

    #[test]
    fn annulus_energy_identity_is_area() {
        let map = RadialCavityMap::new(Vec2::new(0.3, 0.2), 0.0).unwrap();
        let e = annulus_energy(&map, Vec2::new(0.3, 0.2), 0.5, 2.0, 257, 512).unwrap();
        assert_relative_eq!(e.value, PI * (4.0 - 0.25), max_relative = 1e-9);
    }

    #[test]
    fn annulus_error_estimate_brackets_refinement() {
        let map = radial_unit();
        let coarse = annulus_energy(&map, Vec2::ZERO, 0.1, 1.0, 33, 512).unwrap();
        let fine = annulus_energy(&map, Vec2::ZERO, 0.1, 1.0, 65, 1024).unwrap();
        assert!((fine.value - coarse.value).abs() <= coarse.error_estimate + 1e-12);
    }

    #[test]
    fn domain_energy_identity_map() {
        let g = solve_geometry(1.0, 0.4, 0.0, 0.0).unwrap();
        let map = PiecewiseCavityMap::new(g).unwrap();
        let params =
            QuadratureParams { n_theta: 256, radial_per_decade: 128, error_estimate: false };
        let rep = domain_energy(&map, 0.05, 0.05, 3.0, &params).unwrap();
        let area = PI * (9.0 - 2.0 * 0.0025);
        assert_relative_eq!(rep.total, area, max_relative = 1e-7);
        assert_relative_eq!(rep.excess(), 0.5 * area, max_relative = 1e-7);
        assert_relative_eq!(rep.area, area, max_relative = 1e-14);
    }

    #[test]
    fn domain_energy_log_growth_in_eps() {
        // Tangent configuration: round cavities, so the growth per decade is
        // exactly (v1 + v2) log 10.
        let v1 = 2.25 * PI / 1.3;
        let g = solve_geometry(1.0, 0.0, v1, 0.3 * v1).unwrap();
        let map = PiecewiseCavityMap::new(g).unwrap();
        let params = QuadratureParams { n_theta: 256, radial_per_decade: 24, error_estimate: false };
        let e1 = domain_energy(&map, 1e-2, 1e-2, 3.0, &params).unwrap();
        let e2 = domain_energy(&map, 1e-3, 1e-3, 3.0, &params).unwrap();
        let growth = e2.total - e1.total;
        let expected = (map.geometry.v1 + map.geometry.v2) * 10f64.ln();
        assert!(
            (growth - expected).abs() < 0.05 * expected,
            "growth {growth} vs leading term {expected}"
        );
    }

    #[test]
    fn domain_energy_log_growth_with_distorted_cavities() {
        // Overlapping configuration: the cavities are distorted and the
        // slope picks up the angular-derivative term
        // (λ²−1)/2 · (∮q1′² + ∮q2′²) on top of v1 + v2.
        let v1 = 2.25 * PI / 1.3;
        let g = solve_geometry(1.0, 0.4, v1, 0.3 * v1).unwrap();
        let map = PiecewiseCavityMap::new(g).unwrap();
        let params = QuadratureParams { n_theta: 512, radial_per_decade: 32, error_estimate: false };
        let e1 = domain_energy(&map, 1e-3, 1e-3, 3.0, &params).unwrap();
        let e2 = domain_energy(&map, 1e-4, 1e-4, 3.0, &params).unwrap();
        let growth = e2.total - e1.total;
        let dq2_integral = |shape: &crate::geom2d::PolarShape| {
            shape
                .panels()
                .iter()
                .map(|&(a, b, idx)| {
                    crate::util::simpson(|t| shape.dq_by_piece(idx, t).powi(2), a, b, 4000)
                })
                .sum::<f64>()
        };
        let distortion = 0.5
            * map.geometry.strength()
            * (dq2_integral(&map.geometry.shape_omega1())
                + dq2_integral(&map.geometry.shape_omega2()));
        let expected = (map.geometry.v1 + map.geometry.v2 + distortion) * 10f64.ln();
        assert!(
            (growth - expected).abs() < 0.01 * expected,
            "growth {growth} vs slope prediction {expected}"
        );
    }

    #[test]
    fn ub_formula_limit_cases() {
        // v2 = 0, δ = 1: only the volume and leading terms survive.
        let v = ub_formula(2.0, 0.0, 1.0, 0.01, 0.01, 3.0, 1.0, 0.5, 0.7);
        let expected = 0.5 * (2.0 + PI * 9.0) + 2.0 * (3.0 / 0.01f64).ln();
        assert_relative_eq!(v, expected, max_relative = 1e-14);
        // δ = 0: the interaction reduces to the outer-distortion term.
        let v = ub_formula(2.0, 1.0, 1.0, 0.01, 0.01, 3.0, 0.0, 0.5, 0.7);
        let expected = 0.5 * (3.0 + PI * 9.0)
            + 3.0 * (3.0 / 0.01f64).ln()
            + 0.7 * 3.0 * (3.0f64).ln();
        assert_relative_eq!(v, expected, max_relative = 1e-14);
        // Monotone nondecreasing in R on a grid.
        let mut prev = f64::NEG_INFINITY;
        for k in 0..40 {
            let r = 0.5 + 0.2 * k as f64;
            let v = ub_formula(2.0, 1.0, 1.0, 0.01, 0.02, r, 0.4, 0.5, 0.7);
            assert!(v >= prev - 1e-12);
            prev = v;
        }
    }

    #[test]
    fn theta_convergence_order_on_smooth_subregions() {
        let v1 = 2.25 * PI / 1.3;
        let g = solve_geometry(1.0, 0.4, v1, 0.3 * v1).unwrap();
        let map = PiecewiseCavityMap::new(g).unwrap();
        let run = |n_theta: usize| {
            let params =
                QuadratureParams { n_theta, radial_per_decade: 64, error_estimate: false };
            domain_energy(&map, 0.05, 0.05, 3.0, &params).unwrap().total
        };
        let reference = run(1024);
        let e32 = (run(32) - reference).abs();
        let e64 = (run(64) - reference).abs();
        let order = (e32 / e64).log2();
        assert!(order >= 1.9, "observed θ-order {order} (errors {e32:.3e}, {e64:.3e})");
    }
}
