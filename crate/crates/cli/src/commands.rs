//! Implementations of the subcommands; every function is a pure map from a
//! configuration to an output string so runs are reproducible byte for byte.

use crate::config::RunConfig;
use crate::svg::Svg;
use cavlab::cavmap::{CavityMap, PiecewiseCavityMap};
use cavlab::energy::{domain_energy, domain_energy_sweep, ub_formula, QuadratureParams};
use cavlab::lowerbound::{distortion_triple, pro1_bound, th_lb_terms};
use cavlab::raster::{fraenkel, max_intersection_bruteforce_seeded, RasterSet};
use cavlab::transition::{
    necessary_condition, solve_transition, CompositeMap, TransitionMap, TransitionSpec,
    DEFAULT_N_S, DEFAULT_N_T,
};
use cavlab::twoball::{solve_geometry, TwoBallGeometry};
use cavlab::util::halton2;
use cavlab::Vec2;
use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

/// CLI-level error with the process exit code it maps to.
#[derive(Debug)]
pub enum CliError {
    /// Exit code 2: invalid configuration or geometry.
    Config(String),
    /// Exit code 3: numerical failure.
    Numeric(String),
    /// Exit code 4: I/O failure.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numeric(m) => write!(f, "numerical failure: {m}"),
            CliError::Io(m) => write!(f, "i/o failure: {m}"),
        }
    }
}

impl From<cavlab::Error> for CliError {
    fn from(e: cavlab::Error) -> Self {
        match e {
            cavlab::Error::Numerical(m) => CliError::Numeric(m),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<crate::config::ConfigError> for CliError {
    fn from(e: crate::config::ConfigError) -> Self {
        CliError::Config(e.0)
    }
}

/// 17 significant digits, round-trip exact. Negative zero is normalized so
/// clamped terms print stably.
fn g17(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

const CSV_EOL: &str = "\r\n";

fn geometry(cfg: &RunConfig) -> Result<TwoBallGeometry, CliError> {
    Ok(solve_geometry(cfg.d, cfg.delta, cfg.v1, cfg.v2)?)
}

fn quad_params(cfg: &RunConfig) -> QuadratureParams {
    QuadratureParams {
        n_theta: cfg.n_theta,
        radial_per_decade: cfg.n_r,
        error_estimate: true,
    }
}

pub fn construct(cfg: &RunConfig) -> Result<String, CliError> {
    let g = geometry(cfg)?;
    let (dres, rres, cres, lres) = g.residuals();
    let mut out = String::new();
    let mut line = |k: &str, v: String| {
        let _ = writeln!(out, "{k} = {v}");
    };
    line("d", g17(g.d));
    line("delta", g17(g.delta));
    line("v1", g17(g.v1));
    line("v2", g17(g.v2));
    line("rho1", g17(g.rho1));
    line("rho2", g17(g.rho2));
    line("d1", g17(g.d1));
    line("d2", g17(g.d2));
    line("a_hat", g17(g.a_hat));
    line("tilde_a1", format!("({}, {})", g17(g.tilde_a1.x), g17(g.tilde_a1.y)));
    line("tilde_a2", format!("({}, {})", g17(g.tilde_a2.x), g17(g.tilde_a2.y)));
    line("a1", format!("({}, {})", g17(g.a1.x), g17(g.a1.y)));
    line("a2", format!("({}, {})", g17(g.a2.x), g17(g.a2.y)));
    line("a_star", format!("({}, {})", g17(g.a_star.x), g17(g.a_star.y)));
    line("lambda", g17(g.lambda));
    line("area_om1", g17(g.area_om1));
    line("area_om2", g17(g.area_om2));
    line("chord_half_height", g17(g.chord_half_height()));
    line("residual_delta", format!("{dres:.3e}"));
    line("residual_area_ratio", format!("{rres:.3e}"));
    line("residual_chord_height", format!("{cres:.3e}"));
    line("residual_lambda", format!("{lres:.3e}"));
    Ok(out)
}

pub const SANDWICH_HEADER: &str =
    "d,delta,v1,v2,eps1,eps2,r,e_lower_pro1,e_interaction_thlb,e_numeric,e_ub_formula,slope_fit";

fn sandwich_row(cfg: &RunConfig) -> Result<String, CliError> {
    let g = geometry(cfg)?;
    let map = PiecewiseCavityMap::new(g)?;
    let params = quad_params(cfg);
    let rep = domain_energy(&map, cfg.eps1, cfg.eps2, cfg.r, &params)?;
    let lower = pro1_bound(
        &[map.geometry.v1, map.geometry.v2],
        &[cfg.eps1, cfg.eps2],
        cfg.r,
        &[true, true],
    );
    let (_, interaction) = th_lb_terms(
        map.geometry.v1,
        map.geometry.v2,
        cfg.d,
        cfg.eps1,
        cfg.eps2,
        cfg.r,
        cfg.c,
    );
    let upper = ub_formula(
        map.geometry.v1,
        map.geometry.v2,
        cfg.d,
        cfg.eps1,
        cfg.eps2,
        cfg.r,
        cfg.delta,
        cfg.c1,
        cfg.c2,
    );
    let slope = if map.geometry.v1 > 0.0 {
        let sweep = domain_energy_sweep(&map, cfg.r, &[1e-2, 1e-3, 1e-4], &params)?;
        sweep[0].leading_coefficient.unwrap_or(0.0)
    } else {
        0.0
    };
    let cols = [
        cfg.d,
        cfg.delta,
        map.geometry.v1,
        map.geometry.v2,
        cfg.eps1,
        cfg.eps2,
        cfg.r,
        lower,
        interaction,
        rep.excess(),
        upper,
        slope,
    ];
    Ok(cols.iter().map(|&x| g17(x)).collect::<Vec<_>>().join(","))
}

pub fn sandwich(cfg: &RunConfig) -> Result<String, CliError> {
    Ok(format!("{SANDWICH_HEADER}{CSV_EOL}{}{CSV_EOL}", sandwich_row(cfg)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Delta,
    D,
    Eps,
    Ratio,
}

impl std::str::FromStr for SweepAxis {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "delta" => Ok(SweepAxis::Delta),
            "d" => Ok(SweepAxis::D),
            "eps" => Ok(SweepAxis::Eps),
            "ratio" => Ok(SweepAxis::Ratio),
            other => Err(format!("unknown sweep axis '{other}' (delta|d|eps|ratio)")),
        }
    }
}

/// One sandwich row per grid value. `ratio` rescales (v1, v2) holding
/// v1 + v2 fixed; `eps` sets both hole radii.
pub fn sweep(cfg: &RunConfig, axis: SweepAxis, grid: &[f64]) -> Result<String, CliError> {
    let mut out = String::from(SANDWICH_HEADER);
    out.push_str(CSV_EOL);
    for &value in grid {
        let mut point = cfg.clone();
        match axis {
            SweepAxis::Delta => point.delta = value,
            SweepAxis::D => point.d = value,
            SweepAxis::Eps => {
                point.eps1 = value;
                point.eps2 = value;
            }
            SweepAxis::Ratio => {
                let total = cfg.v1 + cfg.v2;
                point.v1 = total / (1.0 + value);
                point.v2 = total - point.v1;
            }
        }
        point.validate()?;
        out.push_str(&sandwich_row(&point)?);
        out.push_str(CSV_EOL);
    }
    Ok(out)
}

/// Evaluate the full deformation, routing through the transition annulus and
/// the radial far field when one is attached.
fn composite_eval(
    map: &PiecewiseCavityMap,
    trans: Option<&TransitionMap>,
    x: Vec2,
) -> Result<Vec2, CliError> {
    match trans {
        Some(t) => Ok(CompositeMap { cavity: map, transition: t }.eval(x)?),
        None => Ok(map.eval(x)?),
    }
}

fn mapped_polyline(
    map: &PiecewiseCavityMap,
    trans: Option<&TransitionMap>,
    points: &[Vec2],
) -> Result<Vec<Vec2>, CliError> {
    points.iter().map(|&p| composite_eval(map, trans, p)).collect()
}

fn circle_points(center: Vec2, r: f64, n: usize) -> Vec<Vec2> {
    (0..=n).map(|k| center + Vec2::unit(TAU * k as f64 / n as f64) * r).collect()
}

/// Vector rendering of the reference and deformed configurations side by
/// side: circles and rays of the ball construction, their images, and the
/// opened cavities (filled).
pub fn render(cfg: &RunConfig) -> Result<String, CliError> {
    let g = geometry(cfg)?;
    let map = PiecewiseCavityMap::new(g)?;
    let g = &map.geometry;
    let trans = if cfg.transition {
        let spec = TransitionSpec::new(g.clone())?;
        Some(solve_transition(&spec, DEFAULT_N_S, DEFAULT_N_T)?)
    } else {
        None
    };

    let thin = 0.006 * g.d;
    let mid = 0.012 * g.d;
    let n_pts = 512;
    let mut svg = Svg::new();

    // The deformed pane sits to the right of the reference pane.
    let reach = match &trans {
        Some(t) => (t.spec.r3.max(cfg.r) + (cfg.v1 + cfg.v2) / PI).max(cfg.r),
        None => cfg.r * g.lambda,
    };
    let shift = Vec2::new(2.6 * reach, 0.0);

    let reference = |svg: &mut Svg, pts: &[Vec2], width: f64| {
        svg.polyline(pts, "#9aa3af", width);
    };
    let deformed = |svg: &mut Svg, pts: &[Vec2], width: f64| -> Result<(), CliError> {
        let image: Vec<Vec2> =
            mapped_polyline(&map, trans.as_ref(), pts)?.iter().map(|&p| p + shift).collect();
        svg.polyline(&image, "#1f2933", width);
        Ok(())
    };

    // Circles of the ball construction about a1, a2 and a_star.
    for (center, inner, outer) in [
        (g.a1, cfg.eps1, 0.92 * g.d1),
        (g.a2, cfg.eps2, 0.92 * g.d2),
        (g.a_star, 1.04 * g.q_max(), cfg.r),
    ] {
        let steps = 4;
        for k in 0..=steps {
            let r = inner * (outer / inner).powf(k as f64 / steps as f64);
            let pts = circle_points(center, r, n_pts);
            reference(&mut svg, &pts, thin);
            deformed(&mut svg, &pts, thin)?;
        }
    }
    // Radial rays from a_star across the outer region.
    let union = g.shape_union();
    for k in 0..24 {
        let theta = TAU * k as f64 / 24.0;
        let q = union.q(theta).max(1e-6 * g.d);
        let pts: Vec<Vec2> = (0..=n_pts)
            .map(|i| {
                let r = q + (cfg.r - q) * i as f64 / n_pts as f64;
                g.a_star + Vec2::unit(theta) * r
            })
            .collect();
        reference(&mut svg, &pts, thin);
        deformed(&mut svg, &pts, thin)?;
    }
    // Sub-domain boundaries and their common image.
    for shape in [g.shape_omega1(), g.shape_omega2()] {
        let pts: Vec<Vec2> =
            (0..=n_pts).map(|k| shape.boundary_point(TAU * k as f64 / n_pts as f64)).collect();
        reference(&mut svg, &pts, mid);
        deformed(&mut svg, &pts, mid)?;
    }
    // Opened cavities, filled.
    for (idx, eps) in [(1usize, cfg.eps1), (2usize, cfg.eps2)] {
        let poly: Vec<Vec2> = map
            .cavity_boundary(idx, eps, n_pts)?
            .iter()
            .map(|&p| p + shift)
            .collect();
        svg.polygon(&poly, "#c5d5e8", "#1f2933", thin);
        let hole = circle_points(if idx == 1 { g.a1 } else { g.a2 }, eps, 128);
        svg.polygon(&hole, "#e8d5c5", "#9aa3af", thin);
    }
    // Cavitation points.
    svg.dot(g.a1, 0.015 * g.d, "#b3412f");
    svg.dot(g.a2, 0.015 * g.d, "#b3412f");

    Ok(svg.finish())
}

pub fn distortion(
    r_outer: f64,
    r1: f64,
    r2: f64,
    trials: u32,
    resolution: usize,
    seed: u64,
) -> Result<String, CliError> {
    let t = distortion_triple(r_outer, r1, r2)?;
    let (bf, c1, c2) = max_intersection_bruteforce_seeded(r_outer, r1, r2, trials, resolution, seed);
    let mut out = String::new();
    let _ = writeln!(out, "h = {}", g17(t.h));
    let _ = writeln!(out, "q1 = {}", g17(t.q1));
    let _ = writeln!(out, "q2 = {}", g17(t.q2));
    let _ = writeln!(out, "max_intersection = {}", g17(t.max_intersection));
    let _ = writeln!(out, "triple_intersection = {}", g17(t.triple_intersection()));
    let _ = writeln!(out, "lens_lower_bound = {}", g17(t.lens_lower_bound));
    let _ = writeln!(out, "distance_residual = {:.3e}", t.distance_residual());
    let _ = writeln!(out, "bruteforce_best = {}", g17(bf));
    let _ = writeln!(out, "bruteforce_centers = ({}, {}) ({}, {})", g17(c1.x), g17(c1.y), g17(c2.x), g17(c2.y));
    let _ = writeln!(
        out,
        "bruteforce_vs_analytic = {:.6}",
        bf / t.max_intersection
    );
    Ok(out)
}

/// Fraenkel asymmetry of the opened cavities, raster-measured.
pub fn asymmetry(cfg: &RunConfig, resolution: usize) -> Result<String, CliError> {
    let g = geometry(cfg)?;
    let map = PiecewiseCavityMap::new(g)?;
    let mut out = String::new();
    for (idx, eps) in [(1usize, cfg.eps1), (2usize, cfg.eps2)] {
        let poly = map.cavity_boundary(idx, eps, 1024)?;
        let (mut lo, mut hi) = (poly[0], poly[0]);
        for p in &poly {
            lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let extent = (hi.x - lo.x).max(hi.y - lo.y) * 1.2;
        let px = extent / resolution as f64;
        let origin = Vec2::new(
            0.5 * (lo.x + hi.x) - 0.5 * extent,
            0.5 * (lo.y + hi.y) - 0.5 * extent,
        );
        let mut set = RasterSet::empty(origin, px, resolution, resolution)
            .map_err(CliError::from)?;
        set.add_polygon(&poly);
        let d = fraenkel(&set).map_err(CliError::from)?;
        let per = set.perimeter();
        let area = set.area();
        let _ = writeln!(out, "cavity_{idx}_asymmetry = {d:.6}");
        let _ = writeln!(out, "cavity_{idx}_area = {}", g17(area));
        let _ = writeln!(out, "cavity_{idx}_perimeter = {}", g17(per));
        let _ = writeln!(
            out,
            "cavity_{idx}_isoperimetric_ratio = {:.6}",
            per * per / (4.0 * PI * area)
        );
    }
    Ok(out)
}

pub fn transition_report(cfg: &RunConfig, n_s: usize, n_t: usize) -> Result<String, CliError> {
    let g = geometry(cfg)?;
    let spec = TransitionSpec::new(g)?;
    let tmap = solve_transition(&spec, n_s, n_t)?;
    let geom = &spec.geometry;
    let (ok, lhs, rhs) =
        necessary_condition(spec.r1, spec.r2, geom.v1, geom.v2, geom.delta);
    let (dh, dshear) = tmap.phi_deviation();
    let mut worst_det = 0.0f64;
    for k in 0..2000 {
        let (a, b) = halton2(k);
        let r = spec.r1 + (0.05 + 0.9 * a) * (spec.r2 - spec.r1);
        let x = geom.a_star + Vec2::unit(TAU * b) * r;
        let det = tmap.grad_fd(x, 1e-5 * geom.d)?.det();
        worst_det = worst_det.max((det - 1.0).abs());
    }
    let mut boundary_outer = 0.0f64;
    let mut boundary_inner = 0.0f64;
    for k in 0..256 {
        let t = TAU * (k as f64 + 0.5) / 256.0;
        let u = tmap.eval(geom.a_star + Vec2::unit(t) * spec.r2)?;
        boundary_outer = boundary_outer.max(((u - spec.lambda_a_star).norm() - spec.r3).abs());
        let u = tmap.eval(geom.a_star + Vec2::unit(t) * spec.r1)?;
        let expected = spec.lambda_a_star + Vec2::unit(t) * spec.rho(t);
        boundary_inner = boundary_inner.max(u.dist(expected));
    }
    let energy = tmap.annulus_energy_fd(64, 256)?;
    let mut out = String::new();
    let _ = writeln!(out, "r1 = {}", g17(spec.r1));
    let _ = writeln!(out, "r2 = {}", g17(spec.r2));
    let _ = writeln!(out, "r3 = {}", g17(spec.r3));
    let _ = writeln!(out, "necessary_condition = {} (lhs {}, rhs {})", ok, g17(lhs), g17(rhs));
    let _ = writeln!(out, "identity_shear = {}", tmap.identity_shear);
    let _ = writeln!(out, "sup_h_minus_s = {:.6e}", dh);
    let _ = writeln!(out, "sup_shear_angle = {:.6e}", dshear);
    let _ = writeln!(out, "max_abs_det_error = {:.6e}", worst_det);
    let _ = writeln!(out, "outer_boundary_residual = {:.6e}", boundary_outer);
    let _ = writeln!(out, "inner_boundary_residual = {:.6e}", boundary_inner);
    let _ = writeln!(out, "annulus_energy = {}", g17(energy));
    Ok(out)
}
