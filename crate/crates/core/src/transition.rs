//! Transition to radial symmetry on a reference annulus: build the radial
//! parametrizations `w`, `v`, solve the two one-dimensional prescribed-mass
//! equations for the angular shear `β` and the radial rescaling `h`, and
//! assemble the incompressible map `u = v ∘ φ₂ ∘ φ₁ ∘ w⁻¹`.

use crate::cavmap::PiecewiseCavityMap;
use crate::geom2d::{Mat2, PolarShape, Vec2};
use crate::twoball::TwoBallGeometry;
use crate::util::{bisect_increasing, catmull_rom, Accumulator};
use crate::{Error, Result};
use std::f64::consts::{PI, SQRT_2, TAU};

/// Reference/target annulus data for the transition solve.
///
/// Invariants: `Ω1 ∪ Ω2 ⊂ B(a*, R1)`, `π R3² = v1 + v2 + π R2²`, and the
/// target inner boundary `ρ(θ)² = R1² + (v1+v2) q(θ)²/|Ω1 ∪ Ω2|`.
#[derive(Debug, Clone)]
pub struct TransitionSpec {
    pub geometry: TwoBallGeometry,
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    pub union_shape: PolarShape,
    pub lambda_a_star: Vec2,
}

impl TransitionSpec {
    /// Default radii: `R1 = q_max` and `π(R2² − R1²) = 2(v1+v2)(π q_max²/|Ω| − 1)`,
    /// which keeps `‖g − 1‖_∞ = 1/2` at the widest angle.
    pub fn new(geometry: TwoBallGeometry) -> Result<TransitionSpec> {
        let q_max = geometry.q_max();
        let vsum = geometry.v1 + geometry.v2;
        let union_area = geometry.area_om1 + geometry.area_om2;
        let spread = PI * q_max * q_max / union_area - 1.0;
        let r2 = if spread <= 1e-14 || vsum == 0.0 {
            // Round union (δ = 1) or identity: any thin annulus works.
            q_max * 1.5
        } else {
            (q_max * q_max + 2.0 * vsum * spread / PI).sqrt()
        };
        Self::with_radii(geometry, q_max, r2)
    }

    /// Wide-annulus sizing `V_δ = 64 (v1+v2)(1−δ)`, `R1 = max{√(V_δ/π), 2d}`,
    /// `R2 = √(R1² + V_δ/π)`: here `‖g − 1‖_∞ = O(1−δ)`, so the shear and the
    /// transition energy both vanish as the union becomes round.
    pub fn theorem_sized(geometry: TwoBallGeometry) -> Result<TransitionSpec> {
        let vsum = geometry.v1 + geometry.v2;
        let v_delta = 64.0 * vsum * (1.0 - geometry.delta);
        let r1 = (v_delta / PI).sqrt().max(2.0 * geometry.d).max(geometry.q_max());
        let r2 = (r1 * r1 + (v_delta / PI).max(0.04 * r1 * r1)).sqrt();
        Self::with_radii(geometry, r1, r2)
    }

    pub fn with_radii(geometry: TwoBallGeometry, r1: f64, r2: f64) -> Result<TransitionSpec> {
        if r1 < geometry.q_max() * (1.0 - 1e-12) {
            return Err(Error::Config(format!(
                "transition: R1 = {r1} does not contain the union (reach {})",
                geometry.q_max()
            )));
        }
        if r2 <= r1 {
            return Err(Error::Config(format!("transition: R2 = {r2} must exceed R1 = {r1}")));
        }
        let vsum = geometry.v1 + geometry.v2;
        let (ok, lhs, rhs) = necessary_condition(r1, r2, geometry.v1, geometry.v2, geometry.delta);
        if !ok {
            return Err(Error::Config(format!(
                "transition: annulus too thin, π(R2²−R1²) = {lhs} <= {rhs}"
            )));
        }
        let r3 = (r2 * r2 + vsum / PI).sqrt();
        let lambda_a_star = geometry.a_star * geometry.lambda;
        Ok(TransitionSpec {
            union_shape: geometry.shape_union(),
            geometry,
            r1,
            r2,
            r3,
            lambda_a_star,
        })
    }

    /// Target inner radius `ρ(θ)² = R1² + (v1+v2) q(θ)²/|Ω1 ∪ Ω2|`.
    pub fn rho(&self, theta: f64) -> f64 {
        let vsum = self.geometry.v1 + self.geometry.v2;
        let union_area = self.geometry.area_om1 + self.geometry.area_om2;
        let q = self.union_shape.q(theta);
        (self.r1 * self.r1 + vsum * q * q / union_area).sqrt()
    }

    /// Reference parametrization `w(s, t)` on `[1, √2] × [0, 2π]`.
    pub fn w(&self, s: f64, t: f64) -> Vec2 {
        let w2 = (2.0 - s * s) * self.r1 * self.r1 + (s * s - 1.0) * self.r2 * self.r2;
        self.geometry.a_star + Vec2::unit(t) * w2.max(0.0).sqrt()
    }

    /// Target parametrization `v(s, t)`.
    pub fn v(&self, s: f64, t: f64) -> Vec2 {
        let rho = self.rho(t);
        let v2 = (2.0 - s * s) * rho * rho + (s * s - 1.0) * self.r3 * self.r3;
        self.lambda_a_star + Vec2::unit(t) * v2.max(0.0).sqrt()
    }

    /// Jacobian determinant of `w` in `(s, t)` parameters: `s (R2² − R1²)`.
    pub fn det_w(&self, s: f64) -> f64 {
        s * (self.r2 * self.r2 - self.r1 * self.r1)
    }

    /// Jacobian determinant of `v` in `(s, t)` parameters: `s (R3² − ρ(t)²)`.
    pub fn det_v(&self, s: f64, t: f64) -> f64 {
        s * (self.r3 * self.r3 - self.rho(t).powi(2))
    }

    /// Spatial Jacobian ratio `g = det Dv / det Dw`, independent of `s`.
    pub fn jacobian_ratio(&self, t: f64) -> f64 {
        (self.r3 * self.r3 - self.rho(t).powi(2)) / (self.r2 * self.r2 - self.r1 * self.r1)
    }

    /// `(s, t)` coordinates of a point of the reference annulus.
    pub fn w_inverse(&self, x: Vec2) -> (f64, f64) {
        let rel = x - self.geometry.a_star;
        let w = rel.norm();
        let s2 = (w * w + self.r2 * self.r2 - 2.0 * self.r1 * self.r1)
            / (self.r2 * self.r2 - self.r1 * self.r1);
        (s2.max(0.0).sqrt(), rel.angle())
    }
}

/// Lemma-style necessary condition for the annulus to hold enough material:
/// `π(R2² − R1²) > ((π/3 − 1/2)/(3π)) (v1+v2)(1−δ)` for n = 2.
/// Returns `(satisfied, lhs, rhs)`.
pub fn necessary_condition(r1: f64, r2: f64, v1: f64, v2: f64, delta: f64) -> (bool, f64, f64) {
    let lhs = PI * (r2 * r2 - r1 * r1);
    let rhs = (PI / 3.0 - 0.5) / (3.0 * PI) * (v1 + v2) * (1.0 - delta);
    (lhs > rhs, lhs, rhs)
}

/// Smooth plateau bump on `[1, √2]`: zero with zero slope at both endpoints,
/// cubic ramps over the outer 5% on each side, normalized to mean one.
#[derive(Debug, Clone, Copy)]
pub struct Eta {
    ramp: f64,
    plateau: f64,
}

impl Eta {
    pub fn new() -> Eta {
        let len = SQRT_2 - 1.0;
        let ramp = 0.05 * len;
        // Mean of the un-normalized bump is (len − ramp)/len.
        Eta { ramp, plateau: len / (len - ramp) }
    }

    pub fn eval(&self, s: f64) -> f64 {
        let len = SQRT_2 - 1.0;
        let x = (s - 1.0).clamp(0.0, len);
        let smooth = |t: f64| {
            let t = t.clamp(0.0, 1.0);
            t * t * (3.0 - 2.0 * t)
        };
        let rise = smooth(x / self.ramp);
        let fall = smooth((len - x) / self.ramp);
        self.plateau * rise.min(fall)
    }

    pub fn max_value(&self) -> f64 {
        self.plateau
    }

    /// `⨍ |1 − η|` over `[1, √2]`.
    pub fn mean_abs_deviation(&self) -> f64 {
        let len = SQRT_2 - 1.0;
        crate::util::simpson(|s| (1.0 - self.eval(s)).abs(), 1.0, SQRT_2, 2048) / len
    }
}

impl Default for Eta {
    fn default() -> Self {
        Eta::new()
    }
}

/// Tabulated solution of the two prescribed-mass equations.
///
/// `h` is sampled on a radially stretched grid `s_i = s_of_sigma(i/(n_s−1))`
/// that concentrates nodes in the ramp zones of `η`, where `h` has large
/// higher derivatives; interpolation runs in the uniform σ coordinate.
#[derive(Debug, Clone)]
pub struct TransitionMap {
    pub spec: TransitionSpec,
    pub eta: Eta,
    pub n_s: usize,
    pub n_t: usize,
    /// `β(t_j)` on the uniform angular grid (length `n_t + 1`, periodic).
    pub beta: Vec<f64>,
    pub beta_prime: Vec<f64>,
    /// `h(s_i, t_j)` row-major `(n_s × (n_t + 1))`.
    pub h: Vec<f64>,
    /// Identically-zero shear short-circuit (round target).
    pub identity_shear: bool,
}

/// Default solve grid. 257 radial nodes resolve the shear-profile ramps to
/// a determinant error of a few 1e-4; the angular direction saturates much
/// earlier.
pub const DEFAULT_N_S: usize = 257;
pub const DEFAULT_N_T: usize = 512;

/// Node-density mix of the stretched radial grid: end density is
/// `(1 − MIX)` of uniform, i.e. 10x finer near both ramps.
const GRID_MIX: f64 = 0.9;

/// Smooth stretched coordinate: `s(σ) = 1 + L(σ − MIX sin(2πσ)/(2π))`.
pub fn s_of_sigma(sigma: f64) -> f64 {
    let len = SQRT_2 - 1.0;
    1.0 + len * (sigma - GRID_MIX * (TAU * sigma).sin() / TAU)
}

/// Inverse of [`s_of_sigma`] by Newton iteration (derivative ≥ 1 − MIX).
pub fn sigma_of_s(s: f64) -> f64 {
    let len = SQRT_2 - 1.0;
    let target = ((s - 1.0) / len).clamp(0.0, 1.0);
    let mut sigma = target;
    for _ in 0..30 {
        let f = sigma - GRID_MIX * (TAU * sigma).sin() / TAU - target;
        let df = 1.0 - GRID_MIX * (TAU * sigma).cos();
        let step = f / df;
        sigma = (sigma - step).clamp(0.0, 1.0);
        if step.abs() < 1e-15 {
            break;
        }
    }
    sigma
}

/// Cumulative angular mass `Ĝ(τ) = ∫₀^τ (R3² − ρ(τ')²) dτ'` with analytic
/// integrand, tabulated by composite Simpson on a corner-aligned fine grid.
struct AngularMass {
    nodes: Vec<f64>,
    cumulative: Vec<f64>,
    full_turn: f64,
    spec: TransitionSpec,
}

impl AngularMass {
    fn build(spec: &TransitionSpec, fine: usize) -> AngularMass {
        let mut nodes: Vec<f64> = (0..=fine).map(|k| TAU * k as f64 / fine as f64).collect();
        for c in spec.union_shape.corner_angles() {
            nodes.push(c);
        }
        nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
        nodes.dedup_by(|a, b| (*a - *b).abs() < 1e-13);
        let integrand = |t: f64| spec.r3 * spec.r3 - spec.rho(t).powi(2);
        let mut cumulative = Vec::with_capacity(nodes.len());
        let mut acc = Accumulator::new();
        cumulative.push(0.0);
        for k in 1..nodes.len() {
            let (a, b) = (nodes[k - 1], nodes[k]);
            let h = b - a;
            acc.add(h / 6.0 * (integrand(a) + 4.0 * integrand(0.5 * (a + b)) + integrand(b)));
            cumulative.push(acc.value());
        }
        AngularMass { full_turn: acc.value(), nodes, cumulative, spec: spec.clone() }
    }

    /// `Ĝ(τ)` for any real `τ` (periodic extension).
    fn eval(&self, tau: f64) -> f64 {
        let turns = (tau / TAU).floor();
        let frac = tau - turns * TAU;
        let idx = match self.nodes.binary_search_by(|n| n.partial_cmp(&frac).unwrap()) {
            Ok(i) => i,
            Err(i) => i.saturating_sub(1),
        };
        let a = self.nodes[idx];
        let integrand = |t: f64| self.spec.r3 * self.spec.r3 - self.spec.rho(t).powi(2);
        let h = frac - a;
        let local = h / 6.0 * (integrand(a) + 4.0 * integrand(a + 0.5 * h) + integrand(frac));
        turns * self.full_turn + self.cumulative[idx] + local
    }
}

/// Solve for `β` and `h` on an `(n_s × n_t)` grid.
pub fn solve_transition(spec: &TransitionSpec, n_s: usize, n_t: usize) -> Result<TransitionMap> {
    if n_s < 8 || n_t < 16 {
        return Err(Error::Config(format!("transition grid too small: {n_s} x {n_t}")));
    }
    let eta = Eta::new();
    let det_diff = spec.r2 * spec.r2 - spec.r1 * spec.r1;

    // Admissibility of η: the prescribed-mass scheme needs
    // ε ≤ min{min f/(2 max g), min g/max g} with f, g the parametric
    // Jacobians on the rectangle.
    let min_g = (0..4 * n_t)
        .map(|k| spec.det_v(1.0, TAU * k as f64 / (4 * n_t) as f64))
        .fold(f64::INFINITY, f64::min);
    let max_g = (0..4 * n_t)
        .map(|k| spec.det_v(SQRT_2, TAU * k as f64 / (4 * n_t) as f64))
        .fold(0.0f64, f64::max);
    if min_g <= 0.0 {
        return Err(Error::Domain(
            "transition: target Jacobian not positive, cumulative mass not monotone".into(),
        ));
    }
    let budget = (det_diff / (2.0 * max_g)).min(min_g / max_g);
    let eps_eta = eta.mean_abs_deviation().max(eta.max_value() - 1.0);
    if eps_eta > budget {
        return Err(Error::Config(format!(
            "transition: shear profile deviation {eps_eta:.3e} exceeds the admissible budget {budget:.3e}"
        )));
    }

    // Round target: both equations are solved by the identity exactly.
    let rho_spread = {
        let mut min_r = f64::INFINITY;
        let mut max_r: f64 = 0.0;
        for k in 0..4 * n_t {
            let r = spec.rho(TAU * k as f64 / (4 * n_t) as f64);
            min_r = min_r.min(r);
            max_r = max_r.max(r);
        }
        (max_r - min_r) / max_r
    };
    if rho_spread < 1e-13 {
        let t_len = n_t + 1;
        let mut h = vec![0.0; n_s * t_len];
        for i in 0..n_s {
            let s = s_of_sigma(i as f64 / (n_s - 1) as f64);
            for j in 0..t_len {
                h[i * t_len + j] = s;
            }
        }
        return Ok(TransitionMap {
            spec: spec.clone(),
            eta,
            n_s,
            n_t,
            beta: vec![0.0; t_len],
            beta_prime: vec![0.0; t_len],
            h,
            identity_shear: true,
        });
    }

    let mass = AngularMass::build(spec, (8 * n_t).max(2048));

    // σ-quadrature weights for ∫₁^{√2} σ F(η(σ)) dσ: composite Simpson on
    // 2·P + 1 uniform nodes.
    let sig_panels = 64usize;
    let hh = (SQRT_2 - 1.0) / sig_panels as f64;
    let mut sigma_nodes = Vec::with_capacity(2 * sig_panels + 1);
    for k in 0..=2 * sig_panels {
        let s = 1.0 + 0.5 * hh * k as f64;
        let w = if k == 0 || k == 2 * sig_panels {
            hh / 6.0
        } else if k % 2 == 1 {
            4.0 * hh / 6.0
        } else {
            2.0 * hh / 6.0
        };
        sigma_nodes.push((s, w));
    }

    let t_len = n_t + 1;
    let mut beta = vec![0.0; t_len];
    let mut beta_prime = vec![0.0; t_len];
    let shear_mass = |t: f64, b: f64| -> f64 {
        let mut acc = Accumulator::new();
        for &(s, w) in &sigma_nodes {
            acc.add(w * s * mass.eval(t + eta.eval(s) * b));
        }
        acc.value()
    };
    for j in 0..t_len {
        let t = TAU * j as f64 / n_t as f64;
        let target = 0.5 * t * det_diff;
        if j == 0 || j == n_t {
            beta[j] = 0.0;
        } else {
            let f = |b: f64| shear_mass(t, b) - target;
            beta[j] = bisect_increasing(f, -PI, PI, 200)?;
        }
        // Analytic β′ from implicit differentiation of the mass balance.
        let mut num = Accumulator::new();
        let mut den = Accumulator::new();
        for &(s, w) in &sigma_nodes {
            let y = spec.r3 * spec.r3 - spec.rho(t + eta.eval(s) * beta[j]).powi(2);
            num.add(w * s * y);
            den.add(w * s * y * eta.eval(s));
        }
        beta_prime[j] = (0.5 * det_diff - num.value()) / den.value();
    }

    // Per-angle mass residual check of the solved shear.
    for (j, &b) in beta.iter().enumerate() {
        let t = TAU * j as f64 / n_t as f64;
        let res = shear_mass(t, b) - 0.5 * t * det_diff;
        if res.abs() > 1e-8 * (1.0 + det_diff) {
            return Err(Error::Numerical(format!(
                "transition: shear mass residual {res:.3e} at t = {t}"
            )));
        }
    }

    // Radial rescaling h(s, t): invert the cumulative integral of
    // g1(s1, t) = g(s1, t + η(s1)β(t)) (1 + η(s1)β′(t)) against
    // ∫₁^s f = (s² − 1)(R2² − R1²)/2.
    let mut h = vec![0.0; n_s * t_len];
    let fine_s = (8 * n_s).max(512);
    for j in 0..t_len {
        let t = TAU * j as f64 / n_t as f64;
        let (b, bp) = (beta[j], beta_prime[j]);
        let g1 = |s1: f64| -> f64 {
            spec.det_v(s1, t + eta.eval(s1) * b) * (1.0 + eta.eval(s1) * bp)
        };
        // Cumulative table of ∫₁^{s} g1 on the fine grid.
        let hs = (SQRT_2 - 1.0) / fine_s as f64;
        let mut cum = Vec::with_capacity(fine_s + 1);
        cum.push(0.0);
        let mut acc = Accumulator::new();
        for k in 0..fine_s {
            let a = 1.0 + k as f64 * hs;
            let m = g1(a + 0.5 * hs);
            if m <= 0.0 {
                return Err(Error::Domain(
                    "transition: sheared Jacobian not positive; mass not monotone".into(),
                ));
            }
            acc.add(hs / 6.0 * (g1(a) + 4.0 * m + g1(a + hs)));
            cum.push(acc.value());
        }
        let eval_cum = |s: f64| -> f64 {
            let x = (s - 1.0) / hs;
            let k = (x.floor() as usize).min(fine_s - 1);
            let a = 1.0 + k as f64 * hs;
            let d = s - a;
            cum[k] + d / 6.0 * (g1(a) + 4.0 * g1(a + 0.5 * d) + g1(s))
        };
        for i in 0..n_s {
            let s = s_of_sigma(i as f64 / (n_s - 1) as f64);
            let target = 0.5 * (s * s - 1.0) * det_diff;
            let hij = if i == 0 {
                1.0
            } else if i == n_s - 1 {
                SQRT_2
            } else {
                bisect_increasing(|x| eval_cum(x) - target, 1.0, SQRT_2, 200)?
            };
            h[i * t_len + j] = hij;
        }
    }

    Ok(TransitionMap {
        spec: spec.clone(),
        eta,
        n_s,
        n_t,
        beta,
        beta_prime,
        h,
        identity_shear: false,
    })
}

impl TransitionMap {
    fn s_grid(&self, i: usize) -> f64 {
        s_of_sigma(i as f64 / (self.n_s - 1) as f64)
    }

    /// Periodic cubic interpolation of `β`.
    pub fn beta_at(&self, t: f64) -> f64 {
        self.periodic_cubic(&self.beta, t)
    }

    fn periodic_cubic(&self, table: &[f64], t: f64) -> f64 {
        let n = self.n_t;
        let x = (t / TAU * n as f64).rem_euclid(n as f64);
        let j = x.floor() as usize % n;
        let frac = x - x.floor();
        let at = |k: i64| -> f64 {
            let idx = (j as i64 + k).rem_euclid(n as i64) as usize;
            table[idx]
        };
        catmull_rom(at(-1), at(0), at(1), at(2), frac)
    }

    /// Bicubic interpolation of `h` (cubic in s, periodic cubic in t).
    pub fn h_at(&self, s: f64, t: f64) -> f64 {
        let n = self.n_t;
        let x = (t / TAU * n as f64).rem_euclid(n as f64);
        let j = x.floor() as usize % n;
        let ft = x - x.floor();
        let mut cols = [0.0; 4];
        for (c, dj) in (-1i64..=2).enumerate() {
            let jj = (j as i64 + dj).rem_euclid(n as i64) as usize;
            cols[c] = self.h_cubic_in_s(s, jj);
        }
        catmull_rom(cols[0], cols[1], cols[2], cols[3], ft)
    }

    fn h_cubic_in_s(&self, s: f64, j: usize) -> f64 {
        let t_len = self.n_t + 1;
        let m = self.n_s - 1;
        let x = (sigma_of_s(s) * m as f64).clamp(0.0, m as f64);
        let i = (x.floor() as usize).min(m - 1);
        let fs = x - i as f64;
        let at = |k: i64| -> f64 {
            let idx = (i as i64 + k).clamp(0, m as i64) as usize;
            self.h[idx * t_len + j]
        };
        catmull_rom(at(-1), at(0), at(1), at(2), fs)
    }

    /// Assembled transition map on the annulus `R1 ≤ |x − a*| ≤ R2`.
    pub fn eval(&self, x: Vec2) -> Result<Vec2> {
        let (s, t) = self.spec.w_inverse(x);
        if !(-1e-9..=SQRT_2 + 1e-9).contains(&(s - 0.0)) || s < 1.0 - 1e-9 || s > SQRT_2 + 1e-9 {
            return Err(Error::Domain(format!(
                "transition eval outside the reference annulus (s = {s})"
            )));
        }
        let s = s.clamp(1.0, SQRT_2);
        if self.identity_shear {
            return Ok(self.spec.v(s, t));
        }
        let s1 = self.h_at(s, t).clamp(1.0, SQRT_2);
        let t2 = t + self.eta.eval(s1) * self.beta_at(t);
        Ok(self.spec.v(s1, t2))
    }

    /// Central finite-difference Jacobian of the assembled map.
    pub fn grad_fd(&self, x: Vec2, step: f64) -> Result<Mat2> {
        let ex = Vec2::new(step, 0.0);
        let ey = Vec2::new(0.0, step);
        let dx = (self.eval(x + ex)? - self.eval(x - ex)?) * (0.5 / step);
        let dy = (self.eval(x + ey)? - self.eval(x - ey)?) * (0.5 / step);
        Ok(Mat2::new(dx.x, dy.x, dx.y, dy.y))
    }

    /// Empirical sup norms of the deviation from the identity in `(s, t)`
    /// parameters: `(max |h − s|, max |η β|)`.
    pub fn phi_deviation(&self) -> (f64, f64) {
        let t_len = self.n_t + 1;
        let mut dh: f64 = 0.0;
        for i in 0..self.n_s {
            let s = self.s_grid(i);
            for j in 0..t_len {
                dh = dh.max((self.h[i * t_len + j] - s).abs());
            }
        }
        let max_beta = self.beta.iter().fold(0.0f64, |m, b| m.max(b.abs()));
        (dh, self.eta.max_value() * max_beta)
    }

    /// Energy `(1/2)∫|Du|²` of the assembled map over the annulus, by
    /// finite-difference gradients on a polar grid.
    pub fn annulus_energy_fd(&self, n_r: usize, n_theta: usize) -> Result<f64> {
        let spec = &self.spec;
        let mut acc = Accumulator::new();
        let dr = (spec.r2 - spec.r1) / n_r as f64;
        let dt = TAU / n_theta as f64;
        let step = 1e-6 * spec.geometry.d;
        for i in 0..n_r {
            let r = spec.r1 + (i as f64 + 0.5) * dr;
            for j in 0..n_theta {
                let theta = (j as f64 + 0.5) * dt;
                let x = spec.geometry.a_star + Vec2::unit(theta) * r;
                let g = self.grad_fd(x, step.min(0.4 * dr))?;
                acc.add(0.5 * g.norm2_frobenius() * r * dr * dt);
            }
        }
        Ok(acc.value())
    }
}

/// Full composite deformation: the explicit two-cavity map inside
/// `B(a*, R1)`, the transition on the annulus, and the radial extension
/// `λa* + (r² + (v1+v2)/π)^{1/2} ζ` outside `B(a*, R2)`.
pub struct CompositeMap<'a> {
    pub cavity: &'a PiecewiseCavityMap,
    pub transition: &'a TransitionMap,
}

impl CompositeMap<'_> {
    pub fn eval(&self, x: Vec2) -> Result<Vec2> {
        use crate::cavmap::CavityMap as _;
        let spec = &self.transition.spec;
        let r = (x - spec.geometry.a_star).norm();
        if r <= spec.r1 {
            self.cavity.eval(x)
        } else if r <= spec.r2 {
            self.transition.eval(x)
        } else {
            let vsum = spec.geometry.v1 + spec.geometry.v2;
            let zeta = (x - spec.geometry.a_star) * (1.0 / r);
            Ok(spec.lambda_a_star + zeta * (r * r + vsum / PI).sqrt())
        }
    }
}
