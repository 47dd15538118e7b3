//! Lower-bound machinery: the grow-and-merge ball process, the closed-form
//! lower-bound evaluators, and the exact solution of the three-ball
//! distortion problem.

use crate::geom2d::{segment_area, Circle};
use crate::twoball::unit_ball_volume;
use crate::util::bisect_increasing;
use crate::{Error, Result};
use std::f64::consts::PI;

/// Disjoint closed balls with total radius `t`, evolving under homothetic
/// growth about each ball's own center with pairwise merging on contact.
#[derive(Debug, Clone)]
pub struct BallCollection {
    pub balls: Vec<Circle>,
    pub t: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MergeEvent {
    /// Total radius at which the contact happened.
    pub t: f64,
    /// Indices into the collection just before this merge.
    pub first: usize,
    pub second: usize,
    pub merged: Circle,
}

impl BallCollection {
    pub fn new(balls: Vec<Circle>) -> Result<Self> {
        for (i, a) in balls.iter().enumerate() {
            for b in balls.iter().skip(i + 1) {
                if a.center.dist(b.center) < a.radius + b.radius - 1e-12 {
                    return Err(Error::Domain("initial balls overlap".into()));
                }
            }
        }
        let t = balls.iter().map(|b| b.radius).sum();
        Ok(BallCollection { balls, t })
    }

    fn scale_radii(&mut self, factor: f64) {
        for b in &mut self.balls {
            b.radius *= factor;
        }
        self.t *= factor;
    }

    /// Earliest scale factor (> 1) at which some pair comes into contact.
    fn next_contact(&self) -> Option<(f64, usize, usize)> {
        let mut best: Option<(f64, usize, usize)> = None;
        for i in 0..self.balls.len() {
            for j in (i + 1)..self.balls.len() {
                let gap = self.balls[i].center.dist(self.balls[j].center);
                let sum = self.balls[i].radius + self.balls[j].radius;
                if sum <= 0.0 {
                    continue;
                }
                let s = gap / sum;
                let better = match best {
                    None => true,
                    Some((bs, bi, bj)) => s < bs - 1e-15 || (s < bs + 1e-15 && (i, j) < (bi, bj)),
                };
                if better {
                    best = Some((s, i, j));
                }
            }
        }
        best
    }

    /// Merge every touching pair, smallest indices first. The replacement
    /// ball of radius `r_i + r_j` centred at `(r_i c_i + r_j c_j)/(r_i + r_j)`
    /// contains the union of its parents.
    fn merge_contacts(&mut self, events: &mut Vec<MergeEvent>) {
        loop {
            let mut touching: Option<(usize, usize)> = None;
            'outer: for i in 0..self.balls.len() {
                for j in (i + 1)..self.balls.len() {
                    let gap = self.balls[i].center.dist(self.balls[j].center);
                    let sum = self.balls[i].radius + self.balls[j].radius;
                    if gap <= sum * (1.0 + 1e-12) {
                        touching = Some((i, j));
                        break 'outer;
                    }
                }
            }
            let Some((i, j)) = touching else { break };
            let (bi, bj) = (self.balls[i], self.balls[j]);
            let r = bi.radius + bj.radius;
            let center = (bi.center * bi.radius + bj.center * bj.radius) * (1.0 / r);
            let merged = Circle { center, radius: r };
            events.push(MergeEvent { t: self.t, first: i, second: j, merged });
            self.balls.remove(j);
            self.balls.remove(i);
            self.balls.push(merged);
        }
    }
}

/// Grow the collection until its total radius reaches `t_target`, merging
/// balls as they touch. Returns the final collection and the merge events
/// in order.
pub fn grow(collection: &BallCollection, t_target: f64) -> Result<(BallCollection, Vec<MergeEvent>)> {
    if t_target < collection.t * (1.0 - 1e-12) {
        return Err(Error::Domain(format!(
            "grow: target total radius {t_target} below current {}",
            collection.t
        )));
    }
    let mut state = collection.clone();
    let mut events = Vec::new();
    // Initial collection may already contain tangent pairs.
    state.merge_contacts(&mut events);
    while state.t < t_target && state.balls.len() > 1 {
        match state.next_contact() {
            Some((s, _, _)) if state.t * s <= t_target => {
                state.scale_radii(s);
                state.merge_contacts(&mut events);
            }
            _ => break,
        }
    }
    if state.t < t_target {
        state.scale_radii(t_target / state.t);
    }
    Ok((state, events))
}

/// First lower bound: `(Σ_included v_i) log(R/(2 Σ eps_i))`. The inclusion
/// filter `B(a_i, R) ⊂ Ω` is supplied by the caller.
pub fn pro1_bound(v: &[f64], eps: &[f64], r_outer: f64, included: &[bool]) -> f64 {
    assert_eq!(v.len(), eps.len());
    assert_eq!(v.len(), included.len());
    let vsum: f64 = v.iter().zip(included).filter(|(_, &inc)| inc).map(|(v, _)| v).sum();
    let eps_sum: f64 = eps.iter().sum();
    vsum * (r_outer / (2.0 * eps_sum)).ln()
}

/// Two-cavity lower-bound terms `(leading, interaction)` with n = 2:
/// leading `v1 log(R/2eps1) + v2 log(R/2eps2)`, interaction
/// `C (v1+v2) ((min{v1,v2}/(v1+v2))² − π d²/(v1+v2))₊ ·`
/// `log min{((v1+v2)/(4πd²))^{1/4}, R/d, d/max{eps1, eps2}}`.
#[allow(clippy::too_many_arguments)]
pub fn th_lb_terms(
    v1: f64,
    v2: f64,
    d: f64,
    eps1: f64,
    eps2: f64,
    r_outer: f64,
    c: f64,
) -> (f64, f64) {
    let leading = v1 * (r_outer / (2.0 * eps1)).ln() + v2 * (r_outer / (2.0 * eps2)).ln();
    let vsum = v1 + v2;
    if vsum <= 0.0 {
        return (leading, 0.0);
    }
    let prefactor = ((v1.min(v2) / vsum).powi(2) - PI * d * d / vsum).max(0.0);
    let log_arg = (vsum / (4.0 * PI * d * d))
        .powf(0.25)
        .min(r_outer / d)
        .min(d / eps1.max(eps2));
    (leading, c * vsum * prefactor * log_arg.ln())
}

/// Solved optimal placement of three balls maximizing `|B ∩ (B1 ∪ B2)|`:
/// aligned centers with all three pairwise chords of equal half-height `h`.
#[derive(Debug, Clone, Copy)]
pub struct DistortionTriple {
    pub r: f64,
    pub r1: f64,
    pub r2: f64,
    /// Common chord half-height.
    pub h: f64,
    /// Center offsets of `B1`, `B2` along the axis, `q1 < 0 < q2`,
    /// with `B` at the origin.
    pub q1: f64,
    pub q2: f64,
    /// `max |B ∩ (B1 ∪ B2)|` over all placements.
    pub max_intersection: f64,
    /// Closed-form lower bound for the triple intersection:
    /// `(R1+R2−R)^{3/2} sqrt(R1 R2/(R1+R2))` for n = 2.
    pub lens_lower_bound: f64,
}

impl DistortionTriple {
    /// Analytic `|B ∩ B1 ∩ B2| = |B1 ∩ B2|` for the optimal placement.
    pub fn triple_intersection(&self) -> f64 {
        let s1 = (self.r1 * self.r1 - self.h * self.h).max(0.0).sqrt();
        let s2 = (self.r2 * self.r2 - self.h * self.h).max(0.0).sqrt();
        segment_area(self.r1, s1).unwrap() + segment_area(self.r2, s2).unwrap()
    }

    /// Residual of the alignment identity
    /// `sqrt(R²−h²) − sqrt(R1²−h²) − sqrt(R2²−h²)`.
    pub fn distance_residual(&self) -> f64 {
        let h2 = self.h * self.h;
        (self.r * self.r - h2).sqrt()
            - (self.r1 * self.r1 - h2).max(0.0).sqrt()
            - (self.r2 * self.r2 - h2).max(0.0).sqrt()
    }
}

/// Solve the three-ball distortion problem for radii `R, R1, R2` with
/// `R1, R2 < R ≤ R1 + R2` (tangency accepted at the upper end).
pub fn distortion_triple(r: f64, r1: f64, r2: f64) -> Result<DistortionTriple> {
    if !(r1 > 0.0 && r2 > 0.0 && r > r1.max(r2)) {
        return Err(Error::Domain(format!(
            "distortion_triple: need 0 < R1, R2 < R, got R = {r}, R1 = {r1}, R2 = {r2}"
        )));
    }
    if r > r1 + r2 + 1e-12 * r {
        return Err(Error::Domain(format!(
            "distortion_triple: R = {r} exceeds R1 + R2 = {}",
            r1 + r2
        )));
    }
    let h = if r >= r1 + r2 {
        0.0
    } else {
        // Monotone increasing in h; (R²−R1²)/(√(R²−h²)+√(R1²−h²)) = √(R²−h²)−√(R1²−h²).
        let residual = |h: f64| {
            let h2 = h * h;
            (r * r - r1 * r1) / ((r * r - h2).sqrt() + (r1 * r1 - h2).max(0.0).sqrt())
                - (r2 * r2 - h2).max(0.0).sqrt()
        };
        bisect_increasing(residual, 0.0, r1.min(r2), 200)?
    };
    let h2 = h * h;
    let s = (r * r - h2).sqrt();
    let s1 = (r1 * r1 - h2).max(0.0).sqrt();
    let s2 = (r2 * r2 - h2).max(0.0).sqrt();
    let q1 = s1 - s;
    let q2 = s - s2;
    // |B ∩ (B1 ∪ B2)| from circular segments, using the equal-chord geometry.
    let max_intersection = 2.0 * segment_area(r, s)? + PI * (r1 * r1 + r2 * r2)
        - 2.0 * segment_area(r1, s1)?
        - 2.0 * segment_area(r2, s2)?;
    let lens_lower_bound = (r1 + r2 - r).max(0.0).powf(1.5) * (r1 * r2 / (r1 + r2)).sqrt();
    Ok(DistortionTriple { r, r1, r2, h, q1, q2, max_intersection, lens_lower_bound })
}

/// Right-hand side of the distortion estimate:
/// `Cn (v2/(v1+v2))^{n/(n−1)} ·`
/// `(((v1^{1/n}+v2^{1/n})ⁿ − vE)/((v1^{1/n}+v2^{1/n})ⁿ − (v1+v2)))^{n(n+1)/(2(n−1))}`.
/// Signed: negative when the enclosing volume is large.
pub fn distortion_rhs(vol_e: f64, vol1: f64, vol2: f64, c_n: f64, n: u32) -> f64 {
    if vol2 <= 0.0 {
        return 0.0;
    }
    let nf = n as f64;
    let p = 1.0 / nf;
    let sum_pow = (vol1.powf(p) + vol2.powf(p)).powf(nf);
    let numerator = sum_pow - vol_e;
    let denominator = sum_pow - (vol1 + vol2);
    let base = numerator / denominator;
    let exponent = nf * (nf + 1.0) / (2.0 * (nf - 1.0));
    let shape = base.signum() * base.abs().powf(exponent);
    c_n * (vol2 / (vol1 + vol2)).powf(nf / (nf - 1.0)) * shape
}

/// Unit-ball volume re-export convenience for bound formulas.
pub fn omega_n(n: u32) -> f64 {
    unit_ball_volume(n)
}
