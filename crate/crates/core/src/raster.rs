//! Binary pixel-set geometry: areas, symmetric differences, marching-squares
//! perimeter, Fraenkel asymmetry, and the brute-force placement oracle.
//!
//! A pixel belongs to the rasterization of a smooth set iff its center does;
//! pixel (i, j) has center `origin + ((i + 1/2) px, (j + 1/2) px)`.

use crate::geom2d::Vec2;
use crate::{Error, Result};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

#[derive(Debug, Clone)]
pub struct RasterSet {
    pub origin: Vec2,
    pub pixel: f64,
    pub width: usize,
    pub height: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl RasterSet {
    pub fn empty(origin: Vec2, pixel: f64, width: usize, height: usize) -> Result<RasterSet> {
        if !(pixel > 0.0) || width == 0 || height == 0 {
            return Err(Error::Domain("raster grid must have positive pixel and extent".into()));
        }
        let words_per_row = width.div_ceil(64);
        Ok(RasterSet {
            origin,
            pixel,
            width,
            height,
            words_per_row,
            bits: vec![0; words_per_row * height],
        })
    }

    pub fn from_fn<F: Fn(Vec2) -> bool>(
        origin: Vec2,
        pixel: f64,
        width: usize,
        height: usize,
    f: F,
    ) -> Result<RasterSet> {
        let mut set = RasterSet::empty(origin, pixel, width, height)?;
        for j in 0..height {
            for i in 0..width {
                if f(set.pixel_center(i, j)) {
                    set.set(i, j, true);
                }
            }
        }
        Ok(set)
    }

    /// Rasterized disk (row-span construction, identical to `from_fn` with
    /// the center-in test but without the full scan).
    pub fn disk(origin: Vec2, pixel: f64, width: usize, height: usize, center: Vec2, r: f64) -> Result<RasterSet> {
        let mut set = RasterSet::empty(origin, pixel, width, height)?;
        set.add_disk(center, r);
        Ok(set)
    }

    pub fn add_disk(&mut self, center: Vec2, r: f64) {
        for j in 0..self.height {
            let y = self.origin.y + (j as f64 + 0.5) * self.pixel;
            let dy = y - center.y;
            let w2 = r * r - dy * dy;
            if w2 <= 0.0 {
                continue;
            }
            let w = w2.sqrt();
            if let Some((i0, i1)) = self.span(center.x - w, center.x + w) {
                for i in i0..=i1 {
                    self.set(i, j, true);
                }
            }
        }
    }

    pub fn add_rect(&mut self, lo: Vec2, hi: Vec2) {
        for j in 0..self.height {
            let y = self.origin.y + (j as f64 + 0.5) * self.pixel;
            if y <= lo.y || y >= hi.y {
                continue;
            }
            if let Some((i0, i1)) = self.span(lo.x, hi.x) {
                for i in i0..=i1 {
                    self.set(i, j, true);
                }
            }
        }
    }

    /// Fill a simple polygon by even-odd scanline rule.
    pub fn add_polygon(&mut self, poly: &[Vec2]) {
        if poly.len() < 3 {
            return;
        }
        for j in 0..self.height {
            let y = self.origin.y + (j as f64 + 0.5) * self.pixel;
            let mut crossings = Vec::new();
            for k in 0..poly.len() {
                let p = poly[k];
                let q = poly[(k + 1) % poly.len()];
                if (p.y <= y && q.y > y) || (q.y <= y && p.y > y) {
                    crossings.push(p.x + (y - p.y) / (q.y - p.y) * (q.x - p.x));
                }
            }
            crossings.sort_by(|a, b| a.partial_cmp(b).unwrap());
            for pair in crossings.chunks_exact(2) {
                if let Some((i0, i1)) = self.span(pair[0], pair[1]) {
                    for i in i0..=i1 {
                        self.set(i, j, true);
                    }
                }
            }
        }
    }

    /// Pixel-column range whose centers fall inside `[x0, x1]`.
    fn span(&self, x0: f64, x1: f64) -> Option<(usize, usize)> {
        let lo = (x0 - self.origin.x) / self.pixel - 0.5;
        let hi = (x1 - self.origin.x) / self.pixel - 0.5;
        let i0 = lo.ceil().max(0.0) as usize;
        let i1 = hi.floor().min(self.width as f64 - 1.0);
        if i1 < 0.0 || i0 as f64 > i1 {
            return None;
        }
        Some((i0, i1 as usize))
    }

    pub fn pixel_center(&self, i: usize, j: usize) -> Vec2 {
        self.origin + Vec2::new((i as f64 + 0.5) * self.pixel, (j as f64 + 0.5) * self.pixel)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[j * self.words_per_row + i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        let w = &mut self.bits[j * self.words_per_row + i / 64];
        if value {
            *w |= 1 << (i % 64);
        } else {
            *w &= !(1 << (i % 64));
        }
    }

    pub fn count(&self) -> u64 {
        self.bits.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn area(&self) -> f64 {
        self.count() as f64 * self.pixel * self.pixel
    }

    pub fn compatible(&self, other: &RasterSet) -> bool {
        self.width == other.width
            && self.height == other.height
            && self.pixel == other.pixel
            && self.origin == other.origin
    }

    fn check_compatible(&self, other: &RasterSet) -> Result<()> {
        if !self.compatible(other) {
            return Err(Error::GridMismatch(format!(
                "{}x{} px {} vs {}x{} px {}",
                self.width, self.height, self.pixel, other.width, other.height, other.pixel
            )));
        }
        Ok(())
    }

    pub fn count_and(&self, other: &RasterSet) -> Result<u64> {
        self.check_compatible(other)?;
        Ok(self
            .bits
            .iter()
            .zip(&other.bits)
            .map(|(a, b)| (a & b).count_ones() as u64)
            .sum())
    }

    pub fn count_xor(&self, other: &RasterSet) -> Result<u64> {
        self.check_compatible(other)?;
        Ok(self
            .bits
            .iter()
            .zip(&other.bits)
            .map(|(a, b)| (a ^ b).count_ones() as u64)
            .sum())
    }

    /// Bounding box of set pixels as `(i0, j0, i1, j1)` inclusive.
    pub fn bbox(&self) -> Option<(usize, usize, usize, usize)> {
        let mut bb: Option<(usize, usize, usize, usize)> = None;
        for j in 0..self.height {
            for i in 0..self.width {
                if self.get(i, j) {
                    bb = Some(match bb {
                        None => (i, j, i, j),
                        Some((a, b, c, d)) => (a.min(i), b.min(j), c.max(i), d.max(j)),
                    });
                }
            }
        }
        bb
    }

    /// Marching-squares perimeter with midpoint interpolation on the binary
    /// grid. Pixel-edge counting would overestimate slanted boundaries by up
    /// to √2 and break the isoperimetric checks.
    pub fn perimeter(&self) -> f64 {
        let val = |i: i64, j: i64| -> u8 {
            if i < 0 || j < 0 || i >= self.width as i64 || j >= self.height as i64 {
                0
            } else {
                self.get(i as usize, j as usize) as u8
            }
        };
        let mut total = 0.0f64;
        let sqrt2_2 = std::f64::consts::SQRT_2 / 2.0;
        for j in -1..self.height as i64 {
            for i in -1..self.width as i64 {
                // Corners: bit0 = (i,j), bit1 = (i+1,j), bit2 = (i+1,j+1), bit3 = (i,j+1).
                let case = val(i, j) | val(i + 1, j) << 1 | val(i + 1, j + 1) << 2 | val(i, j + 1) << 3;
                total += match case {
                    0 | 15 => 0.0,
                    1 | 2 | 4 | 8 | 7 | 11 | 13 | 14 => sqrt2_2,
                    3 | 6 | 9 | 12 => 1.0,
                    5 | 10 => 2.0 * sqrt2_2,
                    _ => unreachable!(),
                };
            }
        }
        total * self.pixel
    }
}

/// Pixel-exact area of the symmetric difference `|A △ B|`.
pub fn symm_diff_area(a: &RasterSet, b: &RasterSet) -> Result<f64> {
    Ok(a.count_xor(b)? as f64 * a.pixel * a.pixel)
}

/// Row prefix sums for fast `|E ∩ B(x, r)|` queries.
pub struct RowPrefix {
    prefix: Vec<u32>,
    width: usize,
}

impl RowPrefix {
    pub fn build(set: &RasterSet) -> RowPrefix {
        let w = set.width;
        let mut prefix = vec![0u32; (w + 1) * set.height];
        for j in 0..set.height {
            let row = &mut prefix[j * (w + 1)..(j + 1) * (w + 1)];
            let mut acc = 0u32;
            for i in 0..w {
                row[i] = acc;
                acc += set.get(i, j) as u32;
            }
            row[w] = acc;
        }
        RowPrefix { prefix, width: w }
    }

    fn row_range(&self, j: usize, i0: usize, i1: usize) -> u64 {
        let row = &self.prefix[j * (self.width + 1)..(j + 1) * (self.width + 1)];
        (row[i1 + 1] - row[i0]) as u64
    }
}

/// Pixels of `set` whose centers lie in the disk `B(center, r)`.
pub fn disk_intersection_count(
    set: &RasterSet,
    prefix: &RowPrefix,
    center: Vec2,
    r: f64,
) -> u64 {
    let mut total = 0u64;
    let j_lo = (((center.y - r - set.origin.y) / set.pixel) - 0.5).ceil().max(0.0) as usize;
    let j_hi_f = ((center.y + r - set.origin.y) / set.pixel - 0.5).floor();
    if j_hi_f < 0.0 {
        return 0;
    }
    let j_hi = (j_hi_f as usize).min(set.height - 1);
    for j in j_lo..=j_hi {
        let y = set.origin.y + (j as f64 + 0.5) * set.pixel;
        let dy = y - center.y;
        let w2 = r * r - dy * dy;
        if w2 <= 0.0 {
            continue;
        }
        let w = w2.sqrt();
        let lo = ((center.x - w - set.origin.x) / set.pixel - 0.5).ceil().max(0.0);
        let hi = ((center.x + w - set.origin.x) / set.pixel - 0.5).floor();
        if hi < 0.0 || lo > (set.width - 1) as f64 || lo > hi {
            continue;
        }
        total += prefix.row_range(j, lo as usize, (hi as usize).min(set.width - 1));
    }
    total
}

/// Pixel count of a rasterized disk on the (unclipped) lattice of `set`.
/// The comparison ball of the asymmetry lives in the plane, so its pixel
/// count must not be cut off at the grid edge.
fn disk_pixel_count(set: &RasterSet, center: Vec2, r: f64) -> u64 {
    let mut total = 0u64;
    let j_lo = ((center.y - r - set.origin.y) / set.pixel - 0.5).ceil() as i64;
    let j_hi = ((center.y + r - set.origin.y) / set.pixel - 0.5).floor() as i64;
    for j in j_lo..=j_hi {
        let y = set.origin.y + (j as f64 + 0.5) * set.pixel;
        let dy = y - center.y;
        let w2 = r * r - dy * dy;
        if w2 <= 0.0 {
            continue;
        }
        let w = w2.sqrt();
        let lo = ((center.x - w - set.origin.x) / set.pixel - 0.5).ceil() as i64;
        let hi = ((center.x + w - set.origin.x) / set.pixel - 0.5).floor() as i64;
        if lo <= hi {
            total += (hi - lo + 1) as u64;
        }
    }
    total
}

fn symm_diff_to_ball(set: &RasterSet, prefix: &RowPrefix, center: Vec2, r: f64, e_count: u64) -> u64 {
    let b_count = disk_pixel_count(set, center, r);
    let inter = disk_intersection_count(set, prefix, center, r);
    e_count + b_count - 2 * inter
}

/// Fraenkel asymmetry `D(E) = min_x |E △ B(x, r_E)| / |E|` with
/// `π r_E² = |E|`. Coarse grid search (step 4 px) over the padded support
/// box followed by three rounds of golden-section refinement per axis.
pub fn fraenkel(set: &RasterSet) -> Result<f64> {
    fraenkel_search(set, 4, true)
}

/// Exhaustive-grid variant used as an oracle: step `step_px` pixels over the
/// padded bounding box, no refinement.
pub fn fraenkel_exhaustive(set: &RasterSet, step_px: usize) -> Result<f64> {
    fraenkel_search(set, step_px.max(1), false)
}

fn fraenkel_search(set: &RasterSet, step_px: usize, refine: bool) -> Result<f64> {
    let e_count = set.count();
    if e_count == 0 {
        return Err(Error::Domain("fraenkel: empty set".into()));
    }
    let area = set.area();
    let r = (area / PI).sqrt();
    let prefix = RowPrefix::build(set);
    let (i0, j0, i1, j1) = set.bbox().expect("nonempty");
    // Grid anchored at the support box, padded a bit so off-support optima
    // (for disconnected sets) stay reachable.
    let pad = (4.0 * set.pixel).max(0.1 * r);
    let lo_x = set.origin.x + (i0 as f64 + 0.5) * set.pixel - pad;
    let hi_x = set.origin.x + (i1 as f64 + 0.5) * set.pixel + pad;
    let lo_y = set.origin.y + (j0 as f64 + 0.5) * set.pixel - pad;
    let hi_y = set.origin.y + (j1 as f64 + 0.5) * set.pixel + pad;
    let step = step_px as f64 * set.pixel;
    let objective =
        |c: Vec2| -> u64 { symm_diff_to_ball(set, &prefix, c, r, e_count) };
    let mut best = (u64::MAX, Vec2::ZERO);
    let nx = ((hi_x - lo_x) / step).ceil() as usize + 1;
    let ny = ((hi_y - lo_y) / step).ceil() as usize + 1;
    for jj in 0..ny {
        for ii in 0..nx {
            let c = Vec2::new(lo_x + ii as f64 * step, lo_y + jj as f64 * step);
            let v = objective(c);
            if v < best.0 {
                best = (v, c);
            }
        }
    }
    let mut center = best.1;
    if refine {
        // Three rounds of golden-section per axis around the grid optimum.
        let phi = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..3 {
            for axis in 0..2 {
                let dir = if axis == 0 { Vec2::new(1.0, 0.0) } else { Vec2::new(0.0, 1.0) };
                let mut a = -2.0 * step;
                let mut b = 2.0 * step;
                let mut c1 = b - phi * (b - a);
                let mut c2 = a + phi * (b - a);
                let mut f1 = objective(center + dir * c1);
                let mut f2 = objective(center + dir * c2);
                for _ in 0..24 {
                    if f1 <= f2 {
                        b = c2;
                        c2 = c1;
                        f2 = f1;
                        c1 = b - phi * (b - a);
                        f1 = objective(center + dir * c1);
                    } else {
                        a = c1;
                        c1 = c2;
                        f1 = f2;
                        c2 = a + phi * (b - a);
                        f2 = objective(center + dir * c2);
                    }
                }
                let t = 0.5 * (a + b);
                if objective(center + dir * t) <= best.0 {
                    center = center + dir * t;
                    best.0 = objective(center);
                }
            }
        }
    }
    Ok(best.0 as f64 / e_count as f64)
}

/// Both finite-set identities for
/// `‖χ_B − χ_{B1} − χ_{B2}‖_{L¹} − (|B| − |B1| − |B2|)`:
/// `2(|B1| + |B2| − |B ∩ (B1 ∪ B2)|)` and
/// `2(|B1\B| + |B2\B| + |B ∩ B1 ∩ B2|)`. Returns the two residuals in pixel
/// counts; both are identically zero.
pub fn verify_twoways(b: &RasterSet, b1: &RasterSet, b2: &RasterSet) -> Result<(i64, i64)> {
    b.check_compatible(b1)?;
    b.check_compatible(b2)?;
    let nb = b.count() as i64;
    let nb1 = b1.count() as i64;
    let nb2 = b2.count() as i64;
    let mut l1 = 0i64;
    let mut b_and_union = 0i64;
    let mut b1_minus_b = 0i64;
    let mut b2_minus_b = 0i64;
    let mut triple = 0i64;
    for j in 0..b.height {
        for i in 0..b.width {
            let x = b.get(i, j) as i64;
            let x1 = b1.get(i, j) as i64;
            let x2 = b2.get(i, j) as i64;
            l1 += (x - x1 - x2).abs();
            b_and_union += x * (x1 | x2);
            b1_minus_b += x1 * (1 - x);
            b2_minus_b += x2 * (1 - x);
            triple += x * x1 * x2;
        }
    }
    let lhs = l1 - (nb - nb1 - nb2);
    let res_a = lhs - 2 * (nb1 + nb2 - b_and_union);
    let res_b = lhs - 2 * (b1_minus_b + b2_minus_b + triple);
    Ok((res_a, res_b))
}

/// Both sides of the modulus-of-continuity bounds for the asymmetry:
/// i) `||E|D(E) − |E'|D(E')| ≤ 2|E △ E'|` and
/// ii) the same with exponent 2 and constant 12 (= 2²·3).
/// Returns `(lhs1, rhs1, lhs2, rhs2)` in physical area units.
pub fn verify_mod_continuity(e: &RasterSet, e2: &RasterSet) -> Result<(f64, f64, f64, f64)> {
    e.check_compatible(e2)?;
    if e.count() == 0 || e2.count() == 0 {
        return Err(Error::Domain("verify_mod_continuity: empty input".into()));
    }
    let d1 = fraenkel(e)?;
    let d2 = fraenkel(e2)?;
    let a1 = e.area();
    let a2 = e2.area();
    let sd = symm_diff_area(e, e2)?;
    let lhs1 = (a1 * d1 - a2 * d2).abs();
    let rhs1 = 2.0 * sd;
    let lhs2 = (a1 * d1 * d1 - a2 * d2 * d2).abs();
    let rhs2 = 12.0 * sd;
    Ok((lhs1, rhs1, lhs2, rhs2))
}

/// Best raster-measured `|B ∩ (B1 ∪ B2)|` over random aligned-and-perturbed
/// placements of balls with radii `R, R1, R2`.
pub fn max_intersection_bruteforce(r: f64, r1: f64, r2: f64, trials: u32) -> f64 {
    max_intersection_bruteforce_seeded(r, r1, r2, trials, 512, 0x5eed).0
}

/// Detailed variant: returns `(best area, q1, q2)` where `(q1, q2)` are the
/// best centers found (B fixed at the origin). `resolution` is the pixel
/// count across the sampling window.
pub fn max_intersection_bruteforce_seeded(
    r: f64,
    r1: f64,
    r2: f64,
    trials: u32,
    resolution: usize,
    seed: u64,
) -> (f64, Vec2, Vec2) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let extent = r + r1 + r2;
    let px = 2.0 * (extent + 0.1 * r) / resolution as f64;
    // Row-span pixel counting over B's bounding box; B is centered at 0.
    let measure = |c1: Vec2, c2: Vec2| -> u64 {
        let mut count = 0u64;
        let j_lo = (-r / px - 0.5).ceil() as i64;
        let j_hi = (r / px - 0.5).floor() as i64;
        for j in j_lo..=j_hi {
            let y = (j as f64 + 0.5) * px;
            let w2 = r * r - y * y;
            if w2 <= 0.0 {
                continue;
            }
            let w = w2.sqrt();
            let span_b = ((-w / px - 0.5).ceil() as i64, (w / px - 0.5).floor() as i64);
            let disk_span = |c: Vec2, rr: f64| -> Option<(i64, i64)> {
                let dy = y - c.y;
                let ww2 = rr * rr - dy * dy;
                if ww2 <= 0.0 {
                    return None;
                }
                let ww = ww2.sqrt();
                Some((((c.x - ww) / px - 0.5).ceil() as i64, ((c.x + ww) / px - 0.5).floor() as i64))
            };
            let s1 = disk_span(c1, r1);
            let s2 = disk_span(c2, r2);
            // |I_B ∩ (I1 ∪ I2)| for integer spans.
            let clip = |s: Option<(i64, i64)>| -> Option<(i64, i64)> {
                s.and_then(|(a, b)| {
                    let a = a.max(span_b.0);
                    let b = b.min(span_b.1);
                    (a <= b).then_some((a, b))
                })
            };
            match (clip(s1), clip(s2)) {
                (None, None) => {}
                (Some((a, b)), None) | (None, Some((a, b))) => count += (b - a + 1) as u64,
                (Some((a1, b1)), Some((a2, b2))) => {
                    let union = (b1 - a1 + 1) + (b2 - a2 + 1)
                        - (b1.min(b2) - a1.max(a2) + 1).max(0);
                    count += union as u64;
                }
            }
        }
        count
    };
    let analytic = crate::lowerbound::distortion_triple(r, r1, r2).ok();
    let mut best = (0u64, Vec2::ZERO, Vec2::ZERO);
    for trial in 0..trials {
        let (c1, c2) = match trial % 4 {
            // Aligned placements, centers on the axis.
            0 | 1 => {
                let q1 = -rng.gen_range(0.0..r + r1);
                let q2 = rng.gen_range(0.0..r + r2);
                (Vec2::new(q1, 0.0), Vec2::new(q2, 0.0))
            }
            // Perturbations around the analytic optimum.
            2 => match &analytic {
                Some(t) => {
                    let j1 = rng.gen_range(-0.03..0.03) * r;
                    let j2 = rng.gen_range(-0.03..0.03) * r;
                    let y1 = rng.gen_range(-1.0..1.0) * px;
                    let y2 = rng.gen_range(-1.0..1.0) * px;
                    (Vec2::new(t.q1 + j1, y1), Vec2::new(t.q2 + j2, y2))
                }
                None => (
                    Vec2::new(rng.gen_range(-extent..extent), rng.gen_range(-extent..extent)),
                    Vec2::new(rng.gen_range(-extent..extent), rng.gen_range(-extent..extent)),
                ),
            },
            // Fully random placements.
            _ => (
                Vec2::new(rng.gen_range(-extent..extent), rng.gen_range(-extent..extent)),
                Vec2::new(rng.gen_range(-extent..extent), rng.gen_range(-extent..extent)),
            ),
        };
        let v = measure(c1, c2);
        if v > best.0 {
            best = (v, c1, c2);
        }
    }
    (best.0 as f64 * px * px, best.1, best.2)
}

/// Deterministic random blob generator for tests and oracles: a union of
/// `n_disks` disks and `n_rects` rectangles inside the central part of the
/// grid.
pub fn random_blob(
    origin: Vec2,
    pixel: f64,
    width: usize,
    height: usize,
    n_disks: usize,
    n_rects: usize,
    rng: &mut ChaCha8Rng,
) -> RasterSet {
    let mut set = RasterSet::empty(origin, pixel, width, height).expect("grid");
    let w = width as f64 * pixel;
    let h = height as f64 * pixel;
    for _ in 0..n_disks {
        let c = origin + Vec2::new(rng.gen_range(0.25 * w..0.75 * w), rng.gen_range(0.25 * h..0.75 * h));
        let r = rng.gen_range(0.05 * w..0.2 * w);
        set.add_disk(c, r);
    }
    for _ in 0..n_rects {
        let c = origin + Vec2::new(rng.gen_range(0.25 * w..0.75 * w), rng.gen_range(0.25 * h..0.75 * h));
        let half = Vec2::new(rng.gen_range(0.03 * w..0.15 * w), rng.gen_range(0.03 * h..0.15 * h));
        set.add_rect(c - half, c + half);
    }
    set
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit_grid(n: usize) -> (Vec2, f64, usize, usize) {
        (Vec2::new(-1.0, -1.0), 2.0 / n as f64, n, n)
    }

    #[test]
    fn symm_diff_basics() {
        let (o, px, w, h) = unit_grid(256);
        let a = RasterSet::disk(o, px, w, h, Vec2::ZERO, 0.5).unwrap();
        let empty = RasterSet::empty(o, px, w, h).unwrap();
        assert_eq!(symm_diff_area(&a, &a).unwrap(), 0.0);
        assert_relative_eq!(symm_diff_area(&a, &empty).unwrap(), a.area(), max_relative = 1e-12);
        let other = RasterSet::empty(Vec2::ZERO, px, w, h).unwrap();
        assert!(symm_diff_area(&a, &other).is_err());
    }

    #[test]
    fn disjoint_disks_add_areas_within_raster_slack() {
        let (o, px, w, h) = unit_grid(512);
        let mut pair = RasterSet::empty(o, px, w, h).unwrap();
        pair.add_disk(Vec2::new(-0.45, 0.0), 0.3);
        pair.add_disk(Vec2::new(0.45, 0.0), 0.3);
        let exact = 2.0 * PI * 0.09;
        let slack = 2.0 * (2.0 * 2.0 * PI * 0.3) * px;
        assert!((pair.area() - exact).abs() < slack);
    }

    #[test]
    fn fraenkel_of_disk_is_small() {
        let (o, px, w, h) = unit_grid(512);
        let disk = RasterSet::disk(o, px, w, h, Vec2::new(0.037, -0.021), 0.6).unwrap();
        let d = fraenkel(&disk).unwrap();
        assert!(d < 4.0 * px / 0.6, "D(disk) = {d}");
        assert!((0.0..=2.0).contains(&d));
    }

    #[test]
    fn fraenkel_two_far_disks_approaches_one() {
        // Disks of equal area far apart: the best ball covers one of them.
        let n = 768;
        let px = 4.5 / n as f64;
        let set_h = (1.4 / px) as usize;
        let mut set = RasterSet::empty(Vec2::new(-2.25, -0.7), px, n, set_h).unwrap();
        let r = (1.0 / PI).sqrt();
        set.add_disk(Vec2::new(-1.5, 0.0), r);
        set.add_disk(Vec2::new(1.5, 0.0), r);
        let d = fraenkel(&set).unwrap();
        assert!((d - 1.0).abs() < 0.02, "D = {d}");
        let oracle = fraenkel_exhaustive(&set, 2).unwrap();
        assert!((d - oracle).abs() < 0.02, "search {d} vs oracle {oracle}");
    }

    #[test]
    fn fraenkel_translation_invariance() {
        let (o, px, w, h) = unit_grid(384);
        let mut a = RasterSet::empty(o, px, w, h).unwrap();
        a.add_disk(Vec2::new(-0.2, -0.1), 0.35);
        a.add_rect(Vec2::new(-0.1, -0.1), Vec2::new(0.5, 0.25));
        let mut b = RasterSet::empty(o, px, w, h).unwrap();
        let shift = Vec2::new(17.0 * px, -9.0 * px);
        b.add_disk(Vec2::new(-0.2, -0.1) + shift, 0.35);
        b.add_rect(Vec2::new(-0.1, -0.1) + shift, Vec2::new(0.5, 0.25) + shift);
        let da = fraenkel(&a).unwrap();
        let db = fraenkel(&b).unwrap();
        let r_e = (a.area() / PI).sqrt();
        assert!((da - db).abs() < 4.0 * px / r_e, "D {da} vs translated {db}");
    }

    #[test]
    fn twoways_identities_are_exact() {
        use rand_chacha::rand_core::SeedableRng;
        let (o, px, w, h) = unit_grid(128);
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..25 {
            let b = random_blob(o, px, w, h, 2, 2, &mut rng);
            let b1 = random_blob(o, px, w, h, 1, 2, &mut rng);
            let b2 = random_blob(o, px, w, h, 2, 1, &mut rng);
            assert_eq!(verify_twoways(&b, &b1, &b2).unwrap(), (0, 0));
        }
        // Empty/empty and nested cases.
        let empty = RasterSet::empty(o, px, w, h).unwrap();
        let big = RasterSet::disk(o, px, w, h, Vec2::ZERO, 0.8).unwrap();
        let mid = RasterSet::disk(o, px, w, h, Vec2::ZERO, 0.5).unwrap();
        let small = RasterSet::disk(o, px, w, h, Vec2::ZERO, 0.2).unwrap();
        assert_eq!(verify_twoways(&big, &empty, &empty).unwrap(), (0, 0));
        assert_eq!(verify_twoways(&big, &small, &mid).unwrap(), (0, 0));
    }

    #[test]
    fn mod_continuity_identical_and_translates() {
        let (o, px, w, h) = unit_grid(256);
        let e = RasterSet::disk(o, px, w, h, Vec2::new(-0.4, 0.0), 0.25).unwrap();
        let (lhs1, _, lhs2, _) = verify_mod_continuity(&e, &e).unwrap();
        assert_eq!(lhs1, 0.0);
        assert_eq!(lhs2, 0.0);
        let e2 = RasterSet::disk(o, px, w, h, Vec2::new(0.4, 0.1), 0.25).unwrap();
        let (lhs1, rhs1, lhs2, rhs2) = verify_mod_continuity(&e, &e2).unwrap();
        let slack = 8.0 * e.perimeter().max(e2.perimeter()) * px;
        assert!(lhs1 <= rhs1 + slack);
        assert!(lhs2 <= rhs2 + slack);
    }

    #[test]
    fn perimeter_isoperimetric_direction() {
        let (o, px, w, h) = unit_grid(512);
        let disk = RasterSet::disk(o, px, w, h, Vec2::ZERO, 0.55).unwrap();
        let per = disk.perimeter();
        let area = disk.area();
        let r_e = (area / PI).sqrt();
        assert!(per * per >= 4.0 * PI * area * (1.0 - 10.0 * px / r_e));
        // Marching squares stays close to the true circle length from above.
        assert!(per >= 2.0 * PI * 0.55 * 0.99 && per <= 2.0 * PI * 0.55 * 1.10, "per = {per}");
    }

    #[test]
    fn bruteforce_finds_nested_configuration() {
        // R much larger than R1 + R2: both balls fit inside B.
        let v = max_intersection_bruteforce_seeded(2.5, 0.8, 0.6, 600, 256, 7).0;
        let expected = PI * (0.64 + 0.36);
        assert!((v - expected).abs() < 0.02 * expected, "v = {v}");
    }

    #[test]
    fn bruteforce_matches_analytic_triple() {
        let t = crate::lowerbound::distortion_triple(1.5, 1.0, 1.0).unwrap();
        let (v, c1, c2) = max_intersection_bruteforce_seeded(1.5, 1.0, 1.0, 4000, 512, 11);
        assert!((v - t.max_intersection).abs() < 0.01 * t.max_intersection);
        // The optimum placement is aligned within 2 pixels.
        let px = 2.0 * (1.5 + 2.0 + 0.15) / 512.0;
        assert!(c1.y.abs() <= 2.0 * px && c2.y.abs() <= 2.0 * px);
    }
}
