//! Small numerical helpers shared across modules.

use crate::{Error, Result};

/// Neumaier compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct Accumulator {
    sum: f64,
    comp: f64,
}

impl Accumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Bisection for a monotone increasing residual. `f(lo) <= 0 <= f(hi)` is
/// required up to sign noise; the bracket endpoints themselves are accepted
/// as roots.
pub fn bisect_increasing<F: Fn(f64) -> f64>(
    f: F,
    mut lo: f64,
    mut hi: f64,
    max_iter: usize,
) -> Result<f64> {
    let flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo > 0.0 || fhi < 0.0 {
        // Tolerate tiny sign noise at the endpoints before giving up.
        let scale = flo.abs().max(fhi.abs()).max(1e-300);
        if flo > 0.0 && flo <= 1e-12 * scale {
            return Ok(lo);
        }
        if fhi < 0.0 && -fhi <= 1e-12 * scale {
            return Ok(hi);
        }
        return Err(Error::Numerical(format!(
            "bisection bracket invalid: f({lo:e}) = {flo:e}, f({hi:e}) = {fhi:e}"
        )));
    }
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(mid); // bracket exhausted at f64 resolution
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Composite Simpson rule on `[a, b]` with `panels` sub-intervals
/// (each integrated by the 3-point rule via its midpoint).
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let n = panels.max(1);
    let h = (b - a) / n as f64;
    let mut acc = Accumulator::new();
    for k in 0..n {
        let x0 = a + k as f64 * h;
        let x1 = x0 + h;
        let xm = 0.5 * (x0 + x1);
        acc.add(h / 6.0 * (f(x0) + 4.0 * f(xm) + f(x1)));
    }
    acc.value()
}

/// Low-discrepancy Halton point in `[0,1)²` (bases 2 and 3).
pub fn halton2(index: u64) -> (f64, f64) {
    (radical_inverse(index + 1, 2), radical_inverse(index + 1, 3))
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut x = 0.0;
    let mut scale = inv;
    while i > 0 {
        x += (i % base) as f64 * scale;
        i /= base;
        scale *= inv;
    }
    x
}

/// Least-squares slope of `y` against `x`.
pub fn ls_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for &(x, y) in points {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    num / den
}

/// Uniform Catmull-Rom interpolation through `p1`, `p2` with outer guides
/// `p0`, `p3`; `t` in `[0,1]` spans the `p1..p2` segment.
pub fn catmull_rom(p0: f64, p1: f64, p2: f64, p3: f64, t: f64) -> f64 {
    let t2 = t * t;
    let t3 = t2 * t;
    0.5 * ((2.0 * p1)
        + (-p0 + p2) * t
        + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * t2
        + (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * t3)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect_increasing(|x| x * x - 2.0, 0.0, 2.0, 200).unwrap();
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-14);
    }

    #[test]
    fn simpson_is_exact_on_cubics() {
        let v = simpson(|x| x * x * x, 0.0, 2.0, 3);
        assert!((v - 4.0).abs() < 1e-13);
    }

    #[test]
    fn halton_stays_in_unit_square() {
        for i in 0..1000 {
            let (x, y) = halton2(i);
            assert!((0.0..1.0).contains(&x) && (0.0..1.0).contains(&y));
        }
    }

    #[test]
    fn slope_of_line_recovered() {
        let pts: Vec<_> = (0..5).map(|k| (k as f64, 3.0 * k as f64 + 1.0)).collect();
        assert!((ls_slope(&pts) - 3.0).abs() < 1e-12);
    }
}
