//! Sandwich and distortion checks that tie the quadrature, the closed-form
//! bounds, and the raster oracles together.

use cavlab::cavmap::PiecewiseCavityMap;
use cavlab::energy::{domain_energy, ub_formula, QuadratureParams};
use cavlab::lowerbound::{distortion_rhs, distortion_triple, pro1_bound};
use cavlab::raster::{
    fraenkel, max_intersection_bruteforce_seeded, random_blob, symm_diff_area,
    verify_mod_continuity, verify_twoways, RasterSet,
};
use cavlab::twoball::solve_geometry;
use cavlab::Vec2;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// Empirical regression constants for the closed-form upper bound, fitted
/// once over the acceptance sweep and frozen. Non-normative.
pub const C1_FIT: f64 = 0.9;
pub const C2_FIT: f64 = 0.6;

#[test]
fn lower_bound_sandwich_over_a_small_sweep() {
    let params = QuadratureParams { n_theta: 256, radial_per_decade: 24, error_estimate: false };
    let eps = 0.01;
    let r_outer = 3.0;
    for &delta in &[0.0, 0.5, 1.0] {
        for &ratio in &[0.3, 1.0] {
            let v1 = 2.25 * PI / (1.0 + ratio);
            let g = solve_geometry(1.0, delta, v1, ratio * v1).unwrap();
            let map = PiecewiseCavityMap::new(g).unwrap();
            let rep = domain_energy(&map, eps, eps, r_outer, &params).unwrap();
            let lower =
                pro1_bound(&[map.geometry.v1, map.geometry.v2], &[eps, eps], r_outer, &[true, true]);
            assert!(
                lower <= rep.excess(),
                "delta {delta} ratio {ratio}: pro1 {lower} vs excess {}",
                rep.excess()
            );
            assert!(lower <= rep.total);
            let upper = ub_formula(
                map.geometry.v1,
                map.geometry.v2,
                1.0,
                eps,
                eps,
                r_outer,
                delta,
                C1_FIT,
                C2_FIT,
            );
            assert!(
                rep.total <= upper,
                "delta {delta} ratio {ratio}: total {} vs ub {upper}",
                rep.total
            );
        }
    }
}

#[test]
fn distortion_triple_beats_raster_bruteforce() {
    for &(r, r1, r2) in &[(1.5, 1.0, 1.0), (1.4, 1.2, 0.5)] {
        let t = distortion_triple(r, r1, r2).unwrap();
        let (bf, c1, c2) = max_intersection_bruteforce_seeded(r, r1, r2, 3000, 384, 3);
        assert!(
            t.max_intersection >= bf - 0.01 * t.max_intersection,
            "analytic {} vs brute force {bf}",
            t.max_intersection
        );
        assert!((bf - t.max_intersection).abs() < 0.01 * t.max_intersection);
        let px = 2.0 * (r + r1 + r2 + 0.1 * r) / 384.0;
        assert!(c1.y.abs() <= 2.0 * px && c2.y.abs() <= 2.0 * px, "optimum not aligned");
        assert!(t.lens_lower_bound <= t.triple_intersection() + 1e-12);
    }
}

/// Calibrate the distortion constant on the tangent-pair configuration:
/// E1, E2 tangent unit disks, E their union. There D(E1) = D(E2) = 0 and the
/// estimate reduces to D(E)²/2 ≥ Cn/4.
fn fitted_cn(resolution: usize) -> f64 {
    let px = 4.6 / resolution as f64;
    let height = (2.3 / px) as usize;
    let mut e = RasterSet::empty(Vec2::new(-2.3, -1.15), px, resolution, height).unwrap();
    e.add_disk(Vec2::new(-1.0, 0.0), 1.0);
    e.add_disk(Vec2::new(1.0, 0.0), 1.0);
    let d = fraenkel(&e).unwrap();
    2.0 * d * d
}

#[test]
fn distortion_estimate_holds_on_random_rasters() {
    let c_n = fitted_cn(512);
    assert!(c_n > 0.3 && c_n < 2.0, "calibrated constant {c_n}");
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let n = 192;
    let (o, px) = (Vec2::new(-1.0, -1.0), 2.0 / n as f64);
    let mut checked = 0;
    while checked < 500 {
        // Disjoint blobs in the left/right half, E a superset.
        let r1 = rng.gen_range(0.12..0.3);
        let r2 = rng.gen_range(0.08..r1);
        let c1 = Vec2::new(rng.gen_range(-0.6..-0.35), rng.gen_range(-0.2..0.2));
        let c2 = Vec2::new(rng.gen_range(0.35..0.6), rng.gen_range(-0.2..0.2));
        if c1.dist(c2) <= r1 + r2 + 4.0 * px {
            continue;
        }
        let e1 = RasterSet::disk(o, px, n, n, c1, r1).unwrap();
        let e2 = RasterSet::disk(o, px, n, n, c2, r2).unwrap();
        let mut e = RasterSet::empty(o, px, n, n).unwrap();
        e.add_disk(c1, r1);
        e.add_disk(c2, r2);
        if rng.gen_bool(0.6) {
            let extra = rng.gen_range(0.05..0.35);
            e.add_disk(
                Vec2::new(rng.gen_range(-0.4..0.4), rng.gen_range(-0.4..0.4)),
                extra,
            );
        }
        let (v, v1, v2) = (e.area(), e1.area(), e2.area());
        if v2 <= 0.0 {
            continue;
        }
        let d = fraenkel(&e).unwrap();
        let d1 = fraenkel(&e1).unwrap();
        let d2 = fraenkel(&e2).unwrap();
        let lhs = (v * d * d + v1 * d1 * d1 + v2 * d2 * d2) / (v + v1 + v2);
        let rhs = distortion_rhs(v, v1.max(v2), v1.min(v2), c_n, 2);
        assert!(
            lhs >= rhs - 1e-9,
            "triple {checked}: lhs {lhs} rhs {rhs} (v {v}, v1 {v1}, v2 {v2})"
        );
        checked += 1;
    }
}

#[test]
fn set_identities_and_modulus_of_continuity() {
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    let n = 160;
    let (o, px) = (Vec2::new(-1.0, -1.0), 2.0 / n as f64);
    for _ in 0..50 {
        let b = random_blob(o, px, n, n, 2, 1, &mut rng);
        let b1 = random_blob(o, px, n, n, 1, 1, &mut rng);
        let b2 = random_blob(o, px, n, n, 1, 2, &mut rng);
        assert_eq!(verify_twoways(&b, &b1, &b2).unwrap(), (0, 0));
    }
    for k in 0..50 {
        let e = random_blob(o, px, n, n, 2, 0, &mut rng);
        let e2 = if k % 2 == 0 {
            random_blob(o, px, n, n, 2, 0, &mut rng)
        } else {
            // Perturbation of e.
            let mut p = e.clone();
            p.add_disk(Vec2::new(rng.gen_range(-0.4..0.4), rng.gen_range(-0.4..0.4)), 0.1);
            p
        };
        if e.count() == 0 || e2.count() == 0 {
            continue;
        }
        let (lhs1, rhs1, lhs2, rhs2) = verify_mod_continuity(&e, &e2).unwrap();
        let slack = 8.0 * e.perimeter().max(e2.perimeter()) * px;
        assert!(lhs1 <= rhs1 + slack, "case {k}: {lhs1} vs {rhs1} + {slack}");
        assert!(lhs2 <= rhs2 + slack, "case {k}: {lhs2} vs {rhs2} + {slack}");
        let sd = symm_diff_area(&e, &e2).unwrap();
        assert_eq!(rhs1, 2.0 * sd);
    }
}
