//! Map-level invariants: pointwise incompressibility, continuity across the
//! piece interfaces, injectivity on sampled grids, and the per-circle
//! building-block chain.

use cavlab::cavmap::{CavityMap, PiecewiseCavityMap, RadialCavityMap};
use cavlab::energy::{circle_image_area, circle_integral};
use cavlab::geom2d::Vec2;
use cavlab::twoball::solve_geometry;
use cavlab::util::halton2;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{PI, TAU};

fn standard_map(delta: f64, ratio: f64) -> PiecewiseCavityMap {
    let v1 = 2.25 * PI / (1.0 + ratio);
    let g = solve_geometry(1.0, delta, v1, ratio * v1).unwrap();
    PiecewiseCavityMap::new(g).unwrap()
}

#[test]
fn incompressibility_at_halton_samples() {
    for &(delta, ratio) in &[(0.0, 1.0), (0.4, 0.3), (0.9, 0.05), (1.0, 0.3)] {
        let map = standard_map(delta, ratio);
        let g = &map.geometry;
        let exclusion = 1e-3 * g.d;
        let mut tested = 0usize;
        let mut k = 0u64;
        while tested < 10_000 {
            let (a, b) = halton2(k);
            k += 1;
            let x = Vec2::new(-2.5 + 5.0 * a, -2.5 + 5.0 * b);
            if x.dist(g.a1) < exclusion
                || x.dist(g.a2) < exclusion
                || map.interface_distance(x) < exclusion
            {
                continue;
            }
            let det = map.grad_unchecked(x).det();
            assert!(
                (det - 1.0).abs() < 1e-8,
                "delta {delta} ratio {ratio}: det {det} at {x:?}"
            );
            tested += 1;
        }
    }
}

#[test]
fn continuity_across_interfaces() {
    let map = standard_map(0.4, 0.3);
    let g = &map.geometry;
    let lambda = g.lambda;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    // ∂Ω1 boundary: adjoining pieces are (Ω1, outer) on the arc and
    // (Ω1, Ω2) on the chord.
    let s1 = g.shape_omega1();
    let s2 = g.shape_omega2();
    for _ in 0..500 {
        let theta = rng.gen_range(0.0..TAU);
        let x = s1.boundary_point(theta);
        let u1 = map.piece_om1.eval(x);
        let expected = x * lambda;
        let other = if (x.x - g.a_hat).abs() < 1e-12 {
            map.piece_om2.eval(x)
        } else {
            map.piece_outer.eval(x)
        };
        for u in [u1, other] {
            assert!(
                u.dist(expected) <= 1e-9 * expected.norm().max(1.0),
                "∂Ω1 at θ {theta}: {u:?} vs λx {expected:?}"
            );
        }
    }
    for _ in 0..500 {
        let theta = rng.gen_range(0.0..TAU);
        let x = s2.boundary_point(theta);
        let u2 = map.piece_om2.eval(x);
        let expected = x * lambda;
        assert!(u2.dist(expected) <= 1e-9 * expected.norm().max(1.0));
        let outer = map.piece_outer.eval(x);
        if (x.x - g.a_hat).abs() > 1e-12 {
            assert!(outer.dist(expected) <= 1e-9 * expected.norm().max(1.0));
        }
    }
}

#[test]
fn injectivity_on_a_sampled_grid() {
    let map = standard_map(0.4, 0.3);
    let mut images = Vec::new();
    let n = 60;
    for i in 0..n {
        for j in 0..n {
            let x = Vec2::new(-2.0 + 4.0 * i as f64 / (n - 1) as f64, -2.0 + 4.0 * j as f64 / (n - 1) as f64);
            if x.dist(map.geometry.a1) < 1e-6 || x.dist(map.geometry.a2) < 1e-6 {
                continue;
            }
            images.push(map.eval(x).unwrap());
        }
    }
    for i in 0..images.len() {
        for j in (i + 1)..images.len() {
            assert!(images[i].dist(images[j]) > 1e-12, "images {i} and {j} collide");
        }
    }
}

#[test]
fn gradient_matches_finite_differences_at_random_points() {
    let map = standard_map(0.55, 0.42);
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let h = 1e-6;
    let mut tested = 0;
    while tested < 200 {
        let x = Vec2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        if map.interface_distance(x) < 50.0 * h
            || x.dist(map.geometry.a1) < 1e-2
            || x.dist(map.geometry.a2) < 1e-2
        {
            continue;
        }
        let g = map.grad(x).unwrap();
        let dx = (map.eval(x + Vec2::new(h, 0.0)).unwrap() - map.eval(x - Vec2::new(h, 0.0)).unwrap())
            * (0.5 / h);
        let dy = (map.eval(x + Vec2::new(0.0, h)).unwrap() - map.eval(x - Vec2::new(0.0, h)).unwrap())
            * (0.5 / h);
        for (exact, fd) in [(g.a, dx.x), (g.c, dx.y), (g.b, dy.x), (g.d, dy.y)] {
            assert!((exact - fd).abs() < 1e-5, "at {x:?}: {exact} vs {fd}");
        }
        tested += 1;
    }
}

#[test]
fn radial_map_achieves_the_building_block_identity() {
    let map = RadialCavityMap::new(Vec2::ZERO, 1.0).unwrap();
    let v = map.cavity_volume();
    for &r in &[0.2, 0.7, 1.9] {
        let (dens, _) = circle_integral(&map, Vec2::ZERO, r, 4096).unwrap();
        let closed = v / r + PI * r + PI * r.powi(3) / (1.0 + r * r);
        assert!((dens - closed).abs() < 1e-10 * closed);
        assert!(dens >= v / r + PI * r);
    }
}

#[test]
fn building_block_chain_on_sampled_circles() {
    let map = standard_map(0.4, 0.3);
    let g = &map.geometry;
    let mid = (g.a1 + g.a2) * 0.5;
    let mut checked = 0;
    for k in 0..12 {
        let f = (k as f64 + 0.5) / 12.0;
        // Circles about a1 and a2 below the merge scale, then outer circles.
        for (center, r, v_inside) in [
            (g.a1, 0.012 * (0.45f64 / 0.012).powf(f), g.v1),
            (g.a2, 0.012 * (0.45f64 / 0.012).powf(f), g.v2),
            (mid, 1.05 * (2.8f64 / 1.05).powf(f), g.v1 + g.v2),
        ] {
            let (dens, len) = circle_integral(&map, center, r, 16384).unwrap();
            let area = circle_image_area(&map, center, r, 16384).unwrap();
            // Slack is relative to the size of the compared quantities: the
            // last link is an exact equality in the continuum, so only
            // quadrature error is tolerated.
            let slack = |a: f64, b: f64| 1e-6 * a.abs().max(b.abs()).max(1.0);
            let l1 = len * len / (4.0 * PI * r);
            assert!(dens >= l1 - slack(dens, l1), "chain link 1 at r = {r}");
            assert!(l1 >= area / r - slack(l1, area / r), "chain link 2 at r = {r}");
            let l3 = v_inside / r + PI * r;
            assert!(area / r >= l3 - slack(area / r, l3), "chain link 3 at r = {r}");
            // Incompressibility pins the enclosed area exactly.
            assert!(
                (area - (PI * r * r + v_inside)).abs() < 1e-6 * (PI * r * r + v_inside),
                "enclosed area at r = {r}"
            );
            checked += 1;
        }
    }
    assert_eq!(checked, 36);
}

#[test]
fn radial_image_circles_have_tiny_asymmetry() {
    use cavlab::raster::{fraenkel, RasterSet};
    let map = RadialCavityMap::new(Vec2::ZERO, 1.0).unwrap();
    let poly = map.cavity_boundary(1, 0.4, 512).unwrap();
    let n = 512;
    let px = 3.0 / n as f64;
    let mut set = RasterSet::empty(Vec2::new(-1.5, -1.5), px, n, n).unwrap();
    set.add_polygon(&poly);
    let d = fraenkel(&set).unwrap();
    let r_e = (set.area() / PI).sqrt();
    assert!(d < 4.0 * px / r_e, "asymmetry of a mapped circle: {d}");
}
