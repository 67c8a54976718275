use std::f64::consts::PI;

use cutcell::elasticity::{
    manufactured_body_force, manufactured_exact, plate_hole_exact, plate_hole_gradient, plate_hole_stress,
    plate_hole_traction, Material, PlateHoleCase,
};
use cutcell::geometry::Point2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const W: f64 = 2.0 * PI;

/// Stress of `u_x = u_y = sin(2πx) sin(2πy)` written out by hand.
fn sine_stress(x: f64, y: f64, m: &Material) -> [f64; 3] {
    let ux_x = W * (W * x).cos() * (W * y).sin();
    let ux_y = W * (W * x).sin() * (W * y).cos();
    let (uy_x, uy_y) = (ux_x, ux_y);
    let (l, mu) = (m.lambda(), m.mu());
    let div = ux_x + uy_y;
    [l * div + 2.0 * mu * ux_x, l * div + 2.0 * mu * uy_y, mu * (ux_y + uy_x)]
}

#[test]
fn body_force_matches_finite_difference_divergence() {
    let m = Material::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let d = 1e-5;
    for _ in 0..100 {
        let (x, y) = (rng.gen::<f64>(), rng.gen::<f64>());
        let dsx = |k: usize| (sine_stress(x + d, y, &m)[k] - sine_stress(x - d, y, &m)[k]) / (2.0 * d);
        let dsy = |k: usize| (sine_stress(x, y + d, &m)[k] - sine_stress(x, y - d, &m)[k]) / (2.0 * d);
        let oracle = [-(dsx(0) + dsy(2)), -(dsx(2) + dsy(1))];
        let b = manufactured_body_force(Point2::new(x, y), &m);
        for k in 0..2 {
            assert!((b[k] - oracle[k]).abs() < 1e-5, "({x}, {y}) component {k}: {} vs {}", b[k], oracle[k]);
        }
    }
}

#[test]
fn manufactured_field_vanishes_on_the_square_boundary() {
    for k in 0..=16 {
        let t = k as f64 / 16.0;
        for p in [Point2::new(t, 0.0), Point2::new(t, 1.0), Point2::new(0.0, t), Point2::new(1.0, t)] {
            let (a, b) = manufactured_exact(p);
            assert!(a.abs() < 1e-15 && b.abs() < 1e-15);
        }
    }
}

#[test]
fn hole_edge_displacement_by_hand() {
    // at (R, 0): u_x = 3 (κ + 1) T R / (8 μ) = 3 · 2.8 · 2.5 / (8 / 2.6)
    let (ux, uy) = plate_hole_exact(Point2::new(0.25, 0.0), &Material::default(), &PlateHoleCase::default()).unwrap();
    assert!((ux - 6.825).abs() < 1e-12, "{ux}");
    assert!(uy.abs() < 1e-15);
}

/// Classical polar stresses around a circular hole, rotated to Cartesian.
fn kirsch_stress(p: Point2, c: &PlateHoleCase) -> [f64; 3] {
    let (r, t) = (p.x.hypot(p.y), p.y.atan2(p.x));
    let (a2, a4) = ((c.radius / r).powi(2), (c.radius / r).powi(4));
    let half = 0.5 * c.traction;
    let (c2, s2) = ((2.0 * t).cos(), (2.0 * t).sin());
    let srr = half * (1.0 - a2) + half * (1.0 - 4.0 * a2 + 3.0 * a4) * c2;
    let stt = half * (1.0 + a2) - half * (1.0 + 3.0 * a4) * c2;
    let srt = -half * (1.0 + 2.0 * a2 - 3.0 * a4) * s2;
    let (s, co) = (t.sin(), t.cos());
    [
        srr * co * co + stt * s * s - 2.0 * srt * s * co,
        srr * s * s + stt * co * co + 2.0 * srt * s * co,
        (srr - stt) * s * co + srt * (co * co - s * s),
    ]
}

#[test]
fn plate_hole_stress_matches_polar_closed_form() {
    let m = Material::default();
    let c = PlateHoleCase::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let r = rng.gen_range(c.radius..1.4);
        let t = rng.gen_range(0.0..0.5 * PI);
        let p = Point2::new(r * t.cos(), r * t.sin());
        let s = plate_hole_stress(p, &m, &c).unwrap();
        let k = kirsch_stress(p, &c);
        for i in 0..3 {
            assert!((s[i] - k[i]).abs() < 1e-10 * c.traction, "{p:?} {i}: {} vs {}", s[i], k[i]);
        }
    }
}

#[test]
fn plate_hole_gradient_matches_finite_differences() {
    let m = Material::default();
    let c = PlateHoleCase::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let d = 1e-6;
    for _ in 0..100 {
        let p = Point2::new(rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
        if p.x.hypot(p.y) < c.radius + 2.0 * d {
            continue;
        }
        let u = |q: Point2| {
            let (a, b) = plate_hole_exact(q, &m, &c).unwrap();
            [a, b]
        };
        let g = plate_hole_gradient(p, &m, &c).unwrap();
        let (xp, xm) = (u(Point2::new(p.x + d, p.y)), u(Point2::new(p.x - d, p.y)));
        let (yp, ym) = (u(Point2::new(p.x, p.y + d)), u(Point2::new(p.x, p.y - d)));
        for k in 0..2 {
            let fd = [(xp[k] - xm[k]) / (2.0 * d), (yp[k] - ym[k]) / (2.0 * d)];
            for l in 0..2 {
                assert!((g[k][l] - fd[l]).abs() < 1e-6 * (1.0 + fd[l].abs()), "{p:?}: {g:?} vs {fd:?}");
            }
        }
    }
}

#[test]
fn hole_boundary_is_traction_free() {
    let m = Material::default();
    let c = PlateHoleCase::default();
    for k in 0..=90 {
        let t = 0.5 * PI * k as f64 / 90.0;
        let outward_of_material = Point2::new(-t.cos(), -t.sin());
        let p = Point2::new(c.radius * t.cos(), c.radius * t.sin());
        let tr = plate_hole_traction(p, outward_of_material, &m, &c).unwrap();
        assert!(tr[0].abs() < 1e-10 && tr[1].abs() < 1e-10, "θ = {t}: {tr:?}");
    }
}

#[test]
fn far_field_is_uniaxial() {
    let m = Material::default();
    let c = PlateHoleCase::default();
    let s = plate_hole_stress(Point2::new(0.0, 50.0), &m, &c).unwrap();
    assert!((s[0] - c.traction).abs() < 1e-3 * c.traction);
    assert!(s[1].abs() < 1e-3 * c.traction && s[2].abs() < 1e-3 * c.traction);
}
