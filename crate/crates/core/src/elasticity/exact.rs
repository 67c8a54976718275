//! Closed-form displacement fields of the two benchmarks and the stresses and
//! loads derived from them.

use std::f64::consts::PI;

use super::{Material, PlateHoleCase};
use crate::error::{Error, Result};
use crate::geometry::{Point2, Vec2};

/// Displacement gradient `[[du_x/dx, du_x/dy], [du_y/dx, du_y/dy]]`.
pub type Gradient = [[f64; 2]; 2];

/// Plane-strain stress `[s_xx, s_yy, s_xy]` of a displacement gradient.
pub fn stress_from_gradient(g: &Gradient, m: &Material) -> [f64; 3] {
    let (lambda, mu) = (m.lambda(), m.mu());
    let div = g[0][0] + g[1][1];
    [
        lambda * div + 2.0 * mu * g[0][0],
        lambda * div + 2.0 * mu * g[1][1],
        mu * (g[0][1] + g[1][0]),
    ]
}

/// `σ · n` for stress components `[s_xx, s_yy, s_xy]`.
pub fn traction_from_stress(s: &[f64; 3], n: Vec2) -> [f64; 2] {
    [s[0] * n.x + s[2] * n.y, s[2] * n.x + s[1] * n.y]
}

/// Points on the hole edge computed in floating point may sit a rounding
/// error inside it; they are accepted.
const HOLE_EDGE_SLACK: f64 = 1e-12;

fn polar(p: Point2, c: &PlateHoleCase) -> Result<(f64, f64)> {
    let r = p.x.hypot(p.y);
    if !(r >= c.radius * (1.0 - HOLE_EDGE_SLACK)) {
        return Err(Error::Domain(format!(
            "point ({}, {}) lies inside the hole of radius {}",
            p.x, p.y, c.radius
        )));
    }
    Ok((r, p.y.atan2(p.x)))
}

/// Kirsch displacement of an infinite plate with a circular hole under
/// uniaxial far-field traction along x.
pub fn plate_hole_exact(p: Point2, m: &Material, c: &PlateHoleCase) -> Result<(f64, f64)> {
    let (r, t) = polar(p, c)?;
    let k = m.kolosov();
    let ri = c.radius;
    let scale = c.traction * ri / (8.0 * m.mu());
    let (a, b) = ((k + 1.0) * t.cos(), (3.0 * t).cos());
    let (cc, d, e) = ((k - 3.0) * t.sin(), (1.0 - k) * t.sin(), (3.0 * t).sin());
    let rho = r / ri;
    let ux = scale * (rho * a + 2.0 / rho * (a + b) - 2.0 / rho.powi(3) * b);
    let uy = scale * (rho * cc + 2.0 / rho * (d + e) - 2.0 / rho.powi(3) * e);
    Ok((ux, uy))
}

/// Cartesian displacement gradient of [`plate_hole_exact`], obtained by
/// differentiating in `r` and `θ` and applying the chain rule.
pub fn plate_hole_gradient(p: Point2, m: &Material, c: &PlateHoleCase) -> Result<Gradient> {
    let (r, t) = polar(p, c)?;
    let k = m.kolosov();
    let ri = c.radius;
    let scale = c.traction * ri / (8.0 * m.mu());
    let rho = r / ri;
    let (st, ct, s3, c3) = (t.sin(), t.cos(), (3.0 * t).sin(), (3.0 * t).cos());

    // [value, d/dθ] of each angular factor
    let a = [(k + 1.0) * ct, -(k + 1.0) * st];
    let b = [c3, -3.0 * s3];
    let cc = [(k - 3.0) * st, (k - 3.0) * ct];
    let d = [(1.0 - k) * st, (1.0 - k) * ct];
    let e = [s3, 3.0 * c3];

    // u = scale * (rho f + 2/rho g - 2/rho^3 h)
    let radial = |f: f64, g: f64, h: f64| scale / ri * (f - 2.0 / (rho * rho) * g + 6.0 / rho.powi(4) * h);
    let angular = |f: f64, g: f64, h: f64| scale * (rho * f + 2.0 / rho * g - 2.0 / rho.powi(3) * h);

    let ux_r = radial(a[0], a[0] + b[0], b[0]);
    let ux_t = angular(a[1], a[1] + b[1], b[1]);
    let uy_r = radial(cc[0], d[0] + e[0], e[0]);
    let uy_t = angular(cc[1], d[1] + e[1], e[1]);

    let dx = |ur: f64, ut: f64| ct * ur - st / r * ut;
    let dy = |ur: f64, ut: f64| st * ur + ct / r * ut;
    Ok([[dx(ux_r, ux_t), dy(ux_r, ux_t)], [dx(uy_r, uy_t), dy(uy_r, uy_t)]])
}

/// Stress `[s_xx, s_yy, s_xy]` of the exact plate-with-hole field.
pub fn plate_hole_stress(p: Point2, m: &Material, c: &PlateHoleCase) -> Result<[f64; 3]> {
    Ok(stress_from_gradient(&plate_hole_gradient(p, m, c)?, m))
}

/// Exact traction `σ · n` on a surface through `p` with unit normal `n`.
pub fn plate_hole_traction(p: Point2, n: Vec2, m: &Material, c: &PlateHoleCase) -> Result<[f64; 2]> {
    Ok(traction_from_stress(&plate_hole_stress(p, m, c)?, n))
}

const WAVE: f64 = 2.0 * PI;

/// `u_x = u_y = sin(2πx) sin(2πy)`.
pub fn manufactured_exact(p: Point2) -> (f64, f64) {
    let u = (WAVE * p.x).sin() * (WAVE * p.y).sin();
    (u, u)
}

pub fn manufactured_gradient(p: Point2) -> Gradient {
    let (sx, cx) = (WAVE * p.x).sin_cos();
    let (sy, cy) = (WAVE * p.y).sin_cos();
    let row = [WAVE * cx * sy, WAVE * sx * cy];
    [row, row]
}

pub fn manufactured_stress(p: Point2, m: &Material) -> [f64; 3] {
    stress_from_gradient(&manufactured_gradient(p), m)
}

/// Body force `b = -div σ` that makes [`manufactured_exact`] an equilibrium
/// field.
pub fn manufactured_body_force(p: Point2, m: &Material) -> [f64; 2] {
    // div σ = (λ + μ) grad(div u) + μ Δu, and both components of u coincide
    let (sx, cx) = (WAVE * p.x).sin_cos();
    let (sy, cy) = (WAVE * p.y).sin_cos();
    let (s, c) = (sx * sy, cx * cy);
    let a2 = WAVE * WAVE;
    let b = a2 * ((m.lambda() + m.mu()) * (s - c) + 2.0 * m.mu() * s);
    [b, b]
}
