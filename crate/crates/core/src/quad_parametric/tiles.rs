use crate::error::{Error, Result};
use crate::gauss::GaussRule;
use crate::geometry::{BezierSpan, Cell, Point2, Vec2};
use crate::quad_implicit::{QuadNode, QuadratureRule};

/// One side of a tile, parametrized over `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub enum Side {
    Line(Point2, Point2),
    /// The piece `[t0, t1]` of a boundary curve.
    Curve { span: BezierSpan, t0: f64, t1: f64 },
}

impl Side {
    pub fn point(&self, s: f64) -> Point2 {
        match self {
            Side::Line(a, b) => a.lerp(*b, s),
            Side::Curve { span, t0, t1 } => span.point(t0 + (t1 - t0) * s),
        }
    }

    /// Derivative with respect to the unit parameter `s`.
    pub fn derivative(&self, s: f64) -> Vec2 {
        match self {
            Side::Line(a, b) => *b - *a,
            Side::Curve { span, t0, t1 } => span.derivative(t0 + (t1 - t0) * s) * (t1 - t0),
        }
    }

    pub fn start(&self) -> Point2 {
        match self {
            Side::Line(a, _) => *a,
            Side::Curve { span, t0, .. } => span.point(*t0),
        }
    }

    pub fn end(&self) -> Point2 {
        match self {
            Side::Line(_, b) => *b,
            Side::Curve { span, t1, .. } => span.point(*t1),
        }
    }

    pub fn is_curved(&self) -> bool {
        matches!(self, Side::Curve { .. })
    }

    /// `1/2 ∫ cross(C - k, C')`: signed area of the fan triangle from `k`.
    pub(crate) fn fan_area(&self, k: Point2) -> f64 {
        match self {
            Side::Line(a, b) => 0.5 * (*a - k).cross(*b - *a),
            Side::Curve { .. } => {
                let g = GaussRule::new(12);
                g.nodes
                    .iter()
                    .zip(&g.weights)
                    .map(|(&s, &w)| 0.5 * w * (self.point(s) - k).cross(self.derivative(s)))
                    .sum()
            }
        }
    }
}

/// A four-sided patch mapped from the unit square by transfinite (Coons)
/// interpolation of its sides.
///
/// `bottom` runs from corner 00 to 10, `right` from 10 to 11, `top` from 01
/// to 11 and `left` from 00 to 01. A side may be collapsed to a point.
#[derive(Debug, Clone, PartialEq)]
pub struct Tile {
    pub bottom: Side,
    pub right: Side,
    pub top: Side,
    pub left: Side,
}

impl Tile {
    pub fn new(bottom: Side, right: Side, top: Side, left: Side, tol: f64) -> Result<Self> {
        let checks = [
            ("bottom start / left start", bottom.start(), left.start()),
            ("bottom end / right start", bottom.end(), right.start()),
            ("right end / top end", right.end(), top.end()),
            ("left end / top start", left.end(), top.start()),
        ];
        for (name, a, b) in checks {
            if a.dist(b) > tol {
                return Err(Error::Geometry(format!(
                    "tile sides do not meet at {name}: ({}, {}) vs ({}, {})",
                    a.x, a.y, b.x, b.y
                )));
            }
        }
        Ok(Tile {
            bottom,
            right,
            top,
            left,
        })
    }

    /// The whole cell as one tile.
    pub fn rectangle(cell: &Cell) -> Self {
        let [p00, p10, p11, p01] = cell.corners();
        Tile {
            bottom: Side::Line(p00, p10),
            right: Side::Line(p10, p11),
            top: Side::Line(p01, p11),
            left: Side::Line(p00, p01),
        }
    }

    /// Triangle-like tile with apex `k` and the side `base` opposite to it.
    pub fn fan(k: Point2, base: Side) -> Self {
        Tile {
            bottom: Side::Line(k, base.start()),
            top: Side::Line(k, base.end()),
            left: Side::Line(k, k),
            right: base,
        }
    }

    /// Corners 00, 10, 11, 01.
    pub fn corners(&self) -> [Point2; 4] {
        [self.bottom.start(), self.bottom.end(), self.top.end(), self.top.start()]
    }

    pub fn is_curved(&self) -> bool {
        [&self.bottom, &self.right, &self.top, &self.left].iter().any(|s| s.is_curved())
    }

    /// Coons map and its Jacobian columns at `(u, v)`.
    pub fn map(&self, u: f64, v: f64) -> (Point2, Vec2, Vec2) {
        let [p00, p10, p11, p01] = self.corners();
        let (b, t) = (self.bottom.point(u), self.top.point(u));
        let (l, r) = (self.left.point(v), self.right.point(v));
        let (db, dt) = (self.bottom.derivative(u), self.top.derivative(u));
        let (dl, dr) = (self.left.derivative(v), self.right.derivative(v));
        let bilinear = p00 * ((1.0 - u) * (1.0 - v)) + p10 * (u * (1.0 - v)) + p01 * ((1.0 - u) * v) + p11 * (u * v);
        let x = l * (1.0 - u) + r * u + b * (1.0 - v) + t * v - bilinear;
        let bu = (p10 - p00) * (1.0 - v) + (p11 - p01) * v;
        let bv = (p01 - p00) * (1.0 - u) + (p11 - p10) * u;
        let xu = r - l + db * (1.0 - v) + dt * v - bu;
        let xv = dl * (1.0 - u) + dr * u + t - b - bv;
        (x, xu, xv)
    }
}

/// `q x q` Gauss rule mapped through the tile's Coons map.
pub fn tile_quadrature(tile: &Tile, q: usize) -> Result<QuadratureRule> {
    if q < 1 {
        return Err(Error::Domain(format!("quadrature order must be at least 1, got {q}")));
    }
    let g = GaussRule::new(q);
    let mut rule = QuadratureRule::empty();
    rule.nodes.reserve(q * q);
    for (&u, &wu) in g.nodes.iter().zip(&g.weights) {
        for (&v, &wv) in g.nodes.iter().zip(&g.weights) {
            let (p, xu, xv) = tile.map(u, v);
            let det = xu.cross(xv);
            if !(det > 0.0) {
                return Err(Error::DegenerateTile { det, u, v });
            }
            rule.nodes.push(QuadNode {
                point: p,
                weight: wu * wv * det,
            });
        }
    }
    Ok(rule)
}
