//! Quadrature on cells trimmed by a closed NURBS loop.
//!
//! The loop is clipped to the cell and the trimmed cell is fanned out from a
//! kernel point into tiles with at most one curved side. Each tile is the
//! image of the unit square under a Coons map, so a tensor Gauss rule on the
//! square maps onto the tile with the Jacobian determinant as weight factor.

mod clip;
mod tiles;

pub use tiles::{tile_quadrature, Side, Tile};

use crate::error::{Error, Result};
use crate::gauss::GaussRule;
use crate::geometry::{build_spans, BezierSpan, Cell, CurveSegment, ParametricRegion, Point2};
use crate::quad_implicit::{QuadNode, QuadratureRule};

/// Cell edges in counterclockwise order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellEdge {
    Bottom,
    Right,
    Top,
    Left,
}

/// A point where a curve segment meets a cell's boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveCellIntersection {
    /// Curve parameter of the hit.
    pub param: f64,
    pub point: Point2,
    pub edge: CellEdge,
}

/// Parameters where `seg` crosses or touches the boundary of `cell`, sorted.
/// A hit at a cell corner is reported once. Stretches of the segment lying
/// along an edge contribute only their end points.
pub fn intersect_segment_with_cell(seg: &CurveSegment, cell: &Cell) -> Result<Vec<CurveCellIntersection>> {
    let tol = clip::cell_tol(cell);
    let mut hits = Vec::new();
    for span in build_spans(std::slice::from_ref(seg))? {
        let lines = [
            (CellEdge::Bottom, false, cell.y0),
            (CellEdge::Right, true, cell.x1),
            (CellEdge::Top, false, cell.y1),
            (CellEdge::Left, true, cell.x0),
        ];
        for (edge, vertical, c) in lines {
            for t in clip::line_crossings(&span, vertical, c)? {
                let p = span.point(t);
                let on_edge = if vertical {
                    p.y >= cell.y0 - tol && p.y <= cell.y1 + tol
                } else {
                    p.x >= cell.x0 - tol && p.x <= cell.x1 + tol
                };
                if on_edge {
                    hits.push(CurveCellIntersection { param: t, point: p, edge });
                }
            }
        }
    }
    hits.sort_by(|a, b| a.param.total_cmp(&b.param));
    let (a, b) = (seg.a, seg.b);
    hits.dedup_by(|x, y| (x.param - y.param).abs() <= 1e-12 * (b - a));
    Ok(hits)
}

/// Sample parameters used to certify that a kernel sees a side.
fn visibility_samples() -> Vec<f64> {
    let mut s: Vec<f64> = (1..16).map(|k| k as f64 / 16.0).collect();
    s.extend(GaussRule::new(8).nodes);
    s
}

fn centroid(sides: &[Side]) -> Option<Point2> {
    let g = GaussRule::new(12);
    let (mut a, mut mx, mut my) = (0.0, 0.0, 0.0);
    for side in sides {
        for (&s, &w) in g.nodes.iter().zip(&g.weights) {
            let p = side.point(s);
            let d = side.derivative(s);
            a += 0.5 * w * p.cross(d);
            mx += 0.5 * w * p.x * p.x * d.y;
            my -= 0.5 * w * p.y * p.y * d.x;
        }
    }
    (a > 0.0).then(|| Point2::new(mx / a, my / a))
}

/// Fan tiles from `k`, or `None` when some side is not strictly visible.
fn fan_from(k: Point2, sides: &[Side], cell: &Cell, samples: &[f64]) -> Option<Vec<Tile>> {
    let flat = 1e-13 * cell.diameter() * cell.diameter();
    let mut tiles = Vec::new();
    for side in sides {
        let cross: Vec<f64> = samples
            .iter()
            .map(|&s| (side.point(s) - k).cross(side.derivative(s)))
            .collect();
        // sides through the kernel span no area
        if cross.iter().all(|c| c.abs() <= flat) {
            continue;
        }
        if cross.iter().any(|&c| !(c > 0.0)) {
            return None;
        }
        tiles.push(Tile::fan(k, side.clone()));
    }
    Some(tiles)
}

fn tile_component(sides: &[Side], cell: &Cell) -> Result<Vec<Tile>> {
    let mut candidates: Vec<Point2> = sides.iter().map(Side::start).collect();
    candidates.extend(cell.corners());
    let n = sides.len() as f64;
    candidates.push(sides.iter().fold(Point2::default(), |acc, s| acc + s.start() * (1.0 / n)));
    if let Some(c) = centroid(sides) {
        candidates.push(c);
    }
    let samples = visibility_samples();
    let mut best: Option<Vec<Tile>> = None;
    for k in candidates {
        if let Some(t) = fan_from(k, sides, cell, &samples) {
            if best.as_ref().is_none_or(|b| t.len() < b.len()) {
                best = Some(t);
            }
        }
    }
    best.ok_or_else(|| Error::Tiling {
        i: cell.i,
        j: cell.j,
        detail: format!(
            "trimmed region with {} boundary pieces is not star-shaped from any vertex, corner or centroid",
            sides.len()
        ),
    })
}

/// Tiles covering `cell ∩ region`: the whole cell when it lies inside, none
/// when it lies outside, and fan tiles with at most one curved side each when
/// the loop passes through the cell.
pub fn build_tiles(region: &ParametricRegion, cell: &Cell) -> Result<Vec<Tile>> {
    let clipped = clip::clip(&region.boundary_spans(), cell)?;
    if !clipped.interior {
        return Ok(if region.contains(cell.center()) {
            vec![Tile::rectangle(cell)]
        } else {
            Vec::new()
        });
    }
    let mut tiles = Vec::new();
    for comp in clip::components(&clipped, cell)? {
        tiles.extend(tile_component(&comp, cell)?);
    }
    Ok(tiles)
}

/// Whether the loop passes through the open interior of the cell.
pub fn is_cut(region: &ParametricRegion, cell: &Cell) -> Result<bool> {
    Ok(clip::clip(&region.boundary_spans(), cell)?.interior)
}

/// Levels of subdivision tried when a cut cell cannot be tiled directly (a
/// hole strictly inside the cell, or no kernel point).
const MAX_TILING_SPLITS: usize = 6;

/// Where to cut a cell that could not be tiled: through a loop vertex well
/// inside it, so that the vertex becomes a corner of every piece, or through
/// the center when there is none.
fn split_point(spans: &[BezierSpan], cell: &Cell) -> Point2 {
    let (mx, my) = (0.05 * cell.width(), 0.05 * cell.height());
    spans
        .iter()
        .map(BezierSpan::start_point)
        .find(|p| p.x > cell.x0 + mx && p.x < cell.x1 - mx && p.y > cell.y0 + my && p.y < cell.y1 - my)
        .unwrap_or_else(|| cell.center())
}

/// Area quadrature on `cell ∩ region`.
pub fn cell_quadrature_parametric(region: &ParametricRegion, cell: &Cell, q: usize) -> Result<QuadratureRule> {
    if q < 1 {
        return Err(Error::Domain(format!("quadrature order must be at least 1, got {q}")));
    }
    let spans = region.boundary_spans();
    cell_rule(region, &spans, cell, q, 0)
}

fn cell_rule(
    region: &ParametricRegion,
    spans: &[BezierSpan],
    cell: &Cell,
    q: usize,
    depth: usize,
) -> Result<QuadratureRule> {
    let clipped = clip::clip(spans, cell)?;
    if !clipped.interior {
        return Ok(if region.contains(cell.center()) {
            QuadratureRule::tensor(cell, q)
        } else {
            QuadratureRule::empty()
        });
    }
    let attempt = || -> Result<QuadratureRule> {
        let mut rule = QuadratureRule::empty();
        for comp in clip::components(&clipped, cell)? {
            for tile in tile_component(&comp, cell)? {
                rule.append(tile_quadrature(&tile, q)?);
            }
        }
        Ok(rule)
    };
    match attempt() {
        Ok(r) => Ok(r),
        Err(e @ (Error::Tiling { .. } | Error::DegenerateTile { .. })) => {
            if depth >= MAX_TILING_SPLITS {
                return Err(e.in_cell(cell.i, cell.j));
            }
            let mut rule = QuadratureRule::empty();
            for sub in cell.split_at(split_point(spans, cell)) {
                rule.append(cell_rule(region, spans, &sub, q, depth + 1)?);
            }
            Ok(rule)
        }
        Err(e) => Err(e.in_cell(cell.i, cell.j)),
    }
}

/// Length quadrature on the loop pieces inside the cell, with unit normals
/// pointing out of the region. Pieces lying on a cell edge count for the
/// cell on the region's side only.
pub fn interface_quadrature_parametric(region: &ParametricRegion, cell: &Cell, q: usize) -> Result<QuadratureRule> {
    if q < 1 {
        return Err(Error::Domain(format!("quadrature order must be at least 1, got {q}")));
    }
    let clipped = clip::clip(&region.boundary_spans(), cell)?;
    let g = GaussRule::new(q);
    let mut rule = QuadratureRule::empty();
    for piece in &clipped.pieces {
        for (&s, &w) in g.nodes.iter().zip(&g.weights) {
            let d = piece.derivative(s);
            let len = d.norm();
            if !(len > 0.0) {
                continue;
            }
            rule.nodes.push(QuadNode {
                point: piece.point(s),
                weight: w * len,
            });
            rule.normals.push(Point2::new(d.y / len, -d.x / len));
        }
    }
    Ok(rule)
}
