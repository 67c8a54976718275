use super::tiles::Side;
use crate::error::{Error, Result};
use crate::geometry::{BezierSpan, Cell, Point2, Vec2};
use crate::polytools::{roots_with_scale, Bernstein1D, ROOT_TOL};

/// Boundary pieces of a region inside one cell.
#[derive(Debug, Clone)]
pub(crate) struct Clipped {
    /// Pieces in loop order, oriented with the region on their left. Pieces
    /// lying on a cell edge are kept only when the region is on the cell's
    /// side of that edge.
    pub pieces: Vec<Side>,
    /// Some piece passes through the open interior of the cell.
    pub interior: bool,
}

/// Geometric tolerance for a cell.
pub(crate) fn cell_tol(cell: &Cell) -> f64 {
    1e-10 * cell.width().max(cell.height())
}

fn roots_of(p: &Bernstein1D, scale: f64) -> Result<Vec<f64>> {
    match roots_with_scale(p, ROOT_TOL, scale) {
        Ok(r) => Ok(r),
        Err(Error::DegeneratePolynomial) => Ok(Vec::new()),
        Err(e) => Err(e),
    }
}

/// Parameters where `span` meets the line `x = c` (`vertical`) or `y = c`.
pub(crate) fn line_crossings(span: &BezierSpan, vertical: bool, c: f64) -> Result<Vec<f64>> {
    let num = if vertical { &span.wx } else { &span.wy };
    let p = num.axpy(-c, &span.w);
    roots_of(&p, num.scale().max(c.abs() * span.w.scale()))
}

/// Axis-aligned bounding box of the Bézier control polygon, which contains
/// the span.
fn control_box(span: &BezierSpan) -> (f64, f64, f64, f64) {
    let d = span.w.degree().max(span.wx.degree()).max(span.wy.degree());
    let (wx, wy, w) = (span.wx.elevate_to(d), span.wy.elevate_to(d), span.w.elevate_to(d));
    let mut b = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for k in 0..=d {
        let (x, y) = (wx.coeffs()[k] / w.coeffs()[k], wy.coeffs()[k] / w.coeffs()[k]);
        b = (b.0.min(x), b.1.max(x), b.2.min(y), b.3.max(y));
    }
    b
}

/// Sorted split parameters of a span for a cell: its ends, crossings of the
/// four cell lines, and points with an axis-parallel tangent.
fn split_params(span: &BezierSpan, cell: &Cell) -> Result<Vec<f64>> {
    let (t0, t1) = span.interval();
    let mut ts = vec![t0, t1];
    for (vertical, c) in [(true, cell.x0), (true, cell.x1), (false, cell.y0), (false, cell.y1)] {
        ts.extend(line_crossings(span, vertical, c)?);
    }
    let dscale = span.dx.scale().max(span.dy.scale());
    ts.extend(roots_of(&span.dx, dscale)?);
    ts.extend(roots_of(&span.dy, dscale)?);
    ts.sort_by(|a, b| a.total_cmp(b));
    let merge = 1e-13 * (t1 - t0);
    let mut out: Vec<f64> = Vec::with_capacity(ts.len());
    for t in ts {
        match out.last() {
            Some(&last) if t - last <= merge => {
                if t == t1 {
                    *out.last_mut().unwrap() = t1;
                }
            }
            _ => out.push(t),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Location {
    Outside,
    Interior,
    /// On edge 0..4 (bottom, right, top, left).
    Edge(usize),
}

fn locate(cell: &Cell, p: Point2, tol: f64) -> Location {
    if !cell.contains(p, tol) {
        return Location::Outside;
    }
    let d = [p.y - cell.y0, cell.x1 - p.x, cell.y1 - p.y, p.x - cell.x0];
    let (k, m) = d
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |(bk, bm), (k, &v)| if v.abs() < bm { (k, v.abs()) } else { (bk, bm) });
    if m <= tol {
        Location::Edge(k)
    } else {
        Location::Interior
    }
}

/// Counterclockwise direction along edge `k` of a cell.
fn edge_direction(k: usize) -> Vec2 {
    [
        Vec2::new(1.0, 0.0),
        Vec2::new(0.0, 1.0),
        Vec2::new(-1.0, 0.0),
        Vec2::new(0.0, -1.0),
    ][k]
}

pub(crate) fn clip(spans: &[BezierSpan], cell: &Cell) -> Result<Clipped> {
    let tol = cell_tol(cell);
    let mut pieces = Vec::new();
    let mut interior = false;
    for span in spans {
        let (bx0, bx1, by0, by1) = control_box(span);
        if bx1 < cell.x0 - tol || bx0 > cell.x1 + tol || by1 < cell.y0 - tol || by0 > cell.y1 + tol {
            continue;
        }
        let ts = split_params(span, cell)?;
        for w in ts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let m = 0.5 * (a + b);
            match locate(cell, span.point(m), tol) {
                Location::Outside => continue,
                Location::Interior => interior = true,
                Location::Edge(k) => {
                    if span.derivative(m).dot(edge_direction(k)) <= 0.0 {
                        continue;
                    }
                }
            }
            pieces.push(Side::Curve {
                span: span.clone(),
                t0: a,
                t1: b,
            });
        }
    }
    Ok(Clipped { pieces, interior })
}

/// Counterclockwise perimeter coordinate in `[0, 4)`; edge `k` covers
/// `[k, k + 1)`.
fn perimeter_coord(cell: &Cell, p: Point2, tol: f64) -> Option<f64> {
    let (w, h) = (cell.width(), cell.height());
    if (p.y - cell.y0).abs() <= tol && p.x < cell.x1 - tol {
        Some(((p.x - cell.x0) / w).clamp(0.0, 1.0))
    } else if (p.x - cell.x1).abs() <= tol && p.y < cell.y1 - tol {
        Some(1.0 + ((p.y - cell.y0) / h).clamp(0.0, 1.0))
    } else if (p.y - cell.y1).abs() <= tol && p.x > cell.x0 + tol {
        Some(2.0 + ((cell.x1 - p.x) / w).clamp(0.0, 1.0))
    } else if (p.x - cell.x0).abs() <= tol && p.y > cell.y0 + tol {
        Some(3.0 + ((cell.y1 - p.y) / h).clamp(0.0, 1.0))
    } else if (p.x - cell.x0).abs() <= tol && (p.y - cell.y0).abs() <= tol {
        Some(0.0)
    } else {
        None
    }
}

/// Straight pieces walking the cell perimeter counterclockwise from `from`
/// (coordinate `s0`) to `to` (coordinate `s1`).
fn perimeter_walk(cell: &Cell, from: Point2, s0: f64, to: Point2, s1: f64, tol: f64) -> Vec<Side> {
    let corners = cell.corners();
    let end = if s1 < s0 { s1 + 4.0 } else { s1 };
    let mut pts = vec![from];
    let mut k = s0.floor() + 1.0;
    while k < end {
        pts.push(corners[(k as usize) % 4]);
        k += 1.0;
    }
    pts.push(to);
    pts.windows(2)
        .filter(|w| w[0].dist(w[1]) > tol)
        .map(|w| Side::Line(w[0], w[1]))
        .collect()
}

fn signed_area(sides: &[Side]) -> f64 {
    sides.iter().map(|s| s.fan_area(Point2::new(0.0, 0.0))).sum()
}

fn tiling_error(cell: &Cell, detail: impl Into<String>) -> Error {
    Error::Tiling {
        i: cell.i,
        j: cell.j,
        detail: detail.into(),
    }
}

/// Closed counterclockwise boundaries of the connected pieces of
/// `cell ∩ region`, built from the clipped curve pieces and the cell
/// perimeter.
pub(crate) fn components(clipped: &Clipped, cell: &Cell) -> Result<Vec<Vec<Side>>> {
    let tol = cell_tol(cell);
    let link_tol = 1e3 * tol;
    let pieces = &clipped.pieces;
    let n = pieces.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    // chains of consecutive pieces in loop order
    let linked: Vec<bool> = (0..n)
        .map(|k| pieces[k].end().dist(pieces[(k + 1) % n].start()) <= link_tol)
        .collect();
    let mut chains: Vec<Vec<Side>> = Vec::new();
    let mut closed: Vec<Vec<Side>> = Vec::new();
    match linked.iter().position(|&l| !l) {
        None => closed.push(pieces.clone()),
        Some(first_break) => {
            let mut current = Vec::new();
            for off in 1..=n {
                let k = (first_break + off) % n;
                current.push(pieces[k].clone());
                if !linked[k] {
                    chains.push(std::mem::take(&mut current));
                }
            }
        }
    }

    let mut out = Vec::new();
    for c in closed {
        if signed_area(&c) > 0.0 {
            out.push(c);
        } else {
            return Err(tiling_error(cell, "region has a hole inside the cell"));
        }
    }
    if chains.is_empty() {
        return Ok(out);
    }

    let mut ends = Vec::with_capacity(chains.len());
    for c in &chains {
        let (s, e) = (c[0].start(), c[c.len() - 1].end());
        let ss = perimeter_coord(cell, s, link_tol)
            .ok_or_else(|| tiling_error(cell, format!("boundary piece starts inside the cell at ({}, {})", s.x, s.y)))?;
        let se = perimeter_coord(cell, e, link_tol)
            .ok_or_else(|| tiling_error(cell, format!("boundary piece ends inside the cell at ({}, {})", e.x, e.y)))?;
        ends.push((ss, se));
    }
    let mut used = vec![false; chains.len()];
    let seam = 1e-12;
    for start in 0..chains.len() {
        if used[start] {
            continue;
        }
        let mut comp: Vec<Side> = Vec::new();
        let mut k = start;
        loop {
            if used[k] {
                return Err(tiling_error(cell, "boundary pieces do not close into a loop"));
            }
            used[k] = true;
            comp.extend(chains[k].iter().cloned());
            let exit = ends[k].1;
            let next = (0..chains.len())
                .min_by(|&a, &b| {
                    let da = gap(exit, ends[a].0, seam);
                    let db = gap(exit, ends[b].0, seam);
                    da.total_cmp(&db)
                })
                .expect("at least one chain");
            let from = chains[k][chains[k].len() - 1].end();
            let to = chains[next][0].start();
            comp.extend(perimeter_walk(cell, from, exit, to, ends[next].0, tol));
            if next == start {
                break;
            }
            k = next;
        }
        out.push(comp);
    }
    Ok(out)
}

/// Counterclockwise perimeter distance from `a` to `b`.
fn gap(a: f64, b: f64, seam: f64) -> f64 {
    let d = (b - a).rem_euclid(4.0);
    if d > 4.0 - seam {
        0.0
    } else {
        d
    }
}
