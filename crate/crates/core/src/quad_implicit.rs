//! Quadrature on the part of a cell where a set of implicit constraints are
//! all positive.
//!
//! The cell is sliced along a base direction. Along each base Gauss abscissa
//! the constraints are restricted to the perpendicular (height) line, their
//! roots cut the line into intervals, and the intervals on which every
//! constraint is positive receive a 1D Gauss rule. Base Gauss rules are laid
//! out piecewise between breakpoints where the height-line root structure
//! changes: zero-set crossings of the two height faces, pairwise constraint
//! intersections, and points where the zero set turns parallel to the height
//! direction. Near the last kind the height extent behaves like a square root
//! of the base distance, so the base rule there is pulled towards the
//! breakpoint with a polynomial substitution whose derivative vanishes at it.
//! Such a point may also lie just outside a piece, beyond the cell or past
//! the end of the zero set inside it; the piece is then split geometrically
//! towards it so that every sub-piece is about as long as its distance to
//! the singularity.

use crate::error::{Error, Result};
use crate::gauss::GaussRule;
use crate::integration::CellStatus;
use crate::geometry::{Axis, Cell, ImplicitConstraint, ImplicitRegion, Point2, Vec2};
use crate::polytools::{
    approximation_degree, common_zeros, roots_with_scale, to_bernstein, Bernstein2D, ROOT_TOL,
};

/// A quadrature point with its weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadNode {
    pub point: Point2,
    pub weight: f64,
}

/// Quadrature nodes in physical coordinates.
///
/// Area rules carry weights in area units. Boundary (interface) rules carry
/// length weights and one unit outward normal per node in `normals`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<QuadNode>,
    pub normals: Vec<Vec2>,
}

impl QuadratureRule {
    pub fn empty() -> Self {
        Self::default()
    }

    /// `q x q` tensor Gauss–Legendre rule on the whole cell.
    pub fn tensor(cell: &Cell, q: usize) -> Self {
        let g = GaussRule::new(q);
        let mut nodes = Vec::with_capacity(q * q);
        for (x, wx) in g.mapped(cell.x0, cell.x1) {
            for (y, wy) in g.mapped(cell.y0, cell.y1) {
                nodes.push(QuadNode {
                    point: Point2::new(x, y),
                    weight: wx * wy,
                });
            }
        }
        QuadratureRule {
            nodes,
            normals: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.nodes.iter().map(|n| n.weight).sum()
    }

    pub fn integrate(&self, g: impl Fn(Point2) -> f64) -> f64 {
        self.nodes.iter().map(|n| n.weight * g(n.point)).sum()
    }

    pub fn has_normals(&self) -> bool {
        !self.normals.is_empty() && self.normals.len() == self.nodes.len()
    }

    pub fn append(&mut self, other: QuadratureRule) {
        let keep_normals = self.has_normals() || self.is_empty();
        self.nodes.extend(other.nodes);
        if keep_normals {
            self.normals.extend(other.normals);
        } else {
            self.normals.clear();
        }
    }
}

/// What the Bernstein range bound says about one constraint on a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Certified {
    Positive,
    Negative,
    Mixed,
}

struct Approx {
    poly: Bernstein2D,
    eps: f64,
    verdict: Certified,
    /// Constraint vanishes somewhere on the closed cell.
    touches: bool,
}

fn approximate(c: &ImplicitConstraint, cell: &Cell) -> Result<Approx> {
    let poly = to_bernstein(c, cell, approximation_degree(c))?;
    let scale = poly.scale();
    let eps = 1e-14 * scale;
    let (lo, hi) = poly.range();
    let verdict = if scale == 0.0 || (lo >= -eps && hi <= eps) {
        // zero on the whole cell up to rounding: decide by the center sign
        if c.value(cell.center()) > 0.0 {
            Certified::Positive
        } else {
            Certified::Negative
        }
    } else if lo >= -eps {
        Certified::Positive
    } else if hi <= eps {
        Certified::Negative
    } else {
        Certified::Mixed
    };
    let touches = scale > 0.0 && lo <= eps && hi >= -eps && !(lo >= -eps && hi <= eps);
    Ok(Approx {
        poly,
        eps,
        verdict,
        touches,
    })
}

/// Height direction for a constraint: the axis along which its Bernstein
/// gradient coefficients are larger on average, ties going to `y`.
fn height_axis(b: &Bernstein2D) -> Axis {
    let mean = |p: Bernstein2D| p.coeffs().iter().map(|c| c.abs()).sum::<f64>() / p.coeffs().len() as f64;
    let mx = mean(b.partial(Axis::X));
    let my = mean(b.partial(Axis::Y));
    if mx > my + 1e-12 * mx.max(my) {
        Axis::X
    } else {
        Axis::Y
    }
}

fn snap_tol(lo: f64, hi: f64) -> f64 {
    1e-12 * (hi - lo).max(lo.abs()).max(hi.abs())
}

/// Sorted base breakpoints strictly inside `(lo, hi)` with a flag telling
/// whether the height extent has a square-root singularity there; the first
/// and last entries are the base bounds themselves.
#[derive(Debug)]
struct Breakpoints {
    at: Vec<f64>,
    branch: Vec<bool>,
}

impl Breakpoints {
    fn build(lo: f64, hi: f64, mut raw: Vec<(f64, bool)>) -> Self {
        let tol = snap_tol(lo, hi);
        raw.retain(|(t, _)| t.is_finite());
        for (t, _) in raw.iter_mut() {
            if (*t - lo).abs() <= tol {
                *t = lo;
            } else if (*t - hi).abs() <= tol {
                *t = hi;
            }
        }
        raw.retain(|&(t, _)| t >= lo && t <= hi);
        raw.push((lo, false));
        raw.push((hi, false));
        raw.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut at: Vec<f64> = Vec::new();
        let mut branch: Vec<bool> = Vec::new();
        for (t, b) in raw {
            match at.last() {
                Some(&last) if t - last <= tol => {
                    let k = branch.len() - 1;
                    branch[k] |= b;
                    // keep the bounds exact
                    if t == hi {
                        *at.last_mut().unwrap() = hi;
                    }
                }
                _ => {
                    at.push(t);
                    branch.push(b);
                }
            }
        }
        Breakpoints { at, branch }
    }

    /// Base abscissae and weights: `q` points per piece, mapped towards
    /// branch ends.
    /// Splits each piece whose nearest singularity outside it lies closer
    /// than half its length, with sub-pieces doubling in length away from
    /// that singularity.
    fn grade_towards(&mut self, singular: &[f64]) {
        let n = self.at.len();
        let floor = 1e-8 * (self.at[n - 1] - self.at[0]);
        let mut at = vec![self.at[0]];
        let mut branch = vec![self.branch[0]];
        for k in 0..n - 1 {
            let (a, b) = (self.at[k], self.at[k + 1]);
            let len = b - a;
            let gap = |d: f64| if d > floor { d } else { f64::INFINITY };
            let right = singular.iter().map(|&s| gap(s - b)).fold(f64::INFINITY, f64::min);
            let left = singular.iter().map(|&s| gap(a - s)).fold(f64::INFINITY, f64::min);
            let mut inner = Vec::new();
            if right <= left && right < 0.5 * len {
                let (mut step, mut x) = (right, b - right);
                while x - a > step {
                    inner.push(x);
                    step *= 2.0;
                    x -= step;
                }
                inner.reverse();
            } else if left < 0.5 * len {
                let (mut step, mut x) = (left, a + left);
                while b - x > step {
                    inner.push(x);
                    step *= 2.0;
                    x += step;
                }
            }
            for x in inner {
                at.push(x);
                branch.push(false);
            }
            at.push(b);
            branch.push(self.branch[k + 1]);
        }
        self.at = at;
        self.branch = branch;
    }

    fn base_rule(&self, g: &GaussRule) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(g.len() * (self.at.len() - 1));
        for k in 0..self.at.len() - 1 {
            let (a, b) = (self.at[k], self.at[k + 1]);
            let len = b - a;
            if !(len > 0.0) {
                continue;
            }
            let (left, right) = (self.branch[k], self.branch[k + 1]);
            if left && right && g.len() == 1 {
                // the two-sided map has a quadratic Jacobian, which a single
                // point does not integrate exactly; each half gets the
                // one-sided map instead
                out.push((a + 0.125 * len, 0.5 * len));
                out.push((b - 0.125 * len, 0.5 * len));
                continue;
            }
            for (&s, &w) in g.nodes.iter().zip(&g.weights) {
                let (u, du) = match (left, right) {
                    (false, false) => (s, 1.0),
                    (true, false) => (s * s, 2.0 * s),
                    (false, true) => (1.0 - (1.0 - s) * (1.0 - s), 2.0 * (1.0 - s)),
                    (true, true) => (s * s * (3.0 - 2.0 * s), 6.0 * s * (1.0 - s)),
                };
                out.push((a + len * u, w * du * len));
            }
        }
        out
    }
}

fn point_on(base: Axis, t: f64, h: f64) -> Point2 {
    match base {
        Axis::X => Point2::new(t, h),
        Axis::Y => Point2::new(h, t),
    }
}

/// Roots of constraint `b` on the line `base = t`, in height coordinates.
/// A restriction that vanishes identically yields no roots.
fn line_roots(b: &Bernstein2D, base: Axis, t: f64) -> Result<Vec<f64>> {
    let line = b.restrict(base, t)?;
    match roots_with_scale(&line, ROOT_TOL, b.scale()) {
        Ok(r) => Ok(r),
        Err(Error::DegeneratePolynomial) => Ok(Vec::new()),
        Err(e) => Err(e),
    }
}

/// Base coordinates of the breakpoints contributed by one constraint: its
/// crossings of the two height faces and its tangency points.
fn own_breakpoints(b: &Bernstein2D, height: Axis, out: &mut Vec<(f64, bool)>) -> Result<()> {
    let base = height.other();
    let cell = *b.cell();
    for face in [cell.lo(height), cell.hi(height)] {
        // restricting at a fixed height gives a polynomial in the base
        for r in line_roots(b, height, face)? {
            out.push((r, false));
        }
    }
    let dh = b.partial(height);
    if dh.scale() * cell.extent(height) <= 1e-14 * b.scale() {
        // the zero set runs along the height direction: cut at its base roots
        let mid = 0.5 * (cell.lo(height) + cell.hi(height));
        for r in line_roots(b, height, mid)? {
            out.push((r, false));
        }
        return Ok(());
    }
    if dh.strictly_signed(1e-14 * dh.scale()) {
        return Ok(());
    }
    for p in common_zeros(b, &dh)? {
        out.push((p.coord(base), true));
    }
    Ok(())
}

/// Base coordinates of the points where the zero set of `c` turns parallel
/// to the height direction, searched in the cell widened by its own size on
/// every side.
fn nearby_branch_points(c: &ImplicitConstraint, cell: &Cell, height: Axis) -> Result<Vec<f64>> {
    let (w, h) = (cell.width(), cell.height());
    let wide = Cell::from_bounds(cell.x0 - w, cell.x1 + w, cell.y0 - h, cell.y1 + h);
    let b = to_bernstein(c, &wide, approximation_degree(c))?;
    let dh = b.partial(height);
    if dh.scale() * wide.extent(height) <= 1e-14 * b.scale() || dh.strictly_signed(1e-14 * dh.scale()) {
        return Ok(Vec::new());
    }
    let base = height.other();
    Ok(common_zeros(&b, &dh)?.into_iter().map(|p| p.coord(base)).collect())
}

fn pair_breakpoints(a: &Bernstein2D, b: &Bernstein2D, base: Axis, out: &mut Vec<(f64, bool)>) -> Result<()> {
    for p in common_zeros(a, b)? {
        out.push((p.coord(base), false));
    }
    Ok(())
}

/// Cell status from the Bernstein range bounds of every constraint.
pub(crate) fn classify_cell_implicit(region: &ImplicitRegion, cell: &Cell) -> Result<CellStatus> {
    let mut status = CellStatus::Inside;
    for c in region.constraints() {
        match approximate(c, cell)?.verdict {
            Certified::Negative => return Ok(CellStatus::Outside),
            Certified::Positive => {}
            Certified::Mixed => status = CellStatus::Cut,
        }
    }
    Ok(status)
}

/// Area quadrature on `cell ∩ {f_k > 0 for all k}`.
pub fn cell_quadrature_implicit(region: &ImplicitRegion, cell: &Cell, q: usize) -> Result<QuadratureRule> {
    if q < 1 {
        return Err(Error::Domain(format!("quadrature order must be at least 1, got {q}")));
    }
    let mut active: Vec<Approx> = Vec::new();
    let mut active_constraints = Vec::new();
    for c in region.constraints() {
        let a = approximate(c, cell)?;
        match a.verdict {
            Certified::Negative => return Ok(QuadratureRule::empty()),
            Certified::Positive => {}
            Certified::Mixed => {
                active.push(a);
                active_constraints.push(c);
            }
        }
    }
    if active.is_empty() {
        return Ok(QuadratureRule::tensor(cell, q));
    }

    let height = height_axis(&active[0].poly);
    let base = height.other();
    let mut raw = Vec::new();
    for (k, a) in active.iter().enumerate() {
        own_breakpoints(&a.poly, height, &mut raw)?;
        for b in &active[k + 1..] {
            pair_breakpoints(&a.poly, &b.poly, base, &mut raw)?;
        }
    }
    let (b0, b1) = (cell.lo(base), cell.hi(base));
    let (h0, h1) = (cell.lo(height), cell.hi(height));
    let mut breaks = Breakpoints::build(b0, b1, raw);
    let mut singular = Vec::new();
    for c in active_constraints {
        singular.extend(nearby_branch_points(c, cell, height)?);
    }
    breaks.grade_towards(&singular);
    let g = GaussRule::new(q);
    let tol = snap_tol(h0, h1);

    let mut rule = QuadratureRule::empty();
    let mut cuts: Vec<f64> = Vec::new();
    for (t, wb) in breaks.base_rule(&g) {
        cuts.clear();
        cuts.push(h0);
        cuts.push(h1);
        for a in &active {
            for r in line_roots(&a.poly, base, t)? {
                cuts.push(if (r - h0).abs() <= tol {
                    h0
                } else if (r - h1).abs() <= tol {
                    h1
                } else {
                    r.clamp(h0, h1)
                });
            }
        }
        cuts.sort_by(|a, b| a.total_cmp(b));
        cuts.dedup();
        for w in cuts.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            if !(hi - lo > 0.0) {
                continue;
            }
            let mid = point_on(base, t, 0.5 * (lo + hi));
            if active.iter().any(|a| !(a.poly.eval(mid) > 0.0)) {
                continue;
            }
            for (h, wh) in g.mapped(lo, hi) {
                rule.nodes.push(QuadNode {
                    point: point_on(base, t, h),
                    weight: wb * wh,
                });
            }
        }
    }
    Ok(rule)
}

/// Length quadrature on the part of the region boundary that lies in the
/// cell, with unit normals pointing out of the region.
///
/// Every constraint whose zero set meets the closed cell contributes; its
/// points are kept where the other constraints are nonnegative. A zero set
/// lying on a cell face is assigned to the cell on its positive side only, so
/// summing over a mesh counts it once. Several roots per height line are
/// handled directly.
pub fn interface_quadrature_implicit(region: &ImplicitRegion, cell: &Cell, q: usize) -> Result<QuadratureRule> {
    if q < 1 {
        return Err(Error::Domain(format!("quadrature order must be at least 1, got {q}")));
    }
    let approx: Vec<Approx> = region
        .constraints()
        .iter()
        .map(|c| approximate(c, cell))
        .collect::<Result<_>>()?;
    if approx.iter().any(|a| a.verdict == Certified::Negative && a.poly.range().1 < -a.eps) {
        return Ok(QuadratureRule::empty());
    }
    let g = GaussRule::new(q);
    let mut rule = QuadratureRule::empty();
    for (k, a) in approx.iter().enumerate() {
        if !a.touches {
            continue;
        }
        let height = height_axis(&a.poly);
        let base = height.other();
        let mut raw = Vec::new();
        own_breakpoints(&a.poly, height, &mut raw)?;
        for (l, b) in approx.iter().enumerate() {
            if l != k && b.touches {
                pair_breakpoints(&a.poly, &b.poly, base, &mut raw)?;
            }
        }
        let (b0, b1) = (cell.lo(base), cell.hi(base));
        let (h0, h1) = (cell.lo(height), cell.hi(height));
        let tol = snap_tol(h0, h1);
        let mut breaks = Breakpoints::build(b0, b1, raw);
        breaks.grade_towards(&nearby_branch_points(&region.constraints()[k], cell, height)?);
        let fb = a.poly.partial(base);
        let fh = a.poly.partial(height);
        for (t, wb) in breaks.base_rule(&g) {
            for r in line_roots(&a.poly, base, t)? {
                let h = if (r - h0).abs() <= tol {
                    h0
                } else if (r - h1).abs() <= tol {
                    h1
                } else {
                    r
                };
                let p = point_on(base, t, h);
                let dh = fh.eval(p);
                if (h == h0 && !(dh > 0.0)) || (h == h1 && !(dh < 0.0)) {
                    continue;
                }
                let keep = approx
                    .iter()
                    .enumerate()
                    .all(|(l, b)| l == k || b.poly.eval(p) >= -1e-12 * b.poly.scale());
                if !keep {
                    continue;
                }
                let db = fb.eval(p);
                if dh == 0.0 {
                    continue;
                }
                let slope = -db / dh;
                let grad = match base {
                    Axis::X => Vec2::new(db, dh),
                    Axis::Y => Vec2::new(dh, db),
                };
                let n = grad.norm();
                rule.nodes.push(QuadNode {
                    point: p,
                    weight: wb * (1.0 + slope * slope).sqrt(),
                });
                rule.normals.push(grad * (-1.0 / n));
            }
        }
    }
    Ok(rule)
}
