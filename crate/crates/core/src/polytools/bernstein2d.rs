use super::bernstein1d::{apply, collocation_inverse, de_casteljau, chebyshev_nodes, split_coeffs};
use super::Bernstein1D;
use crate::error::{Error, Result};
use crate::geometry::{Axis, Cell, Point2};

/// Tensor-product Bernstein polynomial on a cell.
///
/// Coefficient `(i, j)` (x index `i`, y index `j`) is stored at
/// `i * (dy + 1) + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bernstein2D {
    dx: usize,
    dy: usize,
    coeffs: Vec<f64>,
    cell: Cell,
}

impl Bernstein2D {
    pub fn new(dx: usize, dy: usize, coeffs: Vec<f64>, cell: Cell) -> Result<Self> {
        if coeffs.len() != (dx + 1) * (dy + 1) {
            return Err(Error::Domain(format!(
                "coefficient grid has {} entries, expected {}",
                coeffs.len(),
                (dx + 1) * (dy + 1)
            )));
        }
        if !(cell.x0 < cell.x1 && cell.y0 < cell.y1) {
            return Err(Error::Domain("cell bounds are empty".into()));
        }
        Ok(Bernstein2D { dx, dy, coeffs, cell })
    }

    /// Interpolates `f` on the `(d + 1) x (d + 1)` Chebyshev grid of
    /// the cell and converts the result to Bernstein form.
    pub fn interpolate(f: impl Fn(Point2) -> f64, cell: Cell, d: usize) -> Self {
        let n = d + 1;
        let nodes = chebyshev_nodes(d);
        let inv = collocation_inverse(d);
        let mut vals = vec![0.0; n * n];
        for (a, &sx) in nodes.iter().enumerate() {
            let x = cell.x0 + cell.width() * sx;
            for (b, &sy) in nodes.iter().enumerate() {
                let y = cell.y0 + cell.height() * sy;
                vals[a * n + b] = f(Point2::new(x, y));
            }
        }
        // B = M^-1 F M^-T: solve along y for each x node, then along x
        let mut tmp = vec![0.0; n * n];
        for a in 0..n {
            let row = apply(&inv, &vals[a * n..(a + 1) * n]);
            tmp[a * n..(a + 1) * n].copy_from_slice(&row);
        }
        let mut coeffs = vec![0.0; n * n];
        let mut col = vec![0.0; n];
        for j in 0..n {
            for a in 0..n {
                col[a] = tmp[a * n + j];
            }
            let c = apply(&inv, &col);
            for i in 0..n {
                coeffs[i * n + j] = c[i];
            }
        }
        Bernstein2D {
            dx: d,
            dy: d,
            coeffs,
            cell,
        }
    }

    pub fn degrees(&self) -> (usize, usize) {
        (self.dx, self.dy)
    }

    pub fn degree(&self, axis: Axis) -> usize {
        match axis {
            Axis::X => self.dx,
            Axis::Y => self.dy,
        }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        self.coeffs[i * (self.dy + 1) + j]
    }

    pub fn cell(&self) -> &Cell {
        &self.cell
    }

    pub fn scale(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Smallest and largest coefficient; the polynomial's range on the cell
    /// lies inside this interval.
    pub fn range(&self) -> (f64, f64) {
        self.coeffs
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &c| (lo.min(c), hi.max(c)))
    }

    pub fn eval(&self, p: Point2) -> f64 {
        let sx = (p.x - self.cell.x0) / self.cell.width();
        let sy = (p.y - self.cell.y0) / self.cell.height();
        let col: Vec<f64> = (0..=self.dx)
            .map(|i| de_casteljau(&self.coeffs[i * (self.dy + 1)..(i + 1) * (self.dy + 1)], sy))
            .collect();
        de_casteljau(&col, sx)
    }

    /// Restriction to the line where coordinate `axis` equals `value`; the
    /// result is a polynomial in the other coordinate.
    pub fn restrict(&self, axis: Axis, value: f64) -> Result<Bernstein1D> {
        let (lo, hi) = (self.cell.lo(axis), self.cell.hi(axis));
        let slack = 1e-12 * (hi - lo);
        if !(value >= lo - slack && value <= hi + slack) {
            return Err(Error::Domain(format!(
                "line {axis:?} = {value} misses the cell range [{lo}, {hi}]"
            )));
        }
        let s = ((value - lo) / (hi - lo)).clamp(0.0, 1.0);
        let ny = self.dy + 1;
        match axis {
            Axis::Y => {
                let c = (0..=self.dx)
                    .map(|i| de_casteljau(&self.coeffs[i * ny..(i + 1) * ny], s))
                    .collect();
                Ok(Bernstein1D::from_parts(c, self.cell.x0, self.cell.x1))
            }
            Axis::X => {
                let mut col = vec![0.0; self.dx + 1];
                let c = (0..ny)
                    .map(|j| {
                        for i in 0..=self.dx {
                            col[i] = self.coeffs[i * ny + j];
                        }
                        de_casteljau(&col, s)
                    })
                    .collect();
                Ok(Bernstein1D::from_parts(c, self.cell.y0, self.cell.y1))
            }
        }
    }

    /// Partial derivative along `axis`, in physical units.
    pub fn partial(&self, axis: Axis) -> Bernstein2D {
        let ny = self.dy + 1;
        match axis {
            Axis::X => {
                if self.dx == 0 {
                    return self.zero_like();
                }
                let s = self.dx as f64 / self.cell.width();
                let mut c = Vec::with_capacity(self.dx * ny);
                for i in 0..self.dx {
                    for j in 0..ny {
                        c.push(s * (self.coeffs[(i + 1) * ny + j] - self.coeffs[i * ny + j]));
                    }
                }
                Bernstein2D {
                    dx: self.dx - 1,
                    dy: self.dy,
                    coeffs: c,
                    cell: self.cell,
                }
            }
            Axis::Y => {
                if self.dy == 0 {
                    return self.zero_like();
                }
                let s = self.dy as f64 / self.cell.height();
                let mut c = Vec::with_capacity((self.dx + 1) * self.dy);
                for i in 0..=self.dx {
                    for j in 0..self.dy {
                        c.push(s * (self.coeffs[i * ny + j + 1] - self.coeffs[i * ny + j]));
                    }
                }
                Bernstein2D {
                    dx: self.dx,
                    dy: self.dy - 1,
                    coeffs: c,
                    cell: self.cell,
                }
            }
        }
    }

    fn zero_like(&self) -> Bernstein2D {
        Bernstein2D {
            dx: 0,
            dy: 0,
            coeffs: vec![0.0],
            cell: self.cell,
        }
    }

    /// Splits the cell in half along `axis`.
    pub fn halve(&self, axis: Axis) -> (Bernstein2D, Bernstein2D) {
        let ny = self.dy + 1;
        let mut lc = self.coeffs.clone();
        let mut rc = self.coeffs.clone();
        match axis {
            Axis::Y => {
                for i in 0..=self.dx {
                    let (l, r) = split_coeffs(&self.coeffs[i * ny..(i + 1) * ny], 0.5);
                    lc[i * ny..(i + 1) * ny].copy_from_slice(&l);
                    rc[i * ny..(i + 1) * ny].copy_from_slice(&r);
                }
            }
            Axis::X => {
                let mut col = vec![0.0; self.dx + 1];
                for j in 0..ny {
                    for i in 0..=self.dx {
                        col[i] = self.coeffs[i * ny + j];
                    }
                    let (l, r) = split_coeffs(&col, 0.5);
                    for i in 0..=self.dx {
                        lc[i * ny + j] = l[i];
                        rc[i * ny + j] = r[i];
                    }
                }
            }
        }
        let c = self.cell;
        let (cl, cr) = match axis {
            Axis::X => {
                let m = 0.5 * (c.x0 + c.x1);
                (
                    Cell { x1: m, ..c },
                    Cell { x0: m, ..c },
                )
            }
            Axis::Y => {
                let m = 0.5 * (c.y0 + c.y1);
                (
                    Cell { y1: m, ..c },
                    Cell { y0: m, ..c },
                )
            }
        };
        (
            Bernstein2D {
                dx: self.dx,
                dy: self.dy,
                coeffs: lc,
                cell: cl,
            },
            Bernstein2D {
                dx: self.dx,
                dy: self.dy,
                coeffs: rc,
                cell: cr,
            },
        )
    }

    /// True when every coefficient is strictly above `eps` or every one is
    /// strictly below `-eps`, which certifies the polynomial has no zero on
    /// the closed cell.
    pub fn strictly_signed(&self, eps: f64) -> bool {
        let (lo, hi) = self.range();
        lo > eps || hi < -eps
    }
}

/// Isolated common zeros of two polynomials on the same cell, found by
/// subdividing the cell, discarding boxes where either polynomial is
/// certified nonzero, and polishing with Newton's method.
///
/// Returns [`Error::NonConvergence`] when the zero set does not look like a
/// finite set of points (for example when the two polynomials share a
/// curve).
pub fn common_zeros(a: &Bernstein2D, b: &Bernstein2D) -> Result<Vec<Point2>> {
    let cell = *a.cell();
    let diam = cell.diameter();
    let min_size = 1e-7 * diam;
    let eps_a = 1e-14 * a.scale();
    let eps_b = 1e-14 * b.scale();
    if a.scale() == 0.0 || b.scale() == 0.0 {
        return Err(Error::DegeneratePolynomial);
    }
    let (ax, ay) = (a.partial(Axis::X), a.partial(Axis::Y));
    let (bx, by) = (b.partial(Axis::X), b.partial(Axis::Y));

    let mut stack = vec![(a.clone(), b.clone())];
    let mut leaves: Vec<Cell> = Vec::new();
    let mut visited = 0usize;
    while let Some((pa, pb)) = stack.pop() {
        visited += 1;
        if visited > 200_000 || leaves.len() > 256 {
            return Err(Error::NonConvergence("common zero set is not isolated".into()));
        }
        if pa.strictly_signed(eps_a) || pb.strictly_signed(eps_b) {
            continue;
        }
        let c = *pa.cell();
        if c.diameter() <= min_size {
            leaves.push(c);
            continue;
        }
        let axis = if c.width() >= c.height() { Axis::X } else { Axis::Y };
        let (la, ra) = pa.halve(axis);
        let (lb, rb) = pb.halve(axis);
        stack.push((ra, rb));
        stack.push((la, lb));
    }

    let mut out: Vec<Point2> = Vec::new();
    for leaf in leaves {
        let mut p = leaf.center();
        for _ in 0..20 {
            let (fa, fb) = (a.eval(p), b.eval(p));
            let j11 = ax.eval(p);
            let j12 = ay.eval(p);
            let j21 = bx.eval(p);
            let j22 = by.eval(p);
            let det = j11 * j22 - j12 * j21;
            if det.abs() <= 1e-300 || !det.is_finite() {
                break;
            }
            let dx = (fa * j22 - fb * j12) / det;
            let dy = (j11 * fb - j21 * fa) / det;
            let next = Point2::new(p.x - dx, p.y - dy);
            if next.dist(leaf.center()) > 10.0 * min_size {
                break;
            }
            p = next;
            if dx.hypot(dy) <= 1e-16 * diam {
                break;
            }
        }
        p.x = p.x.clamp(cell.x0, cell.x1);
        p.y = p.y.clamp(cell.y0, cell.y1);
        if !out.iter().any(|q| q.dist(p) <= 100.0 * min_size) {
            out.push(p);
        }
    }
    out.sort_by(|p, q| p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> Cell {
        Cell::from_bounds(0.0, 1.0, 0.0, 1.0)
    }

    #[test]
    fn linear_reproduction() {
        let b = Bernstein2D::interpolate(|p| p.x, unit(), 1);
        assert_eq!(b.coeffs().len(), 4);
        assert!((b.coeff(0, 0)).abs() < 1e-15 && (b.coeff(0, 1)).abs() < 1e-15);
        assert!((b.coeff(1, 0) - 1.0).abs() < 1e-15 && (b.coeff(1, 1) - 1.0).abs() < 1e-15);
        let (lo, hi) = b.range();
        assert!(lo.abs() < 1e-15 && (hi - 1.0).abs() < 1e-15);
    }

    #[test]
    fn restriction_of_product() {
        let b = Bernstein2D::interpolate(|p| p.x * p.y, unit(), 2);
        let r = b.restrict(Axis::Y, 0.5).unwrap();
        for k in 0..=10 {
            let x = k as f64 / 10.0;
            assert!((r.eval(x) - 0.5 * x).abs() < 1e-14);
        }
        assert!(b.restrict(Axis::X, 1.5).is_err());
    }

    #[test]
    fn partials_match_closed_form() {
        let cell = Cell::from_bounds(0.2, 0.7, -0.3, 0.1);
        let f = |p: Point2| p.x * p.x * p.y - 2.0 * p.y * p.y + p.x;
        let b = Bernstein2D::interpolate(f, cell, 2);
        let bx = b.partial(Axis::X);
        let by = b.partial(Axis::Y);
        for k in 0..5 {
            let p = Point2::new(0.2 + 0.1 * k as f64, -0.3 + 0.08 * k as f64);
            assert!((bx.eval(p) - (2.0 * p.x * p.y + 1.0)).abs() < 1e-12);
            assert!((by.eval(p) - (p.x * p.x - 4.0 * p.y)).abs() < 1e-12);
        }
    }

    #[test]
    fn halving_preserves_values() {
        let b = Bernstein2D::interpolate(|p| (p.x - 0.3).powi(3) + p.y * p.x, unit(), 3);
        let (l, r) = b.halve(Axis::X);
        let (lo, hi) = b.halve(Axis::Y);
        for p in [Point2::new(0.1, 0.9), Point2::new(0.7, 0.2)] {
            let side = if p.x <= 0.5 { &l } else { &r };
            assert!((side.eval(p) - b.eval(p)).abs() < 1e-14);
            let side = if p.y <= 0.5 { &lo } else { &hi };
            assert!((side.eval(p) - b.eval(p)).abs() < 1e-14);
        }
    }

    #[test]
    fn circle_meets_line() {
        let cell = Cell::from_bounds(0.0, 0.5, 0.0, 0.5);
        let circle = Bernstein2D::interpolate(
            |p| 0.0625 - (p.x - 0.1768).powi(2) - (p.y - 0.1768).powi(2),
            cell,
            2,
        );
        let line = Bernstein2D::interpolate(|p| p.x + p.y - 0.3536, cell, 1);
        let z = common_zeros(&circle, &line).unwrap();
        assert_eq!(z.len(), 2);
        for p in z {
            assert!((p.x + p.y - 0.3536).abs() < 1e-13);
            assert!(((p.x - 0.1768).powi(2) + (p.y - 0.1768).powi(2) - 0.0625).abs() < 1e-13);
        }
    }

    #[test]
    fn tangent_point_on_cell_face() {
        let cell = Cell::from_bounds(0.5, 0.75, 0.5, 0.75);
        let f = Bernstein2D::interpolate(|p| 0.04 - (p.x - 0.5).powi(2) - (p.y - 0.5).powi(2), cell, 2);
        let fy = f.partial(Axis::Y);
        let z = common_zeros(&f, &fy).unwrap();
        assert_eq!(z.len(), 1);
        assert!((z[0].x - 0.7).abs() < 1e-12 && (z[0].y - 0.5).abs() < 1e-12);
    }

    #[test]
    fn shared_curve_is_reported() {
        let f = Bernstein2D::interpolate(|p| p.x - p.y, unit(), 1);
        assert!(common_zeros(&f, &f).is_err());
    }
}
