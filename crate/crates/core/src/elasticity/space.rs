use crate::bspline::{basis_derivatives, open_uniform_knots};
use crate::error::{Error, Result};
use crate::geometry::{BackgroundMesh, Point2, Vec2};

/// Tensor-product B-splines of degree `p` on the background mesh: open
/// uniform knots, one knot span per cell, maximal continuity.
///
/// Basis function `(a, b)` has index `b * n_x + a`; its two displacement
/// components are dofs `2 * index` and `2 * index + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BsplineSpace {
    pub degree: usize,
    pub mesh: BackgroundMesh,
    knots_x: Vec<f64>,
    knots_y: Vec<f64>,
}

/// A basis function that is nonzero at an evaluation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisValue {
    pub index: usize,
    pub value: f64,
    pub grad: Vec2,
}

impl BsplineSpace {
    pub fn new(mesh: BackgroundMesh, degree: usize) -> Result<Self> {
        if degree < 1 {
            return Err(Error::Domain("spline degree must be at least 1".into()));
        }
        let o = mesh.origin;
        Ok(BsplineSpace {
            degree,
            knots_x: open_uniform_knots(degree, mesh.nx, o.x, o.x + mesh.width),
            knots_y: open_uniform_knots(degree, mesh.ny, o.y, o.y + mesh.height),
            mesh,
        })
    }

    pub fn n_x(&self) -> usize {
        self.mesh.nx + self.degree
    }

    pub fn n_y(&self) -> usize {
        self.mesh.ny + self.degree
    }

    /// Number of scalar basis functions.
    pub fn dim(&self) -> usize {
        self.n_x() * self.n_y()
    }

    pub fn n_dofs(&self) -> usize {
        2 * self.dim()
    }

    pub fn index(&self, a: usize, b: usize) -> usize {
        b * self.n_x() + a
    }

    /// `(a, b)` of a basis index.
    pub fn position(&self, index: usize) -> (usize, usize) {
        (index % self.n_x(), index / self.n_x())
    }

    /// Cells `(i0..=i1, j0..=j1)` on which basis `index` is nonzero.
    pub fn support(&self, index: usize) -> ((usize, usize), (usize, usize)) {
        let (a, b) = self.position(index);
        let p = self.degree;
        (
            (a.saturating_sub(p), a.min(self.mesh.nx - 1)),
            (b.saturating_sub(p), b.min(self.mesh.ny - 1)),
        )
    }

    /// Cell containing `pt`, clamped to the mesh.
    pub fn locate(&self, pt: Point2) -> (usize, usize) {
        let m = &self.mesh;
        let fx = ((pt.x - m.origin.x) / m.hx()).floor();
        let fy = ((pt.y - m.origin.y) / m.hy()).floor();
        let i = fx.clamp(0.0, (m.nx - 1) as f64) as usize;
        let j = fy.clamp(0.0, (m.ny - 1) as f64) as usize;
        (i, j)
    }

    /// Values and gradients of the `(p+1)²` basis functions that live on
    /// cell `(i, j)`, evaluated at `pt`.
    pub fn eval_in_cell(&self, i: usize, j: usize, pt: Point2) -> Vec<BasisValue> {
        let p = self.degree;
        let bx = basis_derivatives(&self.knots_x, p, i + p, pt.x, 1);
        let by = basis_derivatives(&self.knots_y, p, j + p, pt.y, 1);
        let mut out = Vec::with_capacity((p + 1) * (p + 1));
        for b in 0..=p {
            for a in 0..=p {
                out.push(BasisValue {
                    index: self.index(i + a, j + b),
                    value: bx[0][a] * by[0][b],
                    grad: Vec2::new(bx[1][a] * by[0][b], bx[0][a] * by[1][b]),
                });
            }
        }
        out
    }

    pub fn eval(&self, pt: Point2) -> Vec<BasisValue> {
        let (i, j) = self.locate(pt);
        self.eval_in_cell(i, j, pt)
    }

    /// Values of the `p + 1` univariate basis functions of one axis that live
    /// on its cell `cell`; the first one has index `cell`.
    pub(crate) fn eval_1d(&self, along_x: bool, cell: usize, t: f64) -> Vec<f64> {
        let knots = if along_x { &self.knots_x } else { &self.knots_y };
        basis_derivatives(knots, self.degree, cell + self.degree, t, 0).swap_remove(0)
    }
}

/// Spline displacement: two coefficients per basis function.
#[derive(Debug, Clone, PartialEq)]
pub struct DisplacementField {
    pub coeffs: Vec<f64>,
}

impl DisplacementField {
    pub fn zeros(space: &BsplineSpace) -> Self {
        DisplacementField {
            coeffs: vec![0.0; space.n_dofs()],
        }
    }

    pub fn eval_in_cell(&self, space: &BsplineSpace, i: usize, j: usize, pt: Point2) -> [f64; 2] {
        let mut u = [0.0; 2];
        for b in space.eval_in_cell(i, j, pt) {
            u[0] += b.value * self.coeffs[2 * b.index];
            u[1] += b.value * self.coeffs[2 * b.index + 1];
        }
        u
    }

    pub fn eval(&self, space: &BsplineSpace, pt: Point2) -> [f64; 2] {
        let (i, j) = space.locate(pt);
        self.eval_in_cell(space, i, j, pt)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_of_unity() {
        let space = BsplineSpace::new(BackgroundMesh::unit_square(4).unwrap(), 2).unwrap();
        assert_eq!(space.dim(), 36);
        for pt in [Point2::new(0.1, 0.9), Point2::new(0.5, 0.5), Point2::new(1.0, 0.0), Point2::new(0.33, 0.77)] {
            let vals = space.eval(pt);
            let s: f64 = vals.iter().map(|b| b.value).sum();
            let g = vals.iter().fold(Vec2::new(0.0, 0.0), |acc, b| acc + b.grad);
            assert!((s - 1.0).abs() < 1e-14);
            assert!(g.norm() < 1e-12);
            assert!(vals.iter().all(|b| b.value >= -1e-15));
        }
    }

    #[test]
    fn support_of_corner_and_interior_basis() {
        let space = BsplineSpace::new(BackgroundMesh::unit_square(4).unwrap(), 2).unwrap();
        assert_eq!(space.support(0), ((0, 0), (0, 0)));
        assert_eq!(space.support(space.index(3, 2)), ((1, 3), (0, 2)));
        assert_eq!(space.support(space.index(5, 5)), ((3, 3), (3, 3)));
    }

    #[test]
    fn linear_field_is_reproduced() {
        // Greville abscissae interpolate linear functions exactly
        let space = BsplineSpace::new(BackgroundMesh::unit_square(3).unwrap(), 2).unwrap();
        let knot = |i: usize| ((i as f64 - 2.0) / 3.0).clamp(0.0, 1.0);
        let greville = |k: usize| 0.5 * (knot(k + 1) + knot(k + 2));
        let mut field = DisplacementField::zeros(&space);
        for b in 0..space.n_y() {
            for a in 0..space.n_x() {
                let idx = space.index(a, b);
                field.coeffs[2 * idx] = 2.0 * greville(a) - greville(b);
                field.coeffs[2 * idx + 1] = 0.5;
            }
        }
        let u = field.eval(&space, Point2::new(0.41, 0.87));
        assert!((u[0] - (0.82 - 0.87)).abs() < 1e-14);
        assert!((u[1] - 0.5).abs() < 1e-14);
    }
}
