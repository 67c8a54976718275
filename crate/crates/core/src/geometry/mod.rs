//! Planar geometry: background mesh, NURBS curves, implicit constraints and
//! the interface description that trims the mesh.

mod implicit;
mod mesh;
mod nurbs;
mod parametric;

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

pub use implicit::{ImplicitConstraint, ImplicitRegion};
pub use mesh::{Axis, BackgroundMesh, Cell};
pub use nurbs::{CurveSegment, NurbsCurve};
pub use parametric::{BezierSpan, ParametricRegion};
pub(crate) use parametric::build_spans;

/// A point (or free vector) in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

/// Free vectors share the point representation.
pub type Vec2 = Point2;

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point2) -> f64 {
        (self - o).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn lerp(self, o: Point2, t: f64) -> Point2 {
        Point2::new(self.x + (o.x - self.x) * t, self.y + (o.y - self.y) * t)
    }

    pub fn coord(self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.x,
            Axis::Y => self.y,
        }
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Point2 {
    fn add_assign(&mut self, o: Point2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

/// The curve that trims the background mesh, given either as the zero set of
/// implicit functions or as a closed NURBS loop.
#[derive(Debug, Clone)]
pub enum InterfaceSpec {
    Implicit(ImplicitRegion),
    Parametric(ParametricRegion),
}

impl InterfaceSpec {
    /// Short backend tag used in reports.
    pub fn backend_name(&self) -> &'static str {
        match self {
            InterfaceSpec::Implicit(_) => "implicit",
            InterfaceSpec::Parametric(_) => "parametric",
        }
    }

    /// Whether `p` lies in the retained region. Points on the interface may
    /// go either way.
    pub fn contains(&self, p: Point2) -> bool {
        match self {
            InterfaceSpec::Implicit(r) => r.contains(p),
            InterfaceSpec::Parametric(r) => r.contains(p),
        }
    }
}

impl From<ImplicitRegion> for InterfaceSpec {
    fn from(r: ImplicitRegion) -> Self {
        InterfaceSpec::Implicit(r)
    }
}

impl From<ParametricRegion> for InterfaceSpec {
    fn from(r: ParametricRegion) -> Self {
        InterfaceSpec::Parametric(r)
    }
}
