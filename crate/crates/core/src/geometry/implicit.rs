use std::fmt;
use std::sync::Arc;

use super::{Point2, Vec2};
use crate::error::{Error, Result};

type ScalarFn = Arc<dyn Fn(Point2) -> f64 + Send + Sync>;
type GradientFn = Arc<dyn Fn(Point2) -> Vec2 + Send + Sync>;

/// A bivariate level-set function. The retained side is `f > 0`.
#[derive(Clone)]
pub enum ImplicitConstraint {
    /// `sign * (r² - (x - cx)² - (y - cy)²)`; `sign = +1` keeps the disc.
    Circle { center: Point2, radius: f64, sign: f64 },
    /// `sign * (c - a x - b y)`.
    HalfPlane { a: f64, b: f64, c: f64, sign: f64 },
    /// Tensor monomial form `sum_{i,j <= degree} coeffs[i * (degree + 1) + j] x^i y^j`.
    Polynomial { degree: usize, coeffs: Vec<f64> },
    /// Arbitrary smooth function with an analytic gradient.
    Function {
        label: String,
        value: ScalarFn,
        gradient: GradientFn,
    },
}

impl fmt::Debug for ImplicitConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ImplicitConstraint::Circle { center, radius, sign } => f
                .debug_struct("Circle")
                .field("center", center)
                .field("radius", radius)
                .field("sign", sign)
                .finish(),
            ImplicitConstraint::HalfPlane { a, b, c, sign } => f
                .debug_struct("HalfPlane")
                .field("a", a)
                .field("b", b)
                .field("c", c)
                .field("sign", sign)
                .finish(),
            ImplicitConstraint::Polynomial { degree, coeffs } => f
                .debug_struct("Polynomial")
                .field("degree", degree)
                .field("coeffs", coeffs)
                .finish(),
            ImplicitConstraint::Function { label, .. } => {
                f.debug_struct("Function").field("label", label).finish_non_exhaustive()
            }
        }
    }
}

impl ImplicitConstraint {
    /// Disc interior (`keep_inside = true`) or exterior.
    pub fn circle(center: Point2, radius: f64, keep_inside: bool) -> Self {
        ImplicitConstraint::Circle {
            center,
            radius,
            sign: if keep_inside { 1.0 } else { -1.0 },
        }
    }

    pub fn half_plane(a: f64, b: f64, c: f64, sign: f64) -> Self {
        ImplicitConstraint::HalfPlane { a, b, c, sign }
    }

    /// Half-plane to the left of the directed line `p -> q`, scaled so the
    /// gradient has unit length.
    pub fn left_of(p: Point2, q: Point2) -> Result<Self> {
        let d = q - p;
        let len = d.norm();
        if !(len > 0.0) {
            return Err(Error::Geometry("half-plane needs two distinct points".into()));
        }
        // f = cross(d, x - p) / |d| = (-d.y x + d.x y + d.y p.x - d.x p.y) / |d|
        let (a, b) = (d.y / len, -d.x / len);
        let c = (d.y * p.x - d.x * p.y) / len;
        Ok(ImplicitConstraint::HalfPlane { a, b, c, sign: 1.0 })
    }

    pub fn polynomial(degree: usize, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != (degree + 1) * (degree + 1) {
            return Err(Error::Geometry(format!(
                "polynomial of coordinate degree {degree} needs {} coefficients, got {}",
                (degree + 1) * (degree + 1),
                coeffs.len()
            )));
        }
        Ok(ImplicitConstraint::Polynomial { degree, coeffs })
    }

    pub fn function<F, G>(label: impl Into<String>, value: F, gradient: G) -> Self
    where
        F: Fn(Point2) -> f64 + Send + Sync + 'static,
        G: Fn(Point2) -> Vec2 + Send + Sync + 'static,
    {
        ImplicitConstraint::Function {
            label: label.into(),
            value: Arc::new(value),
            gradient: Arc::new(gradient),
        }
    }

    /// Per-coordinate polynomial degree, when the constraint is a polynomial.
    pub fn natural_degree(&self) -> Option<usize> {
        match self {
            ImplicitConstraint::Circle { .. } => Some(2),
            ImplicitConstraint::HalfPlane { .. } => Some(1),
            ImplicitConstraint::Polynomial { degree, .. } => Some((*degree).max(1)),
            ImplicitConstraint::Function { .. } => None,
        }
    }

    pub fn value(&self, p: Point2) -> f64 {
        match self {
            ImplicitConstraint::Circle { center, radius, sign } => {
                let dx = p.x - center.x;
                let dy = p.y - center.y;
                sign * (radius * radius - dx * dx - dy * dy)
            }
            ImplicitConstraint::HalfPlane { a, b, c, sign } => sign * (c - a * p.x - b * p.y),
            ImplicitConstraint::Polynomial { degree, coeffs } => {
                let d = *degree;
                let mut acc = 0.0;
                for i in (0..=d).rev() {
                    let mut row = 0.0;
                    for j in (0..=d).rev() {
                        row = row * p.y + coeffs[i * (d + 1) + j];
                    }
                    acc = acc * p.x + row;
                }
                acc
            }
            ImplicitConstraint::Function { value, .. } => value(p),
        }
    }

    pub fn gradient(&self, p: Point2) -> Vec2 {
        match self {
            ImplicitConstraint::Circle { center, sign, .. } => {
                Vec2::new(-2.0 * sign * (p.x - center.x), -2.0 * sign * (p.y - center.y))
            }
            ImplicitConstraint::HalfPlane { a, b, sign, .. } => Vec2::new(-sign * a, -sign * b),
            ImplicitConstraint::Polynomial { degree, coeffs } => {
                let d = *degree;
                let (mut gx, mut gy) = (0.0, 0.0);
                for i in 0..=d {
                    for j in 0..=d {
                        let c = coeffs[i * (d + 1) + j];
                        if c == 0.0 {
                            continue;
                        }
                        if i > 0 {
                            gx += c * i as f64 * p.x.powi(i as i32 - 1) * p.y.powi(j as i32);
                        }
                        if j > 0 {
                            gy += c * j as f64 * p.x.powi(i as i32) * p.y.powi(j as i32 - 1);
                        }
                    }
                }
                Vec2::new(gx, gy)
            }
            ImplicitConstraint::Function { gradient, .. } => gradient(p),
        }
    }

    /// The constraint with the retained side flipped.
    pub fn negated(&self) -> ImplicitConstraint {
        match self {
            ImplicitConstraint::Circle { center, radius, sign } => ImplicitConstraint::Circle {
                center: *center,
                radius: *radius,
                sign: -sign,
            },
            ImplicitConstraint::HalfPlane { a, b, c, sign } => ImplicitConstraint::HalfPlane {
                a: *a,
                b: *b,
                c: *c,
                sign: -sign,
            },
            ImplicitConstraint::Polynomial { degree, coeffs } => ImplicitConstraint::Polynomial {
                degree: *degree,
                coeffs: coeffs.iter().map(|c| -c).collect(),
            },
            ImplicitConstraint::Function { label, value, gradient } => {
                let (v, g) = (value.clone(), gradient.clone());
                ImplicitConstraint::Function {
                    label: format!("-({label})"),
                    value: Arc::new(move |p| -v(p)),
                    gradient: Arc::new(move |p| -g(p)),
                }
            }
        }
    }
}

/// Intersection of the positive sides of one or more constraints.
#[derive(Debug, Clone)]
pub struct ImplicitRegion {
    constraints: Vec<ImplicitConstraint>,
}

impl ImplicitRegion {
    pub fn new(constraints: Vec<ImplicitConstraint>) -> Result<Self> {
        if constraints.is_empty() {
            return Err(Error::Geometry("implicit region needs at least one constraint".into()));
        }
        Ok(ImplicitRegion { constraints })
    }

    pub fn single(c: ImplicitConstraint) -> Self {
        ImplicitRegion { constraints: vec![c] }
    }

    pub fn constraints(&self) -> &[ImplicitConstraint] {
        &self.constraints
    }

    pub fn contains(&self, p: Point2) -> bool {
        self.constraints.iter().all(|c| c.value(p) > 0.0)
    }
}
