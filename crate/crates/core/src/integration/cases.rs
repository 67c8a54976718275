use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::{
    CurveSegment, ImplicitConstraint, ImplicitRegion, InterfaceSpec, NurbsCurve, ParametricRegion, Point2,
};

/// How the interface is described to the quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    Implicit,
    Parametric,
}

impl Backend {
    pub const ALL: [Backend; 2] = [Backend::Implicit, Backend::Parametric];

    pub fn name(self) -> &'static str {
        match self {
            Backend::Implicit => "implicit",
            Backend::Parametric => "parametric",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "implicit" => Ok(Backend::Implicit),
            "parametric" => Ok(Backend::Parametric),
            _ => Err(Error::Domain(format!("unknown backend '{s}'"))),
        }
    }
}

/// Built-in geometries on the unit square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Case {
    /// Disc of radius 0.2 centered at (0.5, 0.5).
    Circle,
    /// Half of a radius-0.25 disc centered at (0.1768, 0.1768), cut along
    /// the diameter on the line `x + y = 0.3536` and keeping the half away
    /// from the origin.
    Semicircle,
    /// `x < 0.37`.
    Line,
    /// Triangle (0,0), (0.5,0), (0,0.5).
    Triangle,
    /// Quarter of a plate with a circular hole of radius 0.25 at the origin.
    PlateHole,
    /// `y < 0.75`.
    SquarePlate,
}

/// Position of the trimming line in [`Case::Line`].
pub const LINE_CASE_POSITION: f64 = 0.37;

const CIRCLE_CENTER: Point2 = Point2 { x: 0.5, y: 0.5 };
const CIRCLE_RADIUS: f64 = 0.2;
const SEMI_CENTER: Point2 = Point2 { x: 0.1768, y: 0.1768 };
const SEMI_RADIUS: f64 = 0.25;
const HOLE_RADIUS: f64 = 0.25;
const PLATE_TOP: f64 = 0.75;

impl Case {
    pub const ALL: [Case; 6] = [
        Case::Circle,
        Case::Semicircle,
        Case::Line,
        Case::Triangle,
        Case::PlateHole,
        Case::SquarePlate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Case::Circle => "circle",
            Case::Semicircle => "semicircle",
            Case::Line => "line",
            Case::Triangle => "triangle",
            Case::PlateHole => "plate-hole",
            Case::SquarePlate => "square-plate",
        }
    }

    /// Exact area of the retained region.
    pub fn reference_area(self) -> f64 {
        match self {
            Case::Circle => PI * CIRCLE_RADIUS * CIRCLE_RADIUS,
            Case::Semicircle => 0.5 * PI * SEMI_RADIUS * SEMI_RADIUS,
            Case::Line => LINE_CASE_POSITION,
            Case::Triangle => 0.125,
            Case::PlateHole => 1.0 - 0.25 * PI * HOLE_RADIUS * HOLE_RADIUS,
            Case::SquarePlate => PLATE_TOP,
        }
    }

    pub fn interface(self, backend: Backend) -> Result<InterfaceSpec> {
        match self {
            Case::Circle => match backend {
                Backend::Implicit => {
                    Ok(ImplicitRegion::single(ImplicitConstraint::circle(CIRCLE_CENTER, CIRCLE_RADIUS, true)).into())
                }
                Backend::Parametric => {
                    let c = NurbsCurve::circle(CIRCLE_CENTER, CIRCLE_RADIUS)?;
                    Ok(ParametricRegion::new(vec![CurveSegment::full(c)])?.into())
                }
            },
            Case::Semicircle => semicircle(backend),
            Case::Line => line_interface(LINE_CASE_POSITION, backend),
            Case::Triangle => triangle_interface(0.0, backend),
            Case::PlateHole => plate_hole(backend),
            Case::SquarePlate => rectangle(1.0, PLATE_TOP, backend, || {
                ImplicitConstraint::half_plane(0.0, 1.0, PLATE_TOP, 1.0)
            }),
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Case {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Case::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown case '{s}'")))
    }
}

fn polygon_loop(pts: &[Point2]) -> Result<ParametricRegion> {
    let n = pts.len();
    ParametricRegion::new((0..n).map(|k| CurveSegment::line(pts[k], pts[(k + 1) % n])).collect())
}

/// `[0, w] x [0, h]`, with the implicit side given by `trim`.
fn rectangle(w: f64, h: f64, backend: Backend, trim: impl Fn() -> ImplicitConstraint) -> Result<InterfaceSpec> {
    match backend {
        Backend::Implicit => Ok(ImplicitRegion::single(trim()).into()),
        Backend::Parametric => Ok(polygon_loop(&[
            Point2::new(0.0, 0.0),
            Point2::new(w, 0.0),
            Point2::new(w, h),
            Point2::new(0.0, h),
        ])?
        .into()),
    }
}

/// Region `x < x_line` of the unit square.
pub fn line_interface(x_line: f64, backend: Backend) -> Result<InterfaceSpec> {
    if !(x_line > 0.0 && x_line <= 1.0) {
        return Err(Error::Domain(format!("line position must lie in (0, 1], got {x_line}")));
    }
    rectangle(x_line, 1.0, backend, || ImplicitConstraint::half_plane(1.0, 0.0, x_line, 1.0))
}

/// Triangle (0,0), (0.5,0), (0.5 sin α, 0.5 cos α): the apex starts at
/// (0, 0.5) and turns clockwise about the origin by `alpha` radians.
pub fn triangle_interface(alpha: f64, backend: Backend) -> Result<InterfaceSpec> {
    if !(alpha >= 0.0 && alpha < FRAC_PI_2) {
        return Err(Error::Domain(format!("triangle angle must lie in [0, π/2), got {alpha}")));
    }
    let v = [
        Point2::new(0.0, 0.0),
        Point2::new(0.5, 0.0),
        Point2::new(0.5 * alpha.sin(), 0.5 * alpha.cos()),
    ];
    match backend {
        Backend::Implicit => Ok(ImplicitRegion::new(
            (0..3)
                .map(|k| ImplicitConstraint::left_of(v[k], v[(k + 1) % 3]))
                .collect::<Result<Vec<_>>>()?,
        )?
        .into()),
        Backend::Parametric => Ok(polygon_loop(&v)?.into()),
    }
}

fn semicircle(backend: Backend) -> Result<InterfaceSpec> {
    match backend {
        Backend::Implicit => Ok(ImplicitRegion::new(vec![
            ImplicitConstraint::half_plane(1.0, 1.0, SEMI_CENTER.x + SEMI_CENTER.y, -1.0),
            ImplicitConstraint::circle(SEMI_CENTER, SEMI_RADIUS, true),
        ])?
        .into()),
        Backend::Parametric => {
            let arc = NurbsCurve::circular_arc(SEMI_CENTER, SEMI_RADIUS, -FRAC_PI_4, PI)?;
            let diameter = CurveSegment::line(arc.end_point(), arc.start_point());
            Ok(ParametricRegion::new(vec![CurveSegment::full(arc), diameter])?.into())
        }
    }
}

fn plate_hole(backend: Backend) -> Result<InterfaceSpec> {
    let r = HOLE_RADIUS;
    match backend {
        Backend::Implicit => {
            Ok(ImplicitRegion::single(ImplicitConstraint::circle(Point2::new(0.0, 0.0), r, false)).into())
        }
        Backend::Parametric => {
            let pts = [
                Point2::new(r, 0.0),
                Point2::new(1.0, 0.0),
                Point2::new(1.0, 1.0),
                Point2::new(0.0, 1.0),
                Point2::new(0.0, r),
            ];
            let mut segs: Vec<CurveSegment> = pts.windows(2).map(|w| CurveSegment::line(w[0], w[1])).collect();
            let arc = NurbsCurve::circular_arc(Point2::new(0.0, 0.0), r, FRAC_PI_2, -FRAC_PI_2)?;
            segs.push(CurveSegment::full(arc));
            Ok(ParametricRegion::new(segs)?.into())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for c in Case::ALL {
            assert_eq!(c.name().parse::<Case>().unwrap(), c);
        }
        for b in Backend::ALL {
            assert_eq!(b.to_string().parse::<Backend>().unwrap(), b);
        }
        assert!("hexagon".parse::<Case>().is_err());
    }

    #[test]
    fn backends_agree_on_membership() {
        let probes = [
            Point2::new(0.5, 0.5),
            Point2::new(0.62, 0.41),
            Point2::new(0.2, 0.2),
            Point2::new(0.05, 0.3),
            Point2::new(0.3, 0.05),
            Point2::new(0.9, 0.8),
            Point2::new(0.1, 0.1),
            Point2::new(0.36, 0.9),
        ];
        for c in Case::ALL {
            let a = c.interface(Backend::Implicit).unwrap();
            let b = c.interface(Backend::Parametric).unwrap();
            for p in probes {
                assert_eq!(a.contains(p), b.contains(p), "{c} at ({}, {})", p.x, p.y);
            }
        }
    }

    #[test]
    fn parametric_loops_enclose_reference_area() {
        for c in Case::ALL {
            let InterfaceSpec::Parametric(r) = c.interface(Backend::Parametric).unwrap() else {
                unreachable!()
            };
            assert!((r.enclosed_area() - c.reference_area()).abs() < 1e-12, "{c}");
        }
    }

    #[test]
    fn triangle_rejects_right_angle() {
        assert!(triangle_interface(FRAC_PI_2, Backend::Implicit).is_err());
        assert!(line_interface(0.0, Backend::Parametric).is_err());
    }
}
