use super::{CurveSegment, Point2, Vec2};
use crate::error::{Error, Result};
use crate::gauss::GaussRule;
use crate::polytools::Bernstein1D;

/// One polynomial piece of a rational boundary curve in homogeneous Bernstein
/// form: the point at `t` is `(wx(t) / w(t), wy(t) / w(t))`.
#[derive(Debug, Clone, PartialEq)]
pub struct BezierSpan {
    pub wx: Bernstein1D,
    pub wy: Bernstein1D,
    pub w: Bernstein1D,
    /// Numerators of the derivative components: `x'(t) = dx(t) / w(t)²`.
    pub dx: Bernstein1D,
    pub dy: Bernstein1D,
}

impl BezierSpan {
    fn from_segment_span(seg: &CurveSegment, span: usize, t0: f64, t1: f64) -> Result<Self> {
        let p = seg.curve.degree();
        let c = &seg.curve;
        // the span polynomial is exact on any sub-interval, so interpolate there
        let comp = |k: usize| Bernstein1D::interpolate(|t| c.span_homogeneous(span, t)[k], t0, t1, p);
        let (wx, wy, w) = (comp(0)?, comp(1)?, comp(2)?);
        let (dwx, dwy, dw) = (wx.derivative(), wy.derivative(), w.derivative());
        let dx = dwx.mul(&w).axpy(-1.0, &wx.mul(&dw));
        let dy = dwy.mul(&w).axpy(-1.0, &wy.mul(&dw));
        Ok(BezierSpan { wx, wy, w, dx, dy })
    }

    pub fn interval(&self) -> (f64, f64) {
        self.w.interval()
    }

    pub fn point(&self, t: f64) -> Point2 {
        let w = self.w.eval(t);
        Point2::new(self.wx.eval(t) / w, self.wy.eval(t) / w)
    }

    pub fn derivative(&self, t: f64) -> Vec2 {
        let w = self.w.eval(t);
        let w2 = w * w;
        Vec2::new(self.dx.eval(t) / w2, self.dy.eval(t) / w2)
    }

    pub fn start_point(&self) -> Point2 {
        self.point(self.interval().0)
    }

    pub fn end_point(&self) -> Point2 {
        self.point(self.interval().1)
    }
}

/// Region bounded by a closed loop of NURBS segments.
///
/// The loop is stored counterclockwise. With `exterior` set the retained
/// region is the complement of the enclosed one.
#[derive(Debug, Clone)]
pub struct ParametricRegion {
    segments: Vec<CurveSegment>,
    spans: Vec<BezierSpan>,
    exterior: bool,
}

impl ParametricRegion {
    /// Builds a region from segments that form one closed loop in order.
    /// Clockwise loops are reversed.
    pub fn new(segments: Vec<CurveSegment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::Geometry("boundary loop needs at least one segment".into()));
        }
        let size = segments
            .iter()
            .flat_map(|s| s.curve.control_points().iter())
            .fold(0.0f64, |m, p| m.max(p.x.abs()).max(p.y.abs()))
            .max(1.0);
        let tol = 1e-9 * size;
        for k in 0..segments.len() {
            let end = segments[k].end_point();
            let next = segments[(k + 1) % segments.len()].start_point();
            if end.dist(next) > tol {
                return Err(Error::Geometry(format!(
                    "boundary loop is not closed: segment {k} ends at ({}, {}) but the next starts at ({}, {})",
                    end.x, end.y, next.x, next.y
                )));
            }
        }
        let mut region = ParametricRegion {
            spans: build_spans(&segments)?,
            segments,
            exterior: false,
        };
        let area = region.enclosed_signed_area();
        if !(area.abs() > 0.0) {
            return Err(Error::Geometry("boundary loop encloses no area".into()));
        }
        if area < 0.0 {
            region.segments = region.segments.iter().rev().map(CurveSegment::reversed).collect();
            region.spans = build_spans(&region.segments)?;
        }
        Ok(region)
    }

    /// The same loop retaining the other side.
    pub fn complement(&self) -> Self {
        ParametricRegion {
            exterior: !self.exterior,
            ..self.clone()
        }
    }

    pub fn is_exterior(&self) -> bool {
        self.exterior
    }

    /// Segments of the counterclockwise loop.
    pub fn segments(&self) -> &[CurveSegment] {
        &self.segments
    }

    /// Polynomial pieces of the counterclockwise loop, in loop order.
    pub fn loop_spans(&self) -> &[BezierSpan] {
        &self.spans
    }

    /// Polynomial pieces oriented with the retained region on their left.
    pub fn boundary_spans(&self) -> Vec<BezierSpan> {
        if !self.exterior {
            return self.spans.clone();
        }
        self.spans.iter().rev().map(reverse_span).collect()
    }

    /// Area enclosed by the loop (positive).
    pub fn enclosed_area(&self) -> f64 {
        self.enclosed_signed_area().abs()
    }

    fn enclosed_signed_area(&self) -> f64 {
        // 1/2 ∮ (x dy - y dx), exact for the polynomial pieces once the
        // rule degree covers the rational integrand closely enough
        let g = GaussRule::new(24);
        let mut a = 0.0;
        for s in &self.spans {
            let (t0, t1) = s.interval();
            for (t, w) in g.mapped(t0, t1) {
                let p = s.point(t);
                let d = s.derivative(t);
                a += 0.5 * w * p.cross(d);
            }
        }
        a
    }

    /// Winding number of the counterclockwise loop around `p`.
    pub fn winding_number(&self, p: Point2) -> i64 {
        let mut total = 0.0;
        for s in &self.spans {
            let (t0, t1) = s.interval();
            total += angle_sweep(s, p, t0, t1, 0);
        }
        (total / std::f64::consts::TAU).round() as i64
    }

    pub fn contains(&self, p: Point2) -> bool {
        (self.winding_number(p) != 0) != self.exterior
    }
}

pub(crate) fn build_spans(segments: &[CurveSegment]) -> Result<Vec<BezierSpan>> {
    let mut out = Vec::new();
    for seg in segments {
        for (s, k0, k1) in seg.curve.spans() {
            let (t0, t1) = (k0.max(seg.a), k1.min(seg.b));
            if t1 > t0 {
                out.push(BezierSpan::from_segment_span(seg, s, t0, t1)?);
            }
        }
    }
    Ok(out)
}

/// The same piece traversed backwards, reparametrized on the same interval.
fn reverse_span(s: &BezierSpan) -> BezierSpan {
    let (t0, t1) = s.interval();
    let flip = |b: &Bernstein1D| {
        let mut c = b.coeffs().to_vec();
        c.reverse();
        Bernstein1D::from_parts(c, t0, t1)
    };
    let (wx, wy, w) = (flip(&s.wx), flip(&s.wy), flip(&s.w));
    // derivative numerators change sign under t -> t0 + t1 - t
    let neg = |b: &Bernstein1D| {
        let mut c: Vec<f64> = b.coeffs().iter().rev().map(|v| -v).collect();
        if c.is_empty() {
            c.push(0.0);
        }
        Bernstein1D::from_parts(c, t0, t1)
    };
    BezierSpan {
        dx: neg(&s.dx),
        dy: neg(&s.dy),
        wx,
        wy,
        w,
    }
}

/// Angle swept by the curve piece as seen from `p`, refined until each step
/// turns by less than a quarter radian.
fn angle_sweep(s: &BezierSpan, p: Point2, a: f64, b: f64, depth: u32) -> f64 {
    let va = s.point(a) - p;
    let vb = s.point(b) - p;
    let ang = va.cross(vb).atan2(va.dot(vb));
    if depth >= 40 || (ang.abs() < 0.25 && depth >= 2) {
        return ang;
    }
    let m = 0.5 * (a + b);
    angle_sweep(s, p, a, m, depth + 1) + angle_sweep(s, p, m, b, depth + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::NurbsCurve;
    use std::f64::consts::PI;

    fn unit_square_loop() -> Vec<CurveSegment> {
        let pts = [
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
        ];
        (0..4).map(|k| CurveSegment::line(pts[k], pts[(k + 1) % 4])).collect()
    }

    #[test]
    fn circle_area_and_membership() {
        let c = NurbsCurve::circle(Point2::new(0.5, 0.5), 0.2).unwrap();
        let r = ParametricRegion::new(vec![CurveSegment::full(c)]).unwrap();
        assert!((r.enclosed_area() - PI * 0.04).abs() < 1e-12);
        assert!(r.contains(Point2::new(0.5, 0.6)));
        assert!(!r.contains(Point2::new(0.1, 0.1)));
        assert!(r.complement().contains(Point2::new(0.1, 0.1)));
        assert_eq!(r.loop_spans().len(), 4);
    }

    #[test]
    fn bezier_spans_match_curve() {
        let c = NurbsCurve::circle(Point2::new(0.5, 0.5), 0.2).unwrap();
        let seg = CurveSegment::new(c.clone(), 0.5, 2.25).unwrap();
        let spans = build_spans(std::slice::from_ref(&seg)).unwrap();
        assert_eq!(spans.len(), 3);
        for s in &spans {
            let (t0, t1) = s.interval();
            for k in 0..=8 {
                let t = t0 + (t1 - t0) * k as f64 / 8.0;
                assert!(s.point(t).dist(c.evaluate(t).unwrap()) < 1e-14);
                assert!(s.derivative(t).dist(c.derivative(t).unwrap()) < 1e-12);
            }
        }
    }

    #[test]
    fn clockwise_loop_is_reoriented() {
        let cw: Vec<CurveSegment> = unit_square_loop().iter().rev().map(CurveSegment::reversed).collect();
        let r = ParametricRegion::new(cw).unwrap();
        assert!((r.enclosed_signed_area() - 1.0).abs() < 1e-14);
        assert_eq!(r.winding_number(Point2::new(0.3, 0.4)), 1);
    }

    #[test]
    fn reversed_span_runs_backwards() {
        let c = NurbsCurve::circular_arc(Point2::new(0.0, 0.0), 1.0, 0.0, PI / 2.0).unwrap();
        let s = &build_spans(&[CurveSegment::full(c)]).unwrap()[0];
        let r = reverse_span(s);
        let (t0, t1) = s.interval();
        for k in 0..=4 {
            let t = t0 + (t1 - t0) * k as f64 / 4.0;
            let back = t0 + t1 - t;
            assert!(r.point(t).dist(s.point(back)) < 1e-14);
            assert!(r.derivative(t).dist(-s.derivative(back)) < 1e-13);
        }
    }

    #[test]
    fn open_loop_is_rejected() {
        let mut segs = unit_square_loop();
        segs.pop();
        assert!(ParametricRegion::new(segs).is_err());
    }

    #[test]
    fn complement_boundary_is_clockwise() {
        let r = ParametricRegion::new(unit_square_loop()).unwrap().complement();
        let spans = r.boundary_spans();
        let g = GaussRule::new(4);
        let mut a = 0.0;
        for s in &spans {
            let (t0, t1) = s.interval();
            for (t, w) in g.mapped(t0, t1) {
                a += 0.5 * w * s.point(t).cross(s.derivative(t));
            }
        }
        assert!((a + 1.0).abs() < 1e-14);
        assert!(!r.contains(Point2::new(0.5, 0.5)));
    }
}
