use std::f64::consts::FRAC_1_SQRT_2;

use super::Point2;
use crate::bspline;
use crate::error::{Error, Result};

/// A planar NURBS curve with an open knot vector.
#[derive(Debug, Clone, PartialEq)]
pub struct NurbsCurve {
    degree: usize,
    knots: Vec<f64>,
    control_points: Vec<Point2>,
    weights: Vec<f64>,
}

impl NurbsCurve {
    pub fn new(
        degree: usize,
        knots: Vec<f64>,
        control_points: Vec<Point2>,
        weights: Vec<f64>,
    ) -> Result<Self> {
        let n = control_points.len();
        if degree < 1 {
            return Err(Error::Geometry("degree must be at least 1".into()));
        }
        if n < degree + 1 {
            return Err(Error::Geometry(format!(
                "degree {degree} needs at least {} control points, got {n}",
                degree + 1
            )));
        }
        if weights.len() != n {
            return Err(Error::Geometry(format!(
                "{} weights for {n} control points",
                weights.len()
            )));
        }
        if knots.len() != n + degree + 1 {
            return Err(Error::Geometry(format!(
                "knot vector has {} entries, expected {}",
                knots.len(),
                n + degree + 1
            )));
        }
        if knots.iter().any(|k| !k.is_finite()) || knots.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Geometry("knots must be finite and nondecreasing".into()));
        }
        let first = knots[0];
        let last = knots[knots.len() - 1];
        if knots[..=degree].iter().any(|&k| k != first) || knots[n..].iter().any(|&k| k != last) {
            return Err(Error::Geometry(format!(
                "knot vector must be open (end knots repeated {} times)",
                degree + 1
            )));
        }
        if last <= first {
            return Err(Error::Geometry("knot range is empty".into()));
        }
        if weights.iter().any(|&w| !(w > 0.0 && w.is_finite())) {
            return Err(Error::Geometry("weights must be positive".into()));
        }
        if control_points.iter().any(|p| !p.is_finite()) {
            return Err(Error::Geometry("control points must be finite".into()));
        }
        Ok(NurbsCurve {
            degree,
            knots,
            control_points,
            weights,
        })
    }

    /// Degree-1 curve from `a` to `b` on the parameter range `[0, 1]`.
    pub fn line(a: Point2, b: Point2) -> Self {
        NurbsCurve {
            degree: 1,
            knots: vec![0.0, 0.0, 1.0, 1.0],
            control_points: vec![a, b],
            weights: vec![1.0, 1.0],
        }
    }

    /// Closed polyline through `points` (first point not repeated), one span
    /// per edge.
    pub fn polygon(points: &[Point2]) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::Geometry("polygon needs at least three vertices".into()));
        }
        let n = points.len() + 1;
        let mut knots = vec![0.0, 0.0];
        knots.extend((1..n - 1).map(|k| k as f64));
        knots.extend([(n - 1) as f64; 2]);
        let mut cps = points.to_vec();
        cps.push(points[0]);
        NurbsCurve::new(1, knots, cps, vec![1.0; n])
    }

    /// Exact circular arc as a rational quadratic made of quarter-turn (or
    /// shorter) pieces. `sweep` is signed: positive is counterclockwise.
    pub fn circular_arc(center: Point2, radius: f64, start: f64, sweep: f64) -> Result<Self> {
        if !(radius > 0.0) || sweep == 0.0 || !sweep.is_finite() {
            return Err(Error::Geometry("arc needs positive radius and nonzero sweep".into()));
        }
        let pieces = (sweep.abs() / std::f64::consts::FRAC_PI_2 - 1e-12).ceil().max(1.0) as usize;
        let dtheta = sweep / pieces as f64;
        let w_mid = (0.5 * dtheta).cos();
        let on = |a: f64| Point2::new(center.x + radius * a.cos(), center.y + radius * a.sin());
        let mut cps = vec![on(start)];
        let mut weights = vec![1.0];
        let mut knots = vec![0.0; 3];
        for k in 0..pieces {
            let a0 = start + dtheta * k as f64;
            let am = a0 + 0.5 * dtheta;
            let r_mid = radius / w_mid;
            cps.push(Point2::new(center.x + r_mid * am.cos(), center.y + r_mid * am.sin()));
            weights.push(w_mid);
            cps.push(on(a0 + dtheta));
            weights.push(1.0);
            if k + 1 < pieces {
                knots.extend([(k + 1) as f64; 2]);
            }
        }
        knots.extend([pieces as f64; 3]);
        NurbsCurve::new(2, knots, cps, weights)
    }

    /// The canonical 9-control-point full circle (four quarter arcs starting
    /// at angle 0, counterclockwise).
    pub fn circle(center: Point2, radius: f64) -> Result<Self> {
        let (cx, cy, r) = (center.x, center.y, radius);
        let w = FRAC_1_SQRT_2;
        let cps = vec![
            Point2::new(cx + r, cy),
            Point2::new(cx + r, cy + r),
            Point2::new(cx, cy + r),
            Point2::new(cx - r, cy + r),
            Point2::new(cx - r, cy),
            Point2::new(cx - r, cy - r),
            Point2::new(cx, cy - r),
            Point2::new(cx + r, cy - r),
            Point2::new(cx + r, cy),
        ];
        let weights = vec![1.0, w, 1.0, w, 1.0, w, 1.0, w, 1.0];
        let knots = vec![0.0, 0.0, 0.0, 1.0, 1.0, 2.0, 2.0, 3.0, 3.0, 4.0, 4.0, 4.0];
        NurbsCurve::new(2, knots, cps, weights)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn control_points(&self) -> &[Point2] {
        &self.control_points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Parameter range `[first knot, last knot]`.
    pub fn range(&self) -> (f64, f64) {
        (self.knots[0], self.knots[self.knots.len() - 1])
    }

    pub fn start_point(&self) -> Point2 {
        self.control_points[0]
    }

    pub fn end_point(&self) -> Point2 {
        self.control_points[self.control_points.len() - 1]
    }

    /// Distinct knot values; consecutive pairs are the nonempty spans.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b = self.knots.clone();
        b.dedup();
        b
    }

    fn check_param(&self, xi: f64) -> Result<()> {
        let (a, b) = self.range();
        let slack = 1e-12 * (b - a);
        if !(xi >= a - slack && xi <= b + slack) {
            return Err(Error::Domain(format!("parameter {xi} outside knot range [{a}, {b}]")));
        }
        Ok(())
    }

    /// Rational basis values `R_{j,p}(xi)` for the `p + 1` functions active at
    /// `xi`, with the index of the first one.
    pub fn rational_basis(&self, xi: f64) -> Result<(usize, Vec<f64>)> {
        self.check_param(xi)?;
        let n = self.control_points.len();
        let s = bspline::find_span(&self.knots, self.degree, n, xi);
        let d = bspline::basis_derivatives(&self.knots, self.degree, s, xi, 0);
        let first = s - self.degree;
        let mut r: Vec<f64> = d[0]
            .iter()
            .enumerate()
            .map(|(k, &nk)| nk * self.weights[first + k])
            .collect();
        let w: f64 = r.iter().sum();
        r.iter_mut().for_each(|v| *v /= w);
        Ok((first, r))
    }

    /// Homogeneous value `(wx, wy, w)` and its first derivative.
    fn homogeneous(&self, xi: f64) -> ([f64; 3], [f64; 3]) {
        let n = self.control_points.len();
        let s = bspline::find_span(&self.knots, self.degree, n, xi);
        let d = bspline::basis_derivatives(&self.knots, self.degree, s, xi, 1);
        let first = s - self.degree;
        let mut val = [0.0; 3];
        let mut der = [0.0; 3];
        for k in 0..=self.degree {
            let w = self.weights[first + k];
            let p = self.control_points[first + k];
            let h = [w * p.x, w * p.y, w];
            for c in 0..3 {
                val[c] += d[0][k] * h[c];
                der[c] += d[1][k] * h[c];
            }
        }
        (val, der)
    }

    /// Nonempty knot spans as `(span index, start, end)`.
    pub(crate) fn spans(&self) -> Vec<(usize, f64, f64)> {
        (self.degree..self.control_points.len())
            .filter(|&s| self.knots[s] < self.knots[s + 1])
            .map(|s| (s, self.knots[s], self.knots[s + 1]))
            .collect()
    }

    /// Homogeneous value `(wx, wy, w)` of the polynomial piece on span `s`,
    /// which may be evaluated at (or beyond) the span ends.
    pub(crate) fn span_homogeneous(&self, s: usize, xi: f64) -> [f64; 3] {
        let d = bspline::basis_derivatives(&self.knots, self.degree, s, xi, 0);
        let first = s - self.degree;
        let mut val = [0.0; 3];
        for k in 0..=self.degree {
            let w = self.weights[first + k];
            let p = self.control_points[first + k];
            val[0] += d[0][k] * w * p.x;
            val[1] += d[0][k] * w * p.y;
            val[2] += d[0][k] * w;
        }
        val
    }

    /// Point on the curve at parameter `xi`.
    pub fn evaluate(&self, xi: f64) -> Result<Point2> {
        self.check_param(xi)?;
        let (h, _) = self.homogeneous(xi);
        Ok(Point2::new(h[0] / h[2], h[1] / h[2]))
    }

    /// Exact first derivative of the rational map (quotient rule on the
    /// homogeneous form).
    pub fn derivative(&self, xi: f64) -> Result<Point2> {
        self.check_param(xi)?;
        let (h, d) = self.homogeneous(xi);
        let w2 = h[2] * h[2];
        Ok(Point2::new(
            (d[0] * h[2] - h[0] * d[2]) / w2,
            (d[1] * h[2] - h[1] * d[2]) / w2,
        ))
    }

    /// The same geometric curve traversed backwards on the same parameter
    /// range.
    pub fn reversed(&self) -> NurbsCurve {
        let (a, b) = self.range();
        let mut knots: Vec<f64> = self.knots.iter().rev().map(|&k| a + b - k).collect();
        // keep end knots bit-exact
        let last = knots.len() - 1;
        for k in 0..=self.degree {
            knots[k] = a;
            knots[last - k] = b;
        }
        NurbsCurve {
            degree: self.degree,
            knots,
            control_points: self.control_points.iter().rev().copied().collect(),
            weights: self.weights.iter().rev().copied().collect(),
        }
    }
}

/// A parameter interval of a curve, used as one piece of a boundary loop.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSegment {
    pub curve: NurbsCurve,
    pub a: f64,
    pub b: f64,
}

impl CurveSegment {
    pub fn new(curve: NurbsCurve, a: f64, b: f64) -> Result<Self> {
        let (lo, hi) = curve.range();
        if !(a < b) || a < lo || b > hi {
            return Err(Error::Geometry(format!(
                "segment interval [{a}, {b}] must be nonempty and inside [{lo}, {hi}]"
            )));
        }
        Ok(CurveSegment { curve, a, b })
    }

    /// The whole curve as one segment.
    pub fn full(curve: NurbsCurve) -> Self {
        let (a, b) = curve.range();
        CurveSegment { curve, a, b }
    }

    pub fn line(a: Point2, b: Point2) -> Self {
        CurveSegment::full(NurbsCurve::line(a, b))
    }

    pub fn start_point(&self) -> Point2 {
        self.curve.evaluate(self.a).expect("segment start lies in range")
    }

    pub fn end_point(&self) -> Point2 {
        self.curve.evaluate(self.b).expect("segment end lies in range")
    }

    pub fn reversed(&self) -> CurveSegment {
        let (lo, hi) = self.curve.range();
        CurveSegment {
            curve: self.curve.reversed(),
            a: lo + hi - self.b,
            b: lo + hi - self.a,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn quarter_arc() -> NurbsCurve {
        let w = FRAC_1_SQRT_2;
        NurbsCurve::new(
            2,
            vec![0.0, 0.0, 0.0, 1.0, 1.0, 1.0],
            vec![
                Point2::new(0.25, 0.0),
                Point2::new(0.25, 0.25),
                Point2::new(0.0, 0.25),
            ],
            vec![1.0, w, 1.0],
        )
        .unwrap()
    }

    #[test]
    fn linear_curve_interpolates() {
        let c = NurbsCurve::line(Point2::new(0.0, 0.0), Point2::new(1.0, 1.0));
        assert_eq!(c.evaluate(0.5).unwrap(), Point2::new(0.5, 0.5));
        let d = c.derivative(0.3).unwrap();
        assert!((d.x - 1.0).abs() < 1e-15 && (d.y - 1.0).abs() < 1e-15);
    }

    #[test]
    fn quarter_arc_midpoint_lies_on_circle() {
        let c = quarter_arc();
        let p = c.evaluate(0.5).unwrap();
        let expect = 0.25 * FRAC_1_SQRT_2;
        assert!((p.x - expect).abs() < 1e-15 && (p.y - expect).abs() < 1e-15);
        assert!((p.norm() - 0.25).abs() < 1e-15);
        let t = c.derivative(0.5).unwrap();
        assert!(t.dot(p).abs() <= 1e-12);
    }

    #[test]
    fn endpoints_interpolate_control_polygon() {
        let c = NurbsCurve::circle(Point2::new(0.5, 0.5), 0.2).unwrap();
        assert_eq!(c.evaluate(0.0).unwrap(), c.control_points()[0]);
        assert_eq!(c.evaluate(4.0).unwrap(), c.control_points()[8]);
        let arc = quarter_arc();
        assert_eq!(arc.evaluate(1.0).unwrap(), Point2::new(0.0, 0.25));
    }

    #[test]
    fn parameter_out_of_range_is_a_domain_error() {
        let c = quarter_arc();
        assert!(matches!(c.evaluate(1.5), Err(Error::Domain(_))));
        assert!(matches!(c.derivative(-0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn rational_basis_is_a_nonnegative_partition_of_unity() {
        let c = NurbsCurve::circle(Point2::new(0.0, 0.0), 1.0).unwrap();
        for k in 0..1000 {
            let xi = 4.0 * k as f64 / 999.0;
            let (_, r) = c.rational_basis(xi).unwrap();
            assert!(r.iter().all(|&v| v >= -1e-15));
            assert!((r.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn full_circle_has_constant_radius() {
        let center = Point2::new(0.5, 0.5);
        let c = NurbsCurve::circle(center, 0.2).unwrap();
        for k in 0..=1000 {
            let p = c.evaluate(4.0 * k as f64 / 1000.0).unwrap();
            assert!(((p - center).norm() - 0.2).abs() <= 1e-12);
        }
    }

    #[test]
    fn derivative_matches_central_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let curves = [
            NurbsCurve::circle(Point2::new(0.3, -0.2), 0.7).unwrap(),
            quarter_arc(),
            NurbsCurve::new(
                3,
                vec![0.0, 0.0, 0.0, 0.0, 0.4, 1.0, 1.0, 1.0, 1.0],
                vec![
                    Point2::new(0.0, 0.0),
                    Point2::new(0.2, 0.5),
                    Point2::new(0.6, 0.4),
                    Point2::new(0.8, -0.1),
                    Point2::new(1.0, 0.3),
                ],
                vec![1.0, 0.6, 1.7, 0.9, 1.0],
            )
            .unwrap(),
        ];
        let h = 1e-6;
        for c in &curves {
            let (a, b) = c.range();
            for _ in 0..100 {
                let xi = rng.gen_range(a + 2.0 * h..b - 2.0 * h);
                // stay inside one span so the difference sees a smooth map
                let br = c.breakpoints();
                if br.iter().any(|&k| (k - xi).abs() < 2.0 * h) {
                    continue;
                }
                let d = c.derivative(xi).unwrap();
                let fd = (c.evaluate(xi + h).unwrap() - c.evaluate(xi - h).unwrap()) * (0.5 / h);
                assert!((d - fd).norm() <= 1e-6, "xi={xi} d={d:?} fd={fd:?}");
            }
        }
    }

    #[test]
    fn reversal_traces_the_same_points_backwards() {
        let c = NurbsCurve::circular_arc(Point2::new(0.1, 0.2), 0.3, 0.4, 2.5).unwrap();
        let r = c.reversed();
        let (a, b) = c.range();
        for k in 0..=20 {
            let t = a + (b - a) * k as f64 / 20.0;
            let p = c.evaluate(t).unwrap();
            let q = r.evaluate(a + b - t).unwrap();
            assert!((p - q).norm() < 1e-14);
        }
    }

    #[test]
    fn arc_builder_stays_on_circle() {
        let center = Point2::new(0.1768, 0.1768);
        let c = NurbsCurve::circular_arc(center, 0.25, -0.25 * std::f64::consts::PI, std::f64::consts::PI)
            .unwrap();
        assert_eq!(c.breakpoints().len(), 3);
        let (a, b) = c.range();
        for k in 0..=100 {
            let p = c.evaluate(a + (b - a) * k as f64 / 100.0).unwrap();
            assert!(((p - center).norm() - 0.25).abs() < 1e-14);
        }
    }

    #[test]
    fn invalid_curves_are_rejected() {
        let pts = vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0)];
        assert!(NurbsCurve::new(1, vec![0.0, 0.0, 1.0], pts.clone(), vec![1.0, 1.0]).is_err());
        assert!(NurbsCurve::new(1, vec![0.0, 0.0, 1.0, 1.0], pts.clone(), vec![1.0, -1.0]).is_err());
        assert!(NurbsCurve::new(1, vec![0.0, 0.5, 1.0, 1.0], pts.clone(), vec![1.0, 1.0]).is_err());
        assert!(NurbsCurve::new(2, vec![0.0; 5], pts, vec![1.0, 1.0]).is_err());
    }
}
