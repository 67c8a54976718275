//! Bernstein-basis polynomial tools on cells: approximation of implicit
//! functions, range bounds, restriction to lines and certified rootfinding.

mod bernstein1d;
mod bernstein2d;

pub use bernstein1d::{roots_in_interval, roots_with_scale, Bernstein1D};
pub use bernstein2d::{common_zeros, Bernstein2D};

use crate::error::{Error, Result};
use crate::geometry::{Axis, Cell, ImplicitConstraint};

/// Bernstein degree used for constraints that are not polynomials.
pub const DEFAULT_APPROXIMATION_DEGREE: usize = 3;

/// Default relative residual tolerance for polished roots.
pub const ROOT_TOL: f64 = 1e-12;

/// Bernstein approximation of a constraint on a cell, interpolating at the
/// Chebyshev tensor grid. Polynomials of coordinate degree `<= d`
/// are reproduced exactly.
pub fn to_bernstein(c: &ImplicitConstraint, cell: &Cell, d: usize) -> Result<Bernstein2D> {
    if d < 1 {
        return Err(Error::Domain("approximation degree must be at least 1".into()));
    }
    Ok(Bernstein2D::interpolate(|p| c.value(p), *cell, d))
}

/// Degree [`to_bernstein`] should use for `c`.
pub fn approximation_degree(c: &ImplicitConstraint) -> usize {
    c.natural_degree().unwrap_or(DEFAULT_APPROXIMATION_DEGREE)
}

pub fn restrict_to_line(b: &Bernstein2D, axis: Axis, value: f64) -> Result<Bernstein1D> {
    b.restrict(axis, value)
}

pub fn coefficient_range(b: &Bernstein2D) -> (f64, f64) {
    b.range()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point2;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn circle_is_reproduced_exactly() {
        let c = ImplicitConstraint::circle(Point2::new(0.5, 0.5), 0.2, true);
        let cell = Cell::from_bounds(0.25, 0.5, 0.25, 0.5);
        let b = to_bernstein(&c, &cell, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..25 {
            let p = Point2::new(rng.gen_range(0.25..0.5), rng.gen_range(0.25..0.5));
            assert!((b.eval(p) - c.value(p)).abs() <= 1e-12);
        }
    }

    #[test]
    fn smooth_function_interpolation_error() {
        let c = ImplicitConstraint::function(
            "sin",
            |p| (2.0 * std::f64::consts::PI * p.x).sin(),
            |p| Point2::new(2.0 * std::f64::consts::PI * (2.0 * std::f64::consts::PI * p.x).cos(), 0.0),
        );
        let cell = Cell::from_bounds(0.0, 0.25, 0.0, 0.25);
        let b = to_bernstein(&c, &cell, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let p = Point2::new(rng.gen_range(0.0..0.25), rng.gen_range(0.0..0.25));
            assert!((b.eval(p) - c.value(p)).abs() <= 1e-5);
        }
    }

    #[test]
    fn circle_restricted_at_center_abscissa() {
        let c = ImplicitConstraint::circle(Point2::new(0.5, 0.5), 0.2, true);
        let b = to_bernstein(&c, &Cell::from_bounds(0.0, 1.0, 0.0, 1.0), 2).unwrap();
        let line = restrict_to_line(&b, Axis::X, 0.5).unwrap();
        let r = roots_in_interval(&line, ROOT_TOL).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0] - 0.3).abs() < 1e-12 && (r[1] - 0.7).abs() < 1e-12);
    }

    #[test]
    fn constant_restricts_to_constant() {
        let c = ImplicitConstraint::polynomial(1, vec![3.0, 0.0, 0.0, 0.0]).unwrap();
        let b = to_bernstein(&c, &Cell::from_bounds(0.0, 1.0, 0.0, 1.0), 1).unwrap();
        let (lo, hi) = coefficient_range(&b);
        assert!((lo - 3.0).abs() < 1e-14 && (hi - 3.0).abs() < 1e-14);
        let r = restrict_to_line(&b, Axis::Y, 0.3).unwrap();
        assert!(r.coeffs().iter().all(|&v| (v - 3.0).abs() < 1e-15));
    }

    #[test]
    fn far_cell_is_certified_outside() {
        let c = ImplicitConstraint::circle(Point2::new(0.5, 0.5), 0.2, true);
        let b = to_bernstein(&c, &Cell::from_bounds(0.0, 0.25, 0.25, 0.5), 2).unwrap();
        assert!(coefficient_range(&b).1 < 0.0);
    }

    #[test]
    fn degree_zero_is_rejected() {
        let c = ImplicitConstraint::half_plane(1.0, 0.0, 0.5, 1.0);
        assert!(to_bernstein(&c, &Cell::from_bounds(0.0, 1.0, 0.0, 1.0), 0).is_err());
    }
}
