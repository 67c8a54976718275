use cutcell::geometry::{
    BackgroundMesh, Cell, CurveSegment, ImplicitConstraint, ImplicitRegion, InterfaceSpec, NurbsCurve, ParametricRegion,
    Point2,
};
use cutcell::integration::{classify_cells, domain_quadrature, CellStatus};
use cutcell::polytools::{Bernstein1D, Bernstein2D};
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 48,
        ..ProptestConfig::default()
    }
}

fn shoelace(pts: &[Point2]) -> f64 {
    let n = pts.len();
    0.5 * (0..n).map(|k| pts[k].cross(pts[(k + 1) % n])).sum::<f64>()
}

fn polygon(pts: &[Point2]) -> ParametricRegion {
    let n = pts.len();
    ParametricRegion::new((0..n).map(|k| CurveSegment::line(pts[k], pts[(k + 1) % n])).collect()).unwrap()
}

fn implicit_polygon(pts: &[Point2]) -> ImplicitRegion {
    let n = pts.len();
    ImplicitRegion::new((0..n).map(|k| ImplicitConstraint::left_of(pts[k], pts[(k + 1) % n]).unwrap()).collect())
        .unwrap()
}

fn total(iface: &InterfaceSpec, n: usize, q: usize) -> f64 {
    domain_quadrature(&BackgroundMesh::unit_square(n).unwrap(), iface, q).unwrap().rule.total_weight()
}

/// Counter-clockwise triangle well inside the unit square with area at
/// least 0.01.
fn triangle() -> impl Strategy<Value = [Point2; 3]> {
    prop::array::uniform3((0.02f64..0.98, 0.02f64..0.98))
        .prop_map(|v| v.map(|(x, y)| Point2::new(x, y)))
        .prop_filter_map("degenerate", |mut t| {
            let a = shoelace(&t);
            if a.abs() < 0.01 {
                return None;
            }
            if a < 0.0 {
                t.swap(1, 2);
            }
            Some(t)
        })
}

fn disc() -> impl Strategy<Value = (Point2, f64)> {
    (0.2f64..0.8, 0.2f64..0.8, 0.05f64..0.19).prop_map(|(x, y, r)| (Point2::new(x, y), r))
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn bernstein_values_stay_in_the_coefficient_hull(
        coeffs in prop::collection::vec(-10.0f64..10.0, 1..9),
        t in 0.0f64..=1.0,
    ) {
        let b = Bernstein1D::new(coeffs.clone(), -0.5, 1.5).unwrap();
        let v = b.eval(-0.5 + 2.0 * t);
        let lo = coeffs.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = coeffs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(v >= lo - 1e-12 && v <= hi + 1e-12);
    }

    #[test]
    fn bivariate_hull_bounds_values(
        coeffs in prop::collection::vec(-5.0f64..5.0, 16),
        x in 0.0f64..=1.0,
        y in 0.0f64..=1.0,
    ) {
        let cell = Cell::from_bounds(0.25, 0.5, 0.0, 0.125);
        let b = Bernstein2D::new(3, 3, coeffs, cell).unwrap();
        let (lo, hi) = b.range();
        let v = b.eval(Point2::new(0.25 + 0.25 * x, 0.125 * y));
        prop_assert!(v >= lo - 1e-12 && v <= hi + 1e-12);
    }

    #[test]
    fn planted_roots_are_found(mut roots in prop::collection::vec(0.05f64..0.95, 1..6)) {
        roots.sort_by(f64::total_cmp);
        prop_assume!(roots.windows(2).all(|w| w[1] - w[0] > 0.02));
        let f = |t: f64| roots.iter().map(|r| t - r).product::<f64>();
        let b = Bernstein1D::interpolate(f, 0.0, 1.0, roots.len()).unwrap();
        let found = b.roots(1e-14).unwrap();
        prop_assert_eq!(found.len(), roots.len(), "{:?} vs {:?}", found, roots);
        for (a, r) in found.iter().zip(&roots) {
            prop_assert!((a - r).abs() < 1e-10, "{} vs {}", a, r);
        }
    }

    #[test]
    fn interpolation_reproduces_polynomials(
        coeffs in prop::collection::vec(-2.0f64..2.0, 16),
        x in 0.0f64..=1.0,
        y in 0.0f64..=1.0,
    ) {
        let f = |p: Point2| {
            let mut s = 0.0;
            for i in 0..4 {
                for j in 0..4 {
                    s += coeffs[4 * i + j] * p.x.powi(i as i32) * p.y.powi(j as i32);
                }
            }
            s
        };
        let cell = Cell::from_bounds(0.5, 0.75, 0.25, 0.5);
        let b = Bernstein2D::interpolate(f, cell, 3);
        let p = Point2::new(0.5 + 0.25 * x, 0.25 + 0.25 * y);
        prop_assert!((b.eval(p) - f(p)).abs() < 1e-11);
    }

    #[test]
    fn triangles_are_integrated_exactly(t in triangle(), n in 1usize..9) {
        let exact = shoelace(&t);
        let imp: InterfaceSpec = implicit_polygon(&t).into();
        let par: InterfaceSpec = polygon(&t).into();
        for iface in [imp, par] {
            let area = total(&iface, n, 2);
            prop_assert!((area - exact).abs() <= 1e-10 * exact, "{}: {} vs {}", iface.backend_name(), area, exact);
        }
    }

    #[test]
    fn region_and_complement_tile_the_square(t in triangle(), n in 1usize..7) {
        let inside = polygon(&t);
        let sum = total(&inside.clone().into(), n, 2) + total(&inside.complement().into(), n, 2);
        prop_assert!((sum - 1.0).abs() < 1e-12, "{}", sum);
    }

    #[test]
    fn implicit_sign_flip_conserves_area((c, r) in disc(), n in 1usize..9, q in 1usize..6) {
        let keep = ImplicitRegion::single(ImplicitConstraint::circle(c, r, true));
        let drop = ImplicitRegion::single(ImplicitConstraint::circle(c, r, false));
        let sum = total(&keep.into(), n, q) + total(&drop.into(), n, q);
        prop_assert!((sum - 1.0).abs() < 1e-12, "{}", sum);
    }

    #[test]
    fn nodes_lie_in_the_region_and_their_cell((c, r) in disc(), n in 2usize..9, q in 1usize..5) {
        let imp: InterfaceSpec = ImplicitRegion::single(ImplicitConstraint::circle(c, r, true)).into();
        let par: InterfaceSpec = ParametricRegion::new(vec![CurveSegment::full(NurbsCurve::circle(c, r).unwrap())]).unwrap().into();
        let mesh = BackgroundMesh::unit_square(n).unwrap();
        for iface in [imp, par] {
            let rule = domain_quadrature(&mesh, &iface, q).unwrap();
            for range in &rule.cells {
                let cell = mesh.cell(range.i, range.j);
                for node in rule.cell_rule(range) {
                    prop_assert!(node.weight > 0.0);
                    prop_assert!(cell.contains(node.point, 1e-14));
                    prop_assert!(node.point.dist(c) <= r * (1.0 + 1e-9), "{:?}", node.point);
                }
            }
        }
    }

    #[test]
    fn classification_agrees_with_sampling((c, r) in disc(), n in 2usize..12) {
        let imp: InterfaceSpec = ImplicitRegion::single(ImplicitConstraint::circle(c, r, true)).into();
        let par: InterfaceSpec = ParametricRegion::new(vec![CurveSegment::full(NurbsCurve::circle(c, r).unwrap())]).unwrap().into();
        let mesh = BackgroundMesh::unit_square(n).unwrap();
        for iface in [imp, par] {
            let grid = classify_cells(&mesh, &iface).unwrap();
            for cell in mesh.cells() {
                let status = grid.get(cell.i, cell.j);
                if status == CellStatus::Cut {
                    continue;
                }
                for a in 0..8 {
                    for b in 0..8 {
                        let p = Point2::new(
                            cell.x0 + cell.width() * (a as f64 + 0.5) / 8.0,
                            cell.y0 + cell.height() * (b as f64 + 0.5) / 8.0,
                        );
                        let inside = p.dist(c) < r;
                        prop_assert_eq!(inside, status == CellStatus::Inside, "{} cell ({}, {})", iface.backend_name(), cell.i, cell.j);
                    }
                }
            }
        }
    }
}
