//! Plane-strain linear elasticity on a trimmed B-spline background mesh.
//!
//! The trial space is the full tensor-product spline space of the mesh. Only
//! the quadrature sees the trimmed region: stiffness and body loads are
//! integrated with the domain rule, tractions on trimmed boundaries with the
//! interface rule. Dirichlet data lives on mesh-aligned edges only and is
//! imposed strongly through a 1D L2 projection of the boundary trace. Basis
//! functions left with (almost) no support inside the region are removed.

mod assembly;
mod exact;
mod space;
mod system;

use std::fmt;
use std::str::FromStr;

pub use assembly::{
    add_traction, assemble, constrain_edge, edge_basis, edge_rule, eliminate_small_support, project_edge_trace,
    relative_l2_error, relative_l2_error_on, without_mesh_boundary, MeshEdge, TractionField, VectorField,
    SMALL_SUPPORT_RATIO,
};
pub use exact::{
    manufactured_body_force, manufactured_exact, manufactured_gradient, manufactured_stress, plate_hole_exact,
    plate_hole_gradient, plate_hole_stress, plate_hole_traction, stress_from_gradient, traction_from_stress, Gradient,
};
pub use space::{BasisValue, BsplineSpace, DisplacementField};
pub use system::{solve_system, BandMatrix, LinearSystem, SolveResult};

use crate::error::{Error, Result};
use crate::geometry::{BackgroundMesh, InterfaceSpec, Point2};
use crate::integration::{domain_quadrature, interface_quadrature, Backend, Case, DomainRule};

/// Isotropic material in plane strain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Material {
    pub young: f64,
    pub poisson: f64,
}

impl Material {
    pub fn new(young: f64, poisson: f64) -> Result<Self> {
        if !(young > 0.0 && young.is_finite()) {
            return Err(Error::Domain(format!("Young's modulus must be positive, got {young}")));
        }
        if !(0.0..0.5).contains(&poisson) {
            return Err(Error::Domain(format!("Poisson ratio must lie in [0, 0.5), got {poisson}")));
        }
        Ok(Material { young, poisson })
    }

    /// Shear modulus.
    pub fn mu(&self) -> f64 {
        self.young / (2.0 * (1.0 + self.poisson))
    }

    /// First Lamé parameter.
    pub fn lambda(&self) -> f64 {
        self.young * self.poisson / ((1.0 + self.poisson) * (1.0 - 2.0 * self.poisson))
    }

    /// Kolosov constant `3 - 4ν`.
    pub fn kolosov(&self) -> f64 {
        3.0 - 4.0 * self.poisson
    }
}

impl Default for Material {
    fn default() -> Self {
        Material {
            young: 1.0,
            poisson: 0.3,
        }
    }
}

/// Far-field traction along x and hole radius for the plate with a hole.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateHoleCase {
    pub traction: f64,
    pub radius: f64,
}

impl PlateHoleCase {
    pub fn new(traction: f64, radius: f64) -> Result<Self> {
        if !traction.is_finite() || !(radius > 0.0 && radius < 1.0) {
            return Err(Error::Domain(format!(
                "plate-with-hole needs finite traction and radius in (0, 1), got {traction}, {radius}"
            )));
        }
        Ok(PlateHoleCase { traction, radius })
    }
}

impl Default for PlateHoleCase {
    fn default() -> Self {
        PlateHoleCase {
            traction: 10.0,
            radius: 0.25,
        }
    }
}

/// The two elasticity problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Benchmark {
    /// Quarter plate with a hole at the origin: symmetry on the bottom and
    /// left edges, exact traction on the top and right edges, free hole.
    PlateHole,
    /// Unit square trimmed at `y = 0.75` with the manufactured sine field:
    /// Dirichlet on the bottom, left and right edges, exact traction on the
    /// trimming line.
    SquarePlate,
}

impl Benchmark {
    pub const ALL: [Benchmark; 2] = [Benchmark::PlateHole, Benchmark::SquarePlate];

    pub fn name(self) -> &'static str {
        self.case().name()
    }

    pub fn case(self) -> Case {
        match self {
            Benchmark::PlateHole => Case::PlateHole,
            Benchmark::SquarePlate => Case::SquarePlate,
        }
    }

    /// Exact displacement at `p`.
    pub fn exact(self, p: Point2, m: &Material) -> Result<[f64; 2]> {
        let (ux, uy) = match self {
            Benchmark::PlateHole => plate_hole_exact(p, m, &PlateHoleCase::default())?,
            Benchmark::SquarePlate => manufactured_exact(p),
        };
        Ok([ux, uy])
    }
}

impl fmt::Display for Benchmark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Benchmark {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Benchmark::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown elasticity case '{s}'")))
    }
}

/// Default quadrature order for a spline degree.
pub fn default_order(p: usize) -> usize {
    p + 2
}

/// Imposes the boundary conditions of a benchmark. Returns the number of
/// dofs fixed by Dirichlet data.
pub fn apply_boundary_conditions(
    sys: &mut LinearSystem,
    space: &BsplineSpace,
    bench: Benchmark,
    iface: &InterfaceSpec,
    m: &Material,
    q: usize,
) -> Result<usize> {
    let mut fixed = 0;
    match bench {
        Benchmark::PlateHole => {
            let c = PlateHoleCase::default();
            fixed += constrain_edge(sys, space, MeshEdge::Bottom, 1, q, &|_| 0.0)?;
            fixed += constrain_edge(sys, space, MeshEdge::Left, 0, q, &|_| 0.0)?;
            // the traction is smooth away from the hole, which never reaches
            // the loaded edges
            let load = |p: Point2, n: Point2| plate_hole_traction(p, n, m, &c).unwrap_or([0.0, 0.0]);
            for edge in [MeshEdge::Top, MeshEdge::Right] {
                add_traction(sys, space, &edge_rule(space, edge, q), &load);
            }
        }
        Benchmark::SquarePlate => {
            for edge in [MeshEdge::Bottom, MeshEdge::Left, MeshEdge::Right] {
                for comp in 0..2 {
                    let g = move |p: Point2| {
                        let u = manufactured_exact(p);
                        if comp == 0 {
                            u.0
                        } else {
                            u.1
                        }
                    };
                    fixed += constrain_edge(sys, space, edge, comp, q, &g)?;
                }
            }
            let rule = without_mesh_boundary(space, interface_quadrature(&space.mesh, iface, q)?);
            let load = |p: Point2, n: Point2| traction_from_stress(&manufactured_stress(p, m), n);
            add_traction(sys, space, &rule, &load);
        }
    }
    Ok(fixed)
}

/// One row of the elasticity results table.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkRecord {
    pub case: &'static str,
    pub backend: &'static str,
    pub p: usize,
    pub h: f64,
    /// Unknowns left after Dirichlet conditions and support elimination.
    pub n_dofs: usize,
    pub n_quad_points: usize,
    pub rel_l2_error: f64,
    pub cond_estimate: f64,
}

/// Everything produced by one benchmark solve.
#[derive(Debug, Clone)]
pub struct BenchmarkRun {
    pub record: BenchmarkRecord,
    pub space: BsplineSpace,
    pub field: DisplacementField,
    pub rule: DomainRule,
    pub n_constrained: usize,
    pub n_eliminated: usize,
}

/// Assembles and solves a benchmark with spline degree `p` on a mesh of
/// size `h`, integrating with order `q`.
pub fn run_benchmark(bench: Benchmark, backend: Backend, p: usize, h: f64, q: usize) -> Result<BenchmarkRun> {
    if q < p + 1 {
        return Err(Error::Domain(format!("quadrature order {q} is below p + 1 = {}", p + 1)));
    }
    let m = Material::default();
    let mesh = BackgroundMesh::unit_square_with_size(h)?;
    let space = BsplineSpace::new(mesh, p)?;
    let iface = bench.case().interface(backend)?;
    let rule = domain_quadrature(&mesh, &iface, q)?;

    let body = |pt: Point2| manufactured_body_force(pt, &m);
    let body_force: Option<VectorField> = match bench {
        Benchmark::PlateHole => None,
        Benchmark::SquarePlate => Some(&body),
    };
    let mut sys = assemble(&space, &rule, &m, body_force);
    let n_constrained = apply_boundary_conditions(&mut sys, &space, bench, &iface, &m, q)?;
    let n_eliminated = eliminate_small_support(&mut sys, &space, &rule);
    let solved = solve_system(&sys)?;
    let field = DisplacementField { coeffs: solved.values };

    for n in &rule.rule.nodes {
        bench.exact(n.point, &m)?;
    }
    let exact = |pt: Point2| bench.exact(pt, &m).unwrap_or([f64::NAN; 2]);
    let rel_l2_error = relative_l2_error_on(&space, &field, &exact, &rule)?;
    Ok(BenchmarkRun {
        record: BenchmarkRecord {
            case: bench.name(),
            backend: backend.name(),
            p,
            h,
            n_dofs: solved.n_free,
            n_quad_points: rule.len(),
            rel_l2_error,
            cond_estimate: solved.cond_estimate,
        },
        space,
        field,
        rule,
        n_constrained,
        n_eliminated,
    })
}

/// Least-squares slope of `log(error)` against `log(h)`.
pub fn convergence_order(records: &[BenchmarkRecord]) -> f64 {
    let pts: Vec<(f64, f64)> = records.iter().map(|r| (r.h.ln(), r.rel_l2_error.ln())).collect();
    let n = pts.len() as f64;
    let (mx, my) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x / n, b + y / n));
    let (sxy, sxx) = pts
        .iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + (x - mx) * (y - my), b + (x - mx) * (x - mx)));
    sxy / sxx
}
