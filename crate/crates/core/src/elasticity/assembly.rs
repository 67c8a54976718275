use rayon::prelude::*;

use super::space::{BsplineSpace, DisplacementField};
use super::system::{solve_system, LinearSystem};
use super::Material;
use crate::error::{Error, Result};
use crate::gauss::GaussRule;
use crate::geometry::{InterfaceSpec, Point2, Vec2};
use crate::integration::{domain_quadrature, CellRange, DomainRule};
use crate::quad_implicit::QuadNode;

/// Body force or any other vector field of position.
pub type VectorField<'a> = &'a (dyn Fn(Point2) -> [f64; 2] + Sync);
/// Surface load as a function of position and outward unit normal.
pub type TractionField<'a> = &'a (dyn Fn(Point2, Vec2) -> [f64; 2] + Sync);

/// Outer edges of the background mesh.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeshEdge {
    Bottom,
    Right,
    Top,
    Left,
}

impl MeshEdge {
    pub const ALL: [MeshEdge; 4] = [MeshEdge::Bottom, MeshEdge::Right, MeshEdge::Top, MeshEdge::Left];

    pub fn normal(self) -> Vec2 {
        match self {
            MeshEdge::Bottom => Vec2::new(0.0, -1.0),
            MeshEdge::Right => Vec2::new(1.0, 0.0),
            MeshEdge::Top => Vec2::new(0.0, 1.0),
            MeshEdge::Left => Vec2::new(-1.0, 0.0),
        }
    }

    fn runs_along_x(self) -> bool {
        matches!(self, MeshEdge::Bottom | MeshEdge::Top)
    }
}

/// Basis functions that do not vanish on a mesh edge, in edge order.
pub fn edge_basis(space: &BsplineSpace, edge: MeshEdge) -> Vec<usize> {
    let (nx, ny) = (space.n_x(), space.n_y());
    match edge {
        MeshEdge::Bottom => (0..nx).map(|a| space.index(a, 0)).collect(),
        MeshEdge::Top => (0..nx).map(|a| space.index(a, ny - 1)).collect(),
        MeshEdge::Left => (0..ny).map(|b| space.index(0, b)).collect(),
        MeshEdge::Right => (0..ny).map(|b| space.index(nx - 1, b)).collect(),
    }
}

fn stiffness_block(m: &Material, ga: Vec2, gb: Vec2) -> [[f64; 2]; 2] {
    let (l, mu) = (m.lambda(), m.mu());
    [
        [(l + 2.0 * mu) * ga.x * gb.x + mu * ga.y * gb.y, l * ga.x * gb.y + mu * ga.y * gb.x],
        [l * ga.y * gb.x + mu * ga.x * gb.y, (l + 2.0 * mu) * ga.y * gb.y + mu * ga.x * gb.x],
    ]
}

/// Half-width of the stiffness band for interleaved dof numbering.
fn bandwidth(space: &BsplineSpace) -> usize {
    2 * (space.degree * space.n_x() + space.degree) + 1
}

struct ElementContribution {
    dofs: Vec<usize>,
    k: Vec<f64>,
    f: Vec<f64>,
}

/// Stiffness and body-force load over the nodes of `rule`. Element blocks
/// are computed in parallel and summed in cell order.
pub fn assemble(
    space: &BsplineSpace,
    rule: &DomainRule,
    m: &Material,
    body_force: Option<VectorField>,
) -> LinearSystem {
    let element = |r: &CellRange| -> Option<ElementContribution> {
        let nodes = rule.cell_rule(r);
        if nodes.is_empty() {
            return None;
        }
        let mut dofs = Vec::new();
        let mut k = Vec::new();
        let mut f = Vec::new();
        for node in nodes {
            let basis = space.eval_in_cell(r.i, r.j, node.point);
            if dofs.is_empty() {
                dofs = basis.iter().flat_map(|b| [2 * b.index, 2 * b.index + 1]).collect();
                k = vec![0.0; dofs.len() * dofs.len()];
                f = vec![0.0; dofs.len()];
            }
            let nl = dofs.len();
            let load = body_force.map(|b| b(node.point));
            for (a, ba) in basis.iter().enumerate() {
                for (b, bb) in basis.iter().enumerate() {
                    let blk = stiffness_block(m, ba.grad, bb.grad);
                    for (ci, row) in blk.iter().enumerate() {
                        for (cj, v) in row.iter().enumerate() {
                            k[(2 * a + ci) * nl + 2 * b + cj] += node.weight * v;
                        }
                    }
                }
                if let Some(l) = load {
                    f[2 * a] += node.weight * ba.value * l[0];
                    f[2 * a + 1] += node.weight * ba.value * l[1];
                }
            }
        }
        Some(ElementContribution { dofs, k, f })
    };
    let parts: Vec<Option<ElementContribution>> = rule.cells.par_iter().map(element).collect();

    let mut sys = LinearSystem::new(space.n_dofs(), bandwidth(space));
    for e in parts.into_iter().flatten() {
        let nl = e.dofs.len();
        for (a, &da) in e.dofs.iter().enumerate() {
            sys.load[da] += e.f[a];
            for (b, &db) in e.dofs.iter().enumerate() {
                sys.stiffness.add(da, db, e.k[a * nl + b]);
            }
        }
    }
    sys
}

/// Adds `∫ t · v` over a boundary rule carrying normals.
pub fn add_traction(sys: &mut LinearSystem, space: &BsplineSpace, rule: &DomainRule, traction: TractionField) {
    for r in &rule.cells {
        for k in r.start..r.end {
            let node = rule.rule.nodes[k];
            let t = traction(node.point, rule.rule.normals[k]);
            for b in space.eval_in_cell(r.i, r.j, node.point) {
                sys.load[2 * b.index] += node.weight * b.value * t[0];
                sys.load[2 * b.index + 1] += node.weight * b.value * t[1];
            }
        }
    }
}

/// `q`-point Gauss rule on a whole mesh edge, cell by cell, with the
/// outward normal of the mesh.
pub fn edge_rule(space: &BsplineSpace, edge: MeshEdge, q: usize) -> DomainRule {
    let mesh = &space.mesh;
    let g = GaussRule::new(q);
    let n = edge.normal();
    let count = if edge.runs_along_x() { mesh.nx } else { mesh.ny };
    let mut out = DomainRule::default();
    for c in 0..count {
        let (i, j) = match edge {
            MeshEdge::Bottom => (c, 0),
            MeshEdge::Top => (c, mesh.ny - 1),
            MeshEdge::Left => (0, c),
            MeshEdge::Right => (mesh.nx - 1, c),
        };
        let cell = mesh.cell(i, j);
        let start = out.rule.len();
        let pts: Vec<(Point2, f64)> = match edge {
            MeshEdge::Bottom => g.mapped(cell.x0, cell.x1).map(|(x, w)| (Point2::new(x, cell.y0), w)).collect(),
            MeshEdge::Top => g.mapped(cell.x0, cell.x1).map(|(x, w)| (Point2::new(x, cell.y1), w)).collect(),
            MeshEdge::Left => g.mapped(cell.y0, cell.y1).map(|(y, w)| (Point2::new(cell.x0, y), w)).collect(),
            MeshEdge::Right => g.mapped(cell.y0, cell.y1).map(|(y, w)| (Point2::new(cell.x1, y), w)).collect(),
        };
        for (point, weight) in pts {
            out.rule.nodes.push(QuadNode { point, weight });
            out.rule.normals.push(n);
        }
        out.cells.push(CellRange {
            i,
            j,
            start,
            end: out.rule.len(),
        });
    }
    out
}

/// Coefficients of the 1D L2 projection of `g` onto the trace space of an
/// edge, one per entry of [`edge_basis`].
pub fn project_edge_trace(space: &BsplineSpace, edge: MeshEdge, q: usize, g: &dyn Fn(Point2) -> f64) -> Result<Vec<f64>> {
    let p = space.degree;
    let along_x = edge.runs_along_x();
    let n = if along_x { space.n_x() } else { space.n_y() };
    let mut sys = LinearSystem::new(n, p);
    let rule = edge_rule(space, edge, q);
    for r in &rule.cells {
        let cell = if along_x { r.i } else { r.j };
        for node in rule.cell_rule(r) {
            let t = if along_x { node.point.x } else { node.point.y };
            let vals = space.eval_1d(along_x, cell, t);
            let gv = g(node.point);
            for (a, va) in vals.iter().enumerate() {
                sys.load[cell + a] += node.weight * va * gv;
                for (b, vb) in vals.iter().enumerate() {
                    sys.stiffness.add(cell + a, cell + b, node.weight * va * vb);
                }
            }
        }
    }
    Ok(solve_system(&sys)?.values)
}

/// Fixes component `comp` of every edge coefficient to the projection of
/// `g`. Returns the number of dofs fixed.
pub fn constrain_edge(
    sys: &mut LinearSystem,
    space: &BsplineSpace,
    edge: MeshEdge,
    comp: usize,
    q: usize,
    g: &dyn Fn(Point2) -> f64,
) -> Result<usize> {
    let coeffs = project_edge_trace(space, edge, q, g)?;
    let basis = edge_basis(space, edge);
    for (&b, c) in basis.iter().zip(coeffs) {
        sys.constrain(2 * b + comp, c);
    }
    Ok(basis.len())
}

/// Relative measure below which a basis function counts as cut away.
pub const SMALL_SUPPORT_RATIO: f64 = 1e-10;

/// Fixes to zero both components of every basis function whose support
/// inside the region is below [`SMALL_SUPPORT_RATIO`] of its full support.
/// Returns the number of basis functions removed.
pub fn eliminate_small_support(sys: &mut LinearSystem, space: &BsplineSpace, rule: &DomainRule) -> usize {
    let mesh = &space.mesh;
    let mut trimmed = vec![0.0; mesh.n_cells()];
    for r in &rule.cells {
        trimmed[r.j * mesh.nx + r.i] = rule.cell_rule(r).iter().map(|n| n.weight).sum();
    }
    let cell_area = mesh.hx() * mesh.hy();
    let mut removed = 0;
    for b in 0..space.dim() {
        let ((i0, i1), (j0, j1)) = space.support(b);
        let mut inside = 0.0;
        for j in j0..=j1 {
            for i in i0..=i1 {
                inside += trimmed[j * mesh.nx + i];
            }
        }
        let full = cell_area * ((i1 - i0 + 1) * (j1 - j0 + 1)) as f64;
        if inside < SMALL_SUPPORT_RATIO * full {
            removed += 1;
            for d in [2 * b, 2 * b + 1] {
                if sys.fixed[d].is_none() {
                    sys.constrain(d, 0.0);
                }
            }
        }
    }
    removed
}

/// `sqrt(∫ |u_h - u|² / ∫ |u|²)` over the nodes of `rule`.
pub fn relative_l2_error_on(
    space: &BsplineSpace,
    field: &DisplacementField,
    exact: VectorField,
    rule: &DomainRule,
) -> Result<f64> {
    let mut num = 0.0;
    let mut den = 0.0;
    for r in &rule.cells {
        for node in rule.cell_rule(r) {
            let uh = field.eval_in_cell(space, r.i, r.j, node.point);
            let u = exact(node.point);
            num += node.weight * ((uh[0] - u[0]).powi(2) + (uh[1] - u[1]).powi(2));
            den += node.weight * (u[0] * u[0] + u[1] * u[1]);
        }
    }
    if !(den > 0.0) {
        return Err(Error::Domain("exact field has zero L2 norm on the region".into()));
    }
    Ok((num / den).sqrt())
}

/// Relative L2 displacement error over the trimmed region, integrated with
/// order `q`.
pub fn relative_l2_error(
    space: &BsplineSpace,
    field: &DisplacementField,
    exact: VectorField,
    iface: &InterfaceSpec,
    q: usize,
) -> Result<f64> {
    let rule = domain_quadrature(&space.mesh, iface, q)?;
    relative_l2_error_on(space, field, exact, &rule)
}

/// Drops nodes lying on the outer boundary of the mesh; those belong to
/// mesh edges, which carry their own conditions.
pub fn without_mesh_boundary(space: &BsplineSpace, rule: DomainRule) -> DomainRule {
    let m = &space.mesh;
    let tol = m.tol_geo();
    let (x0, x1) = (m.origin.x, m.origin.x + m.width);
    let (y0, y1) = (m.origin.y, m.origin.y + m.height);
    let on_boundary =
        |p: Point2| (p.x - x0).abs() <= tol || (p.x - x1).abs() <= tol || (p.y - y0).abs() <= tol || (p.y - y1).abs() <= tol;
    let mut out = DomainRule::default();
    for r in &rule.cells {
        let start = out.rule.len();
        for k in r.start..r.end {
            let node = rule.rule.nodes[k];
            if !on_boundary(node.point) {
                out.rule.nodes.push(node);
                out.rule.normals.push(rule.rule.normals[k]);
            }
        }
        out.cells.push(CellRange {
            start,
            end: out.rule.len(),
            ..*r
        });
    }
    out
}
