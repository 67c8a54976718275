//! Cell classification, whole-domain quadrature and the area study drivers.
//!
//! Cells are independent, so the per-cell work runs on the rayon pool and is
//! collected back in row-major order. The resulting node lists do not depend
//! on the number of worker threads.

mod cases;
mod studies;

pub use cases::{line_interface, triangle_interface, Backend, Case, LINE_CASE_POSITION};
pub use studies::{
    area_convergence_study, default_sweep_steps, robustness_sweep, sweep_parameter, StudyRecord, SweepCase,
    SWEEP_MESH_SIZE,
};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{BackgroundMesh, Cell, InterfaceSpec, Point2};
use crate::quad_implicit::{
    cell_quadrature_implicit, classify_cell_implicit, interface_quadrature_implicit, QuadratureRule,
};
use crate::quad_parametric::{cell_quadrature_parametric, interface_quadrature_parametric, is_cut};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellStatus {
    Inside,
    Outside,
    Cut,
}

/// One status per cell, row-major (x fastest).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellGrid {
    pub nx: usize,
    pub ny: usize,
    pub status: Vec<CellStatus>,
}

impl CellGrid {
    pub fn get(&self, i: usize, j: usize) -> CellStatus {
        self.status[j * self.nx + i]
    }

    pub fn count(&self, s: CellStatus) -> usize {
        self.status.iter().filter(|&&x| x == s).count()
    }
}

/// Nodes `start..end` of a [`DomainRule`] belong to cell `(i, j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellRange {
    pub i: usize,
    pub j: usize,
    pub start: usize,
    pub end: usize,
}

/// A quadrature rule over the whole mesh together with the cell each node
/// came from. Every mesh cell has a range, possibly empty.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DomainRule {
    pub rule: QuadratureRule,
    pub cells: Vec<CellRange>,
}

impl DomainRule {
    pub fn len(&self) -> usize {
        self.rule.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rule.is_empty()
    }

    /// Nodes of one cell.
    pub fn cell_rule(&self, r: &CellRange) -> &[crate::quad_implicit::QuadNode] {
        &self.rule.nodes[r.start..r.end]
    }
}

/// Status of a single cell.
pub fn classify_cell(iface: &InterfaceSpec, cell: &Cell) -> Result<CellStatus> {
    match iface {
        InterfaceSpec::Implicit(r) => classify_cell_implicit(r, cell),
        InterfaceSpec::Parametric(r) => Ok(if is_cut(r, cell)? {
            CellStatus::Cut
        } else if r.contains(cell.center()) {
            CellStatus::Inside
        } else {
            CellStatus::Outside
        }),
    }
}

pub fn classify_cells(mesh: &BackgroundMesh, iface: &InterfaceSpec) -> Result<CellGrid> {
    let cells: Vec<Cell> = mesh.cells().collect();
    let status = cells
        .par_iter()
        .map(|c| classify_cell(iface, c).map_err(|e| e.in_cell(c.i, c.j)))
        .collect::<Result<Vec<_>>>()?;
    Ok(CellGrid {
        nx: mesh.nx,
        ny: mesh.ny,
        status,
    })
}

/// Area rule on one cell, dispatched on its status.
pub fn cell_quadrature(iface: &InterfaceSpec, cell: &Cell, q: usize) -> Result<QuadratureRule> {
    match classify_cell(iface, cell)? {
        CellStatus::Outside => Ok(QuadratureRule::empty()),
        CellStatus::Inside => Ok(QuadratureRule::tensor(cell, q)),
        CellStatus::Cut => match iface {
            InterfaceSpec::Implicit(r) => cell_quadrature_implicit(r, cell, q),
            InterfaceSpec::Parametric(r) => cell_quadrature_parametric(r, cell, q),
        },
    }
}

fn check_order(q: usize) -> Result<()> {
    if q < 1 {
        return Err(Error::Domain(format!("quadrature order must be at least 1, got {q}")));
    }
    Ok(())
}

fn gather(mesh: &BackgroundMesh, per_cell: impl Fn(&Cell) -> Result<QuadratureRule> + Sync) -> Result<DomainRule> {
    let cells: Vec<Cell> = mesh.cells().collect();
    let rules = cells
        .par_iter()
        .map(|c| per_cell(c).map_err(|e| e.in_cell(c.i, c.j)))
        .collect::<Result<Vec<_>>>()?;
    let mut out = DomainRule::default();
    for (c, r) in cells.iter().zip(rules) {
        let start = out.rule.len();
        out.rule.append(r);
        out.cells.push(CellRange {
            i: c.i,
            j: c.j,
            start,
            end: out.rule.len(),
        });
    }
    Ok(out)
}

/// Area quadrature over the retained part of the mesh, cell-major.
pub fn domain_quadrature(mesh: &BackgroundMesh, iface: &InterfaceSpec, q: usize) -> Result<DomainRule> {
    check_order(q)?;
    gather(mesh, |c| cell_quadrature(iface, c, q))
}

/// Length quadrature along the interface with outward unit normals,
/// cell-major like [`domain_quadrature`].
pub fn interface_quadrature(mesh: &BackgroundMesh, iface: &InterfaceSpec, q: usize) -> Result<DomainRule> {
    check_order(q)?;
    gather(mesh, |c| match iface {
        InterfaceSpec::Implicit(r) => interface_quadrature_implicit(r, c, q),
        InterfaceSpec::Parametric(r) => interface_quadrature_parametric(r, c, q),
    })
}

pub fn integrate(rule: &QuadratureRule, g: impl Fn(Point2) -> f64) -> f64 {
    rule.integrate(g)
}
