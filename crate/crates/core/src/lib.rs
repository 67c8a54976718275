//! Cut-cell quadrature on background meshes trimmed by implicit (level-set)
//! or parametric (NURBS) interfaces, and an immersed B-spline linear
//! elasticity solver built on top of it.
//!
//! The pipeline: a [`geometry::BackgroundMesh`] is trimmed by an
//! [`geometry::InterfaceSpec`]; [`integration::classify_cells`] sorts cells
//! into inside, outside and cut; uncut inside cells get tensor Gauss rules
//! and cut cells are handled by [`quad_implicit`] or [`quad_parametric`].
//! The resulting [`quad_implicit::QuadratureRule`] drives area studies and
//! the [`elasticity`] benchmarks.

pub mod bspline;
pub mod cli;
pub mod elasticity;
pub mod error;
pub mod gauss;
pub mod geometry;
pub mod integration;
pub mod interface_file;
pub mod polytools;
pub mod quad_implicit;
pub mod quad_parametric;
pub mod report;

pub use error::{Error, Result};
