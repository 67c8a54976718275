use std::f64::consts::FRAC_PI_4;

use rayon::prelude::*;

use super::cases::{line_interface, triangle_interface, Backend};
use super::domain_quadrature;
use crate::error::{Error, Result};
use crate::geometry::{BackgroundMesh, InterfaceSpec};

/// One row of an area study.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyRecord {
    pub step: usize,
    pub h: f64,
    /// The swept quantity: line displacement or triangle angle in radians.
    /// Equal to `h` in convergence studies.
    pub parameter: f64,
    pub backend: &'static str,
    pub q: usize,
    pub value: f64,
    pub reference: f64,
    /// Relative error, or the absolute error when `absolute_error` is set.
    pub rel_error: f64,
    pub absolute_error: bool,
    pub n_points: usize,
}

impl StudyRecord {
    fn new(step: usize, h: f64, parameter: f64, backend: &'static str, q: usize, value: f64, reference: f64, n: usize) -> Self {
        let diff = (value - reference).abs();
        let absolute_error = reference == 0.0;
        StudyRecord {
            step,
            h,
            parameter,
            backend,
            q,
            value,
            reference,
            rel_error: if absolute_error { diff } else { diff / reference.abs() },
            absolute_error,
            n_points: n,
        }
    }
}

fn area_on(mesh: &BackgroundMesh, iface: &InterfaceSpec, q: usize) -> Result<(f64, usize)> {
    let r = domain_quadrature(mesh, iface, q)?;
    Ok((r.rule.total_weight(), r.len()))
}

/// Area of a fixed region on unit-square meshes of the given sizes.
pub fn area_convergence_study(
    iface: &InterfaceSpec,
    reference_area: f64,
    h_list: &[f64],
    q: usize,
) -> Result<Vec<StudyRecord>> {
    h_list
        .par_iter()
        .enumerate()
        .map(|(step, &h)| {
            let run = || -> Result<StudyRecord> {
                let mesh = BackgroundMesh::unit_square_with_size(h)?;
                let (value, n) = area_on(&mesh, iface, q)?;
                Ok(StudyRecord::new(step, h, h, iface.backend_name(), q, value, reference_area, n))
            };
            run().map_err(|e| Error::Study {
                step,
                source: Box::new(e),
            })
        })
        .collect()
}

/// Geometry moved through a sequence of positions on a fixed mesh.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepCase {
    /// Vertical line starting at `x = 0.5`, keeping `x` below it, moved to
    /// the right in equal steps up to the domain edge.
    Line,
    /// Triangle apex turned clockwise from 0° to 45°.
    Triangle,
}

/// Mesh size used by the sweeps.
pub const SWEEP_MESH_SIZE: f64 = 0.25;

pub fn default_sweep_steps(case: SweepCase) -> usize {
    match case {
        SweepCase::Line => 101,
        SweepCase::Triangle => 46,
    }
}

/// Swept quantity at `step` of `steps`: the line displacement, or the
/// triangle angle in radians. Both end points are included.
pub fn sweep_parameter(case: SweepCase, step: usize, steps: usize) -> f64 {
    let t = step as f64 / (steps - 1) as f64;
    match case {
        SweepCase::Line => 0.5 * t,
        SweepCase::Triangle => FRAC_PI_4 * t,
    }
}

fn sweep_geometry(case: SweepCase, param: f64, backend: Backend) -> Result<(InterfaceSpec, f64)> {
    match case {
        SweepCase::Line => {
            let x = 0.5 + param;
            Ok((line_interface(x, backend)?, x))
        }
        SweepCase::Triangle => Ok((triangle_interface(param, backend)?, 0.125 * param.cos())),
    }
}

/// Runs every step of a sweep; the first failing step aborts the study with
/// its index.
pub fn robustness_sweep(case: SweepCase, steps: usize, q: usize, backend: Backend) -> Result<Vec<StudyRecord>> {
    if steps < 2 {
        return Err(Error::Domain(format!("a sweep needs at least 2 steps, got {steps}")));
    }
    let mesh = BackgroundMesh::unit_square_with_size(SWEEP_MESH_SIZE)?;
    (0..steps)
        .into_par_iter()
        .map(|step| {
            let param = sweep_parameter(case, step, steps);
            let run = || -> Result<StudyRecord> {
                let (iface, reference) = sweep_geometry(case, param, backend)?;
                let (value, n) = area_on(&mesh, &iface, q)?;
                Ok(StudyRecord::new(step, SWEEP_MESH_SIZE, param, backend.name(), q, value, reference, n))
            };
            run().map_err(|e| Error::Study {
                step,
                source: Box::new(e),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integration::Case;

    #[test]
    fn line_convergence_is_exact() {
        for b in Backend::ALL {
            let iface = line_interface(0.37, b).unwrap();
            let recs = area_convergence_study(&iface, 0.37, &[0.25, 0.125, 0.0625], 2).unwrap();
            assert_eq!(recs.len(), 3);
            for r in &recs {
                assert!(r.rel_error <= 1e-12, "{b:?} h={} err={}", r.h, r.rel_error);
            }
        }
    }

    #[test]
    fn circle_errors_decrease() {
        for b in Backend::ALL {
            let iface = Case::Circle.interface(b).unwrap();
            let recs =
                area_convergence_study(&iface, Case::Circle.reference_area(), &[0.25, 0.125, 0.0625], 3).unwrap();
            assert!(recs.windows(2).all(|w| w[1].rel_error < w[0].rel_error), "{b:?}");
            assert!(recs.windows(2).all(|w| w[1].n_points > w[0].n_points));
        }
    }

    #[test]
    fn sweep_hits_mesh_line_and_45_degrees() {
        assert_eq!(sweep_parameter(SweepCase::Line, 50, 101), 0.25);
        assert!((sweep_parameter(SweepCase::Triangle, 45, 46) - FRAC_PI_4).abs() < 1e-16);
        for b in Backend::ALL {
            let recs = robustness_sweep(SweepCase::Line, 5, 2, b).unwrap();
            assert_eq!(recs.len(), 5);
            assert!(recs.iter().all(|r| r.rel_error <= 1e-12), "{b:?}");
            let tri = robustness_sweep(SweepCase::Triangle, 2, 1, b).unwrap();
            assert!((tri[0].value - 0.125).abs() <= 1e-12 * 0.125);
            assert!((tri[1].value - 0.125 * FRAC_PI_4.cos()).abs() <= 1e-10 * tri[1].reference);
        }
    }

    #[test]
    fn zero_reference_uses_absolute_error() {
        let r = StudyRecord::new(0, 0.5, 0.5, "implicit", 2, 1e-3, 0.0, 4);
        assert!(r.absolute_error);
        assert_eq!(r.rel_error, 1e-3);
    }

    #[test]
    fn short_sweep_is_rejected() {
        assert!(robustness_sweep(SweepCase::Line, 1, 2, Backend::Implicit).is_err());
    }
}
