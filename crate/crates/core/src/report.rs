//! CSV output. Reals are written with 17 significant digits so that files
//! round-trip exactly and can be compared byte for byte.

use std::io::{self, Write};

use crate::elasticity::BenchmarkRecord;
use crate::integration::{DomainRule, StudyRecord};

pub const AREA_HEADER: &str = "step,h,backend,q,value,reference,rel_error,n_points";
pub const ELASTICITY_HEADER: &str = "case,backend,p,h,n_dofs,n_quad_points,rel_l2_error,cond_estimate";
pub const POINTS_HEADER: &str = "x,y,w,cell_i,cell_j";

/// `x` in scientific notation with 17 significant digits.
pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_area_csv<W: Write>(out: &mut W, records: &[StudyRecord]) -> io::Result<()> {
    writeln!(out, "{AREA_HEADER}")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.step,
            real(r.h),
            r.backend,
            r.q,
            real(r.value),
            real(r.reference),
            real(r.rel_error),
            r.n_points
        )?;
    }
    Ok(())
}

pub fn write_elasticity_csv<W: Write>(out: &mut W, records: &[BenchmarkRecord]) -> io::Result<()> {
    writeln!(out, "{ELASTICITY_HEADER}")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.case,
            r.backend,
            r.p,
            real(r.h),
            r.n_dofs,
            r.n_quad_points,
            real(r.rel_l2_error),
            real(r.cond_estimate)
        )?;
    }
    Ok(())
}

/// Header plus one line per node, with the cell it belongs to.
pub fn write_points_csv<W: Write>(out: &mut W, rule: &DomainRule) -> io::Result<()> {
    writeln!(out, "{POINTS_HEADER}")?;
    write_points_rows(out, rule)
}

pub fn write_points_rows<W: Write>(out: &mut W, rule: &DomainRule) -> io::Result<()> {
    for c in &rule.cells {
        for n in rule.cell_rule(c) {
            writeln!(out, "{},{},{},{},{}", real(n.point.x), real(n.point.y), real(n.weight), c.i, c.j)?;
        }
    }
    Ok(())
}
