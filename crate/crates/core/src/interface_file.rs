//! Reading interface descriptions from TOML documents.
//!
//! An implicit region:
//!
//! ```toml
//! type = "implicit"
//! reference_area = 0.0981747704   # optional
//!
//! [[constraint]]
//! kind = "halfplane"               # sign * (c - a x - b y) > 0
//! a = 1.0
//! b = 1.0
//! c = 0.3536
//! sign = -1.0
//!
//! [[constraint]]
//! kind = "circle"                  # sign * (r² - |p - (cx, cy)|²) > 0
//! cx = 0.1768
//! cy = 0.1768
//! r = 0.25
//! sign = 1.0
//!
//! [[constraint]]
//! kind = "poly"                    # sum coeffs[i * (degree + 1) + j] x^i y^j > 0
//! degree = 1
//! coeffs = [1.0, 0.0, -1.0, 0.0]
//! ```
//!
//! A parametric region is a closed loop of NURBS segments given in order;
//! `weights` defaults to all ones and `complement = true` keeps the outside
//! of the loop:
//!
//! ```toml
//! type = "parametric"
//!
//! [[segment]]
//! degree = 1
//! knots = [0.0, 0.0, 1.0, 2.0, 3.0, 3.0]
//! points = [[0.0, 0.0], [0.5, 0.0], [0.0, 0.5], [0.0, 0.0]]
//! ```

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::geometry::{
    CurveSegment, ImplicitConstraint, ImplicitRegion, InterfaceSpec, NurbsCurve, ParametricRegion, Point2,
};

/// A parsed interface document.
#[derive(Debug, Clone)]
pub struct InterfaceFile {
    pub spec: InterfaceSpec,
    pub reference_area: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum Document {
    Implicit {
        #[serde(default)]
        constraint: Vec<ConstraintDoc>,
        reference_area: Option<f64>,
    },
    Parametric {
        #[serde(default)]
        segment: Vec<SegmentDoc>,
        #[serde(default)]
        complement: bool,
        reference_area: Option<f64>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum ConstraintDoc {
    Circle {
        cx: f64,
        cy: f64,
        r: f64,
        #[serde(default = "one")]
        sign: f64,
    },
    Halfplane {
        a: f64,
        b: f64,
        c: f64,
        #[serde(default = "one")]
        sign: f64,
    },
    Poly {
        degree: usize,
        coeffs: Vec<f64>,
    },
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SegmentDoc {
    degree: usize,
    knots: Vec<f64>,
    points: Vec<[f64; 2]>,
    weights: Option<Vec<f64>>,
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].bytes().filter(|&b| b == b'\n').count() + 1
}

fn field_error(field: String, e: Error) -> Error {
    let message = match e {
        Error::Geometry(m) | Error::Domain(m) => m,
        other => other.to_string(),
    };
    Error::Parse {
        location: field,
        message,
    }
}

fn sign_of(field: &str, sign: f64) -> Result<f64> {
    if sign == 1.0 || sign == -1.0 {
        Ok(sign)
    } else {
        Err(Error::Parse {
            location: format!("{field}.sign"),
            message: format!("sign must be 1 or -1, got {sign}"),
        })
    }
}

/// Parses an interface document.
pub fn parse_interface(text: &str) -> Result<InterfaceFile> {
    let doc: Document = toml::from_str(text).map_err(|e| Error::Parse {
        location: match e.span() {
            Some(span) => format!("line {}", line_of(text, span.start)),
            None => "document".into(),
        },
        message: e.message().to_string(),
    })?;
    match doc {
        Document::Implicit {
            constraint,
            reference_area,
        } => {
            if constraint.is_empty() {
                return Err(Error::Parse {
                    location: "constraint".into(),
                    message: "an implicit region needs at least one [[constraint]]".into(),
                });
            }
            let mut out = Vec::with_capacity(constraint.len());
            for (k, c) in constraint.into_iter().enumerate() {
                let field = format!("constraint[{k}]");
                out.push(match c {
                    ConstraintDoc::Circle { cx, cy, r, sign } => {
                        let sign = sign_of(&field, sign)?;
                        if !(r > 0.0) {
                            return Err(Error::Parse {
                                location: format!("{field}.r"),
                                message: format!("radius must be positive, got {r}"),
                            });
                        }
                        ImplicitConstraint::circle(Point2::new(cx, cy), r, sign > 0.0)
                    }
                    ConstraintDoc::Halfplane { a, b, c, sign } => {
                        ImplicitConstraint::half_plane(a, b, c, sign_of(&field, sign)?)
                    }
                    ConstraintDoc::Poly { degree, coeffs } => ImplicitConstraint::polynomial(degree, coeffs)
                        .map_err(|e| field_error(format!("{field}.coeffs"), e))?,
                });
            }
            Ok(InterfaceFile {
                spec: ImplicitRegion::new(out).map_err(|e| field_error("constraint".into(), e))?.into(),
                reference_area,
            })
        }
        Document::Parametric {
            segment,
            complement,
            reference_area,
        } => {
            if segment.is_empty() {
                return Err(Error::Parse {
                    location: "segment".into(),
                    message: "a parametric region needs at least one [[segment]]".into(),
                });
            }
            let mut segs = Vec::with_capacity(segment.len());
            for (k, s) in segment.into_iter().enumerate() {
                let n = s.points.len();
                let weights = s.weights.unwrap_or_else(|| vec![1.0; n]);
                let points = s.points.iter().map(|p| Point2::new(p[0], p[1])).collect();
                let curve = NurbsCurve::new(s.degree, s.knots, points, weights)
                    .map_err(|e| field_error(format!("segment[{k}]"), e))?;
                segs.push(CurveSegment::full(curve));
            }
            let region = ParametricRegion::new(segs).map_err(|e| field_error("segment".into(), e))?;
            Ok(InterfaceFile {
                spec: if complement { region.complement() } else { region }.into(),
                reference_area,
            })
        }
    }
}

/// Reads and parses an interface document from disk.
pub fn load_interface(path: &Path) -> Result<InterfaceFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_interface(&text)
}
