//! C interface to the cutcell library.
//!
//! Interfaces and rules are opaque handles created by `cc_interface_from_*`
//! and `cc_*_quadrature`, and released with the matching `cc_*_free`. Every fallible function
//! returns a [`CcStatus`]; on failure a description is available from
//! [`cc_last_error`] on the same thread until the next failing call.
//! Panics never cross the boundary; they are reported as
//! `CC_STATUS_INTERNAL`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cutcell::elasticity::{run_benchmark, Benchmark};
use cutcell::geometry::{BackgroundMesh, InterfaceSpec, Point2};
use cutcell::integration::{domain_quadrature, interface_quadrature, Backend, Case, DomainRule};
use cutcell::interface_file::parse_interface;
use cutcell::Error;

/// Result of a call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CcStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An argument was out of range or a string was not valid UTF-8.
    InvalidArgument = 2,
    /// An interface description could not be parsed.
    Parse = 3,
    /// A case or description does not fit the requested backend.
    BackendMismatch = 4,
    /// Quadrature generation or a solve failed.
    Failure = 5,
    /// An output buffer is too small.
    BufferTooSmall = 6,
    /// A bug inside the library.
    Internal = 7,
}

/// A trimming interface.
pub struct CcInterface {
    spec: InterfaceSpec,
}

/// A quadrature rule over a trimmed mesh.
pub struct CcRule {
    rule: DomainRule,
}

/// Summary of one elasticity benchmark solve.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct CcBenchmarkResult {
    pub n_dofs: usize,
    pub n_quad_points: usize,
    pub rel_l2_error: f64,
    pub cond_estimate: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(CcStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Parse { .. } => CcStatus::Parse,
            Error::BackendMismatch(_) => CcStatus::BackendMismatch,
            Error::Domain(_) => CcStatus::InvalidArgument,
            _ => CcStatus::Failure,
        };
        Fail(status, e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(CcStatus::NullPointer, format!("{what} is null"))
}

fn invalid(message: String) -> Fail {
    Fail(CcStatus::InvalidArgument, message)
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> CcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CcStatus::Ok,
        Ok(Err(Fail(status, message))) => {
            set_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal error: {message}"));
            CcStatus::Internal
        }
    }
}

unsafe fn string<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| invalid(format!("{what} is not valid UTF-8")))
}

unsafe fn writable<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> Result<T, Fail> {
    s.parse().map_err(Fail::from)
}

/// Message of the most recent failure on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds one of the built-in geometries (`"circle"`, `"plate-hole"`, ...)
/// for the backend `"implicit"` or `"parametric"`.
///
/// # Safety
/// `case_name` and `backend` must be null or NUL-terminated strings; `out`
/// must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn cc_interface_from_case(
    case_name: *const c_char,
    backend: *const c_char,
    out: *mut *mut CcInterface,
) -> CcStatus {
    guard(|| {
        let slot = writable(out, "out")?;
        *slot = ptr::null_mut();
        let case: Case = parse(string(case_name, "case")?)?;
        let backend: Backend = parse(string(backend, "backend")?)?;
        let spec = case.interface(backend)?;
        *slot = Box::into_raw(Box::new(CcInterface { spec }));
        Ok(())
    })
}

/// Parses a TOML interface description.
///
/// # Safety
/// `text` must be null or a NUL-terminated string; `out` must be null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn cc_interface_from_toml(text: *const c_char, out: *mut *mut CcInterface) -> CcStatus {
    guard(|| {
        let slot = writable(out, "out")?;
        *slot = ptr::null_mut();
        let file = parse_interface(string(text, "text")?)?;
        *slot = Box::into_raw(Box::new(CcInterface { spec: file.spec }));
        Ok(())
    })
}

/// Releases an interface. Null is ignored.
///
/// # Safety
/// `iface` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cc_interface_free(iface: *mut CcInterface) {
    if !iface.is_null() {
        drop(Box::from_raw(iface));
    }
}

/// Writes 1 to `inside` when `(x, y)` lies in the retained region, else 0.
///
/// # Safety
/// `iface` must be null or a live handle; `inside` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn cc_interface_contains(
    iface: *const CcInterface,
    x: f64,
    y: f64,
    inside: *mut i32,
) -> CcStatus {
    guard(|| {
        let iface = handle(iface, "interface")?;
        *writable(inside, "inside")? = i32::from(iface.spec.contains(Point2::new(x, y)));
        Ok(())
    })
}

unsafe fn build_rule(
    iface: *const CcInterface,
    h: f64,
    q: usize,
    out: *mut *mut CcRule,
    boundary: bool,
) -> CcStatus {
    guard(|| {
        let slot = writable(out, "out")?;
        *slot = ptr::null_mut();
        let iface = handle(iface, "interface")?;
        if q == 0 {
            return Err(invalid("quadrature order must be at least 1".into()));
        }
        let mesh = BackgroundMesh::unit_square_with_size(h)?;
        let rule = if boundary {
            interface_quadrature(&mesh, &iface.spec, q)?
        } else {
            domain_quadrature(&mesh, &iface.spec, q)?
        };
        *slot = Box::into_raw(Box::new(CcRule { rule }));
        Ok(())
    })
}

/// Area quadrature of the retained region on the unit square meshed with
/// cells of size `h`, with `q` Gauss points per direction.
///
/// # Safety
/// `iface` must be null or a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn cc_domain_quadrature(
    iface: *const CcInterface,
    h: f64,
    q: usize,
    out: *mut *mut CcRule,
) -> CcStatus {
    build_rule(iface, h, q, out, false)
}

/// Quadrature along the interface inside the unit square, with outward
/// normals.
///
/// # Safety
/// As for [`cc_domain_quadrature`].
#[no_mangle]
pub unsafe extern "C" fn cc_interface_quadrature(
    iface: *const CcInterface,
    h: f64,
    q: usize,
    out: *mut *mut CcRule,
) -> CcStatus {
    build_rule(iface, h, q, out, true)
}

/// Releases a rule. Null is ignored.
///
/// # Safety
/// `rule` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cc_rule_free(rule: *mut CcRule) {
    if !rule.is_null() {
        drop(Box::from_raw(rule));
    }
}

/// Number of nodes in a rule; 0 for null.
///
/// # Safety
/// `rule` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cc_rule_len(rule: *const CcRule) -> usize {
    rule.as_ref().map_or(0, |r| r.rule.len())
}

/// Sum of the weights of a rule.
///
/// # Safety
/// `rule` must be null or a live handle; `sum` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn cc_rule_weight_sum(rule: *const CcRule, sum: *mut f64) -> CcStatus {
    guard(|| {
        let rule = handle(rule, "rule")?;
        *writable(sum, "sum")? = rule.rule.rule.nodes.iter().map(|n| n.weight).sum();
        Ok(())
    })
}

/// Copies node coordinates and weights into caller buffers of length `len`.
/// `nx`/`ny` may be null when normals are not wanted; they are only filled
/// for interface rules.
///
/// # Safety
/// Non-null buffers must hold at least `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn cc_rule_nodes(
    rule: *const CcRule,
    x: *mut f64,
    y: *mut f64,
    w: *mut f64,
    nx: *mut f64,
    ny: *mut f64,
    len: usize,
) -> CcStatus {
    guard(|| {
        let rule = &handle(rule, "rule")?.rule.rule;
        let n = rule.nodes.len();
        if len < n {
            return Err(Fail(CcStatus::BufferTooSmall, format!("buffers hold {len} values, rule has {n} nodes")));
        }
        if x.is_null() || y.is_null() || w.is_null() {
            return Err(null("coordinate or weight buffer"));
        }
        let (x, y, w) = (
            std::slice::from_raw_parts_mut(x, n),
            std::slice::from_raw_parts_mut(y, n),
            std::slice::from_raw_parts_mut(w, n),
        );
        for (k, node) in rule.nodes.iter().enumerate() {
            x[k] = node.point.x;
            y[k] = node.point.y;
            w[k] = node.weight;
        }
        if !nx.is_null() && !ny.is_null() && rule.normals.len() == n {
            let (nx, ny) = (std::slice::from_raw_parts_mut(nx, n), std::slice::from_raw_parts_mut(ny, n));
            for (k, v) in rule.normals.iter().enumerate() {
                nx[k] = v.x;
                ny[k] = v.y;
            }
        }
        Ok(())
    })
}

/// Solves an elasticity benchmark (`"plate-hole"` or `"square-plate"`) with
/// spline degree `p`, mesh size `h` and quadrature order `q`.
///
/// # Safety
/// String arguments must be null or NUL-terminated; `result` must be null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn cc_elasticity_benchmark(
    case_name: *const c_char,
    backend: *const c_char,
    p: usize,
    h: f64,
    q: usize,
    result: *mut CcBenchmarkResult,
) -> CcStatus {
    guard(|| {
        let slot = writable(result, "result")?;
        let bench: Benchmark = parse(string(case_name, "case")?)?;
        let backend: Backend = parse(string(backend, "backend")?)?;
        let r = run_benchmark(bench, backend, p, h, q)?.record;
        *slot = CcBenchmarkResult {
            n_dofs: r.n_dofs,
            n_quad_points: r.n_quad_points,
            rel_l2_error: r.rel_l2_error,
            cond_estimate: r.cond_estimate,
        };
        Ok(())
    })
}
